"""Command-line entry point: ``fundlog <subcommand> ...``.

Exit codes shared by every subcommand: 0 success or valid, 1 invalid input
structure or failed check, 2 unreadable file, bad JSON, bad shape or bad
arguments. ``derive`` adds 3 for Unknown.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import io
from .constructions import FrameClassSpec, GTContext, check_gt_closure, coproduct
from .duality import canonical_frame, filter_extension
from .errors import (
    BudgetExceeded,
    CapExceeded,
    FormatError,
    FundlogError,
    ParseError,
    SourceTargetMismatch,
    ValidationError,
)
from .frames import enumerate_frames, is_fundamental
from .lattice import check_hom, enumerate_lattices, enumerate_neg_maps
from .logic import Proved, Refuted, countermodel, derive, parse, parse_sequent
from .logic.syntax import render
from .modal import (
    ModalFrame,
    enumerate_modal_frames,
    modal_canonical_frame,
    modal_coproduct,
    modal_expansions,
    modal_filter_extension,
)
from .morphisms import dual_hom, dual_map, is_f_morphism
from .suites import SUITES, RunConfig, run_suite, workers_from_env

OK, INVALID, USAGE, UNKNOWN = 0, 1, 2, 3


class InputError(Exception):
    """Carries an exit-2 message up to :func:`main`."""


def _load(path: str):
    try:
        return io.read_json(path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not UTF-8 text ({exc.reason})") from None


def _emit(data, out: str | None) -> None:
    if out:
        io.write_json(data, out)
    else:
        sys.stdout.write(io.dumps(data) + "\n")


def _write_text(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")


def _error_payload(exc: ValidationError) -> dict:
    witness = exc.witness
    if isinstance(witness, tuple):
        witness = list(witness)
    return {"error": exc.kind, "message": str(exc), "witness": witness}


# -- check -------------------------------------------------------------------


def _check_frame(data, base_dir):
    frame = io.frame_from_json(data)
    fund = is_fundamental(frame)
    return True, {"coserial": True, "fundamental": fund.as_dict()}


def _check_lattice(data, base_dir):
    L = io.lattice_from_json(data)
    return True, {"size": L.size}


def _check_modal_lattice(data, base_dir):
    L = io.modal_lattice_from_json(data)
    return True, {"size": L.size}


def _check_modal_frame(data, base_dir):
    mf = io.modal_frame_from_json(data)
    return True, {"size": mf.size, "aufm": True}


def _check_morphism(data, base_dir):
    if io.morphism_kind(data, base_dir) == "lattice-hom":
        f = io.hom_from_json(data, base_dir)
        v = check_hom(f)
        detail = {"morphism": "lattice-hom", "equation": v.equation, "witness": list(v.args)}
        return v.ok, detail
    h = io.morphism_from_json(data, base_dir)
    v = is_f_morphism(h)
    return v.ok, {"morphism": "frame-map", **v.as_dict()}


_CHECKERS = {
    "frame": _check_frame,
    "lattice": _check_lattice,
    "modal-frame": _check_modal_frame,
    "modal-lattice": _check_modal_lattice,
    "morphism": _check_morphism,
}


def cmd_check(args) -> int:
    data = _load(args.path)
    kind = args.kind or io.detect_kind(data)
    base_dir = Path(args.path).parent
    try:
        valid, detail = _CHECKERS[kind](data, base_dir)
    except ValidationError as exc:
        valid, detail = False, _error_payload(exc)
    report = {"path": args.path, "kind": kind, "valid": valid, **detail}
    _emit(report, args.report)
    return OK if valid else INVALID


# -- construct ---------------------------------------------------------------


def _frame_like(path: str):
    data = _load(path)
    if "m_edges" in data:
        return io.modal_frame_from_json(data)
    return io.frame_from_json(data)


def _lattice_like(path: str):
    data = _load(path)
    if "box" in data or "diamond" in data:
        return io.modal_lattice_from_json(data)
    return io.lattice_from_json(data)


def _construct(verb: str, inputs: Sequence[str], polarity: str):
    """Returns (JSON result, DOT text or None)."""
    if verb == "algebra":
        frame = io.frame_from_json(_load(inputs[0]))
        return io.algebra_to_json(frame, polarity), io.frame_to_dot(frame, "algebra", _algebra_tags(frame, polarity))
    if verb == "canonical":
        L = _lattice_like(inputs[0])
        if hasattr(L, "box"):
            mcf = modal_canonical_frame(L)
            return _modal_canonical_json(mcf), io.frame_to_dot(mcf.modal, "canonical")
        cf = canonical_frame(L)
        return io.canonical_to_json(cf), io.frame_to_dot(cf.frame, "canonical")
    if verb == "filter-ext":
        X = _frame_like(inputs[0])
        if isinstance(X, ModalFrame):
            mcf = modal_filter_extension(X)
            return _modal_canonical_json(mcf), io.frame_to_dot(mcf.modal, "filter_extension")
        cf = filter_extension(X)
        return io.canonical_to_json(cf), io.frame_to_dot(cf.frame, "filter_extension")
    if verb == "coproduct":
        parts = [_frame_like(p) for p in inputs]
        if all(isinstance(p, ModalFrame) for p in parts):
            total, _ = modal_coproduct(parts)
            return io.modal_frame_to_json(total), io.frame_to_dot(total, "coproduct")
        if any(isinstance(p, ModalFrame) for p in parts):
            raise InputError("coproduct summands must be all plain or all modal frames")
        total, _ = coproduct(parts)
        return io.frame_to_json(total), io.frame_to_dot(total, "coproduct")
    if verb == "dual-hom":
        h = io.morphism_from_json(_load(inputs[0]), Path(inputs[0]).parent)
        f = dual_hom(h)
        return io.hom_to_json(f), None
    if verb == "dual-map":
        f = io.hom_from_json(_load(inputs[0]), Path(inputs[0]).parent)
        h = dual_map(f)
        return io.map_to_json(h), io.frame_to_dot(h.target, "dual_map")
    raise InputError(f"unknown construction {verb!r}")


def _algebra_tags(frame, polarity):
    alg = frame.positive if polarity == "positive" else frame.negative
    return {f"A{i}": A for i, A in enumerate(alg.members)}


def _modal_canonical_json(mcf) -> dict:
    out = io.modal_frame_to_json(mcf.modal)
    out["labels"] = mcf.canonical.label_dict()
    return out


_ARITY = {"algebra": 1, "canonical": 1, "filter-ext": 1, "dual-hom": 1, "dual-map": 1}


def cmd_construct(args) -> int:
    want = _ARITY.get(args.verb)
    if want is not None and len(args.inputs) != want:
        raise InputError(f"{args.verb} takes exactly {want} input file")
    if not args.inputs:
        raise InputError("coproduct needs at least one input file")
    try:
        result, dot = _construct(args.verb, args.inputs, args.polarity)
    except ValidationError as exc:
        _emit(_error_payload(exc), None)
        return INVALID
    _emit(result, args.output)
    if args.dot:
        if dot is None:
            raise InputError(f"{args.verb} has no DOT rendering")
        _write_text(dot, args.dot)
    return OK


# -- derive / countermodel ---------------------------------------------------


def _sequent(text: str):
    try:
        return parse_sequent(text)
    except ParseError as exc:
        raise InputError(str(exc)) from None


def _countermodel_files(frame, valuation, out_dir: str | None) -> dict:
    frame_json = io.modal_frame_to_json(frame) if isinstance(frame, ModalFrame) else io.frame_to_json(frame)
    val_json = io.valuation_to_json(frame, valuation)
    if out_dir:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        io.write_json(frame_json, d / "countermodel_frame.json")
        io.write_json(val_json, d / "countermodel_valuation.json")
        _write_text(io.frame_to_dot(frame, "countermodel", valuation), str(d / "countermodel.dot"))
    return {"frame": frame_json, "valuation": val_json}


def cmd_derive(args) -> int:
    seq = _sequent(args.sequent)
    result = derive(seq, depth=args.depth, max_size=args.max_size, budget=args.budget)
    report = {"sequent": f"{render(seq.lhs)} |- {render(seq.rhs)}", "status": result.status}
    if isinstance(result, Proved):
        report["trace"] = result.trace
        if args.out_dir:
            d = Path(args.out_dir)
            d.mkdir(parents=True, exist_ok=True)
            io.write_json(result.trace, d / "trace.json")
        code = OK
    elif isinstance(result, Refuted):
        report["countermodel"] = _countermodel_files(result.frame, result.valuation, args.out_dir)
        code = INVALID
    else:
        report["reason"] = result.reason
        code = UNKNOWN
    _emit(report, None)
    return code


def cmd_countermodel(args) -> int:
    """Exit 0 when a countermodel is found, 1 when none exists up to the bound."""
    seq = _sequent(args.sequent)
    cm = countermodel(seq, args.max_size, args.budget)
    report = {"sequent": f"{render(seq.lhs)} |- {render(seq.rhs)}", "found": cm is not None,
              "max_size": args.max_size}
    if cm is not None:
        report["size"] = cm.size
        report["countermodel"] = _countermodel_files(cm.frame, cm.valuation, args.out_dir)
    _emit(report, None)
    return OK if cm is not None else INVALID


# -- gt-check ----------------------------------------------------------------


def _read_axioms(path: str) -> list:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    if text.lstrip().startswith("["):
        raw = _load(path)
        if not all(isinstance(x, str) for x in raw):
            raise InputError(f"{path}: expected a JSON list of formula strings")
    else:
        raw = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    try:
        return [parse(x) for x in raw]
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_gt_check(args) -> int:
    from .frames import frames_up_to

    axioms = _read_axioms(args.axioms)
    universe = list(frames_up_to(args.max_size, fundamental_only=True, up_to_iso=True))
    ctx = GTContext(universe, budget=args.budget, max_size=args.max_size)
    result = check_gt_closure(FrameClassSpec(universe, axioms), ctx)
    report = {"axioms": [render(a) for a in axioms], "max_size": args.max_size, **result}
    _emit(report, args.report)
    if args.report:
        _emit({"ok": result["ok"], "class_size": result.get("class_size")}, None)
    return OK if result["ok"] else INVALID


# -- verify ------------------------------------------------------------------


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    if any(n not in SUITES for n in names):
        sys.stderr.write(f"unknown suite {args.suite!r}; known: all, {', '.join(SUITES)}\n")
        return USAGE
    workers = args.workers if args.workers is not None else workers_from_env()
    try:
        cfg = RunConfig(args.max_size, args.max_lattice, args.budget, args.depth, workers, args.seed, args.samples)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    reports = [run_suite(n, cfg) for n in names]
    data = reports[0] if len(reports) == 1 else {"ok": all(r["ok"] for r in reports), "suites": reports}
    _emit(data, args.report)
    if args.report:
        for r in reports:
            sys.stdout.write(f"{r['suite']}: {'PASS' if r['ok'] else 'FAIL'} ({r['timings']['seconds']} s)\n")
    return OK if all(r["ok"] for r in reports) else INVALID


# -- enumerate ---------------------------------------------------------------


def cmd_enumerate(args) -> int:
    n = args.size
    if args.what == "frames":
        items = [io.frame_to_json(f) for f in enumerate_frames(n, args.fundamental, args.up_to_iso)]
    elif args.what == "lattices":
        items = [io.lattice_to_json(L) for lat in enumerate_lattices(n) for L in enumerate_neg_maps(lat)]
    elif args.what == "modal-frames":
        items = [io.modal_frame_to_json(m) for m in enumerate_modal_frames(n, up_to_iso=args.up_to_iso)]
    else:
        items = [io.modal_lattice_to_json(L) for lat in enumerate_lattices(n)
                 for base in enumerate_neg_maps(lat) for L in modal_expansions(base)]
    _emit({"kind": args.what, "size": n, "count": len(items)} if args.count else items, args.output)
    return OK


# -- export-dot --------------------------------------------------------------


def cmd_export_dot(args) -> int:
    data = _load(args.path)
    kind = io.detect_kind(data)
    name = Path(args.path).stem
    try:
        if kind in ("lattice", "modal-lattice"):
            text = io.lattice_to_dot(io.lattice_from_json(data), name)
        elif kind == "frame":
            frame = io.frame_from_json(data)
            tags = _algebra_tags(frame, args.algebra) if args.algebra else None
            text = io.frame_to_dot(frame, name, tags)
        elif kind == "modal-frame":
            text = io.frame_to_dot(io.modal_frame_from_json(data), name)
        else:
            raise InputError("export-dot takes a frame or lattice file")
    except ValidationError as exc:
        _emit(_error_payload(exc), None)
        return INVALID
    if args.output:
        _write_text(text, args.output)
    else:
        sys.stdout.write(text)
    return OK


# -- parser ------------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fundlog", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="validate a structure file")
    s.add_argument("path")
    s.add_argument("--kind", choices=io.KINDS)
    s.add_argument("--report", help="write the report here instead of stdout")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("construct", help="build a derived structure")
    s.add_argument("verb", choices=["algebra", "canonical", "filter-ext", "coproduct", "dual-hom", "dual-map"])
    s.add_argument("inputs", nargs="*")
    s.add_argument("-o", "--output")
    s.add_argument("--dot", help="also write a DOT rendering here")
    s.add_argument("--polarity", choices=["positive", "negative"], default="positive")
    s.set_defaults(func=cmd_construct)

    for name, func, helptext in (("derive", cmd_derive, "prove or refute a sequent"),
                                 ("countermodel", cmd_countermodel, "search for a countermodel")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("sequent", help='e.g. "~~p |- p"')
        s.add_argument("--max-size", type=_positive, default=4)
        s.add_argument("--budget", type=_positive, default=10**6)
        s.add_argument("--out-dir", help="directory for trace or countermodel files")
        if name == "derive":
            s.add_argument("--depth", type=int, default=2)
        s.set_defaults(func=func)

    s = sub.add_parser("gt-check", help="closure checks for the class of an axiom set")
    s.add_argument("--axioms", required=True, help="one formula per line, or a JSON list")
    s.add_argument("--max-size", type=_positive, default=3)
    s.add_argument("--budget", type=_positive, default=10**6)
    s.add_argument("--report")
    s.set_defaults(func=cmd_gt_check)

    s = sub.add_parser("verify", help="run a verification suite")
    s.add_argument("suite", help=f"all, or one of: {', '.join(SUITES)}")
    s.add_argument("--max-size", type=_positive)
    s.add_argument("--max-lattice", type=_positive)
    s.add_argument("--budget", type=_positive, default=10**6)
    s.add_argument("--depth", type=int, default=2)
    s.add_argument("--workers", type=_positive, help="defaults to $FUNDLOG_WORKERS, else 1")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--samples", type=_positive, default=200)
    s.add_argument("--report")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("enumerate", help="list every structure of one size")
    s.add_argument("what", choices=["frames", "lattices", "modal-frames", "modal-lattices"])
    s.add_argument("--size", type=_positive, required=True)
    s.add_argument("--fundamental", action="store_true", help="frames: keep fundamental ones only")
    s.add_argument("--up-to-iso", action="store_true")
    s.add_argument("--count", action="store_true", help="print only the count")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("export-dot", help="render a frame or lattice file as DOT")
    s.add_argument("path")
    s.add_argument("-o", "--output")
    s.add_argument("--algebra", choices=["positive", "negative"], help="tag points with algebra members")
    s.set_defaults(func=cmd_export_dot)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE
    except (FormatError, ParseError, SourceTargetMismatch, CapExceeded, BudgetExceeded, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE
    except FundlogError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
