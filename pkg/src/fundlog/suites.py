"""Exhaustive verification suites run by ``fundlog verify``.

Each suite enumerates its instances deterministically and reports, per named
check, how many instances were tested, how many failed and the first few
failing witnesses. Timings live in a separate block so the rest of a report is
byte-identical across runs with the same configuration.
"""

from __future__ import annotations

import itertools
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Callable, Iterable, Iterator

from . import constructions, duality, frames, lattice, modal, morphisms
from .logic import parse
from .logic.prover import formula_universe, saturate
from .logic.semantics import frame_consequence

MAX_WITNESSES = 3

GT_POOL = (
    "p | ~p",
    "~p | ~~p",
    "~(p & q) | ~~p",
    "~(p & (q | r)) | ((p & q) | (p & r))",
    "~~(p | ~p)",
    "~(p | q) | p | q",
)


@dataclass(frozen=True)
class RunConfig:
    """Bounds for a suite run. ``None`` bounds fall back to each suite's own
    default (the size at which its acceptance run is specified)."""

    max_frame_size: int | None = None
    max_lattice_size: int | None = None
    budget: int = 10**6
    depth: int = 2
    workers: int = 1
    seed: int = 0
    samples: int = 200

    def __post_init__(self):
        for name in ("max_frame_size", "max_lattice_size"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"{name} must be positive")
        if self.budget < 1 or self.depth < 0 or self.workers < 1 or self.samples < 1:
            raise ValueError("bounds must be positive")

    def frames(self, default: int) -> int:
        return self.max_frame_size if self.max_frame_size is not None else default

    def lattices(self, default: int) -> int:
        return self.max_lattice_size if self.max_lattice_size is not None else default


def workers_from_env(default: int = 1) -> int:
    raw = os.environ.get("FUNDLOG_WORKERS")
    if not raw:
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        return default


# Checks yield (check name, witness or None); instances are enumerated afresh
# inside each worker and sharded by position.
Check = Callable[[object, RunConfig], Iterable[tuple[str, object]]]


@dataclass(frozen=True)
class Suite:
    name: str
    description: str
    instances: Callable[[RunConfig], Iterator]
    check: Check
    bounds: Callable[[RunConfig], dict]


def _tally(suite: Suite, cfg: RunConfig, shard: int, shards: int) -> dict:
    out: dict[str, list] = {}
    for i, inst in enumerate(suite.instances(cfg)):
        if i % shards != shard:
            continue
        for name, witness in suite.check(inst, cfg):
            row = out.setdefault(name, [0, 0, []])
            row[0] += 1
            if witness is not None:
                row[1] += 1
                if len(row[2]) < MAX_WITNESSES:
                    row[2].append((i, witness))
    return out


def _run_shard(args):
    name, cfg, shard, shards = args
    return _tally(SUITES[name], cfg, shard, shards)


def run_suite(name: str, cfg: RunConfig | None = None) -> dict:
    """Run one suite; raises KeyError for an unknown name."""
    suite = SUITES[name]
    cfg = cfg or RunConfig()
    started = time.perf_counter()
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            parts = list(pool.map(_run_shard, [(name, cfg, k, cfg.workers) for k in range(cfg.workers)]))
    else:
        parts = [_tally(suite, cfg, 0, 1)]
    merged: dict[str, list] = {}
    order: list[str] = []
    for part in parts:
        for check, (n, bad, wit) in part.items():
            if check not in merged:
                merged[check] = [0, 0, []]
                order.append(check)
            merged[check][0] += n
            merged[check][1] += bad
            merged[check][2].extend(wit)
    checks = {}
    for check in sorted(order):
        n, bad, wit = merged[check]
        wit.sort(key=lambda w: w[0])
        checks[check] = {
            "ok": bad == 0,
            "instances": n,
            "failures": bad,
            "witnesses": [{"instance": i, "detail": w} for i, w in wit[:MAX_WITNESSES]],
        }
    return {
        "suite": name,
        "description": suite.description,
        "ok": all(c["ok"] for c in checks.values()),
        "bounds": suite.bounds(cfg),
        "config": {k: v for k, v in asdict(cfg).items() if k != "workers"},
        "checks": checks,
        "timings": {"seconds": round(time.perf_counter() - started, 3), "workers": cfg.workers},
    }


# -- shared enumerations (cached per process) --------------------------------


@lru_cache(maxsize=None)
def _fundamental_frames(n: int) -> tuple:
    return tuple(frames.frames_up_to(n, fundamental_only=True, up_to_iso=True))


@lru_cache(maxsize=None)
def _fundamental_lattices(n: int) -> tuple:
    return tuple(lattice.fundamental_lattices_up_to(n))


@lru_cache(maxsize=None)
def _canonical(n: int) -> tuple:
    return tuple(duality.canonical_frame(L) for L in _fundamental_lattices(n))


@lru_cache(maxsize=None)
def _modal_lattices(n: int) -> tuple:
    return tuple(modal.modal_lattices_up_to(n))


def _witness(v) -> object:
    """Verdict or report to a JSON-friendly witness, None when it passed."""
    if v is None:
        return None
    if isinstance(v, frames.Verdict):
        return None if v.ok else {"condition": v.condition, "witness": list(v.witness)}
    if isinstance(v, duality.Report):
        return None if v.ok else {k: c["witness"] for k, c in v.checks.items() if not c["ok"]}
    return v


def _flag(ok: bool, detail) -> object:
    return None if ok else detail


# -- suites ------------------------------------------------------------------


def _all_coserial(cfg):
    for n in range(1, cfg.frames(3) + 1):
        yield from frames.enumerate_frames(n, cap=max(n, 4))


def _facts(frame, cfg):
    for item, r in frames.check_facts(frame).items():
        yield f"item_{item}", _flag(r["ok"], {"frame": frames_json(frame), "witness": r["witness"]})


def frames_json(frame) -> dict:
    return {"points": list(frame.labels), "edges": [list(e) for e in frame.edges()]}


def _thm414_instances(cfg):
    for n in range(1, cfg.frames(4) + 1):
        yield from frames.enumerate_frames(n, cap=max(n, 4))


def _thm414(frame, cfg):
    lattice_ok = lattice.is_fundamental_negation(frame.positive.lattice, frame.positive.neg_table)
    frame_ok = bool(frames.is_fundamental(frame))
    yield "equivalence", _flag(lattice_ok == frame_ok, {
        "frame": frames_json(frame), "algebra_fundamental": lattice_ok, "frame_fundamental": frame_ok})


def _thmB7_instances(cfg):
    return iter(range(len(_fundamental_lattices(cfg.lattices(6)))))


def _thmB7(i, cfg):
    L = _fundamental_lattices(cfg.lattices(6))[i]
    cf = duality.canonical_frame(L)
    _, rep = duality.hat_embedding(L, cf)
    for name, c in rep.checks.items():
        yield name, _flag(c["ok"], {"lattice": repr(L), "witness": c["witness"]})
    yield "hat_onto_algebra", _flag(duality.hat_is_onto(L, cf), {"lattice": repr(L)})


def _frame_pairs(cfg, default=3):
    U = _fundamental_frames(cfg.frames(default))
    return itertools.product(range(len(U)), repeat=2)


def _each_f_morphism(pair, cfg, default=3):
    U = _fundamental_frames(cfg.frames(default))
    X, Y = U[pair[0]], U[pair[1]]
    return morphisms.f_morphisms(X, Y)


def _lemma212(pair, cfg):
    for h in _each_f_morphism(pair, cfg):
        tag = {"pair": list(pair), "map": list(h.table)}
        chi = morphisms.dual_hom(h)
        yield "inverse_image_is_hom", _flag(bool(lattice.check_hom(chi)), tag)
        yield "closure_commutes", _flag(morphisms.closure_commutes(h) is None, tag)


def _lattice_pairs(cfg, default=4):
    n = len(_fundamental_lattices(cfg.lattices(default)))
    return itertools.product(range(n), repeat=2)


def _each_hom(pair, cfg, default=4):
    Ls = _fundamental_lattices(cfg.lattices(default))
    cfs = _canonical(cfg.lattices(default))
    A, B = Ls[pair[0]], Ls[pair[1]]
    for f in lattice.enumerate_homs(A, B):
        yield f, cfs[pair[0]], cfs[pair[1]]


def _lemma213(pair, cfg):
    for f, cfA, cfB in _each_hom(pair, cfg):
        tag = {"pair": list(pair), "hom": list(f.table)}
        h = morphisms.dual_map(f, cfA, cfB)
        yield "dual_is_f_morphism", _flag(bool(morphisms.is_f_morphism(h)), tag)
        ok = all(h.preimage(cfA.hat(a)) == cfB.hat(f(a)) for a in range(f.source.size))
        yield "hat_naturality", _flag(ok, tag)


def _lemma32_35_instances(cfg):
    for p in _frame_pairs(cfg):
        yield ("frames", p)
    for p in _lattice_pairs(cfg):
        yield ("lattices", p)


def _lemma32_35(inst, cfg):
    kind, pair = inst
    if kind == "frames":
        for h in _each_f_morphism(pair, cfg):
            r = morphisms.duality_check(h)
            tag = {"pair": list(pair), "map": list(h.table)}
            for name, c in r["checks"].items():
                yield name, _flag(c["ok"], tag)
            cls = morphisms.classify(h)
            yield "hierarchy", _flag((not cls["strong_embedding"] or cls["embedding"])
                                     and (not cls["strongly_dense"] or cls["dense"]), tag)
    else:
        for f, cfA, cfB in _each_hom(pair, cfg):
            r = morphisms.duality_check(f, cfA, cfB)
            tag = {"pair": list(pair), "hom": list(f.table)}
            for name, c in r["checks"].items():
                yield name, _flag(c["ok"], tag)


def _lemma37(inst, cfg):
    kind, pair = inst
    if kind == "frames":
        for h in _each_f_morphism(pair, cfg):
            chi = morphisms.dual_hom(h)
            tag = {"pair": list(pair), "map": list(h.table)}
            if morphisms.is_embedding(h):
                yield "subframe_gives_image", _flag(chi.is_surjective(), tag)
            if morphisms.is_dense(h):
                yield "dense_image_gives_subalgebra", _flag(chi.is_injective(), tag)
    else:
        for f, cfA, cfB in _each_hom(pair, cfg):
            tag = {"pair": list(pair), "hom": list(f.table)}
            h = morphisms.dual_map(f, cfA, cfB)
            if f.is_injective():
                yield "subalgebra_gives_strongly_dense", _flag(bool(morphisms.is_strongly_dense(h)), tag)
            if f.is_surjective():
                yield "image_gives_strong_subframe", _flag(bool(morphisms.is_strong_embedding(h)), tag)


def _lemma39(pair, cfg):
    U = _fundamental_frames(cfg.frames(3))
    fam = [U[pair[0]], U[pair[1]]]
    r = constructions.verify_prodlma(fam)
    for name, c in r["checks"].items():
        yield name, _flag(c["ok"], {"pair": list(pair), "witness": c["witness"]})
    total, offsets = constructions.coproduct(fam)
    for i in range(2):
        h = constructions.injection(fam, i, total)
        ok = bool(morphisms.is_f_morphism(h)) and bool(morphisms.is_strong_embedding(h))
        yield "injection_strong_embedding", _flag(ok, {"pair": list(pair), "summand": i})
    yield "coproduct_fundamental", _flag(bool(frames.is_fundamental(total)), {"pair": list(pair)})


def _lemma42_instances(cfg):
    return iter(range(len(_fundamental_lattices(cfg.lattices(5)))))


def _lemma42(i, cfg):
    n = cfg.lattices(5)
    L, cf = _fundamental_lattices(n)[i], _canonical(n)[i]
    rep = duality.verify_canonical_extension(L, cf)
    for name, c in rep.checks.items():
        yield name, _flag(c["ok"], {"lattice": repr(L), "witness": c["witness"]})


@lru_cache(maxsize=None)
def gt_context(max_size: int, budget: int) -> constructions.GTContext:
    U = _fundamental_frames(max_size)
    return constructions.GTContext(U, budget=budget, max_size=max_size)


def _lemma44_instances(cfg):
    for k in range(len(GT_POOL) + 1):
        yield from itertools.combinations(range(len(GT_POOL)), k)


def _lemma44(subset, cfg):
    ctx = gt_context(cfg.frames(3), cfg.budget)
    spec = constructions.FrameClassSpec(ctx.universe, [parse(GT_POOL[i]) for i in subset])
    r = constructions.check_gt_closure(spec, ctx)
    axioms = [GT_POOL[i] for i in subset]
    for name, c in r["checks"].items():
        yield name, _flag(c["ok"] is True, {"axioms": axioms, "witnesses": c["witnesses"],
                                            "error": c.get("error")})


def _modal_frames(cfg):
    return modal.modal_frames_up_to(min(cfg.frames(3), modal.MODAL_FRAME_CAP))


def _lemma54_instances(cfg):
    fs, bases, _ = _modal_by_base(min(cfg.frames(3), modal.MODAL_FRAME_CAP))
    yield from (("frame", i) for i in range(len(fs)))
    yield from (("maps", p) for p in itertools.product(range(len(bases)), repeat=2))


@lru_cache(maxsize=None)
def _modal_by_base(n: int):
    fs = modal.modal_frames_up_to(n)
    bases, groups = [], []
    for f in fs:
        for k, b in enumerate(bases):
            if b is f.base:
                groups[k].append(f)
                break
        else:
            bases.append(f.base)
            groups.append([f])
    return fs, bases, groups


def _lemma54(inst, cfg):
    n = min(cfg.frames(3), modal.MODAL_FRAME_CAP)
    fs, bases, groups = _modal_by_base(n)
    kind, ref = inst
    if kind == "frame":
        f = fs[ref]
        tag = {"frame": ref, "m_edges": f.m_edges()}
        yield "aufm", _witness(modal.check_aufm(f.base, f.m))
        alg, negalg = f.base.positive, f.base.negative
        yield "box_keeps_positive", _flag(all(f.box_op(A) in alg.index for A in alg.members), tag)
        yield "box_keeps_negative", _flag(all(f.box_op(B) in negalg.index for B in negalg.members), tag)
        yield "diamond_neg_below_neg_box", _flag(
            all(f.diamond_op(f.base.neg_pos(A)) & ~f.base.neg_pos(f.box_op(A)) == 0 for A in alg.members), tag)
        # second summands: every modal frame on at most two points
        for k, g in enumerate(fs):
            if g.size > 2:
                break
            c, _ = modal.modal_coproduct([f, g])
            yield "coproduct_aufm", _flag(bool(modal.check_aufm(c.base, c.m)), {"summands": [ref, k]})
        return
    X, Y = bases[ref[0]], bases[ref[1]]
    for fm in morphisms.f_morphisms(X, Y):
        for src in groups[ref[0]]:
            for tgt in groups[ref[1]]:
                if modal._modal_conditions(fm, src.m, tgt.m):
                    h = modal.ModalFrameMap(src, tgt, fm.table)
                    h.__dict__["frame_map"] = fm
                    w = modal.preservation_failure(h)
                    yield "inverse_image_commutes", _flag(w is None, {"map": list(fm.table), "failure": w})


def _lemma55_instances(cfg):
    Ls = _modal_lattices(cfg.lattices(4))
    bases = []
    for L in Ls:
        if not any(b is L.base for b in bases):
            bases.append(L.base)
    return itertools.product(range(len(bases)), repeat=2)


@lru_cache(maxsize=None)
def _modal_lattice_groups(n: int):
    Ls = _modal_lattices(n)
    bases, groups = [], []
    for L in Ls:
        for k, b in enumerate(bases):
            if b is L.base:
                groups[k].append(L)
                break
        else:
            bases.append(L.base)
            groups.append([L])
    mcf = {id(L): modal.modal_canonical_frame(L) for L in Ls}
    return bases, groups, mcf


def _lemma55(pair, cfg):
    bases, groups, mcf = _modal_lattice_groups(cfg.lattices(4))
    homs = list(lattice.enumerate_homs(bases[pair[0]], bases[pair[1]]))
    for S in groups[pair[0]]:
        for T in groups[pair[1]]:
            for f in homs:
                if modal.check_modal_hom(f, S, T):
                    h = modal.modal_dual_map(f, S, T, mcf[id(S)], mcf[id(T)])
                    yield "dual_is_aufm_morphism", _witness(modal.is_aufm_morphism(h))


def is_normal(L: modal.ModalLattice) -> bool:
    """Diamond sends top to top, or the operators are the constant pair."""
    B = L.base
    return L.diamond[B.top] == B.top or all(v == B.top for v in L.box)


def _lemma58_instances(cfg):
    yield from (("lattice", i) for i in range(len(_modal_lattices(cfg.lattices(4)))))
    yield from (("frame", i) for i in range(len(_modal_frames(cfg))))


def _lemma58(inst, cfg):
    kind, i = inst
    if kind == "lattice":
        L = _modal_lattices(cfg.lattices(4))[i]
        tag = {"lattice": repr(L), "normal": is_normal(L)}
        mcf = modal.modal_canonical_frame(L)
        v = modal.check_aufm(mcf.modal.base, mcf.modal.m)
        yield "canonical_aufm", _flag(bool(v), {**tag, "aufm": _witness(v)})
        rep = modal.verify_modal_canonical_extension(L, mcf)
        for name, c in rep.checks.items():
            yield name, _flag(c["ok"], {**tag, "witness": c["witness"]})
    else:
        f = _modal_frames(cfg)[i]
        ML = modal.modal_positive_algebra(f)
        fe = modal.modal_filter_extension(f)
        v = modal.check_aufm(fe.modal.base, fe.modal.m)
        yield "filter_extension_aufm", _flag(bool(v), {"frame": i, "m_edges": f.m_edges(),
                                                       "normal": is_normal(ML), "aufm": _witness(v)})


def _soundness_instances(cfg):
    rng = random.Random(cfg.seed)
    letters = ["p", "q"]

    def gen(d):
        if d == 0 or rng.random() < 0.3:
            return rng.choice(letters + ["T", "F"])
        op = rng.choice(["~", "&", "|"])
        if op == "~":
            return f"~({gen(d - 1)})"
        return f"({gen(d - 1)} {op} {gen(d - 1)})"

    for _ in range(cfg.samples):
        yield f"{gen(2)} |- {gen(2)}"


def _soundness(text, cfg):
    from .logic.syntax import parse_sequent

    seq = parse_sequent(text)
    sat = saturate(formula_universe(seq, min(cfg.depth, 1), 80))
    U = _fundamental_frames(min(cfg.frames(3), 3))
    if sat.proves(seq.lhs, seq.rhs):
        bad = next((k for k, f in enumerate(U) if not frame_consequence(f, seq, cfg.budget)), None)
        yield "proved_sequents_valid", _flag(bad is None, {"sequent": text, "frame": bad})


def _b(**kw):
    return lambda cfg: {k: f(cfg) for k, f in kw.items()}


SUITES: dict[str, Suite] = {
    s.name: s
    for s in [
        Suite("facts24", "items (i)-(vii) of the basic frame facts on all co-serial frames",
              _all_coserial, _facts, _b(max_frame_size=lambda c: c.frames(3))),
        Suite("thm414", "positive algebra fundamental iff frame pseudo-reflexive and pseudo-symmetric",
              _thm414_instances, _thm414, _b(max_frame_size=lambda c: c.frames(4))),
        Suite("thmB7", "canonical frames are fundamental and the hat map embeds",
              _thmB7_instances, _thmB7, _b(max_lattice_size=lambda c: c.lattices(6))),
        Suite("lemma212", "inverse images of f-morphisms are homomorphisms commuting with closure",
              _frame_pairs, _lemma212, _b(max_frame_size=lambda c: c.frames(3))),
        Suite("lemma213", "duals of homomorphisms are f-morphisms natural in the hat map",
              _lattice_pairs, _lemma213, _b(max_lattice_size=lambda c: c.lattices(4))),
        Suite("lemma32-35", "injective/surjective versus dense/embedding and their strong variants",
              _lemma32_35_instances, _lemma32_35,
              _b(max_frame_size=lambda c: c.frames(3), max_lattice_size=lambda c: c.lattices(4))),
        Suite("lemma37", "subframes and dense images against images and subalgebras",
              _lemma32_35_instances, _lemma37,
              _b(max_frame_size=lambda c: c.frames(3), max_lattice_size=lambda c: c.lattices(4))),
        Suite("lemma39", "positive algebra of a coproduct is the product of the algebras",
              _frame_pairs, _lemma39, _b(max_frame_size=lambda c: c.frames(3))),
        Suite("lemma42", "double density, compactness and the negation as pi-extension",
              _lemma42_instances, _lemma42, _b(max_lattice_size=lambda c: c.lattices(5))),
        Suite("lemma44", "axiomatic classes are closed under subframes, dense images, coproducts "
              "and reflect filter extensions", _lemma44_instances, _lemma44,
              _b(max_frame_size=lambda c: c.frames(3), pool=lambda c: list(GT_POOL))),
        Suite("lemma54", "AUFM frames, coproducts, and inverse images of AUFM-morphisms",
              _lemma54_instances, _lemma54,
              _b(max_frame_size=lambda c: min(c.frames(3), modal.MODAL_FRAME_CAP))),
        Suite("lemma55", "duals of modal homomorphisms are AUFM-morphisms",
              _lemma55_instances, _lemma55, _b(max_lattice_size=lambda c: c.lattices(4))),
        Suite("lemma58", "modal canonical frames and filter extensions: AUFM and pi-extension",
              _lemma58_instances, _lemma58,
              _b(max_lattice_size=lambda c: c.lattices(4),
                 max_frame_size=lambda c: min(c.frames(3), modal.MODAL_FRAME_CAP))),
        Suite("soundness", "seeded random sequents proved by saturation hold on all small frames",
              _soundness_instances, _soundness, _b(samples=lambda c: c.samples, seed=lambda c: c.seed)),
    ]
}
