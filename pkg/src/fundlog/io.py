"""JSON readers and writers for every structure, plus DOT export."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping, Sequence

from .bits import members
from .errors import FormatError
from .frames import RelFrame, make_frame
from .lattice import FundamentalLattice, LatticeHom, lattice_from_pairs, validate_fundamental
from .modal import ModalFrame, ModalLattice, modal_frame, validate_modal_lattice
from .morphisms import FrameMap


def read_json(path: str | Path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_json(data: Any, path: str | Path) -> None:
    Path(path).write_text(dumps(data) + "\n", encoding="utf-8")


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False)


def _field(data: Mapping, key: str):
    if not isinstance(data, Mapping):
        raise FormatError("expected a JSON object")
    if key not in data:
        raise FormatError(f"missing field {key!r}")
    return data[key]


def _names(data: Mapping, key: str) -> list[str]:
    names = _field(data, key)
    if not isinstance(names, list) or not all(isinstance(x, str) for x in names):
        raise FormatError(f"{key!r} must be a list of strings")
    if len(set(names)) != len(names):
        raise FormatError(f"duplicate names in {key!r}")
    return names


def _pairs(data: Mapping, key: str, index: Mapping[str, int], default=None) -> list[tuple[int, int]]:
    raw = data.get(key, default) if default is not None else _field(data, key)
    out = []
    for pair in raw:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise FormatError(f"{key!r} entries must be pairs")
        out.append((_lookup(index, pair[0]), _lookup(index, pair[1])))
    return out


def _lookup(index: Mapping[str, int], name) -> int:
    try:
        return index[name]
    except (KeyError, TypeError):
        raise FormatError(f"unknown name {name!r}") from None


def _table(data: Mapping, key: str, index: Mapping[str, int]) -> list[int]:
    raw = _field(data, key)
    if not isinstance(raw, Mapping):
        raise FormatError(f"{key!r} must map names to names")
    names = list(index)
    missing = [a for a in names if a not in raw]
    if missing:
        raise FormatError(f"{key!r} has no entry for {missing[0]!r}")
    return [_lookup(index, raw[a]) for a in names]


# -- lattices ----------------------------------------------------------------


def lattice_from_json(data: Mapping) -> FundamentalLattice:
    elements = _names(data, "elements")
    index = {e: i for i, e in enumerate(elements)}
    pairs = [(elements[a], elements[b]) for a, b in _pairs(data, "leq", index)]
    lat = lattice_from_pairs(elements, pairs)
    return validate_fundamental(lat, _table(data, "neg", index))


def lattice_to_json(L: FundamentalLattice) -> dict:
    names = L.labels
    return {
        "elements": list(names),
        "leq": [[names[a], names[b]] for a, b in L.lattice.order_pairs() if a != b],
        "neg": {names[a]: names[L.neg[a]] for a in range(L.size)},
    }


def modal_lattice_from_json(data: Mapping) -> ModalLattice:
    base = lattice_from_json(data)
    index = {e: i for i, e in enumerate(base.labels)}
    return validate_modal_lattice(base, _table(data, "box", index), _table(data, "diamond", index))


def modal_lattice_to_json(L: ModalLattice) -> dict:
    names = L.base.labels
    out = lattice_to_json(L.base)
    out["box"] = {names[a]: names[L.box[a]] for a in range(L.size)}
    out["diamond"] = {names[a]: names[L.diamond[a]] for a in range(L.size)}
    return out


# -- frames ------------------------------------------------------------------


def frame_from_json(data: Mapping) -> RelFrame:
    points = _names(data, "points")
    index = {p: i for i, p in enumerate(points)}
    return make_frame(len(points), _pairs(data, "edges", index), points)


def frame_to_json(frame: RelFrame) -> dict:
    names = frame.labels
    return {"points": list(names), "edges": [[names[x], names[y]] for x, y in frame.edges()]}


def modal_frame_from_json(data: Mapping) -> ModalFrame:
    from .modal import validate_aufm

    base = frame_from_json(data)
    index = {p: i for i, p in enumerate(base.labels)}
    raw = modal_frame(base, _pairs(data, "m_edges", index))
    return validate_aufm(base, raw.m)


def modal_frame_to_json(mframe: ModalFrame) -> dict:
    names = mframe.labels
    out = frame_to_json(mframe.base)
    out["m_edges"] = [[names[x], names[y]] for x, y in mframe.m_edges()]
    return out


def canonical_to_json(cf) -> dict:
    """Frame JSON plus a "labels" block naming each point's filter and ideal."""
    out = frame_to_json(cf.frame)
    out["labels"] = cf.label_dict()
    return out


def algebra_to_json(frame: RelFrame, polarity: str = "positive") -> dict:
    alg = frame.positive if polarity == "positive" else frame.negative
    names = frame.labels
    members_ = [[names[i] for i in members(A)] for A in alg.members]
    return {
        "polarity": polarity,
        "size": len(alg),
        "members": members_,
        "neg": [alg.index[alg.neg(A)] for A in alg.members],
    }


# -- morphisms ---------------------------------------------------------------


def _endpoint(data: Mapping, key: str, base_dir: Path) -> Mapping:
    """An endpoint is either a path (relative to ``base_dir``) or inline JSON."""
    ref = _field(data, key)
    if isinstance(ref, Mapping):
        return ref
    if not isinstance(ref, str):
        raise FormatError(f"{key!r} must be a file name or an object")
    return read_json(base_dir / ref)


def _map_table(data: Mapping, source_names: Sequence[str], target_names: Sequence[str]) -> tuple[int, ...]:
    raw = _field(data, "map")
    if not isinstance(raw, Mapping):
        raise FormatError("'map' must map source names to target names")
    tindex = {p: i for i, p in enumerate(target_names)}
    table = []
    for p in source_names:
        if p not in raw:
            raise FormatError(f"'map' has no entry for {p!r}")
        table.append(_lookup(tindex, raw[p]))
    return tuple(table)


def morphism_kind(data: Mapping, base_dir: str | Path = ".") -> str:
    """"frame-map" or "lattice-hom", judged by the source endpoint."""
    return "lattice-hom" if "elements" in _endpoint(data, "source", Path(base_dir)) else "frame-map"


def morphism_from_json(data: Mapping, base_dir: str | Path = ".") -> FrameMap:
    """Frame map file; endpoint paths are resolved relative to ``base_dir``."""
    base_dir = Path(base_dir)
    source = frame_from_json(_endpoint(data, "source", base_dir))
    target = frame_from_json(_endpoint(data, "target", base_dir))
    return FrameMap(source, target, _map_table(data, source.labels, target.labels))


def hom_from_json(data: Mapping, base_dir: str | Path = ".") -> LatticeHom:
    """Lattice homomorphism file, same shape as a frame map file."""
    base_dir = Path(base_dir)
    source = lattice_from_json(_endpoint(data, "source", base_dir))
    target = lattice_from_json(_endpoint(data, "target", base_dir))
    return LatticeHom(source, target, _map_table(data, source.labels, target.labels))


def hom_to_json(f: LatticeHom) -> dict:
    """Self-contained: both lattices inline."""
    return {
        "source": lattice_to_json(f.source),
        "target": lattice_to_json(f.target),
        "map": {f.source.labels[a]: f.target.labels[b] for a, b in enumerate(f.table)},
    }


def map_to_json(h: FrameMap, source=None, target=None) -> dict:
    """Endpoints default to inline frame JSON; pass paths to reference files."""
    return {
        "source": source if source is not None else frame_to_json(h.source),
        "target": target if target is not None else frame_to_json(h.target),
        "map": {h.source.labels[x]: h.target.labels[y] for x, y in enumerate(h.table)},
    }


# -- DOT ---------------------------------------------------------------------


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def frame_to_dot(frame, name: str = "frame", annotations: Mapping[str, int] | None = None) -> str:
    """One node per point, a solid edge per R pair and a dashed edge per
    accessibility pair of a modal frame. ``annotations`` maps a caption to a
    point set; each point lists the captions of the sets it belongs to."""
    m = None
    if isinstance(frame, ModalFrame):
        frame, m = frame.base, frame.m
    names = frame.labels
    lines = [f"digraph {_quote(name)} {{"]
    for x, label in enumerate(names):
        tags = [cap for cap, A in (annotations or {}).items() if (A >> x) & 1]
        shown = label + (("\\n" + ", ".join(tags)) if tags else "")
        lines.append(f"  {_quote(label)} [label={_quote(shown)}];")
    for x, y in frame.edges():
        lines.append(f"  {_quote(names[x])} -> {_quote(names[y])};")
    if m is not None:
        for x, row in enumerate(m):
            for y in members(row):
                lines.append(f"  {_quote(names[x])} -> {_quote(names[y])} [style=dashed, label=\"M\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_to_dot(L: FundamentalLattice, name: str = "lattice") -> str:
    """Hasse diagram, with negation as dotted edges."""
    lat, names = L.lattice, L.labels
    lines = [f"digraph {_quote(name)} {{", "  rankdir=BT;"]
    for a in range(L.size):
        lines.append(f"  {_quote(names[a])};")
    for a in range(L.size):
        for b in members(lat.up[a]):
            if a != b and not any(c not in (a, b) and lat.leq(a, c) and lat.leq(c, b) for c in range(L.size)):
                lines.append(f"  {_quote(names[a])} -> {_quote(names[b])} [arrowhead=none];")
    for a in range(L.size):
        lines.append(f"  {_quote(names[a])} -> {_quote(names[L.neg[a]])} [style=dotted, color=gray];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def valuation_to_json(frame, valuation: Mapping[str, int]) -> dict:
    base = frame.base if isinstance(frame, ModalFrame) else frame
    return {k: [base.labels[i] for i in members(v)] for k, v in sorted(valuation.items())}


def detect_kind(data: Mapping) -> str:
    """Guess the structure kind from the keys present."""
    if not isinstance(data, Mapping):
        raise FormatError("expected a JSON object")
    if "map" in data:
        return "morphism"
    if "elements" in data:
        return "modal-lattice" if "box" in data or "diamond" in data else "lattice"
    if "points" in data:
        return "modal-frame" if "m_edges" in data else "frame"
    raise FormatError("cannot tell the structure kind from the fields present")


KINDS: Sequence[str] = ("frame", "lattice", "morphism", "modal-frame", "modal-lattice")
