"""Modal expansions: lattices with box and diamond, frames with an extra
accessibility relation, their morphisms, canonical frames and extensions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

from .bits import members, preimage
from .duality import CanonicalFrame, Report, canonical_frame
from .errors import CapExceeded, EmptyFamily, ModalAxiomViolation, NotAHom, NotAUFM, SourceTargetMismatch
from .frames import RelFrame, Verdict, canonical_code, enumerate_frames, require_fundamental
from .lattice import (
    FundamentalLattice,
    LatticeHom,
    all_ideals,
    check_hom,
    enumerate_homs,
    fundamental_lattices_up_to,
)
from .morphisms import MAP_SEARCH_CAP, FrameMap, _require_f, dual_map, f_morphisms

MODAL_FRAME_CAP = 3

# -- lattices ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ModalLattice:
    base: FundamentalLattice
    box: tuple[int, ...]
    diamond: tuple[int, ...]

    @property
    def size(self) -> int:
        return self.base.size

    def __repr__(self) -> str:
        return f"ModalLattice(size={self.size}, box={list(self.box)}, diamond={list(self.diamond)})"


def check_modal_lattice(base: FundamentalLattice, box: Sequence[int], diamond: Sequence[int]) -> Verdict:
    """First violated axiom among box-meet, box-top, diamond-join,
    diamond-bottom and diamond-neg, with its arguments."""
    n = base.size
    if len(box) != n or len(diamond) != n or any(not 0 <= v < n for v in (*box, *diamond)):
        raise SourceTargetMismatch("operator tables do not fit the lattice")
    for a, b in itertools.product(range(n), repeat=2):
        if box[base.meet(a, b)] != base.meet(box[a], box[b]):
            return Verdict(False, "box-meet", (a, b))
    if box[base.top] != base.top:
        return Verdict(False, "box-top", (base.top,))
    for a, b in itertools.product(range(n), repeat=2):
        if diamond[base.join(a, b)] != base.join(diamond[a], diamond[b]):
            return Verdict(False, "diamond-join", (a, b))
    if diamond[base.bottom] != base.bottom:
        return Verdict(False, "diamond-bottom", (base.bottom,))
    for a in range(n):
        if not base.leq(diamond[base.neg[a]], base.neg[box[a]]):
            return Verdict(False, "diamond-neg", (a,))
    return Verdict(True)


def validate_modal_lattice(base: FundamentalLattice, box: Sequence[int], diamond: Sequence[int]) -> ModalLattice:
    v = check_modal_lattice(base, box, diamond)
    if not v:
        raise ModalAxiomViolation(f"{v.condition} fails at {v.witness}", (v.condition, *v.witness))
    return ModalLattice(base, tuple(box), tuple(diamond))


def _operators(base: FundamentalLattice, fixed: int, ok) -> list[tuple[int, ...]]:
    n = base.size
    inner = [a for a in range(n) if a != fixed]
    out = []
    for values in itertools.product(range(n), repeat=len(inner)):
        t = [fixed] * n
        for a, v in zip(inner, values):
            t[a] = v
        if ok(t):
            out.append(tuple(t))
    return out


def modal_expansions(base: FundamentalLattice) -> Iterator[ModalLattice]:
    """Every (box, diamond) pair on ``base``; tables in lexicographic order."""
    n = base.size
    pairs = list(itertools.product(range(n), repeat=2))
    boxes = _operators(base, base.top, lambda t: all(t[base.meet(a, b)] == base.meet(t[a], t[b]) for a, b in pairs))
    diamonds = _operators(base, base.bottom,
                          lambda t: all(t[base.join(a, b)] == base.join(t[a], t[b]) for a, b in pairs))
    for box in boxes:
        bound = [base.neg[box[a]] for a in range(n)]
        for dia in diamonds:
            if all(base.leq(dia[base.neg[a]], bound[a]) for a in range(n)):
                yield ModalLattice(base, box, dia)


def modal_lattices_up_to(n: int) -> Iterator[ModalLattice]:
    for base in fundamental_lattices_up_to(n):
        yield from modal_expansions(base)


# -- frames ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ModalFrame:
    """A fundamental frame with an accessibility relation; ``m[x]`` is the
    mask of points accessible from ``x``."""

    base: RelFrame
    m: tuple[int, ...]

    @property
    def size(self) -> int:
        return self.base.size

    @property
    def labels(self) -> tuple[str, ...]:
        return self.base.labels

    @cached_property
    def m_pred(self) -> tuple[int, ...]:
        pred = [0] * self.size
        for x, row in enumerate(self.m):
            for y in members(row):
                pred[y] |= 1 << x
        return tuple(pred)

    def m_edges(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.size) for y in members(self.m[x])]

    def box_op(self, A: int) -> int:
        """Points all of whose accessible points lie in ``A``."""
        out = 0
        for x, row in enumerate(self.m):
            if row & ~A == 0:
                out |= 1 << x
        return out

    def diamond_op(self, A: int) -> int:
        X = self.base
        return X.neg_pos(self.box_op(X.neg_neg(A)))

    def __repr__(self) -> str:
        return f"ModalFrame(size={self.size}, m_edges={self.m_edges()})"


def modal_frame(base: RelFrame, m_edges: Sequence[tuple[int, int]]) -> ModalFrame:
    m = [0] * base.size
    for x, y in m_edges:
        m[x] |= 1 << y
    return ModalFrame(base, tuple(m))


def check_aufm(base: RelFrame, m: Sequence[int]) -> Verdict:
    """The two interaction conditions; witness ``(x, y, z)``.

    1. x M y and z R y imply some x' R x such that every y' with x' R y'
       reaches, through M, a point z' with z R z'.
    2. x M y and y R z imply some x' with x R x' such that every y' with
       y' R x' reaches, through M, a point z' with z' R z.
    """
    n = base.size
    if len(m) != n or any(row >> n for row in m):
        raise SourceTargetMismatch("accessibility table does not fit the frame")
    for z in range(n):
        reach = 0  # y' whose M-successors meet succ[z]
        for y2 in range(n):
            if m[y2] & base.succ[z]:
                reach |= 1 << y2
        good = 0
        for x2 in range(n):
            if base.succ[x2] & ~reach == 0:
                good |= 1 << x2
        for x in range(n):
            hit = m[x] & base.succ[z]
            if hit and not base.pred[x] & good:
                return Verdict(False, "1", (x, (hit & -hit).bit_length() - 1, z))
    for z in range(n):
        reach = 0
        for y2 in range(n):
            if m[y2] & base.pred[z]:
                reach |= 1 << y2
        good = 0
        for x2 in range(n):
            if base.pred[x2] & ~reach == 0:
                good |= 1 << x2
        for x in range(n):
            hit = m[x] & base.pred[z]
            if hit and not base.succ[x] & good:
                return Verdict(False, "2", (x, (hit & -hit).bit_length() - 1, z))
    return Verdict(True)


def validate_aufm(base: RelFrame, m: Sequence[int]) -> ModalFrame:
    require_fundamental(base)
    v = check_aufm(base, m)
    if not v:
        raise NotAUFM(f"condition {v.condition} fails at {v.witness}", (v.condition, *v.witness))
    return ModalFrame(base, tuple(m))


@lru_cache(maxsize=None)
def _modal_frames(n: int, up_to_iso: bool) -> tuple[ModalFrame, ...]:
    if n > MODAL_FRAME_CAP:
        raise CapExceeded(f"modal frame size {n} exceeds cap {MODAL_FRAME_CAP}")
    out = []
    for base in enumerate_frames(n, fundamental_only=True, up_to_iso=up_to_iso):
        seen = set()
        for m in itertools.product(range(1 << n), repeat=n):
            if not check_aufm(base, m):
                continue
            if up_to_iso:
                code = canonical_code(base, [m])
                if code in seen:
                    continue
                seen.add(code)
            out.append(ModalFrame(base, m))
    return tuple(out)


def enumerate_modal_frames(n: int, up_to_iso: bool = False) -> tuple[ModalFrame, ...]:
    """Every AUFM frame on ``n`` points (fundamental base, any valid relation)."""
    return _modal_frames(n, up_to_iso)


def modal_frames_up_to(n: int, up_to_iso: bool = True) -> list[ModalFrame]:
    return [f for k in range(1, n + 1) for f in enumerate_modal_frames(k, up_to_iso)]


def modal_coproduct(mframes: Sequence[ModalFrame]) -> tuple[ModalFrame, list[int]]:
    from .constructions import coproduct

    if not mframes:
        raise EmptyFamily("coproduct of an empty family")
    base, offsets = coproduct([f.base for f in mframes])
    m = []
    for f, off in zip(mframes, offsets):
        m.extend(row << off for row in f.m)
    return ModalFrame(base, tuple(m)), offsets


# -- morphisms ---------------------------------------------------------------


@lru_cache(maxsize=None)
def _both_up(frame: RelFrame) -> tuple[int, ...]:
    """Per point y, the points v with y below v in both refinement orders."""
    return tuple(
        sum(1 << v for v in range(frame.size) if frame.pos_refines(y, v) and frame.neg_refines(y, v))
        for y in range(frame.size)
    )


@dataclass(frozen=True, eq=False)
class ModalFrameMap:
    source: ModalFrame
    target: ModalFrame
    table: tuple[int, ...]

    @cached_property
    def frame_map(self) -> FrameMap:
        return FrameMap(self.source.base, self.target.base, self.table)

    def preimage(self, A: int) -> int:
        return self.frame_map.preimage(A)


def _modal_conditions(fmap: FrameMap, m: Sequence[int], n: Sequence[int]) -> Verdict:
    t = fmap.table
    for x, row in enumerate(m):
        if fmap.image(row) & ~n[t[x]]:
            x2 = next(x2 for x2 in members(row) if not (n[t[x]] >> t[x2]) & 1)
            return Verdict(False, "1", (x, x2))
    up = _both_up(fmap.target)
    for x, row in enumerate(m):
        for y in members(n[t[x]]):
            if not row & fmap.preimage(up[y]):
                return Verdict(False, "2", (x, y))
    return Verdict(True)


def is_aufm_morphism(h: ModalFrameMap) -> Verdict:
    """f-morphism plus: x M x' gives h(x) N h(x'); and h(x) N y gives some x'
    with x M x' and y below h(x') in both refinement orders."""
    _require_f(h.frame_map)
    return _modal_conditions(h.frame_map, h.source.m, h.target.m)


def aufm_morphisms(source: ModalFrame, target: ModalFrame, cap: int = MAP_SEARCH_CAP) -> Iterator[ModalFrameMap]:
    for f in f_morphisms(source.base, target.base, cap):
        if _modal_conditions(f, source.m, target.m):
            yield ModalFrameMap(source, target, f.table)


def aufm_morphism_sweep(mframes: Sequence[ModalFrame], cap: int = MAP_SEARCH_CAP) -> Iterator[ModalFrameMap]:
    """Every AUFM-morphism between members of ``mframes``. Base f-morphisms
    are searched once per pair of base frames."""
    by_base: dict[int, list[ModalFrame]] = {}
    bases: list[RelFrame] = []
    for f in mframes:
        if id(f.base) not in by_base:
            by_base[id(f.base)] = []
            bases.append(f.base)
        by_base[id(f.base)].append(f)
    for X in bases:
        for Y in bases:
            for fm in f_morphisms(X, Y, cap):
                for src in by_base[id(X)]:
                    for tgt in by_base[id(Y)]:
                        if _modal_conditions(fm, src.m, tgt.m):
                            h = ModalFrameMap(src, tgt, fm.table)
                            h.__dict__["frame_map"] = fm
                            yield h


def preservation_failure(h: ModalFrameMap) -> dict | None:
    """First positive member A of the target where inverse image fails to
    commute with box or diamond, else None."""
    X, Y = h.source, h.target
    for A in Y.base.positive.members:
        pre = h.preimage(A)
        if h.preimage(Y.box_op(A)) != X.box_op(pre):
            return {"operator": "box", "member": A}
        if h.preimage(Y.diamond_op(A)) != X.diamond_op(pre):
            return {"operator": "diamond", "member": A}
    return None


# -- algebras and canonical frames ------------------------------------------


def modal_positive_algebra(mframe: ModalFrame) -> ModalLattice:
    """Positive algebra with box and diamond restricted to it."""
    alg = mframe.base.positive
    try:
        box = tuple(alg.index[mframe.box_op(A)] for A in alg.members)
        dia = tuple(alg.index[mframe.diamond_op(A)] for A in alg.members)
    except KeyError as exc:
        raise NotAUFM(f"operator leaves the positive algebra at {exc.args[0]}", exc.args[0]) from None
    return ModalLattice(alg.fundamental(), box, dia)


@dataclass(frozen=True, eq=False)
class ModalCanonicalFrame:
    canonical: CanonicalFrame
    modal: ModalFrame
    lattice: ModalLattice

    @property
    def size(self) -> int:
        return self.modal.size


def canonical_accessibility(L: ModalLattice, cf: CanonicalFrame) -> tuple[int, ...]:
    """x M x' iff box a in x_F forces a in x'_F and diamond b in x_I forces
    b in x'_I."""
    need = [(preimage(L.box, F), preimage(L.diamond, I)) for F, I in cf.labels]
    m = []
    for nF, nI in need:
        row = 0
        for y, (G, J) in enumerate(cf.labels):
            if nF & ~G == 0 and nI & ~J == 0:
                row |= 1 << y
        m.append(row)
    return tuple(m)


def modal_canonical_frame(L: ModalLattice, cf: CanonicalFrame | None = None) -> ModalCanonicalFrame:
    cf = cf or canonical_frame(L.base)
    return ModalCanonicalFrame(cf, ModalFrame(cf.frame, canonical_accessibility(L, cf)), L)


def modal_filter_extension(mframe: ModalFrame) -> ModalCanonicalFrame:
    """Modal canonical frame of the frame's modal positive algebra."""
    return modal_canonical_frame(modal_positive_algebra(mframe))


def verify_modal_canonical_extension(L: ModalLattice, mcf: ModalCanonicalFrame | None = None) -> Report:
    """Box and diamond of the canonical frame agree, on every positive member
    A, with the meet over ideals I whose join covers A of the join of the
    operator's image of I."""
    mcf = mcf or modal_canonical_frame(L)
    cf, M = mcf.canonical, mcf.modal
    X = cf.frame
    n = L.size
    hat = [cf.hat(a) for a in range(n)]

    def join_of(I, table):
        u = 0
        for a in members(I):
            u |= hat[table[a]]
        return X.closure(u)

    ident = tuple(range(n))
    ideals = [(join_of(I, ident), join_of(I, L.box), join_of(I, L.diamond)) for I in all_ideals(L.base.lattice)]
    rep = Report()
    for name, op, col in (("box_pi", M.box_op, 1), ("diamond_pi", M.diamond_op, 2)):
        witness = None
        for A in X.positive.members:
            expected = X.everything
            for row in ideals:
                if A & ~row[0] == 0:
                    expected &= row[col]
            if op(A) != expected:
                witness = {"member": A, "operator": op(A), "pi_extension": expected}
                break
        rep.record(name, witness)
    return rep


# -- modal homomorphisms -----------------------------------------------------


def check_modal_hom(f: LatticeHom, source: ModalLattice, target: ModalLattice) -> Verdict:
    v = check_hom(f)
    if not v:
        return Verdict(False, v.equation, v.args)
    t = f.table
    for a in range(source.size):
        if t[source.box[a]] != target.box[t[a]]:
            return Verdict(False, "box", (a,))
        if t[source.diamond[a]] != target.diamond[t[a]]:
            return Verdict(False, "diamond", (a,))
    return Verdict(True)


def modal_homs(source: ModalLattice, target: ModalLattice) -> Iterator[LatticeHom]:
    for f in enumerate_homs(source.base, target.base):
        if check_modal_hom(f, source, target):
            yield f


def modal_dual_map(f: LatticeHom, source: ModalLattice, target: ModalLattice,
                   source_mcf: ModalCanonicalFrame | None = None,
                   target_mcf: ModalCanonicalFrame | None = None) -> ModalFrameMap:
    """Dual of a modal homomorphism, from the target's modal canonical frame to
    the source's."""
    v = check_modal_hom(f, source, target)
    if not v:
        raise NotAHom(f"{v.condition} not preserved at {v.witness}", (v.condition, *v.witness))
    smcf = source_mcf or modal_canonical_frame(source)
    tmcf = target_mcf or modal_canonical_frame(target)
    h = dual_map(f, smcf.canonical, tmcf.canonical)
    return ModalFrameMap(tmcf.modal, smcf.modal, h.table)
