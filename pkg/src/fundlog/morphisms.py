"""Frame maps: the four back-and-forth conditions, density and embedding
classes, and the two dual constructions between maps and homomorphisms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .bits import members
from .errors import CapExceeded, NotAHom, NotFMorphism, SourceTargetMismatch
from .frames import RelFrame, Verdict
from .lattice import LatticeHom, check_hom

MAP_SEARCH_CAP = 10**5


@dataclass(frozen=True, eq=False)
class FrameMap:
    source: RelFrame
    target: RelFrame
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != self.source.size or any(not 0 <= v < self.target.size for v in self.table):
            raise SourceTargetMismatch("map table does not fit source and target")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def preimage(self, A: int) -> int:
        m = 0
        for x, y in enumerate(self.table):
            if (A >> y) & 1:
                m |= 1 << x
        return m

    def image(self, A: int) -> int:
        m = 0
        for x in members(A):
            m |= 1 << self.table[x]
        return m

    def compose(self, first: "FrameMap") -> "FrameMap":
        """``self`` after ``first``."""
        if first.target is not self.source:
            raise SourceTargetMismatch("maps are not composable")
        return FrameMap(first.source, self.target, tuple(self.table[v] for v in first.table))

    @cached_property
    def _pre(self):
        """Preimages of the target's refinement down-sets and rows."""
        T = self.target
        return {
            "pos_down": tuple(self.preimage(m) for m in T.pos_down),
            "neg_down": tuple(self.preimage(m) for m in T.neg_down),
            "succ": tuple(self.preimage(m) for m in T.succ),
            "pred": tuple(self.preimage(m) for m in T.pred),
        }


def identity_map(frame: RelFrame) -> FrameMap:
    return FrameMap(frame, frame, tuple(range(frame.size)))


def is_f_morphism(h: FrameMap) -> Verdict:
    """Check the four f-morphism conditions; witness = first violating tuple.

    1. x R x'  implies  h(x) S h(x')
    2. h(x) S y  implies  some x' with x R x' and h(x') positively refining y
    3. y S h(x)  implies  some x' with x' R x and h(x') negatively refining y
    4. y S h(x)  implies  some x'' with x'' R x and h(x'') positively refining y
    """
    X, Y, t = h.source, h.target, h.table
    pre = h._pre
    for x in range(X.size):
        for x2 in members(X.succ[x]):
            if not (Y.succ[t[x]] >> t[x2]) & 1:
                return Verdict(False, "1", (x, x2))
    for x in range(X.size):
        for y in members(Y.succ[t[x]]):
            if not X.succ[x] & pre["pos_down"][y]:
                return Verdict(False, "2", (x, y))
    for x in range(X.size):
        for y in members(Y.pred[t[x]]):
            if not X.pred[x] & pre["neg_down"][y]:
                return Verdict(False, "3", (x, y))
    for x in range(X.size):
        for y in members(Y.pred[t[x]]):
            if not X.pred[x] & pre["pos_down"][y]:
                return Verdict(False, "4", (x, y))
    return Verdict(True)


def _require_f(h: FrameMap) -> None:
    v = is_f_morphism(h)
    if not v:
        raise NotFMorphism(f"condition {v.condition} fails at {v.witness}", (v.condition, *v.witness))


def is_dense(h: FrameMap) -> Verdict:
    """y' S y implies some x with h(x) positively refining y and y' S h(x)."""
    _require_f(h)
    Y, pre = h.target, h._pre
    for y2 in range(Y.size):
        for y in members(Y.succ[y2]):
            if not pre["pos_down"][y] & pre["succ"][y2]:
                return Verdict(False, "dense", (y2, y))
    return Verdict(True)


def is_embedding(h: FrameMap) -> Verdict:
    """h(x) S h(x') implies some z with x R z and z positively refining x'."""
    _require_f(h)
    X, Y, t = h.source, h.target, h.table
    for x in range(X.size):
        for x2 in range(X.size):
            if (Y.succ[t[x]] >> t[x2]) & 1 and not X.succ[x] & X.pos_down[x2]:
                return Verdict(False, "embedding", (x, x2))
    return Verdict(True)


def is_strongly_dense(h: FrameMap) -> Verdict:
    """Every y has some x with h(x) and y positively refining each other and
    y negatively refining h(x)."""
    _require_f(h)
    X, Y, t = h.source, h.target, h.table
    for y in range(Y.size):
        if not any(Y.pos_refines(t[x], y) and Y.pos_refines(y, t[x]) and Y.neg_refines(y, t[x])
                   for x in range(X.size)):
            return Verdict(False, "strongly-dense", (y,))
    return Verdict(True)


def is_strong_embedding(h: FrameMap) -> Verdict:
    """h(x) S h(x') implies x R x'."""
    _require_f(h)
    X, Y, t = h.source, h.target, h.table
    for x in range(X.size):
        for x2 in range(X.size):
            if (Y.succ[t[x]] >> t[x2]) & 1 and not (X.succ[x] >> x2) & 1:
                return Verdict(False, "strong-embedding", (x, x2))
    return Verdict(True)


def classify(h: FrameMap) -> dict[str, bool]:
    return {
        "f_morphism": True,
        "dense": bool(is_dense(h)),
        "embedding": bool(is_embedding(h)),
        "strongly_dense": bool(is_strongly_dense(h)),
        "strong_embedding": bool(is_strong_embedding(h)),
    }


# -- enumeration -------------------------------------------------------------


def enumerate_maps(source: RelFrame, target: RelFrame, cap: int = MAP_SEARCH_CAP) -> Iterator[FrameMap]:
    count = target.size ** source.size
    if count > cap:
        raise CapExceeded(f"{count} candidate maps exceed cap {cap}")
    for table in itertools.product(range(target.size), repeat=source.size):
        yield FrameMap(source, target, table)


def f_morphisms(source: RelFrame, target: RelFrame, cap: int = MAP_SEARCH_CAP) -> Iterator[FrameMap]:
    for h in enumerate_maps(source, target, cap):
        if is_f_morphism(h):
            yield h


# -- duals -------------------------------------------------------------------


def dual_hom(h: FrameMap) -> LatticeHom:
    """Inverse image ``A -> h^-1[A]`` from the target's positive algebra to the
    source's, as a homomorphism of fundamental lattices."""
    _require_f(h)
    src_alg, tgt_alg = h.source.positive, h.target.positive
    table = []
    for A in tgt_alg.members:
        B = h.preimage(A)
        if B not in src_alg.index:
            raise AssertionError(f"inverse image {B} of {A} left the positive algebra")
        table.append(src_alg.index[B])
    return LatticeHom(tgt_alg.fundamental(), src_alg.fundamental(), tuple(table))


def closure_commutes(h: FrameMap, all_subsets: bool = False) -> tuple[int, int] | None:
    """First subset A of the target with C(h^-1[A]) != h^-1[C(A)], if any.

    By default only sets closed downward under positive refinement are tried;
    for arbitrary subsets the equation can fail.
    """
    X, Y = h.source, h.target
    for A in range(1 << Y.size):
        if not all_subsets and any(Y.pos_down[y] & ~A for y in members(A)):
            continue
        if X.closure(h.preimage(A)) != h.preimage(Y.closure(A)):
            return (A, h.preimage(A))
    return None


def dual_map(f: LatticeHom, source_cf=None, target_cf=None) -> FrameMap:
    """``(F, I) -> (f^-1[F], f^-1[I])`` from the canonical frame of f's target
    to the canonical frame of f's source."""
    from .duality import canonical_frame

    v = check_hom(f)
    if not v:
        raise NotAHom(f"{v.equation} not preserved at {v.args}", (v.equation, *v.args))
    cf_src = source_cf or canonical_frame(f.source)
    cf_tgt = target_cf or canonical_frame(f.target)
    table = []
    for F, I in cf_tgt.labels:
        table.append(cf_src.point_index[(f.preimage(F), f.preimage(I))])
    return FrameMap(cf_tgt.frame, cf_src.frame, tuple(table))


def duality_check(obj, source_cf=None, target_cf=None) -> dict:
    """Check the injective/surjective correspondences for a frame map or a
    lattice homomorphism, returning a report dict with an ``ok`` flag."""
    if isinstance(obj, FrameMap):
        chi = dual_hom(obj)
        dense, emb = bool(is_dense(obj)), bool(is_embedding(obj))
        checks = {
            "injective_iff_dense": {"injective": chi.is_injective(), "dense": dense},
            "surjective_iff_embedding": {"surjective": chi.is_surjective(), "embedding": emb},
        }
        checks["injective_iff_dense"]["ok"] = chi.is_injective() == dense
        checks["surjective_iff_embedding"]["ok"] = chi.is_surjective() == emb
    else:
        h = dual_map(obj, source_cf, target_cf)
        sd, se = bool(is_strongly_dense(h)), bool(is_strong_embedding(h))
        checks = {
            "injective_iff_strongly_dense": {"injective": obj.is_injective(), "strongly_dense": sd,
                                             "ok": obj.is_injective() == sd},
            "surjective_iff_strong_embedding": {"surjective": obj.is_surjective(), "strong_embedding": se,
                                                "ok": obj.is_surjective() == se},
        }
    return {"ok": all(c["ok"] for c in checks.values()), "checks": checks}
