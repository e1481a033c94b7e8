"""Canonical frames of fundamental lattices and filter extensions of frames."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .bits import members
from .frames import RelFrame, frame_from_succ
from .lattice import FundamentalLattice


@dataclass(frozen=True, eq=False)
class CanonicalFrame:
    """Frame whose points are compatible (proper filter, proper ideal) pairs.

    ``labels[x]`` is the pair of masks over the lattice carrier; points are
    ordered by (filter mask, ideal mask).
    """

    frame: RelFrame
    labels: tuple[tuple[int, int], ...]
    lattice: FundamentalLattice
    point_index: dict = field(repr=False)

    @property
    def size(self) -> int:
        return self.frame.size

    def hat(self, a: int) -> int:
        """Points whose filter contains ``a``."""
        m = 0
        for x, (F, _) in enumerate(self.labels):
            if (F >> a) & 1:
                m |= 1 << x
        return m

    def check(self, b: int) -> int:
        """Points whose ideal contains ``b``."""
        m = 0
        for x, (_, I) in enumerate(self.labels):
            if (I >> b) & 1:
                m |= 1 << x
        return m

    def label_dict(self) -> dict[str, dict[str, list[str]]]:
        names = self.lattice.labels
        return {
            self.frame.labels[x]: {"filter": [names[a] for a in members(F)], "ideal": [names[a] for a in members(I)]}
            for x, (F, I) in enumerate(self.labels)
        }


def compatible(L: FundamentalLattice, F: int, I: int) -> bool:
    return all((I >> L.neg[a]) & 1 for a in members(F))


def canonical_frame(L: FundamentalLattice) -> CanonicalFrame:
    pairs = sorted((F, I) for F in L.filters for I in L.ideals if compatible(L, F, I))
    succ = []
    for _, I in pairs:
        m = 0
        for y, (G, _) in enumerate(pairs):
            if not G & I:
                m |= 1 << y
        succ.append(m)
    names = L.labels

    def show(mask):
        return "{" + ",".join(names[a] for a in members(mask)) + "}"

    labels = [f"({show(F)};{show(I)})" for F, I in pairs]
    frame = frame_from_succ(succ, labels)
    return CanonicalFrame(frame, tuple(pairs), L, {p: i for i, p in enumerate(pairs)})


@dataclass
class Report:
    """Named boolean checks with an optional witness each."""

    checks: dict[str, dict] = field(default_factory=dict)

    def record(self, name: str, witness=None, **extra) -> None:
        self.checks[name] = {"ok": witness is None, "witness": witness, **extra}

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks.values())

    def as_dict(self) -> dict:
        return {"ok": self.ok, "checks": self.checks}


def hat_embedding(L: FundamentalLattice, cf: CanonicalFrame | None = None) -> tuple[tuple[int, ...], Report]:
    """The map a -> {(F, I) : a in F} and a report of every preservation law."""
    cf = cf or canonical_frame(L)
    X = cf.frame
    hat = tuple(cf.hat(a) for a in range(L.size))
    alg = X.positive
    n = L.size
    rep = Report()
    rep.record("fundamental_frame", None if _fundamental(X) else "canonical frame not fundamental")
    rep.record("lands_in_algebra", next((a for a in range(n) if hat[a] not in alg.index), None))
    rep.record("injective", next(((a, b) for a in range(n) for b in range(a + 1, n) if hat[a] == hat[b]), None))
    rep.record("order_embedding", next(
        ((a, b) for a in range(n) for b in range(n) if L.leq(a, b) != (hat[a] & ~hat[b] == 0)), None))
    rep.record("meet", next(
        ((a, b) for a in range(n) for b in range(n) if hat[L.meet(a, b)] != hat[a] & hat[b]), None))
    rep.record("join", next(
        ((a, b) for a in range(n) for b in range(n) if hat[L.join(a, b)] != X.closure(hat[a] | hat[b])), None))
    rep.record("bottom", None if hat[L.bottom] == X.closure(0) else L.bottom)
    rep.record("top", None if hat[L.top] == X.everything else L.top)
    rep.record("negation", next((a for a in range(n) if hat[L.neg[a]] != X.neg_pos(hat[a])), None))
    return hat, rep


def _fundamental(frame: RelFrame) -> bool:
    from .frames import is_fundamental

    return bool(is_fundamental(frame))


def filter_extension(frame: RelFrame) -> CanonicalFrame:
    """Canonical frame of the frame's positive algebra."""
    return canonical_frame(frame.positive.fundamental())


def concrete_filter_extension(frame: RelFrame) -> tuple[list[tuple[int, int]], set[tuple[int, int]]]:
    """Filter extension built from (filter on the positive algebra, proper
    filter on the negative algebra) pairs, directly from the frame.

    A filter is a mask over the member indices of its algebra. Returns
    (points, relation) with points as (positive filter, negative filter).
    """
    pos, neg = frame.positive, frame.negative
    pos_filters = _principal_filters(pos.lattice)
    neg_filters = _principal_filters(neg.lattice)
    to_neg = {i: neg.index[frame.neg_neg(frame.neg_pos(A))] for i, A in enumerate(pos.members)}
    points = []
    for F in pos_filters:
        for J in neg_filters:
            if all((J >> to_neg[i]) & 1 for i in members(F)):
                points.append((F, J))
    neg_of_pos = {i: neg.index[frame.neg_neg(A)] for i, A in enumerate(pos.members)}
    rel = set()
    for (F, J), (G, K) in itertools.product(points, repeat=2):
        if not any((J >> neg_of_pos[i]) & 1 for i in members(G)):
            rel.add(((F, J), (G, K)))
    return points, rel


def _principal_filters(lat) -> list[int]:
    return sorted(lat.up[a] for a in range(lat.size) if a != lat.bottom)


def filter_extension_agrees(frame: RelFrame) -> bool:
    """Does the direct construction match the canonical frame of the positive
    algebra under ideal I -> {neg_neg A : A in I}?"""
    cf = filter_extension(frame)
    points, rel = concrete_filter_extension(frame)
    pos, neg = frame.positive, frame.negative
    translate = {}
    for x, (F, I) in enumerate(cf.labels):
        J = 0
        for i in members(I):
            J |= 1 << neg.index[frame.neg_neg(pos.members[i])]
        translate[x] = (F, J)
    if sorted(translate.values()) != sorted(points):
        return False
    return all(
        ((translate[x], translate[y]) in rel) == cf.frame.rel(x, y)
        for x in range(cf.size) for y in range(cf.size)
    )


def verify_canonical_extension(L: FundamentalLattice, cf: CanonicalFrame | None = None) -> Report:
    """Double density, compactness, and the negation as its pi-extension, all
    checked exhaustively on the positive algebra of the canonical frame."""
    cf = cf or canonical_frame(L)
    X = cf.frame
    alg = X.positive
    n = L.size
    hat = [cf.hat(a) for a in range(n)]
    rep = Report()

    def meet_of_hats(F):
        m = X.everything
        for a in members(F):
            m &= hat[a]
        return m

    def join_of_hats(I):
        u = 0
        for a in members(I):
            u |= hat[a]
        return X.closure(u)

    witness = None
    for A in alg.members:
        union = 0
        for x in members(A):
            union |= meet_of_hats(cf.labels[x][0])
        joined = X.closure(union)
        met = X.everything
        for x in members(X.neg_neg(A)):
            met &= join_of_hats(cf.labels[x][1])
        if joined != A or met != A:
            witness = {"member": A, "join_of_meets": joined, "meet_of_joins": met}
            break
    rep.record("double_density", witness)

    witness = None
    for A in range(1 << n):
        lhs = meet_of_hats(A)
        for B in range(1 << n):
            if lhs & ~join_of_hats(B) == 0 and not L.leq(L.lattice.meet_all(members(A)), L.lattice.join_all(members(B))):
                witness = {"A": A, "B": B}
                break
        if witness:
            break
    rep.record("compactness", witness)

    witness = None
    neg_hat = [hat[L.neg[a]] for a in range(n)]
    for A in alg.members:
        expected = X.everything
        for x in members(A):
            u = 0
            for a in members(cf.labels[x][0]):
                u |= neg_hat[a]
            expected &= X.closure(u)
        if X.neg_pos(A) != expected:
            witness = {"member": A, "neg": X.neg_pos(A), "pi_extension": expected}
            break
    rep.record("pi_negation", witness)
    return rep


def hat_is_onto(L: FundamentalLattice, cf: CanonicalFrame) -> bool:
    """For finite L the hat map is onto the positive algebra."""
    return {cf.hat(a) for a in range(L.size)} == set(cf.frame.positive.members)
