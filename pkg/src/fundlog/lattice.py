"""Finite bounded lattices, fundamental negations, filters and ideals, homomorphisms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

from .bits import full, members
from .errors import (
    CapExceeded,
    EmptyFamily,
    MeetWithNegNotBottom,
    NoJoin,
    NoMeet,
    NotAntitone,
    NotAPoset,
    NotBounded,
    NotDuallySelfAdjoint,
    SourceTargetMismatch,
)

DEFAULT_LATTICE_CAP = 6


@dataclass(frozen=True, eq=False)
class FiniteLattice:
    """Bounded lattice on ``range(size)``.

    ``up[a]`` is the mask of all ``b`` with ``a <= b``. Meet and join tables are
    filled in by :func:`validate_lattice`; do not construct directly.
    """

    size: int
    up: tuple[int, ...]
    down: tuple[int, ...]
    bottom: int
    top: int
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]

    def leq(self, a: int, b: int) -> bool:
        return bool((self.up[a] >> b) & 1)

    def meet_all(self, elems) -> int:
        r = self.top
        for a in elems:
            r = self.meet[r][a]
        return r

    def join_all(self, elems) -> int:
        r = self.bottom
        for a in elems:
            r = self.join[r][a]
        return r

    def order_pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.size) for b in members(self.up[a])]

    def __repr__(self) -> str:
        return f"FiniteLattice(size={self.size}, labels={list(self.labels)})"


@dataclass(frozen=True, eq=False)
class FundamentalLattice:
    """A bounded lattice with a dually self-adjoint negation ``neg`` such that
    ``a & neg(a) = 0``. Build with :func:`validate_fundamental`."""

    lattice: FiniteLattice
    neg: tuple[int, ...]

    @property
    def size(self) -> int:
        return self.lattice.size

    @property
    def bottom(self) -> int:
        return self.lattice.bottom

    @property
    def top(self) -> int:
        return self.lattice.top

    @property
    def labels(self) -> tuple[str, ...]:
        return self.lattice.labels

    def leq(self, a: int, b: int) -> bool:
        return self.lattice.leq(a, b)

    def meet(self, a: int, b: int) -> int:
        return self.lattice.meet[a][b]

    def join(self, a: int, b: int) -> int:
        return self.lattice.join[a][b]

    @cached_property
    def filters(self) -> list[int]:
        return enumerate_filters(self.lattice)

    @cached_property
    def ideals(self) -> list[int]:
        return enumerate_ideals(self.lattice)

    def __repr__(self) -> str:
        return f"FundamentalLattice(size={self.size}, neg={list(self.neg)})"


def _labels(n: int, labels: Sequence[str] | None) -> tuple[str, ...]:
    if labels is None:
        return tuple(str(i) for i in range(n))
    if len(labels) != n:
        raise ValueError("label count does not match carrier size")
    return tuple(labels)


def validate_lattice(leq: Sequence[Sequence[bool]], labels: Sequence[str] | None = None) -> FiniteLattice:
    """Validate an order matrix (``leq[a][b]`` iff a <= b) as a bounded lattice.

    Raises NotAPoset, NotBounded, NoMeet or NoJoin with the offending elements.
    """
    n = len(leq)
    if any(len(row) != n for row in leq):
        raise ValueError("order matrix must be square")
    up = [0] * n
    for a in range(n):
        for b in range(n):
            if leq[a][b]:
                up[a] |= 1 << b
    for a in range(n):
        if not (up[a] >> a) & 1:
            raise NotAPoset(f"reflexivity fails at {a}", ("reflexivity", a))
    for a in range(n):
        for b in members(up[a]):
            if b != a and (up[b] >> a) & 1:
                raise NotAPoset(f"antisymmetry fails at ({a}, {b})", ("antisymmetry", a, b))
    for a in range(n):
        for b in members(up[a]):
            if up[b] & ~up[a]:
                c = next(members(up[b] & ~up[a]))
                raise NotAPoset(f"transitivity fails at ({a}, {b}, {c})", ("transitivity", a, b, c))
    return _lattice_from_up(up, _labels(n, labels))


def _lattice_from_up(up: list[int] | tuple[int, ...], labels: tuple[str, ...]) -> FiniteLattice:
    n = len(up)
    everything = full(n)
    down = [0] * n
    for a in range(n):
        for b in members(up[a]):
            down[b] |= 1 << a
    bottoms = [a for a in range(n) if up[a] == everything]
    tops = [a for a in range(n) if down[a] == everything]
    if not bottoms or not tops:
        raise NotBounded("no least element" if not bottoms else "no greatest element",
                         {"bottom": bottoms[0] if bottoms else None, "top": tops[0] if tops else None})
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            lower = down[a] & down[b]
            g = next((c for c in members(lower) if down[c] == lower), None)
            if g is None:
                raise NoMeet(f"no meet for ({a}, {b})", (a, b))
            upper = up[a] & up[b]
            l = next((c for c in members(upper) if up[c] == upper), None)
            if l is None:
                raise NoJoin(f"no join for ({a}, {b})", (a, b))
            meet[a][b] = meet[b][a] = g
            join[a][b] = join[b][a] = l
    return FiniteLattice(
        size=n,
        up=tuple(up),
        down=tuple(down),
        bottom=bottoms[0],
        top=tops[0],
        meet=tuple(tuple(r) for r in meet),
        join=tuple(tuple(r) for r in join),
        labels=labels,
    )


def lattice_from_pairs(elements: Sequence[str], pairs: Sequence[tuple[str, str]]) -> FiniteLattice:
    """Reflexive-transitive closure of the given ``a <= b`` pairs, then validate."""
    index = {e: i for i, e in enumerate(elements)}
    if len(index) != len(elements):
        raise ValueError("duplicate element names")
    n = len(elements)
    up = [1 << i for i in range(n)]
    for a, b in pairs:
        up[index[a]] |= 1 << index[b]
    changed = True
    while changed:
        changed = False
        for a in range(n):
            acc = up[a]
            for b in members(up[a]):
                acc |= up[b]
            if acc != up[a]:
                up[a] = acc
                changed = True
    leq = [[bool((up[a] >> b) & 1) for b in range(n)] for a in range(n)]
    return validate_lattice(leq, elements)


def chain(n: int, labels: Sequence[str] | None = None) -> FiniteLattice:
    return validate_lattice([[a <= b for b in range(n)] for a in range(n)], labels)


def validate_fundamental(lattice: FiniteLattice, neg: Sequence[int]) -> FundamentalLattice:
    """Check that ``neg`` is antitone, dually self-adjoint and meets to bottom."""
    n = lattice.size
    if len(neg) != n or any(not 0 <= v < n for v in neg):
        raise ValueError("negation table must be total on the carrier")
    leq = lattice.leq
    for a in range(n):
        for b in members(lattice.up[a]):
            if not leq(neg[b], neg[a]):
                raise NotAntitone(f"{a} <= {b} but neg({b}) not <= neg({a})", (a, b))
    for a in range(n):
        for b in range(n):
            if leq(a, neg[b]) != leq(b, neg[a]):
                raise NotDuallySelfAdjoint(f"dual self-adjunction fails at ({a}, {b})", (a, b))
    for a in range(n):
        if lattice.meet[a][neg[a]] != lattice.bottom:
            raise MeetWithNegNotBottom(f"{a} meet neg({a}) is not bottom", a)
    return FundamentalLattice(lattice, tuple(neg))


def is_fundamental_negation(lattice: FiniteLattice, neg: Sequence[int]) -> bool:
    try:
        validate_fundamental(lattice, neg)
    except (NotAntitone, NotDuallySelfAdjoint, MeetWithNegNotBottom):
        return False
    return True


# -- filters and ideals ------------------------------------------------------


def is_filter(lattice: FiniteLattice, mask: int) -> bool:
    if mask == 0 or (mask >> lattice.bottom) & 1:
        return False
    for a in members(mask):
        if lattice.up[a] & ~mask:
            return False
        for b in members(mask):
            if not (mask >> lattice.meet[a][b]) & 1:
                return False
    return True


def is_ideal(lattice: FiniteLattice, mask: int) -> bool:
    if mask == 0 or (mask >> lattice.top) & 1:
        return False
    for a in members(mask):
        if lattice.down[a] & ~mask:
            return False
        for b in members(mask):
            if not (mask >> lattice.join[a][b]) & 1:
                return False
    return True


def enumerate_filters(lattice: FiniteLattice) -> list[int]:
    """All proper filters as masks, ascending.

    In a finite lattice every filter is principal, so these are the up-sets of
    the non-bottom elements.
    """
    return sorted(lattice.up[a] for a in range(lattice.size) if a != lattice.bottom)


def enumerate_ideals(lattice: FiniteLattice) -> list[int]:
    return sorted(lattice.down[a] for a in range(lattice.size) if a != lattice.top)


def all_ideals(lattice: FiniteLattice) -> list[int]:
    """Every ideal, the improper one included."""
    return sorted(lattice.down[a] for a in range(lattice.size))


# -- homomorphisms -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LatticeHom:
    source: FundamentalLattice
    target: FundamentalLattice
    table: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.table[a]

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def is_surjective(self) -> bool:
        return set(self.table) == set(range(self.target.size))

    def preimage(self, mask: int) -> int:
        m = 0
        for a, fa in enumerate(self.table):
            if (mask >> fa) & 1:
                m |= 1 << a
        return m

    def compose(self, first: "LatticeHom") -> "LatticeHom":
        """``self`` after ``first``."""
        if first.target is not self.source:
            raise SourceTargetMismatch("maps are not composable")
        return LatticeHom(first.source, self.target, tuple(self.table[v] for v in first.table))


@dataclass
class HomVerdict:
    ok: bool
    equation: str | None = None
    args: tuple = field(default_factory=tuple)

    def __bool__(self) -> bool:
        return self.ok


def check_hom(f: LatticeHom) -> HomVerdict:
    """Scan meet, join, bottom, top, neg preservation in that order; report the
    first failure."""
    src, tgt, t = f.source, f.target, f.table
    if len(t) != src.size or any(not 0 <= v < tgt.size for v in t):
        raise SourceTargetMismatch("map table does not fit source and target")
    n = src.size
    for a in range(n):
        for b in range(n):
            if t[src.meet(a, b)] != tgt.meet(t[a], t[b]):
                return HomVerdict(False, "meet", (a, b))
    for a in range(n):
        for b in range(n):
            if t[src.join(a, b)] != tgt.join(t[a], t[b]):
                return HomVerdict(False, "join", (a, b))
    if t[src.bottom] != tgt.bottom:
        return HomVerdict(False, "bottom", ())
    if t[src.top] != tgt.top:
        return HomVerdict(False, "top", ())
    for a in range(n):
        if t[src.neg[a]] != tgt.neg[t[a]]:
            return HomVerdict(False, "neg", (a,))
    return HomVerdict(True)


def identity_hom(L: FundamentalLattice) -> LatticeHom:
    return LatticeHom(L, L, tuple(range(L.size)))


def enumerate_homs(source: FundamentalLattice, target: FundamentalLattice) -> Iterator[LatticeHom]:
    """Every fundamental lattice homomorphism, tables in lexicographic order."""
    n, m = source.size, target.size
    inner = [a for a in range(n) if a not in (source.bottom, source.top)]
    for values in itertools.product(range(m), repeat=len(inner)):
        t = [0] * n
        t[source.bottom] = target.bottom
        t[source.top] = target.top
        for a, v in zip(inner, values):
            t[a] = v
        f = LatticeHom(source, target, tuple(t))
        if check_hom(f):
            yield f


# -- products ----------------------------------------------------------------


def product(Ls: Sequence[FundamentalLattice]) -> tuple[FundamentalLattice, list[tuple[int, ...]]]:
    """Componentwise product. Returns the lattice and its carrier as tuples
    (in lexicographic order; element ``i`` is ``tuples[i]``)."""
    if not Ls:
        raise EmptyFamily("product of an empty family")
    tuples = list(itertools.product(*(range(L.size) for L in Ls)))
    index = {t: i for i, t in enumerate(tuples)}
    up = []
    for t in tuples:
        m = 0
        for s in tuples:
            if all(L.leq(a, b) for L, a, b in zip(Ls, t, s)):
                m |= 1 << index[s]
        up.append(m)
    labels = tuple("(" + ",".join(L.labels[a] for L, a in zip(Ls, t)) + ")" for t in tuples)
    lat = _lattice_from_up(up, labels)
    neg = [index[tuple(L.neg[a] for L, a in zip(Ls, t))] for t in tuples]
    return validate_fundamental(lat, neg), tuples


def projection(prod: FundamentalLattice, tuples: list[tuple[int, ...]], factor: FundamentalLattice, i: int) -> LatticeHom:
    return LatticeHom(prod, factor, tuple(t[i] for t in tuples))


# -- isomorphism and enumeration --------------------------------------------


def find_isomorphism(A: FiniteLattice, B: FiniteLattice, negA=None, negB=None) -> tuple[int, ...] | None:
    """Brute-force order isomorphism A -> B (respecting negations if given)."""
    if A.size != B.size:
        return None
    n = A.size
    inner_a = [a for a in range(n) if a not in (A.bottom, A.top)]
    inner_b = [b for b in range(n) if b not in (B.bottom, B.top)]
    if len(inner_a) != len(inner_b):
        return None
    for perm in itertools.permutations(inner_b):
        t = [0] * n
        t[A.bottom] = B.bottom
        t[A.top] = B.top
        for a, b in zip(inner_a, perm):
            t[a] = b
        if all(A.leq(a, c) == B.leq(t[a], t[c]) for a in range(n) for c in range(n)):
            if negA is None or all(t[negA[a]] == negB[t[a]] for a in range(n)):
                return tuple(t)
    return None


def _canonical_code(up: list[int], n: int) -> tuple[int, ...]:
    """Smallest relabelled up-set tuple over permutations fixing 0 and n-1."""
    best = None
    inner = list(range(1, n - 1))
    for perm in itertools.permutations(inner):
        relabel = [0] + list(perm) + [n - 1] if n > 1 else [0]
        code = [0] * n
        for a in range(n):
            m = 0
            for b in members(up[a]):
                m |= 1 << relabel[b]
            code[relabel[a]] = m
        code_t = tuple(code)
        if best is None or code_t < best:
            best = code_t
    return best


def enumerate_lattices(n: int, cap: int = DEFAULT_LATTICE_CAP) -> Iterator[FiniteLattice]:
    """Every lattice with exactly ``n`` elements, one per isomorphism class.

    Elements are labelled so that ``a <= b`` implies ``a <= b`` as integers;
    bottom is 0 and top is ``n - 1``.
    """
    if n > cap:
        raise CapExceeded(f"lattice size {n} exceeds cap {cap}")
    if n < 1:
        return
    if n == 1:
        yield _lattice_from_up([1], ("0",))
        return
    inner = list(range(1, n - 1))
    pairs = [(a, b) for a in inner for b in inner if a < b]
    seen: set[tuple[int, ...]] = set()
    labels = tuple(str(i) for i in range(n))
    everything = full(n)
    for choice in itertools.product((False, True), repeat=len(pairs)):
        up = [everything] + [(1 << a) | (1 << (n - 1)) for a in inner] + [1 << (n - 1)]
        for (a, b), on in zip(pairs, choice):
            if on:
                up[a] |= 1 << b
        # keep only transitively closed choices so each poset is generated once
        if any(up[b] & ~up[a] for a in inner for b in members(up[a])):
            continue
        code = _canonical_code(up, n)
        if code in seen:
            continue
        try:
            lat = _lattice_from_up(up, labels)
        except (NoMeet, NoJoin, NotBounded):
            continue
        seen.add(code)
        yield lat


def lattices_up_to(n: int, cap: int = DEFAULT_LATTICE_CAP) -> Iterator[FiniteLattice]:
    for k in range(1, n + 1):
        yield from enumerate_lattices(k, cap)


def enumerate_neg_maps(lattice: FiniteLattice) -> Iterator[FundamentalLattice]:
    """Every fundamental negation on ``lattice``, tables in lexicographic order.

    neg(0) = 1 and neg(1) = 0 hold for any fundamental negation, so only the
    values on the remaining elements are searched.
    """
    n = lattice.size
    inner = [a for a in range(n) if a not in (lattice.bottom, lattice.top)]
    for values in itertools.product(range(n), repeat=len(inner)):
        neg = [0] * n
        neg[lattice.bottom] = lattice.top
        neg[lattice.top] = lattice.bottom
        for a, v in zip(inner, values):
            neg[a] = v
        if is_fundamental_negation(lattice, neg):
            yield FundamentalLattice(lattice, tuple(neg))


def fundamental_lattices_up_to(n: int, cap: int = DEFAULT_LATTICE_CAP) -> Iterator[FundamentalLattice]:
    for lat in lattices_up_to(n, cap):
        yield from enumerate_neg_maps(lat)
