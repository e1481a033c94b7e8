"""Relational frames, their two negations, closure operator and set algebras."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

from .bits import full, members, to_list
from .errors import CapExceeded, NotCoSerial, NotFundamental
from .lattice import FundamentalLattice, _lattice_from_up, validate_fundamental

DEFAULT_FRAME_CAP = 4

POSITIVE = "positive"
NEGATIVE = "negative"


@dataclass(frozen=True, eq=False)
class RelFrame:
    """Points ``range(size)`` with ``x R y`` iff bit ``y`` of ``succ[x]`` is set.

    ``pred[y]`` is the converse row. Co-seriality (every ``pred`` nonempty) is
    enforced by :func:`make_frame`.
    """

    size: int
    succ: tuple[int, ...]
    pred: tuple[int, ...]
    labels: tuple[str, ...]

    @property
    def everything(self) -> int:
        return full(self.size)

    def rel(self, x: int, y: int) -> bool:
        return bool((self.succ[x] >> y) & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.size) for y in members(self.succ[x])]

    # the two negations and the closure operator

    def neg_pos(self, A: int) -> int:
        """Points none of whose R-predecessors lie in A."""
        m = 0
        for x, p in enumerate(self.pred):
            if not p & A:
                m |= 1 << x
        return m

    def neg_neg(self, A: int) -> int:
        """Points none of whose R-successors lie in A."""
        m = 0
        for x, s in enumerate(self.succ):
            if not s & A:
                m |= 1 << x
        return m

    def closure(self, A: int) -> int:
        return self.neg_pos(self.neg_neg(A))

    def dual_closure(self, A: int) -> int:
        return self.neg_neg(self.neg_pos(A))

    # refinement preorders

    @cached_property
    def pos_down(self) -> tuple[int, ...]:
        """``pos_down[x]`` = points that positively refine x."""
        return tuple(
            sum(1 << y for y in range(self.size) if self.pred[y] & ~self.pred[x] == 0)
            for x in range(self.size)
        )

    @cached_property
    def neg_down(self) -> tuple[int, ...]:
        return tuple(
            sum(1 << y for y in range(self.size) if self.succ[y] & ~self.succ[x] == 0)
            for x in range(self.size)
        )

    def pos_refines(self, x: int, x2: int) -> bool:
        return self.pred[x] & ~self.pred[x2] == 0

    def neg_refines(self, x: int, x2: int) -> bool:
        return self.succ[x] & ~self.succ[x2] == 0

    @cached_property
    def positive(self) -> "SetAlgebra":
        return positive_algebra(self)

    @cached_property
    def negative(self) -> "SetAlgebra":
        return negative_algebra(self)

    def __repr__(self) -> str:
        return f"RelFrame(size={self.size}, edges={self.edges()})"


def make_frame(size: int, edges: Sequence[tuple[int, int]], labels: Sequence[str] | None = None) -> RelFrame:
    succ = [0] * size
    pred = [0] * size
    for x, y in edges:
        succ[x] |= 1 << y
        pred[y] |= 1 << x
    return frame_from_succ(succ, labels)


def frame_from_succ(succ: Sequence[int], labels: Sequence[str] | None = None) -> RelFrame:
    n = len(succ)
    pred = [0] * n
    for x in range(n):
        for y in members(succ[x]):
            pred[y] |= 1 << x
    for y in range(n):
        if not pred[y]:
            raise NotCoSerial(f"point {y} has no R-predecessor", y)
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
    if len(labels) != n:
        raise ValueError("label count does not match point count")
    return RelFrame(n, tuple(succ), tuple(pred), labels)


def identity_frame(n: int, labels: Sequence[str] | None = None) -> RelFrame:
    return frame_from_succ([1 << i for i in range(n)], labels)


def total_frame(n: int, labels: Sequence[str] | None = None) -> RelFrame:
    return frame_from_succ([full(n)] * n, labels)


def transpose(frame: RelFrame) -> RelFrame:
    return RelFrame(frame.size, frame.pred, frame.succ, frame.labels)


# -- set algebras ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SetAlgebra:
    """Fixpoints of ``neg_pos . neg_neg`` (positive) or ``neg_neg . neg_pos``
    (negative), ascending as masks."""

    base: RelFrame
    members: tuple[int, ...]
    polarity: str
    index: dict = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, A: int) -> bool:
        return A in self.index

    def close(self, A: int) -> int:
        if self.polarity == POSITIVE:
            return self.base.closure(A)
        return self.base.dual_closure(A)

    def neg(self, A: int) -> int:
        """The frame negation restricted to this algebra (lands in the other one)."""
        if self.polarity == POSITIVE:
            return self.base.neg_pos(A)
        return self.base.neg_neg(A)

    def meet(self, A: int, B: int) -> int:
        return A & B

    def join(self, A: int, B: int) -> int:
        return self.close(A | B)

    @cached_property
    def lattice(self):
        """The members ordered by inclusion as a :class:`FiniteLattice`."""
        up = []
        for A in self.members:
            m = 0
            for j, B in enumerate(self.members):
                if A & ~B == 0:
                    m |= 1 << j
            up.append(m)
        labels = tuple("{" + ",".join(self.base.labels[i] for i in members(A)) + "}" for A in self.members)
        return _lattice_from_up(up, labels)

    @cached_property
    def neg_table(self) -> tuple[int, ...]:
        """Index table of the in-algebra negation (``neg_pos`` on the positive
        side, ``neg_neg`` on the negative side), composed with the closure so it
        stays inside the algebra."""
        out = []
        for A in self.members:
            B = self.close(self.neg(A))
            out.append(self.index[B])
        return tuple(out)

    def fundamental(self) -> FundamentalLattice:
        """Validate as a fundamental lattice; raises the validator's error."""
        return validate_fundamental(self.lattice, self.neg_table)


def _algebra(frame: RelFrame, polarity: str, fixpoints: list[int]) -> SetAlgebra:
    ms = tuple(sorted(fixpoints))
    return SetAlgebra(frame, ms, polarity, {A: i for i, A in enumerate(ms)})


def intersection_closure(generators: Sequence[int], top: int) -> set[int]:
    family = {top}
    for g in generators:
        family |= {s & g for s in family}
    return family


def positive_algebra(frame: RelFrame) -> SetAlgebra:
    """Every set of the form ``neg_pos(A)``.

    ``neg_pos`` turns unions into intersections, so its range is the family of
    intersections of the sets ``neg_pos({a})``.
    """
    gens = [frame.neg_pos(1 << a) for a in range(frame.size)]
    return _algebra(frame, POSITIVE, list(intersection_closure(gens, frame.everything)))


def negative_algebra(frame: RelFrame) -> SetAlgebra:
    gens = [frame.neg_neg(1 << a) for a in range(frame.size)]
    return _algebra(frame, NEGATIVE, list(intersection_closure(gens, frame.everything)))


def fixpoints_by_scan(frame: RelFrame, polarity: str = POSITIVE) -> list[int]:
    """Brute-force fixpoint scan over all subsets (exponential; oracle use)."""
    close = frame.closure if polarity == POSITIVE else frame.dual_closure
    return [A for A in range(1 << frame.size) if close(A) == A]


# -- fundamentality -----------------------------------------------------------


@dataclass
class Verdict:
    ok: bool
    condition: str | None = None
    witness: tuple = ()

    def __bool__(self) -> bool:
        return self.ok

    def as_dict(self) -> dict:
        return {"ok": self.ok, "condition": self.condition, "witness": list(self.witness)}


def is_fundamental(frame: RelFrame) -> Verdict:
    """Pseudo-reflexivity then pseudo-symmetry; first witness in point order."""
    pd = frame.pos_down
    for x in range(frame.size):
        if not frame.pred[x] & pd[x]:
            return Verdict(False, "pseudo-reflexive", (x,))
    for x in range(frame.size):
        for x2 in members(frame.succ[x]):
            if not frame.pred[x] & pd[x2]:
                return Verdict(False, "pseudo-symmetric", (x, x2))
    return Verdict(True)


def require_fundamental(frame: RelFrame) -> RelFrame:
    v = is_fundamental(frame)
    if not v:
        raise NotFundamental(f"frame is not {v.condition} at {v.witness}", (v.condition, *v.witness))
    return frame


def check_facts(frame: RelFrame) -> dict[str, dict]:
    """Re-derive the seven basic facts about a relational frame by direct
    quantifier evaluation and compare against the bitset machinery.

    Returns ``{item: {"ok": bool, "witness": ...}}`` for items i..vii.
    """
    n = frame.size
    R = [[frame.rel(x, y) for y in range(n)] for x in range(n)]
    pos = set(frame.positive.members)
    neg = set(frame.negative.members)
    report: dict[str, dict] = {}

    def item(name, witness):
        report[name] = {"ok": witness is None, "witness": witness}

    def pos_condition(A):
        # x in A iff every x' R x sees (via R) some y in A
        return all(
            ((A >> x) & 1) == all(any(R[x1][y] and (A >> y) & 1 for y in range(n)) for x1 in range(n) if R[x1][x])
            for x in range(n)
        )

    def neg_condition(A):
        return all(
            ((A >> x) & 1) == all(any(R[y][x1] and (A >> y) & 1 for y in range(n)) for x1 in range(n) if R[x][x1])
            for x in range(n)
        )

    item("i", next((A for A in range(1 << n) if (A in pos) != pos_condition(A)), None))
    item("ii", next((A for A in range(1 << n) if (A in neg) != neg_condition(A)), None))

    def pref(y, x):
        return all(R[z][x] for z in range(n) if R[z][y])

    def nref(y, x):
        return all(R[x][z] for z in range(n) if R[y][z])

    def as_mask(pred):
        return sum(1 << y for y in range(n) if pred(y))

    w = None
    for x in range(n):
        down = as_mask(lambda y: pref(y, x))
        not_seen = as_mask(lambda y: not R[x][y])
        if down not in pos or not_seen not in pos:
            w = x
            break
    item("iii", w)
    w = None
    for x in range(n):
        down = as_mask(lambda y: nref(y, x))
        not_seen = as_mask(lambda y: not R[y][x])
        if down not in neg or not_seen not in neg:
            w = x
            break
    item("iv", w)

    w = None
    for rel, label in ((pref, "positive"), (nref, "negative")):
        for x in range(n):
            if not rel(x, x):
                w = (label, "reflexive", x)
                break
        if w:
            break
        for x, y, z in itertools.product(range(n), repeat=3):
            if rel(x, y) and rel(y, z) and not rel(x, z):
                w = (label, "transitive", x, y, z)
                break
        if w:
            break
    item("v", w)

    w = None
    for x, x2 in itertools.product(range(n), repeat=2):
        via_sets = all((A >> x) & 1 for A in pos if (A >> x2) & 1)
        if pref(x, x2) != via_sets or frame.pos_refines(x, x2) != via_sets:
            w = (x, x2)
            break
    item("vi", w)
    w = None
    for x, x2 in itertools.product(range(n), repeat=2):
        via_sets = all((B >> x) & 1 for B in neg if (B >> x2) & 1)
        if nref(x, x2) != via_sets or frame.neg_refines(x, x2) != via_sets:
            w = (x, x2)
            break
    item("vii", w)
    return report


# -- enumeration -------------------------------------------------------------


def _frame_code(succ: Sequence[int], perm: Sequence[int]) -> tuple[int, ...]:
    n = len(succ)
    code = [0] * n
    for x in range(n):
        m = 0
        for y in members(succ[x]):
            m |= 1 << perm[y]
        code[perm[x]] = m
    return tuple(code)


def canonical_code(frame: RelFrame, extra: Sequence[Sequence[int]] = ()) -> tuple:
    """Smallest relabelled encoding over all point permutations.

    ``extra`` lists further successor tables (e.g. a modal relation) that are
    relabelled along with R.
    """
    best = None
    for perm in itertools.permutations(range(frame.size)):
        code = (_frame_code(frame.succ, perm),) + tuple(_frame_code(t, perm) for t in extra)
        if best is None or code < best:
            best = code
    return best


def enumerate_frames(
    n: int,
    fundamental_only: bool = False,
    up_to_iso: bool = False,
    cap: int = DEFAULT_FRAME_CAP,
) -> Iterator[RelFrame]:
    """Every co-serial relation on ``n`` labelled points.

    The order is ``itertools.product`` over the predecessor masks of points
    0..n-1. With ``up_to_iso`` only the first frame of each isomorphism class
    is kept.
    """
    if n > cap:
        raise CapExceeded(f"frame size {n} exceeds cap {cap}")
    seen: set = set()
    for preds in itertools.product(range(1, 1 << n), repeat=n):
        succ = [0] * n
        for y, p in enumerate(preds):
            for x in members(p):
                succ[x] |= 1 << y
        frame = RelFrame(n, tuple(succ), tuple(preds), tuple(str(i) for i in range(n)))
        if fundamental_only and not is_fundamental(frame):
            continue
        if up_to_iso:
            code = canonical_code(frame)
            if code in seen:
                continue
            seen.add(code)
        yield frame


def frames_up_to(n: int, fundamental_only: bool = False, up_to_iso: bool = False,
                 cap: int = DEFAULT_FRAME_CAP) -> Iterator[RelFrame]:
    for k in range(1, n + 1):
        yield from enumerate_frames(k, fundamental_only, up_to_iso, cap)


def find_frame_isomorphism(A: RelFrame, B: RelFrame, mA=None, mB=None) -> tuple[int, ...] | None:
    if A.size != B.size:
        return None
    for perm in itertools.permutations(range(B.size)):
        if all(_frame_code(A.succ, perm)[i] == B.succ[i] for i in range(B.size)):
            if mA is None or _frame_code(mA, perm) == tuple(mB):
                return perm
    return None


def set_label(frame: RelFrame, A: int) -> list[str]:
    return [frame.labels[i] for i in to_list(A)]
