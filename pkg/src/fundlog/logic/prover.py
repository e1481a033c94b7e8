"""Bounded proof search by saturation, and countermodel search.

The saturator computes the least relation on a finite formula universe that is
reflexive, transitive and closed under the introduction/elimination rules for
``&``, ``|`` and ``~`` together with the constant rules. Anything it derives is
derivable; failing to derive says nothing, which is why :func:`derive` pairs it
with a countermodel search and otherwise answers :class:`Unknown`.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from ..frames import RelFrame, enumerate_frames
from .semantics import DEFAULT_BUDGET, _Compiled, valuations
from .syntax import BOT, TOP, And, Formula, Not, Or, Sequent, as_sequent

DEFAULT_DEPTH = 2
DEFAULT_MAX_UNIVERSE = 250
DEFAULT_REFUTE_SIZE = 4
MODAL_REFUTE_CAP = 3


def formula_universe(goal: Sequent, depth: int = DEFAULT_DEPTH, max_universe: int = DEFAULT_MAX_UNIVERSE,
                     hints=()) -> list[Formula]:
    """Finite formula set the saturator works in.

    Base: subformulas of the goal (and of ``hints``) plus T, F and ~F, closed
    under up to ``depth`` extra negations; this part is never cut. Then every
    conjunction and disjunction of two subformulas, then their negations up to
    ``depth - 1`` times, each layer ranked by size and cut at ``max_universe``.
    """
    atoms: list[Formula] = []
    for f in [goal.lhs, goal.rhs, TOP, BOT, Not(BOT), *hints]:
        for g in f.subformulas():
            if g not in atoms:
                atoms.append(g)
    universe = list(atoms)
    seen = set(universe)

    def extend(candidates, limit=None):
        fresh = sorted({f for f in candidates if f not in seen}, key=lambda f: (f.size(), str(f)))
        if limit is not None:
            fresh = fresh[: max(0, limit - len(universe))]
        universe.extend(fresh)
        seen.update(fresh)
        return fresh

    layer = list(atoms)
    for _ in range(depth):
        layer = extend(Not(f) for f in layer)
    if depth >= 1:
        pairs = itertools.product(atoms, repeat=2)
        layer = extend((g for a, b in pairs for g in (And(a, b), Or(a, b))), max_universe)
        for _ in range(depth - 1):
            layer = extend((Not(f) for f in layer), max_universe)
    return universe


@dataclass
class Saturation:
    universe: list[Formula]
    index: dict[Formula, int]
    succ: list[int]
    justification: dict[tuple[int, int], tuple[str, tuple[tuple[int, int], ...]]]

    def proves(self, lhs: Formula, rhs: Formula) -> bool:
        i, j = self.index.get(lhs), self.index.get(rhs)
        return i is not None and j is not None and bool((self.succ[i] >> j) & 1)

    def trace(self, lhs: Formula, rhs: Formula) -> list[dict]:
        """Rule applications for ``lhs |- rhs``, premises before conclusions."""
        goal = (self.index[lhs], self.index[rhs])
        order: list[tuple[int, int]] = []
        done: set[tuple[int, int]] = set()
        stack = [(goal, False)]
        while stack:
            pair, expanded = stack.pop()
            if pair in done:
                continue
            if expanded:
                done.add(pair)
                order.append(pair)
                continue
            stack.append((pair, True))
            for p in self.justification[pair][1]:
                if p not in done:
                    stack.append((p, False))
        step_of = {p: k for k, p in enumerate(order)}
        steps = []
        for p in order:
            rule, prem = self.justification[p]
            steps.append({
                "step": step_of[p],
                "sequent": f"{self.universe[p[0]]} |- {self.universe[p[1]]}",
                "rule": rule,
                "premises": [step_of[q] for q in prem],
            })
        return steps


def saturate(universe: list[Formula]) -> Saturation:
    index = {f: i for i, f in enumerate(universe)}
    n = len(universe)
    succ = [0] * n
    pred = [0] * n
    just: dict[tuple[int, int], tuple[str, tuple]] = {}
    queue: deque[tuple[int, int]] = deque()

    def add(i, j, rule, premises=()):
        if (succ[i] >> j) & 1:
            return
        succ[i] |= 1 << j
        pred[j] |= 1 << i
        just[(i, j)] = (rule, tuple(premises))
        queue.append((i, j))

    neg_of = [index.get(Not(f)) for f in universe]
    conj_parts: dict[int, list[tuple[int, int]]] = {}
    disj_parts: dict[int, list[tuple[int, int]]] = {}
    for c, f in enumerate(universe):
        if isinstance(f, And):
            a, b = index[f.left], index[f.right]
            conj_parts.setdefault(a, []).append((c, b))
            conj_parts.setdefault(b, []).append((c, a))
        elif isinstance(f, Or):
            a, b = index[f.left], index[f.right]
            disj_parts.setdefault(a, []).append((c, b))
            disj_parts.setdefault(b, []).append((c, a))

    top, bot = index[TOP], index[BOT]
    for i in range(n):
        add(i, i, "reflexivity")
        add(bot, i, "bottom")
        add(i, top, "top")
    if Not(BOT) in index:
        add(top, index[Not(BOT)], "top-neg-bottom")
    for c, f in enumerate(universe):
        if isinstance(f, And):
            add(c, index[f.left], "and-elim-left")
            add(c, index[f.right], "and-elim-right")
            if f.right == Not(f.left):
                add(c, bot, "non-contradiction")
        elif isinstance(f, Or):
            add(index[f.left], c, "or-intro-left")
            add(index[f.right], c, "or-intro-right")
        nn = index.get(Not(Not(f)))
        if nn is not None:
            add(c, nn, "double-negation-intro")

    while queue:
        i, j = queue.popleft()
        for k in _bits(succ[j]):
            add(i, k, "transitivity", ((i, j), (j, k)))
        for h in _bits(pred[i]):
            add(h, j, "transitivity", ((h, i), (i, j)))
        for c, other in conj_parts.get(j, ()):
            if (succ[i] >> other) & 1:
                add(i, c, "and-intro", ((i, j), (i, other)))
        for c, other in disj_parts.get(i, ()):
            if (succ[other] >> j) & 1:
                add(c, j, "or-elim", ((i, j), (other, j)))
        ni, nj = neg_of[i], neg_of[j]
        if ni is not None and nj is not None:
            add(nj, ni, "contraposition", ((i, j),))
    return Saturation(universe, index, succ, just)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- countermodels -----------------------------------------------------------


@dataclass
class Countermodel:
    frame: object
    valuation: dict[str, int]
    lhs_value: int
    rhs_value: int

    @property
    def size(self) -> int:
        return getattr(self.frame, "size", None) or self.frame.base.size


@lru_cache(maxsize=None)
def _fundamental_frames(n: int) -> tuple[RelFrame, ...]:
    return tuple(enumerate_frames(n, fundamental_only=True, up_to_iso=True, cap=max(n, 4)))


def refutation_frames(n: int, modal: bool = False):
    """Frames searched for countermodels of size ``n``, in search order."""
    if modal:
        from ..modal import enumerate_modal_frames

        return enumerate_modal_frames(n, up_to_iso=True)
    return _fundamental_frames(n)


def countermodel(sequent: Sequent | str, max_size: int = DEFAULT_REFUTE_SIZE,
                 budget: int = DEFAULT_BUDGET) -> Countermodel | None:
    """Smallest frame (then first valuation) falsifying the sequent.

    Frames are fundamental, one per isomorphism class, size ascending; modal
    sequents search AUFM frames up to size 3.
    """
    seq = as_sequent(sequent)
    modal = seq.is_modal()
    if modal:
        max_size = min(max_size, MODAL_REFUTE_CAP)
    prog = _Compiled([seq.lhs, seq.rhs])
    letters = seq.letters()
    for n in range(1, max_size + 1):
        for frame in refutation_frames(n, modal):
            for v in valuations(frame, letters, budget):
                a, b = prog.run(frame, v)
                if a & ~b:
                    return Countermodel(frame, v, a, b)
    return None


# -- combined ----------------------------------------------------------------


@dataclass
class Proved:
    trace: list[dict]
    status: str = field(default="proved", init=False)


@dataclass
class Refuted:
    frame: object
    valuation: dict[str, int]
    status: str = field(default="refuted", init=False)


@dataclass
class Unknown:
    reason: str = "no proof within the formula universe and no countermodel within the size bound"
    status: str = field(default="unknown", init=False)


def derive(sequent: Sequent | str, depth: int = DEFAULT_DEPTH, max_size: int = DEFAULT_REFUTE_SIZE,
           max_universe: int = DEFAULT_MAX_UNIVERSE, budget: int = DEFAULT_BUDGET, hints=()):
    """Try to prove, then to refute. Modal subformulas are opaque to the prover."""
    seq = as_sequent(sequent)
    sat = saturate(formula_universe(seq, depth, max_universe, hints))
    if sat.proves(seq.lhs, seq.rhs):
        return Proved(sat.trace(seq.lhs, seq.rhs))
    cm = countermodel(seq, max_size, budget)
    if cm is not None:
        return Refuted(cm.frame, cm.valuation)
    return Unknown()
