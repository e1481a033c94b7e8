"""Evaluation of formulas on (modal) frames and consequence by valuation sweep."""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Mapping, Sequence

from ..errors import BudgetExceeded, ModalFormulaOnPlainFrame, UnboundLetter
from ..frames import RelFrame
from .syntax import And, Bot, Box, Dia, Formula, Not, Or, Sequent, Top, Var, as_formula, as_sequent

DEFAULT_BUDGET = 10**6


def _parts(frame) -> tuple[RelFrame, object]:
    """Split a plain or modal frame into (base frame, modal frame or None)."""
    base = getattr(frame, "base", None)
    if isinstance(base, RelFrame):
        return base, frame
    return frame, None


def evaluate(formula: Formula, frame, valuation: Mapping[str, int]) -> int:
    """Truth set of ``formula`` as a point mask.

    Letters take their value from ``valuation``; negation is the positive frame
    negation, conjunction intersection and disjunction the closure of the union.
    Boxes and diamonds need a modal frame.
    """
    return _Compiled([formula]).run(frame, valuation)[0]


class _Compiled:
    """Formulas flattened into a shared post-order node list."""

    def __init__(self, formulas: Sequence[Formula]):
        self.nodes: list[Formula] = []
        index: dict[Formula, int] = {}
        for f in formulas:
            for g in f.subformulas():
                if g not in index:
                    index[g] = len(self.nodes)
                    self.nodes.append(g)
        self.index = index
        self.roots = [index[f] for f in formulas]
        self.ops = []
        for g in self.nodes:
            kids = tuple(index[c] for c in g.children())
            self.ops.append((type(g), kids, getattr(g, "name", None)))
        self.modal = any(op in (Box, Dia) for op, _, _ in self.ops)

    def run(self, frame, valuation: Mapping[str, int]) -> list[int]:
        base, mframe = _parts(frame)
        if self.modal and mframe is None:
            raise ModalFormulaOnPlainFrame("modal formula evaluated on a frame without M")
        vals = [0] * len(self.nodes)
        for i, (op, kids, name) in enumerate(self.ops):
            if op is Var:
                try:
                    vals[i] = valuation[name]
                except KeyError:
                    raise UnboundLetter(name) from None
            elif op is Top:
                vals[i] = base.everything
            elif op is Bot:
                vals[i] = base.closure(0)
            elif op is Not:
                vals[i] = base.neg_pos(vals[kids[0]])
            elif op is And:
                vals[i] = vals[kids[0]] & vals[kids[1]]
            elif op is Or:
                vals[i] = base.closure(vals[kids[0]] | vals[kids[1]])
            elif op is Box:
                vals[i] = mframe.box_op(vals[kids[0]])
            else:
                vals[i] = mframe.diamond_op(vals[kids[0]])
        return [vals[r] for r in self.roots]


def valuations(frame, letters: Iterable[str], budget: int = DEFAULT_BUDGET) -> Iterator[dict[str, int]]:
    """All assignments of positive-algebra members to ``letters``.

    Letters are taken in sorted order, members in ascending mask order, the
    first letter varying slowest.
    """
    base, _ = _parts(frame)
    names = sorted(set(letters))
    algebra = base.positive.members
    count = len(algebra) ** len(names)
    if count > budget:
        raise BudgetExceeded(f"{count} valuations exceed budget {budget}")
    for combo in itertools.product(algebra, repeat=len(names)):
        yield dict(zip(names, combo))


def counter_valuation(frame, sequent: Sequent | str, budget: int = DEFAULT_BUDGET) -> dict[str, int] | None:
    """First valuation with ``V(lhs)`` not included in ``V(rhs)``, or None."""
    seq = as_sequent(sequent)
    prog = _Compiled([seq.lhs, seq.rhs])
    for v in valuations(frame, seq.letters(), budget):
        a, b = prog.run(frame, v)
        if a & ~b:
            return v
    return None


def frame_consequence(frame, sequent: Sequent | str, budget: int = DEFAULT_BUDGET) -> bool:
    return counter_valuation(frame, sequent, budget) is None


def is_valid(frame, formula: Formula | str, budget: int = DEFAULT_BUDGET) -> bool:
    """``T`` entails the formula on this frame."""
    return frame_consequence(frame, Sequent(Top(), as_formula(formula)), budget)


def log_of(frames: Sequence, formulas: Sequence[Formula | str], budget: int = DEFAULT_BUDGET) -> list[Formula]:
    """Members of ``formulas`` valid on every frame, in input order."""
    out: list[Formula] = []
    for f in map(as_formula, formulas):
        if f not in out and all(is_valid(fr, f, budget) for fr in frames):
            out.append(f)
    return out


def mod_of(gamma: Sequence[Formula | str], universe: Sequence, budget: int = DEFAULT_BUDGET) -> list:
    """Frames of ``universe`` validating every formula of ``gamma``."""
    gamma = [as_formula(f) for f in gamma]
    return [fr for fr in universe if all(is_valid(fr, f, budget) for f in gamma)]
