"""Formulas, frame semantics, bounded derivability and countermodel search."""

from .prover import Countermodel, Proved, Refuted, Unknown, countermodel, derive, formula_universe, saturate
from .semantics import counter_valuation, evaluate, frame_consequence, is_valid, log_of, mod_of, valuations
from .syntax import (
    BOT,
    TOP,
    And,
    Bot,
    Box,
    Dia,
    Formula,
    Not,
    Or,
    Sequent,
    Top,
    Var,
    as_formula,
    as_sequent,
    parse,
    parse_sequent,
)

__all__ = [
    "And", "BOT", "Bot", "Box", "Countermodel", "Dia", "Formula", "Not", "Or", "Proved", "Refuted",
    "Sequent", "TOP", "Top", "Unknown", "Var", "as_formula", "as_sequent", "counter_valuation",
    "countermodel", "derive", "evaluate", "formula_universe", "frame_consequence", "is_valid",
    "log_of", "mod_of", "parse", "parse_sequent", "saturate", "valuations",
]
