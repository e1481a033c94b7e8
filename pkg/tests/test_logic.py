import pytest
from conftest import id2, tot2

from fundlog.errors import BudgetExceeded, ModalFormulaOnPlainFrame, ParseError, UnboundLetter
from fundlog.frames import frames_up_to
from fundlog.logic import (
    BOT,
    TOP,
    And,
    Box,
    Not,
    Or,
    Proved,
    Refuted,
    Unknown,
    Var,
    countermodel,
    derive,
    evaluate,
    formula_universe,
    frame_consequence,
    log_of,
    mod_of,
    parse,
    parse_sequent,
    saturate,
)
from fundlog.logic.syntax import render

p, q, r = Var("p"), Var("q"), Var("r")


def small_fundamental(n=3):
    return list(frames_up_to(n, fundamental_only=True, up_to_iso=True))


def test_parse_examples():
    assert parse("~~p") == Not(Not(p))
    assert parse("p & q | r") == Or(And(p, q), r)
    assert parse("box (p | ~p)") == Box(Or(p, Not(p)))
    assert parse("p | q | r") == Or(Or(p, q), r)
    assert parse("T") == TOP and parse("F") == BOT
    assert parse("¬p ∧ q") == And(Not(p), q)


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        parse("p & ")
    assert exc.value.position == 4
    with pytest.raises(ParseError):
        parse("(p")
    with pytest.raises(ParseError):
        parse_sequent("p q")


def test_render_roundtrip():
    for text in ["~~p", "p & q | r", "p & (q | r)", "box (p | ~p)", "dia ~p & T"]:
        f = parse(text)
        assert parse(render(f)) == f


def test_evaluation_examples():
    assert evaluate(Not(p), id2(), {"p": 0b01}) == 0b10
    for f in small_fundamental(2):
        assert evaluate(TOP, f, {}) == f.everything
        assert evaluate(BOT, f, {}) == 0
    assert evaluate(Or(p, Not(p)), tot2(), {"p": 0}) == 0b11


def test_evaluation_errors():
    with pytest.raises(UnboundLetter):
        evaluate(p, id2(), {})
    with pytest.raises(ModalFormulaOnPlainFrame):
        evaluate(Box(p), id2(), {"p": 0})


def test_evaluation_stays_in_the_algebra():
    formulas = [parse(t) for t in ["p | q", "~(p & ~q)", "~~p | ~q", "(p | q) & ~r"]]
    for f in small_fundamental(3):
        members = f.positive.members
        for vp in members:
            for vq in members[:3]:
                for fm in formulas:
                    assert evaluate(fm, f, {"p": vp, "q": vq, "r": members[-1]}) in f.positive.index


def test_consequence_examples():
    for f in small_fundamental(3):
        assert frame_consequence(f, "p |- ~~p")
    assert frame_consequence(id2(), "~~p |- p")
    # total frame: the algebra is {empty, X}, where excluded middle holds
    assert frame_consequence(tot2(), "T |- p | ~p")


def test_consequence_budget():
    with pytest.raises(BudgetExceeded):
        frame_consequence(id2(), "p & q & r |- p", budget=10)


def test_log_and_mod_galois_connection():
    universe = small_fundamental(2)[:3]
    pool = [parse(t) for t in ["p | ~p", "~p | ~~p", "~~(p | ~p)", "~(p & ~p)", "p | ~~p"]]
    assert mod_of([], universe) == universe
    assert log_of([], pool) == pool
    for k in range(len(pool)):
        gamma = pool[k:k + 2]
        assert all(g in log_of(mod_of(gamma, universe), pool) for g in gamma)
    K = universe[:2]
    assert all(any(f is g for g in mod_of(log_of(K, pool), universe)) for f in K)


def test_derive_examples():
    assert isinstance(derive("F |- p"), Proved)
    assert isinstance(derive("p |- ~~p"), Proved)
    res = derive("~~p |- p")
    assert isinstance(res, Refuted) and res.frame.size <= 4
    assert isinstance(derive("p & (q | r) |- (p & q) | (p & r)"), Refuted)


def test_proved_trace_ends_in_goal():
    res = derive("p & q |- q & p")
    assert isinstance(res, Proved)
    assert res.trace[-1]["sequent"] == "p & q |- q & p"


def test_countermodel_examples():
    assert countermodel("p |- p") is None
    cm = countermodel("T |- p | ~p")
    assert cm is not None and cm.size <= 4
    assert cm.lhs_value & ~cm.rhs_value
    assert countermodel("p |- q").size == 1


def test_de_morgan_direction_verdict():
    """Record the verdict, checked against a direct frame sweep."""
    cm = countermodel("~(p & q) |- ~p | ~q", 3)
    sweep = any(not frame_consequence(f, "~(p & q) |- ~p | ~q") for f in small_fundamental(3))
    assert (cm is not None) == sweep
    assert cm is not None  # fails already on 3 points


def test_orthologic_recovery_on_reflexive_symmetric_frames():
    from fundlog.frames import enumerate_frames

    for n in (1, 2, 3):
        for f in enumerate_frames(n):
            if all(f.rel(x, x) for x in range(n)) and all(f.rel(y, x) for x, y in f.edges()):
                assert frame_consequence(f, "~~p |- p")


def test_saturation_soundness_on_small_frames():
    frames = small_fundamental(3)
    for text in ["p & q |- p", "p |- p | q", "~p & ~q |- ~(p | q)", "~(p | q) |- ~p & ~q",
                 "p & ~p |- F", "T |- ~F", "~p | ~q |- ~(p & q)"]:
        res = derive(text)
        assert isinstance(res, Proved), text
        assert all(frame_consequence(f, text) for f in frames)


def test_unknown_when_budget_is_too_small():
    res = derive("~p | ~q |- ~(p & q)", depth=0, max_size=1)
    assert isinstance(res, (Unknown, Proved))
    res = derive("p & (q | r) |- (p & q) | (p & r)", depth=0, max_size=1)
    assert isinstance(res, Unknown)


def test_universe_contains_goal_and_rule_seeds():
    seq = parse_sequent("p |- ~~p")
    U = formula_universe(seq)
    assert {p, Not(Not(p)), TOP, BOT, Not(BOT)} <= set(U)
    sat = saturate(U)
    assert sat.proves(TOP, Not(BOT))


def test_modal_countermodel_uses_modal_frames():
    cm = countermodel("box p |- p")
    assert cm is not None and hasattr(cm.frame, "m")


def test_countermodels_live_on_fundamental_frames():
    from fundlog.frames import is_fundamental

    for text in ["~~p |- p", "T |- p | ~p", "p |- q", "~(p & q) |- ~p | ~q"]:
        cm = countermodel(text)
        assert is_fundamental(cm.frame)
        assert all(v in cm.frame.positive.index for v in cm.valuation.values())
