import itertools

import pytest
from conftest import chain2, chain3, diamond
from oracles import count_lattices, fundamental_negation, glb, leq_of, lub, proper_filters, proper_ideals

from fundlog.errors import (
    CapExceeded,
    EmptyFamily,
    MeetWithNegNotBottom,
    NotAPoset,
    NotAntitone,
    NotBounded,
    NotDuallySelfAdjoint,
    SourceTargetMismatch,
)
from fundlog.lattice import (
    LatticeHom,
    chain,
    check_hom,
    enumerate_filters,
    enumerate_homs,
    enumerate_ideals,
    enumerate_lattices,
    enumerate_neg_maps,
    find_isomorphism,
    fundamental_lattices_up_to,
    identity_hom,
    is_filter,
    is_fundamental_negation,
    is_ideal,
    lattice_from_pairs,
    lattices_up_to,
    product,
    projection,
    validate_fundamental,
    validate_lattice,
)


def test_two_chain_meet_and_join_are_min_and_max():
    L = chain(2)
    for a, b in itertools.product(range(2), repeat=2):
        assert L.meet[a][b] == min(a, b)
        assert L.join[a][b] == max(a, b)


def test_diamond_tables_match_brute_force_bounds():
    L = diamond()
    leq = leq_of(L)
    for a, b in itertools.product(range(4), repeat=2):
        assert L.meet(a, b) == glb(4, leq, a, b)
        assert L.join(a, b) == lub(4, leq, a, b)
    assert L.meet(1, 2) == 0 and L.join(1, 2) == 3


def test_two_maximal_elements_is_not_bounded():
    with pytest.raises(NotBounded):
        lattice_from_pairs(["0", "p", "q", "1'"], [("0", "p"), ("0", "q"), ("0", "1'"), ("1'", "p")])
    with pytest.raises(NotBounded):
        lattice_from_pairs(["0", "p", "q"], [("0", "p"), ("0", "q")])


def test_order_matrix_errors():
    with pytest.raises(NotAPoset):
        validate_lattice([[True, False], [False, False]])
    with pytest.raises(NotAPoset):
        validate_lattice([[True, True], [True, True]])
    with pytest.raises(ValueError):
        validate_lattice([[True, False]])


def test_fundamental_negation_examples():
    assert chain2().neg == (1, 0)
    assert chain3().neg == (2, 0, 0)
    with pytest.raises(MeetWithNegNotBottom) as exc:
        validate_fundamental(chain(3), [2, 1, 0])
    assert exc.value.witness == 1


def test_negation_axiom_errors_name_the_witness():
    with pytest.raises(NotAntitone) as exc:
        validate_fundamental(chain(3), [2, 0, 2])
    assert exc.value.witness == (1, 2)
    with pytest.raises(NotDuallySelfAdjoint) as exc:
        validate_fundamental(chain(3), [1, 1, 0])
    assert exc.value.witness == (0, 2)
    with pytest.raises(ValueError):
        validate_fundamental(chain(2), [1])


def test_filters_and_ideals_examples():
    assert enumerate_filters(chain(2)) == [0b10]
    assert enumerate_ideals(chain(2)) == [0b01]
    assert enumerate_filters(chain(3)) == [0b100, 0b110]
    assert enumerate_ideals(chain(3)) == [0b001, 0b011]
    d = diamond().lattice
    assert len(enumerate_filters(d)) == 3 and len(enumerate_ideals(d)) == 3


def test_filters_and_ideals_match_definition_on_all_small_lattices():
    for L in lattices_up_to(5):
        leq = {(a, b) for a in range(L.size) for b in range(L.size) if L.leq(a, b)}
        assert enumerate_filters(L) == proper_filters(L.size, leq)
        assert enumerate_ideals(L) == proper_ideals(L.size, leq)
        assert all(is_filter(L, F) for F in enumerate_filters(L))
        assert all(is_ideal(L, I) for I in enumerate_ideals(L))


def test_check_hom_examples():
    for L in (chain2(), chain3(), diamond()):
        assert check_hom(identity_hom(L))
    c = chain2()
    v = check_hom(LatticeHom(c, c, (1, 1)))
    assert not v and v.equation == "bottom"


def test_diamond_collapse_to_chain_verdict_matches_oracle():
    d, c = diamond(), chain2()
    table = (0, 1, 0, 1)
    f = LatticeHom(d, c, table)
    expected = next(
        (name for name, ok in (
            ("meet", all(table[d.meet(a, b)] == c.meet(table[a], table[b]) for a in range(4) for b in range(4))),
            ("join", all(table[d.join(a, b)] == c.join(table[a], table[b]) for a in range(4) for b in range(4))),
            ("bottom", table[d.bottom] == c.bottom),
            ("top", table[d.top] == c.top),
            ("neg", all(table[d.neg[a]] == c.neg[table[a]] for a in range(4))),
        ) if not ok),
        None,
    )
    v = check_hom(f)
    assert v.equation == expected
    # the oracle finds no violated equation: this is the first projection of 2 x 2
    assert expected is None and v
    v = check_hom(LatticeHom(d, c, (0, 1, 1, 1)))
    assert not v and v.equation == "meet" and v.args == (1, 2)


def test_check_hom_rejects_bad_tables():
    c = chain2()
    with pytest.raises(SourceTargetMismatch):
        check_hom(LatticeHom(c, c, (0, 5)))


def test_product_examples():
    c2 = chain2()
    single, _ = product([c2])
    assert find_isomorphism(single.lattice, c2.lattice, single.neg, c2.neg) is not None
    sq, tuples = product([c2, c2])
    d = diamond()
    assert find_isomorphism(sq.lattice, d.lattice, sq.neg, d.neg) is not None
    six, tuples = product([c2, chain3()])
    assert six.size == 6
    for i in range(2):
        factor = [c2, chain3()][i]
        assert check_hom(projection(six, tuples, factor, i))
    with pytest.raises(EmptyFamily):
        product([])


def test_lattice_counts_match_oracle():
    for n in range(1, 7):
        assert sum(1 for _ in enumerate_lattices(n)) == count_lattices(n)
    assert sum(1 for _ in enumerate_lattices(2)) == 1
    assert sum(1 for _ in enumerate_lattices(5)) == 5


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        list(enumerate_lattices(7))


def test_neg_maps_match_brute_force():
    assert [L.neg for L in enumerate_neg_maps(chain(2))] == [(1, 0)]
    for L in lattices_up_to(5):
        n = L.size
        leq = {(a, b) for a in range(n) for b in range(n) if L.leq(a, b)}
        expected = {t for t in itertools.product(range(n), repeat=n) if fundamental_negation(n, leq, t)}
        got = {F.neg for F in enumerate_neg_maps(L)}
        assert got == expected
        assert all(is_fundamental_negation(L, t) for t in got)


def test_negation_identities_hold_on_every_small_fundamental_lattice():
    for L in fundamental_lattices_up_to(6):
        for a in range(L.size):
            assert L.neg[L.neg[L.neg[a]]] == L.neg[a]
            assert L.leq(a, L.neg[L.neg[a]])


def test_homs_enumerated_are_exactly_the_checked_maps():
    c2, d = chain2(), diamond()
    homs = {f.table for f in enumerate_homs(c2, d)}
    brute = {t for t in itertools.product(range(4), repeat=2) if check_hom(LatticeHom(c2, d, t))}
    assert homs == brute == {(0, 3)}
    homs = {f.table for f in enumerate_homs(d, d)}
    assert homs == {t for t in itertools.product(range(4), repeat=4) if check_hom(LatticeHom(d, d, t))}
