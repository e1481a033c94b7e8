import itertools

from conftest import chain2, chain3, diamond, id2, loop, tot2
from oracles import canonical_points

from fundlog.duality import (
    canonical_frame,
    compatible,
    filter_extension,
    filter_extension_agrees,
    hat_embedding,
    hat_is_onto,
    verify_canonical_extension,
)
from fundlog.frames import frames_up_to, is_fundamental
from fundlog.lattice import fundamental_lattices_up_to


def up(L, a):
    return L.lattice.up[a]


def down(L, a):
    return L.lattice.down[a]


def test_two_chain_canonical_frame_is_one_loop():
    cf = canonical_frame(chain2())
    assert cf.labels == ((0b10, 0b01),)
    assert cf.frame.rel(0, 0)


def test_diamond_canonical_frame_points():
    L = diamond()
    p, q = 1, 2
    cf = canonical_frame(L)
    expected = {(0b1000, 0b0001), (0b1000, down(L, p)), (0b1000, down(L, q)),
                (up(L, p), down(L, q)), (up(L, q), down(L, p))}
    assert set(cf.labels) == expected and cf.size == 5
    assert list(cf.labels) == sorted(cf.labels)


def test_three_chain_canonical_frame_points():
    L = chain3()
    cf = canonical_frame(L)
    top, m_up = 0b100, 0b110
    assert set(cf.labels) == {(top, 0b001), (top, 0b011), (m_up, 0b001), (m_up, 0b011)}


def test_canonical_points_and_relation_match_oracle():
    for L in fundamental_lattices_up_to(5):
        cf = canonical_frame(L)
        assert list(cf.labels) == canonical_points(L)
        for (x, (F, I)), (y, (G, J)) in itertools.product(enumerate(cf.labels), repeat=2):
            assert cf.frame.rel(x, y) == (G & I == 0)
            assert compatible(L, F, I)


def test_refinement_is_reverse_inclusion():
    for L in fundamental_lattices_up_to(5):
        cf = canonical_frame(L)
        X = cf.frame
        for (x, (F, I)), (y, (G, J)) in itertools.product(enumerate(cf.labels), repeat=2):
            assert X.pos_refines(x, y) == (G & ~F == 0)
            assert X.neg_refines(x, y) == (J & ~I == 0)


def test_hat_examples():
    c = chain2()
    cf = canonical_frame(c)
    assert cf.hat(0) == 0 and cf.hat(1) == 1
    d = diamond()
    cf = canonical_frame(d)
    p_hat = cf.hat(1)
    assert [cf.labels[x] for x in range(cf.size) if (p_hat >> x) & 1] == [(up(d, 1), down(d, 2))]
    assert cf.hat(1) & cf.hat(2) == cf.hat(0) == 0
    t = chain3()
    cf = canonical_frame(t)
    m_hat = cf.hat(1)
    assert {cf.labels[x] for x in range(cf.size) if (m_hat >> x) & 1} == {(0b110, 0b001), (0b110, 0b011)}
    assert cf.frame.neg_pos(m_hat) == cf.hat(t.neg[1]) == 0


def test_hat_embedding_on_every_lattice_up_to_five():
    for L in fundamental_lattices_up_to(5):
        cf = canonical_frame(L)
        assert is_fundamental(cf.frame)
        _, rep = hat_embedding(L, cf)
        assert rep.ok, rep.checks
        assert hat_is_onto(L, cf)


def test_filter_extension_examples():
    assert filter_extension(loop()).size == 1
    assert filter_extension(id2()).size == 5
    assert filter_extension(tot2()).size == 1


def test_filter_extensions_fundamental_and_agree_with_direct_description():
    for f in frames_up_to(3, fundamental_only=True, up_to_iso=True):
        assert is_fundamental(filter_extension(f).frame)
        assert filter_extension_agrees(f)


def test_canonical_extension_examples():
    for L in (chain2(), diamond(), chain3()):
        rep = verify_canonical_extension(L)
        assert rep.ok, rep.checks
        assert set(rep.checks) == {"double_density", "compactness", "pi_negation"}


def test_canonical_extension_on_every_lattice_up_to_five():
    for L in fundamental_lattices_up_to(5):
        assert verify_canonical_extension(L).ok
