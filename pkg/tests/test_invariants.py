from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fadhm import invariants as inv
from fadhm import linalg as la
from fadhm.groebner import groebner_basis
from fadhm.orders import MonomialOrder
from fadhm.poly import PolyRing, Polynomial
from fadhm.quiver import FiltrationSpec, Quiver, double, generic_rep
from fadhm.rng import rand_fraction, rand_nonzero, substream


def a2(n=2):
    return inv.arrow_space(Quiver.linear(2), {"1": n, "2": n})


def jordan_space(n):
    return inv.arrow_space(Quiver(("1",), (Quiver.jordan().arrows[0],)), {"1": n})


def test_jordan_loop_derivation():
    sp = jordan_space(2)
    D = inv.derivation_for(sp, "1", inv.elementary(2, 0, 1))
    assert D.of("r12").to_text() == "-r11 + r22"
    assert D.of("r11").is_zero() and D.of("r22").is_zero()
    assert D(sp.ring.one).is_zero()


def test_a2_tail_derivation():
    sp = a2()
    D = inv.derivation_for(sp, "1", inv.elementary(2, 0, 1))
    assert sp.ring.names == ("a11", "a12", "a22")
    assert D.of("a11").is_zero()
    assert D.of("a12") == -sp.ring.var("a11")


def test_derivation_rejects_non_nilpotent():
    sp = a2()
    with pytest.raises(inv.DerivationError):
        inv.derivation_for(sp, "1", inv.elementary(2, 0, 0))
    with pytest.raises(inv.DerivationError):
        inv.derivation_for(sp, "1", inv.elementary(2, 1, 0))


poly3 = st.dictionaries(st.tuples(*[st.integers(0, 2)] * 3), st.integers(-3, 3), max_size=4)


@given(poly3, poly3)
def test_leibniz(a, b):
    sp = a2()
    f, g = Polynomial(sp.ring, a), Polynomial(sp.ring, b)
    for D in inv.simple_root_derivations(sp):
        assert D(f * g) == D(f) * g + f * D(g)


@pytest.mark.parametrize("d,dim", [(0, 1), (1, 3), (2, 6), (3, 10)])
def test_a2_invariant_dims(d, dim):
    sp = a2()
    sub = inv.invariant_space(sp.ring, inv.simple_root_derivations(sp), d)
    assert sub.dim == dim


def test_invariant_space_closed_under_products():
    sp = a2()
    sub = inv.invariant_space(sp.ring, inv.simple_root_derivations(sp), 3)
    assert any(f == sp.ring.one for f in sub.basis)
    for f in sub.basis:
        for g in sub.basis:
            if (f * g).total_degree() <= 3:
                assert inv.in_span(f * g, sub.basis)


@pytest.mark.parametrize("Q,n", [(Quiver.linear(2), 3), (Quiver.linear(3), 2)])
def test_dynkin_dimension_match(Q, n):
    for d in (1, 2):
        res = inv.unipotent_invariant_dimension_check(Q, n, d)
        assert res["match"] and res["diagonal_contained"]


def test_semi_invariants_matrix_space():
    ms = inv.matrix_space(2, 2)
    ders = inv.simple_root_derivations(ms)
    w = inv.torus_weights(ms)
    sub = inv.semi_invariant_space(ms.ring, ders, w, (0, 1), 1)
    assert [f.to_text() for f in sub.basis] == ["a21", "a22"]
    zero_weight = inv.semi_invariant_space(ms.ring, ders, w, (0, 0), 2)
    assert zero_weight.dim == 1


def test_partial_flag_uses_full_nilradical():
    dims = {"1": 3}
    rep = generic_rep(double(Quiver.jordan()), dims, {"1": 1}, FiltrationSpec.from_blocks({"1": (2, 1)}))
    sp = inv.space_from_rep(rep)
    assert len(inv.simple_root_derivations(sp)) == 2


def test_bideterminant_basics():
    R = PolyRing(["a", "b", "c", "d"])
    A = np.array(R.gens(), dtype=object).reshape(2, 2)
    assert inv.bideterminant(inv.Bitableau(((1, 2),), ((1, 2),)), A) == la.det(A)
    assert inv.bideterminant(inv.Bitableau(((2,),), ((1,),)), A) == R.var("c")
    with pytest.raises(IndexError):
        inv.bideterminant(inv.Bitableau(((3,),), ((1,),)), A)
    with pytest.raises(ValueError):
        inv.Bitableau(((2, 1),), ((1, 2),))


def _upper(n, rng, unipotent):
    b = la.zeros(n)
    for p in range(n):
        for q in range(p, n):
            b[p, q] = Fraction(1) if (p == q and unipotent) else (
                rand_nonzero(rng) if p == q else rand_fraction(rng))
    return la.to_fractions(b)


def test_trailing_bideterminants_n3():
    rng = substream(0, "bidet")
    n, m = 3, 3
    for bt in inv.trailing_bitableaux(n, m):
        for _ in range(5):
            A = la.to_fractions(la.matrix([[rand_fraction(rng) for _ in range(m)] for _ in range(n)]))
            u, b = _upper(n, rng, True), _upper(n, rng, False)
            base = inv.bideterminant(bt, A)
            assert inv.bideterminant(bt, la.mat_mul(u, A)) == base
            assert inv.bideterminant(bt, la.mat_mul(b, A)) == inv.bitableau_character(bt, b) * base


def test_check_invariance_verdicts():
    n = 2
    S = PolyRing(["r11", "r12", "r22"])
    r11, r12, r22 = S.gens()
    rng = substream(0, "inv")

    def point(g):
        return [rand_fraction(g) for _ in range(3)]

    def conj(b, x):
        r = la.matrix([[x[0], x[1]], [0, x[2]]])
        y = la.mat_mul(la.mat_mul(b, r), la.inverse(b))
        return [y[0, 0], y[0, 1], y[1, 1]]

    borel = lambda g: _upper(n, g, False)
    assert inv.check_invariance(r11 + r22, conj, borel, point, 100, rng).status == "invariant"
    v = inv.check_invariance(r12, conj, borel, point, 100, rng)
    assert v.status == "counterexample"


def test_check_invariance_inconclusive_on_poles():
    S = PolyRing(["x"])
    f = lambda pt: Fraction(1) / (pt[0] - pt[0])
    v = inv.check_invariance(f, lambda g, p: p, lambda g: None, lambda g: [Fraction(1)], 5,
                             substream(0, "p"), max_resample=3)
    assert v.status == "inconclusive"


def test_relations_trivial():
    S = PolyRing(["x"])
    x = S.var("x")
    rels = inv.relations_up_to_degree([x, x**2], None, 2)
    assert [r.to_text() for r in rels] == ["g1^2 - g2"]
    T = PolyRing(["i1", "j1"])
    i1, j1 = T.gens()
    G = groebner_basis([i1 * j1], MonomialOrder.degrevlex(T))
    assert [r.to_text() for r in inv.relations_up_to_degree([i1 * j1], G, 1)] == ["g1"]
