import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from fadhm import _kernels
from fadhm.groebner import (
    ResourceLimitError,
    groebner_basis,
    ideal_contains,
    is_groebner,
    krull_dimension,
    monomials_form_regular_sequence,
    normal_form,
)
from fadhm.orders import MonomialOrder
from fadhm.poly import PolyRing, Polynomial

from conftest import sym_vars, to_sympy

R = PolyRing(["x", "y", "z"])
x, y, z = R.gens()

small = st.dictionaries(
    st.tuples(*[st.integers(0, 2)] * 3), st.integers(-3, 3).filter(bool), min_size=1, max_size=3
).map(lambda d: Polynomial(R, d))
ideals = st.lists(small.filter(lambda p: p.total_degree() > 0), min_size=1, max_size=3)


def sympy_basis(gens, order):
    G = sympy.groebner([to_sympy(g) for g in gens], *sym_vars(R), order=order, domain="QQ")
    return {sympy.expand(g.as_expr()) for g in G.exprs}


def test_lex_oracle():
    S = PolyRing(["x", "y"])
    a, b = S.gens()
    G = groebner_basis([a**2 - b, a * b - 1], MonomialOrder.lex(S))
    assert G.to_text() == ["x - y^2", "y^3 - 1"]
    assert krull_dimension(G) == 0
    assert normal_form(a**2, G) == b


def test_non_ci_pair():
    G = groebner_basis([x, x * y], MonomialOrder.degrevlex(R))
    assert G.to_text() == ["x"]
    assert krull_dimension(G) == 2


def test_unit_ideal():
    G = groebner_basis([x, x + 1], MonomialOrder.degrevlex(R))
    assert G.to_text() == ["1"]
    assert krull_dimension(G) == -1


def test_budget_exhaustion_keeps_partial():
    gens = [x**3 - y * z, y**3 - x * z, z**3 - x * y, x * y * z - 1]
    with pytest.raises(ResourceLimitError) as info:
        groebner_basis(gens, MonomialOrder.lex(R), max_pairs=2)
    assert info.value.partial
    assert "pairs_processed" in info.value.stats


@pytest.mark.parametrize("order,name", [("grevlex", "degrevlex"), ("lex", "lex")])
@given(gens=ideals)
def test_matches_sympy(gens, order, name):
    G = groebner_basis(gens, MonomialOrder.from_name(name, R))
    assert {to_sympy(g) for g in G} == sympy_basis(gens, order)


@given(ideals)
def test_basis_properties(gens):
    G = groebner_basis(gens, MonomialOrder.degrevlex(R))
    assert is_groebner(G)
    for g in gens:
        assert ideal_contains(G, g)
    again = groebner_basis(list(G), MonomialOrder.degrevlex(R))
    assert again.to_text() == G.to_text()


@given(ideals)
def test_dimension_independent_of_order(gens):
    d1 = krull_dimension(groebner_basis(gens, MonomialOrder.degrevlex(R)))
    d2 = krull_dimension(groebner_basis(gens, MonomialOrder.lex(R)))
    assert d1 == d2


@given(ideals, small, small)
def test_normal_form_is_module_map(gens, f, g):
    G = groebner_basis(gens, MonomialOrder.degrevlex(R))
    assert normal_form(f + g, G) == normal_form(f, G) + normal_form(g, G)
    assert normal_form(normal_form(f, G) * normal_form(g, G), G) == normal_form(f * g, G)


def test_regular_sequence_of_monomials():
    e = lambda p: p.leading_monomial(MonomialOrder.degrevlex(R))
    assert monomials_form_regular_sequence([e(x * y), e(z**2)])
    assert not monomials_form_regular_sequence([e(x), e(x * y)])
    with pytest.raises(ValueError):
        monomials_form_regular_sequence([])


# kernels


monomial_sets = st.lists(st.tuples(*[st.integers(0, 2)] * 7).filter(any), min_size=1, max_size=8)


@given(monomial_sets)
def test_dimension_kernel_matches_bruteforce(exps):
    assert _kernels.monomial_ideal_dimension(exps, 7) == _kernels.dimension_bruteforce(exps, 7)


@given(monomial_sets)
def test_fallback_matches_active_kernel(exps):
    masks = _kernels.support_masks(exps)
    masks = masks[_kernels.minimal_supports_py(masks)]
    assert _kernels.min_hitting_set_py(masks, 7) == _kernels.min_hitting_set(masks, 7)
    assert bool(_kernels.pairwise_disjoint_py(masks)) == bool(_kernels.pairwise_disjoint(masks))


def test_wide_ring_uses_bigint_path():
    S = PolyRing([f"v{k}" for k in range(70)])
    g = S.gens()
    G = groebner_basis([g[0] * g[69], g[1]], MonomialOrder.degrevlex(S))
    assert krull_dimension(G) == 68
