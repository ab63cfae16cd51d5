from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import load
from frobforge.errors import BudgetExceeded
from frobforge.frobenius import (
    check_budget,
    digit_monomials,
    digit_split,
    f_signature_estimate,
    fedder_is_fpure,
    free_rank,
    pushforward,
)
from frobforge.polynomial import Polynomial
from oracles import fedder_oracle, hypersurface_a_e

HYPERSURFACES = [
    "quadric_p3", "cusp_p5", "cusp_p7", "fermat_cubic_p5", "fermat_cubic_p7",
    "fermat_quintic_p2", "fermat_quartic_p3", "fermat_quartic_p5",
]


@given(
    st.dictionaries(st.tuples(st.integers(0, 30), st.integers(0, 30)), st.integers(1, 4), max_size=8),
    st.integers(1, 3),
)
def test_digit_split_round_trip(terms, e):
    p = 5 if e == 1 else 2
    f = Polynomial(terms, p, 2)
    q = p**e
    parts = digit_split(f, e)
    total = Polynomial({}, p, 2)
    for a, c in parts.items():
        assert all(0 <= x < q for x in a)
        total = total + c.frobenius(q) * Polynomial.monomial(a, p)
    assert total == f


def test_digit_monomials_count():
    assert len(digit_monomials(3, 4)) == 64
    assert len(set(digit_monomials(2, 5))) == 25


@pytest.mark.parametrize("name", HYPERSURFACES)
def test_fedder_against_multinomial_oracle(name):
    R = load(name)
    assert fedder_is_fpure(R) == fedder_oracle(R.ideal[0].terms, R.p)


@pytest.mark.parametrize("name,expected", [
    ("cusp_p5", False), ("cusp_p7", False), ("fermat_cubic_p7", True), ("fermat_cubic_p5", False),
])
def test_fedder_fixture_values(name, expected):
    assert fedder_is_fpure(load(name)) is expected


@pytest.mark.parametrize("name,e", [
    ("quadric_p3", 1), ("quadric_p3", 2), ("cusp_p5", 1), ("cusp_p7", 1), ("fermat_cubic_p7", 1),
    ("fermat_cubic_p5", 1), ("fermat_quintic_p2", 1), ("fermat_quintic_p2", 2), ("fermat_quartic_p5", 1),
])
def test_free_rank_against_hypersurface_oracle(name, e):
    R = load(name)
    assert free_rank(R, e).a_e == hypersurface_a_e(R.ideal[0].terms, R.n, R.p, e)


@pytest.mark.parametrize("name", HYPERSURFACES)
def test_fedder_iff_free_summand(name):
    R = load(name)
    assert fedder_is_fpure(R) == (free_rank(R, 1).a_e >= 1)


@pytest.mark.parametrize("name,n,p", [("poly1_p2", 1, 2), ("poly1_p3", 1, 3), ("poly2_p2", 2, 2), ("poly2_p3", 2, 3)])
@pytest.mark.parametrize("e", [1, 2])
def test_regular_ring_is_free(name, n, p, e):
    rec = free_rank(load(name), e)
    assert rec.a_e == p ** (e * n)
    assert rec.ratio == 1


def test_f_signature_quadric():
    recs = f_signature_estimate(load("quadric_p3"), 2)
    assert [r.a_e for r in recs] == [5, 41]
    assert recs[1].ratio == Fraction(41, 81)
    assert recs[0].as_dict() == {"e": 1, "a_e": 5, "ratio": "5/9"}


@pytest.mark.parametrize("name", ["quadric_p3", "cusp_p5", "fermat_cubic_p5", "poly2_p3"])
def test_pushforward_conservation(name):
    # dim of F_*^e R in degree D/q equals dim R_D, over S and through the pruned classes
    R = load(name)
    M = pushforward(R, 1)
    for D in range(0, 3 * M.q):
        assert M.cokernel_dim(D) == R.hilbert(D)
        assert M.class_module(D % M.q).dim(D) == R.hilbert(D)


def test_pushforward_generator_degrees():
    M = pushforward(load("cusp_p5"), 1)
    assert M.ngens == 25
    assert M.generator_degrees()[1] == Fraction(3, 5)


def test_budget():
    R = load("poly3_p3")
    check_budget(R, 2)
    with pytest.raises(BudgetExceeded):
        check_budget(R, 3, budget=1000)
    with pytest.raises(ValueError):
        check_budget(R, 0)
