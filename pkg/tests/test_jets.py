import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from phl.errors import OrderExhausted, ParseError, ShapeMismatch
from phl.fields import GAUSSIAN, GaussianRational
from phl.jets import Jet, jet_from_polynomial, monomials

from oracles import jet_to_sympy, same_jet

NV, ORD = 2, 3
X = sp.symbols("x y")
EXPS = monomials(NV, ORD)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6).map(
    lambda f: mpq(f.numerator, f.denominator))
jets = st.dictionaries(st.sampled_from(EXPS), rationals, max_size=6).map(
    lambda d: Jet(NV, ORD, d))


@settings(max_examples=60, deadline=None)
@given(jets, jets, jets)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Jet.zero(NV, ORD)
    assert a * Jet.constant(1, NV, ORD) == a


@settings(max_examples=40, deadline=None)
@given(jets, jets)
def test_product_matches_sympy(a, b):
    expr = jet_to_sympy(a, X) * jet_to_sympy(b, X)
    assert same_jet(a * b, expr, X)


@settings(max_examples=40, deadline=None)
@given(jets)
def test_inverse(a):
    if a.constant_term() == 0:
        with pytest.raises(ZeroDivisionError):
            a.inverse()
        return
    inv = a.inverse()
    assert a * inv == Jet.constant(1, NV, ORD)
    assert same_jet(inv, 1 / jet_to_sympy(a, X), X)


@settings(max_examples=40, deadline=None)
@given(jets, st.integers(0, NV - 1))
def test_partial_matches_sympy(a, var):
    d = a.partial(var)
    assert d.order == ORD - 1
    assert same_jet(d, sp.diff(jet_to_sympy(a, X), X[var]), X, ORD - 1)


@settings(max_examples=30, deadline=None)
@given(jets, jets, st.integers(0, NV - 1))
def test_leibniz(a, b, var):
    lhs = (a * b).partial(var)
    rhs = a.partial(var) * b + a * b.partial(var)
    assert lhs == rhs.truncate(lhs.order)


def test_parse_and_shift():
    j = jet_from_polynomial("(1 + x)^2 - y/3", ["x", "y"], 4)
    assert same_jet(j, (1 + X[0]) ** 2 - X[1] / 3, X)
    shifted = jet_from_polynomial("x*y", ["x", "y"], 3, shift=[mpq(1, 2), 2])
    assert same_jet(shifted, (X[0] + sp.Rational(1, 2)) * (X[1] + 2), X)


def test_truncation_drops_high_degree():
    j = jet_from_polynomial("x^5 + x", ["x"], 3)
    assert j.coeffs == {(1,): mpq(1)}


def test_gaussian_coefficients():
    j = jet_from_polynomial("(1 + i*x)^2", ["x"], 3, GAUSSIAN)
    assert j.coefficient((1,)) == GaussianRational(0, 2)
    assert j.coefficient((2,)) == GaussianRational(-1, 0)
    assert (j * j.inverse()) == Jet.constant(1, 1, 3, GAUSSIAN)


@pytest.mark.parametrize("text", ["x +", "", "z", "x ** y", "sin(x)"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        jet_from_polynomial(text, ["x", "y"], 3)


def test_shape_and_order_errors():
    with pytest.raises(ShapeMismatch):
        Jet(2, 3, {(1,): 1})
    with pytest.raises(OrderExhausted):
        Jet(2, -1)
