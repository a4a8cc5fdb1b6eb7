import numpy as np
import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from phl.catalog import cotton_york_2d, non_einstein_chart, quadric_chart
from phl.errors import PreconditionError
from phl.jets import jet_from_polynomial
from phl.projective import (change_preferred, cotton_york, one_form, projective_data,
                            projective_weyl, rho, rho_from_ricci_flat_change,
                            tractor_curvature_at_base)
from phl.tensors import ConnectionChart, ricci

from oracles import curvature_sympy, same_jet

NAMES = ["x", "y", "z"]
SYMS = sp.symbols(NAMES)
coef = st.integers(-2, 2)


@st.composite
def upsilons(draw, n=3):
    """Random polynomial one-forms, returned as strings (non-closed in general)."""
    out = []
    for l in range(n):
        a, b, c, d = (draw(coef) for _ in range(4))
        out.append(f"{a} + {b}*{NAMES[l]} + {c}*{NAMES[(l + 1) % n]} + {d}*x*y")
    return out


def ups_tensor(texts, conn):
    n = conn.dim
    texts = [t.replace("z", "0") if n < 3 else t for t in texts[:n]]
    return one_form([jet_from_polynomial(t, NAMES[:n], conn.order) for t in texts], conn)


def sympy_rho(G, syms):
    n = len(syms)
    R = curvature_sympy(G, syms)
    ric = [[sum(R[k][j][k][l] for k in range(n)) for l in range(n)] for j in range(n)]
    c = sp.Integer(n * n - 1)
    return [[sp.expand(-n * ric[j][l] / c - ric[l][j] / c) for l in range(n)] for j in range(n)]


@settings(max_examples=6, deadline=None)
@given(upsilons())
def test_rho_of_flat_change_matches_sympy(texts):
    base = ConnectionChart.flat(3, 4, NAMES)
    ups = ups_tensor(texts, base)
    changed = change_preferred(base, ups)
    u = [sp.sympify(t) for t in texts]
    G = [[[u[i] * int(k == j) + u[j] * int(k == i) for j in range(3)] for i in range(3)]
         for k in range(3)]
    expected = sympy_rho(G, SYMS)
    p = rho(changed)
    for j, l in np.ndindex(3, 3):
        assert same_jet(p.component(j, l), expected[j][l], SYMS)
    assert rho_from_ricci_flat_change(ups, base) == p


@settings(max_examples=4, deadline=None)
@given(upsilons())
def test_weyl_is_projectively_invariant(texts):
    for conn in (cotton_york_2d(4, "generic"), quadric_chart(3, 1, 1, 3, "generic"),
                 non_einstein_chart(3, 3, "generic")):
        ups = ups_tensor(texts, conn)
        w0 = projective_weyl(conn)
        w1 = projective_weyl(change_preferred(conn, ups))
        assert w1.agrees_with(w0)


@pytest.mark.parametrize("conn", [
    cotton_york_2d(4, "generic"), quadric_chart(2, 2, 1, 4, "generic"),
    non_einstein_chart(3, 4, "generic"),
    ConnectionChart.from_christoffels({(0, 1, 1): "x*z", (2, 0, 1): "y", (2, 1, 0): "y"},
                                      NAMES, 4)])
def test_weyl_trace_free(conn):
    assert projective_data(conn).weyl_is_trace_free()


def test_cy2d_cotton_york_and_tractor():
    conn = cotton_york_2d(5)
    pd = projective_data(conn)
    assert pd.weyl.is_zero()
    assert pd.rho.component(0, 0) == jet_from_polynomial("-2*y", ["x", "y"], 4)
    cy = pd.cotton_york
    assert cy.nonzero_components() == [(0, 1, 0), (1, 0, 0)]
    assert cy.component(0, 1, 0).coeffs == {(0, 0): mpq(2)}
    tc = tractor_curvature_at_base(conn)
    assert list(tc) == [(0, 1)]
    assert tc[(0, 1)][2, 0] == 2 and sum(x != 0 for x in tc[(0, 1)].flat) == 1


def test_projectively_flat_catalog():
    for conn in (quadric_chart(3, 0, 1, 4, "generic"), non_einstein_chart(2, 4, "generic")):
        pd = projective_data(conn)
        assert pd.weyl.is_zero() and pd.cotton_york.is_zero()
        assert all(not m.any() for m in
                   (np.vectorize(bool)(v) for v in tractor_curvature_at_base(conn).values()))


def test_non_einstein_rho_and_derivative():
    conn = non_einstein_chart(2, 4)
    p = rho(conn)
    assert p.is_symmetric()
    # P = Id - u u^T with u = (1 + x1, x2)
    assert p.at_base().tolist() == [[0, 0], [0, 1]]
    from phl.tensors import covariant_derivative
    assert covariant_derivative(p, conn).at_base()[0, 1, 1] == -2


def test_preconditions():
    twisted = ConnectionChart.from_christoffels({(0, 0, 1): "x"}, ["x", "y"], 3)
    with pytest.raises(PreconditionError):
        change_preferred(twisted, one_form(["1", "0"], twisted))
    with pytest.raises(PreconditionError):
        rho_from_ricci_flat_change(one_form(["1", "0"], cotton_york_2d(4)), cotton_york_2d(4))
    assert not ricci(cotton_york_2d(4)).is_zero()
    assert cotton_york(ConnectionChart.flat(2, 3)).is_zero()
