import numpy as np
import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from phl.catalog import cotton_york_2d, quadric_chart
from phl.errors import TorsionError
from phl.jets import Jet, jet_from_polynomial
from phl.tensors import (ConnectionChart, TensorJet, covariant_derivative, curvature,
                         is_einstein, jet_einsum, ricci, torsion)

from oracles import christoffel_lc, curvature_sympy, same_jet

ORDER = 4
coef = st.integers(-2, 2)


def random_symmetric_gamma(draw, n, names):
    entries, exprs = {}, {}
    syms = sp.symbols(names)
    for k in range(n):
        for i in range(n):
            for j in range(i, n):
                c0, c1, c2 = draw(coef), draw(coef), draw(coef)
                text = f"{c0} + {c1}*{names[(i + k) % n]} + {c2}*{names[j]}*{names[k]}"
                entries[(k, i, j)] = text
                exprs[(k, i, j)] = exprs[(k, j, i)] = sp.sympify(text.replace("^", "**"),
                                                                 locals=dict(zip(names, syms)))
    return entries, exprs


@st.composite
def connections(draw, n=3):
    names = ["a", "b", "c"][:n]
    entries, exprs = random_symmetric_gamma(draw, n, names)
    full = dict(entries)
    full.update({(k, j, i): v for (k, i, j), v in entries.items()})
    conn = ConnectionChart.from_christoffels(full, names, ORDER)
    G = [[[exprs[(k, i, j)] for j in range(n)] for i in range(n)] for k in range(n)]
    return conn, G, sp.symbols(names)


@settings(max_examples=8, deadline=None)
@given(connections())
def test_curvature_matches_sympy(data):
    conn, G, syms = data
    R = curvature(conn)
    Rs = curvature_sympy(G, syms)
    n = conn.dim
    for idx in np.ndindex((n,) * 4):
        h, j, k, l = idx
        assert same_jet(R.component(*idx), Rs[h][j][k][l], syms)


@settings(max_examples=8, deadline=None)
@given(connections())
def test_bianchi_identities(data):
    conn = data[0]
    R = curvature(conn)
    n = conn.dim
    for h, j, l in np.ndindex(n, n, n):
        for k in range(n):
            s = R.component(h, j, k, l) + R.component(j, l, k, h) + R.component(l, h, k, j)
            assert s.is_zero()
    # second Bianchi: cyclic sum of (nabla_z R)(h, j) over (z, h, j)
    dR = covariant_derivative(R, conn)
    for z, h, j in np.ndindex(n, n, n):
        for k, l in np.ndindex(n, n):
            s = dR.component(z, h, j, k, l) + dR.component(h, j, z, k, l) \
                + dR.component(j, z, h, k, l)
            assert s.is_zero()


def test_torsion_rejected():
    conn = ConnectionChart.from_christoffels({(0, 0, 1): "x"}, ["x", "y"], 3)
    assert not torsion(conn).is_zero()
    with pytest.raises(TorsionError):
        curvature(conn)


@pytest.mark.parametrize("base", ["origin", "generic"])
def test_quadric_gnomonic_closed_form(base):
    # Levi-Civita of the induced metric is Gamma^k_ij = -(g'u_i d^k_j + g'u_j d^k_i) / G
    conn = quadric_chart(3, 1, 1, ORDER, base)
    n = conn.dim
    syms = sp.symbols("u1:4")
    from phl.catalog import base_point
    u0 = [sp.Rational(int(c.numerator), int(c.denominator)) for c in base_point(base, n)]
    u = [s + c for s, c in zip(syms, u0)]
    gp = [1, 1, -1]
    G = 1 + sum(g * x * x for g, x in zip(gp, u))
    for k, i, j in np.ndindex(n, n, n):
        expr = -(gp[i] * u[i] * int(k == j) + gp[j] * u[j] * int(k == i)) / G
        assert same_jet(conn.christoffel(k, i, j), expr, syms)


def test_levi_civita_oracle_small_quadric():
    conn = quadric_chart(3, 0, 2, 3, "origin")
    syms = sp.symbols("u1:3")
    G = 1 + syms[0] ** 2 + syms[1] ** 2
    g = [[2 * (int(i == j) / G - syms[i] * syms[j] / G ** 2) for j in range(2)] for i in range(2)]
    Gs = christoffel_lc(g, syms)
    for k, i, j in np.ndindex(2, 2, 2):
        assert same_jet(conn.christoffel(k, i, j), Gs[k][i][j], syms)


def test_cy2d_ricci():
    conn = cotton_york_2d(5)
    ric = ricci(conn)
    assert ric.component(0, 0) == jet_from_polynomial("2*y", ["x", "y"], 4)
    assert ric.nonzero_components() == [(0, 0)]


def test_einstein_reasons():
    assert is_einstein(quadric_chart(3, 0, 1, 4, "generic")).einstein
    assert is_einstein(ConnectionChart.flat(2, 3)).reason == "degenerate-ricci"
    assert is_einstein(cotton_york_2d(4)).reason == "ricci-not-parallel"


def test_einsum_and_transpose():
    a = TensorJet.from_jets("dd", [[jet_from_polynomial(f"{i}+{j}*x", ["x", "y"], 2) for j in range(2)]
                                   for i in range(2)])
    at = a.transpose((1, 0))
    assert at.component(0, 1) == a.component(1, 0)
    tr = jet_einsum("ii->", a, slots="")
    assert tr.component() == jet_from_polynomial("1 + x", ["x", "y"], 2)
    assert (a - a).is_zero() and (a + a) == a.scale(2)
    assert not a.is_symmetric() and (a + at).is_symmetric() and (a - at).is_antisymmetric()
    assert a.partial_all().component(0, 1, 1) == Jet.constant(1, 2, 1)
    assert a.at_base()[1, 1] == mpq(1)
