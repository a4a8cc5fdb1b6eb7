import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from phl import linalg

small = st.integers(-3, 3).map(mpq)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def to_sp(m):
    return sp.Matrix([[sp.Rational(int(x.numerator), int(x.denominator)) for x in r] for r in m])


@settings(max_examples=60, deadline=None)
@given(matrices(4, 5))
def test_rank_and_nullspace_match_sympy(m):
    assert linalg.rank(m) == to_sp(m).rank()
    ns = linalg.nullspace(m, 5)
    assert len(ns) == 5 - to_sp(m).rank()
    for v in ns:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)


@settings(max_examples=60, deadline=None)
@given(matrices(4, 4))
def test_det_and_inverse(m):
    d = linalg.det(m)
    assert d == to_sp(m).det()
    if d != 0:
        inv = linalg.inverse(m)
        assert linalg.matmul(m, inv) == linalg.identity(4)
    else:
        with pytest.raises((ZeroDivisionError, ValueError)):
            linalg.inverse(m)


@settings(max_examples=60, deadline=None)
@given(matrices(4, 4))
def test_inertia_matches_eigenvalue_signs(m):
    s = [[m[i][j] + m[j][i] for j in range(4)] for i in range(4)]
    eig = to_sp(s).eigenvals()
    pos = sum(k for v, k in eig.items() if sp.re(sp.N(v, 30)) > 1e-20)
    neg = sum(k for v, k in eig.items() if sp.re(sp.N(v, 30)) < -1e-20)
    assert linalg.inertia(s) == (pos, neg, 4 - pos - neg)


def test_echelon_contains():
    e = linalg.Echelon(3)
    assert e.add([1, 2, 3])
    assert not e.add([2, 4, 6])
    assert e.contains([mpq(1, 2), 1, mpq(3, 2)])
    assert not e.contains([0, 0, 1])
