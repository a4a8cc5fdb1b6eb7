"""Independent sympy oracles used by the tests."""
import sympy as sp
from gmpy2 import mpq

from phl.fields import GaussianRational


def to_sympy_scalar(c):
    if isinstance(c, GaussianRational):
        return sp.Rational(int(c.re.numerator), int(c.re.denominator)) + \
            sp.I * sp.Rational(int(c.im.numerator), int(c.im.denominator))
    c = mpq(c)
    return sp.Rational(int(c.numerator), int(c.denominator))


def jet_to_sympy(jet, syms):
    expr = sp.Integer(0)
    for e, c in jet.coeffs.items():
        term = to_sympy_scalar(c)
        for s, k in zip(syms, e):
            term *= s ** k
        expr += term
    return sp.expand(expr)


def truncate(expr, syms, order):
    """Taylor polynomial of total degree <= order at the origin."""
    t = sp.Symbol("_t")
    scaled = expr.subs({s: t * s for s in syms}, simultaneous=True)
    series = sp.series(scaled, t, 0, order + 1).removeO()
    return sp.expand(series.subs(t, 1))


def same_jet(jet, expr, syms, order=None):
    order = jet.order if order is None else order
    return sp.expand(jet_to_sympy(jet, syms) - truncate(expr, syms, order)) == 0


def christoffel_lc(metric, syms):
    """Levi-Civita Christoffels G[k][i][j] of a sympy metric."""
    n = len(syms)
    g = sp.Matrix(metric)
    gi = g.inv()
    return [[[sp.simplify(sum(gi[k, l] * (sp.diff(g[l, i], syms[j]) + sp.diff(g[l, j], syms[i])
                                          - sp.diff(g[i, j], syms[l])) for l in range(n)) / 2)
              for j in range(n)] for i in range(n)] for k in range(n)]


def curvature_sympy(G, syms):
    """R[h][j][k][l] = d_h G^k_jl - d_j G^k_hl + G^k_hm G^m_jl - G^k_jm G^m_hl."""
    n = len(syms)
    return [[[[sp.expand(sp.diff(G[k][j][l], syms[h]) - sp.diff(G[k][h][l], syms[j])
                         + sum(G[k][h][m] * G[m][j][l] - G[k][j][m] * G[m][h][l]
                               for m in range(n)))
               for l in range(n)] for k in range(n)] for j in range(n)] for h in range(n)]
