"""Built-in connections with checkable properties, and the target-string parser.

Every builder takes a jet ``order`` and a ``base`` point: ``"origin"``,
``"generic"`` (a fixed rational point away from symmetry centres), or an
explicit sequence of rationals. Chart variables are displacements from it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from gmpy2 import mpq

from .errors import CatalogCheckError, ParseError, PreconditionError
from .fields import GAUSSIAN, RATIONAL, GaussianRational
from .jets import DEFAULT_ORDER, Jet, jet_from_polynomial
from . import linalg
from .projective import change_preferred, cotton_york, one_form, projective_data, rho
from .tensors import (ConnectionChart, TensorJet, covariant_derivative, is_einstein,
                      jet_einsum, jet_matrix_inverse, ricci)
from .cone import product_connection

__all__ = ["CatalogEntry", "GENERIC", "base_point", "levi_civita", "flat", "quadric_chart",
           "non_einstein_chart", "cotton_york_2d", "symplectic_example", "standard_nu",
           "complex_quadric_chart", "Built", "build", "CATALOG"]

# numerators/denominators for generic base points; distinct small primes
_GENERIC_SEQ = [mpq(1, 3), mpq(-1, 5), mpq(2, 7), mpq(-1, 4), mpq(3, 11), mpq(-2, 13),
                mpq(1, 6), mpq(-3, 17), mpq(1, 19), mpq(-2, 23)]
_SECOND_SEQ = [mpq(-1, 7), mpq(2, 9), mpq(1, 5), mpq(1, 8), mpq(-2, 15), mpq(1, 12),
               mpq(-1, 10), mpq(2, 21), mpq(-1, 22), mpq(1, 26)]
GENERIC = "generic"


def base_point(base, dim: int, offset: int = 0) -> list:
    """Resolve a base specification to a list of ``dim`` rationals."""
    if base is None or base == "origin":
        return [mpq(0)] * dim
    if base in ("generic", "generic2"):
        seq = _GENERIC_SEQ if base == "generic" else _SECOND_SEQ
        return [seq[(offset + i) % len(seq)] for i in range(dim)]
    pts = list(base)
    if len(pts) != dim:
        raise PreconditionError(f"base point needs {dim} coordinates, got {len(pts)}")
    return pts


def _names(prefix: str, dim: int) -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(dim)]


@dataclass(frozen=True)
class CatalogEntry:
    """Declared properties of a catalog construction, re-verified on build."""
    name: str
    params: dict
    flags: dict
    provenance: str = ""


@dataclass
class Built:
    """A built catalog target: the connection plus optional extra structure."""
    name: str
    conn: ConnectionChart
    entry: CatalogEntry | None = None
    nu: TensorJet | None = None
    rho_c: TensorJet | None = None
    factors: list = field(default_factory=list)

    @property
    def field(self):
        return self.conn.field


def _verify(entry: CatalogEntry, checks: dict):
    for key, expected in entry.flags.items():
        if key not in checks:
            continue
        got = checks[key]() if callable(checks[key]) else checks[key]
        if got != expected:
            raise CatalogCheckError(f"{entry.name}: property {key!r} is {got!r}, "
                                    f"expected {expected!r}")


def levi_civita(metric: Sequence[Sequence[Jet]], names: Sequence[str], name: str = "") -> ConnectionChart:
    """Levi-Civita connection of a metric given as a Jet matrix.

    The result has order one less than the metric.
    """
    n = len(metric)
    g = TensorJet.from_jets("dd", np.array([[metric[i][j] for j in range(n)] for i in range(n)],
                                           dtype=object))
    ginv = jet_matrix_inverse(metric)
    gi = TensorJet.from_jets("uu", np.array([[ginv[i][j] for j in range(n)] for i in range(n)],
                                            dtype=object))
    dg = g.partial_all()  # [a, b, c] = d_a g_bc
    # lowered: G_lij = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    low = (dg.transpose((2, 0, 1)) + dg.transpose((2, 1, 0)) - dg).scale(mpq(1, 2))
    gamma = jet_einsum("kl,lij->kij", gi, low, slots="udd")
    return ConnectionChart(gamma, tuple(names), name)


# builders -------------------------------------------------------------------
def flat(dim: int, order: int = DEFAULT_ORDER, base=None) -> ConnectionChart:
    if dim < 1:
        raise PreconditionError("dimension must be at least 1")
    return ConnectionChart.flat(dim, order, _names("x", dim), name=f"flat:{dim}")


def _quadric_metric(gp: Sequence, u0: Sequence, a, order: int, fld):
    d = len(gp)
    nv = d
    one = Jet.constant(1, nv, order + 1, fld)
    u = [Jet.variable(i, nv, order + 1, fld) + fld(u0[i]) for i in range(d)]
    gu = [u[i] * fld(gp[i]) for i in range(d)]
    G = one
    for i in range(d):
        G = G + u[i] * gu[i]
    if G.constant_term() == 0:
        raise PreconditionError("base point lies on the boundary of the projective chart")
    Gi = G.inverse()
    Gi2 = Gi * Gi
    a = fld(a)
    metric = [[(gu[i] * gu[j] * Gi2 * (-1) + (Gi * fld(gp[i]) if i == j else Jet.zero(nv, order + 1, fld))) * a
               for j in range(d)] for i in range(d)]
    return metric


def quadric_chart(s: int, t: int, a=1, order: int = DEFAULT_ORDER, base=None,
                  verify: bool = True) -> ConnectionChart:
    """Levi-Civita connection of the quadric g(X, X) = a in R^(s,t), a > 0.

    Central projection onto the chart X = sqrt(a) (1, u) / sqrt(1 + g'(u, u)),
    where g' has signature (s - 1, t); the induced metric is
    a (g'/G - (g'u)(g'u)/G^2) with G = 1 + g'(u, u).
    """
    a = mpq(a)
    if s + t < 3:
        raise PreconditionError("a quadric needs s + t >= 3")
    if a <= 0:
        raise PreconditionError("a must be positive; use the identity S(s,t)(a) = S(t,s)(-a)")
    if s < 1:
        raise PreconditionError("g(X,X) = a > 0 has no solutions when s = 0")
    d = s + t - 1
    gp = [1] * (s - 1) + [-1] * t
    u0 = base_point(base, d)
    metric = _quadric_metric(gp, u0, a, order, RATIONAL)
    conn = levi_civita(metric, _names("u", d), f"quadric:{s},{t},{a}")
    if verify:
        entry = CatalogEntry(conn.name, {"s": s, "t": t, "a": str(a)},
                             {"projectively_flat": True, "einstein": True,
                              "ricci_signature": (s - 1, t), "cotton_york_zero": True})
        pd = projective_data(conn)
        _verify(entry, {
            "projectively_flat": pd.weyl.is_zero(),
            "einstein": lambda: bool(is_einstein(conn)),
            "ricci_signature": lambda: linalg.inertia(pd.ricci.at_base().tolist())[:2],
            "cotton_york_zero": pd.cotton_york.is_zero(),
        })
    return conn


def non_einstein_chart(dim: int, order: int = DEFAULT_ORDER, base=None,
                       verify: bool = True) -> ConnectionChart:
    """Flat connection changed by Ups = dx_1 + sum_l x_l dx_l (all l)."""
    if dim < 2:
        raise PreconditionError("dimension must be at least 2")
    names = _names("x", dim)
    x0 = base_point(base, dim)
    f = ConnectionChart.flat(dim, order + 1, names)
    comps = [jet_from_polynomial(f"1 + {names[0]}" if l == 0 else names[l], names, order + 1,
                                 shift=x0) for l in range(dim)]
    ups = one_form(comps, f)
    conn = change_preferred(f, ups)
    conn = ConnectionChart(conn.gamma.truncate(order), tuple(names), f"non-einstein:{dim}")
    if verify:
        entry = CatalogEntry(conn.name, {"dim": dim},
                             {"projectively_flat": True, "ricci_symmetric": True,
                              "einstein": False})
        pd = projective_data(conn)
        _verify(entry, {
            "projectively_flat": pd.weyl.is_zero(),
            "ricci_symmetric": pd.ricci.is_symmetric(),
            "einstein": lambda: bool(is_einstein(conn)),
        })
    return conn


def cotton_york_2d(order: int = DEFAULT_ORDER, base=None, verify: bool = True) -> ConnectionChart:
    """nabla_X X = y^2 Y on (x, y); all other Christoffels vanish."""
    if order < 3:
        raise PreconditionError("the 2D Cotton-York example needs order >= 3")
    x0 = base_point(base, 2)
    conn = ConnectionChart.from_christoffels({(1, 0, 0): "y^2"}, ["x", "y"], order,
                                             name="cy2d", shift=x0)
    if verify:
        expected = jet_from_polynomial("2*y", ["x", "y"], order - 1, shift=x0)
        ric = ricci(conn)
        entry = CatalogEntry("cy2d", {}, {"ricci_2y_dxdx": True, "cotton_york_zero": False})
        _verify(entry, {
            "ricci_2y_dxdx": ric.component(0, 0) == expected and len(ric.nonzero_components()) <= 1,
            "cotton_york_zero": lambda: cotton_york(conn).is_zero(),
        })
    return conn


def standard_nu(two_n: int, order: int = DEFAULT_ORDER) -> TensorJet:
    """nu = dx_1^dx_2 + ... + dx_(2n-1)^dx_2n as a raw antisymmetric array."""
    arr = np.full((two_n, two_n), mpq(0), dtype=object)
    for k in range(0, two_n, 2):
        arr[k, k + 1] = mpq(1)
        arr[k + 1, k] = mpq(-1)
    return TensorJet("dd", two_n, two_n, order, {(0,) * two_n: arr})


# Normalization of the cubic in the symplectic example: nu(Gamma(d_i, d_j), d_l)
# = SYMPLECTIC_SCALE * (third partial of the cubic). Fixed so that the Ricci
# tensor at the origin is dx_1 (x) dx_2 + dx_2 (x) dx_1.
SYMPLECTIC_SCALE = mpq(1, 2)


def _symplectic_cubic(two_n: int) -> str:
    terms = [f"x1*v1*v{j}^2" for j in range(2, two_n + 1)]
    terms += [f"x2*v2*v{k}^2" for k in range(3, two_n + 1)]
    return " + ".join(terms)


def symplectic_example(two_n: int = 4, order: int = DEFAULT_ORDER, base=None,
                       verify: bool = True) -> tuple[ConnectionChart, TensorJet]:
    """The symplectic connection d + sum_(j!=1) x_1 dx_1 dx_j^2 + sum_(k!=1,2) x_2 dx_2 dx_k^2."""
    if two_n < 4 or two_n % 2:
        raise PreconditionError("the symplectic example needs an even dimension >= 4")
    names = _names("x", two_n)
    vnames = _names("v", two_n)
    x0 = base_point(base, two_n)
    cubic = jet_from_polynomial(_symplectic_cubic(two_n), names + vnames, order + 3,
                                shift=list(x0) + [0] * two_n)
    nu = standard_nu(two_n, order)
    nuinv = linalg.inverse(nu.at_base().tolist())
    entries = {}
    for i in range(two_n):
        for j in range(two_n):
            for l in range(two_n):
                d = cubic.partial(two_n + i).partial(two_n + j).partial(two_n + l)
                # keep only the part independent of the auxiliary v variables
                coeffs = {e[:two_n]: c for e, c in d.coeffs.items() if not any(e[two_n:])}
                S = Jet(two_n, order, coeffs) * SYMPLECTIC_SCALE
                if S.is_zero():
                    continue
                for m in range(two_n):
                    if nuinv[l][m] != 0:
                        key = (m, i, j)
                        entries[key] = entries.get(key, Jet.zero(two_n, order)) + S * nuinv[l][m]
    conn = ConnectionChart.from_christoffels(entries, names, order, name=f"symplectic:{two_n}")
    if verify:
        entry = CatalogEntry(conn.name, {"2n": two_n},
                             {"preserves_nu": True, "ricci_symmetric": True})
        _verify(entry, {
            "preserves_nu": lambda: covariant_derivative(nu, conn).is_zero(),
            "ricci_symmetric": lambda: ricci(conn).is_symmetric(),
        })
    return conn, nu


def _complex_generic(dim: int, which: str) -> list:
    re = base_point("generic" if which == "generic" else "generic2", dim)
    im = base_point("generic2" if which == "generic" else "generic", dim, offset=3)
    return [GaussianRational(r, i) for r, i in zip(re, im)]


def complex_quadric_chart(m: int, order: int = DEFAULT_ORDER, base="generic",
                          verify: bool = True) -> tuple[ConnectionChart, TensorJet]:
    """Holomorphic Levi-Civita connection of the complex quadric sum z_i^2 = 1 in C^(m+1).

    Same central-projection formulas as :func:`quadric_chart`, read over Q(i),
    at a complex base point. Returns the chart and the complex rho tensor
    Ric_C / (1 - m), Ric_C being the holomorphic Ricci tensor.
    """
    if m < 2:
        raise PreconditionError("complex quadric charts need m >= 2")
    if base in ("generic", "generic2"):
        u0 = _complex_generic(m, base)
    else:
        u0 = [GAUSSIAN(x) for x in base_point(base, m)]
    metric = _quadric_metric([1] * m, u0, 1, order, GAUSSIAN)
    conn = levi_civita(metric, _names("z", m), f"cquadric:{m}")
    ric = ricci(conn)
    rho_c = ric.scale(mpq(1, 1 - m))
    if verify:
        entry = CatalogEntry(conn.name, {"m": m},
                             {"projectively_flat": True, "ricci_symmetric": True,
                              "einstein": True})
        pd = projective_data(conn)
        _verify(entry, {
            "projectively_flat": pd.weyl.is_zero(),
            "ricci_symmetric": ric.is_symmetric(),
            "einstein": lambda: bool(is_einstein(conn)),
        })
    return conn, rho_c


# target strings -------------------------------------------------------------
CATALOG = ("flat", "quadric", "non-einstein", "cy2d", "symplectic", "cquadric", "product")


def _ints(args: list[str], text: str, count: int | None = None) -> list:
    try:
        vals = [mpq(a) if "/" in a else int(a) for a in args]
    except ValueError:
        raise ParseError("expected integer parameters", text) from None
    if count is not None and len(vals) != count:
        raise ParseError(f"expected {count} parameters", text)
    return vals


def _split_product(body: str) -> list[str]:
    """Split the factor list of a product; nested products are read in prefix form."""
    groups: list[list[str]] = []
    for tok in body.split(","):
        while tok.startswith("product:"):
            groups.append(["product"])
            tok = tok[len("product:"):]
        if tok.split(":")[0] in CATALOG or not groups or groups[-1] == ["product"]:
            groups.append([tok])
        else:
            groups[-1].append(tok)
    items = [",".join(g) for g in groups]

    def take(i: int) -> tuple[str, int]:
        if i >= len(items):
            raise ParseError("product needs exactly two factors", "product:" + body)
        if items[i] != "product":
            return items[i], i + 1
        a, i = take(i + 1)
        b, i = take(i)
        return f"product:{a},{b}", i

    out, i = [], 0
    while i < len(items):
        item, i = take(i)
        out.append(item)
    return out


def _resolve(base, dim: int, offset: int):
    if base in ("generic", "generic2"):
        return base_point(base, dim, offset)
    if base is None or base == "origin":
        return None
    return list(base)[offset:offset + dim]


def build(target: str, order: int = DEFAULT_ORDER, base=None, _offset: int = 0) -> Built:
    """Build a catalog target such as ``quadric:3,0,1`` or ``product:cy2d,flat:2``.

    For products an explicit base point lists the coordinates of both factors.
    """
    target = target.strip()
    kind, _, rest = target.partition(":")
    args = [a for a in rest.split(",") if a] if rest else []
    if kind == "product":
        parts = _split_product(rest)
        if len(parts) != 2:
            raise ParseError("product needs exactly two factors", target)
        a = build(parts[0], order, base, _offset)
        b = build(parts[1], order, base, _offset + a.conn.dim)
        return Built(target, product_connection(a.conn, b.conn), factors=[a, b])
    if kind == "flat":
        (dim,) = _ints(args, target, 1)
        return Built(target, flat(dim, order))
    if kind == "quadric":
        s, t, a = _ints(args, target, 3)
        return Built(target, quadric_chart(s, t, a, order, _resolve(base, s + t - 1, _offset)))
    if kind == "non-einstein":
        (dim,) = _ints(args, target, 1)
        return Built(target, non_einstein_chart(dim, order, _resolve(base, dim, _offset)))
    if kind == "cy2d":
        if args:
            raise ParseError("cy2d takes no parameters", target)
        return Built(target, cotton_york_2d(order, _resolve(base, 2, _offset)))
    if kind == "symplectic":
        (two_n,) = _ints(args, target, 1)
        conn, nu = symplectic_example(two_n, order, _resolve(base, two_n, _offset))
        return Built(target, conn, nu=nu)
    if kind == "cquadric":
        (m,) = _ints(args, target, 1)
        b = "generic2" if base == "generic2" else "generic"
        conn, rho_c = complex_quadric_chart(m, order, b)
        return Built(target, conn, rho_c=rho_c)
    raise ParseError(f"unknown catalog target {kind!r}; expected one of {', '.join(CATALOG)}",
                     target, 0)
