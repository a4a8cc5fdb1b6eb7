"""Cone connections over a base chart: real projective, complex and symplectic.

Cone charts append their extra coordinates after the base coordinates:

* real cone: ``(x_1..x_n, q)`` with Q = d_q;
* complex cone: ``(x_1..x_m, q, y_1..y_m, r)``, the realification of the
  holomorphic cone on ``(z_1..z_m, w)`` with z = x + iy, w = q + ir, R = JQ;
* symplectic cone: ``(x_1..x_2n, q, e)`` with Q = d_q, E = d_e.

No Christoffel symbol of a cone depends on q, which is why polynomial jets
are enough to represent it.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

import numpy as np
from gmpy2 import mpq

from .errors import PreconditionError, ShapeMismatch
from .fields import GAUSSIAN, RATIONAL
from .jets import Jet
from . import linalg
from .projective import rho
from .tensors import (ConnectionChart, TensorJet, covariant_derivative, jet_einsum,
                      jet_matrix_inverse, ricci, torsion)

__all__ = ["ConeChart", "SymplecticConeData", "embed_jet", "embed_tensor", "projective_cone",
           "product_connection", "realify", "complex_structure", "complex_cone",
           "symplectic_cone", "ricci_flat_data", "frame_connection", "transform_chart",
           "einstein_cone_metric", "symplectic_cone_form", "dq_tensor", "zero_data", "reconstruct_base", "cone_checks"]


def embed_jet(j: Jet, nvars: int, positions: Sequence[int]) -> Jet:
    """Re-read a jet in a larger chart, variable v going to positions[v]."""
    coeffs = {}
    for e, c in j.coeffs.items():
        e2 = [0] * nvars
        for v, k in enumerate(e):
            e2[positions[v]] = k
        coeffs[tuple(e2)] = c
    return Jet(nvars, j.order, coeffs, j.field)


def embed_tensor(t: TensorJet, dim: int, positions: Sequence[int]) -> TensorJet:
    """Pad a tensor into a chart of dimension ``dim``, index/variable v going to positions[v]."""
    terms = {}
    for e, arr in t.terms.items():
        e2 = [0] * dim
        for v, k in enumerate(e):
            e2[positions[v]] = k
        big = np.full((dim,) * t.rank, t.field.zero, dtype=object)
        for idx in np.ndindex(arr.shape):
            big[tuple(positions[i] for i in idx)] = arr[idx]
        terms[tuple(e2)] = big
    return TensorJet(t.slots, dim, dim, t.order, terms, t.field)


def _gamma_from_entries(entries: Mapping, dim: int, order: int, field) -> TensorJet:
    arr = np.empty((dim, dim, dim), dtype=object)
    arr.fill(Jet.zero(dim, order, field))
    for idx, j in entries.items():
        arr[idx] = j.truncate(order) if j.order > order else j
    return TensorJet.from_jets("udd", arr)


@dataclass(frozen=True)
class ConeChart:
    base: ConnectionChart
    cone_conn: ConnectionChart
    kind: str
    q_index: int
    r_index: int | None = None
    e_index: int | None = None
    data: object = None
    extras: dict = dc_field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.cone_conn.dim


def _check_symmetric_rho(p: TensorJet):
    if not p.is_symmetric():
        raise PreconditionError(
            "rho tensor is not symmetric: the preferred connection does not preserve a "
            "volume form, and the cone would have torsion")


def _cone_gamma(conn: ConnectionChart, p: TensorJet) -> TensorJet:
    n = conn.dim
    N = n + 1
    order = min(conn.order, p.order)
    field = conn.field.join(p.field)
    pos = list(range(n))
    entries = {}
    for (k, i, j) in conn.gamma.nonzero_components():
        entries[(k, i, j)] = embed_jet(conn.christoffel(k, i, j), N, pos)
    for (i, j) in p.nonzero_components():
        entries[(n, i, j)] = embed_jet(p.component(i, j), N, pos)
    one = Jet.constant(1, N, order, field)
    for k in range(n):
        entries[(k, k, n)] = one
        entries[(k, n, k)] = one
    entries[(n, n, n)] = one
    return _gamma_from_entries(entries, N, order, field)


def projective_cone(conn: ConnectionChart) -> ConeChart:
    """The real cone over a preferred connection, on (x..., q)."""
    if not conn.is_torsion_free():
        raise PreconditionError("the base connection has torsion")
    p = rho(conn)
    _check_symmetric_rho(p)
    gamma = _cone_gamma(conn, p)
    names = tuple(conn.var_names) + ("q",)
    cone = ConnectionChart(gamma, names, f"cone({conn.name})" if conn.name else "cone")
    return ConeChart(conn, cone, "real", q_index=conn.dim, data=p)


def product_connection(a: ConnectionChart, b: ConnectionChart) -> ConnectionChart:
    if a.field is not b.field:
        raise ShapeMismatch("product factors must share a coefficient field")
    n, m = a.dim, b.dim
    N = n + m
    order = min(a.order, b.order)
    entries = {}
    for (k, i, j) in a.gamma.nonzero_components():
        entries[(k, i, j)] = embed_jet(a.christoffel(k, i, j).truncate(order), N, range(n))
    for (k, i, j) in b.gamma.nonzero_components():
        entries[(n + k, n + i, n + j)] = embed_jet(b.christoffel(k, i, j).truncate(order), N,
                                                   range(n, N))
    names = _dedupe(list(a.var_names) + list(b.var_names))
    gamma = _gamma_from_entries(entries, N, order, a.field) if entries else \
        TensorJet.zeros("udd", N, N, order, a.field)
    return ConnectionChart(gamma, tuple(names), f"{a.name}x{b.name}")


def _dedupe(names: list[str]) -> list[str]:
    if len(set(names)) == len(names):
        return names
    return [f"{n}_{i + 1}" for i, n in enumerate(names)]


# complex ---------------------------------------------------------------
class _Realifier:
    """Substitutes z_a = x_a + i y_a into holomorphic jets."""

    def __init__(self, m: int, order: int):
        self.m, self.order = m, order
        nv = 2 * m
        self.z = [Jet.variable(a, nv, order, GAUSSIAN)
                  + Jet.variable(m + a, nv, order, GAUSSIAN) * GAUSSIAN.imaginary_unit()
                  for a in range(m)]
        self.powers = [[Jet.constant(1, nv, order, GAUSSIAN)] for _ in range(m)]
        for a in range(m):
            for _ in range(order):
                self.powers[a].append(self.powers[a][-1] * self.z[a])
        self.cache: dict = {}

    def monomial(self, e) -> Jet:
        if e not in self.cache:
            out = self.powers[0][e[0]]
            for a in range(1, self.m):
                out = out * self.powers[a][e[a]]
            self.cache[e] = out
        return self.cache[e]

    def __call__(self, j: Jet) -> Jet:
        out = Jet.zero(2 * self.m, j.order, GAUSSIAN)
        coeffs: dict = {}
        for e, c in j.coeffs.items():
            for e2, c2 in self.monomial(e).coeffs.items():
                if sum(e2) <= j.order:
                    coeffs[e2] = coeffs.get(e2, GAUSSIAN.zero) + c * c2
        return Jet(2 * self.m, j.order, coeffs, GAUSSIAN) if coeffs else out


def realify(conn: ConnectionChart, names: Sequence[str] | None = None) -> ConnectionChart:
    """The real 2m-dimensional connection underlying a holomorphic chart.

    Real coordinates are (x_1..x_m, y_1..y_m) with z = x + iy and J d_x = d_y.
    The result has rational coefficients.
    """
    m = conn.dim
    N = 2 * m
    conn = conn.to_field(GAUSSIAN)
    sub = _Realifier(m, conn.order)
    iu = GAUSSIAN.imaginary_unit()
    entries = {}
    for (c, a, b) in conn.gamma.nonzero_components():
        g = sub(conn.christoffel(c, a, b))
        for ya in (0, 1):
            for yb in (0, 1):
                v = g * (iu ** (ya + yb))
                re, im = v.real_part(), v.imag_part()
                i, j = a + ya * m, b + yb * m
                if not re.is_zero():
                    entries[(c, i, j)] = re
                if not im.is_zero():
                    entries[(m + c, i, j)] = im
    if names is None:
        names = [f"re_{n}" for n in conn.var_names] + [f"im_{n}" for n in conn.var_names]
    gamma = _gamma_from_entries(entries, N, conn.order, RATIONAL) if entries else \
        TensorJet.zeros("udd", N, N, conn.order)
    return ConnectionChart(gamma, tuple(names), f"real({conn.name})")


def complex_structure(m: int, order: int) -> TensorJet:
    """J on (x_1..x_m, y_1..y_m): J d_x_a = d_y_a, J d_y_a = -d_x_a."""
    arr = np.full((2 * m, 2 * m), mpq(0), dtype=object)
    for a in range(m):
        arr[m + a, a] = mpq(1)
        arr[a, m + a] = mpq(-1)
    return TensorJet("ud", 2 * m, 2 * m, order, {(0,) * (2 * m): arr})


def complex_cone(conn: ConnectionChart, rho_c: TensorJet) -> ConeChart:
    """Complex cone over a holomorphic chart with complex rho tensor ``rho_c``.

    Built as the realification of the holomorphic cone on (z..., w) whose
    Christoffels are those of the real construction with P replaced by rho_c.
    """
    if not conn.is_torsion_free():
        raise PreconditionError("the base connection has torsion")
    if rho_c.slots != "dd" or rho_c.dim != conn.dim:
        raise ShapeMismatch("rho_c must be a (0,2) tensor on the base chart")
    if not rho_c.is_symmetric():
        raise PreconditionError("complex rho tensor is not symmetric; the cone would have torsion")
    m = conn.dim
    hol = ConnectionChart(_cone_gamma(conn.to_field(GAUSSIAN), rho_c.to_field(GAUSSIAN)),
                          tuple(conn.var_names) + ("w",), "holomorphic-cone")
    names = [f"x{a + 1}" for a in range(m)] + ["q"] + [f"y{a + 1}" for a in range(m)] + ["r"]
    real = realify(hol, names)
    real = ConnectionChart(real.gamma, real.var_names, f"complex-cone({conn.name})")
    return ConeChart(conn, real, "complex", q_index=m, r_index=2 * m + 1, data=rho_c,
                     extras={"holomorphic": hol, "J": complex_structure(m + 1, real.order)})


# symplectic -------------------------------------------------------------
@dataclass(frozen=True)
class SymplecticConeData:
    nu: TensorJet
    s: TensorJet
    U: TensorJet
    f: Jet
    sigma: TensorJet

    def check(self) -> None:
        if not self.nu.is_antisymmetric():
            raise PreconditionError("nu is not antisymmetric")
        if linalg.det(self.nu.at_base().tolist()) == 0:
            raise PreconditionError("nu is degenerate at the base point")
        if not self.s.is_symmetric():
            raise PreconditionError("s is not symmetric")
        order = min(self.s.order, self.sigma.order)
        lhs = jet_einsum("ik,kj->ij", self.nu, self.sigma, slots="dd", order=order)
        if not lhs.agrees_with(self.s.truncate(order)):
            raise PreconditionError("s(X, Y) != nu(X, sigma Y)")


def _nu_matrix(nu: TensorJet):
    if any(sum(e) for e in nu.terms):
        raise PreconditionError("nu must have constant coefficients (Darboux-type chart)")
    return nu.at_base()


def _check_symplectic_base(base: ConnectionChart, nu: TensorJet):
    if base.dim % 2:
        raise PreconditionError("a symplectic base has even dimension")
    if nu.slots != "dd" or nu.dim != base.dim:
        raise ShapeMismatch("nu must be a (0,2) tensor on the base chart")
    if not nu.is_antisymmetric():
        raise PreconditionError("nu is not antisymmetric")
    if linalg.det(nu.at_base().tolist()) == 0:
        raise PreconditionError("nu is degenerate at the base point")
    if not base.is_torsion_free():
        raise PreconditionError("the base connection has torsion")
    if not covariant_derivative(nu, base).is_zero():
        raise PreconditionError("the base connection does not preserve nu")


def _const_matrix_tensor(mat, slots, dim, order) -> TensorJet:
    arr = np.asarray(mat, dtype=object)
    return TensorJet(slots, dim, dim, order, {(0,) * dim: arr})


def ricci_flat_data(base: ConnectionChart, nu: TensorJet) -> SymplecticConeData:
    """The choice of s, sigma, U, f that makes the symplectic cone Ricci-flat."""
    _check_symplectic_base(base, nu)
    two_n = base.dim
    numat = _nu_matrix(nu)
    nuinv = _const_matrix_tensor(linalg.inverse(numat.tolist()), "uu", two_n, base.order)
    ric = ricci(base)
    s = ric.scale(mpq(1, two_n + 2))
    sigma = jet_einsum("kh,hj->kj", nuinv, s, slots="ud")
    dsigma = covariant_derivative(sigma, base)
    eta = jet_einsum("mmj->j", dsigma, slots="d")
    U = jet_einsum("kj,j->k", nuinv, eta, slots="u").scale(mpq(-1, two_n + 1))
    dU = covariant_derivative(U, base)
    tr_du = jet_einsum("mm->", dU, slots="")
    tr_s2 = jet_einsum("ab,ba->", sigma, sigma, slots="", order=tr_du.order)
    f = (tr_du + tr_s2).scale(mpq(1, two_n)).component()
    return SymplecticConeData(nu, s, U, f, sigma)


def zero_data(base: ConnectionChart, nu: TensorJet) -> SymplecticConeData:
    d = base.dim
    return SymplecticConeData(nu, TensorJet.zeros("dd", d, d, base.order),
                              TensorJet.zeros("u", d, d, base.order),
                              Jet.zero(d, base.order), TensorJet.zeros("ud", d, d, base.order))


def frame_connection(A, omega: Mapping, order: int) -> TensorJet:
    """Christoffels of the connection with nabla_{X_a} X_b = omega[c,a,b] X_c.

    ``A`` is the Jet matrix whose column a holds X_a in coordinates. Then
    Gamma^r_mn = A^r_c (d_m B^c_n + B^a_m B^b_n omega^c_ab) with B = A^-1.
    """
    N = len(A)
    B = jet_matrix_inverse(A)
    field = RATIONAL
    zero = Jet.zero(N, order, field)
    Bm = np.empty((N, N), dtype=object)
    for i in range(N):
        for j in range(N):
            Bm[i, j] = B[i][j].truncate(order + 1) if B[i][j].order > order + 1 else B[i][j]
    Bt = TensorJet.from_jets("ud", Bm)
    At = TensorJet.from_jets("ud", np.array([[A[i][j] for j in range(N)] for i in range(N)],
                                            dtype=object))
    omarr = np.empty((N, N, N), dtype=object)
    omarr.fill(zero)
    for idx, j in omega.items():
        omarr[idx] = j.truncate(order) if j.order > order else j
    om = TensorJet.from_jets("udd", omarr)
    dB = Bt.partial_all()  # [m, c, n]
    inner = dB.truncate(min(dB.order, order)).transpose((1, 0, 2))  # [c, m, n]
    t = jet_einsum("am,cab->cmb", Bt, om, slots="udd", order=order)
    inner = inner + jet_einsum("cmb,bn->cmn", t, Bt, slots="udd", order=order)
    return jet_einsum("rc,cmn->rmn", At, inner, slots="udd", order=order)


def transform_chart(conn: ConnectionChart, A) -> ConnectionChart:
    """Christoffels in new coordinates whose coordinate fields are the columns of A.

    Valid only when the new coordinates differ from the old ones by functions
    of variables on which ``conn`` does not depend (so no jet composition is needed).
    """
    N = conn.dim
    order = conn.order
    At = TensorJet.from_jets("ud", np.array([[A[i][j] for j in range(N)] for i in range(N)],
                                            dtype=object))
    B = jet_matrix_inverse(A)
    Bt = TensorJet.from_jets("ud", np.array([[B[i][j] for j in range(N)] for i in range(N)],
                                            dtype=object))
    dA = At.partial_all()  # [al, be, nu]
    first = jet_einsum("am,abn->bmn", At, dA, slots="udd", order=min(order, dA.order))
    t = jet_einsum("rab,am->rmb", conn.gamma, At, slots="udd", order=order)
    second = jet_einsum("rmb,bn->rmn", t, At, slots="udd", order=order)
    total = first + second.truncate(first.order)
    gamma = jet_einsum("cr,rmn->cmn", Bt, total, slots="udd", order=total.order)
    return ConnectionChart(gamma, conn.var_names, conn.name)


def symplectic_cone(base: ConnectionChart, data: SymplecticConeData) -> ConeChart:
    """The symplectic cone on (x_1..x_2n, q, e), lifts X_i = d_i - lambda_i d_e.

    lambda_j = x^i nu_ij, so [X_i, X_j] = -2 nu_ij E.
    """
    _check_symplectic_base(base, data.nu)
    data.check()
    n2 = base.dim
    N = n2 + 2
    qi, ei = n2, n2 + 1
    numat = _nu_matrix(data.nu)
    order = min(base.order, data.s.order, data.sigma.order, data.U.order, data.f.order)
    pos = list(range(n2))
    emb = lambda j: embed_jet(j.truncate(order) if j.order > order else j, N, pos)  # noqa: E731
    # frame matrix; lambda is linear so order + 1 is exact
    one = Jet.constant(1, N, order + 1)
    zero = Jet.zero(N, order + 1)
    A = [[zero] * N for _ in range(N)]
    for a in range(N):
        A[a][a] = one
    for j in range(n2):
        lam = Jet.zero(N, order + 1)
        for i in range(n2):
            if numat[i, j] != 0:
                lam = lam + Jet.variable(i, N, order + 1) * numat[i, j]
        A[ei][j] = -lam
    omega = {}
    for (k, i, j) in base.gamma.nonzero_components():
        omega[(k, i, j)] = emb(base.christoffel(k, i, j))
    c1 = Jet.constant(1, N, order)
    for i in range(n2):
        for j in range(n2):
            if numat[i, j] != 0:
                omega[(ei, i, j)] = Jet.constant(-numat[i, j], N, order)
    for (i, j) in data.s.nonzero_components():
        omega[(qi, i, j)] = -emb(data.s.component(i, j))
    for (k, i) in data.sigma.nonzero_components():
        sk = emb(data.sigma.component(k, i))
        omega[(k, ei, i)] = sk
        omega[(k, i, ei)] = sk
    nuU = jet_einsum("ik,k->i", data.nu.truncate(min(data.nu.order, data.U.order)), data.U,
                     slots="d")
    for (i,) in nuU.nonzero_components():
        v = emb(nuU.component(i))
        omega[(qi, ei, i)] = v
        omega[(qi, i, ei)] = v
    if not data.f.is_zero():
        omega[(qi, ei, ei)] = emb(data.f)
    for (k,) in data.U.nonzero_components():
        omega[(k, ei, ei)] = -emb(data.U.component(k))
    for a in range(N):
        omega[(a, qi, a)] = c1
        omega[(a, a, qi)] = c1
    gamma = frame_connection(A, omega, order)
    names = tuple(base.var_names) + ("q", "e")
    cone = ConnectionChart(gamma, names, f"symplectic-cone({base.name})")
    return ConeChart(base, cone, "symplectic", q_index=qi, e_index=ei, data=data,
                     extras={"frame": A})


def symplectic_cone_form(cone: ConeChart) -> TensorJet:
    """omega_0 = pi^* nu + dq (x) alpha - alpha (x) dq with alpha = de + lambda.

    The symplectic form is exp(2q) * omega_0, so it is parallel exactly when
    nabla omega_0 = -2 dq (x) omega_0.
    """
    if cone.kind != "symplectic":
        raise PreconditionError("not a symplectic cone")
    N, n2 = cone.dim, cone.base.dim
    order = cone.cone_conn.order + 1
    numat = _nu_matrix(cone.data.nu)
    zero = Jet.zero(N, order)
    alpha = [zero] * N
    alpha[cone.e_index] = Jet.constant(1, N, order)
    for j in range(n2):
        lam = zero
        for i in range(n2):
            if numat[i, j] != 0:
                lam = lam + Jet.variable(i, N, order) * numat[i, j]
        alpha[j] = lam
    arr = np.empty((N, N), dtype=object)
    arr.fill(zero)
    for i in range(n2):
        for j in range(n2):
            arr[i, j] = Jet.constant(numat[i, j], N, order)
    qi = cone.q_index
    for a in range(N):
        arr[qi, a] = arr[qi, a] + alpha[a]
        arr[a, qi] = arr[a, qi] - alpha[a]
    return TensorJet.from_jets("dd", arr)


def einstein_cone_metric(cone: ConeChart) -> TensorJet:
    """h_0 = Ric ⊕ (n - 1) dq^2 for a real cone over an Einstein base.

    The cone metric exp(2q) h_0 is parallel iff nabla h_0 = -2 dq (x) h_0.
    """
    if cone.kind != "real":
        raise PreconditionError("not a real cone")
    n = cone.base.dim
    ric = ricci(cone.base)
    h = embed_tensor(ric, n + 1, list(range(n)))
    arr = np.full((n + 1, n + 1), mpq(0), dtype=object)
    arr[n, n] = mpq(n - 1)
    return h + TensorJet("dd", n + 1, n + 1, h.order, {(0,) * (n + 1): arr})


def dq_tensor(cone: ConeChart, t: TensorJet) -> TensorJet:
    """dq (x) t, new slot first."""
    N = cone.dim
    arr = np.full((N,), mpq(0), dtype=object)
    arr[cone.q_index] = mpq(1)
    dq = TensorJet("d", N, N, t.order, {(0,) * N: arr})
    idx = "abcdefgh"[:t.rank]
    return jet_einsum(f"z,{idx}->z{idx}", dq, t, slots="d" + t.slots)


def reconstruct_base(cone: ConeChart) -> ConnectionChart:
    """Project nabla-hat_X Y back to the base chart, restricted to q = 0."""
    n = cone.base.dim
    g = cone.cone_conn.gamma
    terms = {}
    for e, arr in g.terms.items():
        if any(e[n:]):
            continue
        terms[e[:n]] = arr[:n, :n, :n]
    gamma = TensorJet("udd", n, n, g.order, terms, g.field)
    return ConnectionChart(gamma, cone.base.var_names, cone.base.name)


def cone_checks(cone: ConeChart) -> dict:
    """Exact residual flags for the defining properties of a cone chart."""
    c = cone.cone_conn
    ric = ricci(c)
    q = cone.q_index
    q_free = all(e[q] == 0 for e in c.gamma.terms)
    out = {
        "torsion_zero": torsion(c).is_zero(),
        "ricci_zero": ric.is_zero(),
        "q_independent": q_free,
        "ricci_order": ric.order,
    }
    if cone.kind == "complex":
        out["J_parallel"] = covariant_derivative(cone.extras["J"], c).is_zero()
    return out
