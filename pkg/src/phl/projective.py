"""Projective invariants of a preferred connection.

Sign conventions follow :mod:`phl.tensors`. With Ric symmetric the rho tensor
is ``P = -Ric / (n - 1)``, so the round sphere has negative definite P.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from gmpy2 import mpq

from .errors import PreconditionError, ShapeMismatch
from .jets import Jet, jet_from_polynomial
from .tensors import (ConnectionChart, TensorJet, covariant_derivative, curvature, delta,
                      jet_einsum, ricci)

__all__ = ["ProjectiveData", "projective_data", "one_form", "rho", "projective_weyl",
           "weyl_from_parts", "cotton_york", "change_preferred", "rho_from_ricci_flat_change",
           "tractor_curvature", "tractor_curvature_at_base"]


def one_form(components: Sequence, conn: ConnectionChart) -> TensorJet:
    """A one-form on ``conn``'s chart from Jets or polynomial strings."""
    if len(components) != conn.dim:
        raise ShapeMismatch(f"one-form needs {conn.dim} components, got {len(components)}")
    jets = []
    for c in components:
        if isinstance(c, str):
            c = jet_from_polynomial(c, conn.var_names, conn.order, conn.field)
        jets.append(c)
    return TensorJet.from_jets("d", jets)


def rho(conn: ConnectionChart, ric: TensorJet | None = None) -> TensorJet:
    n = conn.dim
    if n <= 1:
        raise PreconditionError("the rho tensor needs dimension >= 2")
    ric = ricci(conn) if ric is None else ric
    d = n * n - 1
    return ric.scale(mpq(-n, d)) + ric.transpose((1, 0)).scale(mpq(-1, d))


def weyl_from_parts(curv: TensorJet, p: TensorJet) -> TensorJet:
    """W[h,j,k,l] = R - P_hl d^k_j - P_hj d^k_l + P_jl d^k_h + P_jh d^k_l."""
    dl = delta(curv.dim, curv.nvars, curv.order, curv.field)
    p = p.truncate(min(p.order, curv.order))
    t1 = jet_einsum("hl,kj->hjkl", p, dl, slots="ddud")
    t2 = jet_einsum("hj,kl->hjkl", p, dl, slots="ddud")
    t3 = jet_einsum("jl,kh->hjkl", p, dl, slots="ddud")
    t4 = jet_einsum("jh,kl->hjkl", p, dl, slots="ddud")
    return curv - t1 - t2 + t3 + t4


def projective_weyl(conn: ConnectionChart) -> TensorJet:
    curv = curvature(conn)
    return weyl_from_parts(curv, rho(conn, ricci(conn, curv)))


def cotton_york(conn: ConnectionChart, p: TensorJet | None = None) -> TensorJet:
    """CY[h,j,k] = (nabla_h P)_jk - (nabla_j P)_hk."""
    p = rho(conn) if p is None else p
    dp = covariant_derivative(p, conn)
    return dp - dp.transpose((1, 0, 2))


def change_preferred(conn: ConnectionChart, upsilon: TensorJet) -> ConnectionChart:
    """Gamma'[k,i,j] = Gamma[k,i,j] + Ups_i d^k_j + Ups_j d^k_i."""
    if not conn.is_torsion_free():
        raise PreconditionError("projective change needs a torsion-free connection")
    if upsilon.slots != "d" or upsilon.dim != conn.dim:
        raise ShapeMismatch("upsilon must be a one-form on the same chart")
    dl = delta(conn.dim, conn.dim, conn.order, conn.field)
    a = jet_einsum("i,kj->kij", upsilon, dl, slots="udd")
    b = jet_einsum("j,ki->kij", upsilon, dl, slots="udd")
    gamma = conn.gamma.truncate(min(conn.order, upsilon.order)) + a + b
    return ConnectionChart(gamma, conn.var_names, conn.name)


def rho_from_ricci_flat_change(upsilon: TensorJet, base: ConnectionChart) -> TensorJet:
    """Rho of change_preferred(base, upsilon) for a Ricci-flat base.

    Under the sign conventions used here this is (nabla' Ups)_hj - Ups_h Ups_j.
    """
    if not ricci(base).is_zero():
        raise PreconditionError("base connection is not Ricci-flat")
    dups = covariant_derivative(upsilon, base)
    return dups - jet_einsum("h,j->hj", upsilon, upsilon, slots="dd", order=dups.order)


@dataclass(frozen=True)
class ProjectiveData:
    conn: ConnectionChart
    ricci: TensorJet
    rho: TensorJet
    weyl: TensorJet
    cotton_york: TensorJet

    def weyl_is_trace_free(self) -> bool:
        w = self.weyl
        return all(jet_einsum(s, w, slots="dd").is_zero()
                   for s in ("kjkl->jl", "hkkl->hl", "hjkk->hj"))


def projective_data(conn: ConnectionChart) -> ProjectiveData:
    curv = curvature(conn)
    ric = ricci(conn, curv)
    p = rho(conn, ric)
    return ProjectiveData(conn, ric, p, weyl_from_parts(curv, p), cotton_york(conn, p))


def tractor_curvature(conn: ConnectionChart, data: ProjectiveData | None = None) -> dict:
    """Map (h, j) with h < j to the (n+1)x(n+1) Jet matrix of the tractor curvature.

    Acting on column vectors (Y, mu): the top-left block is W(d_h, d_j), the
    bottom row is CY(d_h, d_j, .), the last column vanishes.
    """
    data = projective_data(conn) if data is None else data
    n = conn.dim
    order = min(data.weyl.order, data.cotton_york.order)
    w = data.weyl.truncate(order).jets()
    cy = data.cotton_york.truncate(order).jets()
    zero = Jet.zero(n, order, conn.field)
    out = {}
    for h in range(n):
        for j in range(h + 1, n):
            m = np.empty((n + 1, n + 1), dtype=object)
            m.fill(zero)
            for k in range(n):
                for l in range(n):
                    m[k, l] = w[h, j, k, l]
            for l in range(n):
                m[n, l] = cy[h, j, l]
            out[(h, j)] = m
    return out


def tractor_curvature_at_base(conn: ConnectionChart) -> dict:
    """tractor_curvature evaluated at the base point, as exact scalar matrices."""
    return {key: np.vectorize(lambda jet: jet.constant_term(), otypes=[object])(m)
            for key, m in tractor_curvature(conn).items()}
