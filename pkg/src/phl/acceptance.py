"""The acceptance suite: one function per criterion, each returning exact sub-checks.

Used by ``phl demo`` and by the test-suite. Nothing here has a tolerance.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpq

from . import linalg
from .catalog import build, non_einstein_chart, symplectic_example
from .classify import classify
from .cone import (cone_checks, dq_tensor, einstein_cone_metric, projective_cone,
                   symplectic_cone_form)
from .errors import PreconditionError
from .fields import format_scalar
from .holonomy import bracket, infinitesimal_holonomy
from .jets import DEFAULT_ORDER, Jet, jet_from_polynomial
from .pipeline import cached_holonomy, make_cone
from .projective import (change_preferred, cotton_york, one_form, projective_data, rho,
                         tractor_curvature_at_base)
from .tensors import ConnectionChart, covariant_derivative, curvature, ricci

__all__ = ["Check", "CriterionResult", "CRITERIA", "run_criterion", "run_all"]


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), detail))
        return bool(passed)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        failed = [c.name for c in self.checks if not c.passed]
        tail = f" (failed: {', '.join(failed)})" if failed else ""
        return f"[{status}] criterion {self.number}: {self.title}{tail}"


def _flat_c1(order):
    r = CriterionResult(1, "flat baseline: P = W = CY = 0, cone holonomy 0")
    for n in (2, 3, 4):
        b = build(f"flat:{n}", order)
        pd = projective_data(b.conn)
        r.add(f"flat:{n} P=W=CY=0", pd.rho.is_zero() and pd.weyl.is_zero()
              and pd.cotton_york.is_zero())
        hol = infinitesimal_holonomy(projective_cone(b.conn).cone_conn)
        r.add(f"flat:{n} holonomy dim 0", hol.dimension == 0, f"dim={hol.dimension}")
    return r


def _cy2d_c2(order):
    r = CriterionResult(2, "2D Cotton-York example: Ric = 2y dx(x)dx, CY = c (dx^dy)(x)dx")
    conn = build("cy2d", order).conn
    ric = ricci(conn)
    expected = jet_from_polynomial("2*y", ["x", "y"], ric.order)
    r.add("Ric = 2y dx(x)dx", ric.component(0, 0) == expected
          and ric.nonzero_components() == [(0, 0)])
    cy = cotton_york(conn)
    c = cy.component(0, 1, 0)
    shape_ok = (cy.nonzero_components() == [(0, 1, 0), (1, 0, 0)]
                and cy.component(1, 0, 0) == -c and c.low_degree() == 0
                and c.coeffs.keys() == {(0, 0)})
    cval = c.constant_term() if shape_ok else None
    r.add("CY = c (dx(x)dy - dy(x)dx)(x)dx", shape_ok)
    r.add("c != 0 and |c| in {2, 4}", cval is not None and cval != 0 and abs(cval) in (2, 4),
          f"c={format_scalar(cval) if cval is not None else 'n/a'} (4 when dx^dy carries a "
          f"factor 1/2)")
    return r


CONE_BASES = ("flat:2", "flat:3", "flat:4", "cy2d", "quadric:3,0,1", "quadric:2,1,1",
              "quadric:4,0,1", "non-einstein:2", "non-einstein:3", "symplectic:4",
              "product:quadric:3,0,1,quadric:3,0,1", "product:non-einstein:2,non-einstein:2",
              "product:quadric:3,0,1,quadric:2,1,1")


def _cones_c3(order):
    r = CriterionResult(3, "cone contract: torsion = 0, Ricci = 0 for every accepted base")
    for target in CONE_BASES:
        for base in ("origin", "generic"):
            try:
                cone = projective_cone(build(target, order, base).conn)
            except PreconditionError as exc:
                r.add(f"{target}@{base} rejected", True, str(exc))
                continue
            chk = cone_checks(cone)
            r.add(f"{target}@{base}", chk["torsion_zero"] and chk["ricci_zero"],
                  f"torsion_zero={chk['torsion_zero']} ricci_zero={chk['ricci_zero']}")
    return r


def _so_c4(order):
    r = CriterionResult(4, "quadric(3,0,1) x quadric(3,0,1): holonomy so(5), dim 10")
    built, cone, hol, rep = cached_holonomy("product:quadric:3,0,1,quadric:3,0,1", "real",
                                            "generic", order)
    r.add("holonomy dim 10", hol.dimension == 10, f"dim={hol.dimension} depth={hol.depth} "
          f"stabilized={hol.stabilized}")
    r.add("1-dim invariant symmetric forms", len(rep.invariant_sym_forms) == 1)
    r.add("representative nondegenerate", rep.sym_representative is not None)
    r.add("so-family label", rep.label.startswith("so("),
          f"label={rep.label} signature={rep.sym_signature}")
    h = einstein_cone_metric(cone)
    dh = covariant_derivative(h, cone.cone_conn)
    r.add("cone metric parallel", (dh + dq_tensor(cone, h.truncate(dh.order)).scale(2)).is_zero(),
          "h = exp(2q) (Ric_M + Ric_N + 3 dq^2)")
    return r


def _sl_c5(order):
    r = CriterionResult(5, "non-einstein(2) x non-einstein(2): holonomy sl(5,R), dim 24")
    built, cone, hol, rep = cached_holonomy("product:non-einstein:2,non-einstein:2", "real",
                                            "generic", order)
    r.add("holonomy dim 24", hol.dimension == 24, f"dim={hol.dimension} depth={hol.depth}")
    r.add("trace-free", rep.trace_free)
    r.add("no invariant bilinear forms",
          not rep.invariant_sym_forms and not rep.invariant_antisym_forms)
    r.add("label sl(5,R)", rep.label == "sl(5,R)", f"label={rep.label}")
    prod = build("product:non-einstein:2,non-einstein:2", order, "origin").conn
    r.add("product CY = 0", cotton_york(prod).is_zero())
    ne = non_einstein_chart(2, order)
    p0 = rho(ne).at_base()
    det0 = linalg.det(p0.tolist())
    r.add("P nondegenerate at origin", det0 != 0,
          f"det P(0) = {format_scalar(det0)}, P(0) = {[[format_scalar(x) for x in row] for row in p0]}")
    dp = covariant_derivative(rho(ne), ne)
    val = dp.component(0, 1, 1).constant_term()
    r.add("(nabla_X1 P)(X2, X2) = -2 + O(1)", val == -2, f"value={format_scalar(val)}")
    return r


def _sp_c6(order):
    r = CriterionResult(6, "symplectic cone over the 2n = 4 example: holonomy sp(6,R), dim 21")
    built, cone, hol, rep = cached_holonomy("symplectic:4", "symplectic", "generic", order)
    r.add("cone Ricci = 0", cone_checks(cone)["ricci_zero"])
    r.add("holonomy dim 21", hol.dimension == 21, f"dim={hol.dimension} depth={hol.depth}")
    r.add("1-dim invariant antisymmetric forms", len(rep.invariant_antisym_forms) == 1)
    r.add("label sp(6,R)", rep.label == "sp(6,R)", f"label={rep.label}")
    conn, nu = symplectic_example(4, order)
    ric = ricci(conn)
    low = {e: a for e, a in ric.terms.items() if sum(e) < 2}
    target = np.full((4, 4), mpq(0), dtype=object)
    target[0, 1] = target[1, 0] = mpq(1)
    ok = set(low) == {(0, 0, 0, 0)} and (low[(0, 0, 0, 0)] == target).all()
    r.add("Ric = 2 dx1.dx2 + O(2)", ok)
    r.add("nabla nu = 0", covariant_derivative(nu, conn).is_zero())
    origin_cone = make_cone(build("symplectic:4", order, "origin"), "symplectic")
    R = curvature(origin_cone.cone_conn)
    q = origin_cone.q_index
    r.add("R(Q, .) = 0 and R(., .)Q = 0",
          all((a[q] == 0).all() and (a[:, :, :, q] == 0).all() for a in R.terms.values()))
    return r


def _complex_c7(order):
    r = CriterionResult(7, "complex cone over cquadric:2: Ricci-flat, torsion-free, nabla J = 0")
    cone = make_cone(build("cquadric:2", order), "complex")
    chk = cone_checks(cone)
    r.add("torsion-free", chk["torsion_zero"])
    r.add("Ricci-flat", chk["ricci_zero"])
    r.add("nabla J = 0", chk["J_parallel"])
    r.add("complex rho has Q(i) coefficients",
          any(getattr(x, "im", 0) != 0 for a in cone.data.terms.values() for x in a.flat))
    return r


def _tractor_c8(order):
    r = CriterionResult(8, "tractor curvature lies in the cone holonomy span")
    for target in ("cy2d", "product:quadric:3,0,1,quadric:3,0,1",
                   "product:non-einstein:2,non-einstein:2"):
        built, cone, hol, rep = cached_holonomy(target, "real", "generic", order)
        mats = tractor_curvature_at_base(built.conn)
        inside = all(hol.algebra.contains(m) for m in mats.values())
        r.add(target, inside, f"{len(mats)} tractor endomorphisms, holonomy dim {hol.dimension}")
    return r


def _random_upsilon(rng: random.Random, names, order) -> list[Jet]:
    out = []
    for _ in names:
        terms = []
        for _ in range(3):
            c = mpq(rng.randint(-3, 3), rng.randint(1, 3))
            mono = "*".join(rng.choice(names) for _ in range(rng.randint(0, 2))) or "1"
            terms.append(f"({c})*{mono}")
        out.append(jet_from_polynomial(" + ".join(terms), names, order))
    return out


def _first_bianchi(conn: ConnectionChart) -> bool:
    R = curvature(conn)
    # R(X,Y)Z + R(Y,Z)X + R(Z,X)Y with R[h, j, k, l] = R(d_h, d_j) d_l component k
    a = R
    b = R.transpose((1, 3, 2, 0))
    c = R.transpose((3, 0, 2, 1))
    return (a + b + c).is_zero()


def _properties_c9(order, samples: int = 20, seed: int = 20240601):
    r = CriterionResult(9, "property suites: Weyl trace-free, W invariance, Bianchi, closure, "
                           "classify conjugation invariance")
    rng = random.Random(seed)
    catalog_conns = [build(t, order, "generic").conn for t in
                     ("cy2d", "quadric:3,0,1", "quadric:2,1,1", "non-einstein:3", "symplectic:4",
                      "product:quadric:3,0,1,quadric:2,1,1")]
    r.add("Weyl trace-free on catalog",
          all(projective_data(c).weyl_is_trace_free() for c in catalog_conns))
    r.add("first Bianchi on catalog", all(_first_bianchi(c) for c in catalog_conns))
    small = order - 1
    invariant = trace_free = True
    for conn in (build("cy2d", small).conn, build("quadric:3,0,1", small, "generic").conn,
                 build("non-einstein:3", small).conn):
        w0 = projective_data(conn).weyl
        for _ in range(samples):
            ups = one_form(_random_upsilon(rng, list(conn.var_names), conn.order), conn)
            pd = projective_data(change_preferred(conn, ups))
            invariant &= pd.weyl.agrees_with(w0)
            trace_free &= pd.weyl_is_trace_free()
    r.add(f"W invariant under {samples} random projective changes (x3 bases)", invariant)
    r.add(f"Weyl trace-free after {samples} random changes (x3 bases)", trace_free)
    closed = True
    for target, kind in (("product:quadric:3,0,1,quadric:3,0,1", "real"),
                         ("product:non-einstein:2,non-einstein:2", "real"),
                         ("symplectic:4", "symplectic"), ("cy2d", "real")):
        closed &= cached_holonomy(target, kind, "generic", order)[2].algebra.is_bracket_closed()
    r.add("holonomy bases bracket-closed", closed)
    conj_ok = True
    details = []
    for target, kind in (("product:quadric:3,0,1,quadric:3,0,1", "real"),
                         ("symplectic:4", "symplectic")):
        _, _, hol, rep = cached_holonomy(target, kind, "generic", order)
        n = hol.algebra.dim
        g = _random_unimodular(rng, n)
        ginv = np.array(linalg.inverse(g.tolist()), dtype=object)
        conj = [g.dot(a).dot(ginv) for a in hol.algebra.basis]
        rep2 = classify(conj)
        same = rep2.label == rep.label and rep2.sym_signature == rep.sym_signature
        conj_ok &= same
        details.append(f"{target}: {rep.label} -> {rep2.label}")
    r.add("classify invariant under conjugation", conj_ok, "; ".join(details))
    return r


def _random_unimodular(rng: random.Random, n: int) -> np.ndarray:
    g = np.identity(n, dtype=object) * mpq(1)
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2)
        k = rng.randint(-2, 2)
        elem = np.identity(n, dtype=object) * mpq(1)
        elem[i, j] = mpq(k)
        g = g.dot(elem)
    return g


CRITERIA = {1: _flat_c1, 2: _cy2d_c2, 3: _cones_c3, 4: _so_c4, 5: _sl_c5, 6: _sp_c6,
            7: _complex_c7, 8: _tractor_c8, 9: _properties_c9}


def run_criterion(number: int, order: int = DEFAULT_ORDER) -> CriterionResult:
    return CRITERIA[number](order)


def run_all(order: int = DEFAULT_ORDER) -> list[CriterionResult]:
    return [run_criterion(k, order) for k in sorted(CRITERIA)]
