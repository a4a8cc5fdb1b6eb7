"""Evidence-based identification of matrix Lie algebras.

The decision uses the dimension, trace-freeness, invariant bilinear forms and
the commutant (as an associative algebra: real, complex or quaternionic type).
Every label is re-verified against its defining invariants before it is emitted.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

import numpy as np
from gmpy2 import mpq

from .errors import PreconditionError
from . import linalg
from .holonomy import EndoSet, bracket

__all__ = ["ClassificationReport", "invariant_bilinear_forms", "commutant", "signature",
           "classify", "division_type"]


def _basis(algebra) -> list[np.ndarray]:
    if isinstance(algebra, EndoSet):
        return list(algebra.basis)
    return [np.asarray(a, dtype=object) for a in algebra]


def _fiber_dim(algebra, basis) -> int:
    if isinstance(algebra, EndoSet):
        return algebra.dim
    if not basis:
        raise ValueError("cannot infer the fiber dimension of an empty list")
    return basis[0].shape[0]


def _solve(unknowns: list[np.ndarray], equations) -> list[np.ndarray]:
    """Nullspace of the linear map c -> [eq(sum c_i U_i) for eq] with matrix unknowns U_i."""
    if not unknowns:
        return []
    cols = []
    for u in unknowns:
        col = []
        for eq in equations:
            col.extend(eq(u).flat)
        cols.append(col)
    if not cols[0]:
        return [u.copy() for u in unknowns]
    rows = [list(r) for r in zip(*cols)]
    out = []
    for v in linalg.nullspace(rows, len(unknowns)):
        m = sum((u * c for u, c in zip(unknowns, v)), np.zeros_like(unknowns[0]))
        out.append(np.array([[mpq(x) for x in r] for r in m], dtype=object))
    return out


def _unit(n, i, j) -> np.ndarray:
    m = np.full((n, n), mpq(0), dtype=object)
    m[i, j] = mpq(1)
    return m


def invariant_bilinear_forms(algebra) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Bases of symmetric and antisymmetric S with A^T S + S A = 0 for every A."""
    basis = _basis(algebra)
    n = _fiber_dim(algebra, basis)
    eqs = [lambda S, A=A: A.T.dot(S) + S.dot(A) for A in basis]
    sym = [_unit(n, i, j) + _unit(n, j, i) if i != j else _unit(n, i, i)
           for i in range(n) for j in range(i, n)]
    anti = [_unit(n, i, j) - _unit(n, j, i) for i in range(n) for j in range(i + 1, n)]
    return _solve(sym, eqs), _solve(anti, eqs)


def commutant(algebra) -> list[np.ndarray]:
    basis = _basis(algebra)
    n = _fiber_dim(algebra, basis)
    units = [_unit(n, i, j) for i in range(n) for j in range(n)]
    return _solve(units, [lambda C, A=A: bracket(C, A) for A in basis])


def signature(form) -> tuple[int, int]:
    pos, neg, zero = linalg.inertia(np.asarray(form, dtype=object).tolist())
    if zero:
        raise PreconditionError("signature of a degenerate form")
    return pos, neg


def _nondegenerate_member(forms: list[np.ndarray]):
    """A nondegenerate element of span(forms), trying small integer combinations."""
    if not forms:
        return None
    k = len(forms)
    for coeffs in iproduct(range(-1, 3), repeat=min(k, 4)):
        coeffs = tuple(coeffs) + (0,) * (k - len(coeffs))
        if not any(coeffs):
            continue
        m = sum((f * c for f, c in zip(forms, coeffs)), np.zeros_like(forms[0]))
        if linalg.det(m.tolist()) != 0:
            return m
    return None


def _pure(c: np.ndarray) -> np.ndarray:
    n = c.shape[0]
    return c - np.identity(n, dtype=object) * (mpq(np.trace(c)) / n)


def division_type(comm: list[np.ndarray], n: int) -> tuple[str, dict]:
    """Classify the commutant as 'real', 'complex', 'quaternionic' or 'other'.

    For complex and quaternionic types the pure (trace-free) part P of the
    commutant must satisfy P^2 = -N(P) Id with N positive definite.
    """
    if len(comm) == 1:
        return "real", {}
    if len(comm) not in (2, 4):
        return "other", {}
    ident = np.identity(n, dtype=object)
    ech = linalg.Echelon(n * n)
    ech.add(list(ident.flat))
    pures = []
    for c in comm:
        p = _pure(c)
        if any(x != 0 for x in p.flat) and ech.add(list(p.flat)):
            pures.append(p)
    if len(pures) != len(comm) - 1:
        return "other", {}
    gram = [[None] * len(pures) for _ in pures]
    for i, a in enumerate(pures):
        for j, b in enumerate(pures):
            s = -(a.dot(b) + b.dot(a)) / 2
            lam = s[0, 0]
            if any(x != 0 for x in (s - ident * lam).flat):
                return "other", {}
            gram[i][j] = mpq(lam)
    pos, neg, zero = linalg.inertia(gram)
    if neg or zero:
        return "other", {}
    kind = "complex" if len(pures) == 1 else "quaternionic"
    evidence = {"pure_norms": gram}
    # an exact complex structure when the norm is a rational square
    if len(pures) == 1:
        num, den = gram[0][0].numerator, gram[0][0].denominator
        rn, rd = _isqrt_exact(int(num)), _isqrt_exact(int(den))
        if rn is not None and rd is not None:
            evidence["J"] = pures[0] * mpq(rd, rn)
    return kind, evidence


def _isqrt_exact(k: int):
    from math import isqrt
    r = isqrt(k)
    return r if r * r == k else None


@dataclass
class ClassificationReport:
    dimension: int
    fiber_dim: int
    trace_free: bool
    invariant_sym_forms: list
    invariant_antisym_forms: list
    sym_representative: object
    sym_signature: tuple | None
    commutant_dim: int
    commutant_type: str
    complex_structure: object
    label: str
    evidence: dict = field(default_factory=dict)


def _label_so(p, q):
    if q == 0 or p == 0:
        return f"so({p + q})"
    return f"so({max(p, q)},{min(p, q)})"


def classify(algebra) -> ClassificationReport:
    basis = _basis(algebra)
    n = _fiber_dim(algebra, basis)
    d = len(basis)
    trace_free = all(np.trace(a) == 0 for a in basis)
    sym, anti = invariant_bilinear_forms(algebra)
    comm = commutant(algebra)
    ctype, cev = division_type(comm, n) if comm else ("other", {})
    rep = _nondegenerate_member(sym)
    sig = None
    if rep is not None:
        sig = signature(rep)
        if sig[1] > sig[0]:  # forms are defined up to scale; report p >= q
            rep, sig = -rep, (sig[1], sig[0])
    arep = _nondegenerate_member(anti)
    label = "unrecognized"
    if ctype == "real":
        if rep is not None and d == n * (n - 1) // 2:
            label = _label_so(*sig)
        elif arep is not None and not sym and n % 2 == 0 and d == n * (n + 1) // 2:
            label = f"sp({n},R)"
        elif not sym and not anti and trace_free and d == n * n - 1:
            label = f"sl({n},R)"
        elif not sym and not anti and d == n * n:
            label = f"gl({n},R)"
    elif ctype == "complex" and n % 2 == 0:
        m = n // 2
        if rep is not None and trace_free and d == m * m - 1:
            label = f"su({sig[0] // 2},{sig[1] // 2})" if sig[1] else f"su({m})"
        elif not sym and not anti and trace_free and d == 2 * (m * m - 1):
            label = f"sl({m},C)"
        elif len(sym) == 2 and not anti and d == m * (m - 1):
            label = f"so({m},C)"
        elif len(anti) == 2 and not sym and m % 2 == 0 and d == m * (m + 1):
            label = f"sp({m},C)"
    elif ctype == "quaternionic" and n % 4 == 0:
        k = n // 4
        if rep is not None and d == k * (2 * k + 1):
            label = f"sp({sig[0] // 4},{sig[1] // 4})" if sig[1] else f"sp({k})"
        elif not sym and not anti and d == 4 * k * k - 1:
            label = f"sl({k},H)"
    report = ClassificationReport(d, n, trace_free, sym, anti, rep, sig, len(comm), ctype,
                                  cev.get("J"), label, {"commutant": ctype})
    if label != "unrecognized":
        _reverify(report, basis)
    return report


def _reverify(report: ClassificationReport, basis: list[np.ndarray]) -> None:
    """Check the defining invariants behind the emitted label on the input basis."""
    n = report.fiber_dim
    ident = np.identity(n, dtype=object)
    for S in report.invariant_sym_forms + report.invariant_antisym_forms:
        for A in basis:
            if any(x != 0 for x in (A.T.dot(S) + S.dot(A)).flat):
                raise AssertionError("reported invariant form is not invariant")
    if report.sym_representative is not None and linalg.det(report.sym_representative.tolist()) == 0:
        raise AssertionError("reported metric is degenerate")
    J = report.complex_structure
    if J is not None:
        if any(x != 0 for x in (J.dot(J) + ident).flat):
            raise AssertionError("J^2 != -Id")
        for A in basis:
            if any(x != 0 for x in bracket(J, A).flat):
                raise AssertionError("J does not commute with the algebra")
    span = linalg.Echelon(n * n)
    for a in basis:
        span.add(list(a.flat))
    for i, a in enumerate(basis):
        for b in basis[i + 1:]:
            if not span.contains(list(bracket(a, b).flat)):
                raise AssertionError("input basis is not bracket-closed")
    if report.label.startswith("sl(") and not report.trace_free:
        raise AssertionError("sl label on an algebra that is not trace-free")
