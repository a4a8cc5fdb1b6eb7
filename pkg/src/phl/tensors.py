"""Tensors with jet components, connections in a chart, and curvature.

Index conventions (fixed throughout the package):

* ``gamma[k, i, j]`` is the Christoffel symbol with ``nabla_{d_i} d_j = gamma[k, i, j] d_k``.
* ``R[h, j, k, l]`` holds ``R(d_h, d_j) d_l = R[h, j, k, l] d_k`` with
  ``R(X, Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y]``.
* ``Ric[j, l] = sum_k R[k, j, k, l]``.
* Covariant derivatives put the new (derivative) slot first.
* Two-form valued objects are raw antisymmetric arrays: dx^dy = dx(x)dy - dy(x)dx.

A :class:`TensorJet` is stored by monomial: ``terms[exponent]`` is a numpy
object array of exact scalars with one axis per slot. Contractions are numpy
einsums over those arrays, summed over monomial pairs of admissible degree.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import OrderExhausted, PreconditionError, ShapeMismatch, TorsionError
from .fields import GAUSSIAN, RATIONAL, Field
from .jets import DEFAULT_ORDER, Jet, jet_from_polynomial
from . import linalg

__all__ = ["TensorJet", "ConnectionChart", "EinsteinCheck", "jet_einsum", "torsion",
           "curvature", "ricci", "covariant_derivative", "is_einstein", "is_parallel",
           "delta", "const_tensor"]

_LETTERS = string.ascii_letters


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _nonzero(arr) -> bool:
    return any(x != 0 for x in arr.flat)


class TensorJet:
    """A tensor field near the base point, known up to total degree ``order``."""

    __slots__ = ("slots", "dim", "nvars", "order", "field", "terms")

    def __init__(self, slots: str, dim: int, nvars: int, order: int, terms=None,
                 field: Field = RATIONAL):
        if order < 0:
            raise OrderExhausted(f"tensor order {order} < 0")
        if set(slots) - {"u", "d"}:
            raise ValueError(f"slots must be a string of 'u'/'d', got {slots!r}")
        self.slots = slots
        self.dim = dim
        self.nvars = nvars
        self.order = order
        self.field = field
        shape = (dim,) * len(slots)
        clean = {}
        for e, arr in (terms or {}).items():
            if sum(e) > order:
                continue
            arr = np.asarray(arr, dtype=object)
            if arr.shape != shape:
                raise ShapeMismatch(f"component array {arr.shape} does not match {shape}")
            if _nonzero(arr):
                clean[tuple(e)] = arr
        self.terms = clean

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, slots, dim, nvars, order=DEFAULT_ORDER, field=RATIONAL) -> TensorJet:
        return cls(slots, dim, nvars, order, {}, field)

    @classmethod
    def from_jets(cls, slots: str, jets, dim: int | None = None) -> TensorJet:
        """Build from a nested sequence / object array of Jets (or a mapping index -> Jet)."""
        if isinstance(jets, Mapping):
            items = list(jets.items())
            if not items:
                raise ValueError("empty mapping; use TensorJet.zeros")
            sample = items[0][1]
            if dim is None:
                raise ValueError("dim is required when building from a mapping")
            arr = np.empty((dim,) * len(slots), dtype=object)
            arr.fill(None)
            for idx, j in items:
                arr[tuple(idx) if not isinstance(idx, int) else idx] = j
            zero = Jet.zero(sample.nvars, sample.order, sample.field)
            for idx in np.ndindex(arr.shape):
                if arr[idx] is None:
                    arr[idx] = zero
        else:
            arr = np.empty(np.shape(jets) if not isinstance(jets, Jet) else (), dtype=object)
            if isinstance(jets, Jet):
                arr[()] = jets
            else:
                for idx in np.ndindex(arr.shape):
                    arr[idx] = _getitem(jets, idx)
        flat = list(arr.flat)
        first = flat[0]
        nvars = first.nvars
        order = min(j.order for j in flat)
        field = RATIONAL
        for j in flat:
            field = field.join(j.field)
        dim = arr.shape[0] if arr.ndim else (dim or nvars)
        terms: dict = {}
        for idx in np.ndindex(arr.shape):
            for e, c in arr[idx].coeffs.items():
                if sum(e) > order:
                    continue
                if e not in terms:
                    terms[e] = np.full(arr.shape, field.zero, dtype=object)
                terms[e][idx] = field(c)
        return cls(slots, dim, nvars, order, terms, field)

    def _new(self, terms, slots=None, order=None, field=None) -> TensorJet:
        return TensorJet(self.slots if slots is None else slots, self.dim, self.nvars,
                         self.order if order is None else order, terms, field or self.field)

    @property
    def rank(self) -> int:
        return len(self.slots)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.dim,) * self.rank

    # component access ----------------------------------------------------
    def component(self, *idx) -> Jet:
        coeffs = {e: arr[idx] for e, arr in self.terms.items() if arr[idx] != 0}
        return Jet(self.nvars, self.order, coeffs, self.field)

    def jets(self) -> np.ndarray:
        out = np.empty(self.shape, dtype=object)
        for idx in np.ndindex(self.shape):
            out[idx] = self.component(*idx)
        return out

    def at_base(self) -> np.ndarray:
        """Component values at the base point (constant Taylor coefficients)."""
        arr = self.terms.get((0,) * self.nvars)
        if arr is None:
            return np.full(self.shape, self.field.zero, dtype=object)
        return arr.copy()

    def coefficient(self, exponent) -> np.ndarray:
        arr = self.terms.get(tuple(exponent))
        if arr is None:
            return np.full(self.shape, self.field.zero, dtype=object)
        return arr.copy()

    def nonzero_components(self) -> list[tuple[int, ...]]:
        mask = set()
        for arr in self.terms.values():
            for idx in np.ndindex(self.shape):
                if arr[idx] != 0:
                    mask.add(idx)
        return sorted(mask)

    # arithmetic ---------------------------------------------------------
    def _check(self, other: TensorJet):
        if self.slots != other.slots or self.dim != other.dim or self.nvars != other.nvars:
            raise ShapeMismatch(f"tensor {self.slots}/{self.dim} vs {other.slots}/{other.dim}")

    def __add__(self, other: TensorJet) -> TensorJet:
        self._check(other)
        order = min(self.order, other.order)
        field = self.field.join(other.field)
        a, b = self.to_field(field), other.to_field(field)
        out = {e: arr for e, arr in a.terms.items() if sum(e) <= order}
        for e, arr in b.terms.items():
            if sum(e) > order:
                continue
            out[e] = out[e] + arr if e in out else arr
        return self._new(out, order=order, field=field)

    def __neg__(self) -> TensorJet:
        return self._new({e: -arr for e, arr in self.terms.items()})

    def __sub__(self, other: TensorJet) -> TensorJet:
        return self + (-other)

    def scale(self, c) -> TensorJet:
        """Multiply by an exact scalar or by a scalar Jet."""
        if isinstance(c, Jet):
            return jet_einsum(f"{_LETTERS[:self.rank]}->{_LETTERS[:self.rank]}",
                              self, slots=self.slots, scalar=c)
        field = self.field
        if type(c).__name__ == "GaussianRational":
            field = GAUSSIAN
        c = field(c)
        src = self.to_field(field)
        return src._new({e: arr * c for e, arr in src.terms.items()}, field=field)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def to_field(self, field: Field) -> TensorJet:
        if field is self.field:
            return self
        conv = np.frompyfunc(field, 1, 1)
        return self._new({e: conv(arr).astype(object) for e, arr in self.terms.items()},
                         field=field)

    def truncate(self, order: int) -> TensorJet:
        if order > self.order:
            raise OrderExhausted(f"cannot raise tensor order from {self.order} to {order}")
        return self._new({e: a for e, a in self.terms.items() if sum(e) <= order}, order=order)

    def transpose(self, perm: Sequence[int]) -> TensorJet:
        slots = "".join(self.slots[p] for p in perm)
        return self._new({e: np.transpose(a, perm) for e, a in self.terms.items()}, slots=slots)

    def partial_all(self) -> TensorJet:
        """Coordinate partials, new covariant slot first (needs nvars == dim)."""
        if self.nvars != self.dim:
            raise ShapeMismatch("partial_all needs one chart variable per index value")
        if self.order == 0:
            raise OrderExhausted("cannot differentiate an order-0 tensor")
        out: dict = {}
        for e, arr in self.terms.items():
            for v in range(self.nvars):
                k = e[v]
                if k == 0:
                    continue
                e2 = e[:v] + (k - 1,) + e[v + 1:]
                if e2 not in out:
                    out[e2] = np.full((self.dim,) + self.shape, self.field.zero, dtype=object)
                out[e2][v] = out[e2][v] + arr * k
        return TensorJet("d" + self.slots, self.dim, self.nvars, self.order - 1, out, self.field)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, TensorJet):
            return NotImplemented
        if (self.slots, self.dim, self.nvars, self.order) != (
                other.slots, other.dim, other.nvars, other.order):
            return False
        return (self - other).is_zero()

    def agrees_with(self, other: TensorJet, order: int | None = None) -> bool:
        if order is None:
            order = min(self.order, other.order)
        return (self.truncate(order) - other.truncate(order)).is_zero()

    def is_symmetric(self, a: int = 0, b: int = 1) -> bool:
        perm = list(range(self.rank))
        perm[a], perm[b] = perm[b], perm[a]
        return (self - self.transpose(perm)).is_zero()

    def is_antisymmetric(self, a: int = 0, b: int = 1) -> bool:
        perm = list(range(self.rank))
        perm[a], perm[b] = perm[b], perm[a]
        return (self + self.transpose(perm)).is_zero()

    def __repr__(self):
        return (f"TensorJet(slots={self.slots!r}, dim={self.dim}, order={self.order}, "
                f"monomials={len(self.terms)})")


def _getitem(nested, idx):
    for i in idx:
        nested = nested[i]
    return nested


def jet_einsum(subscripts: str, *operands: TensorJet, slots: str, order: int | None = None,
               scalar: Jet | None = None) -> TensorJet:
    """Einsum of one or two tensor jets with jet multiplication of the coefficients.

    ``scalar`` (a Jet) multiplies the single-operand form.
    """
    if scalar is not None:
        operands = operands + (_scalar_tensor(scalar),)
        lhs, rhs = subscripts.split("->")
        subscripts = f"{lhs},->{rhs}"
    if order is None:
        order = min(op.order for op in operands)
    field = RATIONAL
    for op in operands:
        field = field.join(op.field)
    operands = tuple(op.to_field(field) for op in operands)
    first = operands[0]
    out: dict = {}
    if len(operands) == 1:
        for e, arr in first.terms.items():
            if sum(e) <= order:
                out[e] = np.einsum(subscripts, arr)
    else:
        a, b = operands
        b_items = [(e, sum(e), arr) for e, arr in b.terms.items()]
        for ea, A in a.terms.items():
            da = sum(ea)
            if da > order:
                continue
            for eb, db, B in b_items:
                if da + db > order:
                    continue
                r = np.einsum(subscripts, A, B)
                e = _add_exp(ea, eb)
                out[e] = out[e] + r if e in out else r
    out = {e: np.asarray(r, dtype=object) for e, r in out.items()}
    return TensorJet(slots, first.dim, first.nvars, order, out, field)


def _scalar_tensor(j: Jet) -> TensorJet:
    terms = {e: np.array(c, dtype=object) for e, c in j.coeffs.items()}
    return TensorJet("", 0, j.nvars, j.order, terms, j.field)


def delta(dim: int, nvars: int, order: int = DEFAULT_ORDER, field: Field = RATIONAL) -> TensorJet:
    """Kronecker delta as a (1,1) tensor with slots 'ud'."""
    arr = np.full((dim, dim), field.zero, dtype=object)
    for i in range(dim):
        arr[i, i] = field.one
    return TensorJet("ud", dim, nvars, order, {(0,) * nvars: arr}, field)


def const_tensor(slots: str, values, nvars: int, order: int = DEFAULT_ORDER,
                 field: Field = RATIONAL) -> TensorJet:
    arr = np.asarray(values, dtype=object)
    conv = np.frompyfunc(field, 1, 1)
    arr = conv(arr).astype(object) if arr.ndim else np.array(field(arr[()]), dtype=object)
    dim = arr.shape[0] if arr.ndim else nvars
    return TensorJet(slots, dim, nvars, order, {(0,) * nvars: arr}, field)


@dataclass(frozen=True)
class ConnectionChart:
    """Christoffel symbols of a connection in a coordinate chart, as jets at the base point."""

    gamma: TensorJet
    var_names: tuple[str, ...]
    name: str = ""

    def __post_init__(self):
        if self.gamma.slots != "udd":
            raise ShapeMismatch("gamma must have slots 'udd'")
        if self.gamma.nvars != self.gamma.dim or len(self.var_names) != self.gamma.dim:
            raise ShapeMismatch("a chart needs one variable per dimension")

    @property
    def dim(self) -> int:
        return self.gamma.dim

    @property
    def order(self) -> int:
        return self.gamma.order

    @property
    def field(self) -> Field:
        return self.gamma.field

    @classmethod
    def flat(cls, dim: int, order: int = DEFAULT_ORDER, var_names=None, field=RATIONAL,
             name: str = "flat") -> ConnectionChart:
        names = tuple(var_names or _default_names(dim))
        return cls(TensorJet.zeros("udd", dim, dim, order, field), names, name)

    @classmethod
    def from_christoffels(cls, entries: Mapping, var_names: Sequence[str],
                          order: int = DEFAULT_ORDER, field: Field = RATIONAL,
                          name: str = "", shift=None) -> ConnectionChart:
        """entries maps (k, i, j) to a Jet or a polynomial string; omitted entries are 0."""
        names = tuple(var_names)
        dim = len(names)
        arr = np.empty((dim, dim, dim), dtype=object)
        zero = Jet.zero(dim, order, field)
        arr.fill(zero)
        for (k, i, j), val in entries.items():
            if not all(0 <= x < dim for x in (k, i, j)):
                raise ShapeMismatch(f"Christoffel index {(k, i, j)} out of range for dim {dim}")
            if isinstance(val, str):
                val = jet_from_polynomial(val, names, order, field, shift=shift)
            arr[k, i, j] = val.truncate(order) if val.order > order else val
        gamma = TensorJet.from_jets("udd", arr)
        if gamma.order < order:
            raise OrderExhausted("Christoffel jets carry less than the requested order")
        return cls(gamma, names, name)

    def christoffel(self, k: int, i: int, j: int) -> Jet:
        return self.gamma.component(k, i, j)

    def truncate(self, order: int) -> ConnectionChart:
        return ConnectionChart(self.gamma.truncate(order), self.var_names, self.name)

    def to_field(self, field: Field) -> ConnectionChart:
        return ConnectionChart(self.gamma.to_field(field), self.var_names, self.name)

    def is_torsion_free(self) -> bool:
        return self.gamma.is_symmetric(1, 2)


def _default_names(dim: int) -> list[str]:
    return [f"x{i + 1}" for i in range(dim)]


def torsion(conn: ConnectionChart) -> TensorJet:
    """T[k, i, j] = gamma[k, i, j] - gamma[k, j, i]."""
    g = conn.gamma
    return g - g.transpose((0, 2, 1))


def curvature(conn: ConnectionChart) -> TensorJet:
    """R[h, j, k, l]; raises TorsionError for connections with torsion."""
    if not conn.is_torsion_free():
        raise TorsionError("curvature formulas assume a torsion-free connection")
    g = conn.gamma
    if g.order == 0:
        raise OrderExhausted("curvature needs Christoffel jets of order >= 1")
    dg = g.partial_all()  # [h, k, j, l]
    lin = dg.transpose((0, 2, 1, 3))  # [h, j, k, l]
    quad = jet_einsum("khm,mjl->hjkl", g, g, slots="ddud", order=dg.order)
    r = lin + quad
    return r - r.transpose((1, 0, 2, 3))


def ricci(conn: ConnectionChart, curv: TensorJet | None = None) -> TensorJet:
    r = curvature(conn) if curv is None else curv
    return jet_einsum("kjkl->jl", r, slots="dd")


def covariant_derivative(t: TensorJet, conn: ConnectionChart) -> TensorJet:
    """nabla t with the derivative slot first; order drops by one."""
    g = conn.gamma
    if t.dim != g.dim or t.nvars != g.nvars:
        raise ShapeMismatch("tensor and connection live on different charts")
    if t.order < 1:
        raise OrderExhausted("covariant derivative of an order-0 tensor")
    order = min(t.order - 1, g.order)
    result = t.partial_all().truncate(order)
    idx = _LETTERS[:t.rank]
    m, a = _LETTERS[t.rank], _LETTERS[t.rank + 1]
    for p, kind in enumerate(t.slots):
        c = idx[p]
        out = m + idx[:p] + a + idx[p + 1:]
        if kind == "u":
            term = jet_einsum(f"{a}{m}{c},{idx}->{out}", g, t, slots="d" + t.slots, order=order)
            result = result + term
        else:
            term = jet_einsum(f"{c}{m}{a},{idx}->{out}", g, t, slots="d" + t.slots, order=order)
            result = result - term
    return result


def is_parallel(t: TensorJet, conn: ConnectionChart) -> bool:
    return covariant_derivative(t, conn).is_zero()


@dataclass(frozen=True)
class EinsteinCheck:
    einstein: bool
    reason: str
    coefficient: Jet | None = None

    def __bool__(self):
        return self.einstein


def is_einstein(conn: ConnectionChart, metric: TensorJet | None = None) -> EinsteinCheck:
    """Einstein in the sense of a symmetric, parallel, nondegenerate Ricci tensor.

    With ``metric`` given, also requires Ric = c * metric and reports c.
    Nondegeneracy is decided at the base point.
    """
    ric = ricci(conn)
    if not ric.is_symmetric():
        return EinsteinCheck(False, "asymmetric-ricci")
    if not covariant_derivative(ric, conn).is_zero():
        return EinsteinCheck(False, "ricci-not-parallel")
    if linalg.det(ric.at_base().tolist()) == 0:
        return EinsteinCheck(False, "degenerate-ricci")
    coefficient = Jet.constant(1, conn.dim, ric.order, ric.field)
    if metric is not None:
        base = metric.at_base()
        i, j = next(((i, j) for i in range(conn.dim) for j in range(conn.dim)
                     if base[i, j] != 0), (None, None))
        if i is None:
            raise PreconditionError("reference metric vanishes at the base point")
        order = min(ric.order, metric.order)
        coefficient = ric.component(i, j).truncate(order) * metric.component(i, j).truncate(order).inverse()
        if not (metric.truncate(order).scale(coefficient) - ric.truncate(order)).is_zero():
            return EinsteinCheck(False, "not-proportional-to-metric")
    return EinsteinCheck(True, "einstein", coefficient)


def jet_matrix_inverse(rows) -> list[list[Jet]]:
    """Inverse of a square Jet matrix whose constant part is invertible.

    Gauss-Jordan elimination; every pivot has a nonzero constant term, so it
    is a unit in the jet ring.
    """
    n = len(rows)
    if n == 0:
        return []
    sample = rows[0][0]
    nv, order, field = sample.nvars, min(j.order for r in rows for j in r), sample.field
    for r in rows:
        for j in r:
            field = field.join(j.field)
    one = Jet.constant(1, nv, order, field)
    zero = Jet.zero(nv, order, field)
    m = [[j.truncate(order).to_field(field) for j in r] + [one if i == c else zero for c in range(n)]
         for i, r in enumerate(rows)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c].constant_term() != 0), None)
        if p is None:
            raise ZeroDivisionError("Jet matrix is singular at the base point")
        m[c], m[p] = m[p], m[c]
        inv = m[c][c].inverse()
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and not m[r][c].is_zero():
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [r[n:] for r in m]
