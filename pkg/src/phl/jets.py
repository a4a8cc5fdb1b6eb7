"""Truncated multivariate power series ("jets") with exact coefficients.

A :class:`Jet` stores the Taylor coefficients of a function at the chart base
point up to total degree ``order``. Coefficients live in a sparse dict keyed by
exponent tuples; zero coefficients are never stored.
"""
from __future__ import annotations

import ast
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from .errors import OrderExhausted, ParseError, ShapeMismatch
from .fields import GAUSSIAN, RATIONAL, Field, format_scalar

__all__ = ["Jet", "jet_from_polynomial", "jet_mul", "jet_inverse", "jet_partial", "monomials"]

DEFAULT_ORDER = 6


def monomials(nvars: int, order: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree <= order, graded then lexicographic."""
    out = []
    for deg in range(order + 1):
        for combo in combinations_with_replacement(range(nvars), deg):
            e = [0] * nvars
            for v in combo:
                e[v] += 1
            out.append(tuple(e))
    return out


class Jet:
    __slots__ = ("nvars", "order", "field", "coeffs")

    def __init__(self, nvars: int, order: int, coeffs=None, field: Field = RATIONAL):
        if order < 0:
            raise OrderExhausted(f"jet order {order} < 0")
        self.nvars = nvars
        self.order = order
        self.field = field
        clean = {}
        for e, c in (coeffs or {}).items():
            if len(e) != nvars:
                raise ShapeMismatch(f"exponent {e} does not have {nvars} entries")
            if sum(e) <= order and c != 0:
                clean[tuple(e)] = field(c)
        self.coeffs = clean

    # construction -------------------------------------------------------
    @classmethod
    def constant(cls, c, nvars: int, order: int = DEFAULT_ORDER, field: Field = RATIONAL) -> Jet:
        return cls(nvars, order, {(0,) * nvars: c}, field)

    @classmethod
    def zero(cls, nvars: int, order: int = DEFAULT_ORDER, field: Field = RATIONAL) -> Jet:
        return cls(nvars, order, {}, field)

    @classmethod
    def variable(cls, i: int, nvars: int, order: int = DEFAULT_ORDER, field: Field = RATIONAL) -> Jet:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, order, {tuple(e): 1}, field)

    def _new(self, coeffs, order=None, field=None) -> Jet:
        j = Jet.__new__(Jet)
        j.nvars = self.nvars
        j.order = self.order if order is None else order
        j.field = field or self.field
        j.coeffs = coeffs
        return j

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> Jet:
        if isinstance(other, Jet):
            if other.nvars != self.nvars:
                raise ShapeMismatch(f"jets in {self.nvars} and {other.nvars} variables")
            return other
        return Jet.constant(other, self.nvars, self.order, self.field.join(
            GAUSSIAN if type(other).__name__ == "GaussianRational" else RATIONAL))

    def __add__(self, other):
        o = self._coerce(other)
        order = min(self.order, o.order)
        field = self.field.join(o.field)
        a, o = self.to_field(field), o.to_field(field)
        out = {e: c for e, c in a.coeffs.items() if sum(e) <= order}
        for e, c in o.coeffs.items():
            if sum(e) > order:
                continue
            s = out.get(e, 0) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return self._new(out, order, field)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            if other == 0:
                return self._new({})
            o = self._coerce(other)
            field = self.field.join(o.field)
            c = field(o.coeffs.get((0,) * self.nvars, 0))
            return self._new({e: field(v) * c for e, v in self.coeffs.items()}, field=field)
        o = self._coerce(other)
        order = min(self.order, o.order)
        field = self.field.join(o.field)
        a, o = self.to_field(field), o.to_field(field)
        out: dict = {}
        for e1, c1 in a.coeffs.items():
            d1 = sum(e1)
            if d1 > order:
                continue
            for e2, c2 in o.coeffs.items():
                if d1 + sum(e2) > order:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        out = {e: c for e, c in out.items() if c != 0}
        return self._new(out, order, field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.inverse()
        return self * (self.field.join(self._coerce(other).field).one / other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("jets only support non-negative integer powers")
        out = Jet.constant(1, self.nvars, self.order, self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def inverse(self) -> Jet:
        """Multiplicative inverse up to ``order``; needs a nonzero constant term."""
        zero = (0,) * self.nvars
        a0 = self.coeffs.get(zero, 0)
        if a0 == 0:
            raise ZeroDivisionError("jet with zero constant term is not invertible")
        inv0 = self.field.one / a0
        # 1/(a0 (1 + t)) = inv0 * sum (-t)^k, t has no constant term
        t = self * inv0 - 1
        result = Jet.constant(1, self.nvars, self.order, self.field)
        power = Jet.constant(1, self.nvars, self.order, self.field)
        for _ in range(self.order):
            power = power * (-t)
            if power.is_zero():
                break
            result = result + power
        return result * inv0

    def partial(self, var: int) -> Jet:
        if not 0 <= var < self.nvars:
            raise ShapeMismatch(f"variable index {var} out of range")
        if self.order == 0:
            raise OrderExhausted("cannot differentiate an order-0 jet")
        out = {}
        for e, c in self.coeffs.items():
            k = e[var]
            if k == 0 or sum(e) > self.order:
                continue
            e2 = e[:var] + (k - 1,) + e[var + 1:]
            out[e2] = c * k
        return self._new(out, self.order - 1)

    def truncate(self, order: int) -> Jet:
        if order > self.order:
            raise OrderExhausted(f"cannot raise jet order from {self.order} to {order}")
        return self._new({e: c for e, c in self.coeffs.items() if sum(e) <= order}, order)

    def to_field(self, field: Field) -> Jet:
        if field is self.field:
            return self
        if field is RATIONAL:
            return self._new({e: RATIONAL(c) for e, c in self.coeffs.items()}, field=RATIONAL)
        return self._new({e: GAUSSIAN(c) for e, c in self.coeffs.items()}, field=GAUSSIAN)

    # inspection ---------------------------------------------------------
    def constant_term(self):
        return self.coeffs.get((0,) * self.nvars, self.field.zero)

    def coefficient(self, exponent: Sequence[int]):
        return self.coeffs.get(tuple(exponent), self.field.zero)

    def is_zero(self) -> bool:
        return not self.coeffs

    def homogeneous_part(self, degree: int) -> Jet:
        return self._new({e: c for e, c in self.coeffs.items() if sum(e) == degree})

    def low_degree(self) -> int | None:
        """Smallest degree carrying a nonzero coefficient, or None for the zero jet."""
        return min((sum(e) for e in self.coeffs), default=None)

    def real_part(self) -> Jet:
        if self.field is RATIONAL:
            return self
        return self._new({e: c.re for e, c in self.coeffs.items() if c.re != 0}, field=RATIONAL)

    def imag_part(self) -> Jet:
        if self.field is RATIONAL:
            return self._new({}, field=RATIONAL)
        return self._new({e: c.im for e, c in self.coeffs.items() if c.im != 0}, field=RATIONAL)

    def __eq__(self, other):
        if isinstance(other, Jet):
            if other.nvars != self.nvars or other.order != self.order:
                return False
            return self.coeffs == other.coeffs
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, self.order, frozenset(self.coeffs.items())))

    def agrees_with(self, other: Jet, order: int | None = None) -> bool:
        """Equality of coefficients up to ``order`` (default: the common order)."""
        if order is None:
            order = min(self.order, other.order)
        return (self.truncate(order) - other.truncate(order)).is_zero()

    def format(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names is not None else [f"x{i}" for i in range(self.nvars)]
        if not self.coeffs:
            return "0"
        terms = []
        for e in sorted(self.coeffs, key=lambda e: (sum(e), [-k for k in e])):
            c = self.coeffs[e]
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            cs = format_scalar(c)
            if self.field is GAUSSIAN and c.re != 0 and c.im != 0:
                cs = f"({cs})"
            if not mono:
                terms.append(cs)
            elif cs == "1":
                terms.append(mono)
            elif cs == "-1":
                terms.append("-" + mono)
            else:
                terms.append(f"{cs}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Jet({self.format()}, order={self.order})"


def jet_mul(a: Jet, b: Jet) -> Jet:
    if a.nvars != b.nvars or a.order != b.order:
        raise ShapeMismatch("jet_mul needs jets with the same variables and order")
    return a * b


def jet_inverse(a: Jet) -> Jet:
    return a.inverse()


def jet_partial(a: Jet, var: int) -> Jet:
    return a.partial(var)


# parsing ----------------------------------------------------------------

class _Evaluator:
    def __init__(self, text, names, order, field, shift):
        self.text = text
        self.names = {n: i for i, n in enumerate(names)}
        self.nvars = len(names)
        self.order = order
        self.field = field
        self.shift = shift

    def fail(self, msg, node):
        raise ParseError(msg, self.text, getattr(node, "col_offset", None))

    def const(self, c):
        return Jet.constant(c, self.nvars, self.order, self.field)

    def visit(self, node) -> Jet:
        if isinstance(node, ast.Expression):
            return self.visit(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                self.fail(f"unsupported literal {node.value!r}", node)
            return self.const(node.value)
        if isinstance(node, ast.Name):
            if node.id == "i" and self.field is GAUSSIAN and "i" not in self.names:
                return self.const(self.field.imaginary_unit())
            if node.id not in self.names:
                self.fail(f"unknown variable {node.id!r}", node)
            v = Jet.variable(self.names[node.id], self.nvars, self.order, self.field)
            if self.shift is not None:
                v = v + self.shift[self.names[node.id]]
            return v
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            val = self.visit(node.operand)
            return -val if isinstance(node.op, ast.USub) else val
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = node.right
                neg = False
                if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                    neg, exp = True, exp.operand
                if not (isinstance(exp, ast.Constant) and type(exp.value) is int) or neg:
                    self.fail("exponents must be non-negative integer literals", node.right)
                return self.visit(node.left) ** exp.value
            left, right = self.visit(node.left), self.visit(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if any(sum(e) > 0 for e in right.coeffs) or right.is_zero():
                    self.fail("division only by nonzero constants", node.right)
                return left * (self.field.one / right.constant_term())
        self.fail(f"unsupported syntax {type(node).__name__}", node)


def jet_from_polynomial(text: str, vars: Sequence[str], order: int = DEFAULT_ORDER,
                        field: Field = RATIONAL, shift: Iterable | None = None) -> Jet:
    """Parse a polynomial in ``vars`` into a jet truncated at ``order``.

    Grammar: integer literals, ``p/q``, variables, ``+ - * ^``, parentheses, and
    ``i`` for the imaginary unit over Q(i). ``shift`` re-centres the chart:
    each variable v is read as ``v + shift[v]``.
    """
    src = text.strip().replace("^", "**")
    if not src:
        raise ParseError("empty expression", text)
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"syntax error: {exc.msg}", text, exc.offset) from None
    shift_vals = None
    if shift is not None:
        shift_vals = [field(s) for s in shift]
        if len(shift_vals) != len(vars):
            raise ShapeMismatch("shift must have one entry per variable")
    return _Evaluator(text, list(vars), order, field, shift_vals).visit(tree)
