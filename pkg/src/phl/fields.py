"""Exact coefficient fields: the rationals and the Gaussian rationals Q(i).

Rationals are ``gmpy2.mpq``. Gaussian rationals are :class:`GaussianRational`,
a pair of ``mpq`` values. Nothing here ever rounds.
"""
from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpq

__all__ = ["mpq", "GaussianRational", "Field", "RATIONAL", "GAUSSIAN", "field_by_name",
           "to_fraction", "format_scalar"]


def _as_mpq(x) -> mpq:
    if isinstance(x, GaussianRational):
        if x.im != 0:
            raise TypeError(f"{x} is not real")
        return x.re
    if isinstance(x, float):
        raise TypeError("floats are not exact scalars")
    return mpq(x)


class GaussianRational:
    """An element re + im*i of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_mpq(re))
        object.__setattr__(self, "im", _as_mpq(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _lift(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)) or type(other).__name__ in ("mpq", "mpz"):
            return GaussianRational(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def norm(self) -> mpq:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        p = self * o.conjugate()
        return GaussianRational(p.re / n, p.im / n)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = GaussianRational(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return format_scalar(self)


class Field:
    """One of the two coefficient fields; carries coercion and formatting."""

    def __init__(self, name: str):
        self.name = name

    @property
    def is_gaussian(self) -> bool:
        return self is GAUSSIAN

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __call__(self, x):
        if self is RATIONAL:
            return _as_mpq(x)
        if isinstance(x, GaussianRational):
            return x
        return GaussianRational(x, 0)

    def imaginary_unit(self):
        if self is not GAUSSIAN:
            raise ValueError("the imaginary unit only exists in Q(i)")
        return GaussianRational(0, 1)

    def join(self, other: Field) -> Field:
        return GAUSSIAN if GAUSSIAN in (self, other) else RATIONAL

    def __repr__(self):
        return f"Field({self.name!r})"


RATIONAL = Field("rational")
GAUSSIAN = Field("gaussian")


def field_by_name(name: str) -> Field:
    try:
        return {"rational": RATIONAL, "gaussian": GAUSSIAN}[name]
    except KeyError:
        raise ValueError(f"unknown field {name!r}; expected 'rational' or 'gaussian'") from None


def to_fraction(x) -> Fraction:
    x = _as_mpq(x)
    return Fraction(int(x.numerator), int(x.denominator))


def format_scalar(x) -> str:
    """'p/q' for rationals, 'a+b*i' style for Gaussian rationals (never floats)."""
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return str(x.re)
        if x.re == 0:
            return f"{x.im}*i"
        sign = "-" if x.im < 0 else "+"
        return f"{x.re}{sign}{abs(x.im)}*i"
    return str(mpq(x))
