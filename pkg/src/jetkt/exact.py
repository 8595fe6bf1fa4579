"""Exact scalars: rationals, Gaussian rationals, and their string forms."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


def as_fraction(value) -> Fraction:
    """Coerce an int, Fraction or "a/b" string to a Fraction.

    Floats are refused because they silently lose exactness.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {value!r} as an exact rational")


def format_rational(value) -> str:
    """Serialize as "numerator/denominator" (denominator always present)."""
    if isinstance(value, GaussianRational):
        if value.imag != 0:
            raise ValueError("complex value has no rational string form")
        value = value.real
    f = as_fraction(value)
    return f"{f.numerator}/{f.denominator}"


class GaussianRational:
    """a + b*i with rational a, b.

    Needed for the current-algebra brackets [J^a, J^b] = i f^ab_c J^c, which
    force complex entries in Hermitian bases.
    """

    __slots__ = ("real", "imag")

    def __init__(self, real=0, imag=0):
        self.real = as_fraction(real)
        self.imag = as_fraction(imag)

    @staticmethod
    def _lift(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.real + o.real, self.imag + o.imag)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.real, -self.imag)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.real - o.real, self.imag - o.imag)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(
            self.real * o.real - self.imag * o.imag,
            self.real * o.imag + self.imag * o.real,
        )

    __rmul__ = __mul__

    def conjugate(self):
        return GaussianRational(self.real, -self.imag)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        norm = o.real * o.real + o.imag * o.imag
        if norm == 0:
            raise ZeroDivisionError("division by zero")
        num = self * o.conjugate()
        return GaussianRational(num.real / norm, num.imag / norm)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.real == o.real and self.imag == o.imag

    def __hash__(self):
        if self.imag == 0:
            return hash(self.real)
        return hash((self.real, self.imag))

    def __bool__(self):
        return self.real != 0 or self.imag != 0

    def __repr__(self):
        if self.imag == 0:
            return f"{self.real}"
        return f"({self.real}{'+' if self.imag >= 0 else '-'}{abs(self.imag)}i)"


I = GaussianRational(0, 1)


def simplify_scalar(value):
    """Demote a Gaussian rational with zero imaginary part to a Fraction."""
    if isinstance(value, GaussianRational) and value.imag == 0:
        return value.real
    return value
