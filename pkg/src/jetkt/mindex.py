"""Multi-indices, binomials, jet enumeration and the A/B/C counting functions.

Multi-indices are plain tuples of nonnegative ints; ``MultiIndex`` only adds
validation and the partial arithmetic.  Jets are enumerated in graded
lexicographic order: first by total order ``|m|``, then lexicographically
descending in the components, so for N=2 the order is
(0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod

KINDS = ("A", "B", "C")
_KIND_SHIFT = {"A": 0, "B": 1, "C": 2}


class MultiIndex(tuple):
    """An immutable tuple of N >= 1 nonnegative integers."""

    def __new__(cls, components):
        comps = tuple(int(c) for c in components)
        if not comps:
            raise ValueError("a multi-index needs at least one component")
        if any(c < 0 for c in comps):
            raise ValueError(f"negative component in {comps}")
        return super().__new__(cls, comps)

    @classmethod
    def zero(cls, n):
        return cls((0,) * n)

    @classmethod
    def unit(cls, n, mu):
        """The unit index in direction ``mu`` (0-based)."""
        return cls(tuple(1 if k == mu else 0 for k in range(n)))

    @property
    def norm(self):
        return sum(self)

    @property
    def dim(self):
        return len(self)

    def __add__(self, other):
        _check_same_length(self, other)
        return MultiIndex(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        diff = subtract(self, other)
        if diff is None:
            raise ValueError(f"{tuple(self)} - {tuple(other)} leaves the nonnegative cone")
        return diff

    def factorial(self):
        return prod(factorial(c) for c in self)

    def __repr__(self):
        return f"MultiIndex({tuple(self)})"


def _check_same_length(m, n):
    if len(m) != len(n):
        raise ValueError(f"length mismatch: {len(m)} vs {len(n)}")


def subtract(m, n):
    """Componentwise ``m - n``, or None when some component would go negative."""
    _check_same_length(m, n)
    out = tuple(a - b for a, b in zip(m, n))
    if any(c < 0 for c in out):
        return None
    return MultiIndex(out)


def add_unit(m, mu):
    return MultiIndex(c + 1 if k == mu else c for k, c in enumerate(m))


def sub_unit(m, mu):
    """``m - mu`` or None if ``m[mu] == 0``."""
    if m[mu] == 0:
        return None
    return MultiIndex(c - 1 if k == mu else c for k, c in enumerate(m))


def binomial(n: int, k: int) -> int:
    """C(n, k) for n >= 0, extended by zero outside 0 <= k <= n."""
    if n < 0:
        raise ValueError("binomial needs n >= 0")
    if k < 0 or k > n:
        return 0
    return comb(n, k)


def binom_ext(n: int, k: int) -> int:
    """Binomial used inside charge formulas: zero whenever n < 0 or k < 0.

    This is the convention under which truncated sums over an empty range of
    multi-indices vanish; it differs from the generalized binomial for n < 0.
    """
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


def multi_binomial(m, n) -> int:
    """Product of componentwise binomials; zero if any n_i > m_i."""
    _check_same_length(m, n)
    return prod(binomial(a, b) for a, b in zip(m, n))


@lru_cache(maxsize=None)
def _enumerate(n_dims, p):
    out = []
    for order in range(p + 1):
        out.extend(_shell(n_dims, order))
    return tuple(out)


def _shell(n_dims, order):
    if n_dims == 1:
        return [MultiIndex((order,))]
    out = []
    for first in range(order, -1, -1):
        for rest in _shell(n_dims - 1, order - first):
            out.append(MultiIndex((first,) + tuple(rest)))
    return out


def enumerate_jets(N: int, p: int) -> list[MultiIndex]:
    """All multi-indices of length N with |m| <= p, graded-lex ordered."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if p < 0:
        return []
    return list(_enumerate(N, p))


def shell(N: int, k: int) -> list[MultiIndex]:
    """Multi-indices with |m| == k."""
    if k < 0:
        return []
    return list(_shell(N, k))


def jet_key(m):
    """Sort key reproducing the enumerate_jets order."""
    return (sum(m), tuple(-c for c in m))


def count(kind: str, N: int, p: int) -> int:
    """A(p), B(p) or C(p) in closed form: C(N+p+s, N+s) with s = 0, 1, 2.

    Negative p gives 0 (empty sum).  For N = 1 the C weight refers to a
    second component that does not exist; the closed form is used anyway.
    """
    s = _shift(kind)
    if N < 1:
        raise ValueError("N must be >= 1")
    if p < 0:
        return 0
    return comb(N + p + s, N + s)


def count_by_enumeration(kind: str, N: int, p: int) -> int:
    """Weighted brute-force sum over enumerate_jets(N, p).

    Weights: A -> 1, B -> (m1+1), C -> (m1+1)(m2+1).  C needs N >= 2.
    """
    s = _shift(kind)
    if s == 2 and N < 2:
        raise ValueError("C weight needs two components (N >= 2)")
    total = 0
    for m in enumerate_jets(N, p):
        w = 1
        for comp in m[:s]:
            w *= comp + 1
        total += w
    return total


def _shift(kind):
    try:
        return _KIND_SHIFT[kind]
    except KeyError:
        raise ValueError(f"unknown counting kind {kind!r}") from None


class FormalSeries:
    """Power series in one variable truncated at a fixed order.

    ``coeffs[k]`` is the coefficient of zeta**k; the list always has
    ``order + 1`` entries.  Coefficients may be Fractions or anything
    supporting +, -, * with them (for instance linear forms).
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order=None):
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        coeffs = coeffs[: order + 1]
        coeffs += [Fraction(0)] * (order + 1 - len(coeffs))
        self.coeffs = [Fraction(c) if isinstance(c, int) else c for c in coeffs]
        self.order = order

    @classmethod
    def zero(cls, order):
        return cls([], order)

    @classmethod
    def monomial(cls, k, order, coeff=1):
        out = [Fraction(0)] * (order + 1)
        if k <= order:
            out[k] = coeff
        return cls(out, order)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return self.order + 1

    def __add__(self, other):
        if not isinstance(other, FormalSeries):
            return self + FormalSeries.monomial(0, self.order, other)
        order = min(self.order, other.order)
        return FormalSeries([self[k] + other[k] for k in range(order + 1)], order)

    __radd__ = __add__

    def __neg__(self):
        return FormalSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, FormalSeries):
            return FormalSeries([c * other for c in self.coeffs], self.order)
        order = min(self.order, other.order)
        out = []
        for k in range(order + 1):
            acc = Fraction(0)
            for j in range(k + 1):
                a, b = self[j], other[k - j]
                if a == 0 or b == 0:
                    continue
                acc = acc + a * b
            out.append(acc)
        return FormalSeries(out, order)

    def __rmul__(self, other):
        return self * other

    def shift(self, k):
        """Multiply by zeta**k, keeping the truncation order."""
        if k < 0:
            raise ValueError("shift must be >= 0")
        return FormalSeries([Fraction(0)] * k + self.coeffs, self.order)

    def partial_sum(self, p):
        """Sum of the coefficients of zeta**0 .. zeta**p (the value at zeta=1 of the p-truncation)."""
        if p > self.order:
            raise ValueError(f"p={p} exceeds truncation order {self.order}")
        acc = Fraction(0)
        for c in self.coeffs[: p + 1]:
            acc = acc + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self.order == other.order and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    def __repr__(self):
        return f"FormalSeries({self.coeffs!r})"


def inverse_power_series(exponent: int, order: int) -> FormalSeries:
    """(1 - zeta)**(-exponent) for exponent >= 0: coefficients C(exponent-1+k, k)."""
    if exponent < 0:
        raise ValueError("exponent must be >= 0")
    if exponent == 0:
        return FormalSeries.monomial(0, order)
    return FormalSeries([Fraction(comb(exponent - 1 + k, k)) for k in range(order + 1)], order)


def power_polynomial(exponent: int, order: int) -> FormalSeries:
    """(1 - zeta)**exponent for exponent >= 0, as a truncated series."""
    if exponent < 0:
        raise ValueError("exponent must be >= 0")
    return FormalSeries(
        [Fraction((-1) ** k * comb(exponent, k)) for k in range(min(exponent, order) + 1)], order
    )


def fugacity_series(kind: str, N: int, order: int) -> FormalSeries:
    """A(zeta), B(zeta) or C(zeta) with all fugacities equal: (1-zeta)^-(N+s)."""
    if order < 0:
        raise ValueError("order must be >= 0")
    if N < 1:
        raise ValueError("N must be >= 1")
    return inverse_power_series(N + _shift(kind), order)
