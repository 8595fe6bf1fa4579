"""Linear forms in named parameters and an exact parametric linear solver.

A ``LinearForm`` is ``c0 + sum_s c_s * s`` with rational coefficients and
string symbols (U, V, W, X, Y, x_F, ...).  They are the values stored in
sector ladders and the right-hand sides of the constraint systems, so
solutions come out as parameter families rather than numbers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import as_fraction
from .poly import ParseError, Poly, Var, parse_poly


class LinearForm:
    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs=None, const=0):
        self.coeffs = {}
        for s, c in (coeffs or {}).items():
            c = as_fraction(c)
            if c != 0:
                self.coeffs[s] = c
        self.const = as_fraction(const)

    @classmethod
    def symbol(cls, name, coeff=1):
        return cls({name: coeff})

    @classmethod
    def lift(cls, value):
        if isinstance(value, LinearForm):
            return value
        return cls({}, value)

    @classmethod
    def parse(cls, text):
        """Parse e.g. "3V + 2W", "U - X", "-1/2 X" or "4"."""
        if isinstance(text, LinearForm):
            return text
        if not isinstance(text, str):
            return cls.lift(text)
        if not text.strip():
            raise ParseError("empty linear form")

        def resolve(name):
            return Poly.var(Var("sym", (name,)))

        p = parse_poly(text, resolve)
        coeffs, const = {}, Fraction(0)
        for mono, c in p.terms.items():
            if not mono:
                const = c
            elif len(mono) == 1 and mono[0][1] == 1:
                coeffs[mono[0][0].index[0]] = c
            else:
                raise ParseError(f"{text!r} is not linear")
        return cls(coeffs, const)

    def symbols(self):
        return set(self.coeffs)

    def coeff(self, name):
        return self.coeffs.get(name, Fraction(0))

    def is_constant(self):
        return not self.coeffs

    def is_zero(self):
        return not self.coeffs and self.const == 0

    def __add__(self, other):
        if not isinstance(other, (LinearForm, int, Fraction)):
            return NotImplemented
        o = LinearForm.lift(other)
        out = dict(self.coeffs)
        for s, c in o.coeffs.items():
            out[s] = out.get(s, 0) + c
        return LinearForm(out, self.const + o.const)

    __radd__ = __add__

    def __neg__(self):
        return LinearForm({s: -c for s, c in self.coeffs.items()}, -self.const)

    def __sub__(self, other):
        if not isinstance(other, (LinearForm, int, Fraction)):
            return NotImplemented
        return self + (-LinearForm.lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LinearForm):
            if other.is_constant():
                other = other.const
            elif self.is_constant():
                return other * self.const
            else:
                raise TypeError("product of two non-constant linear forms")
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return LinearForm({s: c * other for s, c in self.coeffs.items()}, self.const * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_fraction(other)
        return self * (1 / other)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LinearForm.lift(other)
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self.const == other.const and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.const, frozenset(self.coeffs.items())))

    def substitute(self, values):
        """Replace symbols by numbers or other linear forms."""
        out = LinearForm({}, self.const)
        for s, c in self.coeffs.items():
            if s in values:
                out = out + LinearForm.lift(values[s]) * c
            else:
                out = out + LinearForm({s: c})
        return out

    def value(self, values=None):
        """Numeric value; every symbol must be assigned."""
        out = self.substitute(values or {})
        if not out.is_constant():
            raise ValueError(f"unassigned symbols {sorted(out.symbols())}")
        return out.const

    def __str__(self):
        parts = []
        for s in sorted(self.coeffs, key=_symbol_key):
            c = self.coeffs[s]
            if c == 1:
                parts.append(s)
            elif c == -1:
                parts.append("-" + s)
            else:
                parts.append(f"{c}{s}" if c.denominator == 1 else f"{c}*{s}")
        if self.const != 0 or not parts:
            parts.append(str(self.const))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"LinearForm({self})"

    def to_json(self):
        from .exact import format_rational

        out = {s: format_rational(c) for s, c in sorted(self.coeffs.items(), key=lambda kv: _symbol_key(kv[0]))}
        if self.const != 0:
            out["1"] = format_rational(self.const)
        return out


_TARGET_ORDER = {name: k for k, name in enumerate("UVWXY")}


def _symbol_key(name):
    return (_TARGET_ORDER.get(name, 99), name)


def as_linear_form(value):
    if isinstance(value, LinearForm):
        return value
    if isinstance(value, str):
        return LinearForm.parse(value)
    return LinearForm.lift(value)


@dataclass
class LinearSystem:
    """Equations ``sum_k a[j][k] * unknown_k = rhs[j]`` with parametric right sides."""

    unknowns: list
    rows: list = field(default_factory=list)
    rhs: list = field(default_factory=list)
    labels: list = field(default_factory=list)

    def add(self, coeffs, rhs, label=None):
        """``coeffs`` maps unknown name -> rational."""
        unknown = set(coeffs) - set(self.unknowns)
        if unknown:
            raise ValueError(f"unknowns not declared: {sorted(unknown)}")
        self.rows.append({k: as_fraction(v) for k, v in coeffs.items() if as_fraction(v) != 0})
        self.rhs.append(as_linear_form(rhs))
        self.labels.append(label if label is not None else len(self.rows) - 1)

    def residuals(self, assignment):
        """lhs - rhs for each equation given unknown -> LinearForm."""
        out = []
        for row, rhs in zip(self.rows, self.rhs):
            lhs = LinearForm()
            for k, a in row.items():
                lhs = lhs + as_linear_form(assignment[k]) * a
            out.append(lhs - rhs)
        return out


@dataclass
class Solution:
    """Result of an exact parametric solve.

    ``assignment`` maps each pivot unknown to a linear form in the parameters
    and the free unknowns.  ``conditions`` lists (label, form) pairs: each form
    must vanish for the system to be consistent.  The system is feasible for
    generic parameters only if every condition is identically zero.
    """

    assignment: dict
    free: list
    conditions: list
    rank: int

    @property
    def unique(self):
        return not self.free

    @property
    def feasible(self):
        return all(form.is_zero() for _, form in self.conditions)

    @property
    def violated(self):
        return [(label, form) for label, form in self.conditions if not form.is_zero()]


def solve(system: LinearSystem) -> Solution:
    """Gauss-Jordan elimination over Fractions, right sides carried as linear forms.

    Rows are processed in the order given, so when the system is overdetermined
    the earliest independent equations fix the pivots and later dependent ones
    become consistency conditions.
    """
    unknowns = list(system.unknowns)
    rows = [dict(r) for r in system.rows]
    rhs = list(system.rhs)
    labels = list(system.labels)
    pivots = []  # (row_index, unknown)
    used = set()
    for col in unknowns:
        pivot_row = None
        for j in range(len(rows)):
            if j in used:
                continue
            if rows[j].get(col, 0) != 0:
                pivot_row = j
                break
        if pivot_row is None:
            continue
        used.add(pivot_row)
        a = rows[pivot_row][col]
        rows[pivot_row] = {k: v / a for k, v in rows[pivot_row].items()}
        rhs[pivot_row] = rhs[pivot_row] / a
        for j in range(len(rows)):
            if j == pivot_row:
                continue
            f = rows[j].get(col, 0)
            if f == 0:
                continue
            for k, v in rows[pivot_row].items():
                nv = rows[j].get(k, 0) - f * v
                if nv == 0:
                    rows[j].pop(k, None)
                else:
                    rows[j][k] = nv
            rhs[j] = rhs[j] - rhs[pivot_row] * f
        pivots.append((pivot_row, col))
    pivot_cols = {c for _, c in pivots}
    free = [c for c in unknowns if c not in pivot_cols]
    assignment = {}
    for j, col in pivots:
        form = rhs[j]
        for k, v in rows[j].items():
            if k != col:
                form = form - LinearForm.symbol(k) * v
        assignment[col] = form
    for c in free:
        assignment[c] = LinearForm.symbol(c)
    conditions = []
    for j in range(len(rows)):
        if j in used:
            continue
        # a non-pivot row has all unknown coefficients eliminated: 0 = rhs
        conditions.append((labels[j], -rhs[j]))
    return Solution(assignment=assignment, free=free, conditions=conditions, rank=len(pivots))


_SYMBOL_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


def is_symbol_name(name: str) -> bool:
    return bool(_SYMBOL_RE.match(name))
