"""Sparse multivariate polynomials with exact coefficients.

Variables are ``Var`` tuples.  A variable flagged ``odd`` is Grassmann-odd:
odd variables anticommute with each other and square to zero, so the same
class serves the commutative jet algebra and the graded algebra of the
Koszul-Tate complex.  A monomial is a tuple of ``(var, exponent)`` pairs sorted
by variable; the sign of a product of odd factors is fixed by that order.

Coefficients are Fractions by default but anything exact that supports ring
arithmetic and ``== 0`` works (Gaussian rationals are used for current
algebras with complex structure constants).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import NamedTuple

from .exact import simplify_scalar


class Var(NamedTuple):
    kind: str
    index: tuple = ()
    dots: int = 0
    odd: bool = False

    def dotted(self, k=1):
        return self._replace(dots=self.dots + k)

    def __str__(self):
        name = self.kind
        if self.index:
            name += "[" + ",".join(_fmt_index(i) for i in self.index) + "]"
        if self.dots:
            name += "'" * self.dots
        return name


def _fmt_index(i):
    if isinstance(i, tuple):
        return "(" + ",".join(str(c) for c in i) + ")"
    return str(i)


def coord(mu):
    """Base spacetime coordinate x^mu (0-based)."""
    return Var("x", (mu,))


def traj(mu, dots=0):
    """Observer trajectory q^mu(t) and its time derivatives."""
    return Var("q", (mu,), dots)


ONE = ()


def _mul_monomials(a, b):
    """Product of two monomials -> (sign, monomial) or (0, None)."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    out = []
    sign = 1
    i = j = 0
    # count of odd factors of ``a`` not yet merged; an odd factor of ``b``
    # jumping over them contributes (-1)**count
    odd_left_a = sum(1 for v, _ in a if v.odd)
    la, lb = len(a), len(b)
    while i < la and j < lb:
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            if va.odd:
                return 0, None
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            if va.odd:
                odd_left_a -= 1
            i += 1
        else:
            out.append(b[j])
            if vb.odd and odd_left_a % 2:
                sign = -sign
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return sign, tuple(out)


def monomial_parity(mono):
    return sum(1 for v, _ in mono if v.odd) % 2


def _monomial_key(mono):
    deg = sum(e for _, e in mono)
    return (deg, tuple((v, -e) for v, e in mono))


class Poly:
    """Polynomial = dict monomial -> nonzero coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for mono, c in terms.items():
                if c != 0:
                    self.terms[mono] = c

    # constructors ---------------------------------------------------------
    @classmethod
    def const(cls, c):
        p = cls()
        if c != 0:
            p.terms[ONE] = Fraction(c) if isinstance(c, int) else c
        return p

    @classmethod
    def var(cls, v, coeff=1):
        p = cls()
        p.terms[((v, 1),)] = Fraction(coeff) if isinstance(coeff, int) else coeff
        return p

    @classmethod
    def monomial(cls, powers, coeff=1):
        """From an iterable of (var, exp); the order of odd factors given is respected."""
        out = cls.const(coeff)
        for v, e in powers:
            for _ in range(e):
                out = out * cls.var(v)
        return out

    # basic queries ----------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def variables(self):
        out = set()
        for mono in self.terms:
            for v, _ in mono:
                out.add(v)
        return out

    def degree(self, vars=None):
        best = -1
        for mono in self.terms:
            d = sum(e for v, e in mono if vars is None or v in vars)
            best = max(best, d)
        return best

    def constant_term(self):
        return self.terms.get(ONE, Fraction(0))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _monomial_key(kv[0]))

    def is_homogeneous_parity(self):
        return len({monomial_parity(m) for m in self.terms}) <= 1

    def parity(self):
        pars = {monomial_parity(m) for m in self.terms}
        if len(pars) > 1:
            raise ValueError("polynomial has mixed Grassmann parity")
        return pars.pop() if pars else 0

    # arithmetic -------------------------------------------------------------
    def copy(self):
        p = Poly()
        p.terms = dict(self.terms)
        return p

    def _iadd_term(self, mono, c):
        old = self.terms.get(mono)
        if old is None:
            if c != 0:
                self.terms[mono] = c
        else:
            new = old + c
            if new == 0:
                del self.terms[mono]
            else:
                self.terms[mono] = new

    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        out = self.copy()
        for mono, c in other.terms.items():
            out._iadd_term(mono, c)
        return out

    __radd__ = __add__

    def __neg__(self):
        p = Poly()
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        out = self.copy()
        for mono, c in other.terms.items():
            out._iadd_term(mono, -c)
        return out

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)) or hasattr(other, "imag"):
                if other == 0:
                    return Poly()
                p = Poly()
                p.terms = {m: c * other for m, c in self.terms.items()}
                return p
            return NotImplemented
        out = Poly()
        terms = out.terms
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                sign, mono = _mul_monomials(ma, mb)
                if not sign:
                    continue
                c = ca * cb if sign > 0 else -(ca * cb)
                old = terms.get(mono)
                if old is None:
                    terms[mono] = c
                else:
                    new = old + c
                    if new == 0:
                        del terms[mono]
                    else:
                        terms[mono] = new
        return out

    def __rmul__(self, other):
        # scalars are even, so they commute
        return self * other

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return False
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # calculus -----------------------------------------------------------------
    def diff(self, v):
        """Left derivative with respect to ``v``.

        For odd ``v`` the factor is first moved to the front, picking up
        (-1)**(number of odd factors before it).
        """
        out = Poly()
        for mono, c in self.terms.items():
            sign = 1
            for pos, (w, e) in enumerate(mono):
                if w == v:
                    if v.odd:
                        before = sum(1 for u, _ in mono[:pos] if u.odd)
                        if before % 2:
                            sign = -1
                        rest = mono[:pos] + mono[pos + 1 :]
                        out._iadd_term(rest, c if sign > 0 else -c)
                    else:
                        rest = mono[:pos] + (((w, e - 1),) if e > 1 else ()) + mono[pos + 1 :]
                        out._iadd_term(rest, c * e)
                    break
        return out

    def substitute(self, mapping):
        """Replace variables by polynomials (ordered product, so odd signs are kept)."""
        out = Poly()
        cache = {}
        for mono, c in self.terms.items():
            acc = Poly.const(c)
            for v, e in mono:
                if v in mapping:
                    rep = mapping[v]
                    rep = rep if isinstance(rep, Poly) else Poly.const(rep)
                else:
                    key = v
                    rep = cache.get(key)
                    if rep is None:
                        rep = cache[key] = Poly.var(v)
                for _ in range(e):
                    acc = acc * rep
            out = out + acc
        return out

    def rename(self, mapping):
        """Rename variables with a var->var map preserving parity."""
        return self.substitute({k: Poly.var(v) for k, v in mapping.items()})

    def evaluate(self, values):
        """Evaluate with all (even) variables assigned scalars."""
        total = Fraction(0)
        for mono, c in self.terms.items():
            t = c
            for v, e in mono:
                t = t * values[v] ** e
            total = total + t
        return total

    def map_coefficients(self, fn):
        p = Poly()
        for m, c in self.terms.items():
            p._iadd_term(m, fn(c))
        return p

    # printing -----------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            c = simplify_scalar(c)
            body = "*".join(str(v) + (f"^{e}" if e > 1 else "") for v, e in mono)
            if not body:
                parts.append(_fmt_coeff(c, alone=True))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(_fmt_coeff(c) + "*" + body)
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    __repr__ = __str__


def _fmt_coeff(c, alone=False):
    if isinstance(c, Fraction):
        return str(c)
    return repr(c)


def _as_poly(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)) or hasattr(x, "imag"):
        return Poly.const(x)
    return NotImplemented


# ---------------------------------------------------------------------------
# text parser
#
# Grammar (whitespace ignored):
#   expr   := term (("+" | "-") term)*
#   term   := factor (["*"] factor)*        juxtaposition means multiplication
#   factor := ("+" | "-") factor | atom ["^" INT]
#   atom   := NUMBER ["/" NUMBER] | IDENT | "(" expr ")"
# NUMBER is a nonnegative decimal integer; IDENT matches [A-Za-z][A-Za-z0-9_]*.
# Identifiers are mapped to variables by a caller-supplied resolver.
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")


class ParseError(ValueError):
    pass


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected input at {pos}: {text[pos:]!r}")
        num, ident, sym = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif ident is not None:
            out.append(("id", ident))
        else:
            if sym not in "+-*/^()":
                raise ParseError(f"unexpected character {sym!r}")
            out.append(("sym", sym))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text, resolve):
        self.toks = _tokenize(text)
        self.i = 0
        self.resolve = resolve

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"expected {value or kind}, got {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self):
        acc = self.term()
        while self.peek() in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.factor()
        while True:
            tok = self.peek()
            if tok == ("sym", "*"):
                self.take()
                acc = acc * self.factor()
            elif tok[0] in ("num", "id") or tok == ("sym", "("):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self):
        tok = self.peek()
        if tok in (("sym", "+"), ("sym", "-")):
            self.take()
            inner = self.factor()
            return inner if tok[1] == "+" else -inner
        base = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            exp = self.take("num")[1]
            base = base ** exp
        return base

    def atom(self):
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            value = Fraction(tok[1])
            if self.peek() == ("sym", "/"):
                self.take()
                den = self.take("num")[1]
                if den == 0:
                    raise ParseError("zero denominator")
                value = value / den
            return Poly.const(value)
        if tok[0] == "id":
            self.take()
            return self.resolve(tok[1])
        if tok == ("sym", "("):
            self.take()
            inner = self.expr()
            self.take("sym", ")")
            return inner
        raise ParseError(f"unexpected token {tok[1]!r}")


def parse_poly(text: str, resolve) -> Poly:
    """Parse ``text`` with ``resolve(name) -> Poly`` for identifiers."""
    if not text or not text.strip():
        raise ParseError("empty expression")
    p = _Parser(text, resolve)
    out = p.expr()
    if p.i != len(p.toks):
        raise ParseError(f"trailing input near token {p.toks[p.i][1]!r}")
    return out


def base_resolver(N: int):
    """Resolver for identifiers x1..xN (1-based in text, 0-based internally)."""

    def resolve(name):
        m = re.fullmatch(r"x([1-9][0-9]*)", name)
        if not m or int(m.group(1)) > N:
            raise ParseError(f"unknown variable {name!r} (expected x1..x{N})")
        return Poly.var(coord(int(m.group(1)) - 1))

    return resolve
