"""Trace numbers, central coefficients and the abelian charges c1..c5.

Counting functions (see ``mindex.count``): A(p) = C(N+p, N),
B(p) = C(N+p+1, N+1), C(p) = C(N+p+2, N+2), all zero for p < 0.

Single jet of order p, in terms of the central coefficients:

    c1 = 1 - k1 A(p) - k4 C(p - s)           s = c1_offset, default 2
    c2 =   - k2 A(p) - 2 k3 B(p-1) - k4 C(p-2)
    c3 = 1 + d1 A(p) + d0 B(p-1)
    c4 = 2N - c A(p)
    c5 = k5 A(p)

The constants 1, 1, 2N come from the observer's trajectory.  With s = 2 the
multi-jet sums reproduce the finiteness conditions below; s = 1 is the
alternative binomial C(N+p+1, N+2) and is kept selectable.

A ladder stores signed per-offset numbers (x_i, y_i, u_i, v_i, w_i); its
charges are the sum of single-jet charges at orders p - i with the
upper-sign coefficients k = -(u_i, v_i, w_i, x_i, y_i), i.e.

    c1 = sum u_i A(p-i) + x_i C(p-i-2)
    c2 = sum v_i A(p-i) + 2 w_i B(p-i-1) + x_i C(p-i-2)
    c3 = sum -w_i A(p-i) - x_i B(p-i-1)
    c4 = sum x_i A(p-i)
    c5 = sum -y_i A(p-i)
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields as dc_fields
from fractions import Fraction

from .exact import GaussianRational, format_rational, simplify_scalar
from .linform import LinearForm, as_linear_form
from .mindex import FormalSeries, binom_ext, binomial, count, fugacity_series, power_polynomial
from .reps import GLRep, GRep, combined, matmul, trace, trivial_g, validate_rep
from .wick import SIGMA, oracle_central_term  # noqa: F401  (re-exported)

BOSON, FERMION = "boson", "fermion"
DEFAULT_C1_OFFSET = 2


def _check_statistics(statistics):
    if statistics not in (BOSON, FERMION):
        raise ValueError(f"statistics must be 'boson' or 'fermion', got {statistics!r}")


def _fmt(value):
    if isinstance(value, LinearForm):
        if value.is_constant():
            return format_rational(value.const)
        return value.to_json()
    return format_rational(value)


# --- trace numbers --------------------------------------------------------------------


@dataclass(frozen=True)
class TraceNumbers:
    u: object = Fraction(0)
    v: object = Fraction(0)
    w: object = Fraction(0)
    x: object = Fraction(0)
    y: object = Fraction(0)

    def __add__(self, other):
        return TraceNumbers(*(getattr(self, f.name) + getattr(other, f.name) for f in dc_fields(self)))

    def as_tuple(self):
        return (self.u, self.v, self.w, self.x, self.y)

    def to_json(self):
        return {f.name: _fmt(getattr(self, f.name)) for f in dc_fields(self)}


def _real(value, what):
    value = simplify_scalar(value)
    if isinstance(value, GaussianRational):
        raise ValueError(f"{what} is not real: {value!r}")
    return Fraction(value)


def trace_numbers(gl: GLRep, g: GRep | None = None, validate=True) -> TraceNumbers:
    """Read u, v, w, x, y off the traces of the combined rho (x) M matrices.

    For N = 1 only u + v is determined; it is reported as u with v = 0.
    """
    g = trivial_g() if g is None else g
    if validate:
        for rep in (gl, g):
            report = validate_rep(rep)
            if not report.ok:
                raise ValueError(f"{rep.name}: defining brackets fail at {report.residuals[0][0]}")
    T, J = combined(gl, g)
    N = gl.N
    x = Fraction(gl.dim * g.dim)
    tr1 = [[_real(trace(T[mu][nu]), "tr T") for nu in range(N)] for mu in range(N)]
    w = tr1[0][0]
    for mu in range(N):
        for nu in range(N):
            if tr1[mu][nu] != (w if mu == nu else 0):
                raise ValueError(f"tr T^{mu}_{nu} is not w*delta: representation is not gl(N)-covariant")
    tr2 = {}
    for mu in range(N):
        for nu in range(N):
            for s in range(N):
                for t in range(N):
                    tr2[mu, nu, s, t] = _real(trace(matmul(T[mu][nu], T[s][t])), "tr TT")
    if N == 1:
        u, v = tr2[0, 0, 0, 0], Fraction(0)
    else:
        u, v = tr2[0, 1, 1, 0], tr2[0, 0, 1, 1]
    for (mu, nu, s, t), val in tr2.items():
        expect = u * (mu == t) * (s == nu) + v * (mu == nu) * (s == t)
        if val != expect:
            raise ValueError(f"tr T^{mu}_{nu} T^{s}_{t} = {val} does not fit u*dd + v*dd")
    rank = len(J)
    y = Fraction(0)
    if rank:
        y = _real(trace(matmul(J[0], J[0])), "tr JJ")
        for a in range(rank):
            for b in range(rank):
                val = _real(trace(matmul(J[a], J[b])), "tr JJ")
                if val != (y if a == b else 0):
                    raise ValueError(f"tr J^{a} J^{b} is not y*delta")
    return TraceNumbers(u, v, w, x, y)


# --- central coefficients -------------------------------------------------------------


@dataclass(frozen=True)
class KParameters:
    k1: object
    k2: object
    k3: object
    k4: object
    k5: object
    d0: object
    d1: object
    c: object
    statistics: str = BOSON

    # semisimple g: the remaining cocycles are absent
    k6 = Fraction(0)
    k7 = Fraction(0)
    k8 = Fraction(0)

    def __neg__(self):
        return KParameters(*(-getattr(self, n) for n in _K_NAMES), statistics=self.statistics)

    def to_json(self):
        out = {n: _fmt(getattr(self, n)) for n in _K_NAMES}
        out["statistics"] = self.statistics
        return out


_K_NAMES = ("k1", "k2", "k3", "k4", "k5", "d0", "d1", "c")


def k_parameters(t: TraceNumbers, statistics: str = BOSON) -> KParameters:
    """k1..k5, d0, d1, c = -+(u, v, w, x, y, x, w, x); minus for bosons."""
    _check_statistics(statistics)
    s = -1 if statistics == BOSON else 1
    return KParameters(s * t.u, s * t.v, s * t.w, s * t.x, s * t.y, s * t.x, s * t.w, s * t.x, statistics)


ZERO_K = KParameters(*([Fraction(0)] * 8))


# --- charges --------------------------------------------------------------------------


@dataclass(frozen=True)
class ChargeVector:
    c1: object = Fraction(0)
    c2: object = Fraction(0)
    c3: object = Fraction(0)
    c4: object = Fraction(0)
    c5: object = Fraction(0)

    def __add__(self, other):
        return ChargeVector(*(a + b for a, b in zip(self.as_tuple(), other.as_tuple())))

    def __sub__(self, other):
        return ChargeVector(*(a - b for a, b in zip(self.as_tuple(), other.as_tuple())))

    def scale(self, s):
        return ChargeVector(*(a * s for a in self.as_tuple()))

    def as_tuple(self):
        return (self.c1, self.c2, self.c3, self.c4, self.c5)

    def substitute(self, values):
        return ChargeVector(*(as_linear_form(a).substitute(values) for a in self.as_tuple()))

    def numeric(self, values=None):
        """Exact Fractions (all symbols must be assigned)."""
        return ChargeVector(*(as_linear_form(a).value(values or {}) for a in self.as_tuple()))

    def is_zero(self):
        return all(a == 0 for a in self.as_tuple())

    def to_json(self):
        return {f"c{i + 1}": _fmt(a) for i, a in enumerate(self.as_tuple())}


def trajectory_charges(N: int) -> ChargeVector:
    return ChargeVector(Fraction(1), Fraction(0), Fraction(1), Fraction(2 * N), Fraction(0))


def abelian_charges_single(k: KParameters, N: int, p: int, include_trajectory=True, c1_offset=DEFAULT_C1_OFFSET):
    """c1..c5 of one jet of order p (p < 0 contributes nothing but the trajectory)."""
    A = count("A", N, p)
    B1 = count("B", N, p - 1)
    C1 = count("C", N, p - c1_offset)
    C2 = count("C", N, p - 2)
    zero = Fraction(0)
    out = ChargeVector(
        zero - k.k1 * A - k.k4 * C1,
        zero - k.k2 * A - 2 * k.k3 * B1 - k.k4 * C2,
        zero + k.d1 * A + k.d0 * B1,
        zero - k.c * A,
        zero + k.k5 * A,
    )
    if include_trajectory:
        out = out + trajectory_charges(N)
    return out


# --- ladders ----------------------------------------------------------------------------

LETTERS = ("x", "y", "u", "v", "w")


@dataclass(frozen=True)
class SectorEntry:
    x: LinearForm = field(default_factory=LinearForm)
    y: LinearForm = field(default_factory=LinearForm)
    u: LinearForm = field(default_factory=LinearForm)
    v: LinearForm = field(default_factory=LinearForm)
    w: LinearForm = field(default_factory=LinearForm)

    def __post_init__(self):
        for n in LETTERS:
            object.__setattr__(self, n, as_linear_form(getattr(self, n)))

    def __add__(self, other):
        return SectorEntry(*(getattr(self, n) + getattr(other, n) for n in LETTERS))

    def __neg__(self):
        return SectorEntry(*(-getattr(self, n) for n in LETTERS))

    def scale(self, s):
        return SectorEntry(*(getattr(self, n) * s for n in LETTERS))

    def is_zero(self):
        return all(getattr(self, n).is_zero() for n in LETTERS)

    def substitute(self, values):
        return SectorEntry(*(getattr(self, n).substitute(values) for n in LETTERS))

    def trace_numbers(self):
        return TraceNumbers(self.u, self.v, self.w, self.x, self.y)

    def to_json(self):
        return {n: _fmt(getattr(self, n)) for n in LETTERS}


class SectorLadder:
    """Signed contributions per order offset i (the jet of order p - i)."""

    def __init__(self, entries=None):
        self.entries = {}
        for i, e in (entries or {}).items():
            if i < 0:
                raise ValueError("offsets must be >= 0")
            e = e if isinstance(e, SectorEntry) else SectorEntry(**e)
            if not e.is_zero():
                self.entries[int(i)] = e

    @classmethod
    def from_sequences(cls, **seqs):
        """E.g. ``from_sequences(x=[1, -2, 1])``; missing letters are zero."""
        unknown = set(seqs) - set(LETTERS)
        if unknown:
            raise ValueError(f"unknown ladder letters {sorted(unknown)}")
        depth = max((len(s) for s in seqs.values()), default=0)
        entries = {}
        for i in range(depth):
            entries[i] = SectorEntry(**{n: s[i] for n, s in seqs.items() if i < len(s)})
        return cls(entries)

    @property
    def depth(self):
        return max(self.entries, default=0)

    def __getitem__(self, i):
        return self.entries.get(i, SectorEntry())

    def sequence(self, letter, length=None):
        length = self.depth + 1 if length is None else length
        return [getattr(self[i], letter) for i in range(length)]

    def __add__(self, other):
        keys = set(self.entries) | set(other.entries)
        return SectorLadder({i: self[i] + other[i] for i in keys})

    def __neg__(self):
        return SectorLadder({i: -e for i, e in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, SectorLadder) and (self - other).is_zero()

    def is_zero(self):
        return not self.entries

    def shift(self, k):
        return SectorLadder({i + k: e for i, e in self.entries.items()})

    def substitute(self, values):
        return SectorLadder({i: e.substitute(values) for i, e in self.entries.items()})

    def to_json(self):
        return {str(i): e.to_json() for i, e in sorted(self.entries.items())}

    def __repr__(self):
        return f"SectorLadder({self.to_json()})"


def abelian_charges_multi(
    ladder: SectorLadder,
    N: int,
    p: int,
    include_trajectory=False,
    c1_offset=DEFAULT_C1_OFFSET,
    allow_short=False,
):
    """Sum of single-jet charges at orders p - i with upper-sign coefficients."""
    if p < ladder.depth and not allow_short:
        raise ValueError(f"p = {p} is below the ladder depth r = {ladder.depth}")
    total = ChargeVector()
    for i, entry in sorted(ladder.entries.items()):
        k = k_parameters(entry.trace_numbers(), BOSON)
        total = total + abelian_charges_single(k, N, p - i, False, c1_offset)
    if include_trajectory:
        total = total + trajectory_charges(N)
    return total


# --- conditions -------------------------------------------------------------------------


def albega_direct(i: int, r: int):
    """alpha_i, beta_i, gamma_i as the defining partial sums of (-1)^l C(r, l)."""
    s = lambda l: (-1) ** l * binom_ext(r, l)  # noqa: E731
    alpha = sum(s(l) for j in range(i - 1) for l in range(j + 1))
    beta = sum(s(j) for j in range(i))
    gamma = sum(s(l) for j in range(i) for l in range(j))
    return Fraction(alpha), Fraction(beta), Fraction(gamma)


def binom_general(n: int, k: int) -> int:
    """C(n, k) for any integer n (upper negation for n < 0), zero for k < 0."""
    if k < 0:
        return 0
    if n >= 0:
        return binomial(n, k)
    return (-1) ** k * binomial(k - n - 1, k)


def albega_closed(i: int, r: int):
    """alpha = gamma = (-1)^i C(r-2, i-2), beta = -(-1)^i C(r-1, i-1)."""
    sgn = (-1) ** i
    a = sgn * binom_general(r - 2, i - 2)
    return Fraction(a), Fraction(-sgn * binom_general(r - 1, i - 1)), Fraction(a)


def albega(i: int, r: int):
    """(alpha_i, beta_i, gamma_i); both routes are computed and must agree."""
    if r < 0 or i < 0:
        raise ValueError("need r >= 0 and i >= 0")
    direct = albega_direct(i, r)
    closed = albega_closed(i, r)
    if direct != closed:
        raise AssertionError(f"identity failure at i={i}, r={r}: {direct} != {closed}")
    return direct


@dataclass(frozen=True)
class Targets:
    U: object = Fraction(0)
    V: object = Fraction(0)
    W: object = Fraction(0)
    X: object = Fraction(0)
    Y: object = Fraction(0)

    def __post_init__(self):
        for n in "UVWXY":
            object.__setattr__(self, n, as_linear_form(getattr(self, n)))

    @classmethod
    def symbolic(cls):
        return cls(*(LinearForm.symbol(n) for n in "UVWXY"))

    def limit(self):
        """The p-independent charges (U, V, -W, X, -Y)."""
        return ChargeVector(self.U, self.V, -self.W, self.X, -self.Y)

    def to_json(self):
        return {n: _fmt(getattr(self, n)) for n in "UVWXY"}


@dataclass
class ConditionReport:
    r: int
    conds: list  # (label, residual LinearForm)
    conds2: list

    @property
    def conds_ok(self):
        return all(res.is_zero() for _, res in self.conds)

    @property
    def conds2_ok(self):
        return all(res.is_zero() for _, res in self.conds2)

    @property
    def equivalent(self):
        return self.conds_ok == self.conds2_ok

    @property
    def ok(self):
        return self.conds_ok and self.conds2_ok

    def failures(self, which="conds"):
        return [label for label, res in getattr(self, which) if not res.is_zero()]


def _sign_binom(r, i):
    return (-1) ** i * binom_ext(r, i)


def check_conditions(ladder: SectorLadder, targets: Targets, r: int | None = None) -> ConditionReport:
    """Residuals (lhs - rhs) of both condition systems.

    ``conds``: the summed form, offsets 0..R (R = max(r, depth)) plus the three
    overflow sums.  ``conds2``: the alpha/beta/gamma form for 0..max(r+1, depth).
    """
    r = ladder.depth if r is None else r
    T = targets
    xs = lambda i: ladder[i].x  # noqa: E731
    zero = LinearForm()
    conds = []
    R = max(r, ladder.depth)
    for i in range(R + 1):
        e = ladder[i]
        c = _sign_binom(r, i)
        s_i = sum((xs(l) for j in range(i - 1) for l in range(j + 1)), zero)
        s_ii = sum((2 * ladder[j].w + sum((xs(l) for l in range(j)), zero) for j in range(i)), zero)
        s_iii = sum((xs(j) for j in range(i)), zero)
        conds.append((f"i[{i}]", e.u + s_i - T.U * c))
        conds.append((f"ii[{i}]", e.v + s_ii - T.V * c))
        conds.append((f"iii[{i}]", e.w + s_iii - T.W * c))
        conds.append((f"iv[{i}]", e.x - T.X * c))
        conds.append((f"v[{i}]", e.y - T.Y * c))
    conds.append(("vi", sum((2 * ladder[i].w + sum((xs(l) for l in range(i)), zero) for i in range(r + 1)), zero)))
    conds.append(("vii", sum((xs(i) for i in range(r + 1)), zero)))
    conds.append(("viii", sum((xs(j) for i in range(r) for j in range(i + 1)), zero)))
    conds2 = []
    for i in range(max(r + 1, ladder.depth) + 1):
        e = ladder[i]
        a, b, g = albega(i, r)
        c = _sign_binom(r, i)
        conds2.append((f"i[{i}]", e.u + T.X * a - T.U * c))
        conds2.append((f"ii[{i}]", e.v + T.W * (2 * b) - T.X * g - T.V * c))
        conds2.append((f"iii[{i}]", e.w + T.X * b - T.W * c))
        conds2.append((f"iv[{i}]", e.x - T.X * c))
        conds2.append((f"v[{i}]", e.y - T.Y * c))
    return ConditionReport(r, conds, conds2)


def conds2_ladder(targets: Targets, r: int) -> SectorLadder:
    """The unique ladder of depth r satisfying the alpha/beta/gamma conditions."""
    T = targets
    entries = {}
    for i in range(r + 1):
        a, b, g = albega(i, r)
        c = _sign_binom(r, i)
        entries[i] = SectorEntry(
            x=T.X * c,
            y=T.Y * c,
            u=T.U * c - T.X * a,
            v=T.V * c - T.W * (2 * b) + T.X * g,
            w=T.W * c - T.X * b,
        )
    return SectorLadder(entries)


def finite_limit(targets: Targets, N: int, p: int, r: int) -> ChargeVector:
    """(U, V, -W, X, -Y) * C(N+p-r, N-r): the charges of a conds2 ladder of depth r."""
    scale = binom_ext(N + p - r, N - r)
    return targets.limit().scale(scale)


# --- generating functions ---------------------------------------------------------------


def sector_polynomials(targets: Targets, N: int, c1_offset=DEFAULT_C1_OFFSET) -> dict:
    """u(z), v(z), w(z), x(z), y(z) making every fugacity charge constant.

    Returned as FormalSeries of order N (they are polynomials of degree N).
    """
    if N < 2:
        raise ValueError("sector polynomials need N >= 2 ((1-z)^(N-2) must be a polynomial)")
    T = targets
    order = N
    P = lambda e: power_polynomial(e, order)  # noqa: E731
    z = lambda k: FormalSeries.monomial(k, order)  # noqa: E731
    x = P(N) * T.X
    y = P(N) * T.Y
    w = P(N) * T.W - z(1) * P(N - 1) * T.X
    v = P(N) * T.V - z(1) * P(N - 1) * (2 * T.W) + z(2) * P(N - 2) * T.X
    u = P(N) * T.U - z(c1_offset) * P(N - 2) * T.X
    return {"u": u, "v": v, "w": w, "x": x, "y": y}


def ladder_from_polynomials(polys: dict) -> SectorLadder:
    order = max(s.order for s in polys.values())
    entries = {}
    for i in range(order + 1):
        entries[i] = SectorEntry(**{n: (polys[n][i] if i <= polys[n].order else 0) for n in LETTERS if n in polys})
    return SectorLadder(entries)


def fugacity_charges(polys: dict, N: int, truncation: int, c1_offset=DEFAULT_C1_OFFSET) -> dict:
    """Series c1(z)..c5(z) built from the sector polynomials and A, B, C(z)."""
    zero = FormalSeries.zero(truncation)

    def get(n):
        s = polys.get(n)
        if s is None:
            return zero
        return FormalSeries(s.coeffs, truncation)

    u, v, w, x, y = (get(n) for n in ("u", "v", "w", "x", "y"))
    A = fugacity_series("A", N, truncation)
    B = fugacity_series("B", N, truncation)
    C = fugacity_series("C", N, truncation)
    return {
        "c1": u * A + (x * C).shift(c1_offset),
        "c2": v * A + (w * B).shift(1) * 2 + (x * C).shift(2),
        "c3": -(w * A) - (x * B).shift(1),
        "c4": x * A,
        "c5": -(y * A),
    }


def charges_from_series(series: dict, p: int) -> ChargeVector:
    """Charge at jet order p = sum of the series coefficients up to z^p."""
    return ChargeVector(*(series[f"c{k}"].partial_sum(p) for k in range(1, 6)))
