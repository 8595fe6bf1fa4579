"""Polynomial vector fields, jet-space action matrices and first-order operators.

A field phi_alpha(x) is replaced by its p-jet on the observer's trajectory,
phi_{alpha,m}(t) = d_m phi_alpha(q(t)) for |m| <= p.  Diffeomorphisms and
gauge transformations then act on the finitely many variables
{q^mu} u {phi_{alpha,m}} by first-order differential operators whose
coefficients are polynomials in q (for polynomial xi and X).

Block convention for the action matrices: ``blocks[(m, n)][(alpha, beta)]``
is the coefficient T^{beta n}_{alpha m}(xi(q)) in

    L_xi(phi_{alpha,m}) = - sum_{n, beta} T^{beta n}_{alpha m} phi_{beta,n},

i.e. row = (target m, alpha), column = (source n, beta).  Explicitly

    T^{beta n}_{alpha m} = C(m, n) d_{m-n+nu} xi^mu (T^nu_mu)[alpha][beta]
                         + delta_ab C(m, n-mu) d_{m-n+mu} xi^mu
                         - delta_ab delta_{n, m+mu} xi^mu

with the binomial's top entry the *target* index m.  The other reading
(top entry = source) breaks the homomorphism check, see tests.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import GaussianRational, I
from .mindex import MultiIndex, enumerate_jets, multi_binomial, subtract
from .poly import Poly, Var, coord, traj
from .reps import GLRep, GRep, combined, trivial_g, identity


def partial(f: Poly, m) -> Poly:
    """d_m f with respect to the base coordinates x^1..x^N."""
    out = f
    for mu, k in enumerate(m):
        for _ in range(k):
            if out.is_zero():
                return out
            out = out.diff(coord(mu))
    return out


def at_trajectory(f: Poly, N: int) -> Poly:
    """f(x) -> f(q): rename base coordinates to trajectory variables."""
    return f.rename({coord(mu): traj(mu) for mu in range(N)})


class PolyVectorField:
    """xi = xi^mu(x) d_mu with polynomial components."""

    __slots__ = ("N", "components")

    def __init__(self, components):
        comps = [c if isinstance(c, Poly) else Poly.const(c) for c in components]
        if not comps:
            raise ValueError("vector field needs N >= 1 components")
        self.N = len(comps)
        self.components = comps
        allowed = {coord(mu) for mu in range(self.N)}
        for c in comps:
            extra = c.variables() - allowed
            if extra:
                raise ValueError(f"components must be polynomials in x1..x{self.N}, got {sorted(map(str, extra))}")

    @classmethod
    def zero(cls, N):
        return cls([Poly() for _ in range(N)])

    @classmethod
    def translation(cls, N, mu):
        return cls([Poly.const(1) if k == mu else Poly() for k in range(N)])

    def __getitem__(self, mu):
        return self.components[mu]

    def apply(self, f: Poly) -> Poly:
        """xi^mu d_mu f."""
        out = Poly()
        for mu, c in enumerate(self.components):
            if c.is_zero():
                continue
            d = f.diff(coord(mu))
            if not d.is_zero():
                out = out + c * d
        return out

    def __add__(self, other):
        _same_dim(self, other)
        return PolyVectorField([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        _same_dim(self, other)
        return PolyVectorField([a - b for a, b in zip(self.components, other.components)])

    def __mul__(self, s):
        return PolyVectorField([c * s for c in self.components])

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, PolyVectorField) and self.N == other.N and all(
            a == b for a, b in zip(self.components, other.components)
        )

    def is_zero(self):
        return all(c.is_zero() for c in self.components)

    def __repr__(self):
        return "PolyVectorField(" + ", ".join(str(c) for c in self.components) + ")"


def _same_dim(a, b):
    if a.N != b.N:
        raise ValueError(f"dimension mismatch: {a.N} vs {b.N}")


def vf_bracket(xi: PolyVectorField, eta: PolyVectorField) -> PolyVectorField:
    """[xi, eta]^nu = xi^mu d_mu eta^nu - eta^mu d_mu xi^nu."""
    _same_dim(xi, eta)
    return PolyVectorField([xi.apply(eta[nu]) - eta.apply(xi[nu]) for nu in range(xi.N)])


class GValued:
    """X = X_a(x) J^a, components indexed by the generators of g."""

    __slots__ = ("N", "components")

    def __init__(self, N, components):
        self.N = N
        self.components = [c if isinstance(c, Poly) else Poly.const(c) for c in components]

    def __getitem__(self, a):
        return self.components[a]

    def __sub__(self, other):
        return GValued(self.N, [a - b for a, b in zip(self.components, other.components)])

    def is_zero(self):
        return all(c.is_zero() for c in self.components)

    def __repr__(self):
        return "GValued(" + ", ".join(str(c) for c in self.components) + ")"


def g_bracket(X: GValued, Y: GValued, f) -> GValued:
    """[X, Y] = i f^ab_c X_a Y_b J^c."""
    n = len(X.components)
    out = [Poly() for _ in range(n)]
    for a in range(n):
        if X[a].is_zero():
            continue
        for b in range(n):
            if Y[b].is_zero():
                continue
            prod = X[a] * Y[b]
            for c in range(n):
                fc = f[a][b][c]
                if fc != 0:
                    out[c] = out[c] + prod * (I * fc)
    return GValued(X.N, out)


def vf_act_on_g(xi: PolyVectorField, X: GValued) -> GValued:
    """xi X = xi^mu d_mu X_a J^a."""
    return GValued(X.N, [xi.apply(c) for c in X.components])


# --- field tables ----------------------------------------------------------------


@dataclass
class FieldEntry:
    """One tensor-density field valued in rho (x) M."""

    label: str
    gl: GLRep
    g: GRep = field(default_factory=trivial_g)
    weight: Fraction = Fraction(0)

    def __post_init__(self):
        self.T, self.J = combined(self.gl, self.g)
        self.dim = self.gl.dim * self.g.dim
        self.N = self.gl.N


@dataclass
class FieldTable:
    N: int
    p: int
    entries: list

    def jet_vars(self):
        out = []
        for e in self.entries:
            for m in enumerate_jets(self.N, self.p):
                for a in range(e.dim):
                    out.append(jet_var(e.label, a, m))
        return out


def jet_var(label, alpha, m):
    return Var("phi", (label, alpha, tuple(m)))


# --- action matrices ----------------------------------------------------------------


def _add_block(blocks, key, ab, value):
    if value.is_zero():
        return
    blk = blocks.setdefault(key, {})
    old = blk.get(ab)
    new = value if old is None else old + value
    if new.is_zero():
        blk.pop(ab, None)
        if not blk:
            del blocks[key]
    else:
        blk[ab] = new


def jet_action_matrix(xi: PolyVectorField, entry: FieldEntry, p: int) -> dict:
    """Blocks T^{beta n}_{alpha m}(xi(q)) for |m|, |n| <= p (nonzero only)."""
    N = xi.N
    if entry.N != N:
        raise ValueError("field table and vector field disagree on N")
    jets = enumerate_jets(N, p)
    dxi_cache = {}

    def dxi(d, mu):
        key = (d, mu)
        if key not in dxi_cache:
            dxi_cache[key] = at_trajectory(partial(xi[mu], d), N)
        return dxi_cache[key]

    units = [MultiIndex.unit(N, mu) for mu in range(N)]
    nonzero_T = [
        (nu, mu, entry.T[nu][mu])
        for nu in range(N)
        for mu in range(N)
        if any(x != 0 for row in entry.T[nu][mu] for x in row)
    ]
    blocks = {}
    for m in jets:
        for n in jets:
            d = subtract(m, n)
            if d is None:
                continue
            c = multi_binomial(m, n)
            # tensor part
            for nu, mu, Tm in nonzero_T:
                coeff = dxi(d + units[nu], mu)
                if coeff.is_zero():
                    continue
                for a in range(entry.dim):
                    for b in range(entry.dim):
                        if Tm[a][b] != 0:
                            _add_block(blocks, (m, n), (a, b), coeff * (c * Tm[a][b]))
            # transport part: source n + mu; the n == m term cancels against
            # the base-point motion of q and is omitted
            if n == m:
                continue
            for mu in range(N):
                src = n + units[mu]
                if sum(src) > p:
                    continue
                coeff = dxi(d, mu)
                if coeff.is_zero():
                    continue
                for a in range(entry.dim):
                    _add_block(blocks, (m, src), (a, a), coeff * c)
    return blocks


def jet_action_matrix_literal(xi: PolyVectorField, entry: FieldEntry, p: int, top="target") -> dict:
    """Term-by-term transcription of the three-term formula, for cross-checks.

    ``top`` selects which index sits on top of the binomials: "target" (the
    working convention) or "source" (the alternative reading).
    """
    N = xi.N
    jets = enumerate_jets(N, p)
    blocks = {}
    for m in jets:
        for n in jets:
            hi, lo = (m, n) if top == "target" else (n, m)
            c1 = multi_binomial(hi, lo)
            d1 = subtract(hi, lo)
            if c1 and d1 is not None:
                for nu in range(N):
                    for mu in range(N):
                        Tm = entry.T[nu][mu]
                        coeff = at_trajectory(partial(xi[mu], d1 + MultiIndex.unit(N, nu)), N)
                        for a in range(entry.dim):
                            for b in range(entry.dim):
                                if Tm[a][b] != 0:
                                    _add_block(blocks, (m, n), (a, b), coeff * (c1 * Tm[a][b]))
            for mu in range(N):
                u = MultiIndex.unit(N, mu)
                lo_mu = subtract(lo, u) if top == "target" else subtract(hi, u)
                if top == "target":
                    # C(m, n - mu) d_{m - n + mu}
                    if lo_mu is not None and subtract(m, lo_mu) is not None:
                        coeff = at_trajectory(partial(xi[mu], subtract(m, lo_mu)), N) * multi_binomial(m, lo_mu)
                        for a in range(entry.dim):
                            _add_block(blocks, (m, n), (a, a), coeff)
                    if n == m + u:
                        for a in range(entry.dim):
                            _add_block(blocks, (m, n), (a, a), -at_trajectory(xi[mu], N))
                else:
                    # C(n, m - mu) d_{n - m + mu}
                    if lo_mu is not None and subtract(n, lo_mu) is not None:
                        coeff = at_trajectory(partial(xi[mu], subtract(n, lo_mu)), N) * multi_binomial(n, lo_mu)
                        for a in range(entry.dim):
                            _add_block(blocks, (m, n), (a, a), coeff)
                    if m == n + u:
                        for a in range(entry.dim):
                            _add_block(blocks, (m, n), (a, a), -at_trajectory(xi[mu], N))
    return blocks


def jet_current_matrix(X: GValued, entry: FieldEntry, p: int) -> dict:
    """Blocks C(m, n) d_{m-n} X_a(q) (J^a)[alpha][beta]."""
    N = X.N
    jets = enumerate_jets(N, p)
    blocks = {}
    for m in jets:
        for n in jets:
            d = subtract(m, n)
            if d is None:
                continue
            c = multi_binomial(m, n)
            for a_idx, Ja in enumerate(entry.J):
                coeff = partial(X[a_idx], d)
                if coeff.is_zero():
                    continue
                coeff = at_trajectory(coeff, N) * c
                for a in range(entry.dim):
                    for b in range(entry.dim):
                        if Ja[a][b] != 0:
                            _add_block(blocks, (m, n), (a, b), coeff * Ja[a][b])
    return blocks


def dense_blocks(blocks, entry: FieldEntry, p: int):
    """Expand block dict to a full matrix of Polys, rows/cols in jet order x component."""
    jets = enumerate_jets(entry.N, p)
    idx = {}
    for k, m in enumerate(jets):
        for a in range(entry.dim):
            idx[(m, a)] = k * entry.dim + a
    size = len(jets) * entry.dim
    out = [[Poly() for _ in range(size)] for _ in range(size)]
    for (m, n), blk in blocks.items():
        for (a, b), val in blk.items():
            out[idx[(m, a)]][idx[(n, b)]] = val
    return out


# --- first-order operators ----------------------------------------------------------


class FirstOrderOperator:
    """Derivation sum_v coeff_v * d/dv with polynomial coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {v: c for v, c in (coeffs or {}).items() if not c.is_zero()}

    def __getitem__(self, v):
        return self.coeffs.get(v, Poly())

    def apply(self, f: Poly) -> Poly:
        out = Poly()
        for v in f.variables():
            c = self.coeffs.get(v)
            if c is None:
                continue
            out = out + c * f.diff(v)
        return out

    def __add__(self, other):
        keys = set(self.coeffs) | set(other.coeffs)
        return FirstOrderOperator({v: self[v] + other[v] for v in keys})

    def __sub__(self, other):
        keys = set(self.coeffs) | set(other.coeffs)
        return FirstOrderOperator({v: self[v] - other[v] for v in keys})

    def __mul__(self, s):
        return FirstOrderOperator({v: c * s for v, c in self.coeffs.items()})

    __rmul__ = __mul__

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, FirstOrderOperator) and (self - other).is_zero()

    def terms(self):
        """(variable, coefficient) pairs in a stable order."""
        return sorted(self.coeffs.items(), key=lambda kv: kv[0])

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*d/d{v}" for v, c in self.terms())


def operator_bracket(A: FirstOrderOperator, B: FirstOrderOperator) -> FirstOrderOperator:
    """[A, B] = sum_v (A(B_v) - B(A_v)) d/dv."""
    keys = set(A.coeffs) | set(B.coeffs)
    return FirstOrderOperator({v: A.apply(B[v]) - B.apply(A[v]) for v in keys})


def _jet_part(blocks, entry, coeffs):
    for (m, n), blk in blocks.items():
        for (a, b), val in blk.items():
            tgt = jet_var(entry.label, a, m)
            term = -(val * Poly.var(jet_var(entry.label, b, n)))
            old = coeffs.get(tgt)
            coeffs[tgt] = term if old is None else old + term


def assemble_generator(kind: str, arg, table: FieldTable, reading=None) -> FirstOrderOperator:
    """L_xi (kind "L") or J_X (kind "J") as a derivation on the jet variables.

    ``reading`` ("target"/"source") builds L_xi from the literal transcription
    with that binomial convention instead of the fast matrix.
    """
    coeffs = {}
    if kind == "L":
        xi = arg
        if xi.N != table.N:
            raise ValueError("vector field dimension does not match the table")
        for mu in range(table.N):
            c = at_trajectory(xi[mu], table.N)
            if not c.is_zero():
                coeffs[traj(mu)] = c
        for e in table.entries:
            if reading is None:
                blocks = jet_action_matrix(xi, e, table.p)
            else:
                blocks = jet_action_matrix_literal(xi, e, table.p, reading)
            _jet_part(blocks, e, coeffs)
    elif kind == "J":
        for e in table.entries:
            if len(arg.components) != len(e.J):
                raise ValueError(f"field {e.label!r}: g-valued function has {len(arg.components)} components, rep has {len(e.J)}")
            _jet_part(jet_current_matrix(arg, e, table.p), e, coeffs)
    else:
        raise ValueError(f"unknown generator kind {kind!r}")
    return FirstOrderOperator(coeffs)


# --- homomorphism check ---------------------------------------------------------------


@dataclass
class HomomorphismReport:
    residuals: dict  # name -> FirstOrderOperator

    @property
    def ok(self):
        return all(r.is_zero() for r in self.residuals.values())

    def failures(self):
        return {k: v for k, v in self.residuals.items() if not v.is_zero()}


def verify_homomorphism(xi, eta, X, Y, table: FieldTable, f=None) -> HomomorphismReport:
    """Exact residuals of the three classical bracket relations.

    ``X``/``Y`` may be None to skip the current-algebra relations; ``f`` are
    the structure constants of g (taken from the first table entry if absent).
    """
    res = {}
    L_xi = assemble_generator("L", xi, table)
    L_eta = assemble_generator("L", eta, table)
    res["[L_xi,L_eta]-L_[xi,eta]"] = operator_bracket(L_xi, L_eta) - assemble_generator(
        "L", vf_bracket(xi, eta), table
    )
    if X is not None:
        if f is None:
            f = table.entries[0].g.f
        J_X = assemble_generator("J", X, table)
        res["[L_xi,J_X]-J_(xi X)"] = operator_bracket(L_xi, J_X) - assemble_generator(
            "J", vf_act_on_g(xi, X), table
        )
        if Y is not None:
            J_Y = assemble_generator("J", Y, table)
            res["[J_X,J_Y]-J_[X,Y]"] = operator_bracket(J_X, J_Y) - assemble_generator(
                "J", g_bracket(X, Y, f), table
            )
    return HomomorphismReport(res)


# --- random inputs --------------------------------------------------------------------


def random_poly(rng: random.Random, N: int, degree: int, terms: int = 3, coeff_range: int = 3) -> Poly:
    """Sparse random polynomial in x1..xN with at most ``terms`` monomials of degree <= ``degree``."""
    monos = enumerate_jets(N, degree)
    out = Poly()
    for _ in range(rng.randint(1, terms)):
        m = rng.choice(monos)
        c = 0
        while c == 0:
            c = rng.randint(-coeff_range, coeff_range)
        mono = tuple((coord(mu), k) for mu, k in enumerate(m) if k)
        out = out + Poly({mono: Fraction(c)})
    return out


def random_vector_field(rng, N, degree, terms=3):
    return PolyVectorField([random_poly(rng, N, degree, terms) for _ in range(N)])


def random_g_valued(rng, N, rank, degree, terms=2):
    return GValued(N, [random_poly(rng, N, degree, terms) for _ in range(rank)])
