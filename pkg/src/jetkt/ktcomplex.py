"""Koszul-Tate differential on truncated jets for polynomial toy Lagrangians.

Generators for a field phi of Grassmann parity e, EL order o, jet order p:

    kind       symbol       |m| <=      parity   antifield number
    phi        phi_m        p           e        0
    phi*       phi*_m       p - o       e + 1    1
    phibar     phibar_m     p - 1       e + 1    1
    phibar*    phibar*_m    p - o - 1   e        2

plus the trajectory q^mu.  Every generator also comes with time
derivatives (``dots``); d/dt is the even derivation raising ``dots`` by one
and delta commutes with it.

    delta phi_m     = 0
    delta phi*_m    = E_m
    delta phibar_m  = D_t phi_m  = phi'_m - q'^mu phi_{m+mu}
    delta phibar*_m = D_t phi*_m - sum_n phibar_n dE_m/dphi_n

The last sum is the correction that makes delta square to zero; without it
delta^2 phibar*_m = D_t E_m.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .mindex import MultiIndex, add_unit, enumerate_jets
from .poly import Poly, Var, parse_poly, traj, ParseError

FIELD, ANTIFIELD, BARRED, BARRED_STAR = "phi", "phi*", "phibar", "phibar*"
KINDS = (FIELD, ANTIFIELD, BARRED, BARRED_STAR)
_KIND_SHIFT = {FIELD: (0, 0), ANTIFIELD: (1, 1), BARRED: (1, 1), BARRED_STAR: (0, 2)}  # (parity flip, afn)


def jet(kind, name, m, odd, dots=0):
    return Var(kind, (name, tuple(m)), dots, bool(odd))


@dataclass
class ToyModel:
    """Fields (name -> parity) and a Lagrangian in phi_0 and first derivatives."""

    N: int
    fields: dict
    lagrangian: Poly
    name: str = "toy"

    def __post_init__(self):
        for v in self.lagrangian.variables():
            if v.kind != FIELD or v.index[0] not in self.fields or v.dots:
                raise ValueError(f"unexpected variable {v} in Lagrangian")
            m = v.index[1]
            if len(m) != self.N or sum(m) > 1:
                raise ValueError(f"Lagrangian may only use fields and first derivatives, got {v}")
            if v.odd != bool(self.fields[v.index[0]]):
                raise ValueError(f"parity mismatch for {v}")
        if self.lagrangian.parity() != 0:
            raise ValueError("Lagrangian must be Grassmann-even")

    def field_var(self, name, m=None):
        m = MultiIndex.zero(self.N) if m is None else MultiIndex(m)
        return jet(FIELD, name, m, self.fields[name])

    @classmethod
    def parse(cls, N, fields, text, name="toy"):
        """Lagrangian text over ``<field>`` and ``<field>_<k>`` (= d_k field, k = 1..N)."""
        fields = dict(fields)
        for f in fields:
            if "_" in f:
                raise ParseError(f"field name {f!r} may not contain '_'")

        def resolve(ident):
            base, _, k = ident.partition("_")
            if base not in fields:
                raise ParseError(f"unknown field {base!r}")
            m = [0] * N
            if k:
                if not k.isdigit() or not 1 <= int(k) <= N:
                    raise ParseError(f"bad derivative index in {ident!r}")
                m[int(k) - 1] = 1
            return Poly.var(jet(FIELD, base, m, fields[base]))

        return cls(N, fields, parse_poly(text, resolve), name)


def free_scalar(N=1):
    """L = 1/2 (d phi)^2 - 1/2 phi^2."""
    terms = " + ".join(f"1/2 phi_{k}^2" for k in range(1, N + 1))
    return ToyModel.parse(N, {"phi": 0}, terms + " - 1/2 phi^2", "free")


def phi4_scalar(N=1):
    """L = 1/2 (d phi)^2 - 1/4 phi^4."""
    terms = " + ".join(f"1/2 phi_{k}^2" for k in range(1, N + 1))
    return ToyModel.parse(N, {"phi": 0}, terms + " - 1/4 phi^4", "phi4")


def free_fermion():
    """N = 1 toy L = psi d_1 psi; its EL equation is 2 d_1 psi."""
    return ToyModel.parse(1, {"psi": 1}, "psi psi_1", "fermion")


# --- total derivatives -------------------------------------------------------------


def total_derivative(f: Poly, mu: int) -> Poly:
    """D_mu on jet polynomials: phi_n -> phi_{n+mu} for every jet variable."""
    out = Poly()
    for v in f.variables():
        if v.kind not in KINDS:
            raise ValueError(f"D_mu is not defined on {v}")
        name, m = v.index
        shifted = v._replace(index=(name, tuple(add_unit(m, mu))))
        out = out + Poly.var(shifted) * f.diff(v)
    return out


def time_derivative(f: Poly) -> Poly:
    """d/dt: raises the dot count of every variable (chain rule)."""
    out = Poly()
    for v in f.variables():
        out = out + Poly.var(v.dotted()) * f.diff(v)
    return out


def jet_order(f: Poly) -> int:
    """Highest |n| among jet variables in f, 0 if none."""
    best = 0
    for v in f.variables():
        if v.kind in KINDS:
            best = max(best, sum(v.index[1]))
    return best


# --- EL equations and prolongation -------------------------------------------------------


@dataclass
class ELEquation:
    field: str
    expr: Poly
    order: int


def euler_lagrange(model: ToyModel) -> dict:
    """E^alpha = dL/dphi_alpha - D_mu dL/d(d_mu phi_alpha), with its order."""
    out = {}
    for name in model.fields:
        zero = model.field_var(name)
        E = model.lagrangian.diff(zero)
        for mu in range(model.N):
            first = model.field_var(name, MultiIndex.unit(model.N, mu))
            E = E - total_derivative(model.lagrangian.diff(first), mu)
        out[name] = ELEquation(name, E, jet_order(E))
    return out


def prolong(E: Poly, m, p: int, order: int | None = None) -> Poly:
    """E_{,m} = d_m E; only defined for |m| <= p - o."""
    o = jet_order(E) if order is None else order
    if sum(m) > p - o:
        raise ValueError(f"|m| = {sum(m)} exceeds p - o = {p - o}")
    out = E
    for mu, k in enumerate(m):
        for _ in range(k):
            out = total_derivative(out, mu)
    return out


def dt_constraint(kind, name, m, odd, p, bound=None) -> Poly:
    """D_t g_m = g'_m - q'^mu g_{m+mu}; needs |m| <= bound - 1 (bound defaults to p)."""
    bound = p if bound is None else bound
    if sum(m) > bound - 1:
        raise ValueError(f"D_t is only defined one order below the top ({bound}); got |m| = {sum(m)}")
    g = jet(kind, name, m, odd)
    out = Poly.var(g.dotted())
    for mu in range(len(m)):
        out = out - Poly.var(traj(mu, 1)) * Poly.var(jet(kind, name, add_unit(m, mu), odd))
    return out


# --- generators -------------------------------------------------------------------


@dataclass(frozen=True)
class GradedGenerator:
    kind: str
    field: str
    m: tuple
    parity: int
    afn: int
    dots: int = 0

    @property
    def var(self):
        if self.kind == "q":
            return traj(self.m[0], self.dots)
        return jet(self.kind, self.field, self.m, self.parity, self.dots)

    def dotted(self, k=1):
        return GradedGenerator(self.kind, self.field, self.m, self.parity, self.afn, self.dots + k)

    def __str__(self):
        return str(self.var)


def generators(model: ToyModel, p: int, equations=None, max_dots=0) -> list:
    """All generators with dots <= max_dots, in a fixed order."""
    equations = equations or euler_lagrange(model)
    out = []
    for dots in range(max_dots + 1):
        for mu in range(model.N):
            out.append(GradedGenerator("q", "", (mu,), 0, 0, dots))
        for name, eps in model.fields.items():
            o = equations[name].order
            bounds = {FIELD: p, ANTIFIELD: p - o, BARRED: p - 1, BARRED_STAR: p - o - 1}
            for kind in KINDS:
                flip, afn = _KIND_SHIFT[kind]
                for m in enumerate_jets(model.N, bounds[kind]):
                    out.append(GradedGenerator(kind, name, tuple(m), (eps + flip) % 2, afn, dots))
    return out


def afn_of_var(v: Var) -> int:
    if v.kind in _KIND_SHIFT:
        return _KIND_SHIFT[v.kind][1]
    return 0


# --- the differential ---------------------------------------------------------------


class KTDifferential:
    """delta on the truncated jet complex of a gauge-free toy model."""

    def __init__(self, model: ToyModel, p: int, correction: bool = True, gauge=None):
        if gauge:
            raise NotImplementedError("gauge sectors are only handled by the counting code")
        self.model = model
        self.p = p
        self.correction = correction
        self.equations = euler_lagrange(model)
        for name, eq in self.equations.items():
            if eq.order > p:
                raise ValueError(f"EL order {eq.order} of {name!r} exceeds jet order p={p}")
        self._prolonged = {}
        self._cache = {}

    def E(self, name, m) -> Poly:
        key = (name, tuple(m))
        if key not in self._prolonged:
            eq = self.equations[name]
            self._prolonged[key] = prolong(eq.expr, m, self.p, eq.order)
        return self._prolonged[key]

    def _bound(self, kind, name):
        o = self.equations[name].order
        return {FIELD: self.p, ANTIFIELD: self.p - o, BARRED: self.p - 1, BARRED_STAR: self.p - o - 1}[kind]

    def _base(self, v: Var) -> Poly:
        """delta of an undotted generator."""
        if v.kind == "q" or v.kind == FIELD:
            return Poly()
        name, m = v.index
        if sum(m) > self._bound(v.kind, name):
            raise ValueError(f"{v} lies outside the truncated complex")
        eps = self.model.fields[name]
        if v.kind == ANTIFIELD:
            return self.E(name, m)
        if v.kind == BARRED:
            return dt_constraint(FIELD, name, m, eps, self.p)
        # phibar*
        out = dt_constraint(ANTIFIELD, name, m, (eps + 1) % 2, self.p, bound=self._bound(ANTIFIELD, name))
        if self.correction:
            Em = self.E(name, m)
            for w in sorted(Em.variables()):
                if w.kind != FIELD:
                    continue
                bar = jet(BARRED, w.index[0], w.index[1], (self.model.fields[w.index[0]] + 1) % 2)
                out = out - Poly.var(bar) * Em.diff(w)
        return out

    def on_var(self, v: Var) -> Poly:
        if v not in self._cache:
            if v.dots:
                self._cache[v] = time_derivative(self.on_var(v._replace(dots=v.dots - 1)))
            else:
                self._cache[v] = self._base(v)
        return self._cache[v]

    def __call__(self, f: Poly) -> Poly:
        """Graded derivation: delta f = sum_v delta(v) * dL f / dv."""
        out = Poly()
        for v in f.variables():
            # q and fields are delta-closed
            if v.kind in ("q", FIELD):
                continue
            dv = self.on_var(v)
            if dv.is_zero():
                continue
            out = out + dv * f.diff(v)
        return out

    def generators(self, max_dots=0):
        return generators(self.model, self.p, self.equations, max_dots)


def kt_differential(model: ToyModel, p: int, correction: bool = True) -> KTDifferential:
    return KTDifferential(model, p, correction)


# --- verification ---------------------------------------------------------------------


@dataclass
class NilpotencyReport:
    model: str
    p: int
    correction: bool
    checked: int = 0
    residuals: list = field(default_factory=list)  # (label, Poly)
    grading_errors: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.residuals and not self.grading_errors


def _monomial_afn(mono):
    return sum(afn_of_var(v) * e for v, e in mono)


def _check_grading(delta, g: GradedGenerator, report):
    d = delta(Poly.var(g.var))
    if d.is_zero():
        return
    for mono in d.terms:
        if _monomial_afn(mono) != g.afn - 1:
            report.grading_errors.append((str(g), "antifield number"))
            return
    if d.parity() != (g.parity + 1) % 2:
        report.grading_errors.append((str(g), "parity"))


def verify_nilpotency(model: ToyModel, p: int, correction: bool = True, products: bool = True, max_dots=1):
    """delta^2 on every generator (dots <= max_dots) and on pairwise products of undotted ones."""
    delta = KTDifferential(model, p, correction)
    report = NilpotencyReport(model.name, p, correction)
    gens = delta.generators(max_dots)
    for g in gens:
        _check_grading(delta, g, report)
        r = delta(delta(Poly.var(g.var)))
        report.checked += 1
        if not r.is_zero():
            report.residuals.append((str(g), r))
    if products:
        base = [g for g in gens if g.dots == 0]
        for i, a in enumerate(base):
            for b in base[i:]:
                f = Poly.var(a.var) * Poly.var(b.var)
                if f.is_zero():
                    continue
                r = delta(delta(f))
                report.checked += 1
                if not r.is_zero():
                    report.residuals.append((f"{a}*{b}", r))
    return report


def expected_uncorrected_residual(delta: KTDifferential, name, m) -> Poly:
    """D_t E_m = d/dt E_m - q'^mu E_{m+mu}: what delta^2 phibar*_m gives without the correction."""
    Em = delta.E(name, m)
    out = time_derivative(Em)
    for mu in range(delta.model.N):
        out = out - Poly.var(traj(mu, 1)) * delta.E(name, add_unit(m, mu))
    return out
