"""Field content -> sector ladders -> exact constraint systems.

Ladder rules for a field with EL order o and gauge entries of order s_a:

    row        offset   parity              afn
    field      0        e                   0
    antifield  o        e + 1               1
    gauge b_a  s_a      e                   2
    barred     +1       flipped             (one per row above)

A row contributes +count when Grassmann-odd and -count when even; a barred
partner sits one order lower with the negated contribution.  The reduced
ladder drops the barred rows.

The constraint systems demand, offset by offset, that the ladder equals the
alpha/beta/gamma right-hand sides for depth r:

    x_i = (-1)^i C(r,i) X               y_i = (-1)^i C(r,i) Y
    u_i = (-1)^i C(r,i) U - alpha_i X
    v_i = (-1)^i C(r,i) V - 2 beta_i W + gamma_i X
    w_i = (-1)^i C(r,i) W - beta_i X
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .charges import (
    LETTERS,
    SectorEntry,
    SectorLadder,
    Targets,
    albega,
    check_conditions,
)
from .linform import LinearForm, LinearSystem, as_linear_form, solve
from .mindex import binom_ext

BOSON, FERMION = "boson", "fermion"


@dataclass
class GaugeEntry:
    name: str
    order: int
    counts: dict = field(default_factory=dict)

    def count_forms(self):
        return _counts(self.name, self.counts)


def _counts(name, given):
    out = {}
    for letter in LETTERS:
        if letter in given:
            out[letter] = as_linear_form(given[letter])
        else:
            out[letter] = LinearForm.symbol(f"{letter}_{name}")
    return out


@dataclass
class FieldSpec:
    """A field (plus its antifield tower) entering the counting."""

    name: str
    statistics: str
    el_order: int
    gauge: list = field(default_factory=list)
    include_barred: bool = True
    counts: dict = field(default_factory=dict)
    weight: Fraction = Fraction(0)

    def __post_init__(self):
        if self.statistics not in (BOSON, FERMION):
            raise ValueError(f"statistics must be boson or fermion, got {self.statistics!r}")
        if self.el_order < 0:
            raise ValueError("EL order must be >= 0")
        self.gauge = [g if isinstance(g, GaugeEntry) else GaugeEntry(**g) for g in self.gauge]
        for g in self.gauge:
            if g.order < 0:
                raise ValueError("gauge order must be >= 0")
            if g.order <= self.el_order:
                warnings.warn(f"gauge relation {g.name!r} has order {g.order} <= EL order {self.el_order}", stacklevel=2)

    @property
    def parity(self):
        return 1 if self.statistics == FERMION else 0

    def count_forms(self):
        return _counts(self.name, self.counts)


@dataclass(frozen=True)
class LadderRow:
    label: str
    offset: int
    parity: int
    barred: bool
    contribution: SectorEntry


def _signed(counts, parity):
    s = 1 if parity else -1
    return SectorEntry(**{k: v * s for k, v in counts.items()})


def ladder_rows(spec: FieldSpec, reduced=False) -> list:
    e = spec.parity
    base = [
        (spec.name, 0, e, spec.count_forms()),
        (spec.name + "*", spec.el_order, 1 - e, spec.count_forms()),
    ]
    for g in spec.gauge:
        base.append((f"b[{g.name}]", g.order, e, g.count_forms()))
    rows = []
    for label, off, par, counts in base:
        contrib = _signed(counts, par)
        rows.append(LadderRow(label, off, par, False, contrib))
        if spec.include_barred and not reduced:
            rows.append(LadderRow(label + "bar", off + 1, 1 - par, True, -contrib))
    return sorted(rows, key=lambda r: (r.offset, r.barred, r.label))


def build_ladder(specs, reduced=False) -> SectorLadder:
    out = SectorLadder()
    for spec in specs:
        entries = {}
        for row in ladder_rows(spec, reduced):
            entries[row.offset] = entries.get(row.offset, SectorEntry()) + row.contribution
        out = out + SectorLadder(entries)
    return out


def fermion_spec(**kw):
    """x_F fermions, first-order EL equations, x_S gauge relations of order 2."""
    return FieldSpec("F", FERMION, 1, [GaugeEntry("S", 2)], **kw)


def boson_spec(**kw):
    """x_B bosons, second-order EL equations, x_G gauge relations of order 3."""
    return FieldSpec("B", BOSON, 2, [GaugeEntry("G", 3)], **kw)


def standard_specs(reduced=False):
    return [fermion_spec(), boson_spec()]


# --- systems -----------------------------------------------------------------------------


def rhs_form(letter, i, r, targets: Targets):
    T = targets
    c = (-1) ** i * binom_ext(r, i)
    if letter == "x":
        return T.X * c
    if letter == "y":
        return T.Y * c
    a, b, g = albega(i, r)
    if letter == "u":
        return T.U * c - T.X * a
    if letter == "v":
        return T.V * c - T.W * (2 * b) + T.X * g
    if letter == "w":
        return T.W * c - T.X * b
    raise ValueError(f"unknown letter {letter!r}")


def _offset_label(i):
    return "p" if i == 0 else f"p-{i}"


@dataclass
class ConstraintSystem:
    mode: str
    r: int
    letters: tuple
    ladder: SectorLadder
    system: LinearSystem


def assemble_system(mode="full", r=4, letters=("x",), specs=None, targets=None) -> ConstraintSystem:
    """Offset-by-offset equations ladder_i = rhs_i for i = 0..max(depth, r+1)."""
    if mode not in ("full", "reduced"):
        raise ValueError("mode must be 'full' or 'reduced'")
    if r < 1:
        raise ValueError("r must be >= 1")
    for letter in letters:
        if letter not in LETTERS:
            raise ValueError(f"unknown letter {letter!r}")
    specs = standard_specs() if specs is None else specs
    targets = Targets.symbolic() if targets is None else targets
    ladder = build_ladder(specs, reduced=(mode == "reduced"))
    last = max(ladder.depth, r + 1)
    unknowns = []
    for i in range(last + 1):
        for letter in letters:
            for s in sorted(getattr(ladder[i], letter).symbols()):
                if s not in unknowns:
                    unknowns.append(s)
    system = LinearSystem(unknowns)
    for i in range(last + 1):
        for letter in letters:
            lhs = getattr(ladder[i], letter)
            rhs = rhs_form(letter, i, r, targets) - lhs.const
            system.add(dict(lhs.coeffs), rhs, f"{_offset_label(i)}:{letter}")
    return ConstraintSystem(mode, r, tuple(letters), ladder, system)


@dataclass
class ContentSolution:
    constraint: ConstraintSystem
    assignment: dict
    free: list
    conditions: list

    @property
    def unique(self):
        return not self.free

    @property
    def feasible(self):
        return all(form.is_zero() for _, form in self.conditions)

    @property
    def violated(self):
        return [(label, form) for label, form in self.conditions if not form.is_zero()]

    def residuals(self):
        return self.constraint.system.residuals(self.assignment)

    def infeasible_unless_zero(self):
        """Target symbols that the violated conditions force to vanish (one-symbol conditions)."""
        out = set()
        for _, form in self.violated:
            if len(form.coeffs) == 1 and form.const == 0:
                out |= form.symbols()
        return sorted(out)

    def negative_counts(self):
        """Unknowns whose solution has a negative coefficient (diagnostic only)."""
        return [k for k, v in self.assignment.items() if any(c < 0 for c in v.coeffs.values())]

    def to_json(self):
        return {
            "mode": self.constraint.mode,
            "r": self.constraint.r,
            "unique": self.unique,
            "feasible": self.feasible,
            "negative_counts": self.negative_counts(),
            "assignment": {k: str(v) for k, v in self.assignment.items()},
            "free": list(self.free),
            "violated": [{"equation": label, "requires": f"0 = {-form}"} for label, form in self.violated],
        }


def solve_content(constraint: ConstraintSystem) -> ContentSolution:
    sol = solve(constraint.system)
    return ContentSolution(constraint, sol.assignment, sol.free, sol.conditions)


def xs_formula(r: int) -> LinearForm:
    """x_S from summing the first three reduced equations: (r^2 - 3r + 2) X / 2."""
    if r < 1:
        raise ValueError("r must be >= 1")
    return LinearForm.symbol("X", Fraction(r * r - 3 * r + 2, 2))


def main_result() -> ContentSolution:
    """All twenty sector parameters from the reduced depth-3 system."""
    return solve_content(assemble_system("reduced", 3, LETTERS))


def solution_ladder(solution: ContentSolution) -> SectorLadder:
    """The ladder with the solved parameter values substituted."""
    return solution.constraint.ladder.substitute(solution.assignment)


def verify_main_result(solution: ContentSolution | None = None):
    """Cross-check the twenty-parameter solution against both condition systems."""
    solution = solution or main_result()
    return check_conditions(solution_ladder(solution), Targets.symbolic(), r=solution.constraint.r)


# --- census -----------------------------------------------------------------------------

BOSON_TABLE = (
    ("A^a_mu", "gauge bosons", 12, 4),
    ("g_mu_nu", "metric", 10, 1),
    ("H", "Higgs field", 2, 1),
)
GAUGE_TABLE = (
    ("D_mu D_nu F^{a mu nu} = 0", 12, 1),
    ("d_nu G^{mu nu} = 0", 4, 1),
)
FERMION_TABLE = (
    ("u", "up quark", 2, 3),
    ("d", "down quark", 2, 3),
    ("e", "electron", 2, 1),
    ("nu_L", "left-handed neutrino", 1, 1),
)
GENERATIONS = 3
ANTIPARTICLE_FACTOR = 2
FERMIONIC_GAUGE = 0


@dataclass
class Census:
    bosons: int
    gauge_conditions: int
    fermions_per_generation: int
    fermions: int
    fermionic_gauge: int
    predictions: dict  # sector symbol -> predicted X
    consistent: bool
    leading_lhs: int
    leading_rhs: int

    @property
    def leading_ok(self):
        return self.leading_lhs == self.leading_rhs

    def to_json(self):
        return {
            "bosons": self.bosons,
            "gauge_conditions": self.gauge_conditions,
            "fermions_per_generation": self.fermions_per_generation,
            "fermions": self.fermions,
            "fermionic_gauge_conditions": self.fermionic_gauge,
            "X_predictions": {k: _frac(v) for k, v in self.predictions.items()},
            "verdict": "consistent" if self.consistent else "inconsistent",
            "leading_check": {"2x_F": self.leading_lhs, "3x_B": self.leading_rhs, "holds": self.leading_ok},
        }


def _frac(v):
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def sm_census() -> Census:
    bosons = sum(a * b for _, _, a, b in BOSON_TABLE)
    gauge = sum(a * b for _, a, b in GAUGE_TABLE)
    per_gen = sum(a * b for _, _, a, b in FERMION_TABLE)
    fermions = ANTIPARTICLE_FACTOR * GENERATIONS * per_gen
    sol = solve_content(assemble_system("full", 4))
    coeff = {k: sol.assignment[k].coeff("X") for k in ("x_B", "x_G", "x_F", "x_S")}
    counts = {"x_B": bosons, "x_G": gauge, "x_F": fermions, "x_S": FERMIONIC_GAUGE}
    predictions = {k: Fraction(counts[k]) / coeff[k] for k in counts}
    # leading orders only fix the ratio x_F : x_B
    lhs = int(coeff["x_B"] * fermions)
    rhs = int(coeff["x_F"] * bosons)
    return Census(
        bosons, gauge, per_gen, fermions, FERMIONIC_GAUGE, predictions,
        len(set(predictions.values())) == 1, lhs, rhs,
    )


@dataclass
class SpuriousReport:
    base_count: int
    spurious_count: int
    total_fields: int
    net: Fraction
    per_order_difference: SectorLadder

    @property
    def cancels(self):
        return self.per_order_difference.is_zero()


def spurious_equivalence(base_count: int, spurious_count: int, statistics=BOSON) -> SpuriousReport:
    """Add fields with algebraic (order-0) EL equations and compare ladders."""
    if base_count < 0 or spurious_count < 0:
        raise ValueError("counts must be >= 0")
    base = FieldSpec("base", statistics, 2, counts={k: (base_count if k == "x" else 0) for k in LETTERS})
    specs = [base]
    if spurious_count:
        specs.append(
            FieldSpec("spur", statistics, 0, counts={k: (spurious_count if k == "x" else 0) for k in LETTERS})
        )
    with_spurious = build_ladder(specs)
    diff = with_spurious - build_ladder([base])
    sign = 1 if statistics == FERMION else -1
    net = with_spurious[0].x.value() * sign
    return SpuriousReport(base_count, spurious_count, base_count + spurious_count, net, diff)


def vielbein_example() -> SpuriousReport:
    """16 vielbein components with 6 algebraic symmetry conditions over a 10-component metric."""
    return spurious_equivalence(10, 6)
