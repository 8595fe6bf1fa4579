"""Finite Wick-sum oracle for the central terms of bilinear currents.

Oscillators phi_{b,k}, pi^a_k (a, b label a finite family, k integer) with

    [pi^a_j, phi_{b,k}]_-+ = delta^a_b delta_{j+k,0}

(commutator for bosons, anticommutator for fermions).  The vacuum is
annihilated by phi_k for k <= 0 and by pi_k for k < 0.  Fock states are
polynomials in the creators phi_k (k > 0) and pi_k (k >= 0), Grassmann-odd
for fermions; annihilators act as (left) derivatives:

    pi^a_{-k}  =  d/dphi_{a,k}                   (k > 0)
    phi_{b,-k} = -d/dpi^b_k  (bosons),  +d/dpi^b_k (fermions)   (k >= 0)

A current with matrix M has Fourier modes

    A_m = sum_k sum_ab M[a][b] :pi^a_{m-k} phi_{b,k}:

with annihilators moved to the right (a sign per fermionic swap).  The
central term is kappa(m) = <0|[A_m, B_{-m}]|0>.  Only finitely many mode
terms can touch a state built from the vacuum by one mode-m current, so a
window |k| <= 2|m| + 2 of the sum is exact.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import simplify_scalar
from .poly import Poly, Var

# kappa(m) = SIGMA * k * m, fixed once from the boson E-current (k4 = -x).
SIGMA = -1


def _is_creator(kind, k):
    return k > 0 if kind == "phi" else k >= 0


class _Mode:
    __slots__ = ("kind", "flavor", "k", "odd")

    def __init__(self, kind, flavor, k, odd):
        self.kind, self.flavor, self.k, self.odd = kind, flavor, k, odd

    @property
    def creator(self):
        return _is_creator(self.kind, self.k)

    def var(self):
        return Var(self.kind, (self.flavor, self.k), 0, self.odd)

    def apply(self, state: Poly) -> Poly:
        if self.creator:
            return Poly.var(self.var()) * state
        # annihilator: derivative with respect to the conjugate creator
        if self.kind == "pi":
            return state.diff(Var("phi", (self.flavor, -self.k), 0, self.odd))
        d = state.diff(Var("pi", (self.flavor, -self.k), 0, self.odd))
        return d if self.odd else -d


def _normal_ordered_terms(M, m, window, odd):
    """(coefficient, left op, right op) for :pi_{m-k} phi_k: with annihilators on the right."""
    out = []
    n = len(M)
    for k in range(-window, window + 1):
        for a in range(n):
            for b in range(n):
                c = M[a][b]
                if c == 0:
                    continue
                left = _Mode("pi", a, m - k, odd)
                right = _Mode("phi", b, k, odd)
                if not left.creator and right.creator:
                    left, right = right, left
                    c = -c if odd else c
                out.append((c, left, right))
    return out


def _apply_current(terms, state: Poly) -> Poly:
    out = Poly()
    for c, left, right in terms:
        s = right.apply(state)
        if s.is_zero():
            continue
        s = left.apply(s)
        if not s.is_zero():
            out = out + s * c
    return out


def oracle_central_term(specA, specB, statistics: str, m: int):
    """kappa(m) = <0|A_m B_{-m} - B_{-m} A_m|0> for current matrices specA, specB."""
    if statistics not in ("boson", "fermion"):
        raise ValueError(f"unknown statistics {statistics!r}")
    if len(specA) != len(specB):
        raise ValueError("current matrices must act on the same oscillator family")
    odd = statistics == "fermion"
    window = 2 * abs(m) + 2
    A_m = _normal_ordered_terms(specA, m, window, odd)
    B_mm = _normal_ordered_terms(specB, -m, window, odd)
    vac = Poly.const(1)
    ab = _apply_current(A_m, _apply_current(B_mm, vac))
    ba = _apply_current(B_mm, _apply_current(A_m, vac))
    return simplify_scalar((ab - ba).constant_term())


def calibrate_sigma(max_m=5):
    """Recover the sign from one boson with the identity current (k4 = -1)."""
    values = {Fraction(oracle_central_term([[1]], [[1]], "boson", m)) / m for m in range(1, max_m + 1)}
    if len(values) != 1:
        raise AssertionError(f"kappa(m)/m is not constant: {values}")
    return values.pop() / -1
