"""Finite matrix representations of gl(N) and of a semisimple algebra g.

Matrices are lists of rows of exact scalars.  A gl(N) representation stores
``T[mu][nu]`` = the matrix of T^mu_nu, and must satisfy

    [T^mu_nu, T^rho_sigma] = delta^rho_nu T^mu_sigma - delta^mu_sigma T^rho_nu.

A g representation stores matrices ``J[a]`` and real structure constants
``f[a][b][c]`` with [J^a, J^b] = i f^ab_c J^c.  Entries are Gaussian rationals
where the Hermitian basis needs them (su(2): J^a = sigma^a / 2).

Matrix index convention used by the jet action: row = component being
transformed, column = component it is expressed in.  With that reading the
matrix-unit family T^mu_nu = E_{mu nu} is the "vector" representation
(trace numbers u=1, v=0, w=1, x=N) and T^mu_nu = -E_{nu mu} its dual.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import GaussianRational, I, simplify_scalar


def zeros(n, m=None):
    m = n if m is None else m
    return [[Fraction(0)] * m for _ in range(n)]


def identity(n):
    out = zeros(n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def unit_matrix(n, i, j, value=1):
    out = zeros(n)
    out[i][j] = Fraction(value)
    return out


def matmul(a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = [[Fraction(0)] * m for _ in range(n)]
    for i in range(n):
        row = a[i]
        for t in range(k):
            x = row[t]
            if x == 0:
                continue
            brow = b[t]
            for j in range(m):
                y = brow[j]
                if y != 0:
                    out[i][j] = out[i][j] + x * y
    return out


def matadd(a, b, scale=1):
    return [[x + scale * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def matscale(a, s):
    return [[x * s for x in row] for row in a]


def commutator(a, b):
    return matadd(matmul(a, b), matmul(b, a), scale=-1)


def trace(a):
    total = Fraction(0)
    for i in range(len(a)):
        total = total + a[i][i]
    return simplify_scalar(total)


def is_zero_matrix(a):
    return all(x == 0 for row in a for x in row)


def kron(a, b):
    na, nb = len(a), len(b)
    out = zeros(na * nb)
    for i in range(na):
        for j in range(na):
            if a[i][j] == 0:
                continue
            for k in range(nb):
                for l in range(nb):
                    if b[k][l] != 0:
                        out[i * nb + k][j * nb + l] = a[i][j] * b[k][l]
    return out


def transpose(a):
    return [list(r) for r in zip(*a)] if a else []


@dataclass
class GLRep:
    """gl(N) representation: T[mu][nu] is the matrix of T^mu_nu."""

    N: int
    dim: int
    T: list
    name: str = "custom"

    def matrix(self, mu, nu):
        return self.T[mu][nu]


@dataclass
class GRep:
    """Representation of a Lie algebra g with [J^a, J^b] = i f^ab_c J^c."""

    dim: int
    J: list
    f: list = field(default_factory=list)
    name: str = "custom"

    @property
    def rank(self):
        return len(self.J)


# --- standard families --------------------------------------------------------


def scalar_rep(N):
    return GLRep(N, 1, [[zeros(1) for _ in range(N)] for _ in range(N)], "scalar")


def vector_rep(N):
    return GLRep(N, N, [[unit_matrix(N, mu, nu) for nu in range(N)] for mu in range(N)], "vector")


def covector_rep(N):
    return GLRep(N, N, [[unit_matrix(N, nu, mu, -1) for nu in range(N)] for mu in range(N)], "covector")


def density_rep(N, weight):
    """One-component density: T^mu_nu = weight * delta^mu_nu."""
    w = Fraction(weight)
    return GLRep(
        N, 1, [[[[w if mu == nu else Fraction(0)]] for nu in range(N)] for mu in range(N)], f"density({w})"
    )


GL_REPS = {"scalar": scalar_rep, "vector": vector_rep, "covector": covector_rep}


def trivial_g():
    return GRep(1, [], [], "trivial")


def _levi_civita(a, b, c):
    if len({a, b, c}) < 3:
        return 0
    perm = (a, b, c)
    inversions = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


def su2_structure():
    return [[[Fraction(_levi_civita(a, b, c)) for c in range(3)] for b in range(3)] for a in range(3)]


def su2_fundamental():
    half = Fraction(1, 2)
    g = GaussianRational
    sx = [[g(0), g(half)], [g(half), g(0)]]
    sy = [[g(0), g(0, -half)], [g(0, half), g(0)]]
    sz = [[g(half), g(0)], [g(0), g(-half)]]
    return GRep(2, [sx, sy, sz], su2_structure(), "su2-fundamental")


def su2_adjoint():
    """(J^a)_bc = -i eps_abc, Hermitian, tr J^a J^b = 2 delta^ab."""
    J = [[[GaussianRational(0, -_levi_civita(a, b, c)) for c in range(3)] for b in range(3)] for a in range(3)]
    return GRep(3, J, su2_structure(), "su2-adjoint")


G_REPS = {"trivial": trivial_g, "su2": su2_fundamental, "su2-adjoint": su2_adjoint}


# --- products -------------------------------------------------------------------


def combined(gl: GLRep, g: GRep):
    """Matrices of gl(N) + g on the tensor product rho (x) M.

    Returns (T, J) with T[mu][nu] = T^mu_nu (x) 1 and J[a] = 1 (x) J^a.
    """
    one_m = identity(g.dim)
    one_r = identity(gl.dim)
    T = [[kron(gl.T[mu][nu], one_m) for nu in range(gl.N)] for mu in range(gl.N)]
    J = [kron(one_r, Ja) for Ja in g.J]
    return T, J


def direct_sum(a, b):
    na, nb = len(a), len(b)
    out = zeros(na + nb)
    for i in range(na):
        for j in range(na):
            out[i][j] = a[i][j]
    for i in range(nb):
        for j in range(nb):
            out[na + i][na + j] = b[i][j]
    return out


def gl_direct_sum(r1: GLRep, r2: GLRep):
    if r1.N != r2.N:
        raise ValueError("gl(N) dimension mismatch")
    T = [[direct_sum(r1.T[mu][nu], r2.T[mu][nu]) for nu in range(r1.N)] for mu in range(r1.N)]
    return GLRep(r1.N, r1.dim + r2.dim, T, f"{r1.name}+{r2.name}")


# --- validation -------------------------------------------------------------------


@dataclass
class RepReport:
    ok: bool
    residuals: list  # (label, nonzero residual matrix)

    def __bool__(self):
        return self.ok


def validate_gl(rep: GLRep) -> RepReport:
    N = rep.N
    bad = []
    for mu in range(N):
        for nu in range(N):
            for rho in range(N):
                for sig in range(N):
                    lhs = commutator(rep.T[mu][nu], rep.T[rho][sig])
                    rhs = zeros(rep.dim)
                    if rho == nu:
                        rhs = matadd(rhs, rep.T[mu][sig])
                    if mu == sig:
                        rhs = matadd(rhs, rep.T[rho][nu], scale=-1)
                    res = matadd(lhs, rhs, scale=-1)
                    if not is_zero_matrix(res):
                        bad.append(((mu, nu, rho, sig), res))
    return RepReport(not bad, bad)


def validate_g(rep: GRep) -> RepReport:
    bad = []
    n = rep.rank
    for a in range(n):
        for b in range(n):
            lhs = commutator(rep.J[a], rep.J[b])
            rhs = zeros(rep.dim)
            for c in range(n):
                fc = rep.f[a][b][c]
                if fc != 0:
                    rhs = matadd(rhs, matscale(rep.J[c], I * fc))
            res = matadd(lhs, rhs, scale=-1)
            if not is_zero_matrix(res):
                bad.append(((a, b), res))
    return RepReport(not bad, bad)


def validate_rep(rep) -> RepReport:
    """Check the defining brackets of a GLRep or GRep exactly."""
    if isinstance(rep, GLRep):
        return validate_gl(rep)
    if isinstance(rep, GRep):
        return validate_g(rep)
    raise TypeError(f"not a representation: {rep!r}")
