import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from jetkt.exact import GaussianRational
from jetkt.liejet import (
    FieldEntry,
    FieldTable,
    FirstOrderOperator,
    GValued,
    PolyVectorField,
    assemble_generator,
    dense_blocks,
    jet_action_matrix,
    jet_action_matrix_literal,
    jet_current_matrix,
    jet_var,
    operator_bracket,
    random_g_valued,
    random_vector_field,
    verify_homomorphism,
)
from jetkt.mindex import enumerate_jets
from jetkt.poly import Poly, Var, coord, traj
from jetkt.reps import G_REPS, GL_REPS, scalar_rep

X1 = Poly.var(coord(0))


def table_for(N, p, gl="scalar", g="trivial"):
    return FieldTable(N, p, [FieldEntry("phi", GL_REPS[gl](N), G_REPS[g]())])


# --- sympy oracle -----------------------------------------------------------------------


def _sym_scalar(c):
    if isinstance(c, GaussianRational):
        return sympy.Rational(c.real.numerator, c.real.denominator) + sympy.I * sympy.Rational(
            c.imag.numerator, c.imag.denominator
        )
    c = Fraction(c)
    return sympy.Rational(c.numerator, c.denominator)


def to_sympy(f: Poly, values):
    out = sympy.Integer(0)
    for mono, c in f.terms.items():
        t = _sym_scalar(c)
        for v, e in mono:
            t *= values[v] ** e
        out += t
    return out


def sym_partial(expr, xs, m):
    for mu, k in enumerate(m):
        if k:
            expr = sympy.diff(expr, xs[mu], k)
    return expr


def oracle_setup(N, p, entry, field):
    """Jets of the test field at a symbolic base point q, as substitution values."""
    xs = sympy.symbols(f"x1:{N + 1}")
    qs = sympy.symbols(f"q1:{N + 1}")
    at_q = dict(zip(xs, qs))
    values = {coord(mu): xs[mu] for mu in range(N)}
    values.update({traj(mu): qs[mu] for mu in range(N)})
    for m in enumerate_jets(N, p):
        for a in range(entry.dim):
            values[jet_var(entry.label, a, m)] = sym_partial(field[a], xs, m).subs(at_q)
    return xs, qs, at_q, values


def monomial_fields(N, dim, degree):
    xs = sympy.symbols(f"x1:{N + 1}")
    for a in range(dim):
        for m in enumerate_jets(N, degree):
            mono = sympy.Mul(*(x ** k for x, k in zip(xs, m)))
            yield [mono if b == a else sympy.Integer(0) for b in range(dim)]


def check_L_against_oracle(xi, entry, p):
    N = xi.N
    table = FieldTable(N, p, [entry])
    L = assemble_generator("L", xi, table)
    for field in monomial_fields(N, entry.dim, p + 1):
        xs, qs, at_q, values = oracle_setup(N, p, entry, field)
        xi_s = [to_sympy(xi[mu], values) for mu in range(N)]
        # infinitesimal transform of the field, then transport of the base point
        varied = []
        for a in range(entry.dim):
            d = -sum(xi_s[mu] * sympy.diff(field[a], xs[mu]) for mu in range(N))
            for nu in range(N):
                for mu in range(N):
                    Tm = entry.T[nu][mu]
                    for b in range(entry.dim):
                        if Tm[a][b] != 0:
                            d -= sympy.diff(xi_s[mu], xs[nu]) * _sym_scalar(Tm[a][b]) * field[b]
            varied.append(d)
        for mu in range(N):
            assert sympy.expand(to_sympy(L[traj(mu)], values) - xi_s[mu].subs(at_q)) == 0
        for m in enumerate_jets(N, p):
            for a in range(entry.dim):
                expected = sym_partial(varied[a], xs, m).subs(at_q)
                expected += sum(
                    xi_s[mu].subs(at_q) * sym_partial(field[a], xs, m).diff(xs[mu]).subs(at_q) for mu in range(N)
                )
                got = to_sympy(L[jet_var(entry.label, a, m)], values)
                assert sympy.expand(got - expected) == 0, (m, a, field)


def check_J_against_oracle(X, entry, p):
    N = X.N
    table = FieldTable(N, p, [entry])
    J = assemble_generator("J", X, table)
    for field in monomial_fields(N, entry.dim, p + 1):
        xs, qs, at_q, values = oracle_setup(N, p, entry, field)
        Xs = [to_sympy(c, values) for c in X.components]
        varied = []
        for a in range(entry.dim):
            d = sympy.Integer(0)
            for k, Jk in enumerate(entry.J):
                for b in range(entry.dim):
                    if Jk[a][b] != 0:
                        d -= Xs[k] * _sym_scalar(Jk[a][b]) * field[b]
            varied.append(d)
        for m in enumerate_jets(N, p):
            for a in range(entry.dim):
                expected = sym_partial(varied[a], xs, m).subs(at_q)
                got = to_sympy(J[jet_var(entry.label, a, m)], values)
                assert sympy.expand(got - expected) == 0, (m, a, field)


@pytest.mark.parametrize(
    "N,p,gl,seed",
    [(1, 3, "scalar", 1), (1, 2, "vector", 2), (2, 2, "vector", 3), (2, 2, "covector", 4), (2, 1, "scalar", 5)],
)
def test_jet_action_matches_oracle(N, p, gl, seed):
    rng = random.Random(seed)
    entry = FieldEntry("phi", GL_REPS[gl](N))
    check_L_against_oracle(random_vector_field(rng, N, 3), entry, p)


def test_translation_matches_oracle():
    xi = PolyVectorField.translation(2, 0)
    check_L_against_oracle(xi, FieldEntry("phi", GL_REPS["vector"](2)), 2)


@pytest.mark.parametrize("N,p,g", [(1, 2, "su2"), (2, 1, "su2"), (2, 1, "su2-adjoint")])
def test_jet_current_matches_oracle(N, p, g):
    rng = random.Random(N * 10 + p)
    entry = FieldEntry("phi", scalar_rep(N), G_REPS[g]())
    check_J_against_oracle(random_g_valued(rng, N, len(entry.J), 2), entry, p)


# --- spot values ------------------------------------------------------------------------


def test_scalar_dilation_is_diagonal_at_origin():
    xi = PolyVectorField([X1])
    entry = FieldEntry("phi", scalar_rep(1))
    blocks = jet_action_matrix(xi, entry, 4)
    for (m, n), blk in blocks.items():
        val = blk[(0, 0)]
        at_origin = val.substitute({traj(0): Poly()})
        if m == n:
            assert at_origin == Poly.const(m[0])
        else:
            assert at_origin.is_zero()


def test_zero_inputs_give_zero():
    entry = FieldEntry("phi", GL_REPS["vector"](2))
    assert jet_action_matrix(PolyVectorField.zero(2), entry, 2) == {}
    assert assemble_generator("L", PolyVectorField.zero(2), table_for(2, 2, "vector")).is_zero()


def test_L_moves_base_point():
    xi = PolyVectorField([X1 * X1 + 3])
    L = assemble_generator("L", xi, table_for(1, 2))
    q = Poly.var(traj(0))
    assert L.apply(q) == q * q + 3


def test_J_on_undifferentiated_field():
    entry = FieldEntry("phi", scalar_rep(1), G_REPS["su2"]())
    X = GValued(1, [X1, Poly.const(2), Poly()])
    J = assemble_generator("J", X, FieldTable(1, 1, [entry]))
    q = Poly.var(traj(0))
    for a in range(2):
        expected = Poly()
        for k in range(3):
            Xk = X[k].substitute({coord(0): q})
            for b in range(2):
                expected = expected - Xk * entry.J[k][a][b] * Poly.var(jet_var("phi", b, (0,)))
        assert J[jet_var("phi", a, (0,))] == expected


def test_constant_current_is_block_diagonal():
    entry = FieldEntry("phi", scalar_rep(2), G_REPS["su2"]())
    blocks = jet_current_matrix(GValued(2, [1, 0, 0]), entry, 2)
    assert all(m == n for m, n in blocks)
    assert len(blocks) == len(enumerate_jets(2, 2))


def test_current_blocks_never_raise_order():
    rng = random.Random(7)
    entry = FieldEntry("phi", GL_REPS["vector"](2), G_REPS["su2"]())
    blocks = jet_current_matrix(random_g_valued(rng, 2, 3, 3), entry, 3)
    assert all(sum(n) <= sum(m) for m, n in blocks)


@pytest.mark.parametrize("gl", ["scalar", "vector", "covector"])
def test_operator_preserves_truncation(gl):
    rng = random.Random(11)
    table = table_for(2, 2, gl)
    allowed = set(table.jet_vars()) | {traj(0), traj(1)}
    L = assemble_generator("L", random_vector_field(rng, 2, 3), table)
    for v, c in L.terms():
        assert v in allowed
        assert c.variables() <= allowed


def test_literal_target_reading_matches_fast_matrix():
    rng = random.Random(3)
    entry = FieldEntry("phi", GL_REPS["covector"](2))
    xi = random_vector_field(rng, 2, 3)
    fast = dense_blocks(jet_action_matrix(xi, entry, 2), entry, 2)
    assert dense_blocks(jet_action_matrix_literal(xi, entry, 2, "target"), entry, 2) == fast
    assert dense_blocks(jet_action_matrix_literal(xi, entry, 2, "source"), entry, 2) != fast


def test_source_reading_breaks_closure():
    rng = random.Random(5)
    table = table_for(2, 2, "vector")
    xi, eta = random_vector_field(rng, 2, 3), random_vector_field(rng, 2, 3)
    from jetkt.liejet import vf_bracket

    def L(v):
        return assemble_generator("L", v, table, reading="source")

    residual = operator_bracket(L(xi), L(eta)) - L(vf_bracket(xi, eta))
    assert not residual.is_zero()
    good = operator_bracket(*(assemble_generator("L", v, table, reading="target") for v in (xi, eta)))
    assert (good - assemble_generator("L", vf_bracket(xi, eta), table)).is_zero()


# --- vector fields and operators -----------------------------------------------------------


def test_vf_bracket_examples():
    from jetkt.liejet import vf_bracket

    x_dx = PolyVectorField([X1])
    dx = PolyVectorField.translation(1, 0)
    assert vf_bracket(x_dx, dx) == PolyVectorField([Poly.const(-1)])
    assert vf_bracket(x_dx, x_dx).is_zero()


def test_vf_bracket_dimension_mismatch():
    from jetkt.liejet import vf_bracket

    with pytest.raises(ValueError):
        vf_bracket(PolyVectorField.zero(1), PolyVectorField.zero(2))


def test_operator_bracket_example():
    x = Var("x")
    d = FirstOrderOperator({x: Poly.const(1)})
    xd = FirstOrderOperator({x: Poly.var(x)})
    assert operator_bracket(d, xd) == d
    assert operator_bracket(d, d).is_zero()


seeds = st.integers(0, 10 ** 6)


@given(seeds, st.integers(1, 3))
def test_vf_jacobi(seed, N):
    from jetkt.liejet import vf_bracket

    rng = random.Random(seed)
    a, b, c = (random_vector_field(rng, N, 3) for _ in range(3))
    total = vf_bracket(a, vf_bracket(b, c)) + vf_bracket(b, vf_bracket(c, a)) + vf_bracket(c, vf_bracket(a, b))
    assert total.is_zero()
    assert (vf_bracket(a, b) + vf_bracket(b, a)).is_zero()


@given(seeds)
def test_operator_jacobi(seed):
    rng = random.Random(seed)
    table = table_for(1, 2, "vector")
    A, B, C = (assemble_generator("L", random_vector_field(rng, 1, 3), table) for _ in range(3))
    total = (
        operator_bracket(A, operator_bracket(B, C))
        + operator_bracket(B, operator_bracket(C, A))
        + operator_bracket(C, operator_bracket(A, B))
    )
    assert total.is_zero()


@given(seeds, st.sampled_from(["scalar", "vector", "covector"]))
def test_homomorphism_property(seed, gl):
    rng = random.Random(seed)
    N, p = rng.choice([(1, 3), (2, 2), (3, 1)])
    table = table_for(N, p, gl, "su2")
    xi, eta = random_vector_field(rng, N, 3), random_vector_field(rng, N, 3)
    X, Y = random_g_valued(rng, N, 3, 2), random_g_valued(rng, N, 3, 2)
    report = verify_homomorphism(xi, eta, X, Y, table)
    assert report.ok, report.failures()


def test_homomorphism_with_equal_fields_and_translations():
    table = table_for(2, 2, "vector", "su2")
    xi = PolyVectorField.translation(2, 0)
    X = GValued(2, [X1, Poly.var(coord(1)), Poly.const(1)])
    assert verify_homomorphism(xi, xi, X, X, table).ok
