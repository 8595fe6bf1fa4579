import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from jetkt.charges import Targets, abelian_charges_multi, check_conditions
from jetkt.content import (
    FieldSpec,
    GaugeEntry,
    assemble_system,
    boson_spec,
    build_ladder,
    fermion_spec,
    ladder_rows,
    main_result,
    sm_census,
    solution_ladder,
    solve_content,
    spurious_equivalence,
    standard_specs,
    verify_main_result,
    vielbein_example,
    xs_formula,
)
from jetkt.linform import LinearForm


def forms(*texts):
    return [LinearForm.parse(t) for t in texts]


def test_ladder_rules_from_the_tables():
    assert build_ladder([fermion_spec()]).sequence("x") == forms("x_F", "-2x_F", "x_F + x_S", "-x_S")
    assert build_ladder([boson_spec()]).sequence("x") == forms("-x_B", "x_B", "x_B", "-x_B - x_G", "x_G")
    assert build_ladder([boson_spec()], reduced=True).sequence("x") == forms("-x_B", "0", "x_B", "-x_G")
    assert build_ladder([]).is_zero()


def test_ladder_rows_signs():
    rows = {r.label: r for r in ladder_rows(fermion_spec())}
    assert rows["F"].contribution.x == LinearForm.parse("x_F")
    assert rows["Fbar"].offset == 1 and rows["Fbar"].contribution.x == LinearForm.parse("-x_F")
    assert rows["b[S]bar"].offset == 3


def test_gauge_order_warning():
    with pytest.warns(UserWarning):
        FieldSpec("B", "boson", 2, [GaugeEntry("G", 2)])


def test_bad_field_specs():
    with pytest.raises(ValueError):
        FieldSpec("B", "anyon", 2)
    with pytest.raises(ValueError):
        FieldSpec("B", "boson", -1)


def test_full_system_equations():
    c = assemble_system("full", 4)
    rows = dict(zip(c.system.labels, zip(c.system.rows, c.system.rhs)))
    assert rows["p:x"] == ({"x_F": 1, "x_B": -1}, LinearForm.parse("X"))
    assert rows["p-1:x"] == ({"x_F": -2, "x_B": 1}, LinearForm.parse("-4X"))
    assert rows["p-2:x"] == ({"x_S": 1, "x_F": 1, "x_B": 1}, LinearForm.parse("6X"))
    assert rows["p-3:x"] == ({"x_S": -1, "x_G": -1, "x_B": -1}, LinearForm.parse("-4X"))
    assert rows["p-4:x"] == ({"x_G": 1}, LinearForm.parse("X"))
    assert rows["p-5:x"] == ({}, LinearForm())


def test_reduced_system_equations():
    c = assemble_system("reduced", 3)
    rows = dict(zip(c.system.labels, zip(c.system.rows, c.system.rhs)))
    assert rows["p:x"] == ({"x_F": 1, "x_B": -1}, LinearForm.parse("X"))
    assert rows["p-1:x"] == ({"x_F": -1}, LinearForm.parse("-3X"))
    assert rows["p-2:x"] == ({"x_S": 1, "x_B": 1}, LinearForm.parse("3X"))
    assert rows["p-3:x"] == ({"x_G": -1}, LinearForm.parse("-X"))


@pytest.mark.parametrize("mode", ["sideways", "diagonal"])
def test_assemble_rejects_unknown_mode(mode):
    with pytest.raises(ValueError):
        assemble_system(mode, 4)


def test_assemble_rejects_bad_parameters():
    with pytest.raises(ValueError):
        assemble_system("full", 0)
    with pytest.raises(ValueError):
        assemble_system("full", 4, letters=("z",))


def test_full_r4_solution():
    sol = solve_content(assemble_system("full", 4))
    assert sol.unique and sol.feasible
    assert {k: str(v) for k, v in sol.assignment.items()} == {"x_F": "3X", "x_B": "2X", "x_S": "X", "x_G": "X"}
    assert all(r.is_zero() for r in sol.residuals())


@pytest.mark.parametrize("r", [5, 6, 7])
def test_full_deep_systems_force_zero(r):
    sol = solve_content(assemble_system("full", r))
    assert not sol.feasible
    assert sol.infeasible_unless_zero() == ["X"]
    labels = [label for label, _ in sol.violated]
    assert f"p-{r}:x" in labels or f"p-{r - 1}:x" in labels


def test_full_r1_is_solvable():
    sol = solve_content(assemble_system("full", 1))
    assert sol.feasible and sol.unique
    assert {k: str(v) for k, v in sol.assignment.items()} == {"x_B": "-X", "x_F": "0", "x_S": "X", "x_G": "0"}
    assert sol.negative_counts() == ["x_B"]


def test_reduced_r2_avoids_fermionic_gauge():
    sol = solve_content(assemble_system("reduced", 2))
    assert sol.assignment["x_S"].is_zero() and sol.assignment["x_G"].is_zero()


@pytest.mark.parametrize("r", range(2, 7))
def test_xs_formula_matches_solver(r):
    sol = solve_content(assemble_system("reduced", r))
    assert sol.assignment["x_S"] == xs_formula(r)


def test_xs_formula_values():
    assert [str(xs_formula(r)) for r in (2, 3, 4)] == ["0", "X", "3X"]
    with pytest.raises(ValueError):
        xs_formula(0)


TABLE = {
    "x_B": "2X", "x_F": "3X", "x_S": "X", "x_G": "X",
    "y_B": "2Y", "y_F": "3Y", "y_S": "Y", "y_G": "Y",
    "u_B": "2U", "u_F": "3U", "u_S": "U - X", "u_G": "U - X",
    "v_B": "2V + 2W", "v_F": "3V + 2W", "v_S": "V + 2W + X", "v_G": "V + 2W + X",
    "w_B": "2W + X", "w_F": "3W + X", "w_S": "W + X", "w_G": "W + X",
}


def test_main_result_table():
    sol = main_result()
    assert sol.unique and sol.feasible
    assert len(sol.assignment) == 20
    assert {k: LinearForm.parse(v) for k, v in TABLE.items()} == sol.assignment


def test_main_result_passes_both_condition_systems():
    report = verify_main_result()
    assert report.conds_ok and report.conds2_ok


def test_main_result_gives_constant_charges():
    ladder = solution_ladder(main_result())
    # the reduced ladder has depth 3 and lives in N - 1 = 3 dimensions
    values = {abelian_charges_multi(ladder, 3, p) for p in range(3, 8)}
    assert values == {Targets.symbolic().limit()}


def test_census():
    c = sm_census()
    assert (c.bosons, c.gauge_conditions, c.fermions_per_generation, c.fermions, c.fermionic_gauge) == (60, 16, 15, 90, 0)
    assert c.predictions == {"x_B": 30, "x_G": 16, "x_F": 30, "x_S": 0}
    assert not c.consistent
    assert c.leading_lhs == c.leading_rhs == 180


def test_census_json_uses_rational_strings():
    data = sm_census().to_json()
    assert data["X_predictions"]["x_F"] == "30/1"
    assert data["verdict"] == "inconsistent"


def test_vielbein():
    v = vielbein_example()
    assert (v.total_fields, v.spurious_count, v.net, v.cancels) == (16, 6, 10, True)


@given(st.integers(0, 40), st.integers(0, 40), st.sampled_from(["boson", "fermion"]))
def test_spurious_fields_cancel(n, k, stats):
    report = spurious_equivalence(n, k, stats)
    assert report.net == n and report.cancels


def test_spurious_rejects_negative():
    with pytest.raises(ValueError):
        spurious_equivalence(-1, 0)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_telescoping_of_barred_rows(N):
    full, reduced = build_ladder(standard_specs()), build_ladder(standard_specs(), reduced=True)
    for p in range(7):
        a = abelian_charges_multi(full, N, p, allow_short=True).c4
        b = abelian_charges_multi(reduced, N - 1, p, allow_short=True).c4
        assert LinearForm.lift(a) == LinearForm.lift(b)


def test_solution_json_is_plain_data():
    import json

    json.dumps(main_result().to_json())
    data = solve_content(assemble_system("full", 6)).to_json()
    assert not data["feasible"] and data["violated"]
