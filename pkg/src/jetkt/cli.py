"""Command-line front end: ``jetkt {charges,solve,verify,census}``.

Exit codes: 0 success, 1 verification failure (a nonzero exact residual),
2 bad input.  ``--json`` prints the machine report (schema in
docs/report_schema.json); rationals are "numerator/denominator" strings.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

import jsonschema
import yaml

from . import __version__
from .charges import (
    BOSON,
    ChargeVector,
    SectorLadder,
    Targets,
    abelian_charges_multi,
    abelian_charges_single,
    albega_closed,
    albega_direct,
    conds2_ladder,
    k_parameters,
    trace_numbers,
    trajectory_charges,
)
from .content import FieldSpec, assemble_system, build_ladder, sm_census, solve_content, spurious_equivalence, xs_formula
from .exact import format_rational
from .ktcomplex import ToyModel, free_fermion, free_scalar, phi4_scalar, verify_nilpotency
from .linform import LinearForm, as_linear_form
from .liejet import FieldEntry, FieldTable, random_g_valued, random_vector_field, verify_homomorphism
from .poly import ParseError
from .reps import G_REPS, GL_REPS
from .wick import SIGMA, oracle_central_term

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

_RATIONAL = {"type": ["integer", "string"]}
_COUNTS = {
    "type": "object",
    "properties": {k: _RATIONAL for k in "xyuvw"},
    "additionalProperties": False,
}

SPEC_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "N": {"type": "integer", "minimum": 1},
        "p": {"type": "integer", "minimum": 0},
        "r": {"type": "integer", "minimum": 1},
        "reduced": {"type": "boolean"},
        "targets": {
            "type": "object",
            "properties": {k: _RATIONAL for k in "UVWXY"},
            "additionalProperties": False,
        },
        "fields": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["name", "statistics", "el_order"],
                "properties": {
                    "name": {"type": "string"},
                    "statistics": {"enum": ["boson", "fermion"]},
                    "el_order": {"type": "integer", "minimum": 0},
                    "include_barred": {"type": "boolean"},
                    "counts": _COUNTS,
                    "weight": _RATIONAL,
                    "gauge": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "additionalProperties": False,
                            "required": ["name", "order"],
                            "properties": {
                                "name": {"type": "string"},
                                "order": {"type": "integer", "minimum": 0},
                                "counts": _COUNTS,
                            },
                        },
                    },
                },
            },
        },
        "ladder": {
            "type": "object",
            "additionalProperties": False,
            "properties": {k: {"type": "array", "items": _RATIONAL} for k in "xyuvw"},
        },
        "conds2_depth": {"type": "integer", "minimum": 0},
        "representations": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["gl"],
                "properties": {
                    "gl": {"enum": sorted(GL_REPS)},
                    "g": {"enum": sorted(G_REPS)},
                    "statistics": {"enum": ["boson", "fermion"]},
                    "multiplicity": {"type": "integer", "minimum": 1},
                },
            },
        },
        "model": {
            "type": "object",
            "additionalProperties": False,
            "required": ["fields", "lagrangian"],
            "properties": {
                "name": {"type": "string"},
                "fields": {
                    "type": "object",
                    "additionalProperties": {"enum": ["boson", "fermion"]},
                },
                "lagrangian": {"type": "string"},
            },
        },
    },
}


class InputError(Exception):
    pass


# --- helpers ----------------------------------------------------------------------------


def load_spec(path):
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read spec file: {exc}") from exc
    try:
        data = json.loads(text) if path.endswith(".json") else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise InputError(f"cannot parse spec file: {exc}") from exc
    data = {} if data is None else data
    try:
        jsonschema.validate(data, SPEC_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"spec file invalid at {where}: {exc.message}") from exc
    return data


def parse_range(text):
    try:
        a, b = text.split("..")
        a, b = int(a), int(b)
    except ValueError:
        raise InputError(f"--p-range expects A..B, got {text!r}") from None
    if a > b or a < 0:
        raise InputError(f"empty or negative range {text!r}")
    return list(range(a, b + 1))


def _form(value):
    try:
        return as_linear_form(value)
    except (ParseError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational or linear form {value!r}: {exc}") from exc


def _targets(spec):
    t = spec.get("targets")
    if t is None:
        return Targets.symbolic()
    return Targets(**{k: _form(t.get(k, LinearForm.symbol(k))) for k in "UVWXY"})


def _target_values(targets):
    out = {}
    for k in "UVWXY":
        f = getattr(targets, k)
        if f.is_constant():
            out[k] = f.const
    return out


def _json_value(v):
    if isinstance(v, LinearForm):
        return format_rational(v.const) if v.is_constant() else str(v)
    if isinstance(v, (int, Fraction)) and not isinstance(v, bool):
        return format_rational(v)
    return v


def _text(v):
    if isinstance(v, LinearForm) and v.is_constant():
        v = v.const
    return str(v)


def _charges_json(cv: ChargeVector):
    return {f"c{i + 1}": _json_value(a) for i, a in enumerate(cv.as_tuple())}


def emit(report, as_json, lines):
    if as_json:
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")


def _report(command, inputs, outputs, verdict, residuals=None):
    return {
        "tool": "jetkt",
        "version": __version__,
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "verdict": verdict,
        "residuals": residuals or [],
    }


def _table(header, rows):
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    fmt = "  ".join("{:>%d}" % w for w in widths)
    out = [fmt.format(*header), fmt.format(*("-" * w for w in widths))]
    out += [fmt.format(*(str(x) for x in row)) for row in rows]
    return out


# --- charges ----------------------------------------------------------------------------


def _spec_ladder(spec, targets):
    """Ladder assembled from the input file: field entries, explicit sequences and a conds2 depth all add up."""
    ladder = SectorLadder()
    if "fields" in spec:
        specs = []
        for f in spec["fields"]:
            f = dict(f)
            f["counts"] = {k: _form(v) for k, v in f.get("counts", {}).items()}
            f["gauge"] = [
                dict(g, counts={k: _form(v) for k, v in g.get("counts", {}).items()}) for g in f.get("gauge", [])
            ]
            if "weight" in f:
                f["weight"] = _form(f["weight"]).value()
            specs.append(FieldSpec(**f))
        ladder = ladder + build_ladder(specs, reduced=spec.get("reduced", False))
    if "ladder" in spec:
        seqs = {k: [_form(v) for v in vals] for k, vals in spec["ladder"].items()}
        ladder = ladder + SectorLadder.from_sequences(**seqs)
    if "conds2_depth" in spec:
        ladder = ladder + conds2_ladder(targets, spec["conds2_depth"])
    values = _target_values(targets)
    return ladder.substitute(values) if values else ladder


def cmd_charges(args):
    spec = load_spec(args.spec)
    N = args.N or spec.get("N")
    if N is None:
        raise InputError("dimension N is required (spec key N or --N)")
    targets = _targets(spec)
    ladder = _spec_ladder(spec, targets)
    reps = spec.get("representations", [])
    trajectory = not args.no_trajectory
    if args.p_range:
        ps = parse_range(args.p_range)
    else:
        p = args.p if args.p is not None else spec.get("p", ladder.depth)
        ps = [p]
    for p in ps:
        if p < ladder.depth:
            raise InputError(f"p = {p} is below the ladder depth r = {ladder.depth}")

    single = []
    for rep in reps:
        gl = GL_REPS[rep["gl"]](N)
        g = G_REPS[rep.get("g", "trivial")]()
        t = trace_numbers(gl, g)
        k = k_parameters(t, rep.get("statistics", BOSON))
        single.append((rep, t, k, rep.get("multiplicity", 1)))

    rows = []
    for p in ps:
        total = abelian_charges_multi(ladder, N, p, include_trajectory=False)
        for _, _, k, mult in single:
            total = total + abelian_charges_single(k, N, p, False).scale(mult)
        if trajectory:
            total = total + trajectory_charges(N)
        rows.append((p, total))

    distinct = {tuple(str(a) for a in cv.as_tuple()) for _, cv in rows}
    outputs = {
        "ladder": ladder.to_json(),
        "trace_numbers": [
            {"representation": dict(rep), "traces": t.to_json(), "k": k.to_json()} for rep, t, k, _ in single
        ],
        "charges": [{"p": p, **_charges_json(cv)} for p, cv in rows],
        "p_independent": len(distinct) == 1,
    }
    inputs = {"spec": args.spec, "N": N, "p": ps, "trajectory": trajectory}
    report = _report("charges", inputs, outputs, "pass")
    lines = [f"abelian charges, N={N}, trajectory {'on' if trajectory else 'off'}"]
    lines += _table(["p", "c1", "c2", "c3", "c4", "c5"], [[p, *map(_text, cv.as_tuple())] for p, cv in rows])
    if len(rows) > 1:
        lines.append("p-independent: " + ("yes" if outputs["p_independent"] else "no"))
    emit(report, args.json, lines)
    return EXIT_OK


# --- solve ------------------------------------------------------------------------------


def cmd_solve(args):
    mode = args.mode
    r = args.r if args.r is not None else (4 if mode == "full" else 3)
    if r < 1:
        raise InputError("--r must be >= 1")
    if args.letters:
        letters = tuple(args.letters.split(","))
        if any(x not in "xyuvw" or len(x) != 1 for x in letters):
            raise InputError(f"--letters must be a comma list drawn from x,y,u,v,w; got {args.letters!r}")
    else:
        letters = ("x",) if mode == "full" else ("x", "y", "u", "v", "w")
    sol = solve_content(assemble_system(mode, r, letters))
    residuals = [(label, res) for label, res in zip(sol.constraint.system.labels, sol.residuals())]
    # with conditions present the pivots cannot satisfy every row; only feasible solutions must verify
    bad = [(label, str(res)) for label, res in residuals if not res.is_zero()] if sol.feasible else []
    outputs = sol.to_json()
    outputs["equations"] = [
        {"equation": label, "lhs": {k: format_rational(v) for k, v in row.items()}, "rhs": str(rhs)}
        for label, row, rhs in zip(sol.constraint.system.labels, sol.constraint.system.rows, sol.constraint.system.rhs)
    ]
    if mode == "reduced" and "x" in letters:
        outputs["xs_formula"] = str(xs_formula(r))
    verdict = "fail" if bad else "pass"
    report = _report("solve", {"mode": mode, "r": r, "letters": list(letters)}, outputs, verdict,
                     [{"equation": l, "residual": s} for l, s in bad])
    lines = [f"{mode} system, r={r}: " + ("feasible" if sol.feasible else "INFEASIBLE")
             + (", unique" if sol.unique else f", free: {', '.join(sol.free)}")]
    lines += _table(["unknown", "value"], [[k, str(v)] for k, v in sol.assignment.items()])
    for label, form in sol.violated:
        lines.append(f"violated {label}: needs 0 = {-form}")
    emit(report, args.json, lines)
    return EXIT_FAIL if bad else EXIT_OK


# --- verify -----------------------------------------------------------------------------

_TOYS = {"free": free_scalar, "phi4": phi4_scalar, "fermion": free_fermion}


def _verify_brackets(args):
    rng = random.Random(args.seed)
    cases = []
    reps = [args.rep] if args.rep else ["scalar", "vector", "covector"]
    for t in range(args.trials):
        N = args.N if args.N else rng.choice([1, 2, 3])
        p = args.p if args.p is not None else rng.randint(0, 3 if N < 3 else 2)
        gl = reps[t % len(reps)]
        gname = args.g
        entry = FieldEntry("phi", GL_REPS[gl](N), G_REPS[gname]())
        table = FieldTable(N, p, [entry])
        xi = random_vector_field(rng, N, args.degree)
        eta = random_vector_field(rng, N, args.degree)
        rank = len(entry.J)
        X = random_g_valued(rng, N, rank, args.degree) if rank else None
        Y = random_g_valued(rng, N, rank, args.degree) if rank else None
        rep = verify_homomorphism(xi, eta, X, Y, table)
        cases.append({
            "trial": t, "N": N, "p": p, "rep": gl, "g": gname, "ok": rep.ok,
            "residuals": {k: repr(v) for k, v in rep.failures().items()},
        })
    return cases


def _verify_kt(args, spec):
    if "model" in spec:
        m = spec["model"]
        fields = {k: (1 if v == "fermion" else 0) for k, v in m["fields"].items()}
        try:
            model = ToyModel.parse(spec.get("N", 1), fields, m["lagrangian"], m.get("name", "spec"))
        except (ParseError, ValueError) as exc:
            raise InputError(f"bad model: {exc}") from exc
        models = [model]
    elif args.model:
        models = [_TOYS[args.model]()]
    else:
        models = [free_scalar(), phi4_scalar()]
    ps = [args.p] if args.p is not None else [2, 3, 4]
    cases = []
    for model in models:
        for p in ps:
            try:
                rep = verify_nilpotency(model, p, correction=not args.no_correction)
            except ValueError as exc:
                raise InputError(str(exc)) from exc
            cases.append({
                "model": model.name, "p": p, "correction": not args.no_correction, "ok": rep.ok,
                "checked": rep.checked,
                "residuals": {label: str(res) for label, res in rep.residuals},
                "grading_errors": [f"{a}: {b}" for a, b in rep.grading_errors],
            })
    return cases


def _verify_oracle(args):
    cases = []
    for stats in ("boson", "fermion"):
        kappas = [oracle_central_term([[1]], [[1]], stats, m) for m in range(0, args.max_m + 1)]
        ratios = {Fraction(k) / m for m, k in enumerate(kappas) if m}
        k4 = k_parameters(trace_numbers(GL_REPS["scalar"](1)), stats).k4
        expected = [SIGMA * k4 * m for m in range(args.max_m + 1)]
        cases.append({
            "current": "E", "statistics": stats, "ok": kappas == expected and len(ratios) == 1,
            "kappa": [format_rational(k) for k in kappas], "sigma": SIGMA, "k4": format_rational(k4),
        })
    return cases


def _verify_identities(args):
    cases = []
    for r in range(0, args.r_max + 1):
        for i in range(0, r + 2):
            d, c = albega_direct(i, r), albega_closed(i, r)
            cases.append({"r": r, "i": i, "ok": d == c, "direct": [format_rational(x) for x in d],
                          "closed": [format_rational(x) for x in c]})
    return cases


def cmd_verify(args):
    spec = load_spec(args.spec)
    kind = args.kind
    if kind == "brackets":
        cases = _verify_brackets(args)
    elif kind == "kt":
        cases = _verify_kt(args, spec)
    elif kind == "oracle":
        cases = _verify_oracle(args)
    else:
        cases = _verify_identities(args)
    failed = [c for c in cases if not c["ok"]]
    inputs = {k: v for k, v in vars(args).items() if k not in ("func", "json")}
    report = _report("verify " + kind, inputs, {"cases": cases, "passed": len(cases) - len(failed)},
                     "fail" if failed else "pass",
                     [c for c in failed])
    lines = [f"verify {kind}: {len(cases) - len(failed)}/{len(cases)} cases pass"]
    for c in failed:
        res = c.get("residuals") or {}
        lines.append("FAIL " + ", ".join(f"{k}={c[k]}" for k in c if k not in ("ok", "residuals")))
        for label, expr in list(res.items())[:5]:
            lines.append(f"  {label}: {expr}")
    emit(report, args.json, lines)
    return EXIT_FAIL if failed else EXIT_OK


# --- census -----------------------------------------------------------------------------


def cmd_census(args):
    c = sm_census()
    v = spurious_equivalence(10, 6)
    outputs = c.to_json()
    outputs["vielbein"] = {"components": v.total_fields, "algebraic_conditions": v.spurious_count,
                           "net": format_rational(v.net), "cancels": v.cancels}
    report = _report("census", {}, outputs, "pass")
    lines = [
        f"bosons            {c.bosons}",
        f"gauge conditions  {c.gauge_conditions}",
        f"fermions          {c.fermions} ({c.fermions_per_generation} per generation)",
        f"fermionic gauge   {c.fermionic_gauge}",
        "X predictions     " + ", ".join(f"{k}: {_text(v)}" for k, v in c.predictions.items()),
        "verdict           " + ("consistent" if c.consistent else "inconsistent"),
        f"leading check     2x_F = {c.leading_lhs}, 3x_B = {c.leading_rhs}: "
        + ("holds" if c.leading_ok else "fails"),
        f"vielbein          {v.total_fields} components - {v.spurious_count} conditions -> net {v.net}",
    ]
    emit(report, args.json, lines)
    return EXIT_OK


# --- entry point ------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="YAML or JSON spec file")
    common.add_argument("--json", action="store_true", help="print the machine-readable report")
    common.add_argument("--seed", type=int, default=20240101, help="seed for randomized checks")
    common.add_argument("--p", type=int, help="jet order")
    common.add_argument("--p-range", help="sweep of jet orders, A..B")
    common.add_argument("--r", type=int, help="ladder depth / system parameter")
    common.add_argument("--mode", choices=["full", "reduced"], default="full")
    common.add_argument("--no-trajectory", action="store_true", help="drop the trajectory constants")
    common.add_argument("--no-correction", action="store_true", help="KT differential without the correction term")
    common.add_argument("--N", type=int, help="spacetime dimension")

    parser = argparse.ArgumentParser(prog="jetkt", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"jetkt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("charges", parents=[common], help="abelian charges c1..c5")
    p.set_defaults(func=cmd_charges)

    p = sub.add_parser("solve", parents=[common], help="solve a field-content constraint system")
    p.add_argument("--letters", help="comma list of parameter letters (default: x for full, all for reduced)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", parents=[common], help="exact verification suites")
    p.add_argument("kind", choices=["brackets", "kt", "oracle", "identities"])
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--rep", choices=sorted(GL_REPS))
    p.add_argument("--g", choices=sorted(G_REPS), default="trivial")
    p.add_argument("--model", choices=sorted(_TOYS))
    p.add_argument("--max-m", type=int, default=5)
    p.add_argument("--r-max", type=int, default=12)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("census", parents=[common], help="Standard-Model field census")
    p.set_defaults(func=cmd_census)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"jetkt: error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
