"""Scenario-driven command line.

Subcommands: check-position, construct-gp, hilbert, weights, filtration,
nevanlinna, smt, selftest.  Exit codes: 0 success, 2 verified-inequality
violation, 3 inconclusive certificates, 4 input errors.  Reports embed the
seeds, precision and degree caps needed to re-run them exactly; identical
inputs give byte-identical files.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

import nevsmt
from nevsmt.curves import CurveSyntaxError
from nevsmt.filtration import (
    FiltrationParams,
    compute_b,
    filtration_dims,
    stable_quotient_violations,
)
from nevsmt.nevanlinna import fmt_residual, hyperplane_smt_margins
from nevsmt.poly import PolynomialSyntaxError
from nevsmt.quadrature import QuadratureConfig, QuadratureError
from nevsmt.report import ReportTable, emit_report, render_text
from nevsmt.scenario import (
    ScenarioError,
    build_curve,
    build_hypersurfaces,
    build_params,
    build_smt_scenario,
    build_variety,
    load_scenario_file,
    _one,
    _values,
)
from nevsmt.smt import (
    InconclusiveCertificate,
    PositionViolation,
    auxiliary_degree_general,
    auxiliary_degree_projective,
    smt_margins,
    truncation_level_general,
)
from nevsmt.variety import (
    EMPTY,
    SMOOTHNESS_NOTE,
    ReplacementConstructionError,
    ReplacementPreconditionError,
    UnstableHilbertData,
    VarietyDescriptor,
    check_position,
    construct_replacement_system,
    default_degree_cap,
    estimate_dimension,
    hilbert_function,
    variety_degree,
)
from nevsmt.weights import (
    chow_weight,
    chow_weight_floor_margin,
    hilbert_weight,
    parse_bracket_polynomial,
    weight_comparison_margin,
)

EXIT_OK = 0
EXIT_VIOLATION = 2
EXIT_INCONCLUSIVE = 3
EXIT_INPUT = 4

SCENARIO_GRAMMAR = """\
Scenario file grammar (line-oriented; '#' comments; sections repeat):
  [variety]       n = <int>; generator = <form over x0..xn> (repeatable)
  [hypersurface]  poly = <form>; degree = <int, optional, validated>
  [curve]         component = <expression in z> (repeatable, ordered)
  [params]        N = <int>; epsilon = <rational>; r_grid = <radii> |
                  r_range = <from to points log|lin>; truncation = auto|<int>;
                  seed = <int>; precision = <bits>; degree_cap = <int>
  [weights]       bracket = <bracket polynomial, e.g. 3/2 * [0,1][1,2]>;
                  c = <ints>; m = <int>; subset = <ints, optional>
  [filtration]    u = <int>; poly = <form> (repeatable; the n hypersurfaces)
Polynomial grammar: terms '+'/'-' separated; term = coeff and/or '*'-joined
x<i>[^<nat>] factors; coeff = int[/nat].  Curve expressions extend this with
z, complex literals a+bi, and exp(<polynomial in z>).
Bracket polynomials: '/'-rational coefficients times [i,j,..] groups.
"""


def _quad_config(params, args):
    precision = args.precision or params.precision
    return QuadratureConfig(precision=precision)


def _out_path(args, scenario_path, suffix):
    if args.out:
        return Path(args.out)
    ext = "csv" if args.format == "csv" else "txt"
    stem = Path(scenario_path).stem if scenario_path else "nevsmt"
    return Path(f"{stem}-{suffix}.{ext}")


def _emit(tables, args, scenario_path, suffix):
    path = _out_path(args, scenario_path, suffix)
    emit_report(tables, args.format, path)
    print(f"report written to {path}")
    return path


def _int_dim(value):
    return "EMPTY" if value is EMPTY else value


def cmd_check_position(args):
    sf = load_scenario_file(args.scenario)
    params = build_params(sf)
    variety = build_variety(sf, degree_cap=args.degree_cap or params.degree_cap)
    hypersurfaces = build_hypersurfaces(sf, variety.n)
    report = check_position(
        variety, hypersurfaces, params.N,
        m_cap=args.degree_cap or params.degree_cap,
    )
    rows = tuple(
        (
            "{" + " ".join(str(j + 1) for j in subset) + "}",
            verdict.status,
            verdict.m_star if verdict.m_star is not None else "",
            verdict.cap,
        )
        for subset, verdict in report.certificates.items()
    )
    verdict_text = {True: "true", False: "false", None: "inconclusive"}
    table = ReportTable(
        title="subgeneral position check",
        columns=("subset", "status", "m_star", "cap"),
        rows=rows,
        metadata=(
            ("N", report.N),
            ("q", len(hypersurfaces)),
            ("verdict", verdict_text[report.verdict]),
            ("witness", "{" + " ".join(str(j + 1) for j in report.witness) + "}"
             if report.witness else ""),
            ("seed", params.seed),
            ("precision", params.precision),
            ("degree_cap", args.degree_cap or params.degree_cap or "default"),
            ("assumption", SMOOTHNESS_NOTE),
        ),
    )
    _emit(table, args, args.scenario, "position")
    if report.verdict is False:
        witness = tuple(j + 1 for j in report.witness)
        print(f"violation: subset {witness} does not certify empty",
              file=sys.stderr)
        return EXIT_VIOLATION
    if report.verdict is None:
        print("inconclusive certificates at the degree cap", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    print(f"{report.N}-subgeneral position verified")
    return EXIT_OK


def cmd_construct_gp(args):
    sf = load_scenario_file(args.scenario)
    params = build_params(sf)
    variety = build_variety(sf, degree_cap=args.degree_cap or params.degree_cap)
    hypersurfaces = build_hypersurfaces(sf, variety.n)
    if len(hypersurfaces) != params.N + 1:
        raise ScenarioError(
            f"construct-gp wants exactly N+1 = {params.N + 1} hypersurfaces, "
            f"got {len(hypersurfaces)}"
        )
    seed = args.seed if args.seed is not None else params.seed
    system = construct_replacement_system(variety, hypersurfaces, seed=seed)
    k = estimate_dimension(variety)
    rows = []
    for t, poly in enumerate(system.polynomials, start=1):
        coeffs = "" if t == 1 else " ".join(
            str(c) for c in system.coefficients[t - 2]
        )
        rows.append(
            (t, str(poly), coeffs, _int_dim(system.chain_dims[t - 1]))
        )
    table = ReportTable(
        title="replacement system",
        columns=("t", "P_t", "coefficients", "chain_dim"),
        rows=tuple(rows),
        metadata=(
            ("k", k),
            ("N", params.N),
            ("seed", seed),
            ("precision", params.precision),
            ("degree_cap", args.degree_cap or params.degree_cap or "default"),
            ("assumption", SMOOTHNESS_NOTE),
        ),
    )
    _emit(table, args, args.scenario, "construct-gp")
    print(f"chain dims: {tuple(_int_dim(d) for d in system.chain_dims)}")
    return EXIT_OK


def cmd_hilbert(args):
    sf = load_scenario_file(args.scenario)
    params = build_params(sf)
    variety = build_variety(sf)
    cap = (
        args.degree_cap
        or params.degree_cap
        or default_degree_cap(variety.generators, variety.n)
    )
    rows = tuple(
        (m, hilbert_function(variety, m)) for m in range(0, cap + 1)
    )
    dim = estimate_dimension(variety)
    meta = [
        ("n", variety.n),
        ("generators", len(variety.generators)),
        ("dimension", _int_dim(dim)),
        ("degree_cap", cap),
        ("seed", params.seed),
        ("precision", params.precision),
    ]
    if dim is not EMPTY:
        meta.append(("degree", variety_degree(variety)))
    table = ReportTable(
        title="Hilbert function",
        columns=("m", "H"),
        rows=rows,
        metadata=tuple(meta),
    )
    _emit(table, args, args.scenario, "hilbert")
    return EXIT_OK


def cmd_weights(args):
    sf = load_scenario_file(args.scenario)
    params = build_params(sf)
    variety = build_variety(sf, degree_cap=args.degree_cap or params.degree_cap)
    entries = sf.single("weights")
    bracket_text = _one(entries, "bracket", required=True)
    F = parse_bracket_polynomial(bracket_text, variety.n)
    c = tuple(int(v) for v in _one(entries, "c", required=True).split())
    m = int(_one(entries, "m", required=True))
    seed = args.seed if args.seed is not None else params.seed
    e = chow_weight(F, c, seed=seed)
    hw = hilbert_weight(variety, m, c)
    delta = variety_degree(variety)
    def mono_text(mono):
        factors = [
            f"x{i}" if p == 1 else f"x{i}^{p}" for i, p in enumerate(mono) if p
        ]
        return "*".join(factors) if factors else "1"

    rows = [
        ("chow_weight", str(e), ""),
        ("hilbert_weight", str(hw.value),
         " ".join(mono_text(b) for b in hw.basis)),
    ]
    violated = False
    if m > delta:
        margin = weight_comparison_margin(variety, F, m, c, seed=seed)
        rows.append(("comparison_margin", str(margin), ""))
        violated = violated or margin < 0
    else:
        rows.append(("comparison_margin", "skipped: m <= degree", ""))
    subset_text = _one(entries, "subset")
    if subset_text:
        subset = tuple(int(v) for v in subset_text.split())
        margin = chow_weight_floor_margin(variety, F, c, subset, seed=seed)
        rows.append(("floor_margin", str(margin), ""))
        violated = violated or margin < 0
    table = ReportTable(
        title="weights",
        columns=("quantity", "value", "detail"),
        rows=tuple(rows),
        metadata=(
            ("bracket", str(F)),
            ("c", " ".join(str(v) for v in c)),
            ("m", m),
            ("degree", delta),
            ("H", hilbert_function(variety, m)),
            ("seed", seed),
            ("precision", params.precision),
            ("assumption", SMOOTHNESS_NOTE),
        ),
    )
    _emit(table, args, args.scenario, "weights")
    return EXIT_VIOLATION if violated else EXIT_OK


def cmd_filtration(args):
    sf = load_scenario_file(args.scenario)
    params = build_params(sf)
    entries = sf.single("filtration")
    u = int(_one(entries, "u", required=True))
    texts = _values(entries, "poly")
    if not texts:
        raise ScenarioError("[filtration] needs poly entries")
    from nevsmt.poly import parse_polynomial

    n = len(texts)
    polys = tuple(parse_polynomial(text, n + 1) for text in texts)
    d = polys[0].degree
    fparams = FiltrationParams(n, d, u, polys)
    table = filtration_dims(fparams)
    violations = stable_quotient_violations(fparams, table)
    b, margins = compute_b(table)
    rows = tuple(
        (
            "(" + ",".join(str(i) for i in idx) + ")",
            table.dims[idx],
            table.quotients[idx],
        )
        for idx in table.indices
    )
    report = ReportTable(
        title="filtration table",
        columns=("index", "dim_W", "m"),
        rows=rows,
        metadata=(
            ("n", n),
            ("d", d),
            ("u", u),
            ("K", table.K),
            ("b", " ".join(str(x) for x in b)),
            ("b_margins", " ".join(str(x) for x in margins)),
            ("violations", len(violations)),
            ("seed", params.seed),
            ("precision", params.precision),
        ),
    )
    _emit(report, args, args.scenario, "filtration")
    if violations or any(mg < 0 for mg in margins):
        print(f"violations: {violations}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_nevanlinna(args):
    sf = load_scenario_file(args.scenario)
    params = build_params(sf)
    curve = build_curve(sf)
    hypersurfaces = build_hypersurfaces(sf, curve.n)
    if not hypersurfaces:
        raise ScenarioError("no [hypersurface] sections")
    cfg = _quad_config(params, args)
    tables = []
    violated = False
    for idx, Q in enumerate(hypersurfaces, start=1):
        dev, rows = fmt_residual(curve, Q, params.r_grid, cfg)
        tables.append(
            ReportTable(
                title=f"fmt residual Q{idx}",
                columns=("r", "T", "m", "N", "residual", "flags"),
                rows=tuple(
                    (row.r, row.T, row.m, row.N, row.residual, row.flags)
                    for row in rows
                ),
                metadata=(
                    ("Q", str(Q)),
                    ("degree", Q.degree),
                    ("max_deviation", dev),
                    ("seed", params.seed),
                    ("precision", cfg.precision),
                ),
            )
        )
    if all(h.degree == 1 for h in hypersurfaces):
        rows = hyperplane_smt_margins(
            curve, hypersurfaces, float(params.epsilon), params.r_grid, cfg
        )
        tables.append(
            ReportTable(
                title="hyperplane smt margins",
                columns=("r", "lhs_integral", "N_wronskian", "T", "margin",
                         "flags"),
                rows=tuple(
                    (row.r, row.lhs_integral, row.N_wronskian, row.T,
                     row.margin, row.flags)
                    for row in rows
                ),
                metadata=(
                    ("epsilon", str(params.epsilon)),
                    ("q", len(hypersurfaces)),
                    ("seed", params.seed),
                    ("precision", cfg.precision),
                ),
            )
        )
        for row in rows:
            if row.margin < 0:
                retry = hyperplane_smt_margins(
                    curve, hypersurfaces, float(params.epsilon),
                    [row.r * 1.01], cfg
                )[0]
                if retry.margin < 0:
                    violated = True
    _emit(tables, args, args.scenario, "nevanlinna")
    return EXIT_VIOLATION if violated else EXIT_OK


def cmd_smt(args):
    sf = load_scenario_file(args.scenario)
    scenario = build_smt_scenario(
        sf, seed=args.seed, precision=args.precision,
        degree_cap=args.degree_cap,
    )
    cfg = QuadratureConfig(precision=scenario.precision)
    result = smt_margins(
        scenario,
        theorem=args.theorem,
        cfg=cfg,
        proof_version=args.proof_version_m0,
    )
    meta = list(result.meta)
    if args.theorem == "1.1":
        k = dict(result.meta)["k"]
        p = scenario.N - k + 1
        try:
            u, eps_prime = auxiliary_degree_general(
                scenario.N, k, p, variety_degree(scenario.variety),
                scenario.epsilon,
            )
            meta.append(("auxiliary_u", u))
            meta.append(("auxiliary_eps_prime", str(eps_prime)))
        except (ValueError, RuntimeError):
            pass
        if args.proof_version_m0:
            statement = truncation_level_general(
                variety_degree(scenario.variety), k, scenario.N, scenario.d,
                scenario.q, scenario.epsilon,
            )
            meta.append(("M_statement_version", statement.level))
            meta.append(("M_discrepancy",
                         "proof-estimate level differs from statement level"))
    else:
        p = scenario.N - scenario.variety.n + 1
        meta.append(
            ("auxiliary_u",
             auxiliary_degree_projective(
                 scenario.variety.n, scenario.d, p, scenario.epsilon
             ))
        )
    table = ReportTable(
        title="smt margins",
        columns=("r", "T", "N_truncated_sum", "lhs", "rhs", "margin", "flags"),
        rows=tuple(
            (row.r, row.T, row.n_truncated_sum, row.lhs, row.rhs, row.margin,
             row.flags)
            for row in result.rows
        ),
        metadata=tuple(meta),
    )
    _emit(table, args, args.scenario, "smt")
    vacuous = dict(result.meta)["vacuous"] == "true"
    if not vacuous:
        for row in result.rows:
            if row.margin < 0:
                retry_sc = build_smt_scenario(
                    sf, seed=args.seed, precision=args.precision,
                    degree_cap=args.degree_cap,
                )
                retry_sc.r_grid = (row.r * 1.01,)
                retry = smt_margins(
                    retry_sc, theorem=args.theorem, cfg=cfg,
                    proof_version=args.proof_version_m0,
                ).rows[0]
                if retry.margin < 0:
                    print(
                        f"margin violation at r={row.r} (persistent)",
                        file=sys.stderr,
                    )
                    return EXIT_VIOLATION
    return EXIT_OK


def cmd_selftest(args):
    from nevsmt.acceptance import run_selftest

    results, tables = run_selftest()
    for res in results:
        print(res.line())
    _emit(tables, args, None, "selftest")
    if all(res.passed for res in results):
        return EXIT_OK
    return EXIT_VIOLATION


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nevsmt",
        description=__doc__,
        epilog=SCENARIO_GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version",
                        version=f"nevsmt {nevsmt.__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "check-position": (cmd_check_position, True),
        "construct-gp": (cmd_construct_gp, True),
        "hilbert": (cmd_hilbert, True),
        "weights": (cmd_weights, True),
        "filtration": (cmd_filtration, True),
        "nevanlinna": (cmd_nevanlinna, True),
        "smt": (cmd_smt, True),
        "selftest": (cmd_selftest, False),
    }
    for name, (func, needs_scenario) in commands.items():
        p = sub.add_parser(name)
        if needs_scenario:
            p.add_argument("scenario", help="scenario file path")
        p.add_argument("--theorem", choices=("1.1", "1.3"), default="1.1",
                       help="margin mode: general variety or projective space")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--precision", type=int, default=None)
        p.add_argument("--degree-cap", type=int, default=None,
                       dest="degree_cap")
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("csv", "text"), default="csv")
        p.add_argument("--proof-version-m0", action="store_true",
                       dest="proof_version_m0",
                       help="use the proof's closing estimate for the "
                            "general-variety truncation level (labelled)")
        p.set_defaults(func=func)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, PolynomialSyntaxError, CurveSyntaxError,
            FileNotFoundError, OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PositionViolation, ReplacementPreconditionError) as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (InconclusiveCertificate, UnstableHilbertData,
            ReplacementConstructionError, QuadratureError) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
