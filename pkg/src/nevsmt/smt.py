"""Truncation-level calculators and second-main-theorem margin evaluation.

The two truncation formulas (general-variety and projective-space modes) mix
an exact rational with a power of e, so floors are certified by recomputing
at doubled precision until two floors agree.  Margin tables compare
(coefficient) * T(r) against the weighted truncated counting sum over a
radius grid.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial, lcm

import mpmath

from nevsmt.curves import EntireCurve, compose_hypersurface
from nevsmt.nevanlinna import (
    _counting_from_roots,
    expression_zeros_up_to,
    log_norm_average,
)
from nevsmt.quadrature import QuadratureConfig
from nevsmt.variety import (
    EMPTY,
    SMOOTHNESS_NOTE,
    VarietyDescriptor,
    check_position,
    estimate_dimension,
    variety_degree,
)

THEOREM_GENERAL = "1.1"       # arbitrary smooth variety
THEOREM_PROJECTIVE = "1.3"    # full projective space, sharper level

_MEMBERSHIP_SAMPLES = 32
_MEMBERSHIP_REL_TOL = Fraction(1, 10 ** 20)


class PositionViolation(RuntimeError):
    def __init__(self, report):
        super().__init__(
            f"hypersurfaces are not in {report.N}-subgeneral position; "
            f"witness subset {report.witness}"
        )
        self.report = report


class InconclusiveCertificate(RuntimeError):
    def __init__(self, report):
        super().__init__(
            f"position check inconclusive at the degree cap (N={report.N})"
        )
        self.report = report


def as_fraction(x):
    """Exact Fraction from int/str/Fraction; floats convert by binary value."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(str(x)) if isinstance(x, str) else Fraction(x)


def ceil_fraction(x):
    return -((-x.numerator) // x.denominator)


@dataclass(frozen=True)
class TruncationResult:
    level: int
    raw: str  # 30-digit decimal echo of the un-floored value
    inputs: tuple  # ((name, value), ...) echoed for reports

    def __str__(self):
        echo = ", ".join(f"{k}={v}" for k, v in self.inputs)
        return f"M0={self.level} (raw {self.raw}; {echo})"


def _floor_rational_times_e_power(R, k):
    """(floor(R * e^k), 30-digit string), certified by precision doubling."""
    if R <= 0:
        raise ValueError("rational factor must be positive")
    prec = (
        R.numerator.bit_length() + R.denominator.bit_length() + 8 * max(k, 1) + 64
    )
    while True:
        floors = []
        for p in (prec, 2 * prec):
            with mpmath.workprec(p):
                val = mpmath.e ** k * mpmath.mpf(R.numerator) / R.denominator
                floors.append(int(mpmath.floor(val)))
        if floors[0] == floors[1]:
            with mpmath.workprec(2 * prec):
                val = mpmath.e ** k * mpmath.mpf(R.numerator) / R.denominator
                raw = mpmath.nstr(val, 30)
            return floors[0], raw
        prec *= 2


def monomial_count_minus_one(l, u):
    """Pure helper C(l+u-1, u) - 1; echoed alongside the general calculator."""
    return comb(l + u - 1, u) - 1


def truncation_level_general(deg_v, k, N, d, q, eps, proof_version=False):
    """Truncation level for the general-variety theorem.

    Statement form: floor(degV^{k+1} e^k d^{k^2+k} p^k (2k+4)^k l^k eps^-k)
    with p = N-k+1 and l = (k+1) q!.  The proof's closing estimate (no l^k,
    an extra p^k) sits behind ``proof_version`` and is labelled in the echo.
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not 1 <= k <= N:
        raise ValueError(f"need 1 <= k <= N, got k={k}, N={N}")
    if min(deg_v, d, q) < 1:
        raise ValueError("degV, d and q must be positive")
    p = N - k + 1
    l = (k + 1) * factorial(q)
    R = (
        Fraction(deg_v) ** (k + 1)
        * Fraction(d) ** (k * k + k)
        * Fraction(p) ** k
        * Fraction(2 * k + 4) ** k
        / eps ** k
    )
    variant = "proof-estimate" if proof_version else "statement"
    if proof_version:
        R *= Fraction(p) ** k  # (N-k+1)^k in place of l^k
    else:
        R *= Fraction(l) ** k
    level, raw = _floor_rational_times_e_power(R, k)
    if level < 1:
        raise ValueError(f"truncation level {level} < 1; eps too large")
    inputs = (
        ("degV", deg_v), ("k", k), ("N", N), ("d", d), ("q", q),
        ("eps", eps), ("p", p), ("l", l), ("variant", variant),
    )
    return TruncationResult(level, raw, inputs)


def truncation_level_projective(n, N, d, eps):
    """Truncation level for the projective-space theorem:

        4 (e d p (n+1)^2 ceil(1/eps))^n - 1,   p = N-n+1, floored.
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not 1 <= n <= N:
        raise ValueError(f"need N >= n >= 1, got n={n}, N={N}")
    if d < 1:
        raise ValueError("d must be positive")
    p = N - n + 1
    i_eps = ceil_fraction(1 / eps)
    R = 4 * (Fraction(d * p * (n + 1) ** 2 * i_eps)) ** n
    # R e^n is irrational, so floor(R e^n - 1) = floor(R e^n) - 1
    level, _ = _floor_rational_times_e_power(R, n)
    level -= 1
    with mpmath.workprec(R.numerator.bit_length() + 120):
        raw = mpmath.nstr(
            mpmath.e ** n * mpmath.mpf(R.numerator) / R.denominator - 1, 30
        )
    if level < 1:
        raise ValueError(f"truncation level {level} < 1; eps too large")
    inputs = (
        ("n", n), ("N", N), ("d", d), ("eps", eps), ("p", p),
        ("ceil(1/eps)", i_eps),
    )
    return TruncationResult(level, raw, inputs)


def auxiliary_degree_general(N, k, p, delta, eps):
    """Smallest u exceeding C/eps, C = (N-k+1)(2k+1)(k+1) p delta, and the
    guaranteed-positive eps' = eps - C/u."""
    eps = as_fraction(eps)
    if min(N, k, p, delta) < 1 or eps <= 0:
        raise ValueError("inputs must be positive")
    C = (N - k + 1) * (2 * k + 1) * (k + 1) * p * delta
    u = (C / eps).__floor__() + 1
    eps_prime = eps - Fraction(C, u)
    if not 0 < eps_prime < eps:
        raise RuntimeError(f"eps' = {eps_prime} escaped (0, eps)")
    return u, eps_prime


def auxiliary_degree_projective(n, d, p, eps):
    """u = (n+1) d + p (n+1)^3 ceil(1/eps) d; divisible by d, and the ratio
    (n+1)d / (u - (n+1)d) is asserted <= 1/(n+1)^2."""
    eps = as_fraction(eps)
    if min(n, d, p) < 1 or eps <= 0:
        raise ValueError("inputs must be positive")
    i_eps = ceil_fraction(1 / eps)
    u = (n + 1) * d + p * (n + 1) ** 3 * i_eps * d
    ratio = Fraction((n + 1) * d, u - (n + 1) * d)
    if ratio > Fraction(1, (n + 1) ** 2):
        raise RuntimeError(f"ratio bound violated: {ratio}")
    return u


def check_power_bound(n, x):
    """Exact check of (1+x)^n <= 1 + (n+1) x for 0 < x <= 1/(n+1)^2."""
    x = as_fraction(x)
    if not 0 < x <= Fraction(1, (n + 1) ** 2):
        raise ValueError(f"x={x} outside (0, 1/(n+1)^2]")
    return (1 + x) ** n <= 1 + (n + 1) * x


# -- scenarios and margins ----------------------------------------------------


@dataclass
class SmtScenario:
    variety: VarietyDescriptor
    hypersurfaces: tuple
    N: int
    epsilon: Fraction
    curve: EntireCurve
    r_grid: tuple
    truncation: object = "auto"  # "auto" or an explicit level
    seed: int = 0
    precision: int = 53
    degree_cap: int | None = None

    def __post_init__(self):
        self.epsilon = as_fraction(self.epsilon)
        self.r_grid = tuple(float(r) for r in self.r_grid)
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if len(self.hypersurfaces) < self.N + 1:
            raise ValueError(
                f"need q >= N+1 = {self.N + 1} hypersurfaces, got "
                f"{len(self.hypersurfaces)}"
            )
        if any(r < 1 for r in self.r_grid):
            raise ValueError("grid radii must be at least 1")
        if list(self.r_grid) != sorted(self.r_grid):
            raise ValueError("grid radii must be ascending")
        if self.curve.n != self.variety.n:
            raise ValueError(
                f"curve targets P^{self.curve.n}, variety lives in "
                f"P^{self.variety.n}"
            )

    @property
    def degrees(self):
        return tuple(h.degree for h in self.hypersurfaces)

    @property
    def d(self):
        return lcm(*self.degrees)

    @property
    def q(self):
        return len(self.hypersurfaces)


def check_curve_membership(V, curve, precision=80):
    """Does the curve land in V?  Symbolic-exact for polynomial curves,
    sampled at 32 deterministic points (relative 1e-20) otherwise."""
    if not V.generators:
        return True, "trivial"
    if curve.is_polynomial:
        for g in V.generators:
            if not compose_hypersurface(g, curve).is_zero:
                return False, "symbolic"
        return True, "symbolic"
    rng = random.Random(987654321)
    points = [
        complex(rng.uniform(0.5, 2.0), 0)
        * complex(math.cos(2 * math.pi * j / _MEMBERSHIP_SAMPLES),
                  math.sin(2 * math.pi * j / _MEMBERSHIP_SAMPLES))
        for j in range(_MEMBERSHIP_SAMPLES)
    ]
    work = max(80, precision + 27)
    tol = float(_MEMBERSHIP_REL_TOL)
    with mpmath.workprec(work):
        for z in points:
            comps = curve.eval_mpc(mpmath.mpc(z))
            for g in V.generators:
                value = abs(g.evaluate(comps, precision=work))
                scale = mpmath.mpf(0)
                for mono, coeff in g.terms.items():
                    term = mpmath.mpf(abs(coeff.numerator)) / coeff.denominator
                    for comp, e in zip(comps, mono):
                        if e:
                            term *= max(abs(comp), mpmath.mpf(1)) ** e
                    scale += term
                if value > tol * max(scale, mpmath.mpf(1)):
                    return False, "sampled"
    return True, "sampled"


@dataclass(frozen=True)
class SmtMarginRow:
    r: float
    T: float
    n_truncated_sum: float  # unweighted sum of truncated counting values
    lhs: float
    rhs: float  # sum of (1/d_i) * N^[M]
    margin: float
    flags: str


@dataclass(frozen=True)
class SmtMarginsResult:
    rows: tuple
    meta: tuple  # ((key, value), ...) deterministic order

    def meta_dict(self):
        return dict(self.meta)


def smt_margins(
    scenario,
    M=None,
    theorem=THEOREM_GENERAL,
    cfg=None,
    verify_position=True,
    proof_version=False,
):
    """Margin table rhs - lhs per grid radius for the chosen theorem mode.

    lhs = (q - (N-k+1)(k+1) - eps) T(r) in general-variety mode, and
    (q - (N-n+1)(n+1) - eps) T(r) in projective-space mode; rhs is the
    weighted truncated counting sum.  The truncation level comes from the
    matching calculator unless overridden (an override below the calculator
    level is flagged, not rejected).
    """
    if theorem not in (THEOREM_GENERAL, THEOREM_PROJECTIVE):
        raise ValueError(f"unknown theorem mode {theorem!r}")
    cfg = cfg or QuadratureConfig(precision=scenario.precision)
    V = scenario.variety
    Q = scenario.hypersurfaces
    eps = scenario.epsilon
    q = scenario.q
    d = scenario.d
    n = V.n
    k = estimate_dimension(V)
    if k is EMPTY:
        raise ValueError("variety is empty")
    if scenario.N < k:
        raise ValueError(f"need N >= dim V = {k}, got N={scenario.N}")
    member, member_method = check_curve_membership(
        V, scenario.curve, scenario.precision
    )
    if not member:
        raise ValueError("curve does not lie in the variety")
    if theorem == THEOREM_PROJECTIVE and V.generators:
        raise ValueError("projective-space mode needs the full ambient space")

    position_status = "skipped"
    if verify_position:
        report = check_position(V, Q, scenario.N, m_cap=scenario.degree_cap)
        if report.verdict is False:
            raise PositionViolation(report)
        if report.verdict is None:
            raise InconclusiveCertificate(report)
        position_status = "verified"

    if theorem == THEOREM_GENERAL:
        deg_v = variety_degree(V)
        calc = truncation_level_general(deg_v, k, scenario.N, d, q, eps,
                                        proof_version=proof_version)
        coeff = q - (scenario.N - k + 1) * (k + 1) - eps
    else:
        calc = truncation_level_projective(n, scenario.N, d, eps)
        coeff = q - (scenario.N - n + 1) * (n + 1) - eps

    override_flag = ""
    if M is None:
        M = scenario.truncation if scenario.truncation != "auto" else calc.level
    if M != calc.level:
        override_flag = (
            "override-below-calculator" if M < calc.level else "override"
        )

    vacuous = coeff <= 0
    zero_data = []
    for h in Q:
        expr = compose_hypersurface(h, scenario.curve)
        if expr.is_zero:
            raise ValueError("curve lies inside a scenario hypersurface")
        zero_data.append(expression_zeros_up_to(expr, max(scenario.r_grid), cfg))

    norm_at_1 = log_norm_average(scenario.curve, 1.0, cfg)
    rows = []
    for r in scenario.r_grid:
        T = (
            log_norm_average(scenario.curve, r, cfg) - norm_at_1
            if r > 1
            else 0.0
        )
        nudged = False
        unweighted = 0.0
        weighted = 0.0
        for h, roots in zip(Q, zero_data):
            value, did_nudge = _counting_from_roots(roots, r, M, cfg)
            nudged = nudged or did_nudge
            unweighted += value
            weighted += value / h.degree
        lhs = float(coeff) * T
        margin = weighted - lhs
        flags = []
        if vacuous:
            flags.append("vacuous")
        if nudged:
            flags.append("nudged")
        if override_flag:
            flags.append(override_flag)
        rows.append(
            SmtMarginRow(r, T, unweighted, lhs, weighted, margin,
                         ",".join(flags))
        )

    meta = (
        ("theorem", theorem),
        ("q", q),
        ("N", scenario.N),
        ("k", k),
        ("n", n),
        ("d", d),
        ("epsilon", str(eps)),
        ("lhs_coefficient", str(coeff)),
        ("M", M),
        ("M_calculator", calc.level),
        ("M_raw", calc.raw),
        ("M_source", "override" if M != calc.level else
         ("auto" if scenario.truncation == "auto" else "scenario")),
        ("vacuous", str(vacuous).lower()),
        ("position", position_status),
        ("membership_check", member_method),
        ("seed", scenario.seed),
        ("precision", scenario.precision),
        ("degree_cap", scenario.degree_cap if scenario.degree_cap else "default"),
        ("assumption", SMOOTHNESS_NOTE),
    )
    return SmtMarginsResult(tuple(rows), meta)
