"""Value-distribution functions: closed forms, Jensen consistency, margins."""

import math
import random
from fractions import Fraction

import pytest

from nevsmt.curves import parse_curve, parse_curve_component
from nevsmt.nevanlinna import (
    characteristic_T,
    counting_N,
    fmt_residual,
    hyperplane_smt_margins,
    independent_maximal_subsets,
    log_modulus_average,
    proximity_m,
)
from nevsmt.poly import parse_polynomial
from nevsmt.quadrature import QuadratureConfig
from nevsmt.zeros import polynomial_roots

CFG = QuadratureConfig()


def P(text, n_vars=3):
    return parse_polynomial(text, n_vars)


@pytest.fixture(scope="module")
def rational_curve():
    return parse_curve(["1", "z", "z^2"])


def test_characteristic_closed_forms(rational_curve):
    line = parse_curve(["1", "z"])
    for r in (2.0, 5.0, 25.0):
        exact = 0.5 * math.log((1 + r * r) / 2)
        assert abs(characteristic_T(line, r, CFG) - exact) < 1e-9
        exact2 = 0.5 * math.log((1 + r ** 2 + r ** 4) / 3)
        assert abs(characteristic_T(rational_curve, r, CFG) - exact2) < 1e-9
    assert characteristic_T(rational_curve, 1.0, CFG) == 0.0


def test_characteristic_requires_r_at_least_1(rational_curve):
    with pytest.raises(ValueError):
        characteristic_T(rational_curve, 0.5, CFG)


def test_counting_examples(rational_curve):
    assert abs(counting_N(rational_curve, P("x2"), 9.0, None, CFG)
               - 2 * math.log(9)) < 1e-12
    assert abs(counting_N(rational_curve, P("x2"), 9.0, 1, CFG)
               - math.log(9)) < 1e-12
    assert counting_N(rational_curve, P("x0"), 9.0, None, CFG) == 0.0


def test_counting_inside_hypersurface_rejected(rational_curve):
    with pytest.raises(ValueError, match="inside"):
        counting_N(rational_curve, P("x0*x2 - x1^2"), 5.0, None, CFG)


def test_counting_monotonicity(rational_curve):
    Q = P("x0 + x1 + x2")
    grid = [1.0, 2.0, 4.0, 8.0, 16.0]
    full = [counting_N(rational_curve, Q, r, None, CFG) for r in grid]
    one = [counting_N(rational_curve, Q, r, 1, CFG) for r in grid]
    two = [counting_N(rational_curve, Q, r, 2, CFG) for r in grid]
    assert all(a <= b + 1e-15 for a, b in zip(full, full[1:]))
    for a, b, c in zip(one, two, full):
        assert a <= b + 1e-15 <= c + 2e-15


def test_truncation_cap(rational_curve):
    Q = P("x0 + x1 + x2")
    r = 50.0
    distinct = 2
    for M in (1, 2, 3):
        val = counting_N(rational_curve, Q, r, M, CFG)
        assert val <= M * distinct * math.log(r) + 1e-12


def test_proximity_closed_forms():
    line = parse_curve(["1", "z"])
    for r in (2.0, 4.0, 10.0):
        exact = math.log(math.sqrt(1 + r * r) / r) - 0.5 * math.log(2)
        assert abs(proximity_m(line, P("x1", 2), r, CFG) - exact) < 1e-9
        T = characteristic_T(line, r, CFG)
        assert abs(proximity_m(line, P("x0", 2), r, CFG) - T) < 1e-9
    assert proximity_m(line, P("x1", 2), 1.0, CFG) == 0.0


def test_jensen_consistency_random():
    rng = random.Random(6)
    from nevsmt.curves import PolyZ, QQi

    for _ in range(6):
        coeffs = [
            QQi(Fraction(rng.randint(-4, 4)), Fraction(rng.randint(-4, 4)))
            for _ in range(rng.randint(1, 4))
        ]
        coeffs.append(QQi(Fraction(rng.randint(1, 3))))
        g = PolyZ(tuple(coeffs))
        roots = polynomial_roots(g)
        r = rng.choice([2.0, 3.7, 9.0])
        lhs = (log_modulus_average(g, r, CFG)
               - log_modulus_average(g, 1.0, CFG))
        ord0 = next((m for a, m in roots if a == 0), 0)
        rhs = sum(
            m * math.log(r / max(abs(a), 1.0))
            for a, m in roots
            if a != 0 and abs(a) <= r
        ) + ord0 * math.log(r)
        assert abs(lhs - rhs) < 1e-8


def test_jensen_consistency_boundary_roots():
    # roots exactly on both circles: 1 + z + z^2 at |z| = 1
    g = parse_curve_component("z^2 + z + 1")
    lhs = log_modulus_average(g, 4.0, CFG) - log_modulus_average(g, 1.0, CFG)
    rhs = 2 * math.log(4)  # both unit-modulus roots weigh log(r/1)
    assert abs(lhs - rhs) < 1e-8


def test_fmt_residual_examples(rational_curve):
    grid = [float(r) for r in range(2, 51, 2)]
    for text in ("x2", "x0 + x1 + x2"):
        dev, rows = fmt_residual(rational_curve, P(text), grid, CFG)
        assert dev < 1e-6
        assert all(abs(row.residual) < 1e-6 for row in rows)
    dev, rows = fmt_residual(rational_curve, P("x0"), [5.0], CFG)
    assert dev == 0.0  # singleton grid


def test_subset_enumeration(rational_curve):
    H = [P(t) for t in ("x0", "x1", "x2", "x0+x1+x2")]
    subsets = independent_maximal_subsets(H, 3)
    assert len(subsets) == 4
    assert all(len(s) == 3 for s in subsets)
    # rank-2 family: every pair is independent here
    H2 = [P(t) for t in ("x0", "x1", "x0+x1")]
    assert independent_maximal_subsets(H2, 3) == ((0, 1), (0, 2), (1, 2))


def test_hyperplane_margins(rational_curve):
    H = [P(t) for t in ("x0", "x1", "x2", "x0+x1+x2")]
    grid = [10.0, 31.0, 100.0]
    rows = hyperplane_smt_margins(rational_curve, H, 0.5, grid, CFG)
    assert all(row.margin >= 0 for row in rows)
    assert all(row.N_wronskian == 0 for row in rows)


def test_hyperplane_margins_rejects_degenerate():
    from nevsmt.nevanlinna import DegenerateCurveError

    dep = parse_curve(["1", "z", "1 + z"])
    with pytest.raises(DegenerateCurveError):
        hyperplane_smt_margins(dep, [P("x0"), P("x1")], 0.5, [10.0], CFG)


def test_exp_curve_characteristic():
    # T(r) for (1, e^z) is r/pi + O(1)
    f = parse_curve(["1", "exp(z)"])
    r = 40.0
    T = characteristic_T(f, r, CFG)
    assert abs(T / r - 1 / math.pi) < 0.03
    N = counting_N(f, parse_polynomial("x0 + x1", 2), 7.0, None, CFG)
    # zeros of 1 + e^z at pi i, -pi i: N = 2 log(7/pi)
    assert abs(N - 2 * math.log(7.0 / math.pi)) < 1e-8
