"""Numerical value-distribution calculus for entire curves (one variable).

Integrals over spheres reduce to circle averages for one complex variable,
computed by the node-doubling trapezoidal rule.  Counting functions use the
closed form  N(r) = sum min(mult, M) * log(r / max(|a|, 1))  over exact zero
data.  Circle averages of log|g| for polynomial g subtract near-circle roots
exactly (average of log|z-a| over |z|=r is log max(r, |a|)), which keeps the
quadrature spectrally convergent even when zeros sit on or near the circle;
radii nudged off zeros are recorded in the returned rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import mpmath
import numpy as np

from nevsmt.curves import ExpPoly, PolyZ, compose_hypersurface, wronskian
from nevsmt.linalg import rational_rank
from nevsmt.quadrature import QuadratureConfig, QuadratureError, circle_average
from nevsmt.zeros import ZeroList, polynomial_roots, zeros_in_disk

# Roots within this relative band of the circle are integrated exactly.
_SUBTRACTION_BAND = 0.1
_FLOOR = 1e-300


class DegenerateCurveError(ValueError):
    pass


@lru_cache(maxsize=512)
def _cached_poly_roots(g, precision):
    return tuple(polynomial_roots(g, precision))


def _log_norm_sampler(curve, rho):
    def sampler(thetas):
        z = rho * np.exp(1j * thetas)
        comps = curve.eval_array(z)
        norm2 = np.sum(np.abs(comps) ** 2, axis=0)
        return 0.5 * np.log(np.maximum(norm2, _FLOOR))

    return sampler


def _log_norm_sampler_mp(curve, rho):
    def sampler(theta):
        z = rho * mpmath.exp(1j * theta)
        total = mpmath.mpf(0)
        for v in curve.eval_mpc(z):
            total += abs(v) ** 2
        return 0.5 * mpmath.log(total)

    return sampler


def log_norm_average(curve, rho, cfg):
    """Circle average of log ||f~|| at radius rho."""
    return float(
        circle_average(
            _log_norm_sampler(curve, rho), cfg, _log_norm_sampler_mp(curve, rho)
        )
    )


def characteristic_T(f, r, cfg=None):
    """Characteristic function: average of log||f~|| at r minus at 1."""
    cfg = cfg or QuadratureConfig()
    if r < 1:
        raise ValueError("r must be at least 1")
    if r == 1:
        return 0.0
    return log_norm_average(f, r, cfg) - log_norm_average(f, 1.0, cfg)


def _compensated_average(expr, rho, cfg, band_roots):
    """Circle average of log|expr| with listed roots integrated exactly."""
    near = [(a, m) for a, m in band_roots
            if abs(abs(a) - rho) <= _SUBTRACTION_BAND * rho]

    def sampler(thetas):
        z = rho * np.exp(1j * thetas)
        vals = np.log(np.maximum(np.abs(expr.eval_array(z)), _FLOOR))
        for a, m in near:
            vals -= m * np.log(np.maximum(np.abs(z - a), _FLOOR))
        return vals

    def sampler_mp(theta):
        z = rho * mpmath.exp(1j * theta)
        v = mpmath.log(abs(expr.eval_mpc(z)))
        for a, m in near:
            v -= m * mpmath.log(abs(z - a))
        return v

    avg = float(circle_average(sampler, cfg, sampler_mp))
    for a, m in near:
        avg += m * math.log(max(rho, abs(a))) if abs(a) > 0 or rho > 0 else 0.0
    return avg


def log_modulus_average(expr, rho, cfg):
    """Circle average of log|expr| at radius rho.

    Polynomials always run compensated (their full root list is exact); an
    exponential polynomial retries with argument-principle zero data when the
    plain quadrature fails to converge.
    """
    if isinstance(expr, ExpPoly) and expr.is_polynomial:
        expr = expr.to_poly()
    if isinstance(expr, PolyZ):
        if expr.is_zero:
            raise ValueError("expression is identically zero")
        roots = _cached_poly_roots(expr, cfg.precision)
        return _compensated_average(expr, rho, cfg, roots)
    try:
        return _compensated_average(expr, rho, cfg, ())
    except QuadratureError:
        zl = zeros_in_disk(expr, rho * (1.0 + 2 * _SUBTRACTION_BAND), cfg)
        return _compensated_average(expr, rho, cfg, zl.entries)


def expression_zeros_up_to(expr, r_max, cfg):
    """Zero data covering every radius up to r_max (polynomials: all roots)."""
    if isinstance(expr, ExpPoly) and expr.is_polynomial:
        expr = expr.to_poly()
    if isinstance(expr, PolyZ):
        if expr.is_zero:
            raise ValueError("expression is identically zero")
        return _cached_poly_roots(expr, cfg.precision)
    return zeros_in_disk(expr, r_max, cfg).entries


def _counting_from_roots(roots, r, M, cfg):
    """(value, nudged) of the truncated counting function at radius r."""
    shift = cfg.singularity_shift
    r_eff = float(r)
    nudged = False
    for _ in range(32):
        if all(abs(abs(a) - r_eff) >= shift for a, _ in roots):
            break
        r_eff *= 1.0 + 10.0 * shift
        nudged = True
    total = 0.0
    for a, m in roots:
        if abs(a) <= r_eff:
            weight = math.log(max(r / max(abs(a), 1.0), 1.0))
            mult = m if M is None else min(m, M)
            total += mult * weight
    return total, nudged


def counting_N(f, Q, r, M=None, cfg=None):
    """Truncated counting function of the pullback divisor of Q at radius r.

    M = None counts full multiplicities; integer M caps each one.
    """
    cfg = cfg or QuadratureConfig()
    if r < 1:
        raise ValueError("r must be at least 1")
    expr = compose_hypersurface(Q, f)
    if expr.is_zero:
        raise ValueError("curve lies inside the hypersurface")
    roots = expression_zeros_up_to(expr, r, cfg)
    return _counting_from_roots(roots, r, M, cfg)[0]


def proximity_m(f, Q, r, cfg=None):
    """Proximity function: average of log(||f~||^d / |Q(f~)|), r minus 1."""
    cfg = cfg or QuadratureConfig()
    if r < 1:
        raise ValueError("r must be at least 1")
    expr = compose_hypersurface(Q, f)
    if expr.is_zero:
        raise ValueError("curve lies inside the hypersurface")
    d = Q.degree

    def one_radius(rho):
        return d * log_norm_average(f, rho, cfg) - log_modulus_average(
            expr, rho, cfg
        )

    if r == 1:
        return 0.0
    return one_radius(r) - one_radius(1.0)


@dataclass(frozen=True)
class FmtRow:
    r: float
    T: float
    m: float
    N: float
    residual: float
    flags: str


def fmt_residual(f, Q, r_grid, cfg=None):
    """Residual d*T - m - N per grid radius; its spread checks the O(1) term.

    Returns (max_deviation, rows) where max_deviation is max - min of the
    residual across the grid.
    """
    cfg = cfg or QuadratureConfig()
    r_grid = sorted(float(r) for r in r_grid)
    if not r_grid or r_grid[0] < 1:
        raise ValueError("grid radii must be at least 1")
    expr = compose_hypersurface(Q, f)
    if expr.is_zero:
        raise ValueError("curve lies inside the hypersurface")
    d = Q.degree
    roots = expression_zeros_up_to(expr, max(r_grid), cfg)
    norm_at_1 = log_norm_average(f, 1.0, cfg)
    mod_at_1 = log_modulus_average(expr, 1.0, cfg)
    rows = []
    for r in r_grid:
        T = (log_norm_average(f, r, cfg) - norm_at_1) if r > 1 else 0.0
        mod_r = log_modulus_average(expr, r, cfg) if r > 1 else mod_at_1
        m = (d * (T + norm_at_1) - mod_r) - (d * norm_at_1 - mod_at_1)
        N, nudged = _counting_from_roots(roots, r, None, cfg)
        residual = d * T - m - N
        rows.append(FmtRow(r, T, m, N, residual, "nudged" if nudged else ""))
    residuals = [row.residual for row in rows]
    return max(residuals) - min(residuals), tuple(rows)


@dataclass(frozen=True)
class HyperplaneMarginRow:
    r: float
    lhs_integral: float
    N_wronskian: float
    T: float
    margin: float
    flags: str


def _hyperplane_vectors(hyperplanes, n_vars):
    vectors = []
    for h in hyperplanes:
        if h.degree != 1:
            raise ValueError("hyperplanes must have degree 1")
        if h.is_zero:
            raise ValueError("zero hyperplane")
        row = [Fraction(0)] * n_vars
        for mono, coeff in h.terms.items():
            row[mono.index(1)] = coeff
        vectors.append(row)
    return vectors


def independent_maximal_subsets(hyperplanes, n_vars):
    """All maximal linearly independent index subsets, enumerated once."""
    vectors = _hyperplane_vectors(hyperplanes, n_vars)
    rank, _ = rational_rank(vectors)
    subsets = []
    for subset in combinations(range(len(vectors)), rank):
        sub_rank, _ = rational_rank([vectors[i] for i in subset])
        if sub_rank == rank:
            subsets.append(subset)
    return tuple(subsets)


def hyperplane_smt_margins(f, hyperplanes, eps, r_grid, cfg=None):
    """Margins of the general second main theorem for hyperplanes:

        (n+1+eps) * T(r) - [ avg max_K sum log(||f~|| ||H_i|| / |H_i(f~)|)
                             + N_{W(f~)}(r) ]  >= 0 expected.

    The max runs over the maximal linearly independent subsets K, enumerated
    once from the coefficient matrix.
    """
    cfg = cfg or QuadratureConfig()
    if eps <= 0:
        raise ValueError("eps must be positive")
    W = wronskian(f)
    if W.is_zero:
        raise DegenerateCurveError("curve is linearly degenerate")
    n = f.n
    subsets = independent_maximal_subsets(hyperplanes, n + 1)
    if not subsets:
        raise ValueError("no independent hyperplane subsets")
    vectors = _hyperplane_vectors(hyperplanes, n + 1)
    coeff_matrix = np.array([[complex(c) for c in row] for row in vectors])
    norms = np.sqrt((np.abs(coeff_matrix) ** 2).sum(axis=1))
    r_grid = sorted(float(r) for r in r_grid)
    w_roots = expression_zeros_up_to(W, max(r_grid), cfg) if _has_zero_candidates(W) else ()
    norm_at_1 = log_norm_average(f, 1.0, cfg)

    def lhs_sampler(rho):
        def sampler(thetas):
            z = rho * np.exp(1j * thetas)
            comps = f.eval_array(z)
            fnorm = np.sqrt(
                np.maximum(np.sum(np.abs(comps) ** 2, axis=0), _FLOOR)
            )
            hvals = coeff_matrix @ comps
            terms = np.log(
                fnorm[None, :] * norms[:, None]
                / np.maximum(np.abs(hvals), _FLOOR)
            )
            best = None
            for subset in subsets:
                s = terms[list(subset), :].sum(axis=0)
                best = s if best is None else np.maximum(best, s)
            return best

        return sampler

    rows = []
    for r in r_grid:
        flags = []
        rho = r
        try:
            lhs_int = circle_average(lhs_sampler(rho), cfg)
        except QuadratureError:
            rho = r * (1.0 + 10.0 * cfg.singularity_shift)
            flags.append("nudged")
            lhs_int = circle_average(lhs_sampler(rho), cfg)
        T = (log_norm_average(f, r, cfg) - norm_at_1) if r > 1 else 0.0
        N_w, nudged = _counting_from_roots(w_roots, r, None, cfg)
        if nudged:
            flags.append("nudged-NW")
        margin = (n + 1 + float(eps)) * T - lhs_int - N_w
        rows.append(
            HyperplaneMarginRow(r, lhs_int, N_w, T, margin, ",".join(flags))
        )
    return tuple(rows)


def _has_zero_candidates(expr):
    """False only when the expression obviously never vanishes."""
    if isinstance(expr, PolyZ):
        return expr.degree >= 1
    if isinstance(expr, ExpPoly):
        if expr.is_polynomial:
            return expr.to_poly().degree >= 1
        if len(expr.terms) == 1:
            # p * exp(q) vanishes exactly where p does
            _, p = expr.terms[0]
            return p.degree >= 1
    return True
