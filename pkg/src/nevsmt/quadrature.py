"""Periodic trapezoidal circle averages with node doubling.

On a circle the trapezoidal rule is spectrally accurate for analytic
integrands, so node counts double until two successive estimates agree to a
relative tolerance.  Precision 53 runs on numpy doubles; higher precisions
run the same loop through mpmath.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np


class QuadratureError(RuntimeError):
    def __init__(self, previous, current, nodes):
        super().__init__(
            f"no convergence at node cap {nodes}: last estimates "
            f"{previous!r} -> {current!r}"
        )
        self.previous = previous
        self.current = current
        self.nodes = nodes


@dataclass(frozen=True)
class QuadratureConfig:
    nodes: int = 256
    precision: int = 53
    singularity_shift: float = 1e-9
    rel_tol: float = 1e-10
    max_nodes: int = 1 << 16

    def __post_init__(self):
        if self.nodes < 64 or self.nodes & (self.nodes - 1):
            raise ValueError("nodes must be a power of two, at least 64")
        if self.precision < 53:
            raise ValueError("precision must be at least 53 bits")
        if not 0 < self.singularity_shift <= 1e-6:
            raise ValueError("singularity_shift must be in (0, 1e-6]")
        if self.max_nodes < self.nodes:
            raise ValueError("max_nodes below starting nodes")


def circle_average(sampler, cfg, scalar_sampler=None):
    """Mean of ``sampler`` over equispaced circle angles, node-doubled.

    ``sampler`` maps an ndarray of angles to real values.  When
    cfg.precision > 53 a ``scalar_sampler`` (mpf angle -> mpf) is required
    and the summation runs in mpmath.
    """
    if cfg.precision > 53:
        if scalar_sampler is None:
            raise ValueError("precision > 53 needs a scalar sampler")
        return _circle_average_mp(scalar_sampler, cfg)
    n = cfg.nodes
    vals = np.asarray(sampler(2.0 * np.pi * np.arange(n) / n), dtype=float)
    total = float(vals.sum())
    est = total / n
    prev = None
    while n < cfg.max_nodes:
        new = np.asarray(
            sampler(2.0 * np.pi * (np.arange(n) + 0.5) / n), dtype=float
        )
        total += float(new.sum())
        n *= 2
        new_est = total / n
        if abs(new_est - est) <= cfg.rel_tol * max(1.0, abs(new_est)):
            return new_est
        prev, est = est, new_est
    raise QuadratureError(prev, est, n)


def _circle_average_mp(sampler, cfg):
    with mpmath.workprec(cfg.precision + 20):
        two_pi = 2 * mpmath.pi
        n = cfg.nodes
        total = mpmath.mpf(0)
        for j in range(n):
            total += sampler(two_pi * j / n)
        est = total / n
        prev = None
        tol = mpmath.mpf(cfg.rel_tol)
        while n < cfg.max_nodes:
            for j in range(n):
                total += sampler(two_pi * (2 * j + 1) / (2 * n))
            n *= 2
            new_est = total / n
            if abs(new_est - est) <= tol * max(mpmath.mpf(1), abs(new_est)):
                return new_est
            prev, est = est, new_est
        raise QuadratureError(prev, est, n)
