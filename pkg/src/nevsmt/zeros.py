"""Zero location for curve-component expressions.

Polynomials get exact treatment: square-free decomposition over the Gaussian
rationals fixes every multiplicity, then each simple factor goes to a
certified numerical rootfinder.  Exponential polynomials are handled by the
argument principle: boxes of side <= 1 cover the disk, each box boundary is
walked with adaptive phase tracking (every accepted segment turns the value
by less than a right angle, so the winding number is exact), boxes with
winding split until a single zero remains, Newton polishes the location and
a small-circle winding fixes the multiplicity.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import mpmath

from nevsmt.curves import ExpPoly, PolyZ, squarefree_decomposition
from nevsmt.quadrature import QuadratureConfig

_TINY = 1e-280
_MIN_BOX_SIDE = 1e-3
_MULT_CIRCLE_RADIUS = 1e-3
# Deterministic grid offsets tried in turn when a zero sits on a box contour.
_GRID_OFFSETS = (0.2071067811865476, 0.3454915028125263, 0.0660254037844386,
                 0.4433756729740645, 0.1228842614319087)


class WindingError(RuntimeError):
    """A winding integral failed to certify (non-integer or unresolvable)."""


@dataclass(frozen=True)
class ZeroList:
    entries: tuple  # ((location complex, multiplicity int), ...)
    radius: float
    nudged: bool = False

    @property
    def total_multiplicity(self):
        return sum(m for _, m in self.entries)

    def truncated_multiplicity(self, cap):
        if cap is None:
            return self.total_multiplicity
        return sum(min(m, cap) for _, m in self.entries)


def polynomial_roots(p, precision=53):
    """All roots of a PolyZ with exact multiplicities, sorted deterministically."""
    if p.is_zero:
        raise ValueError("zero polynomial has no isolated roots")
    if p.degree == 0:
        return []
    roots = []
    order = p.trailing_order()
    if order:
        roots.append((0j, order))
        p = PolyZ(p.coeffs[order:])
    for factor, mult in squarefree_decomposition(p):
        if factor.degree < 1:
            continue
        with mpmath.workprec(max(precision, 53) + 60):
            coeffs = [c.to_mpc() for c in reversed(factor.coeffs)]
            found = mpmath.polyroots(coeffs, maxsteps=200, extraprec=100)
        roots.extend((complex(rt), mult) for rt in found)
    roots.sort(key=lambda rm: (abs(rm[0]), rm[0].real, rm[0].imag))
    return roots


def _disk_select(roots, r, cfg):
    """Keep roots inside the disk, nudging the radius off any boundary zero."""
    shift = cfg.singularity_shift
    r_eff = float(r)
    nudged = False
    for _ in range(32):
        if all(abs(abs(a) - r_eff) >= shift for a, _ in roots):
            break
        r_eff *= 1.0 + 10.0 * shift
        nudged = True
    entries = tuple((a, m) for a, m in roots if abs(a) <= r_eff)
    return ZeroList(entries, r_eff, nudged)


def zeros_in_disk(g, r, cfg=None):
    """Zeros of a component expression in |z| <= r (radius nudged off zeros)."""
    cfg = cfg or QuadratureConfig()
    if isinstance(g, ExpPoly):
        if g.is_polynomial:
            g = g.to_poly()
        else:
            return _exppoly_zeros_in_disk(g, r, cfg)
    if not isinstance(g, PolyZ):
        raise TypeError(f"unsupported expression class {type(g).__name__}")
    if g.is_zero:
        raise ValueError("expression is identically zero")
    return _disk_select(polynomial_roots(g, cfg.precision), r, cfg)


# -- argument principle for exponential polynomials ---------------------------


class _ContourNearZero(Exception):
    pass


def _phase_change(g, z0, v0, z1, v1, depth):
    """Total phase turned by g along the segment, certified by refinement."""
    d = cmath.phase(v1 / v0)
    if abs(d) <= 1.2:
        return d
    if depth <= 0:
        raise WindingError("phase tracking did not resolve on a segment")
    zm = 0.5 * (z0 + z1)
    vm = g.evaluate(zm)
    if abs(vm) < _TINY:
        raise _ContourNearZero
    return _phase_change(g, z0, v0, zm, vm, depth - 1) + _phase_change(
        g, zm, vm, z1, v1, depth - 1
    )


def _winding_polyline(g, points):
    """Winding number of g along a closed polyline, within 0.1 of an integer."""
    values = []
    for z in points:
        v = g.evaluate(z)
        if abs(v) < _TINY:
            raise _ContourNearZero
        values.append(v)
    total = 0.0
    for (z0, v0), (z1, v1) in zip(
        zip(points, values), zip(points[1:] + points[:1], values[1:] + values[:1])
    ):
        total += _phase_change(g, z0, v0, z1, v1, 48)
    w = total / (2.0 * cmath.pi)
    nearest = round(w)
    if abs(w - nearest) > 0.1:
        raise WindingError(f"winding {w} not within 0.1 of an integer")
    return int(nearest)


def _box_winding(g, x0, y0, side, samples=8):
    corners = [
        complex(x0, y0),
        complex(x0 + side, y0),
        complex(x0 + side, y0 + side),
        complex(x0, y0 + side),
    ]
    points = []
    for a, b in zip(corners, corners[1:] + corners[:1]):
        points.extend(a + (b - a) * j / samples for j in range(samples))
    return _winding_polyline(g, points)


def _newton_refine(g, dg, z, steps=80):
    best = z
    for _ in range(steps):
        v = g.evaluate(z)
        dv = dg.evaluate(z)
        if dv == 0:
            break
        step = v / dv
        z = z - step
        best = z
        if abs(step) <= 1e-13 * max(1.0, abs(z)):
            break
    return best


def _multiplicity(g, root):
    circle = [
        root + _MULT_CIRCLE_RADIUS * cmath.exp(2j * cmath.pi * j / 32)
        for j in range(32)
    ]
    w = _winding_polyline(g, circle)
    if w < 1:
        raise WindingError(f"multiplicity winding {w} at refined root {root}")
    return w


def _search_box(g, dg, x0, y0, side, w, found):
    """Recursively isolate the w zeros inside the box."""
    if w == 0:
        return
    if w == 1 or side <= _MIN_BOX_SIDE:
        center = complex(x0 + side / 2.0, y0 + side / 2.0)
        root = _newton_refine(g, dg, center)
        found.append((root, _multiplicity(g, root)))
        return
    half = side / 2.0
    remaining = w
    children = []
    for cx in (x0, x0 + half):
        for cy in (y0, y0 + half):
            cw = _box_winding(g, cx, cy, half)
            children.append((cx, cy, half, cw))
            remaining -= cw
    if remaining != 0:
        raise WindingError(
            f"child windings disagree with parent ({w} vs {w - remaining})"
        )
    for cx, cy, chalf, cw in children:
        _search_box(g, dg, cx, cy, chalf, cw, found)


def _exppoly_zeros_in_disk(g, r, cfg):
    dg = g.derivative()
    last_error = None
    for offset in _GRID_OFFSETS:
        try:
            roots = _exppoly_zeros_attempt(g, dg, r, offset, cfg)
        except _ContourNearZero as exc:
            last_error = exc
            continue
        return _disk_select(roots, r, cfg)
    raise WindingError(
        "all tiling offsets hit a zero on a contour"
    ) from last_error


def _exppoly_zeros_attempt(g, dg, r, offset, cfg):
    # generous cover: zeros just outside the disk are filtered later
    reach = r * (1.0 + 20.0 * cfg.singularity_shift) + 2.0 * cfg.singularity_shift
    side = 1.0
    import math

    lo = math.floor((-reach - offset) / side) - 1
    hi = math.ceil((reach - offset) / side) + 1
    found = []
    for i in range(lo, hi + 1):
        for j in range(lo, hi + 1):
            x0 = offset + i * side
            y0 = offset + j * side
            # skip boxes fully outside the disk
            dx = max(0.0, max(x0, -(x0 + side)))
            dy = max(0.0, max(y0, -(y0 + side)))
            if dx * dx + dy * dy > reach * reach:
                continue
            w = _box_winding(g, x0, y0, side)
            if w:
                _search_box(g, dg, x0, y0, side, w, found)
    merged = []
    for root, mult in sorted(found, key=lambda rm: (abs(rm[0]), rm[0].real, rm[0].imag)):
        if merged and abs(merged[-1][0] - root) < 1e-9 * max(1.0, abs(root)):
            continue
        merged.append((root, mult))
    return merged
