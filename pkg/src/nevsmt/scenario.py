"""Scenario files: a line-oriented key-value format with repeatable sections.

Grammar (whitespace-tolerant, '#' starts a comment):

    file     := (section | blank | comment)*
    section  := '[' name ']' NEWLINE (entry | blank | comment)*
    entry    := key '=' value

Sections and keys may repeat; order is preserved.  Known sections:

    [variety]       n = <int>; generator = <form> (repeatable)
    [hypersurface]  poly = <form>; degree = <int> (optional; validated)
    [curve]         component = <expression in z> (repeatable, ordered)
    [params]        N, epsilon, r_grid | r_range, truncation, seed,
                    precision, degree_cap
    [weights]       bracket = <bracket polynomial>; c = <ints>; m = <int>;
                    subset = <ints> (optional)
    [filtration]    u = <int>; poly = <form> (repeatable)

``r_grid`` is a list of radii; ``r_range`` is ``from to points log|lin``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from nevsmt.curves import parse_curve
from nevsmt.poly import parse_polynomial
from nevsmt.smt import SmtScenario, as_fraction
from nevsmt.variety import VarietyDescriptor
from nevsmt.weights import parse_bracket_polynomial

_KNOWN_SECTIONS = {
    "variety", "hypersurface", "curve", "params", "weights", "filtration",
}
_KNOWN_KEYS = {
    "variety": {"n", "generator"},
    "hypersurface": {"poly", "degree"},
    "curve": {"component"},
    "params": {
        "N", "epsilon", "r_grid", "r_range", "truncation", "seed",
        "precision", "degree_cap",
    },
    "weights": {"bracket", "c", "m", "subset"},
    "filtration": {"u", "poly"},
}


class ScenarioError(ValueError):
    def __init__(self, message, line=None):
        where = f" (line {line})" if line else ""
        super().__init__(f"{message}{where}")
        self.line = line


@dataclass(frozen=True)
class ScenarioFile:
    path: str
    sections: tuple  # ((name, ((key, value), ...)), ...)

    def named(self, name):
        return [entries for sec, entries in self.sections if sec == name]

    def single(self, name, required=True):
        found = self.named(name)
        if len(found) > 1:
            raise ScenarioError(f"section [{name}] given more than once")
        if not found:
            if required:
                raise ScenarioError(f"missing section [{name}]")
            return None
        return found[0]


def _values(entries, key):
    return [v for k, v in entries if k == key]


def _one(entries, key, default=None, required=False):
    vals = _values(entries, key)
    if len(vals) > 1:
        raise ScenarioError(f"key {key!r} given more than once")
    if not vals:
        if required:
            raise ScenarioError(f"missing key {key!r}")
        return default
    return vals[0]


def parse_scenario_text(text, path="<string>"):
    sections = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ScenarioError("unterminated section header", lineno)
            name = line[1:-1].strip()
            if name not in _KNOWN_SECTIONS:
                raise ScenarioError(f"unknown section [{name}]", lineno)
            current = (name, [])
            sections.append(current)
            continue
        if current is None:
            raise ScenarioError("entry before any section header", lineno)
        if "=" not in line:
            raise ScenarioError("expected key = value", lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KNOWN_KEYS[current[0]]:
            raise ScenarioError(
                f"unknown key {key!r} in section [{current[0]}]", lineno
            )
        current[1].append((key, value))
    return ScenarioFile(
        path, tuple((name, tuple(entries)) for name, entries in sections)
    )


def load_scenario_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc}")
    return parse_scenario_text(text, str(path))


# -- builders -----------------------------------------------------------------


def build_variety(sf, degree_cap=None):
    entries = sf.single("variety")
    n = int(_one(entries, "n", required=True))
    gens = tuple(
        parse_polynomial(text, n + 1) for text in _values(entries, "generator")
    )
    return VarietyDescriptor(n, gens, degree_cap=degree_cap)


def build_hypersurfaces(sf, n):
    out = []
    for entries in sf.named("hypersurface"):
        text = _one(entries, "poly", required=True)
        poly = parse_polynomial(text, n + 1)
        stated = _one(entries, "degree")
        if stated is not None and int(stated) != poly.degree:
            raise ScenarioError(
                f"hypersurface {text!r} has degree {poly.degree}, "
                f"not {stated} as stated"
            )
        if poly.is_zero:
            raise ScenarioError(f"hypersurface {text!r} is zero")
        out.append(poly)
    return tuple(out)


def build_curve(sf):
    entries = sf.single("curve")
    texts = _values(entries, "component")
    if not texts:
        raise ScenarioError("curve needs at least one component")
    return parse_curve(texts)


def _parse_grid(entries):
    grid_text = _one(entries, "r_grid")
    range_text = _one(entries, "r_range")
    if grid_text and range_text:
        raise ScenarioError("give r_grid or r_range, not both")
    if grid_text:
        parts = grid_text.replace(",", " ").split()
        grid = tuple(float(p) for p in parts)
    elif range_text:
        parts = range_text.replace(",", " ").split()
        if len(parts) != 4 or parts[3] not in ("log", "lin"):
            raise ScenarioError("r_range wants: from to points log|lin")
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        if parts[3] == "log":
            grid = tuple(float(v) for v in np.geomspace(lo, hi, count))
        else:
            grid = tuple(float(v) for v in np.linspace(lo, hi, count))
    else:
        raise ScenarioError("params needs r_grid or r_range")
    if any(r < 1 for r in grid):
        raise ScenarioError("grid radii must be at least 1")
    if list(grid) != sorted(grid):
        raise ScenarioError("grid radii must ascend")
    return grid


@dataclass(frozen=True)
class ScenarioParams:
    N: int
    epsilon: Fraction
    r_grid: tuple
    truncation: object
    seed: int
    precision: int
    degree_cap: int | None


def build_params(sf):
    entries = sf.single("params")
    trunc_text = _one(entries, "truncation", default="auto")
    if trunc_text == "auto":
        truncation = "auto"
    else:
        truncation = int(trunc_text)
        if truncation < 1:
            raise ScenarioError("explicit truncation must be >= 1")
    cap_text = _one(entries, "degree_cap")
    return ScenarioParams(
        N=int(_one(entries, "N", required=True)),
        epsilon=as_fraction(_one(entries, "epsilon", required=True)),
        r_grid=_parse_grid(entries),
        truncation=truncation,
        seed=int(_one(entries, "seed", default="0")),
        precision=int(_one(entries, "precision", default="53")),
        degree_cap=int(cap_text) if cap_text else None,
    )


def build_smt_scenario(sf, seed=None, precision=None, degree_cap=None):
    import dataclasses

    params = build_params(sf)
    overrides = {}
    if seed is not None:
        overrides["seed"] = seed
    if precision is not None:
        overrides["precision"] = precision
    if degree_cap is not None:
        overrides["degree_cap"] = degree_cap
    if overrides:
        params = dataclasses.replace(params, **overrides)
    variety = build_variety(sf, degree_cap=params.degree_cap)
    hypersurfaces = build_hypersurfaces(sf, variety.n)
    if not hypersurfaces:
        raise ScenarioError("no [hypersurface] sections")
    curve = build_curve(sf)
    return SmtScenario(
        variety=variety,
        hypersurfaces=hypersurfaces,
        N=params.N,
        epsilon=params.epsilon,
        curve=curve,
        r_grid=params.r_grid,
        truncation=params.truncation,
        seed=params.seed,
        precision=params.precision,
        degree_cap=params.degree_cap,
    )
