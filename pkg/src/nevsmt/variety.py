"""Graded-piece computations for homogeneous ideals.

Hilbert data here is that of the *generated* ideal, not its saturation; it
agrees with the geometric Hilbert function in large degrees, and every
certificate below (emptiness via a vanishing graded piece, dimension and
degree via stabilized finite differences) relies on large-degree behaviour
only.  Smoothness of a variety is never checked; reports carry that as a
standing assumption.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import comb

from nevsmt._kernel import RowReducer
from nevsmt.linalg import sparse_fraction_row
from nevsmt.monomials import monomial_basis, monomial_index, monomial_mul

SMOOTHNESS_NOTE = "assumes the variety is smooth (not verified)"

CERTIFIED_EMPTY = "certified-empty"
NONEMPTY_LIKELY = "nonempty-likely"
INCONCLUSIVE = "inconclusive"


class _EmptyDim:
    """Dimension of the empty variety; compares below every integer."""

    __slots__ = ()

    def __repr__(self):
        return "EMPTY"


EMPTY = _EmptyDim()


def dim_at_most(value, bound):
    return value is EMPTY or value <= bound


class UnstableHilbertData(RuntimeError):
    """Finite differences did not stabilize below the degree cap."""

    def __init__(self, cap, values):
        super().__init__(
            f"Hilbert data unstable at degree cap {cap}: top window {values}"
        )
        self.cap = cap
        self.values = values


@dataclass(frozen=True)
class EmptinessVerdict:
    status: str
    m_star: int | None
    cap: int
    window: tuple

    @property
    def is_certified_empty(self):
        return self.status == CERTIFIED_EMPTY

    @property
    def is_inconclusive(self):
        return self.status == INCONCLUSIVE

    def __str__(self):
        if self.is_certified_empty:
            return f"CertifiedEmpty(m*={self.m_star})"
        if self.status == NONEMPTY_LIKELY:
            return f"NonemptyLikely(cap={self.cap})"
        return f"Inconclusive(cap={self.cap})"


@dataclass
class VarietyDescriptor:
    n: int
    generators: tuple = ()
    degree_cap: int | None = None
    _hilbert_cache: dict = field(default_factory=dict, repr=False, compare=False)
    _dim_estimate: object = field(default=None, repr=False, compare=False)
    _degree_estimate: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        gens = tuple(g for g in self.generators if not g.is_zero)
        for g in gens:
            if g.n_vars != self.n + 1:
                raise ValueError(
                    f"generator in {g.n_vars} variables; ambient needs {self.n + 1}"
                )
            if g.degree < 1:
                raise ValueError("generators must have degree >= 1")
        object.__setattr__(self, "generators", gens)


def default_degree_cap(generators, n):
    """Pragmatic regularity heuristic for how far to push graded data."""
    degs = [g.degree for g in generators]
    if not degs:
        return n + 3
    return max(sum(degs), 2 * max(degs) + n + 2)


def nullstellensatz_degree_cap(generators):
    """Hard effective bound (product of degrees); can be astronomically large."""
    cap = 1
    for g in generators:
        cap *= g.degree
    return max(cap, 1)


def _integer_rows(gen):
    """(monomials, int coefficients) with denominators cleared."""
    pairs = sorted(gen.terms.items())
    cols, vals = sparse_fraction_row(list(enumerate(c for _, c in pairs)))
    monos = [pairs[i][0] for i in cols]
    return monos, vals


def ideal_graded_dim(gens, m, n_vars=None):
    """Dimension of the degree-m piece of the ideal generated by ``gens``.

    Computed as the rank of the row set {x^a * g} over the degree-m monomial
    basis.
    """
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        return 0
    if n_vars is None:
        n_vars = gens[0].n_vars
    index = monomial_index(n_vars, m)
    reducer = RowReducer(len(index))
    for g in gens:
        if g.degree > m:
            continue
        monos, vals = _integer_rows(g)
        for a in monomial_basis(n_vars, m - g.degree):
            cols = tuple(index[monomial_mul(mono, a)] for mono in monos)
            reducer.add_row(cols, vals)
    return reducer.rank


def hilbert_function(V, m):
    """H(m) = dim of degree-m forms modulo the generated ideal; cached."""
    if m < 0:
        raise ValueError("degree must be non-negative")
    cache = V._hilbert_cache
    if m in cache:
        return cache[m]
    h = comb(m + V.n, V.n) - ideal_graded_dim(V.generators, m, V.n + 1)
    # ideal property: once a graded piece fills up it stays full
    if h == 0:
        bad = [m2 for m2, h2 in cache.items() if m2 > m and h2 > 0]
    else:
        bad = [m2 for m2, h2 in cache.items() if m2 < m and h2 == 0]
    if bad:
        raise RuntimeError(
            f"monotone-vanishing violation around degree {m}: check kernel"
        )
    cache[m] = h
    return h


def _difference_profile(values):
    """(degree, leading difference) of the interpolating polynomial, or None."""
    seq = list(values)
    level = 0
    while len(seq) >= 2:
        if all(v == seq[0] for v in seq):
            return level, seq[0]
        seq = [b - a for a, b in zip(seq, seq[1:])]
        level += 1
    return None


def certify_empty(gen_sets, m_cap=None, window=None, use_nullstellensatz_cap=False):
    """Decide emptiness of the projective zero set of combined generators.

    CertifiedEmpty(m*) is exact (vanishing graded piece = projective
    Nullstellensatz certificate).  NonemptyLikely means the Hilbert values
    stabilized to a positive polynomial pattern over the top window;
    Inconclusive means neither happened below the cap.
    """
    gens = [g for gs in gen_sets for g in gs if not g.is_zero]
    if not gens:
        return EmptinessVerdict(NONEMPTY_LIKELY, None, 0, ())
    n_vars = gens[0].n_vars
    if any(g.n_vars != n_vars for g in gens):
        raise ValueError("mixed variable counts")
    n = n_vars - 1
    if m_cap is None:
        m_cap = (
            nullstellensatz_degree_cap(gens)
            if use_nullstellensatz_cap
            else default_degree_cap(gens, n)
        )
    if m_cap < 1:
        raise ValueError("degree cap must be at least 1")
    V = VarietyDescriptor(n, tuple(gens))
    values = []
    for m in range(1, m_cap + 1):
        h = hilbert_function(V, m)
        values.append(h)
        if h == 0:
            return EmptinessVerdict(CERTIFIED_EMPTY, m, m_cap, tuple(values[-3:]))
    w = window if window is not None else n + 3
    top = tuple(values[-w:])
    if len(top) < w:
        # cap too small to see a full window: no pattern claim
        return EmptinessVerdict(INCONCLUSIVE, None, m_cap, top)
    profile = _difference_profile(top)
    if profile is not None and top[-1] > 0:
        return EmptinessVerdict(NONEMPTY_LIKELY, None, m_cap, top)
    return EmptinessVerdict(INCONCLUSIVE, None, m_cap, top)


def _hilbert_profile(V, window=None, m_cap=None):
    """(dimension, leading difference) of V, where dimension may be EMPTY.

    Raises UnstableHilbertData when the top window has not stabilized.
    """
    n = V.n
    if m_cap is None:
        m_cap = V.degree_cap or default_degree_cap(V.generators, n)
    w = window if window is not None else n + 3
    if w < n + 2:
        raise ValueError("window must be at least n+2")
    values = []
    for m in range(1, m_cap + 1):
        h = hilbert_function(V, m)
        values.append(h)
        if h == 0:
            return EMPTY, None
    top = values[-w:]
    profile = _difference_profile(top)
    if profile is None:
        raise UnstableHilbertData(m_cap, tuple(top))
    degree, leading = profile
    if leading <= 0:
        raise UnstableHilbertData(m_cap, tuple(top))
    return degree, leading


def estimate_dimension(V, window=None, m_cap=None):
    """Projective dimension from stabilized finite differences, or EMPTY."""
    if window is not None or m_cap is not None:
        return _hilbert_profile(V, window, m_cap)[0]
    if V._dim_estimate is None:
        dim, leading = _hilbert_profile(V)
        V._dim_estimate = dim
        V._degree_estimate = leading
    return V._dim_estimate


def variety_degree(V):
    """Leading stabilized finite difference of H: the projective degree."""
    dim = estimate_dimension(V)
    if dim is EMPTY:
        raise ValueError("empty variety has no degree")
    return V._degree_estimate


@dataclass(frozen=True)
class PositionReport:
    N: int
    verdict: object  # True / False / None (inconclusive)
    witness: tuple | None
    certificates: dict
    assumption: str = SMOOTHNESS_NOTE

    @property
    def is_inconclusive(self):
        return self.verdict is None


def check_position(V, hypersurfaces, N, m_cap=None):
    """Subgeneral-position check: every (N+1)-subset must certify empty on V.

    Subsets are scanned in lexicographic order; the first definite failure is
    returned as witness.  Inconclusive subsets make the overall verdict
    inconclusive (never a silent pass).
    """
    q = len(hypersurfaces)
    if q < N + 1:
        raise ValueError(f"need at least N+1={N + 1} hypersurfaces, got {q}")
    k = estimate_dimension(V)
    if k is not EMPTY and N + 1 < k + 1:
        raise ValueError(f"N={N} is below the variety dimension {k}")
    certificates = {}
    saw_inconclusive = False
    for subset in itertools.combinations(range(q), N + 1):
        verdict = certify_empty(
            [V.generators, [hypersurfaces[j] for j in subset]], m_cap=m_cap
        )
        certificates[subset] = verdict
        if verdict.status == NONEMPTY_LIKELY:
            return PositionReport(N, False, subset, certificates)
        if verdict.is_inconclusive:
            saw_inconclusive = True
    if saw_inconclusive:
        return PositionReport(N, None, None, certificates)
    return PositionReport(N, True, None, certificates)


class ReplacementPreconditionError(ValueError):
    pass


class ReplacementConstructionError(RuntimeError):
    def __init__(self, step, last_dims, attempts):
        super().__init__(
            f"replacement construction failed at step {step} after "
            f"{attempts} attempts; verified dims so far: {last_dims}"
        )
        self.step = step
        self.last_dims = last_dims
        self.attempts = attempts


@dataclass(frozen=True)
class ReplacementSystem:
    polynomials: tuple
    coefficients: tuple  # rows t=2..k+1; row t holds c_{t,2}..c_{t,N-k+t}
    chain_dims: tuple  # verified dims for t=1..k+1; last is EMPTY
    seed: int
    assumption: str = SMOOTHNESS_NOTE


def _draw_nonzero(rng, bound):
    v = 0
    while v == 0:
        v = rng.randint(-bound, bound)
    return v


def construct_replacement_system(
    V, hypersurfaces, seed=0, max_retries=8, coeff_bound=10
):
    """Replace N+1 equal-degree hypersurfaces by k+1 combinations whose
    intersection chain with V drops in dimension at every step.

    P_1 is the first input; P_t (t >= 2) is an integer combination of inputs
    2..N-k+t.  Each step is verified by a dimension estimate, never trusted
    from genericity; coefficients are drawn from [-B, B] \\ {0} with B
    doubling on retry.  Deterministic for a fixed seed.
    """
    Q = tuple(hypersurfaces)
    if not Q:
        raise ReplacementPreconditionError("no hypersurfaces given")
    degrees = {g.degree for g in Q}
    if len(degrees) != 1:
        raise ReplacementPreconditionError(
            f"hypersurfaces must share one degree, got {sorted(degrees)}"
        )
    verdict = certify_empty([V.generators, Q])
    if not verdict.is_certified_empty:
        raise ReplacementPreconditionError(
            f"combined intersection not certified empty: {verdict}"
        )
    k = estimate_dimension(V)
    if k is EMPTY or k < 1:
        raise ReplacementPreconditionError(f"variety dimension {k!r} unusable")
    N = len(Q) - 1
    if N < k:
        raise ReplacementPreconditionError(f"need N >= k, got N={N}, k={k}")

    rng = random.Random(seed)
    chain = [Q[0]]
    dims = []
    dim1 = estimate_dimension(VarietyDescriptor(V.n, V.generators + (Q[0],)))
    if not dim_at_most(dim1, k - 1):
        raise ReplacementConstructionError(1, (dim1,), 1)
    dims.append(dim1)
    coeff_rows = []
    for t in range(2, k + 2):
        hi = N - k + t  # combinations use inputs Q_2 .. Q_hi (1-based)
        bound = coeff_bound
        success = False
        last = None
        for _ in range(max_retries):
            coeffs = tuple(_draw_nonzero(rng, bound) for _ in range(hi - 1))
            candidate = None
            for c, g in zip(coeffs, Q[1:hi]):
                piece = g * c
                candidate = piece if candidate is None else candidate + piece
            try:
                dim_t = estimate_dimension(
                    VarietyDescriptor(V.n, V.generators + tuple(chain) + (candidate,))
                )
            except UnstableHilbertData:
                dim_t = None
            last = dim_t
            if dim_t is not None and dim_at_most(dim_t, k - t):
                chain.append(candidate)
                dims.append(dim_t)
                coeff_rows.append(coeffs)
                success = True
                break
            bound *= 2
        if not success:
            raise ReplacementConstructionError(t, tuple(dims) + (last,), max_retries)
    if dims[-1] is not EMPTY:
        raise ReplacementConstructionError(k + 1, tuple(dims), max_retries)
    return ReplacementSystem(tuple(chain), tuple(coeff_rows), tuple(dims), seed)
