"""Filtration of the degree-u forms by powers of n fixed hypersurfaces.

For hypersurfaces P_1..P_n of common degree d in general position in P^n and
u divisible by d, the space W_(i) is spanned by all products
P_1^{j_1}...P_n^{j_n} * (forms of degree u - d*(j_1+...+j_n)) over exponent
tuples (j) >= (i) lexicographically.  The tables below hold the exact
dimensions, the successive quotient dimensions m_(i), and the weighted sums
b_j they induce.  The proof-side convention m at the last index = 1 is
computed and asserted here, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from nevsmt._kernel import RowReducer
from nevsmt.monomials import monomial_basis, monomial_index, monomial_mul
from nevsmt.variety import (
    EMPTY,
    VarietyDescriptor,
    dim_at_most,
    estimate_dimension,
)
from nevsmt.variety import _integer_rows


@dataclass(frozen=True)
class FiltrationParams:
    n: int
    d: int
    u: int
    hypersurfaces: tuple

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be at least 1")
        if self.u % self.d:
            raise ValueError(f"u={self.u} not divisible by d={self.d}")
        if len(self.hypersurfaces) != self.n:
            raise ValueError(
                f"need exactly n={self.n} hypersurfaces, got {len(self.hypersurfaces)}"
            )
        for g in self.hypersurfaces:
            if g.n_vars != self.n + 1:
                raise ValueError("hypersurface in the wrong ambient space")
            if g.degree != self.d:
                raise ValueError(
                    f"hypersurface degree {g.degree} != common degree {self.d}"
                )

    def check_general_position(self):
        """The n hypersurfaces must cut P^n down to dimension <= 0."""
        dim = estimate_dimension(VarietyDescriptor(self.n, self.hypersurfaces))
        if not dim_at_most(dim, 0):
            raise ValueError(
                f"hypersurfaces not in general position: intersection dim {dim!r}"
            )


@dataclass(frozen=True)
class FiltrationTable:
    params: FiltrationParams
    indices: tuple  # exponent tuples, ascending lexicographic
    dims: dict  # index -> dim W_(i)
    quotients: dict  # index -> m_(i)

    @property
    def K(self):
        return len(self.indices)


def count_indices(u, d, n):
    """Number of filtration indices: exponent tuples with d*sigma <= u."""
    if u % d:
        raise ValueError(f"u={u} not divisible by d={d}")
    return comb(u // d + n, n)


def _exponent_tuples(limit, n):
    """All (i_1..i_n) with sum <= limit, ascending lexicographic."""
    out = []

    def emit(prefix, remaining, slots):
        if slots == 0:
            out.append(prefix)
            return
        for e in range(remaining + 1):
            emit(prefix + (e,), remaining - e, slots - 1)

    emit((), limit, n)
    return sorted(out)


def filtration_dims(params, check_position=True):
    """Exact dims of every W_(i) and the successive quotient dimensions.

    Spanning rows are generated without deduplication; the rank computation
    deduplicates.  Iterating indices in descending order lets one reducer
    accumulate the nested spans.
    """
    if check_position:
        params.check_general_position()
    n, d, u = params.n, params.d, params.u
    n_vars = n + 1
    indices = _exponent_tuples(u // d, n)
    index_map = monomial_index(n_vars, u)
    reducer = RowReducer(len(index_map))

    powers = []  # powers[t][j] = P_{t+1}^j as integer sparse rows
    for g in params.hypersurfaces:
        acc = [None] * (u // d + 1)
        p = None
        from nevsmt.poly import HomogeneousPolynomial

        for j in range(u // d + 1):
            p = HomogeneousPolynomial.constant(n_vars, 1) if j == 0 else p * g
            acc[j] = p
        powers.append(acc)

    dims = {}
    for idx in reversed(indices):
        sigma = sum(idx)
        prod = powers[0][idx[0]]
        for t in range(1, n):
            prod = prod * powers[t][idx[t]]
        monos, vals = _integer_rows(prod)
        for a in monomial_basis(n_vars, u - d * sigma):
            cols = tuple(index_map[monomial_mul(mono, a)] for mono in monos)
            reducer.add_row(cols, vals)
        dims[idx] = reducer.rank

    quotients = {}
    for here, there in zip(indices, indices[1:]):
        quotients[here] = dims[here] - dims[there]
    last = indices[-1]
    quotients[last] = dims[last]
    if quotients[last] != 1:
        raise RuntimeError(
            f"final filtration step has dimension {quotients[last]}, expected 1"
        )
    if dims[indices[0]] != comb(u + n, n):
        raise RuntimeError("filtration does not start at the full graded piece")
    return FiltrationTable(params, tuple(indices), dims, quotients)


def stable_quotient_violations(params, table=None):
    """Indices where the quotient dimension misses d^n despite
    d*sigma(i) < u - n*d.  Empty means the stability rule holds."""
    if table is None:
        table = filtration_dims(params)
    n, d, u = params.n, params.d, params.u
    expected = d ** n
    out = []
    for idx in table.indices:
        if d * sum(idx) < u - n * d and table.quotients[idx] != expected:
            out.append(idx)
    return out


def compute_b(table):
    """Weighted exponent sums b_j and their exact lower-bound margins.

    b_j = sum over indices of m_(i) * i_j; the bound is
    d^n (u - n d) / ((n+1) d) * C(u/d, n).
    """
    params = table.params
    n, d, u = params.n, params.d, params.u
    b = []
    for j in range(n):
        b.append(Fraction(sum(table.quotients[idx] * idx[j] for idx in table.indices)))
    bound = Fraction(d ** n * (u - n * d), (n + 1) * d) * comb(u // d, n)
    margins = tuple(bj - bound for bj in b)
    return tuple(b), margins
