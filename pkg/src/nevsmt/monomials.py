"""The global monomial order and graded monomial bases.

A monomial in ``x0..x{n-1}`` is an exponent tuple of length ``n_vars``.  The
single order used everywhere in the package is graded-lex descending with x0
heaviest: within a fixed total degree, tuples compare lexicographically and
larger comes first, so ``x0^m`` leads every degree-m basis.  All column
indexing, pivot choices and greedy tie-breaks depend on this order staying
fixed.
"""

from functools import lru_cache
from math import comb

Monomial = tuple  # exponent tuple, one entry per variable


def monomial_degree(mono):
    return sum(mono)


def basis_size(n_vars, degree):
    """Dimension of the space of degree-``degree`` forms in ``n_vars`` variables."""
    return comb(degree + n_vars - 1, n_vars - 1)


@lru_cache(maxsize=None)
def monomial_basis(n_vars, degree):
    """All degree-``degree`` exponent tuples, in the global order."""
    if n_vars < 1:
        raise ValueError("need at least one variable")
    if degree < 0:
        raise ValueError("degree must be non-negative")
    out = []

    def emit(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining, -1, -1):
            emit(prefix + (e,), remaining - e, slots - 1)

    emit((), degree, n_vars)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(n_vars, degree):
    """Monomial -> column index under the global order."""
    return {mono: i for i, mono in enumerate(monomial_basis(n_vars, degree))}


def monomial_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))
