"""Exact rational matrices and rank computation on top of the reduction kernel.

Dense ``Fraction`` rows are cleared to integers (row scaling leaves the row
space unchanged) and fed to the sparse kernel; pivot columns are the leading
columns of the resulting echelon basis, which depend only on the row space
and the fixed column order.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from nevsmt._kernel import RowReducer


@dataclass(frozen=True)
class RationalMatrix:
    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(v) for v in row) for row in self.entries)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged matrix")
        object.__setattr__(self, "entries", rows)

    @property
    def rows(self):
        return len(self.entries)

    @property
    def cols(self):
        return len(self.entries[0]) if self.entries else 0


def clear_denominators(values):
    """Sparse integer row (cols, vals) from a dense rational row."""
    cols = []
    fracs = []
    for j, v in enumerate(values):
        f = Fraction(v)
        if f:
            cols.append(j)
            fracs.append(f)
    if not cols:
        return (), ()
    scale = lcm(*(f.denominator for f in fracs)) if fracs else 1
    return tuple(cols), tuple(int(f * scale) for f in fracs)


def rational_rank(matrix):
    """Exact rank and pivot-column set of a rational matrix.

    Accepts a RationalMatrix or any nested sequence of rationals.
    """
    entries = matrix.entries if isinstance(matrix, RationalMatrix) else matrix
    entries = list(entries)
    ncols = len(entries[0]) if entries else 0
    reducer = RowReducer(ncols)
    for row in entries:
        cols, vals = clear_denominators(row)
        if cols:
            reducer.add_row(cols, vals)
    return reducer.rank, set(reducer.pivot_columns())


def sparse_fraction_row(pairs):
    """Sparse integer row from (column, Fraction) pairs."""
    pairs = [(c, Fraction(v)) for c, v in pairs if v]
    if not pairs:
        return (), ()
    scale = lcm(*(v.denominator for _, v in pairs))
    return (
        tuple(c for c, _ in pairs),
        tuple(int(v * scale) for _, v in pairs),
    )
