"""Pure-Python incremental exact row reduction over the rationals.

Rows arrive as sparse (columns, integer values) pairs; callers clear
denominators first, which leaves the row space unchanged.  The reducer keeps
a row-echelon basis with gcd-reduced rows and positive leading entries, so
elimination is fraction-free: each step combines rows by cross-multiplying
with exact integers and never divides except by a gcd.

The set of leading columns of a row-echelon basis depends only on the row
space and the (fixed) column order, so ranks and pivot sets computed here are
reproducible regardless of the order rows are fed in.
"""

from math import gcd

# Working rows are gcd-normalized every few elimination steps to control
# coefficient growth.
_NORMALIZE_EVERY = 8


def _row_gcd(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


class RowReducer:
    """Accumulates rows and maintains an exact echelon basis of their span."""

    __slots__ = ("ncols", "_pivots")

    def __init__(self, ncols):
        self.ncols = ncols
        self._pivots = {}  # leading column -> {column: int coefficient}

    @property
    def rank(self):
        return len(self._pivots)

    def pivot_columns(self):
        return tuple(sorted(self._pivots))

    def _reduce(self, cols, vals):
        """Reduce a sparse integer row against the echelon basis.

        Returns the (possibly empty) remainder as a dict.
        """
        row = {}
        for c, v in zip(cols, vals):
            w = row.get(c, 0) + v
            if w:
                row[c] = w
            elif c in row:
                del row[c]
        steps = 0
        pivots = self._pivots
        while row:
            lead = min(row)
            piv = pivots.get(lead)
            if piv is None:
                return row
            a = row[lead]
            b = piv[lead]  # positive by construction
            g = gcd(a, b)
            mul_row = b // g
            mul_piv = a // g
            new = {}
            for c, v in row.items():
                w = v * mul_row - piv.get(c, 0) * mul_piv
                if w:
                    new[c] = w
            for c, pv in piv.items():
                if c not in row:
                    new[c] = -pv * mul_piv
            row = new
            steps += 1
            if steps % _NORMALIZE_EVERY == 0 and row:
                g = _row_gcd(row)
                if g > 1:
                    row = {c: v // g for c, v in row.items()}
        return row

    def add_row(self, cols, vals):
        """Feed one sparse integer row; return True iff it increased the rank."""
        row = self._reduce(cols, vals)
        if not row:
            return False
        g = _row_gcd(row)
        if row[min(row)] < 0:
            g = -g
        if g != 1:
            row = {c: v // g for c, v in row.items()}
        self._pivots[min(row)] = row
        return True

    def contains(self, cols, vals):
        """True iff the sparse integer row lies in the current row space."""
        return not self._reduce(cols, vals)
