# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled exact row-reduction kernel.

Same contract as ``pyreduce.RowReducer``: sparse integer rows in, exact rank
and pivot data out.  Rows are kept as sorted C arrays of column indices; the
values ride in an int64 array while they fit (with 128-bit overflow checks on
every combine) and are promoted to Python big integers only when they must
be.  gcd normalization after every elimination step keeps most workloads on
the fast path.
"""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t

from math import gcd as _pygcd

ctypedef long long i64

cdef extern from *:
    ctypedef long long i128 "__int128"

DEF SMALL_LIMIT = 4611686018427387904  # 2**62: int64 storage threshold
cdef i64 I64_MAX = 9223372036854775807
cdef i64 I64_MIN = (-9223372036854775807) - 1


cdef i64 _gcd64(i64 a, i64 b) noexcept:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef class _Row:
    cdef Py_ssize_t n
    cdef int64_t* cols
    cdef bint small
    cdef int64_t* vals   # valid when small
    cdef list ovals      # valid when not small

    def __dealloc__(self):
        if self.cols != NULL:
            free(self.cols)
        if self.vals != NULL:
            free(self.vals)


cdef _Row _alloc_row(Py_ssize_t n, bint small):
    cdef _Row r = _Row.__new__(_Row)
    r.n = n
    r.small = small
    r.cols = <int64_t*> malloc(n * sizeof(int64_t)) if n else NULL
    if small:
        r.vals = <int64_t*> malloc(n * sizeof(int64_t)) if n else NULL
        r.ovals = None
    else:
        r.vals = NULL
        r.ovals = [0] * n
    return r


cdef inline object _row_val(_Row r, Py_ssize_t i):
    if r.small:
        return r.vals[i]
    return r.ovals[i]


cdef _Row _promote(_Row r):
    """Return an object-valued copy of a small row."""
    cdef _Row out = _alloc_row(r.n, False)
    cdef Py_ssize_t i
    for i in range(r.n):
        out.cols[i] = r.cols[i]
        out.ovals[i] = r.vals[i]
    return out


cdef _Row _normalize(_Row r):
    """Divide by the gcd of the values, make the leading value positive,
    and demote to int64 storage when everything fits."""
    cdef Py_ssize_t i
    cdef i64 g64
    cdef object g, w
    cdef bint fits
    cdef _Row out
    if r.n == 0:
        return r
    if r.small:
        g64 = 0
        for i in range(r.n):
            g64 = _gcd64(g64, r.vals[i])
            if g64 == 1:
                break
        if r.vals[0] < 0:
            g64 = -g64
        if g64 != 1:
            for i in range(r.n):
                r.vals[i] //= g64
        return r
    g = 0
    for i in range(r.n):
        g = _pygcd(g, r.ovals[i])
        if g == 1:
            break
    if r.ovals[0] < 0:
        g = -g
    if g != 1:
        for i in range(r.n):
            r.ovals[i] = r.ovals[i] // g
    fits = True
    for i in range(r.n):
        w = r.ovals[i]
        if not (-SMALL_LIMIT < w < SMALL_LIMIT):
            fits = False
            break
    if not fits:
        return r
    out = _alloc_row(r.n, True)
    for i in range(r.n):
        out.cols[i] = r.cols[i]
        out.vals[i] = r.ovals[i]
    return out


cdef _Row _combine_small(_Row row, i64 mr, _Row piv, i64 mp, bint* overflow):
    """mr*row - mp*piv for two small rows; sets *overflow instead of wrapping."""
    cdef Py_ssize_t i = 0, j = 0, k = 0
    cdef i128 t
    cdef int64_t c1, c2, c
    cdef _Row out = _alloc_row(row.n + piv.n, True)
    overflow[0] = False
    while i < row.n or j < piv.n:
        c1 = row.cols[i] if i < row.n else I64_MAX
        c2 = piv.cols[j] if j < piv.n else I64_MAX
        if c1 < c2:
            t = <i128> mr * row.vals[i]
            c = c1
            i += 1
        elif c2 < c1:
            t = -(<i128> mp * piv.vals[j])
            c = c2
            j += 1
        else:
            t = <i128> mr * row.vals[i] - <i128> mp * piv.vals[j]
            c = c1
            i += 1
            j += 1
        if t:
            if t > <i128> I64_MAX or t < <i128> I64_MIN:
                overflow[0] = True
                return None
            out.cols[k] = c
            out.vals[k] = <int64_t> t
            k += 1
    out.n = k
    return out


cdef _Row _combine_obj(_Row row, object mr, _Row piv, object mp):
    """mr*row - mp*piv with Python-integer values (either row may be small)."""
    cdef Py_ssize_t i = 0, j = 0, k = 0
    cdef int64_t c1, c2, c
    cdef object t
    cdef _Row out = _alloc_row(row.n + piv.n, False)
    while i < row.n or j < piv.n:
        c1 = row.cols[i] if i < row.n else I64_MAX
        c2 = piv.cols[j] if j < piv.n else I64_MAX
        if c1 < c2:
            t = mr * _row_val(row, i)
            c = c1
            i += 1
        elif c2 < c1:
            t = -(mp * _row_val(piv, j))
            c = c2
            j += 1
        else:
            t = mr * _row_val(row, i) - mp * _row_val(piv, j)
            c = c1
            i += 1
            j += 1
        if t:
            out.cols[k] = c
            out.ovals[k] = t
            k += 1
    out.n = k
    out.ovals = out.ovals[:k]
    return out


cdef class RowReducer:
    """Drop-in compiled twin of the pure-Python reducer."""

    cdef public Py_ssize_t ncols
    cdef dict _pivots  # leading column -> _Row

    def __init__(self, ncols):
        self.ncols = ncols
        self._pivots = {}

    @property
    def rank(self):
        return len(self._pivots)

    def pivot_columns(self):
        return tuple(sorted(self._pivots))

    cdef _Row _from_sparse(self, cols, vals):
        cdef list pairs = sorted(zip(cols, vals))
        cdef list merged = []
        cdef object c, v, lastc
        cdef list tail
        lastc = None
        for c, v in pairs:
            if merged and c == lastc:
                tail = merged[len(merged) - 1]
                tail[1] = tail[1] + v
            else:
                merged.append([c, v])
                lastc = c
        merged = [cv for cv in merged if cv[1]]
        cdef Py_ssize_t n = len(merged)
        cdef Py_ssize_t i
        cdef bint small = True
        for cv in merged:
            v = cv[1]
            if not (-SMALL_LIMIT < v < SMALL_LIMIT):
                small = False
                break
        cdef _Row r = _alloc_row(n, small)
        for i in range(n):
            r.cols[i] = merged[i][0]
            if small:
                r.vals[i] = merged[i][1]
            else:
                r.ovals[i] = merged[i][1]
        return r

    cdef _Row _reduce(self, _Row row):
        cdef _Row piv, nxt
        cdef i64 a64, b64, g64
        cdef object a, b, g
        cdef bint overflow
        cdef int obj_steps = 0
        while row.n:
            piv = self._pivots.get(row.cols[0])
            if piv is None:
                return row
            if row.small and piv.small:
                a64 = row.vals[0]
                b64 = piv.vals[0]  # positive by construction
                g64 = _gcd64(a64, b64)
                nxt = _combine_small(row, b64 // g64, piv, a64 // g64,
                                     &overflow)
                if overflow:
                    row = _promote(row)
                    continue
                row = _normalize(nxt)
            else:
                a = _row_val(row, 0)
                b = _row_val(piv, 0)
                g = _pygcd(a, b)
                row = _combine_obj(row, b // g, piv, a // g)
                obj_steps += 1
                if obj_steps % 8 == 0 and row.n:
                    row = _normalize(row)
        return row

    def add_row(self, cols, vals):
        """Feed one sparse integer row; return True iff it increased the rank."""
        cdef _Row row = self._reduce(self._from_sparse(cols, vals))
        if row.n == 0:
            return False
        row = _normalize(row)
        self._pivots[row.cols[0]] = row
        return True

    def contains(self, cols, vals):
        """True iff the sparse integer row lies in the current row space."""
        cdef _Row row = self._reduce(self._from_sparse(cols, vals))
        return row.n == 0
