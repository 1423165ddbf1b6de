"""Chow weights from bracket-form Chow forms and Hilbert weights via greedy
monomial-basis selection.

A Chow form is supplied as a polynomial in brackets ``[J]``: ``J`` is a
(k+1)-subset of the ambient coordinates and ``[J]`` the determinant of the
matching columns of the (k+1) blocks of coefficient variables.  Chow forms
are *inputs* here; only coordinate linear subspaces get a built-in.  Weight
vectors are tuples of non-negative integers, which keeps every quantity an
exact rational.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from nevsmt.monomials import monomial_basis, monomial_index
from nevsmt.variety import (
    VarietyDescriptor,
    certify_empty,
    estimate_dimension,
    hilbert_function,
    variety_degree,
)
from nevsmt._kernel import RowReducer
from nevsmt.poly import HomogeneousPolynomial
from nevsmt.variety import _integer_rows
from nevsmt.monomials import monomial_mul


class ChowWeightMismatch(RuntimeError):
    """The two Chow-weight computation paths disagreed; never resolved silently."""


class DegenerateSampling(RuntimeError):
    """All t-substitution samples were degenerate."""


@dataclass(frozen=True)
class BracketPolynomial:
    n: int
    k: int
    terms: tuple  # ((Fraction coeff, (J, J, ...)), ...) with each J a sorted tuple

    def __post_init__(self):
        clean = {}
        block_deg = None
        for coeff, monomial in self.terms:
            coeff = Fraction(coeff)
            monomial = tuple(sorted(tuple(sorted(J)) for J in monomial))
            if block_deg is None:
                block_deg = len(monomial)
            elif len(monomial) != block_deg:
                raise ValueError("terms have different bracket-degrees")
            for J in monomial:
                if len(J) != self.k + 1:
                    raise ValueError(f"bracket {J} has size != k+1={self.k + 1}")
                if len(set(J)) != len(J):
                    raise ValueError(f"repeated index in bracket {J}")
                if any(not 0 <= j <= self.n for j in J):
                    raise ValueError(f"bracket {J} outside 0..{self.n}")
            if coeff:
                clean[monomial] = clean.get(monomial, Fraction(0)) + coeff
        terms = tuple(
            (c, m) for m, c in sorted(clean.items()) if c != 0
        )
        object.__setattr__(self, "terms", terms)

    @property
    def is_zero(self):
        return not self.terms

    @property
    def bracket_degree(self):
        return len(self.terms[0][1]) if self.terms else 0

    def __str__(self):
        if self.is_zero:
            return "0"
        pieces = []
        for coeff, monomial in self.terms:
            body = "".join("[" + ",".join(map(str, J)) + "]" for J in monomial)
            mag = abs(coeff)
            if mag != 1:
                body = f"{mag} * {body}"
            pieces.append(("-" if coeff < 0 else "+", body))
        sign, body = pieces[0]
        out = body if sign == "+" else "-" + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out


def coordinate_subspace_chow_form(J, n):
    """Chow form of the coordinate plane {x_j = 0 for j not in J}: one bracket."""
    J = tuple(sorted(J))
    if not J:
        raise ValueError("empty index set")
    return BracketPolynomial(n, len(J) - 1, ((Fraction(1), (J,)),))


def parse_bracket_polynomial(text, n):
    """Parse terms like ``3/2 * [0,1][1,2]`` joined by '+' / '-'."""
    i = 0
    text = text.strip()
    if not text:
        raise ValueError("empty bracket polynomial")
    terms = []
    sign = 1
    if text[0] in "+-":
        sign = -1 if text[0] == "-" else 1
        i = 1
    k_plus_1 = None
    while i < len(text):
        while i < len(text) and text[i].isspace():
            i += 1
        start = i
        while i < len(text) and text[i] not in "+-":
            i += 1
        chunk = text[start:i].strip()
        if not chunk:
            raise ValueError(f"empty term at offset {start}")
        coeff = Fraction(1)
        if "*" in chunk:
            head, _, tail = chunk.partition("*")
            coeff = Fraction(head.strip())
            chunk = tail.strip()
        elif not chunk.startswith("["):
            raise ValueError(f"malformed term {chunk!r}")
        brackets = []
        j = 0
        while j < len(chunk):
            if chunk[j] != "[":
                raise ValueError(f"expected '[' in {chunk!r}")
            end = chunk.index("]", j)
            J = tuple(int(s) for s in chunk[j + 1:end].split(","))
            brackets.append(J)
            j = end + 1
        sizes = {len(J) for J in brackets}
        if len(sizes) != 1:
            raise ValueError("brackets of mixed sizes in one term")
        if k_plus_1 is None:
            k_plus_1 = sizes.pop()
        elif sizes.pop() != k_plus_1:
            raise ValueError("brackets of mixed sizes")
        terms.append((sign * coeff, tuple(brackets)))
        if i < len(text):
            sign = -1 if text[i] == "-" else 1
            i += 1
    return BracketPolynomial(n, k_plus_1 - 1, tuple(terms))


def _perm_sign(perm):
    sign = 1
    for a, b in itertools.combinations(range(len(perm)), 2):
        if perm[a] > perm[b]:
            sign = -sign
    return sign


def expand_bracket(J):
    """[J] as a map {sorted ((row, col), ...): sign} over the u-variables."""
    k1 = len(J)
    out = {}
    for perm in itertools.permutations(range(k1)):
        mono = tuple(sorted((i, J[perm[i]]) for i in range(k1)))
        out[mono] = out.get(mono, 0) + _perm_sign(perm)
    return {m: c for m, c in out.items() if c}


def expand_to_u_monomials(F):
    """Expand a bracket polynomial into u-variable monomials, cancelling exactly."""
    total = {}
    for coeff, monomial in F.terms:
        acc = {(): Fraction(1)}
        for J in monomial:
            nxt = {}
            for mono1, c1 in acc.items():
                for mono2, c2 in expand_bracket(J).items():
                    mono = tuple(sorted(mono1 + mono2))
                    nxt[mono] = nxt.get(mono, Fraction(0)) + c1 * c2
            acc = {m: c for m, c in nxt.items() if c}
        for mono, c in acc.items():
            total[mono] = total.get(mono, Fraction(0)) + coeff * c
    return {m: c for m, c in total.items() if c}


def _validate_weights(c, n):
    c = tuple(int(v) for v in c)
    if len(c) != n + 1:
        raise ValueError(f"weight vector needs {n + 1} entries, got {len(c)}")
    if any(v < 0 for v in c):
        raise ValueError("weights must be non-negative")
    return c


def _chow_weight_exact(F, c):
    expansion = expand_to_u_monomials(F)
    if not expansion:
        raise ValueError("bracket polynomial expands to zero")
    return max(sum(c[j] for _, j in mono) for mono in expansion)


def _tpoly_mul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = e1 + e2
            out[e] = out.get(e, Fraction(0)) + c1 * c2
    return {e: v for e, v in out.items() if v}


def _tpoly_det(matrix):
    """Determinant of a matrix of sparse t-polynomials, by cofactor expansion."""
    size = len(matrix)
    if size == 1:
        return dict(matrix[0][0])
    out = {}
    for col in range(size):
        entry = matrix[0][col]
        if not entry:
            continue
        minor = [
            [row[c] for c in range(size) if c != col] for row in matrix[1:]
        ]
        sub = _tpoly_det(minor)
        if col % 2:
            sub = {e: -v for e, v in sub.items()}
        for e, v in _tpoly_mul(entry, sub).items():
            w = out.get(e, Fraction(0)) + v
            if w:
                out[e] = w
            elif e in out:
                del out[e]
    return out


def _chow_weight_sampled_once(F, c, rng):
    """Leading t-exponent after substituting u_ij <- rho_ij * t^{c_j}, or None."""
    rho = {
        (i, j): Fraction(rng.randint(1, 997), rng.randint(1, 997))
        for i in range(F.k + 1)
        for j in range(F.n + 1)
    }
    total = {}
    for coeff, monomial in F.terms:
        prod = {0: Fraction(coeff)}
        for J in monomial:
            matrix = [
                [{c[j]: rho[(i, j)]} for j in J] for i in range(F.k + 1)
            ]
            prod = _tpoly_mul(prod, _tpoly_det(matrix))
            if not prod:
                break
        for e, v in prod.items():
            w = total.get(e, Fraction(0)) + v
            if w:
                total[e] = w
            elif e in total:
                del total[e]
    if not total:
        return None
    return max(total)


def _chow_weight_sampled(F, c, seed, retries=12):
    rng = random.Random(seed)
    samples = 0
    for _ in range(retries):
        e1 = _chow_weight_sampled_once(F, c, rng)
        e2 = _chow_weight_sampled_once(F, c, rng)
        samples += 2
        if e1 is not None and e1 == e2:
            return e1
    raise DegenerateSampling(
        f"no two t-substitution samples agreed after {samples} samples"
    )


def chow_weight(F, c, seed=0):
    """Top t-exponent of the Chow form under coordinate scaling by t^{c_j}.

    Computed two ways and cross-checked: exact bracket expansion with full
    cancellation, and the leading exponent of a random exact rational
    t-substitution.  A mismatch raises; it is never resolved silently.
    """
    if F.is_zero:
        raise ValueError("zero Chow form")
    c = _validate_weights(c, F.n)
    exact = _chow_weight_exact(F, c)
    sampled = _chow_weight_sampled(F, c, seed)
    if exact != sampled:
        raise ChowWeightMismatch(
            f"bracket-expansion weight {exact} != t-substitution weight {sampled}"
        )
    return exact


@dataclass(frozen=True)
class HilbertWeightResult:
    value: Fraction
    basis: tuple  # monomials whose residues span the graded quotient
    rank_profile: tuple  # pivot columns of the ideal's echelon basis
    quotient_dim: int


def hilbert_weight(V, m, c):
    """Maximum total c-weight of a monomial basis of the degree-m quotient.

    Monomials are scanned by weight (ties broken by the global monomial
    order) and kept whenever they enlarge the span modulo the ideal; the
    quotient-spanning monomial subsets are the bases of a linear matroid, so
    the greedy maximum is the true maximum.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    c = _validate_weights(c, V.n)
    n_vars = V.n + 1
    basis = monomial_basis(n_vars, m)
    index = monomial_index(n_vars, m)
    reducer = RowReducer(len(basis))
    for g in V.generators:
        if g.degree > m:
            continue
        monos, vals = _integer_rows(g)
        for a in monomial_basis(n_vars, m - g.degree):
            cols = tuple(index[monomial_mul(mono, a)] for mono in monos)
            reducer.add_row(cols, vals)
    ideal_pivots = reducer.pivot_columns()
    quotient_dim = len(basis) - reducer.rank
    weight = [sum(e * ci for e, ci in zip(mono, c)) for mono in basis]
    order = sorted(range(len(basis)), key=lambda i: (-weight[i], i))
    chosen = []
    total = 0
    for i in order:
        if reducer.add_row((i,), (1,)):
            chosen.append(basis[i])
            total += weight[i]
            if len(chosen) == quotient_dim:
                break
    expected = hilbert_function(V, m)
    if quotient_dim != expected or len(chosen) != quotient_dim:
        raise RuntimeError("quotient dimension mismatch; check kernel")
    return HilbertWeightResult(
        Fraction(total), tuple(chosen), ideal_pivots, quotient_dim
    )


def weight_comparison_margin(V, F, m, c, seed=0):
    """Exact margin of the Hilbert-weight vs Chow-weight comparison:

        S/(m*H(m)) - [ e/((n+1)*deg) - (2n+1)*deg/m * max(c) ].

    Requires m > deg(V); the caller asserts the margin is >= 0.
    """
    c = _validate_weights(c, V.n)
    delta = variety_degree(V)
    if m <= delta:
        raise ValueError(f"need m > deg(V) = {delta}, got m = {m}")
    H = hilbert_function(V, m)
    S = hilbert_weight(V, m, c).value
    e = chow_weight(F, c, seed)
    n = V.n
    lhs = S / (m * H)
    rhs = Fraction(e, (n + 1) * delta) - Fraction((2 * n + 1) * delta, m) * max(c)
    return lhs - rhs


def chow_weight_floor_margin(Y, F, c, subset, seed=0):
    """Exact margin of the Chow-weight lower bound for a coordinate subset:

        e(c) - (c_{i_0} + ... + c_{i_dim}) * deg(Y),

    valid once Y meets the subset's coordinate zero locus emptily (certified
    here; failure to certify is an error).
    """
    c = _validate_weights(c, Y.n)
    if any(v <= 0 for v in c):
        raise ValueError("weights must be positive for the floor bound")
    subset = tuple(sorted(set(subset)))
    dim = estimate_dimension(Y)
    if len(subset) != dim + 1:
        raise ValueError(f"subset must have dim(Y)+1 = {dim + 1} indices")
    coords = [HomogeneousPolynomial.variable(Y.n + 1, i) for i in subset]
    verdict = certify_empty([Y.generators, coords])
    if not verdict.is_certified_empty:
        raise ValueError(
            f"coordinate intersection not certified empty: {verdict}"
        )
    delta = variety_degree(Y)
    e = chow_weight(F, c, seed)
    return Fraction(e) - delta * sum(c[i] for i in subset)
