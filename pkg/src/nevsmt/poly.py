"""Exact homogeneous polynomial arithmetic over the rationals.

A form is a sparse map from exponent tuples to nonzero ``Fraction``
coefficients.  Every stored monomial has the polynomial's declared degree;
the zero polynomial keeps an explicit degree tag so graded arithmetic stays
total.  Values are immutable after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from nevsmt.monomials import monomial_mul

DEFAULT_EVAL_PRECISION = 128


def _to_mpc(x):
    if isinstance(x, Fraction):
        return mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator)
    return mpmath.mpc(x)


class PolynomialSyntaxError(ValueError):
    """Parse failure; ``position`` is the 0-based offset into the input."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class HomogeneousPolynomial:
    n_vars: int
    degree: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for mono, coeff in self.terms.items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            if len(mono) != self.n_vars:
                raise ValueError(f"monomial {mono} has wrong arity")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            if sum(mono) != self.degree:
                raise ValueError(
                    f"monomial {mono} has degree {sum(mono)}, expected {self.degree}"
                )
            clean[tuple(mono)] = coeff
        object.__setattr__(self, "terms", clean)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n_vars, degree=0):
        return cls(n_vars, degree, {})

    @classmethod
    def constant(cls, n_vars, value):
        return cls(n_vars, 0, {(0,) * n_vars: Fraction(value)})

    @classmethod
    def variable(cls, n_vars, index):
        if not 0 <= index < n_vars:
            raise ValueError(f"unknown variable x{index} with n_vars={n_vars}")
        expo = tuple(1 if i == index else 0 for i in range(n_vars))
        return cls(n_vars, 1, {expo: Fraction(1)})

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        # zero polynomials of different declared degree compare equal
        if self.is_zero and other.is_zero:
            return self.n_vars == other.n_vars
        return (
            self.n_vars == other.n_vars
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n_vars, self.degree if self.terms else -1,
                     frozenset(self.terms.items())))

    # -- arithmetic ---------------------------------------------------------

    def _check_compatible(self, other):
        if self.n_vars != other.n_vars:
            raise ValueError("mismatched number of variables")

    def __add__(self, other):
        self._check_compatible(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.degree != other.degree:
            raise ValueError(
                f"cannot add forms of degree {self.degree} and {other.degree}"
            )
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + coeff
        return HomogeneousPolynomial(self.n_vars, self.degree, terms)

    def __neg__(self):
        return HomogeneousPolynomial(
            self.n_vars, self.degree, {m: -c for m, c in self.terms.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HomogeneousPolynomial):
            self._check_compatible(other)
            degree = self.degree + other.degree
            if self.is_zero or other.is_zero:
                return HomogeneousPolynomial.zero(self.n_vars, degree)
            terms = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    mono = monomial_mul(m1, m2)
                    terms[mono] = terms.get(mono, Fraction(0)) + c1 * c2
            return HomogeneousPolynomial(self.n_vars, degree, terms)
        coeff = Fraction(other)
        return HomogeneousPolynomial(
            self.n_vars, self.degree, {m: coeff * c for m, c in self.terms.items()}
        )

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if exponent < 0:
            raise ValueError("negative power")
        result = HomogeneousPolynomial.constant(self.n_vars, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def shift(self, mono):
        """Multiply by the monomial ``mono`` (exponent tuple)."""
        return HomogeneousPolynomial(
            self.n_vars,
            self.degree + sum(mono),
            {monomial_mul(m, mono): c for m, c in self.terms.items()},
        )

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, point, precision=DEFAULT_EVAL_PRECISION):
        """Arbitrary-precision complex evaluation.

        Guard digits beyond the requested precision:
        ``ceil(log2(term count)) + 4``, covering the summation error.
        """
        if len(point) != self.n_vars:
            raise ValueError("point length must equal n_vars")
        guard = max(1, len(self.terms)).bit_length() + 4
        with mpmath.workprec(precision + guard):
            values = [_to_mpc(x) for x in point]
            total = mpmath.mpc(0)
            for mono, coeff in self.terms.items():
                term = mpmath.mpc(
                    mpmath.mpf(coeff.numerator) / coeff.denominator
                )
                for x, e in zip(values, mono):
                    if e:
                        term *= x ** e
                total += term
            return +total

    # -- printing ------------------------------------------------------------

    def __str__(self):
        if self.is_zero:
            return "0"
        pieces = []
        for mono in sorted(self.terms, reverse=True):
            coeff = self.terms[mono]
            factors = [
                f"x{i}" if e == 1 else f"x{i}^{e}"
                for i, e in enumerate(mono)
                if e
            ]
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            pieces.append(("-" if coeff < 0 else "+", body))
        sign, body = pieces[0]
        out = body if sign == "+" else "-" + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"HomogeneousPolynomial({self.n_vars}, {self.degree}, {self})"


# -- parsing -----------------------------------------------------------------


class _Tokens:
    """Tokenizer for the polynomial grammar; whitespace insignificant."""

    def __init__(self, text):
        self.text = text
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self._skip_ws()
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]

    def take(self, char):
        if self.peek() == char:
            self.pos += 1
            return True
        return False

    def expect_nat(self, what):
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise PolynomialSyntaxError(f"expected {what}", start)
        return int(self.text[start:self.pos])


def _parse_factor(tok, n_vars):
    start = tok.pos
    if not tok.take("x"):
        raise PolynomialSyntaxError("expected a variable", tok.pos)
    index = tok.expect_nat("variable index")
    if index >= n_vars:
        raise PolynomialSyntaxError(f"unknown variable x{index}", start)
    power = 1
    if tok.take("^"):
        power = tok.expect_nat("exponent")
    return index, power


def _parse_term(tok, n_vars):
    """One signed-stripped term: coefficient and/or '*'-joined factors."""
    coeff = Fraction(1)
    expo = [0] * n_vars
    ch = tok.peek()
    if ch is None:
        raise PolynomialSyntaxError("expected a term", tok.pos)
    saw_any = False
    if ch.isdigit():
        num = tok.expect_nat("coefficient")
        if tok.take("/"):
            den = tok.expect_nat("denominator")
            if den == 0:
                raise PolynomialSyntaxError("zero denominator", tok.pos - 1)
            coeff = Fraction(num, den)
        else:
            coeff = Fraction(num)
        saw_any = True
        if not tok.take("*"):
            return coeff, tuple(expo)
    while True:
        index, power = _parse_factor(tok, n_vars)
        expo[index] += power
        saw_any = True
        if not tok.take("*"):
            break
    if not saw_any:
        raise PolynomialSyntaxError("empty term", tok.pos)
    return coeff, tuple(expo)


def parse_polynomial(text, n_vars):
    """Parse a homogeneous form over x0..x{n_vars-1}.

    Grammar: terms joined by '+'/'-'; a term is an optional rational
    coefficient and '*'-joined ``x<i>[^<nat>]`` factors.  Homogeneity is
    verified and violations are rejected.
    """
    tok = _Tokens(text)
    if tok.peek() is None:
        raise PolynomialSyntaxError("empty input", 0)
    terms = []
    sign = Fraction(1)
    if tok.take("-"):
        sign = Fraction(-1)
    else:
        tok.take("+")
    while True:
        coeff, expo = _parse_term(tok, n_vars)
        terms.append((sign * coeff, expo))
        ch = tok.peek()
        if ch is None:
            break
        if ch == "+":
            tok.take("+")
            sign = Fraction(1)
        elif ch == "-":
            tok.take("-")
            sign = Fraction(-1)
        else:
            raise PolynomialSyntaxError(f"unexpected character {ch!r}", tok.pos)
    degrees = {sum(expo) for coeff, expo in terms if coeff != 0}
    if len(degrees) > 1:
        raise ValueError(
            f"non-homogeneous input: mixes degrees {sorted(degrees)}"
        )
    degree = degrees.pop() if degrees else 0
    acc = {}
    for coeff, expo in terms:
        acc[expo] = acc.get(expo, Fraction(0)) + coeff
    return HomogeneousPolynomial(n_vars, degree, acc)


def poly_product(p, q):
    """Product of two forms with the same variable count; degrees add."""
    return p * q


def eval_poly(p, point, precision=DEFAULT_EVAL_PRECISION):
    return p.evaluate(point, precision)
