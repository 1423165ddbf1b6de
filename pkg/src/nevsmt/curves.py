"""Entire-curve components: exact expressions in one complex variable z.

Two expression classes, both with exact Gaussian-rational coefficients:

* ``PolyZ`` - univariate polynomials, dense coefficient tuples;
* ``ExpPoly`` - finite sums  sum_i p_i(z) * exp(q_i(z))  with polynomial
  p_i, q_i.

ExpPoly terms are merged on *identical* exponent polynomials.  Functions
exp(q) with pairwise distinct polynomial q are linearly independent over the
polynomial ring with algebraic coefficients, so an ExpPoly is zero exactly
when every merged coefficient polynomial is zero; that makes linear
(in)dependence and Wronskian vanishing exact decisions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np


class CurveSyntaxError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class QQi:
    """Gaussian rational re + im*i with exact Fraction parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __add__(self, other):
        return QQi(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return QQi(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __mul__(self, other):
        return QQi(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other):
        n2 = other.re * other.re + other.im * other.im
        if not n2:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QQi(
            (self.re * other.re + self.im * other.im) / n2,
            (self.im * other.re - self.re * other.im) / n2,
        )

    def __complex__(self):
        return complex(self.re) + 1j * complex(self.im)

    def to_mpc(self):
        return mpmath.mpc(
            mpmath.mpf(self.re.numerator) / self.re.denominator,
            mpmath.mpf(self.im.numerator) / self.im.denominator,
        )

    def sort_key(self):
        return (
            self.re.numerator,
            self.re.denominator,
            self.im.numerator,
            self.im.denominator,
        )

    def display_negative(self):
        """True when the value prints with a single leading minus sign."""
        return (not self.im and self.re < 0) or (not self.re and self.im < 0)

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            if self.im == 1:
                return "i"
            if self.im == -1:
                return "-i"
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        imag = "i" if mag == 1 else f"{mag}i"
        return f"({self.re}{sign}{imag})"


QQI_ZERO = QQi()
QQI_ONE = QQi(Fraction(1))


@dataclass(frozen=True)
class PolyZ:
    """Univariate polynomial in z; coefficients low-to-high, no trailing zeros."""

    coeffs: tuple = ()

    def __post_init__(self):
        cs = list(self.coeffs)
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def const(cls, value):
        if isinstance(value, QQi):
            return cls((value,))
        return cls((QQi(Fraction(value)),))

    @classmethod
    def variable(cls):
        return cls((QQI_ZERO, QQI_ONE))

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def leading(self):
        return self.coeffs[-1]

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (QQI_ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (QQI_ZERO,) * (n - len(other.coeffs))
        return PolyZ(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self):
        return PolyZ(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, QQi):
            return PolyZ(tuple(c * other for c in self.coeffs))
        if self.is_zero or other.is_zero:
            return PolyZ()
        out = [QQI_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return PolyZ(tuple(out))

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power")
        result = PolyZ.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def derivative(self):
        return PolyZ(
            tuple(
                c * QQi(Fraction(k))
                for k, c in enumerate(self.coeffs)
            )[1:]
        )

    def divmod(self, other):
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quot = [QQI_ZERO] * max(0, len(rem) - len(other.coeffs) + 1)
        dlead = other.leading
        dn = len(other.coeffs)
        while len(rem) >= dn:
            c = rem[-1] / dlead
            k = len(rem) - dn
            quot[k] = c
            for i, oc in enumerate(other.coeffs):
                rem[k + i] = rem[k + i] - c * oc
            while rem and not rem[-1]:
                rem.pop()
        return PolyZ(tuple(quot)), PolyZ(tuple(rem))

    def __floordiv__(self, other):
        q, r = self.divmod(other)
        if not r.is_zero:
            raise ValueError("inexact polynomial division")
        return q

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self):
        if self.is_zero:
            return self
        lead = self.leading
        return PolyZ(tuple(c / lead for c in self.coeffs))

    def trailing_order(self):
        """Order of vanishing at z = 0."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    # -- evaluation --

    def evaluate(self, z):
        total = 0j
        for c in reversed(self.coeffs):
            total = total * z + complex(c)
        return total

    def eval_array(self, zs):
        total = np.zeros_like(zs, dtype=complex)
        for c in reversed(self.coeffs):
            total = total * zs + complex(c)
        return total

    def eval_mpc(self, z):
        total = mpmath.mpc(0)
        for c in reversed(self.coeffs):
            total = total * z + c.to_mpc()
        return total

    def sort_key(self):
        return (len(self.coeffs),) + tuple(c.sort_key() for c in self.coeffs)

    def __str__(self):
        if self.is_zero:
            return "0"
        pieces = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            negative = c.display_negative()
            mag = -c if negative else c
            if k == 0:
                body = str(mag)
            else:
                zpart = "z" if k == 1 else f"z^{k}"
                if mag == QQI_ONE:
                    body = zpart
                else:
                    body = f"{mag}*{zpart}"
            pieces.append(("-" if negative else "+", body))
        sign, body = pieces[0]
        out = body if sign == "+" else "-" + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out


POLY_ZERO = PolyZ()
POLY_ONE = PolyZ.const(1)


def poly_gcd(a, b):
    """Monic gcd over the Gaussian rationals."""
    while not b.is_zero:
        a, b = b, a % b
    return a.monic() if not a.is_zero else a


def squarefree_decomposition(p):
    """Yun's algorithm: [(monic factor, multiplicity)], factors of degree >= 1."""
    if p.degree < 1:
        return []
    p = p.monic()
    dp = p.derivative()
    g = poly_gcd(p, dp)
    if g.degree == 0:
        return [(p, 1)]
    b = p // g
    c = dp // g
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree >= 1:
        a = poly_gcd(b, d)
        if a.degree >= 1:
            out.append((a.monic(), i))
        b = b // a
        c = d // a
        d = c - b.derivative()
        i += 1
    return out


@dataclass(frozen=True)
class ExpPoly:
    """Finite sum of p(z) * exp(q(z)) terms, merged on identical q."""

    terms: tuple = ()  # ((q: PolyZ, p: PolyZ), ...)

    def __post_init__(self):
        merged = {}
        for q, p in self.terms:
            if p.is_zero:
                continue
            if q in merged:
                merged[q] = merged[q] + p
            else:
                merged[q] = p
        cleaned = tuple(
            (q, p)
            for q, p in sorted(merged.items(), key=lambda qp: qp[0].sort_key())
            if not p.is_zero
        )
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def from_poly(cls, p):
        return cls(((POLY_ZERO, p),))

    @classmethod
    def const(cls, value):
        return cls.from_poly(PolyZ.const(value))

    @property
    def is_zero(self):
        return not self.terms

    @property
    def is_polynomial(self):
        return all(q.is_zero for q, _ in self.terms)

    def to_poly(self):
        if not self.is_polynomial:
            raise ValueError("not a plain polynomial")
        return self.terms[0][1] if self.terms else POLY_ZERO

    def __add__(self, other):
        if isinstance(other, PolyZ):
            other = ExpPoly.from_poly(other)
        return ExpPoly(self.terms + other.terms)

    def __neg__(self):
        return ExpPoly(tuple((q, -p) for q, p in self.terms))

    def __sub__(self, other):
        if isinstance(other, PolyZ):
            other = ExpPoly.from_poly(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PolyZ):
            other = ExpPoly.from_poly(other)
        out = []
        for q1, p1 in self.terms:
            for q2, p2 in other.terms:
                out.append((q1 + q2, p1 * p2))
        return ExpPoly(tuple(out))

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power")
        result = ExpPoly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def derivative(self):
        out = []
        for q, p in self.terms:
            out.append((q, p.derivative() + p * q.derivative()))
        return ExpPoly(tuple(out))

    def evaluate(self, z):
        total = 0j
        for q, p in self.terms:
            import cmath

            total += p.evaluate(z) * cmath.exp(q.evaluate(z))
        return total

    def eval_array(self, zs):
        total = np.zeros_like(zs, dtype=complex)
        for q, p in self.terms:
            total += p.eval_array(zs) * np.exp(q.eval_array(zs))
        return total

    def eval_mpc(self, z):
        total = mpmath.mpc(0)
        for q, p in self.terms:
            total += p.eval_mpc(z) * mpmath.exp(q.eval_mpc(z))
        return total

    def __str__(self):
        if self.is_zero:
            return "0"
        bits = []
        for q, p in self.terms:
            if q.is_zero:
                bits.append(str(p))
            else:
                head = "" if p == POLY_ONE else f"({p})*"
                bits.append(f"{head}exp({q})")
        return " + ".join(bits)


def as_exppoly(expr):
    return expr if isinstance(expr, ExpPoly) else ExpPoly.from_poly(expr)


def expression_derivative(expr):
    return expr.derivative()


def gcd_of_components(polys):
    g = POLY_ZERO
    for p in polys:
        g = poly_gcd(g, p)
        if g.degree == 0 and not g.is_zero:
            return g
    return g


@dataclass(frozen=True)
class EntireCurve:
    """Reduced representation of an entire curve into projective space."""

    components: tuple  # PolyZ | ExpPoly entries

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) < 2:
            raise ValueError("a curve needs at least two components")
        for c in comps:
            if not isinstance(c, (PolyZ, ExpPoly)):
                raise TypeError(f"unsupported expression class {type(c).__name__}")
        if all(c.is_zero for c in comps):
            raise ValueError("components must not all vanish")
        if all(isinstance(c, PolyZ) for c in comps):
            g = gcd_of_components([c for c in comps if not c.is_zero])
            if g.degree >= 1:
                raise ValueError(
                    f"not a reduced representation: common factor {g}"
                )
        object.__setattr__(self, "components", comps)

    @property
    def n(self):
        return len(self.components) - 1

    @property
    def is_polynomial(self):
        return all(isinstance(c, PolyZ) for c in self.components)

    def eval_array(self, zs):
        return np.stack([c.eval_array(zs) for c in self.components])

    def eval_mpc(self, z):
        return [c.eval_mpc(z) for c in self.components]

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"


def _det(rows):
    """Determinant by first-row cofactor expansion; entries share one algebra."""
    size = len(rows)
    if size == 1:
        return rows[0][0]
    total = None
    for col in range(size):
        entry = rows[0][col]
        if entry.is_zero:
            continue
        minor = [[row[c] for c in range(size) if c != col] for row in rows[1:]]
        piece = entry * _det(minor)
        if col % 2:
            piece = -piece
        total = piece if total is None else total + piece
    if total is None:
        return rows[0][0]  # a zero of the right class
    return total


def wronskian(curve):
    """Determinant of the derivative matrix of the components.

    Zero exactly when the components are linearly dependent over C.  Mixed
    polynomial/exponential components are promoted to the exponential class.
    """
    comps = curve.components
    if not curve.is_polynomial:
        comps = tuple(as_exppoly(c) for c in comps)
    rows = [list(comps)]
    for _ in range(curve.n):
        rows.append([c.derivative() for c in rows[-1]])
    return _det(rows)


def compose_hypersurface(Q, curve):
    """Q(f_0, ..., f_n) as a symbolic expression in z."""
    if Q.n_vars != curve.n + 1:
        raise ValueError("hypersurface/curve arity mismatch")
    comps = curve.components
    if curve.is_polynomial:
        const = PolyZ.const
        comps = list(comps)
    else:
        const = ExpPoly.const
        comps = [as_exppoly(c) for c in comps]
    total = None
    for mono, coeff in sorted(Q.terms.items()):
        term = const(coeff)
        for comp, e in zip(comps, mono):
            if e:
                term = term * comp ** e
        total = term if total is None else total + term
    if total is None:
        return const(0)
    return total


# -- parsing ------------------------------------------------------------------


class _CurveTokens:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def take(self, char):
        if self.peek() == char:
            self.pos += 1
            return True
        return False

    def take_word(self, word):
        self._skip_ws()
        end = self.pos + len(word)
        if self.text[self.pos:end] == word:
            nxt = self.text[end:end + 1]
            if not (nxt.isalnum() or nxt == "_"):
                self.pos = end
                return True
        return False

    def nat(self, what):
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise CurveSyntaxError(f"expected {what}", start)
        return int(self.text[start:self.pos])


def _parse_atom(tok):
    ch = tok.peek()
    if ch is None:
        raise CurveSyntaxError("unexpected end of input", tok.pos)
    if ch == "(":
        tok.take("(")
        inner = _parse_expr(tok)
        if not tok.take(")"):
            raise CurveSyntaxError("expected ')'", tok.pos)
        return inner
    if ch.isdigit():
        num = tok.nat("number")
        value = Fraction(num)
        if tok.take("/"):
            den = tok.nat("denominator")
            if den == 0:
                raise CurveSyntaxError("zero denominator", tok.pos - 1)
            value = Fraction(num, den)
        if tok.text[tok.pos:tok.pos + 1] == "i":
            tok.pos += 1
            return ExpPoly.const(QQi(Fraction(0), value))
        return ExpPoly.const(QQi(value))
    if tok.take_word("exp"):
        if not tok.take("("):
            raise CurveSyntaxError("expected '(' after exp", tok.pos)
        inner = _parse_expr(tok)
        if not tok.take(")"):
            raise CurveSyntaxError("expected ')'", tok.pos)
        if not inner.is_polynomial:
            raise CurveSyntaxError(
                "exponent must be a polynomial in z", tok.pos
            )
        return ExpPoly(((inner.to_poly(), POLY_ONE),))
    if tok.take_word("z"):
        return ExpPoly.from_poly(PolyZ.variable())
    if tok.take_word("i"):
        return ExpPoly.const(QQi(Fraction(0), Fraction(1)))
    raise CurveSyntaxError(f"unexpected character {ch!r}", tok.pos)


def _parse_factor(tok):
    atom = _parse_atom(tok)
    if tok.take("^"):
        power = tok.nat("exponent")
        atom = atom ** power
    return atom


def _parse_term(tok):
    value = _parse_factor(tok)
    while tok.take("*"):
        value = value * _parse_factor(tok)
    return value


def _parse_expr(tok):
    negate = False
    if tok.take("-"):
        negate = True
    else:
        tok.take("+")
    value = _parse_term(tok)
    if negate:
        value = -value
    while True:
        ch = tok.peek()
        if ch == "+":
            tok.take("+")
            value = value + _parse_term(tok)
        elif ch == "-":
            tok.take("-")
            value = value - _parse_term(tok)
        else:
            return value


def parse_curve_component(text):
    """Parse one component: polynomial grammar extended with z, a+bi literals
    and exp(polynomial)."""
    tok = _CurveTokens(text)
    if tok.peek() is None:
        raise CurveSyntaxError("empty input", 0)
    value = _parse_expr(tok)
    if tok.peek() is not None:
        raise CurveSyntaxError(
            f"unexpected character {tok.peek()!r}", tok.pos
        )
    return value.to_poly() if value.is_polynomial else value


def parse_curve(component_texts):
    return EntireCurve(tuple(parse_curve_component(t) for t in component_texts))
