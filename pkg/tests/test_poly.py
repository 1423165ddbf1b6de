"""Homogeneous polynomial arithmetic, parsing and evaluation."""

import random
from fractions import Fraction

import mpmath
import pytest

from nevsmt.monomials import basis_size, monomial_basis
from nevsmt.poly import (
    HomogeneousPolynomial,
    PolynomialSyntaxError,
    eval_poly,
    parse_polynomial,
    poly_product,
)


def test_parse_examples():
    p = parse_polynomial("x0^2 + 2*x0*x1", 3)
    assert p.degree == 2 and len(p.terms) == 2
    q = parse_polynomial("3/2*x0*x1*x2", 3)
    assert q.degree == 3 and len(q.terms) == 1
    assert q.terms[(1, 1, 1)] == Fraction(3, 2)


def test_parse_non_homogeneous_rejected():
    with pytest.raises(ValueError, match="non-homogeneous"):
        parse_polynomial("x0 + x1^2", 2)


def test_parse_unknown_variable_position():
    with pytest.raises(PolynomialSyntaxError) as err:
        parse_polynomial("x0 + x5", 2)
    assert err.value.position == 5


def test_parse_syntax_error_position():
    with pytest.raises(PolynomialSyntaxError) as err:
        parse_polynomial("x0 + ", 2)
    assert err.value.position == 5


def test_product_examples():
    a = parse_polynomial("x0 + x1", 2)
    b = parse_polynomial("x0 - x1", 2)
    assert str(poly_product(a, b)) == "x0^2 - x1^2"
    unit = HomogeneousPolynomial.constant(2, 1)
    assert poly_product(a, unit) == a
    c = parse_polynomial("x0 + x1 + x2", 3)
    assert len((c * c).terms) == 6


def test_product_mismatched_nvars():
    with pytest.raises(ValueError, match="variables"):
        parse_polynomial("x0", 2) * parse_polynomial("x0", 3)


def test_eval_examples():
    p = parse_polynomial("x0^2 + x1^2", 2)
    assert abs(eval_poly(p, [1, 1j])) < 1e-30
    assert eval_poly(p, [3, 4]) == 25
    assert eval_poly(parse_polynomial("x0*x1", 2), [2, Fraction(1, 2)]) == 1


def test_eval_respects_precision():
    p = parse_polynomial("x0^2 - x1^2", 2)
    x = mpmath.mpf(1) / 3
    value = eval_poly(p, [x, x], precision=200)
    assert abs(value) < mpmath.mpf(2) ** -180


def _random_poly(rng, n_vars, degree, terms):
    basis = monomial_basis(n_vars, degree)
    chosen = {}
    for _ in range(terms):
        mono = rng.choice(basis)
        chosen[mono] = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    return HomogeneousPolynomial(n_vars, degree, chosen)


def test_homogeneity_closure_random():
    rng = random.Random(3)
    for _ in range(40):
        n_vars = rng.randint(2, 4)
        a = _random_poly(rng, n_vars, rng.randint(0, 3), 3)
        b = _random_poly(rng, n_vars, rng.randint(0, 3), 3)
        prod = a * b
        assert prod.degree == a.degree + b.degree
        for mono in prod.terms:
            assert sum(mono) == prod.degree


def test_evaluation_homogeneity_random():
    rng = random.Random(4)
    for _ in range(20):
        p = _random_poly(rng, 3, rng.randint(1, 3), 4)
        if p.is_zero:
            continue
        z = [complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(3)]
        lam = complex(rng.uniform(0.5, 2), rng.uniform(-1, 1))
        with mpmath.workprec(100):
            # the scaled points lam*z round to doubles, which caps the match
            left = eval_poly(p, [lam * zi for zi in z], precision=100)
            right = mpmath.mpc(lam) ** p.degree * eval_poly(p, z, precision=100)
            scale = max(1.0, abs(right))
            assert abs(left - right) / scale < 1e-12


def test_parse_print_round_trip_random():
    rng = random.Random(5)
    for _ in range(60):
        n_vars = rng.randint(1, 4)
        p = _random_poly(rng, n_vars, rng.randint(0, 4), rng.randint(1, 5))
        if p.is_zero:
            continue
        assert parse_polynomial(str(p), n_vars) == p


def test_monomial_basis_order():
    basis = monomial_basis(3, 2)
    assert len(basis) == 6 == basis_size(3, 2)
    assert basis[0] == (2, 0, 0)
    assert len(monomial_basis(2, 3)) == 4
    for m in (1, 2, 5):
        assert monomial_basis(3, m)[0] == (m, 0, 0)
    # strictly descending in the global (graded-lex, x0-heavy) order
    assert all(a > b for a, b in zip(basis, basis[1:]))


def test_zero_polynomial_degree_tag():
    z = HomogeneousPolynomial.zero(3, 5)
    assert z.is_zero and z.degree == 5
    p = parse_polynomial("x0^2", 3)
    assert (p * z).degree == 7
    assert (p + HomogeneousPolynomial.zero(3, 2)) == p


def test_power():
    p = parse_polynomial("x0 + x1", 2)
    assert p ** 3 == p * p * p
    assert (p ** 0) == HomogeneousPolynomial.constant(2, 1)
