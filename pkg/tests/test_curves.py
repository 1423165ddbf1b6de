"""Curve expressions: parsing, exact arithmetic, Wronskians, composition."""

from fractions import Fraction

import pytest

from nevsmt.curves import (
    CurveSyntaxError,
    EntireCurve,
    ExpPoly,
    PolyZ,
    QQi,
    parse_curve,
    parse_curve_component,
    poly_gcd,
    squarefree_decomposition,
    wronskian,
    compose_hypersurface,
)
from nevsmt.poly import parse_polynomial


def test_parse_polynomial_component():
    p = parse_curve_component("z^2 - 3/2*z + 1")
    assert isinstance(p, PolyZ)
    assert p.degree == 2
    assert p.coeffs[0] == QQi(Fraction(1))
    assert p.coeffs[1] == QQi(Fraction(-3, 2))


def test_parse_complex_literals():
    c = parse_curve_component("3/2 + 2i*z")
    assert c.coeffs[1] == QQi(Fraction(0), Fraction(2))
    assert parse_curve_component("i").coeffs[0] == QQi(Fraction(0), Fraction(1))
    assert parse_curve_component("2i").coeffs[0] == QQi(Fraction(0), Fraction(2))


def test_parse_exp():
    e = parse_curve_component("z*exp(z^2) - exp(z^2)")
    assert isinstance(e, ExpPoly)
    assert len(e.terms) == 1  # merged on the shared exponent
    q, p = e.terms[0]
    assert q.degree == 2 and p.degree == 1


def test_parse_errors():
    with pytest.raises(CurveSyntaxError):
        parse_curve_component("z +")
    with pytest.raises(CurveSyntaxError, match="polynomial"):
        parse_curve_component("exp(exp(z))")
    with pytest.raises(CurveSyntaxError):
        parse_curve_component("w + 1")


def test_component_round_trip():
    for text in ("z^2 - 3/2*z + 1", "(1 + 2i)*z^3 - i", "z*exp(2*z) + 1"):
        expr = parse_curve_component(text)
        assert parse_curve_component(str(expr)) == expr


def test_exppoly_zero_detection():
    a = parse_curve_component("exp(z) - exp(z)")
    assert a.is_zero
    b = parse_curve_component("exp(z)") * parse_curve_component("exp(-1*z)")
    assert b.is_polynomial and b.to_poly().degree == 0


def test_exppoly_derivative():
    e = parse_curve_component("z*exp(z^2)")
    d = e.derivative()
    expected = parse_curve_component("(2*z^2 + 1)*exp(z^2)")
    assert d == expected


def test_gcd_and_squarefree():
    a = parse_curve_component("z^2 - 1")
    b = parse_curve_component("z^2 - 2*z + 1")
    g = poly_gcd(a, b)
    assert str(g) == "z - 1"
    decomp = squarefree_decomposition(parse_curve_component("z^3*(z-2)^2"))
    assert sorted((f.degree, m) for f, m in decomp) == [(1, 2), (1, 3)]


def test_reduced_representation_enforced():
    with pytest.raises(ValueError, match="reduced"):
        parse_curve(["z", "z^2"])
    f = parse_curve(["1", "z", "z^2"])
    assert f.n == 2 and f.is_polynomial


def test_not_all_zero():
    with pytest.raises(ValueError, match="vanish"):
        EntireCurve((PolyZ(), PolyZ()))


def test_wronskian_examples():
    assert str(wronskian(parse_curve(["1", "z", "z^2"]))) == "2"
    assert wronskian(parse_curve(["1", "z", "2*z"])).is_zero
    w = wronskian(parse_curve(["1", "exp(z)"]))
    assert str(w) == "exp(z)"


def test_wronskian_mixed_promotion():
    # polynomial and exponential components mix by promotion
    f = parse_curve(["1", "z", "exp(z)"])
    w = wronskian(f)
    assert isinstance(w, ExpPoly)
    assert not w.is_zero


def test_wronskian_detects_dependence_with_exp():
    f = parse_curve(["exp(z)", "2*exp(z)"])
    assert wronskian(f).is_zero


def test_compose_hypersurface():
    f = parse_curve(["1", "z", "z^2"])
    Q = parse_polynomial("x0*x2 - x1^2", 3)
    assert compose_hypersurface(Q, f).is_zero  # the curve lies on the conic
    L = parse_polynomial("x0 + x1 + x2", 3)
    out = compose_hypersurface(L, f)
    assert str(out) == "z^2 + z + 1"


def test_compose_with_exp_curve():
    f = parse_curve(["1", "exp(z)"])
    Q = parse_polynomial("x0*x1", 2)
    out = compose_hypersurface(Q, f)
    assert isinstance(out, ExpPoly)
    assert str(out) == "exp(z)"


def test_evaluate_matches_numpy():
    import numpy as np

    expr = parse_curve_component("(1+i)*z^2 + exp(2*z)")
    zs = np.array([0.3 + 0.1j, -1.2j, 2.0 + 0.5j])
    arr = expr.eval_array(zs)
    for z, v in zip(zs, arr):
        assert abs(expr.evaluate(complex(z)) - v) < 1e-12 * max(1.0, abs(v))
