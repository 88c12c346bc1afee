from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diffclass.classifier import form_instance
from diffclass.eqmodel import (
    BranchAmbiguity,
    DifferenceEquation,
    MobiusTransform,
    NotF8,
    ParseError,
    UnsupportedConstant,
    apply_transform,
    dumps,
    normalize_equation,
    parse_coefficient,
    parse_equation,
    reduce_via_w,
)
from diffclass.exactalg import ETA, FieldScalar, PolyF, Surd, extract_roots

T = MobiusTransform


def P(*cs) -> PolyF:
    return PolyF([Surd.coerce(parse_coefficient(c) if isinstance(c, str) else c) for c in cs])


# --- parsing -----------------------------------------------------------------

def test_parse_polynomial_rhs():
    eq = parse_equation("f(z+1)^2 = 1 - f^2")
    assert eq.n == 2 and eq.P == P(1, 0, -1) and eq.Q == P(1)


def test_parse_rational_rhs():
    eq = parse_equation("f(z+1)^2 = (f^2-4)/(f^2-1)")
    assert (eq.n, eq.p, eq.q) == (2, 2, 2)
    assert eq.P == P(-4, 0, 1) and eq.Q == P(-1, 0, 1)


def test_parse_negative_power():
    eq = parse_equation("f(z+1)^3 = 1 - f^-3")
    assert eq.P == P(-1, 0, 0, 1) and eq.Q == P(0, 0, 0, 1)


def test_parse_makes_coprime_and_monic():
    eq = parse_equation("f(z+1)^2 = (2*f^2-2)/(3*f-3)")
    assert eq.Q == P(1) and eq.P == P(parse_coefficient("2/3"), parse_coefficient("2/3"))
    assert eq.Q.lc() == Surd.coerce(1)


def test_parse_coefficients_in_z_and_constants():
    eq = parse_equation("f(z+1) = (z^2 + i)*f + sqrt3*eta")
    assert eq.P.coeff(1) == parse_coefficient("z^2+i")
    assert eq.P.coeff(0) == Surd.coerce(FieldScalar(0, 0, 1) * ETA)


def test_parse_sqrt_of_expression():
    eq = parse_equation("f(z+1)^2 = -(f^2 - sqrt(8)*f + 1)/(f^2 + sqrt(8)*f + 1)")
    assert str(eq.Q.coeff(1)) == "2*sqrt(2)"


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as info:
        parse_equation("f(z+1)^2 = 1 - (f")
    assert info.value.pos == 17 and "position 17" in str(info.value)


def test_parse_error_on_left_side():
    with pytest.raises(ParseError):
        parse_equation("f(z+2)^2 = f")


def test_unsupported_constant():
    with pytest.raises(UnsupportedConstant):
        parse_equation("f(z+1)^2 = sqrt2*f^2 + 1")


def test_zero_rhs_rejected():
    with pytest.raises(ParseError):
        parse_equation("f(z+1)^2 = f - f")


texts = st.sampled_from([
    "f(z+1)^2 = 1 - f^2",
    "f(z+1)^2 = (f^2-4)/(f^2-1)",
    "f(z+1)^3 = 1 - f^-3",
    "f(z+1) = (2*f+1)/(f+3)",
    "f(z+1)^2 = eta^2*(f^2-1)",
    "f(z+1)^2 = -(f^2 - z^2)*(z+1)^2/z^2",
    "f(z+1)^2 = ((z+1)*f^2 - i)/(f^2 - sqrt3*z)",
    "f(z+1)^4 = (f-1)^2*(f-2)*(f-3)/(f-5)^4",
    "f(z+1)^2 = (f^2 - sqrt(2+2*i*sqrt3)*f + 1)/(f^2 + sqrt(2+2*i*sqrt3)*f + 1)",
])


@given(texts)
def test_render_parse_fixed_point(text):
    eq = parse_equation(text)
    again = parse_equation(eq.render())
    assert again == eq
    assert parse_equation(again.render()).render() == again.render()


@given(texts)
def test_json_roundtrip(text):
    eq = parse_equation(text)
    data = json.loads(dumps(eq.to_json()))
    assert DifferenceEquation.from_json(data) == eq


# --- transforms --------------------------------------------------------------

def test_scale_by_root():
    # c = -abar^2/a^2 with a = z gives f(z+1)^2 = 1 - f^2 after f -> z f
    eq = parse_equation("f(z+1)^2 = -(z+1)^2/z^2*(f-z)*(f+z)")
    z = parse_coefficient("z")
    assert apply_transform(eq, T.scale(z)) == form_instance("F1")


def test_invert_f1():
    # substituting f -> 1/f, fbar -> 1/fbar in fbar^2 = 1 - f^2 gives fbar^2 = f^2/(f^2 - 1)
    out = apply_transform(form_instance("F1"), T.invert())
    assert out == parse_equation("f(z+1)^2 = f^2/(f^2-1)")


def test_identity_unchanged():
    eq = parse_equation("f(z+1)^2 = (f^2-4)/(f^2-1)")
    assert apply_transform(eq, T.identity()) == eq


def test_branch_ambiguity():
    eq = parse_equation("f(z+1)^2 = (f^2-1)/(f-2)^2")
    with pytest.raises(BranchAmbiguity):
        apply_transform(eq, T.scale(parse_coefficient("sqrt(2)")))
    fixed = apply_transform(eq, T.scale(parse_coefficient("sqrt(2)")), branch="fixed")
    assert apply_transform(fixed, T.scale(parse_coefficient("sqrt(2)")).inverse(), branch="fixed") == eq


def test_transform_algebra():
    a = parse_coefficient("z")
    assert T.compose(T.invert(), T.invert()).is_identity()
    assert T.compose(T.scale(a), T.scale(a.inverse())).is_identity()
    assert str(T.compose(T.invert(), T.scale(2))) == "InverseScale(2)"
    assert T.from_json(json.loads(dumps(T.compose(T.scale(a), T.invert()).to_json()))) == \
        T.compose(T.scale(a), T.invert())


transforms = st.sampled_from([
    T.scale(2), T.scale(parse_coefficient("z")), T.scale(parse_coefficient("i*z+1")),
    T.invert(), T.inverse_scale(parse_coefficient("z-3")), T.scale(parse_coefficient("sqrt(z)")),
    T.compose(T.scale(parse_coefficient("1/z")), T.invert()),
])


@settings(max_examples=40, deadline=None)
@given(texts, transforms)
def test_transform_roundtrip(text, tr):
    eq = parse_equation(text)
    if eq.n % 2 and any(s.alpha is not None and not s.alpha.is_rational() for s in tr.steps()):
        # an odd power of sqrt(z+1) is not expressible over K(z, sqrt(z))
        with pytest.raises(BranchAmbiguity):
            apply_transform(eq, tr, branch="fixed")
        return
    there = apply_transform(eq, tr, branch="fixed")
    back = apply_transform(there, tr.inverse(), branch="fixed")
    assert back == eq


# --- normalization -----------------------------------------------------------

def test_normalize_gcd_two():
    n = normalize_equation(parse_equation("f(z+1)^4 = (f-1)^2*(f+1)^2"))
    assert n.multiplicity_gcd == 2
    assert {v.render() for v in n.variants} == {
        parse_equation("f(z+1)^2 = f^2-1").render(), parse_equation("f(z+1)^2 = 1-f^2").render()}


def test_normalize_unchanged():
    eq = parse_equation("f(z+1)^2 = 1 - f^2")
    n = normalize_equation(eq)
    assert n.multiplicity_gcd == 1 and list(n.variants) == [eq]


def test_normalize_gcd_six():
    n = normalize_equation(parse_equation("f(z+1)^6 = f^6/(f-1)^6"))
    assert n.multiplicity_gcd == 6 and len(n.variants) == 6
    zetas = {v.P.lc().ratfunc().const_value() for v in n.variants}
    assert zetas == set(FieldScalar.roots_of_unity(6))
    for v in n.variants:
        assert v.n == 1 and v.Q == P(-1, 1)


def test_normalize_numeric_only_variant():
    n = normalize_equation(parse_equation("f(z+1)^2 = 2*(f-1)^2"))
    assert n.multiplicity_gcd == 2
    assert n.numeric_only or len(n.variants) == 2


def _gcd_of(eq):
    from math import gcd
    g = 0
    for poly in (eq.P, eq.Q):
        if poly.degree >= 1:
            for _, m in extract_roots(poly).roots:
                g = gcd(g, m)
    return g


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([
    "f(z+1)^4 = (f-1)^2*(f+1)^2", "f(z+1)^6 = f^6/(f-1)^6", "f(z+1)^2 = 1-f^2",
    "f(z+1)^4 = (f-z)^2*(f+z)^2/(f-1)^4", "f(z+1)^6 = -(f-1)^3*(f-2)^3", "f(z+1)^4 = (f^2-z)^2",
]))
def test_variants_are_reduced(text):
    eq = parse_equation(text)
    n = normalize_equation(eq)
    for v in n.variants:
        assert _gcd_of(v) in (0, 1)
        assert v.p <= eq.n // n.multiplicity_gcd and v.q <= eq.n // n.multiplicity_gcd


# --- w = f + 1/f reduction ---------------------------------------------------

def test_reduce_via_w_theta_plus():
    k = parse_coefficient("sqrt(2+2*i*sqrt3)")
    out, desc = reduce_via_w(form_instance("F8", {"theta": 1, "kappa3": k}))
    # d1 = -kappa^2/4 = -(2 + 2 i sqrt3)/4
    d1 = parse_coefficient("-(2+2*i*sqrt3)/4")
    assert desc["target"] == "F2" and parse_coefficient(desc["d1"]) == d1
    assert out == form_instance("F2", {"delta1": d1})


def test_reduce_via_w_theta_minus():
    k = parse_coefficient("sqrt(8)")
    out, desc = reduce_via_w(form_instance("F8", {"theta": -1, "kappa3": k}))
    assert desc["target"] == "F4" and desc["d2"] == "2"
    assert out == form_instance("F4", {"delta3": 2})


def test_reduce_via_w_rejects_kappa_4():
    with pytest.raises(NotF8):
        reduce_via_w(parse_equation("f(z+1)^2 = (f^2-2*f+1)/(f^2+2*f+1)"))


def test_reduce_via_w_rejects_other_shapes():
    with pytest.raises(NotF8):
        reduce_via_w(parse_equation("f(z+1)^2 = 1 - f^2"))
