from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diffclass.eqmodel import parse_coefficient
from diffclass.exactalg import (
    ETA,
    INFINITY,
    FieldDivisionByZero,
    FieldScalar,
    PolyF,
    PolyZ,
    RatFunc,
    Surd,
    eval_complex,
    extract_roots,
    ratfunc_gcd_normalize,
    scalar_arithmetic,
    shift_z,
)

I = FieldScalar(0, 1)
SQ3 = FieldScalar(0, 0, 1)


def rf(text: str) -> RatFunc:
    return parse_coefficient(text).ratfunc()


def pz(text: str) -> PolyZ:
    r = rf(text)
    assert r.den.degree == 0
    return r.num


def fpoly(*cs) -> PolyF:
    return PolyF([Surd.coerce(c) for c in cs])


small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
scalars = st.builds(FieldScalar, small, small, small, small)
nonzero = scalars.filter(lambda x: not x.is_zero())


# --- scalar arithmetic -------------------------------------------------------

def test_i_squared():
    assert scalar_arithmetic(I, I, "mul") == FieldScalar(-1)


def test_eta_cubed_is_one():
    # by hand: eta^2 = (-1 - i sqrt3)/2 and eta * eta^2 = (1 + 3)/4 = 1
    eta2 = ETA * ETA
    assert eta2 == FieldScalar(Fraction(-1, 2), 0, 0, Fraction(-1, 2))
    assert eta2 * ETA == FieldScalar(1)


def test_sqrt3_times_i_sqrt3():
    assert SQ3 * FieldScalar(0, 0, 0, 1) == FieldScalar(0, 3)


def test_inverse_of_zero_is_an_error():
    with pytest.raises(FieldDivisionByZero):
        scalar_arithmetic(FieldScalar(0), None, "inv")


def test_equality_is_structural():
    assert scalar_arithmetic(FieldScalar(Fraction(2, 4)), FieldScalar(Fraction(1, 2)), "eq")
    assert not scalar_arithmetic(I, SQ3, "eq")


def test_coordinates_reduced():
    x = FieldScalar(Fraction(6, -4), 0, 0, 0)
    assert x.c[0] == Fraction(-3, 2) and x.c[0].denominator > 0


@given(scalars, scalars, scalars)
def test_associative_and_distributive(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c


@given(nonzero)
def test_inverse(a):
    assert a * a.inverse() == FieldScalar(1)


@given(scalars)
def test_embedding_is_a_ring_map(a):
    b = a * a + I
    assert abs(complex(b) - (complex(a) ** 2 + 1j)) < 1e-9 * (1 + abs(complex(b)))


def test_sqrt_in_field():
    assert FieldScalar(-3).sqrt() * FieldScalar(-3).sqrt() == FieldScalar(-3)
    assert FieldScalar(2).sqrt() is None


# --- polynomials and rational functions --------------------------------------

def test_gcd_linear():
    g, a, b = ratfunc_gcd_normalize(pz("z^2-1"), pz("z-1"))
    assert g == pz("z-1") and a == pz("z+1") and b == pz("1")


def test_gcd_equal():
    g, a, b = ratfunc_gcd_normalize(pz("z^2+1"), pz("z^2+1"))
    assert g == pz("z^2+1") and a == pz("1") and b == pz("1")


def test_gcd_euclid():
    # Euclid by hand: z^3 - z = (z^2 + z)(z - 1) + 0, so the gcd is z^2 + z
    g, a, b = ratfunc_gcd_normalize(pz("z^3-z"), pz("z^2+z"))
    assert g == pz("z^2+z") and a == pz("z-1") and b == pz("1")


def test_ratfunc_normalized():
    r = RatFunc(pz("2*z^2-2"), pz("4*z-4"))
    assert r == rf("(z+1)/2")
    assert r.num == pz("z/2+1/2") and r.den == pz("1")
    assert RatFunc(pz("z"), pz("2*z^2+2")).den == pz("z^2+1")


def test_shift_examples():
    assert shift_z(rf("z^2"), 1) == rf("z^2+2*z+1")
    assert shift_z(rf("1/z"), -1) == rf("1/(z-1)")
    assert shift_z(rf("(z+1)/(z-1)"), 2) == rf("(z+3)/(z+1)")


rat_exprs = st.sampled_from(["z", "z^2+1", "(z+1)/(z-2)", "i*z^3 - sqrt3", "1/(z^2+z+1)", "eta*z - 5/3"])


@given(rat_exprs, st.integers(-4, 4))
def test_shift_roundtrip(text, j):
    r = rf(text)
    assert shift_z(shift_z(r, j), -j) == r


@given(rat_exprs, st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_shift_matches_evaluation(text, z0):
    r = rf(text)
    a, b = eval_complex(shift_z(r, 1), z0), eval_complex(r, z0 + 1)
    if abs(b) > 1e6 or abs(a) > 1e6:
        return
    assert abs(a - b) <= 1e-12 * max(1.0, abs(b)) * 10


# --- roots -------------------------------------------------------------------

def test_roots_f2_minus_1():
    rs = extract_roots(fpoly(-1, 0, 1))
    assert sorted((str(r), m) for r, m in rs.roots) == [("-1", 1), ("1", 1)]
    assert rs.residual.degree == 0


def test_roots_with_multiplicity():
    z = parse_coefficient("z")
    P = fpoly(-z, 1) * fpoly(-z, 1) * fpoly(z, 1)
    rs = extract_roots(P)
    assert {(str(r), m) for r, m in rs.roots} == {("z", 2), ("-z", 1)}


def test_roots_conjugate_surd_pair():
    rs = extract_roots(fpoly(parse_coefficient("-z"), 0, 1))
    roots = {r for r, _ in rs.roots}
    s = Surd.sqrt_of(rf("z"))
    # quadratic formula oracle: f = +-sqrt(z)
    assert roots == {s, -s}
    assert s.u.is_zero() and s.v == RatFunc(1) and s.w == rf("z")
    assert s * s.conjugate() == Surd.coerce(rf("-z"))


def test_cubic_residual_is_kept():
    rs = extract_roots(fpoly(1, 1, 0, 1))
    assert rs.residual.degree == 3 and not rs.roots


lin_roots = st.lists(st.sampled_from(["0", "1", "-2", "z", "i*z+1", "eta", "sqrt3*z", "1/(z+1)"]),
                     min_size=1, max_size=3)


@settings(max_examples=20, deadline=None)
@given(lin_roots, st.sampled_from(["1", "3", "z", "-i"]))
def test_roots_reexpand(roots, lead):
    P = fpoly(parse_coefficient(lead))
    for r in roots:
        P = P * fpoly(-parse_coefficient(r), 1)
    rs = extract_roots(P)
    assert rs.expand() == P
    assert sum(m for _, m in rs.roots) + rs.residual.degree == P.degree


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from(["z", "z+1", "2", "i*z", "z^2+1"]), min_size=1, max_size=2))
def test_roots_reexpand_quadratics(ws):
    P = fpoly(1)
    for w in ws:
        P = P * fpoly(-parse_coefficient(w), 0, 1)
    assert extract_roots(P).expand() == P


# --- evaluation --------------------------------------------------------------

def test_eval_examples():
    assert eval_complex(rf("(z+1)/(z-1)"), 3) == 2
    assert eval_complex(Surd.sqrt_of(rf("z")), 4) == 2
    assert abs(eval_complex(rf("z^2"), 1 + 1j) - 2j) < 1e-15


def test_eval_pole_and_branch_cut():
    assert eval_complex(rf("1/(z-1)"), 1) == INFINITY
    val, cut = eval_complex(Surd.sqrt_of(rf("z")), -4 + 0j, report_branch=True)
    assert cut and val == 2j


def test_surd_arithmetic():
    s = Surd.sqrt_of(RatFunc(2))
    assert s * s == Surd.coerce(2)
    assert (1 + s).inverse() * (1 + s) == Surd.coerce(1)
    assert str(s) == "sqrt(2)"
    assert Surd.sqrt_of(RatFunc(8)) == s * 2
