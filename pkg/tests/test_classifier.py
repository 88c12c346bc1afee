from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diffclass.classifier import (
    FORMS,
    admissible_constants,
    classify,
    classify_variant,
    form_instance,
    match_pn_q0,
    match_pn_qn,
    recognize,
    sssd10_predicate,
    verify_coefficient_relation,
)
from diffclass.eqmodel import BranchAmbiguity, MobiusTransform, apply_transform, parse_coefficient, parse_equation
from diffclass.exactalg import ETA, FieldScalar, Surd

T = MobiusTransform
I = FieldScalar(0, 1)
SQ3 = FieldScalar(0, 0, 1)

INSTANCES = {
    "F1": {}, "F2": {"delta1": ETA}, "F3": {"delta2": 2}, "F4": {"delta3": 2}, "F5": {},
    "F6": {"kappa1_sq": 4}, "F7": {"kappa2_sq": -1}, "F8": {"theta": 1, "kappa3": SQ3 + I},
    "F9": {}, "F10": {},
}

DISGUISES = [
    T.scale(2), T.scale(parse_coefficient("z")), T.scale(parse_coefficient("sqrt(2)")),
    T.invert(), T.inverse_scale(3), T.inverse_scale(parse_coefficient("z+1")),
    T.scale(I), T.scale(parse_coefficient("sqrt(z)")),
]


def cls(text: str):
    return classify(parse_equation(text))


# --- literal forms -----------------------------------------------------------

@pytest.mark.parametrize("form", list(INSTANCES))
def test_forms_classify_to_themselves(form):
    eq = form_instance(form, INSTANCES[form])
    r = classify(eq)
    assert r.verdict == "Form" and r.form == form
    assert r.primary.replay_ok()


def test_f1_example():
    r = cls("f(z+1)^2 = 1 - f^2")
    assert r.form == "F1" and r.transform.is_identity() and r.params == {}


def test_f6_example_params():
    r = cls("f(z+1)^2 = (f^2-4)/(f^2-1)")
    assert r.form == "F6" and r.params["kappa1_sq"] == Surd.coerce(4)


def test_f8_theta_minus_one():
    r = cls("f(z+1)^2 = -(f^2 - sqrt(8)*f + 1)/(f^2 + sqrt(8)*f + 1)")
    assert r.form == "F8" and r.params["theta"] == -1


def test_linear_and_riccati():
    r = cls("f(z+1) = 2*f + z")
    assert r.form == "LINEAR" and r.params["a1"] == Surd.coerce(2)
    r = cls("f(z+1) = (2*f+1)/(f+3)")
    assert r.form == "RICCATI" and r.params["b3"] == Surd.coerce(3)


def test_degenerate_riccati_not_covered():
    # b1*b3 - b2 = 0 collapses the map to a constant
    r = cls("f(z+1) = (2*f+6)/(f+3)")
    assert r.verdict != "Form"


def test_degree_mismatch():
    r = cls("f(z+1)^2 = f^4/(f^2-1)")
    assert r.verdict == "DegreeMismatch"


# --- disguises ---------------------------------------------------------------

@pytest.mark.parametrize("form", list(INSTANCES))
@pytest.mark.parametrize("tr", DISGUISES, ids=str)
def test_disguise_recovered(form, tr):
    target = form_instance(form, INSTANCES[form])
    if target.n % 2 and str(tr) == "Scale(sqrt(z))":
        # sqrt(z+1)^3 lies outside K(z, sqrt(z)), so no such disguise exists
        with pytest.raises(BranchAmbiguity):
            apply_transform(target, tr.inverse(), branch="fixed")
        return
    eq = apply_transform(target, tr.inverse(), branch="fixed")
    r = classify(eq)
    assert r.verdict == "Form" and r.form == form
    c = r.primary
    assert c.replay() == c.target
    # the recovered parameters give back a legitimate member of the form
    assert verify_coefficient_relation(form, c.params)
    assert form_instance(form, c.params) == c.target


def test_relation_failing_constants_rejected():
    # F2 with delta1 = 2 has the F2 shape but 2*3 + 1 != 0
    r = cls("f(z+1)^2 = 2*(f^2-1)")
    assert r.verdict != "Form" or r.form != "F2"
    # F7 with kappa2^2 = 4: 4*4 != 1
    r = cls("f(z+1)^2 = (4*f^2-1)/(f^2-1)")
    assert r.form != "F7"


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["F1", "F6", "F9", "F10", "F4"]),
       st.sampled_from(["2", "-3", "1/2", "i+1", "z", "z^2+1", "sqrt3"]))
def test_scale_equivariance(form, alpha):
    # classifying T(eq) gives the same form as classifying eq
    base = form_instance(form, INSTANCES[form])
    eq = apply_transform(base, T.scale(parse_coefficient(alpha)), branch="fixed")
    r = classify(eq)
    assert r.form == form and r.primary.replay_ok()


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(list(INSTANCES)))
def test_idempotent(form):
    eq = form_instance(form, INSTANCES[form])
    first = classify(eq).primary
    again = classify(first.target).primary
    assert again.form == first.form and again.transform.is_identity()


# --- impossibility fingerprints ----------------------------------------------

def _distinct_rationals(rng: random.Random, k: int) -> list[Fraction]:
    out: set[Fraction] = set()
    while len(out) < k:
        x = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        if x != 0:
            out.add(x)
    return list(out)


def _fmt(x: Fraction) -> str:
    return f"({x.numerator}/{x.denominator})"


@pytest.mark.parametrize("seed", range(6))
def test_shape_4211_q0(seed):
    a, b, c = _distinct_rationals(random.Random(seed), 3)
    r = cls(f"f(z+1)^4 = (f-{_fmt(a)})^2*(f-{_fmt(b)})*(f-{_fmt(c)})")
    assert r.verdict == "NoMeromorphicSolution"
    assert "cannot admit" in r.reason


@pytest.mark.parametrize("seed", range(6))
def test_shape_6321_q0(seed):
    a, b, c = _distinct_rationals(random.Random(100 + seed), 3)
    r = cls(f"f(z+1)^6 = (f-{_fmt(a)})^3*(f-{_fmt(b)})^2*(f-{_fmt(c)})")
    assert r.verdict == "NoMeromorphicSolution"


@pytest.mark.parametrize("seed", range(6))
def test_shapes_over_single_denominator_root(seed):
    a, b, c, d = _distinct_rationals(random.Random(200 + seed), 4)
    r = cls(f"f(z+1)^4 = (f-{_fmt(a)})^2*(f-{_fmt(b)})*(f-{_fmt(c)})/(f-{_fmt(d)})^4")
    assert r.verdict == "NoMeromorphicSolution"
    r = cls(f"f(z+1)^6 = (f-{_fmt(a)})^3*(f-{_fmt(b)})^2*(f-{_fmt(c)})/(f-{_fmt(d)})^6")
    assert r.verdict == "NoMeromorphicSolution"


def test_too_many_roots():
    r = cls("f(z+1)^5 = (f-1)*(f-2)*(f-3)*(f-4)*(f-5)")
    assert r.verdict == "NoMeromorphicSolution" and "> 4" in r.reason


def test_p_equals_n_with_small_q():
    r = cls("f(z+1)^2 = (f^2-4)/(f-1)")
    assert r.verdict == "NoMeromorphicSolution"


def test_irreducible_cubic_not_covered():
    r = cls("f(z+1)^3 = f^3 + f + 1")
    assert r.verdict == "NotCovered" and "UnsupportedFactorization" in r.reason


def test_matchers():
    assert match_pn_q0(parse_equation("f(z+1)^3 = 1 - f^3")).form == "F9"
    assert match_pn_q0(parse_equation("f(z+1)^2 = (f^2-4)/(f^2-1)")) is None
    assert match_pn_qn(parse_equation("f(z+1)^2 = (f^2-4)/(f^2-1)")).form == "F6"
    assert match_pn_qn(parse_equation("f(z+1)^4 = (f-1)^2*(f-2)*(f-3)/(f-5)^4")).verdict == \
        "NoMeromorphicSolution"


def test_multiplicity_gcd_variants():
    r = cls("f(z+1)^4 = (f^2-1)^2")
    assert r.multiplicity_gcd == 2
    forms = sorted(v.form or v.verdict for v in r.variants)
    # f(z+1)^2 = 1 - f^2 is F1; f(z+1)^2 = f^2 - 1 is F2 with delta1 = 1, which fails the relation
    assert "F1" in forms and r.form == "F1"


# --- coefficient relations ---------------------------------------------------

def test_admissible_f2():
    got = {str(p["delta1"]) for p in admissible_constants("F2")}
    assert got == {str(Surd.coerce(ETA)), str(Surd.coerce(ETA * ETA))}


def test_admissible_f4_f7():
    assert [p["delta3"] for p in admissible_constants("F4")] == [Surd.coerce(2)]
    assert [p["kappa2_sq"] for p in admissible_constants("F7")] == [Surd.coerce(-1)]


def test_admissible_f8():
    got = {(p["theta"], p["kappa3_sq"]) for p in admissible_constants("F8")}
    two = FieldScalar(2)
    want = {(1, Surd.coerce(two + 2 * I * SQ3)), (1, Surd.coerce(two - 2 * I * SQ3)), (-1, Surd.coerce(8))}
    assert got == want


def test_f8_relation_by_hand():
    # theta = 1: x^2 - 4x = -16 at x = 2 + 2i sqrt3: (2+2is)^2 = 4 - 12 + 8is = -8 + 8is; minus 4x = -16
    x = Surd.coerce(FieldScalar(2) + 2 * I * SQ3)
    assert x * x - x * 4 == Surd.coerce(-16)
    assert verify_coefficient_relation("F8", {"theta": 1, "kappa3_sq": x})
    assert not verify_coefficient_relation("F8", {"theta": 1, "kappa3_sq": 8})


def test_relation_reasons():
    res = verify_coefficient_relation("F2", {"delta1": 2})
    assert not res and "constant" in res.reason
    res = verify_coefficient_relation("F2", {"delta1": parse_coefficient("z")})
    assert not res and "non-constant" in res.reason
    assert not verify_coefficient_relation("F3", {"delta2": 1})
    assert verify_coefficient_relation("F3", {"delta2": parse_coefficient("z")})


def test_f6_constants_note():
    assert len(admissible_constants("F6")) == 0
    assert "kappa1" in admissible_constants("F6").note


def test_recognize_reads_params():
    params, _ = recognize(form_instance("F4", {"delta3": 2}), "F4")
    assert params == {"delta3": Surd.coerce(2)}
    params, why = recognize(form_instance("F1"), "F9")
    assert params is None and why


# --- the two-two discriminant predicate --------------------------------------

def test_sssd10_f6_instance():
    # F6 with kappa1^2 = 4: roots of P are +-2, roots of Q are +-1, c = 1
    assert sssd10_predicate(2, -2, 1, -1, 1)


def test_sssd10_false_case():
    assert not sssd10_predicate(2, -3, 1, -1, 1)


def test_sssd10_rejects_repeated_roots():
    with pytest.raises(ValueError):
        sssd10_predicate(1, 1, 2, 3, 1)


def test_all_forms_listed():
    assert FORMS[-10:] == tuple(f"F{k}" for k in range(1, 11))
    assert classify_variant(form_instance("F5")).form == "F5"
