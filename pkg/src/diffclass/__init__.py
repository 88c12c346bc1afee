"""Exact classification and numeric solution of first-order difference
equations f(z+1)^n = R(z, f) with rational coefficients."""

from __future__ import annotations

from .classifier import (
    FORMS,
    Classification,
    ClassificationReport,
    admissible_constants,
    classify,
    form_instance,
    sssd10_predicate,
    verify_coefficient_relation,
)
from .eqmodel import (
    DifferenceEquation,
    MobiusTransform,
    apply_transform,
    normalize_equation,
    parse_equation,
    reduce_via_w,
)
from .exactalg import FieldScalar, PolyF, PolyZ, RatFunc, Surd, extract_roots
from .solutions import (
    growth_estimate,
    qrt_orbit,
    riccati_closed_form,
    solve_form,
    squared_orbit_period,
    verify_orbit,
)
from .specfun import EllipticInvariants, fermat_pair, find_fermat_shift, periods, sn, wp

__version__ = "0.1.0"

__all__ = [
    "FORMS", "Classification", "ClassificationReport", "admissible_constants", "classify",
    "form_instance", "sssd10_predicate", "verify_coefficient_relation",
    "DifferenceEquation", "MobiusTransform", "apply_transform", "normalize_equation",
    "parse_equation", "reduce_via_w",
    "FieldScalar", "PolyF", "PolyZ", "RatFunc", "Surd", "extract_roots",
    "growth_estimate", "qrt_orbit", "riccati_closed_form", "solve_form",
    "squared_orbit_period", "verify_orbit",
    "EllipticInvariants", "fermat_pair", "find_fermat_shift", "periods", "sn", "wp",
]
