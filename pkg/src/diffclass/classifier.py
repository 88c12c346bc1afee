"""Decision procedure: reduce f(z+1)^n = P/Q to a linear or Riccati equation,
to one of the ten normal forms F1..F10, or report that no meromorphic
solution exists or that the input lies outside the exact scope."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .eqmodel import (
    BranchAmbiguity,
    DifferenceEquation,
    MobiusTransform,
    apply_transform,
    normalize_equation,
    parse_coefficient,
    parse_equation,
)
from .exactalg import (
    ETA,
    SONE,
    SZERO,
    FieldScalar,
    IncompatibleSurd,
    PolyF,
    RatFunc,
    Surd,
    extract_roots,
)

__all__ = [
    "FORMS",
    "NORMAL_FORM_TEXT",
    "Classification",
    "ClassificationReport",
    "RelationResult",
    "ConstantList",
    "classify",
    "classify_variant",
    "match_pn_q0",
    "match_pn_qn",
    "sssd10_predicate",
    "verify_coefficient_relation",
    "admissible_constants",
    "form_instance",
    "recognize",
]

FORMS = ("LINEAR", "RICCATI", "F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8", "F9", "F10")

NORMAL_FORM_TEXT = {
    "LINEAR": "f(z+1) = a1*f + a2",
    "RICCATI": "f(z+1) = (b1*f + b2)/(f + b3)",
    "F1": "f(z+1)^2 = 1 - f^2",
    "F2": "f(z+1)^2 = delta1*(f^2 - 1)",
    "F3": "f(z+1)^2 = 1 - ((delta2*f - 1)/(f - delta2))^2",
    "F4": "f(z+1)^2 = delta3*(1 - f^-2)",
    "F5": "f(z+1)^2 = 1 - ((f + 3)/(f - 1))^2",
    "F6": "f(z+1)^2 = (f^2 - kappa1^2)/(f^2 - 1)",
    "F7": "f(z+1)^2 = (kappa2b^2*f^2 - 1)/(f^2 - 1)",
    "F8": "f(z+1)^2 = theta*(f^2 - kappa3*f + 1)/(f^2 + kappa3*f + 1)",
    "F9": "f(z+1)^3 = 1 - f^3",
    "F10": "f(z+1)^3 = 1 - f^-3",
}

_Q0_FORMS = ("F1", "F2", "F9")
_QN_FORMS = ("F3", "F4", "F5", "F6", "F7", "F8", "F10")
_ORDER = {name: k for k, name in enumerate(FORMS)}
_NOMERO = "NoMeromorphicSolution"


def _poly(*cs) -> PolyF:
    return PolyF([Surd.coerce(c) for c in cs])


def _coerce_params(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        if k == "theta":
            out[k] = int(v.ratfunc().const_value().c[0]) if isinstance(v, Surd) else int(v)
        else:
            out[k] = parse_coefficient(v) if isinstance(v, str) else Surd.coerce(v)
    return out


def _sq(x) -> Surd:
    x = Surd.coerce(x)
    return x * x


# ---------------------------------------------------------------------------
# normal form instances and their coefficient relations

def _mk(n: int, P: PolyF, Q: PolyF) -> DifferenceEquation:
    return DifferenceEquation.from_ratio(n, P, Q, coprime=True)


def form_instance(form: str, params: Optional[dict] = None) -> DifferenceEquation:
    """The normal form equation with the given exact parameters.  The
    templates are coprime for every nondegenerate parameter value."""
    ps = _coerce_params(params or {})
    g = ps.get
    if form == "LINEAR":
        return _mk(1, _poly(g("a2", SZERO), g("a1")), _poly(1))
    if form == "RICCATI":
        return _mk(1, _poly(g("b2"), g("b1", SZERO)), _poly(g("b3"), 1))
    if form == "F1":
        return _mk(2, _poly(1, 0, -1), _poly(1))
    if form == "F2":
        d = g("delta1")
        return _mk(2, _poly(-d, 0, d), _poly(1))
    if form == "F3":
        d = g("delta2")
        one_m = SONE - d * d
        return _mk(2, _poly(-one_m, 0, one_m), _poly(d * d, -d * 2, 1))
    if form == "F4":
        d = g("delta3")
        return _mk(2, _poly(-d, 0, d), _poly(0, 0, 1))
    if form == "F5":
        return _mk(2, _poly(-8, -8), _poly(1, -2, 1))
    if form == "F6":
        return _mk(2, _poly(-g("kappa1_sq"), 0, 1), _poly(-1, 0, 1))
    if form == "F7":
        kb = g("kappa2_sq").shift(1)
        return _mk(2, _poly(-1, 0, kb), _poly(-1, 0, 1))
    if form == "F8":
        k, th = g("kappa3"), int(ps["theta"])
        return _mk(2, _poly(1, -k, 1) * th, _poly(1, k, 1))
    if form == "F9":
        return _mk(3, _poly(1, 0, 0, -1), _poly(1))
    if form == "F10":
        return _mk(3, _poly(-1, 0, 0, 1), _poly(0, 0, 0, 1))
    raise ValueError(f"unknown normal form {form!r}")


@dataclass(frozen=True)
class RelationResult:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _relation_text(form: str) -> str:
    return {
        "F2": "delta1b*(delta1 + 1) + 1 = 0",
        "F4": "delta3b*delta3 = delta3b + delta3",
        "F6": "kappa1b^2 = kappa1^2",
        "F7": "kappa2b^2*kappa2^2 = 1",
        "F8": "kappa3b^2*(kappa3^2 - 4) = 2(1 - theta)*kappa3^2 - 8(1 + theta)",
    }.get(form, "")


def verify_coefficient_relation(form: str, params: dict) -> RelationResult:
    """Exact truth of the coefficient relation attached to a normal form."""
    ps = _coerce_params(params)

    def need(*names):
        missing = [n for n in names if n not in ps]
        if missing:
            raise KeyError(f"{form} needs parameters {missing}")

    def verdict(holds: bool, value: Surd, extra: str = "") -> RelationResult:
        if holds:
            return RelationResult(True, extra)
        if value.is_const():
            return RelationResult(False, f"{_relation_text(form)} fails for the constant {value}")
        return RelationResult(False, f"{_relation_text(form)} fails; a non-constant rational "
                                     f"coefficient {value} cannot satisfy it (it forces constancy)")

    if form in ("F1", "F5", "F9", "F10"):
        return RelationResult(True)
    if form == "LINEAR":
        need("a1")
        if ps["a1"].is_zero():
            return RelationResult(False, "a1 must be nonzero")
        return RelationResult(True)
    if form == "RICCATI":
        need("b1", "b2", "b3")
        det = ps["b1"] * ps["b3"] - ps["b2"]
        if det.is_zero():
            return RelationResult(False, "b1*b3 - b2 vanishes, the map is degenerate")
        return RelationResult(True)
    if form == "F2":
        need("delta1")
        d = ps["delta1"]
        return verdict((d.shift(1) * (d + 1) + 1).is_zero(), d)
    if form == "F3":
        need("delta2")
        d = ps["delta2"]
        if d == SONE or d == -SONE:
            return RelationResult(False, "delta2 must not be identically +1 or -1")
        return RelationResult(True)
    if form == "F4":
        need("delta3")
        d = ps["delta3"]
        if d.is_zero():
            return RelationResult(False, "delta3 must be nonzero")
        db = d.shift(1)
        return verdict(db * d == db + d, d)
    if form == "F6":
        need("kappa1_sq")
        k = ps["kappa1_sq"]
        if k.is_zero() or k.is_one():
            return RelationResult(False, "kappa1^2 must avoid 0 and 1")
        return verdict(k.shift(1) == k, k)
    if form == "F7":
        need("kappa2_sq")
        k = ps["kappa2_sq"]
        if k.is_one():
            return RelationResult(False, "kappa2^2 = 1 makes numerator and denominator equal")
        return verdict((k.shift(1) * k).is_one(), k)
    if form == "F8":
        need("theta")
        th = int(ps["theta"])
        if th not in (1, -1):
            return RelationResult(False, "theta must be +1 or -1")
        if "kappa3_sq" in ps:
            k2 = ps["kappa3_sq"]
        else:
            need("kappa3")
            k2 = _sq(ps["kappa3"])
        if "kappa3" in ps and _sq(ps["kappa3"]) != k2:
            return RelationResult(False, "kappa3 does not square to kappa3_sq")
        if k2.is_zero():
            return RelationResult(False, "kappa3 must be nonzero")
        lhs = k2.shift(1) * (k2 - 4)
        rhs = k2 * (2 * (1 - th)) - 8 * (1 + th)
        return verdict(lhs == rhs, k2)
    raise ValueError(f"unknown normal form {form!r}")


class ConstantList(list):
    """List of exact parameter sets, with a note for forms whose constant
    set is not a finite list."""

    def __init__(self, items=(), note: str = ""):
        super().__init__(items)
        self.note = note


def _const_roots(cs: list) -> list[Surd]:
    """Roots in K of a polynomial with constant coefficients, low first."""
    P = PolyF([Surd.coerce(c) for c in cs])
    rs = extract_roots(P)
    return [r for r, _ in rs.roots]


def admissible_constants(form: str) -> ConstantList:
    """Constant solutions of the coefficient relation of a normal form,
    obtained by solving the relation as a polynomial equation in K."""
    out = ConstantList()
    if form == "F2":
        # x*(x + 1) + 1 = 0
        for x in _const_roots([1, 1, 1]):
            out.append({"delta1": x})
    elif form == "F4":
        # x^2 = 2x, x != 0
        for x in _const_roots([0, -2, 1]):
            if not x.is_zero():
                out.append({"delta3": x})
    elif form == "F6":
        out.note = "any constant kappa1^2 outside {0, 1}"
    elif form == "F7":
        # x^2 = 1, x != 1
        for x in _const_roots([-1, 0, 1]):
            if not x.is_one():
                out.append({"kappa2_sq": x})
    elif form == "F8":
        for th in (1, -1):
            # x*(x - 4) = 2(1 - th)x - 8(1 + th), x != 0
            cs = [8 * (1 + th), -4 - 2 * (1 - th), 1]
            for x in _const_roots(cs):
                if not x.is_zero():
                    out.append({"theta": th, "kappa3_sq": x})
    else:
        out.note = f"{form} carries no coefficient relation"
        return out
    out.sort(key=lambda p: [(k, str(v)) for k, v in sorted(p.items())])
    for p in out:
        assert verify_coefficient_relation(form, p), (form, p)
    return out


# ---------------------------------------------------------------------------
# recognizers: is an equation literally a normal form instance?

def _shape(eq: DifferenceEquation) -> tuple:
    return (eq.n, eq.p, eq.q)


_SHAPES = {
    "F1": (2, 2, 0), "F2": (2, 2, 0), "F3": (2, 2, 2), "F4": (2, 2, 2), "F5": (2, 1, 2),
    "F6": (2, 2, 2), "F7": (2, 2, 2), "F8": (2, 2, 2), "F9": (3, 3, 0), "F10": (3, 3, 3),
}


def _read_params(form: str, eq: DifferenceEquation) -> dict:
    P, Q = eq.P, eq.Q
    if form == "LINEAR":
        return {"a1": P.coeff(1), "a2": P.coeff(0)}
    if form == "RICCATI":
        return {"b1": P.coeff(1), "b2": P.coeff(0), "b3": Q.coeff(0)}
    if form in ("F2", "F4"):
        return {"delta1" if form == "F2" else "delta3": P.lc()}
    if form == "F3":
        return {"delta2": -Q.coeff(1) * Fraction(1, 2)}
    if form == "F6":
        return {"kappa1_sq": -P.coeff(0)}
    if form == "F7":
        return {"kappa2_sq": P.lc().shift(-1)}
    if form == "F8":
        th = P.lc()
        if th == SONE:
            t = 1
        elif th == -SONE:
            t = -1
        else:
            raise ValueError("leading coefficient is not +1 or -1")
        k = Q.coeff(1)
        return {"theta": t, "kappa3": k, "kappa3_sq": _sq(k)}
    return {}


def recognize(eq: DifferenceEquation, form: str):
    """(params, "") when eq is exactly an instance of form, else (None, reason)."""
    if form in ("LINEAR", "RICCATI"):
        want = (1, 1, 0) if form == "LINEAR" else None
        if form == "LINEAR" and _shape(eq) != want:
            return None, "LINEAR needs n=1, p=1, q=0"
        if form == "RICCATI" and not (eq.n == 1 and eq.q == 1 and eq.p <= 1):
            return None, "RICCATI needs n=1, q=1, p<=1"
    else:
        if _shape(eq) != _SHAPES[form]:
            return None, f"{form} needs (n,p,q)={_SHAPES[form]}, got {_shape(eq)}"
    try:
        params = _read_params(form, eq)
        inst = form_instance(form, params)
    except (ValueError, IncompatibleSurd) as exc:
        return None, f"{form}: {exc}"
    if inst != eq:
        return None, f"{form}: coefficients differ from {NORMAL_FORM_TEXT[form]}"
    rel = verify_coefficient_relation(form, params)
    if not rel:
        return None, f"{form}: {rel.reason}"
    return params, ""


# ---------------------------------------------------------------------------
# verdicts

@dataclass
class Classification:
    verdict: str  # Form, NoMeromorphicSolution, NotCovered, DegreeMismatch
    form: Optional[str] = None
    transform: MobiusTransform = field(default_factory=MobiusTransform.identity)
    params: dict = field(default_factory=dict)
    reason: str = ""
    trace: list = field(default_factory=list)
    source: Optional[DifferenceEquation] = None
    target: Optional[DifferenceEquation] = None

    def replay(self) -> DifferenceEquation:
        if self.source is None:
            raise ValueError("no source equation recorded")
        return apply_transform(self.source, self.transform, branch="fixed")

    def replay_ok(self) -> bool:
        return self.verdict == "Form" and self.replay() == self.target

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "form": self.form,
            "transform": self.transform.to_json(),
            "params": {k: (v if isinstance(v, int) else str(v)) for k, v in sorted(self.params.items())},
            "reason": self.reason,
            "equation": self.source.render() if self.source is not None else None,
            "normal_form": self.target.render() if self.target is not None else None,
            "trace": list(self.trace),
        }


@dataclass
class ClassificationReport:
    input: DifferenceEquation
    multiplicity_gcd: int
    variants: list

    @property
    def primary(self) -> Classification:
        for v in self.variants:
            if v.verdict == "Form":
                return v
        return self.variants[0]

    @property
    def verdict(self) -> str:
        return self.primary.verdict

    @property
    def form(self) -> Optional[str]:
        return self.primary.form

    @property
    def transform(self) -> MobiusTransform:
        return self.primary.transform

    @property
    def params(self) -> dict:
        return self.primary.params

    @property
    def reason(self) -> str:
        return self.primary.reason

    def to_json(self) -> dict:
        return {
            "input": self.input.text or self.input.render(),
            "multiplicity_gcd": self.multiplicity_gcd,
            "variants": [v.to_json() for v in self.variants],
        }


# ---------------------------------------------------------------------------
# candidate search

def _squarefree_shape(P: PolyF) -> list[int]:
    """Multiset of root multiplicities, read off the squarefree split."""
    if P.degree < 1:
        return []
    _, facs = P.squarefree()
    out = []
    for A, m in facs:
        out.extend([m] * A.degree)
    return sorted(out, reverse=True)


def _roots(P: PolyF):
    if P.degree < 1:
        return [], PolyF([SONE])
    try:
        rs = extract_roots(P)
    except IncompatibleSurd:
        return [], P
    return [r for r, _ in rs.roots], rs.residual


def _candidate_scales(eq: DifferenceEquation) -> list[Surd]:
    rp, _ = _roots(eq.P)
    rq, _ = _roots(eq.Q)
    out: list[Surd] = []

    def add(x: Surd):
        if x.is_zero():
            return
        for y in (x, x.conjugate()):
            if y not in out:
                out.append(y)

    for r in rp + rq:
        add(r)
    if len(rp) == 2:
        try:
            s = (rp[0] * rp[1]).sqrt()
        except IncompatibleSurd:
            s = None
        if s is not None:
            add(s)
    return out


def _try(eq: DifferenceEquation, T: MobiusTransform, forms, trace: list, label: str):
    try:
        out = apply_transform(eq, T, branch="fixed")
    except (BranchAmbiguity, IncompatibleSurd) as exc:
        trace.append(f"{label}: transform rejected ({exc})")
        return [], []
    hits, misses = [], []
    for form in forms:
        if form not in ("LINEAR", "RICCATI") and _shape(out) != _SHAPES[form]:
            continue
        params, why = recognize(out, form)
        if params is not None:
            hits.append((form, T, params, out))
        else:
            misses.append(f"{label}: {why}")
    return hits, misses


def _search(eq: DifferenceEquation, forms, trace: list):
    """Try Identity, Invert and scales built from root data."""
    hits, misses = _try(eq, MobiusTransform.identity(), forms, trace, "Identity")
    if hits:
        return hits, misses
    bases = [(MobiusTransform.identity(), eq)]
    try:
        bases.append((MobiusTransform.invert(), apply_transform(eq, MobiusTransform.invert())))
    except (BranchAmbiguity, IncompatibleSurd):
        pass
    for pre, base in bases:
        cands = [MobiusTransform.scale(a) for a in _candidate_scales(base)]
        if pre.kind != "Identity":
            cands.insert(0, MobiusTransform.identity())
        for C in cands:
            T = MobiusTransform.compose(pre, C)
            h, m = _try(eq, T, forms, trace, str(T))
            hits.extend(h)
            misses.extend(m)
    return hits, misses


def _pick(eq: DifferenceEquation, hits, trace: list) -> Classification:
    def key(h):
        form, T, params, out = h
        return (0 if T.is_identity() else 1, _ORDER[form], out.render(), len(str(T)), str(T))

    hits = sorted(hits, key=key)
    best = hits[0]
    if len(hits) > 1:
        alts = sorted({f"{f} via {T}" for f, T, _, _ in hits[1:]})
        trace.append("other matches: " + "; ".join(alts))
    form, T, params, out = best
    trace.append(f"matched {form} via {T}")
    return Classification("Form", form, T, params, "", trace, eq, out)


def _sssd10_trace(eq: DifferenceEquation, trace: list):
    if _shape(eq) != (2, 2, 2):
        return
    rp, resP = _roots(eq.P)
    rq, resQ = _roots(eq.Q)
    if len(rp) != 2 or len(rq) != 2 or resP.degree > 0 or resQ.degree > 0:
        return
    if not all(r.is_rational() for r in rp + rq):
        return
    a1, a2 = (r.ratfunc() for r in rp)
    b1, b2 = (r.ratfunc() for r in rq)
    if len({str(x) for x in (a1, a2, b1, b2)}) < 4 or b1.is_zero() or b2.is_zero():
        return
    c = eq.c.ratfunc() if eq.c.is_rational() else None
    if c is None:
        return
    val = sssd10_predicate(a1, a2, b1, b2, c)
    trace.append(f"discriminant predicate at alpha1={a1}: {'vanishes' if val else 'nonzero'}")


# ---------------------------------------------------------------------------
# structural impossibility and scope checks

def _structural(eq: DifferenceEquation, trace: list, depth: int = 0) -> Optional[Classification]:
    n, p, q = eq.n, eq.p, eq.q
    sP, sQ = _squarefree_shape(eq.P), _squarefree_shape(eq.Q)
    dP, dQ = len(sP), len(sQ)

    def nomero(reason: str) -> Classification:
        trace.append(reason)
        return Classification(_NOMERO, reason=reason, trace=trace, source=eq)

    if dP + dQ > 4:
        return nomero(f"combined number of distinct roots of P and Q is {dP + dQ} > 4")
    if p == n and 1 <= q <= n - 1:
        return nomero(f"p = n = {n} with 1 <= q = {q} <= n - 1")
    zeroP = eq.P.coeff(0).is_zero()
    zeroQ = q >= 1 and eq.Q.coeff(0).is_zero()
    if depth >= 2:
        return None
    inv = None

    def inverted() -> Optional[DifferenceEquation]:
        nonlocal inv
        if inv is None:
            inv = apply_transform(eq, MobiusTransform.invert())
        return inv

    if q == n and p < n:
        if zeroQ:
            trace.append("q = n > p with 0 a root of Q: needs a translation outside f -> a*f, 1/(a*f)")
            return None
        trace.append("q = n > p: apply f -> 1/f")
        return _structural(inverted(), trace, depth + 1)
    if q == 0 and p == n:
        if dP >= 2 and zeroP:
            return nomero("P has two or more distinct roots and one of them vanishes identically")
        if dP == 2 and n >= 3:
            return nomero(f"two distinct roots of P with n = {n} >= 3 (shape {sP}) forces n = 2")
        if dP == 3 and ((n == 4 and sP == [2, 1, 1]) or (n == 6 and sP == [3, 2, 1])):
            return nomero(f"root shape {tuple(sP)} at n = {n}: cannot admit any meromorphic solutions")
        return None
    if p == q == n:
        if zeroP and dP >= 2:
            trace.append("0 is a root of P: apply f -> 1/f")
            return _structural(inverted(), trace, depth + 1)
        if dQ > dP and not zeroQ:
            trace.append("Q has more distinct roots than P: apply f -> 1/f")
            return _structural(inverted(), trace, depth + 1)
        if dQ == 1:
            if dP == 2 and n >= 3:
                return nomero(f"single root of Q and two roots of P at n = {n} >= 3 forces n = 2")
            if dP == 3 and ((n == 4 and sP == [2, 1, 1]) or (n == 6 and sP == [3, 2, 1])):
                return nomero(f"root shape {tuple(sP)} over a single denominator root at n = {n}: "
                              "cannot admit any meromorphic solutions")
        if dQ == 2 and n >= 3:
            return nomero(f"two roots of Q at n = {n} >= 3 forces n = 2")
    return None


# ---------------------------------------------------------------------------
# public entry points

def _degree_checks(eq: DifferenceEquation, trace: list) -> Optional[Classification]:
    n, d = eq.n, eq.degree_R()
    if d != n:
        reason = f"deg_f R = {d} differs from n = {n}"
        trace.append(reason)
        return Classification("DegreeMismatch", reason=reason, trace=trace, source=eq)
    return None


def _first_order(eq: DifferenceEquation, trace: list) -> Classification:
    form = "LINEAR" if eq.q == 0 else "RICCATI"
    params, why = recognize(eq, form)
    if params is None:
        return Classification("NotCovered", reason=why, trace=trace + [why], source=eq)
    trace.append(f"n = 1: {form}")
    return Classification("Form", form, MobiusTransform.identity(), params, "", trace, eq, eq)


def _not_covered(eq: DifferenceEquation, misses: list, trace: list) -> Classification:
    _, resP = _roots(eq.P)
    _, resQ = _roots(eq.Q)
    if resP.degree > 0 or resQ.degree > 0:
        deg = max(resP.degree, resQ.degree)
        reason = f"UnsupportedFactorization: a factor of degree {deg} in f has no roots in the exact field"
    else:
        reason = "no normal form template matched"
    shown = misses[:12]
    if len(misses) > len(shown):
        shown.append(f"... {len(misses) - len(shown)} more")
    return Classification("NotCovered", reason=reason, trace=trace + shown, source=eq)


def match_pn_q0(eq: DifferenceEquation) -> Optional[Classification]:
    """Match against F1, F2, F9 or the q = 0 impossibility shapes."""
    trace: list = []
    hits, _ = _search(eq, _Q0_FORMS, trace)
    if hits:
        return _pick(eq, hits, trace)
    if eq.q == 0 and eq.p == eq.n:
        s = _structural(eq, trace)
        if s is not None and s.verdict == _NOMERO:
            return s
    return None


def match_pn_qn(eq: DifferenceEquation) -> Optional[Classification]:
    """Match against F3..F8, F10 or the q = n impossibility shapes."""
    trace: list = []
    _sssd10_trace(eq, trace)
    hits, _ = _search(eq, _QN_FORMS, trace)
    if hits:
        return _pick(eq, hits, trace)
    if eq.q == eq.n:
        s = _structural(eq, trace)
        if s is not None and s.verdict == _NOMERO:
            return s
    return None


def classify_variant(eq: DifferenceEquation) -> Classification:
    """Classify one equation whose root multiplicities have gcd 1."""
    trace: list = []
    if eq.n == 1:
        if eq.degree_R() != 1:
            return _degree_checks(eq, trace)
        return _first_order(eq, trace)
    bad = _degree_checks(eq, trace)
    if bad is not None:
        return bad
    sP, sQ = _squarefree_shape(eq.P), _squarefree_shape(eq.Q)
    if len(sP) + len(sQ) > 4 or (eq.p == eq.n and 1 <= eq.q <= eq.n - 1):
        return _structural(eq, trace)
    _sssd10_trace(eq, trace)
    hits, misses = _search(eq, _Q0_FORMS + _QN_FORMS, trace)
    if hits:
        return _pick(eq, hits, trace)
    s = _structural(eq, trace)
    if s is not None:
        return s
    return _not_covered(eq, misses, trace)


def classify(eq) -> ClassificationReport:
    """Normalize by the multiplicity gcd and classify every variant."""
    if isinstance(eq, str):
        eq = parse_equation(eq)
    ne = normalize_equation(eq)
    variants = []
    if ne.multiplicity_gcd > 1:
        note = f"multiplicity gcd {ne.multiplicity_gcd}: took the {ne.multiplicity_gcd}-th root"
    else:
        note = ""
    for k, v in enumerate(ne.variants):
        c = classify_variant(v)
        if note:
            c.trace.insert(0, f"{note} with multiplier {ne.zetas[k]}")
        variants.append(c)
    for label, _, _ in ne.numeric_only:
        variants.append(Classification("NotCovered", reason=f"variant needs {label}, which is not exact "
                                       "in Q(i, sqrt3)", trace=list(ne.notes), source=None))
    return ClassificationReport(eq, ne.multiplicity_gcd, variants)


# ---------------------------------------------------------------------------
# the two-two discriminant predicate

def sssd10_predicate(a1, a2, b1, b2, c, which: str = "alpha1") -> bool:
    """Vanishing of the quartic in the shifted chosen root that decides the
    two-numerator-root, two-denominator-root case."""
    a1, a2, b1, b2, c = (RatFunc.coerce(x) if not isinstance(x, RatFunc) else x for x in (a1, a2, b1, b2, c))
    vals = [a1, a2, b1, b2]
    if len({str(x) for x in vals}) < 4:
        raise ValueError("roots must be pairwise distinct")
    if (b1 * b2).is_zero():
        raise ValueError("denominator roots must be nonzero")
    chosen = {"alpha1": a1, "alpha2": a2, "beta1": b1, "beta2": b2}[which]
    ab = chosen.shift(1)
    db = (b1 - b2) ** 2
    mid = (c * 2) * ((b1 - a2) * (a1 - b2) * 2 - (b1 - b2) * (a1 - a2)) / db
    const = c * c * (a1 - a2) ** 2 / db
    return (ab ** 4 - mid * ab ** 2 + const).is_zero()
