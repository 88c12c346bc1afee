"""Difference equations f(z+1)^n = P(z,f)/Q(z,f): parsing, canonical text,
k-th root normalization and exact Mobius conjugation."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exactalg import (
    ETA,
    I,
    ONE,
    SQRT3,
    FieldDivisionByZero,
    FieldScalar,
    IncompatibleSurd,
    PolyF,
    PolyZ,
    RatFunc,
    RootStructure,
    Surd,
    extract_roots,
)
from .exactalg import SONE, SZERO  # noqa: F401  (re-exported for callers)

__all__ = [
    "ParseError",
    "UnsupportedConstant",
    "BranchAmbiguity",
    "NotF8",
    "DifferenceEquation",
    "MobiusTransform",
    "NormalizedEquation",
    "parse_equation",
    "parse_coefficient",
    "normalize_equation",
    "apply_transform",
    "reduce_via_w",
]


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class UnsupportedConstant(ValueError):
    def __init__(self, msg: str, pos: int = -1):
        super().__init__(msg if pos < 0 else f"{msg} at position {pos}")
        self.pos = pos


class BranchAmbiguity(ValueError):
    """The two branches of a surd scale give different equations."""


class NotF8(ValueError):
    pass


# ---------------------------------------------------------------------------
# the equation type

@dataclass(frozen=True, eq=False)
class DifferenceEquation:
    """f(z+1)^n = P/Q with P, Q coprime in f and Q monic."""

    n: int
    P: PolyF
    Q: PolyF
    text: str = ""

    @classmethod
    def from_ratio(cls, n: int, num: PolyF, den: PolyF, text: str = "",
                   coprime: bool = False) -> "DifferenceEquation":
        """Cancel the common factor of num and den (skipped when the caller
        knows they are coprime) and make den monic."""
        if n < 1:
            raise ValueError("n must be a positive integer")
        if num.is_zero() or den.is_zero():
            raise ValueError("numerator and denominator must be nonzero")
        if not coprime and num.degree > 0 and den.degree > 0:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
        c = den.lc()
        if not c.is_one():
            inv = c.inverse()
            num, den = num.scale(inv), den.scale(inv)
        eq = cls(n, num, den, text)
        if not text:
            object.__setattr__(eq, "text", eq.render())
        return eq

    @property
    def p(self) -> int:
        return self.P.degree

    @property
    def q(self) -> int:
        return self.Q.degree

    @property
    def c(self) -> Surd:
        return self.P.lc()

    def degree_R(self) -> int:
        return max(self.p, self.q)

    def is_rational(self) -> bool:
        return self.P.is_rational() and self.Q.is_rational()

    def __eq__(self, other) -> bool:
        if not isinstance(other, DifferenceEquation):
            return NotImplemented
        return self.n == other.n and self.P == other.P and self.Q == other.Q

    def __hash__(self) -> int:
        return hash((self.n, self.P, self.Q))

    def render(self) -> str:
        lhs = "f(z+1)" if self.n == 1 else f"f(z+1)^{self.n}"
        if self.Q.degree == 0:
            return f"{lhs} = {self.P.render()}"
        return f"{lhs} = ({self.P.render()})/({self.Q.render()})"

    def __str__(self) -> str:
        return self.render()

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "P": [str(c) for c in self.P.coeffs],
            "Q": [str(c) for c in self.Q.coeffs],
            "text": self.text,
        }

    @classmethod
    def from_json(cls, data: dict) -> "DifferenceEquation":
        P = PolyF([parse_coefficient(s) for s in data["P"]])
        Q = PolyF([parse_coefficient(s) for s in data["Q"]])
        return cls.from_ratio(int(data["n"]), P, Q, data.get("text", ""))

    def residual(self, z0: complex, f0: complex, f1: complex) -> complex:
        """f1^n * Q(z0, f0) - P(z0, f0)."""
        return f1 ** self.n * self.Q.eval_complex(z0, f0) - self.P.eval_complex(z0, f0)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


@dataclass
class _Tok:
    kind: str  # num, id, sym, end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            out.append(_Tok("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            out.append(_Tok("id", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            out.append(_Tok("sym", m.group(3), m.start(3)))
        pos = m.end()
    out.append(_Tok("end", "", len(text)))
    return out


class _Frac:
    """Rational expression in f: num/den as PolyF."""

    __slots__ = ("num", "den")

    def __init__(self, num: PolyF, den: Optional[PolyF] = None):
        self.num = num
        self.den = den if den is not None else PolyF([SONE])

    def _tidy(self) -> "_Frac":
        if self.den.degree > 0 and self.num.degree > 0:
            g = self.num.gcd(self.den)
            if g.degree > 0:
                return _Frac(self.num.exact_div(g), self.den.exact_div(g))
        return self

    def add(self, o: "_Frac", sign: int = 1) -> "_Frac":
        if self.den == o.den:
            return _Frac(self.num + o.num * sign, self.den)._tidy()
        return _Frac(self.num * o.den + o.num * self.den * sign, self.den * o.den)._tidy()

    def mul(self, o: "_Frac") -> "_Frac":
        return _Frac(self.num * o.num, self.den * o.den)._tidy()

    def div(self, o: "_Frac") -> "_Frac":
        if o.num.is_zero():
            raise FieldDivisionByZero("division by zero")
        return _Frac(self.num * o.den, self.den * o.num)._tidy()

    def pow(self, k: int) -> "_Frac":
        if k >= 0:
            return _Frac(self.num ** k, self.den ** k)
        if self.num.is_zero():
            raise FieldDivisionByZero("negative power of zero")
        return _Frac(self.den ** (-k), self.num ** (-k))

    def constant(self) -> Optional[Surd]:
        if self.num.degree <= 0 and self.den.degree == 0:
            return self.num.coeff(0) / self.den.coeff(0)
        return None


class _Parser:
    def __init__(self, text: str, allow_f: bool = True):
        self.text = text
        self.toks = _tokenize(text)
        self.k = 0
        self.allow_f = allow_f

    def peek(self) -> _Tok:
        return self.toks[self.k]

    def take(self) -> _Tok:
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, kind: str, text: Optional[str] = None) -> _Tok:
        t = self.take()
        if t.kind != kind or (text is not None and t.text != text):
            want = text if text is not None else kind
            got = t.text or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", t.pos)
        return t

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        t = self.peek()
        return t.kind == kind and (text is None or t.text == text)

    # grammar -----------------------------------------------------------
    def equation(self):
        self.expect("id", "f")
        self.expect("sym", "(")
        self.expect("id", "z")
        self.expect("sym", "+")
        one = self.expect("num")
        if one.text != "1":
            raise ParseError("only the unit shift f(z+1) is supported", one.pos)
        self.expect("sym", ")")
        n = 1
        if self.at("sym", "^"):
            self.take()
            t = self.expect("num")
            if "." in t.text or int(t.text) < 1:
                raise ParseError("exponent of f(z+1) must be a positive integer", t.pos)
            n = int(t.text)
        self.expect("sym", "=")
        rhs = self.expr()
        self.expect("end")
        return n, rhs

    def expr(self) -> _Frac:
        sign = 1
        if self.at("sym", "-") or self.at("sym", "+"):
            sign = -1 if self.take().text == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = _Frac(-acc.num, acc.den)
        while self.at("sym", "+") or self.at("sym", "-"):
            op = self.take().text
            acc = acc.add(self.term(), 1 if op == "+" else -1)
        return acc

    def term(self) -> _Frac:
        acc = self.factor()
        while self.at("sym", "*") or self.at("sym", "/"):
            op = self.take()
            rhs = self.factor()
            if op.text == "*":
                acc = acc.mul(rhs)
            else:
                try:
                    acc = acc.div(rhs)
                except FieldDivisionByZero:
                    raise ParseError("division by zero", op.pos) from None
        return acc

    def factor(self) -> _Frac:
        if self.at("sym", "-"):
            self.take()
            b = self.factor()
            return _Frac(-b.num, b.den)
        b = self.base()
        if self.at("sym", "^"):
            self.take()
            k = self.signed_int()
            try:
                b = b.pow(k)
            except FieldDivisionByZero:
                raise ParseError("negative power of zero", self.peek().pos) from None
        return b

    def signed_int(self) -> int:
        paren = False
        if self.at("sym", "("):
            self.take()
            paren = True
        sign = 1
        if self.at("sym", "-") or self.at("sym", "+"):
            sign = -1 if self.take().text == "-" else 1
        t = self.expect("num")
        if "." in t.text:
            raise ParseError("exponent must be an integer", t.pos)
        if paren:
            self.expect("sym", ")")
        return sign * int(t.text)

    def base(self) -> _Frac:
        t = self.take()
        if t.kind == "num":
            return _const(Surd.coerce(RatFunc(FieldScalar(Fraction(t.text)))))
        if t.kind == "sym" and t.text == "(":
            e = self.expr()
            self.expect("sym", ")")
            return e
        if t.kind == "id":
            name = t.text
            if name == "f":
                if not self.allow_f:
                    raise ParseError("f is not allowed in a coefficient", t.pos)
                return _Frac(PolyF.f())
            if name == "z":
                return _const(Surd.coerce(RatFunc.z()))
            if name == "i":
                return _const(Surd.coerce(I))
            if name == "sqrt3":
                return _const(Surd.coerce(SQRT3))
            if name == "eta":
                return _const(Surd.coerce(ETA))
            if name == "sqrt":
                self.expect("sym", "(")
                inner = self.expr()
                self.expect("sym", ")")
                c = inner.constant()
                if c is None or not c.is_rational():
                    raise UnsupportedConstant("sqrt() needs an f-free argument in K(z)", t.pos)
                return _const(Surd.sqrt_of(c.ratfunc()))
            if re.fullmatch(r"sqrt\d+", name):
                raise UnsupportedConstant(f"constant {name} is outside Q(i, sqrt3)", t.pos)
            raise ParseError(f"unknown symbol {name!r}", t.pos)
        got = t.text or "end of input"
        raise ParseError(f"unexpected {got!r}", t.pos)


def _const(c: Surd) -> _Frac:
    return _Frac(PolyF([c]))


def parse_equation(text: str) -> DifferenceEquation:
    """Parse 'f(z+1)^n = expr' into a normalized DifferenceEquation."""
    p = _Parser(text)
    try:
        n, rhs = p.equation()
    except IncompatibleSurd as exc:
        raise UnsupportedConstant(str(exc)) from None
    if rhs.num.is_zero():
        raise ParseError("right-hand side is identically zero", len(text))
    try:
        eq = DifferenceEquation.from_ratio(n, rhs.num, rhs.den, text)
        eq.P.common_w()
        eq.Q.common_w()
        if not eq.P.is_rational() or not eq.Q.is_rational():
            ws = {str(c.w) for c in eq.P.coeffs + eq.Q.coeffs if not c.v.is_zero()}
            if len(ws) > 1:
                raise IncompatibleSurd("numerator and denominator use different radicals")
    except IncompatibleSurd as exc:
        raise UnsupportedConstant(str(exc)) from None
    return eq


def parse_coefficient(text: str) -> Surd:
    """Parse an f-free expression into a Surd over K(z)."""
    p = _Parser(text, allow_f=False)
    try:
        e = p.expr()
        p.expect("end")
    except IncompatibleSurd as exc:
        raise UnsupportedConstant(str(exc)) from None
    c = e.constant()
    if c is None:
        raise ParseError("coefficient must be free of f", 0)
    return c


# ---------------------------------------------------------------------------
# transforms

@dataclass(frozen=True)
class MobiusTransform:
    """Change of unknown.  Scale(a): f = a*g.  InverseScale(a): f = 1/(a*g).
    Invert: f = 1/g.  Compose(T1, T2, ...): apply T1 first."""

    kind: str
    alpha: Optional[Surd] = None
    parts: tuple = ()

    def __post_init__(self):
        if self.kind in ("Scale", "InverseScale"):
            if self.alpha is None or Surd.coerce(self.alpha).is_zero():
                raise ValueError(f"{self.kind} needs a nonzero alpha")
            object.__setattr__(self, "alpha", Surd.coerce(self.alpha))
        elif self.kind == "Compose":
            if not self.parts:
                raise ValueError("Compose needs at least one transform")
        elif self.kind not in ("Identity", "Invert"):
            raise ValueError(f"unknown transform kind {self.kind!r}")

    @staticmethod
    def identity() -> "MobiusTransform":
        return MobiusTransform("Identity")

    @staticmethod
    def invert() -> "MobiusTransform":
        return MobiusTransform("Invert")

    @staticmethod
    def scale(alpha) -> "MobiusTransform":
        return MobiusTransform("Scale", Surd.coerce(alpha))

    @staticmethod
    def inverse_scale(alpha) -> "MobiusTransform":
        return MobiusTransform("InverseScale", Surd.coerce(alpha))

    @staticmethod
    def compose(*parts: "MobiusTransform") -> "MobiusTransform":
        return MobiusTransform("Compose", parts=tuple(parts)).simplify()

    def steps(self) -> list["MobiusTransform"]:
        if self.kind == "Compose":
            out = []
            for p in self.parts:
                out.extend(p.steps())
            return out
        if self.kind == "Identity":
            return []
        return [self]

    def inverse(self) -> "MobiusTransform":
        if self.kind in ("Identity", "Invert", "InverseScale"):
            return self
        if self.kind == "Scale":
            return MobiusTransform("Scale", self.alpha.inverse())
        return MobiusTransform("Compose", parts=tuple(p.inverse() for p in reversed(self.parts))).simplify()

    def simplify(self) -> "MobiusTransform":
        out: list[MobiusTransform] = []
        for s in self.steps():
            if s.kind == "Scale" and s.alpha.is_one():
                continue
            if out and out[-1].kind == "Invert" and s.kind == "Invert":
                out.pop()
                continue
            if out and out[-1].kind == "Scale" and s.kind == "Scale":
                prev = out.pop()
                a = prev.alpha * s.alpha
                if not a.is_one():
                    out.append(MobiusTransform("Scale", a))
                continue
            if out and out[-1].kind == "Invert" and s.kind == "Scale":
                prev = out.pop()
                out.append(MobiusTransform("InverseScale", s.alpha))
                continue
            out.append(s)
        if not out:
            return MobiusTransform("Identity")
        if len(out) == 1:
            return out[0]
        return MobiusTransform("Compose", parts=tuple(out))

    def to_json(self):
        if self.kind == "Compose":
            return {"kind": "Compose", "parts": [p.to_json() for p in self.parts]}
        if self.alpha is not None:
            return {"kind": self.kind, "alpha": str(self.alpha)}
        return {"kind": self.kind}

    @classmethod
    def from_json(cls, data) -> "MobiusTransform":
        kind = data["kind"]
        if kind == "Compose":
            return cls("Compose", parts=tuple(cls.from_json(p) for p in data["parts"]))
        if "alpha" in data:
            return cls(kind, parse_coefficient(data["alpha"]))
        return cls(kind)

    def __str__(self) -> str:
        if self.kind == "Compose":
            return " then ".join(str(p) for p in self.parts)
        if self.alpha is not None:
            return f"{self.kind}({self.alpha})"
        return self.kind

    def is_identity(self) -> bool:
        return self.simplify().kind == "Identity"


def _conjugate_step(eq: DifferenceEquation, T: MobiusTransform) -> DifferenceEquation:
    n = eq.n
    if T.kind == "Scale":
        a = T.alpha
        num = eq.P.scale_var(a)
        den = eq.Q.scale_var(a).scale(a.shift(1) ** n)
    elif T.kind in ("InverseScale", "Invert"):
        a = T.alpha if T.kind == "InverseScale" else SONE
        d = eq.degree_R()
        num = eq.Q.homogeneous_reverse(d, a)
        den = eq.P.homogeneous_reverse(d, a).scale(a.shift(1) ** n)
    else:
        raise ValueError(f"not a primitive transform: {T.kind}")
    # both substitutions preserve coprimality of P and Q
    return DifferenceEquation.from_ratio(n, num, den, coprime=True)


def apply_transform(eq: DifferenceEquation, T: MobiusTransform, branch: str = "strict") -> DifferenceEquation:
    """Rewrite eq in the new unknown g defined by T.

    With branch="strict" a surd alpha must give the same equation on both of
    its branches; branch="fixed" keeps the written branch and may return
    surd coefficients."""
    for step in T.steps():
        try:
            out = _conjugate_step(eq, step)
        except IncompatibleSurd as exc:
            raise BranchAmbiguity(f"{step}: {exc}") from None
        if branch == "strict" and step.alpha is not None and not step.alpha.is_rational():
            other = MobiusTransform(step.kind, step.alpha.conjugate())
            try:
                alt = _conjugate_step(eq, other)
            except IncompatibleSurd as exc:
                raise BranchAmbiguity(f"{other}: {exc}") from None
            if alt != out:
                raise BranchAmbiguity(f"{step}: the two branches of the surd give different equations")
        eq = out
    return eq


# ---------------------------------------------------------------------------
# k-th root normalization

@dataclass(frozen=True)
class NormalizedEquation:
    base: DifferenceEquation
    rootsP: Optional[RootStructure]
    rootsQ: Optional[RootStructure]
    multiplicity_gcd: int
    variants: tuple = ()
    zetas: tuple = ()
    numeric_only: tuple = ()
    notes: tuple = ()


def _multiplicities(P: PolyF) -> list[int]:
    if P.degree < 1:
        return []
    _, facs = P.squarefree()
    return [m for _, m in facs]


def _surd_kth_root(c: Surd, k: int) -> Optional[Surd]:
    try:
        return c.kth_root(k)
    except IncompatibleSurd:
        return None


def normalize_equation(eq: DifferenceEquation) -> NormalizedEquation:
    """Take the k-th root of both sides when every root multiplicity shares
    the factor k; one variant per k-th root of unity."""
    def roots(P):
        if P.degree < 1:
            return None
        try:
            return extract_roots(P)
        except IncompatibleSurd:
            return None

    rP, rQ = roots(eq.P), roots(eq.Q)
    ms = _multiplicities(eq.P) + _multiplicities(eq.Q)
    k = math.gcd(eq.n, *ms) if ms else 1
    if k == 1:
        return NormalizedEquation(eq, rP, rQ, 1, (eq,), (ONE,))
    lcP, facsP = eq.P.squarefree()
    _, facsQ = eq.Q.squarefree() if eq.Q.degree >= 1 else (SONE, [])
    Pk, Qk = PolyF([SONE]), PolyF([SONE])
    for g, m in facsP:
        Pk = Pk * g ** (m // k)
    for g, m in facsQ:
        Qk = Qk * g ** (m // k)
    croot = _surd_kth_root(lcP, k)
    notes = []
    if croot is None:
        notes.append(f"the {k}-th root of the leading coefficient {lcP} is not exact; variant is numeric-only")
        return NormalizedEquation(eq, rP, rQ, k, (), (), ((f"({lcP})^(1/{k})", Pk, Qk),), tuple(notes))
    try:
        zetas = FieldScalar.roots_of_unity(k)
    except ValueError:
        notes.append(f"the {k}-th roots of unity are not exact in Q(i, sqrt3); variant is numeric-only")
        return NormalizedEquation(eq, rP, rQ, k, (), (), ((f"zeta_{k}", Pk, Qk),), tuple(notes))
    variants = []
    for zeta in zetas:
        num = Pk.scale(croot * zeta)
        variants.append(DifferenceEquation.from_ratio(eq.n // k, num, Qk))
    return NormalizedEquation(eq, rP, rQ, k, tuple(variants), tuple(zetas), (), tuple(notes))


# ---------------------------------------------------------------------------
# the w = f + 1/f reduction

def _f8_parameters(eq: DifferenceEquation):
    if eq.n != 2 or eq.p != 2 or eq.q != 2:
        raise NotF8("not of shape f(z+1)^2 = theta(f^2 - k f + 1)/(f^2 + k f + 1)")
    Q, P = eq.Q, eq.P
    kappa = Q.coeff(1)
    theta = P.lc()
    if not Q.coeff(0).is_one() or kappa.is_zero():
        raise NotF8("denominator is not f^2 + kappa*f + 1 with kappa nonzero")
    if not (theta == SONE or theta == -SONE):
        raise NotF8("theta must be +1 or -1")
    expect = PolyF([SONE, -kappa, SONE]).scale(theta)
    if P != expect:
        raise NotF8("numerator is not theta*(f^2 - kappa*f + 1)")
    return kappa, 1 if theta == SONE else -1


def f8_relation_holds(kappa: Surd, theta: int) -> bool:
    k2 = kappa * kappa
    k2b = k2.shift(1)
    lhs = k2b * (k2 - 4)
    rhs = k2 * (2 * (1 - theta)) - 8 * (1 + theta)
    return lhs == rhs


def reduce_via_w(eq: DifferenceEquation):
    """Map an F8 instance through w = f + 1/f and then w -> kappa/w.

    Returns (reduced equation in the new unknown, descriptor)."""
    kappa, theta = _f8_parameters(eq)
    if not f8_relation_holds(kappa, theta):
        raise NotF8("kappa3 violates kappa3b^2 (kappa3^2 - 4) = 2(1-theta) kappa3^2 - 8(1+theta)")
    k2 = kappa * kappa
    # intermediate equation for w = f + 1/f
    mid_num = PolyF([k2 * (2 * (theta - 1)), SZERO, Surd.coerce(2 * (theta + 1))])
    mid_den = PolyF([-k2, SZERO, SONE])
    intermediate = DifferenceEquation.from_ratio(2, mid_num, mid_den)
    reduced = apply_transform(intermediate, MobiusTransform.inverse_scale(kappa.inverse()), branch="fixed")
    k2b = k2.shift(1)
    if theta == 1:
        d = -k2b * Fraction(1, 4)
        formula = DifferenceEquation.from_ratio(2, PolyF([-d, SZERO, d]), PolyF([SONE]))
        label = "d1"
    else:
        d = k2b * Fraction(1, 4)
        formula = DifferenceEquation.from_ratio(2, PolyF([-d, SZERO, d]), PolyF([SZERO, SZERO, SONE]))
        label = "d2"
    if reduced != formula:
        raise ArithmeticError("w-reduction disagrees with its closed form")
    descriptor = {
        "steps": ["w = f + 1/f", "w -> kappa3/w"],
        "theta": theta,
        "kappa3": str(kappa),
        "kappa3_sq": str(k2),
        "intermediate": intermediate.render(),
        label: str(d),
        "target": "F2" if theta == 1 else "F4",
    }
    return formula, descriptor


def dumps(obj) -> str:
    """Byte-stable JSON text."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2)
