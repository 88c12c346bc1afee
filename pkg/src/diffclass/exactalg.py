"""Exact arithmetic kernel.

Everything symbolic in the package lives over the constant field
K = Q(i, sqrt3).  On top of it sit dense univariate polynomials in z
(PolyZ), reduced rational functions in z (RatFunc), quadratic surds
u + v*sqrt(w) over K(z) (Surd) and polynomials in f whose coefficients are
surds (PolyF).  extract_roots factors a PolyF as far as the equation
classifier needs: linear factors and conjugate quadratic pairs.

All values are immutable.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Optional, Sequence, Union

import numpy as np

__all__ = [
    "FieldDivisionByZero",
    "IncompatibleSurd",
    "FieldScalar",
    "PolyZ",
    "RatFunc",
    "Surd",
    "PolyF",
    "RootStructure",
    "INFINITY",
    "is_infinite",
    "scalar_arithmetic",
    "ratfunc_gcd_normalize",
    "shift_z",
    "extract_roots",
    "eval_complex",
    "ONE",
    "ZERO",
    "I",
    "SQRT3",
    "ETA",
]

SQRT3_F = math.sqrt(3.0)
INFINITY = complex(math.inf, 0.0)


def is_infinite(x: complex) -> bool:
    return cmath.isinf(x)


class FieldDivisionByZero(ZeroDivisionError):
    """Raised when inverting the zero element of a field."""


class IncompatibleSurd(ValueError):
    """Two surds with inequivalent radicands met in one operation."""


# ---------------------------------------------------------------------------
# rational helpers

def _qsqrt(q: Fraction) -> Optional[Fraction]:
    """Exact square root of a non-negative rational, or None."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _squarefree_int(m: int) -> tuple[int, int]:
    """Split m > 0 as s*s*r with r squarefree; returns (s, r)."""
    s, r = 1, 1
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        s *= p ** (e // 2)
        r *= p ** (e % 2)
        p += 1 if p == 2 else 2
        if p > 100000:
            break
    r *= m
    return s, r


def _qi_mul(a: tuple, b: tuple) -> tuple:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _qi_sqrt(a: Fraction, b: Fraction) -> Optional[tuple]:
    """Square root of a + b*i inside Q(i)."""
    if b == 0:
        r = _qsqrt(a)
        if r is not None:
            return (r, Fraction(0))
        r = _qsqrt(-a)
        if r is not None:
            return (Fraction(0), r)
        return None
    mod = _qsqrt(a * a + b * b)
    if mod is None:
        return None
    x = _qsqrt((a + mod) / 2)
    if x is None or x == 0:
        return None
    y = b / (2 * x)
    return (x, y)


# ---------------------------------------------------------------------------
# the constant field

_Number = Union[int, Fraction]


_F0 = Fraction(0)


class FieldScalar:
    """Element c0 + c1*i + c2*sqrt3 + c3*i*sqrt3 of Q(i, sqrt3)."""

    __slots__ = ("c",)

    def __init__(self, c0: _Number = 0, c1: _Number = 0, c2: _Number = 0, c3: _Number = 0):
        self.c = (Fraction(c0), Fraction(c1), Fraction(c2), Fraction(c3))

    @classmethod
    def _of(cls, c: tuple) -> "FieldScalar":
        obj = object.__new__(cls)
        obj.c = c
        return obj

    @classmethod
    def coerce(cls, x) -> "FieldScalar":
        if isinstance(x, FieldScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to FieldScalar")

    # structure ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.c)

    def is_one(self) -> bool:
        return self.c == (1, 0, 0, 0)

    def is_rational(self) -> bool:
        return not (self.c[1] or self.c[2] or self.c[3])

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = FieldScalar(other)
        if not isinstance(other, FieldScalar):
            return NotImplemented
        return self.c == other.c

    def __hash__(self) -> int:
        return hash(self.c)

    def sort_key(self) -> tuple:
        return self.c

    # arithmetic --------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            a = self.c
            return FieldScalar._of((a[0] + other, a[1], a[2], a[3]))
        if not isinstance(other, FieldScalar):
            return NotImplemented
        a, b = self.c, other.c
        if not (a[1] or a[2] or a[3] or b[1] or b[2] or b[3]):
            return FieldScalar._of((a[0] + b[0], _F0, _F0, _F0))
        return FieldScalar._of((a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]))

    __radd__ = __add__

    def __neg__(self) -> "FieldScalar":
        a = self.c
        return FieldScalar._of((-a[0], -a[1], -a[2], -a[3]))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = FieldScalar(other)
        if not isinstance(other, FieldScalar):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return FieldScalar.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            a = self.c
            return FieldScalar._of((a[0] * other, a[1] * other, a[2] * other, a[3] * other))
        if not isinstance(other, FieldScalar):
            return NotImplemented
        a0, a1, a2, a3 = self.c
        b0, b1, b2, b3 = other.c
        if not (b1 or b2 or b3):
            if not (a1 or a2 or a3):
                return FieldScalar._of((a0 * b0, _F0, _F0, _F0))
            return FieldScalar._of((a0 * b0, a1 * b0, a2 * b0, a3 * b0))
        if not (a1 or a2 or a3):
            return FieldScalar._of((a0 * b0, a0 * b1, a0 * b2, a0 * b3))
        return FieldScalar._of((
            a0 * b0 - a1 * b1 + 3 * a2 * b2 - 3 * a3 * b3,
            a0 * b1 + a1 * b0 + 3 * (a2 * b3 + a3 * b2),
            a0 * b2 + a2 * b0 - (a1 * b3 + a3 * b1),
            a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1,
        ))

    __rmul__ = __mul__

    def inverse(self) -> "FieldScalar":
        if self.is_zero():
            raise FieldDivisionByZero("inverse of 0 in Q(i, sqrt3)")
        a0, a1, a2, a3 = self.c
        if not (a1 or a2 or a3):
            return FieldScalar(1 / a0)
        # self = A + B*sqrt3 with A, B in Q(i); 1/self = (A - B sqrt3)/(A^2 - 3B^2)
        A, B = (a0, a1), (a2, a3)
        AA, BB = _qi_mul(A, A), _qi_mul(B, B)
        n0, n1 = AA[0] - 3 * BB[0], AA[1] - 3 * BB[1]
        m = n0 * n0 + n1 * n1
        inv = (n0 / m, -n1 / m)
        p = _qi_mul(A, inv)
        q = _qi_mul(B, inv)
        return FieldScalar(p[0], p[1], -q[0], -q[1])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise FieldDivisionByZero("division by 0")
            return self * (Fraction(1) / Fraction(other))
        if not isinstance(other, FieldScalar):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return FieldScalar.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "FieldScalar":
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # automorphisms -----------------------------------------------------
    def conj_i(self) -> "FieldScalar":
        a = self.c
        return FieldScalar(a[0], -a[1], a[2], -a[3])

    def conj_sqrt3(self) -> "FieldScalar":
        a = self.c
        return FieldScalar(a[0], a[1], -a[2], -a[3])

    def embed(self, si: int = 1, st: int = 1) -> complex:
        a = self.c
        return complex(float(a[0]) + st * float(a[2]) * SQRT3_F,
                       si * float(a[1]) + si * st * float(a[3]) * SQRT3_F)

    def __complex__(self) -> complex:
        return self.embed()

    # roots -------------------------------------------------------------
    def sqrt(self) -> Optional["FieldScalar"]:
        """An exact square root in Q(i, sqrt3), or None."""
        a0, a1, a2, a3 = self.c
        if self.is_zero():
            return ZERO
        C, D = (a0, a1), (a2, a3)
        candidates = []
        if D == (0, 0):
            s = _qi_sqrt(*C)
            if s is not None:
                candidates.append(FieldScalar(s[0], s[1]))
            s = _qi_sqrt(C[0] / 3, C[1] / 3)
            if s is not None:
                candidates.append(FieldScalar(0, 0, s[0], s[1]))
        else:
            CC, DD = _qi_mul(C, C), _qi_mul(D, D)
            nrt = _qi_sqrt(CC[0] - 3 * DD[0], CC[1] - 3 * DD[1])
            if nrt is not None:
                for sg in (1, -1):
                    A = _qi_sqrt((C[0] + sg * nrt[0]) / 2, (C[1] + sg * nrt[1]) / 2)
                    if A is None or A == (0, 0):
                        continue
                    m2 = A[0] * A[0] + A[1] * A[1]
                    Ainv = (A[0] / m2, -A[1] / m2)
                    B = _qi_mul(D, Ainv)
                    candidates.append(FieldScalar(A[0], A[1], B[0] / 2, B[1] / 2))
        for x in candidates:
            if x * x == self:
                return x
        return None

    def kth_root(self, k: int) -> Optional["FieldScalar"]:
        """An exact k-th root in Q(i, sqrt3), or None."""
        if k <= 0:
            raise ValueError("k must be positive")
        if k == 1 or self.is_zero() or self.is_one():
            return self
        if k == 2:
            return self.sqrt()
        if k % 2 == 0:
            s = self.sqrt()
            if s is None:
                return None
            for t in (s, -s):
                r = t.kth_root(k // 2)
                if r is not None:
                    return r
            return None
        return self._root_numeric(k)

    def _root_numeric(self, k: int) -> Optional["FieldScalar"]:
        # A root x in K is pinned down by its four complex embeddings; each is
        # a k-th root of the matching embedding of self.  Try every
        # combination, rationalise the coordinates and confirm exactly.
        signs = ((1, 1), (-1, 1), (1, -1), (-1, -1))
        options = []
        for si, st in signs:
            y = self.embed(si, st)
            r = abs(y) ** (1.0 / k)
            t = cmath.phase(y) / k
            options.append([r * cmath.exp(1j * (t + 2 * math.pi * j / k)) for j in range(k)])
        for combo in itertools.product(*options):
            s0 = sum(combo) / 4
            s1 = sum(sg[0] * y for sg, y in zip(signs, combo)) / 4j
            s2 = sum(sg[1] * y for sg, y in zip(signs, combo)) / (4 * SQRT3_F)
            s3 = sum(sg[0] * sg[1] * y for sg, y in zip(signs, combo)) / (4j * SQRT3_F)
            scale = 1e-7 * (1 + max(abs(s0), abs(s1), abs(s2), abs(s3)))
            if max(abs(s0.imag), abs(s1.imag), abs(s2.imag), abs(s3.imag)) > scale:
                continue
            x = FieldScalar(*(Fraction(s.real).limit_denominator(10 ** 9) for s in (s0, s1, s2, s3)))
            if x ** k == self:
                return x
        return None

    @staticmethod
    def roots_of_unity(k: int) -> list["FieldScalar"]:
        """All k-th roots of unity, ordered by argument; k in {1,2,3,4,6}."""
        if k not in (1, 2, 3, 4, 6):
            raise ValueError(f"the {k}-th roots of unity do not all lie in Q(i, sqrt3)")
        zeta12 = FieldScalar(0, Fraction(1, 2), Fraction(1, 2), 0)
        step = zeta12 ** (12 // k)
        out, cur = [], ONE
        for _ in range(k):
            out.append(cur)
            cur = cur * step
        return out

    # text --------------------------------------------------------------
    def terms(self) -> list[tuple[int, str]]:
        """Signed monomials (sign, text) in grammar syntax."""
        names = ("", "i", "sqrt3", "i*sqrt3")
        out = []
        for q, name in zip(self.c, names):
            if q == 0:
                continue
            sign = 1 if q > 0 else -1
            aq = abs(q)
            if not name:
                txt = str(aq)
            elif aq == 1:
                txt = name
            else:
                txt = f"{aq}*{name}"
            out.append((sign, txt))
        return out

    def __str__(self) -> str:
        ts = self.terms()
        if not ts:
            return "0"
        parts = []
        for k, (sign, txt) in enumerate(ts):
            if k == 0:
                parts.append(txt if sign > 0 else "-" + txt)
            else:
                parts.append((" + " if sign > 0 else " - ") + txt)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"FieldScalar({str(self)!r})"


ZERO = FieldScalar(0)
ONE = FieldScalar(1)
I = FieldScalar(0, 1)
SQRT3 = FieldScalar(0, 0, 1)
ETA = FieldScalar(Fraction(-1, 2), 0, 0, Fraction(1, 2))


def scalar_arithmetic(a: FieldScalar, b: Optional[FieldScalar], op: str):
    """Field operation dispatcher: op is one of add, mul, inv, eq."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "eq":
        return a == b
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# dense univariate polynomials over a field of coefficients

class _DensePoly:
    """Shared Euclidean machinery; subclasses fix the coefficient type."""

    __slots__ = ("coeffs",)
    var = "x"

    def __init__(self, coeffs: Iterable = ()):
        cs = [self._coerce_coef(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def _coerce_coef(cls, c):
        raise NotImplementedError

    @classmethod
    def _czero(cls):
        raise NotImplementedError

    @classmethod
    def _cone(cls):
        raise NotImplementedError

    @classmethod
    def _raw(cls, cs: list):
        while cs and cs[-1].is_zero():
            cs.pop()
        obj = object.__new__(cls)
        obj.coeffs = tuple(cs)
        return obj

    @classmethod
    def const(cls, c):
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1):
        return cls([cls._czero()] * k + [cls._coerce_coef(c)])

    # structure ---------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def lc(self):
        return self.coeffs[-1] if self.coeffs else self._czero()

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self._czero()

    def __eq__(self, other) -> bool:
        if isinstance(other, type(self)):
            return self.coeffs == other.coeffs
        try:
            return self.coeffs == type(self).const(other).coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.coeffs))

    def _lift(self, other):
        if isinstance(other, type(self)):
            return other
        return type(self).const(other)

    # arithmetic --------------------------------------------------------
    def __add__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        cs = list(a)
        for k, c in enumerate(b):
            cs[k] = cs[k] + c
        return self._raw(cs)

    __radd__ = __add__

    def __neg__(self):
        return self._raw([-c for c in self.coeffs])

    def __sub__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, type(self)):
            try:
                c = self._coerce_coef(other)
            except TypeError:
                return NotImplemented
            return self.scale(c)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return self._raw([])
        cs = [self._czero()] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in enumerate(b):
                cs[i + j] = cs[i + j] + x * y
        return self._raw(cs)

    __rmul__ = __mul__

    def scale(self, c):
        if c.is_zero():
            return self._raw([])
        return self._raw([x * c for x in self.coeffs])

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out, base = type(self).const(self._cone()), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, other):
        if other.is_zero():
            raise FieldDivisionByZero("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        inv_lc = 1 / other.lc() if not other.lc().is_one() else None
        if len(r) - 1 < db:
            return self._raw([]), self
        q = [self._czero()] * (len(r) - db)
        bc = other.coeffs
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if c.is_zero():
                continue
            if inv_lc is not None:
                c = c * inv_lc
            q[k - db] = c
            for j in range(db + 1):
                r[k - db + j] = r[k - db + j] - c * bc[j]
        return self._raw(q), self._raw(r[:db] if db > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(self._lift(other))[0]

    def __mod__(self, other):
        return self.divmod(self._lift(other))[1]

    def exact_div(self, other):
        q, r = self.divmod(self._lift(other))
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def monic(self):
        if self.is_zero():
            return self
        c = self.lc()
        if c.is_one():
            return self
        inv = 1 / c
        return self._raw([x * inv for x in self.coeffs])

    def derivative(self):
        return self._raw([c * k for k, c in enumerate(self.coeffs)][1:])

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def __call__(self, x):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        return self._czero() if acc is None else acc

    def compose(self, other):
        """self(other) for a polynomial other of the same type."""
        acc = type(self)([])
        for c in reversed(self.coeffs):
            acc = acc * other + type(self).const(c)
        return acc

    def squarefree(self):
        """Yun decomposition: (lc, [(A_m, m), ...]) with A_m monic squarefree."""
        if self.is_zero():
            raise ValueError("squarefree decomposition of 0")
        lc = self.lc()
        f = self.monic()
        out = []
        if f.degree < 1:
            return lc, out
        fp = f.derivative()
        c = f.gcd(fp)
        w = f.exact_div(c)
        y = fp.exact_div(c)
        z = y - w.derivative()
        m = 1
        while w.degree >= 1:
            g = w.gcd(z)
            if g.degree >= 1:
                out.append((g, m))
            w = w.exact_div(g)
            y = z.exact_div(g)
            z = y - w.derivative()
            m += 1
        return lc, out

    def squarefree_part(self):
        lc, facs = self.squarefree()
        return reduce(lambda a, b: a * b, (g for g, _ in facs), type(self).const(self._cone()))

    def _coef_text(self, c) -> tuple[int, str, bool]:
        raise NotImplementedError

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            sign, txt, atomic = self._coef_text(c)
            mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
            if mono:
                if txt == "1":
                    body = mono
                else:
                    body = (txt if atomic else f"({txt})") + "*" + mono
            else:
                body = txt if atomic or len(self.coeffs) == 1 else f"({txt})"
            if not parts:
                parts.append(body if sign > 0 else "-" + body)
            else:
                parts.append((" + " if sign > 0 else " - ") + body)
        return "".join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.render()!r})"


class PolyZ(_DensePoly):
    """Polynomial in z over Q(i, sqrt3)."""

    __slots__ = ()
    var = "z"

    @classmethod
    def _coerce_coef(cls, c):
        return FieldScalar.coerce(c)

    @classmethod
    def _czero(cls):
        return ZERO

    @classmethod
    def _cone(cls):
        return ONE

    @classmethod
    def z(cls) -> "PolyZ":
        return cls([0, 1])

    def shift(self, j: int) -> "PolyZ":
        if j == 0 or self.degree < 1:
            return self
        return self.compose(PolyZ([j, 1]))

    def eval_complex(self, z0: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z0 + complex(c)
        return acc

    def kth_root(self, k: int) -> Optional["PolyZ"]:
        if self.is_zero():
            return self
        lc, facs = self.squarefree()
        if any(m % k for _, m in facs):
            return None
        r = lc.kth_root(k)
        if r is None:
            return None
        out = PolyZ([r])
        for g, m in facs:
            out = out * g ** (m // k)
        return out

    def _coef_text(self, c):
        ts = c.terms()
        if len(ts) == 1:
            return ts[0][0], ts[0][1], True
        return 1, str(c), False


def ratfunc_gcd_normalize(p: PolyZ, q: PolyZ):
    """(g, p/g, q/g) with g the monic gcd of p and q."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero polynomials")
    g = p.gcd(q)
    return g, p.exact_div(g), q.exact_div(g)


# ---------------------------------------------------------------------------
# rational functions in z

class RatFunc:
    """Reduced quotient num/den of PolyZ with den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        num = num if isinstance(num, PolyZ) else PolyZ.const(num)
        den = den if isinstance(den, PolyZ) else PolyZ.const(den)
        if den.is_zero():
            raise FieldDivisionByZero("rational function with zero denominator")
        if num.is_zero():
            num, den = num, PolyZ.const(ONE)
        elif den.degree == 0:
            c = den.lc()
            if not c.is_one():
                num = num.scale(1 / c)
            den = PolyZ.const(ONE)
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            c = den.lc()
            if not c.is_one():
                inv = 1 / c
                num, den = num.scale(inv), den.scale(inv)
        self.num, self.den = num, den

    @classmethod
    def _raw(cls, num: PolyZ, den: PolyZ) -> "RatFunc":
        obj = object.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @classmethod
    def coerce(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, PolyZ):
            return cls._raw(x, _PONE)
        if isinstance(x, (int, Fraction, FieldScalar)):
            return cls._raw(PolyZ.const(x), _PONE)
        raise TypeError(f"cannot coerce {type(x).__name__} to RatFunc")

    @classmethod
    def z(cls) -> "RatFunc":
        return cls._raw(PolyZ.z(), _PONE)

    # structure ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.den.degree == 0 and self.num.degree == 0 and self.num.lc().is_one()

    def is_const(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def const_value(self) -> FieldScalar:
        if not self.is_const():
            raise ValueError(f"{self} is not constant")
        return self.num.lc()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other) -> bool:
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    # arithmetic --------------------------------------------------------
    def __add__(self, other):
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den.degree == 0 and o.den.degree == 0:
            return RatFunc._raw(self.num + o.num, _PONE)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldScalar)):
            c = FieldScalar.coerce(other)
            if c.is_zero():
                return RatFunc._raw(PolyZ([]), _PONE)
            return RatFunc._raw(self.num.scale(c), self.den)
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den.degree == 0 and o.den.degree == 0:
            return RatFunc._raw(self.num * o.num, _PONE)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise FieldDivisionByZero("inverse of the zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc._raw(self.num ** k, self.den ** k)

    # operations --------------------------------------------------------
    def shift(self, j: int) -> "RatFunc":
        if j == 0:
            return self
        return RatFunc._raw(self.num.shift(j), self.den.shift(j))

    def eval_complex(self, z0: complex) -> complex:
        d = self.den.eval_complex(z0)
        n = self.num.eval_complex(z0)
        if d == 0:
            return INFINITY if n != 0 else complex(math.nan, math.nan)
        return n / d

    def kth_root(self, k: int) -> Optional["RatFunc"]:
        if self.is_zero():
            return self
        n = self.num.kth_root(k)
        if n is None:
            return None
        d = self.den.kth_root(k)
        if d is None:
            return None
        return RatFunc(n, d)

    def sqrt(self) -> Optional["RatFunc"]:
        return self.kth_root(2)

    def __str__(self) -> str:
        if self.den.degree == 0:
            return self.num.render()
        n = self.num.render()
        if len(self.num.coeffs) > 1 or len(self.num.lc().terms()) > 1:
            n = f"({n})"
        return f"{n}/({self.den.render()})"

    def __repr__(self) -> str:
        return f"RatFunc({str(self)!r})"

    def sort_key(self) -> str:
        return str(self)


_PONE = PolyZ([ONE])
RZERO = RatFunc(0)
RONE = RatFunc(1)


# ---------------------------------------------------------------------------
# quadratic surds over K(z)

def _normalize_radicand(v: RatFunc, w: RatFunc):
    """Return (v', w') with v*sqrt(w) = v'*sqrt(w') and w' a squarefree
    polynomial whose constant factor carries no square of K."""
    v = v / RatFunc._raw(w.den, _PONE)
    W = w.num * w.den
    lc, facs = W.squarefree()
    sq, rest = _PONE, _PONE
    for g, m in facs:
        if m // 2:
            sq = sq * g ** (m // 2)
        if m % 2:
            rest = rest * g
    v = v * RatFunc._raw(sq, _PONE)
    r = lc.sqrt()
    if r is not None:
        v = v * r
        lc = ONE
    elif lc.is_rational():
        q = lc.c[0]
        v = v * Fraction(1, q.denominator)
        m = q.numerator * q.denominator
        s, rr = _squarefree_int(abs(m))
        v = v * s
        if rr % 3 == 0:
            rr //= 3
            v = v * SQRT3
        if m < 0:
            v = v * I
        lc = FieldScalar(rr)
    return v, RatFunc._raw(rest.scale(lc), _PONE)


class Surd:
    """u + v*sqrt(w) with u, v, w in K(z); sqrt is a formal symbol whose
    numerical value is the principal branch of sqrt(w(z))."""

    __slots__ = ("u", "v", "w")

    def __init__(self, u=0, v=0, w=0):
        u, v, w = RatFunc.coerce(u), RatFunc.coerce(v), RatFunc.coerce(w)
        if v.is_zero() or w.is_zero():
            self.u, self.v, self.w = u, RZERO, RZERO
            return
        v, w = _normalize_radicand(v, w)
        if w.is_one():
            self.u, self.v, self.w = u + v, RZERO, RZERO
            return
        self.u, self.v, self.w = u, v, w

    @classmethod
    def _raw(cls, u: RatFunc, v: RatFunc, w: RatFunc) -> "Surd":
        obj = object.__new__(cls)
        if v.is_zero():
            obj.u, obj.v, obj.w = u, RZERO, RZERO
        else:
            obj.u, obj.v, obj.w = u, v, w
        return obj

    @classmethod
    def coerce(cls, x) -> "Surd":
        if isinstance(x, Surd):
            return x
        return cls._raw(RatFunc.coerce(x), RZERO, RZERO)

    @classmethod
    def sqrt_of(cls, r) -> "Surd":
        """sqrt(r) as a surd, exact when r is a square in K(z)."""
        r = RatFunc.coerce(r)
        s = r.sqrt()
        if s is not None:
            return cls._raw(s, RZERO, RZERO)
        return cls(0, 1, r)

    # structure ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.u.is_zero() and self.v.is_zero()

    def is_one(self) -> bool:
        return self.v.is_zero() and self.u.is_one()

    def is_rational(self) -> bool:
        return self.v.is_zero()

    def ratfunc(self) -> RatFunc:
        if not self.v.is_zero():
            raise ValueError(f"{self} is not in K(z)")
        return self.u

    def is_const(self) -> bool:
        return self.u.is_const() and self.v.is_const() and self.w.is_const()

    def __eq__(self, other) -> bool:
        try:
            o = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        return self.u == o.u and self.v == o.v and self.w == o.w

    def __hash__(self) -> int:
        return hash((self.u, self.v, self.w))

    def conjugate(self) -> "Surd":
        return Surd._raw(self.u, -self.v, self.w)

    def _align(self, other: "Surd"):
        if other.v.is_zero() or self.v.is_zero() or self.w == other.w:
            w = self.w if not self.v.is_zero() else other.w
            return self, other, w
        r = (self.w / other.w).sqrt()
        if r is None:
            raise IncompatibleSurd(f"sqrt({self.w}) and sqrt({other.w}) are independent")
        return Surd._raw(self.u, self.v * r, other.w), other, other.w

    # arithmetic --------------------------------------------------------
    def __add__(self, other):
        try:
            o = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, w = self._align(o)
        return Surd._raw(a.u + b.u, a.v + b.v, w)

    __radd__ = __add__

    def __neg__(self) -> "Surd":
        return Surd._raw(-self.u, -self.v, self.w)

    def __sub__(self, other):
        try:
            o = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return Surd.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldScalar)):
            return Surd._raw(self.u * other, self.v * other, self.w)
        try:
            o = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        if o.v.is_zero():
            return Surd._raw(self.u * o.u, self.v * o.u, self.w)
        if self.v.is_zero():
            return Surd._raw(o.u * self.u, o.v * self.u, o.w)
        a, b, w = self._align(o)
        return Surd._raw(a.u * b.u + a.v * b.v * w, a.u * b.v + a.v * b.u, w)

    __rmul__ = __mul__

    def norm(self) -> RatFunc:
        return self.u * self.u - self.v * self.v * self.w

    def inverse(self) -> "Surd":
        if self.v.is_zero():
            return Surd._raw(self.u.inverse(), RZERO, RZERO)
        n = self.norm()
        if n.is_zero():
            raise FieldDivisionByZero("inverse of a zero surd")
        ninv = n.inverse()
        return Surd._raw(self.u * ninv, -self.v * ninv, self.w)

    def __truediv__(self, other):
        try:
            o = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return Surd.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "Surd":
        if k < 0:
            return self.inverse() ** (-k)
        out, base = SONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def sqrt(self) -> Optional["Surd"]:
        """An exact square root inside K(z)(sqrt w), else a new surd when self
        is in K(z), else None."""
        if self.v.is_zero():
            return Surd.sqrt_of(self.u)
        n = self.norm().sqrt()
        if n is None:
            return None
        for sg in (1, -1):
            p2 = (self.u + n * sg) * Fraction(1, 2)
            p = p2.sqrt()
            if p is None or p.is_zero():
                continue
            q = self.v / (p * 2)
            cand = Surd._raw(p, q, self.w)
            if cand * cand == self:
                return cand
        return None

    def kth_root(self, k: int) -> Optional["Surd"]:
        """An exact k-th root when one exists in K(z)(sqrt w), else None."""
        if k == 1:
            return self
        if self.v.is_zero():
            r = self.u.kth_root(k)
            return Surd._raw(r, RZERO, RZERO) if r is not None else None
        if k % 2 == 0:
            s = self.sqrt()
            return None if s is None else s.kth_root(k // 2)
        if self.u.is_zero():
            # (s*sqrt(w))^k = s^k * w^((k-1)/2) * sqrt(w) for odd k
            s = (self.v / self.w ** ((k - 1) // 2)).kth_root(k)
            return Surd._raw(RZERO, s, self.w) if s is not None else None
        return None

    # operations --------------------------------------------------------
    def shift(self, j: int) -> "Surd":
        if j == 0:
            return self
        if self.v.is_zero():
            return Surd._raw(self.u.shift(j), RZERO, RZERO)
        return Surd._raw(self.u.shift(j), self.v.shift(j), self.w.shift(j))

    def eval_complex(self, z0: complex, report_branch: bool = False):
        u = self.u.eval_complex(z0)
        if self.v.is_zero():
            return (u, False) if report_branch else u
        v = self.v.eval_complex(z0)
        w = self.w.eval_complex(z0)
        if cmath.isinf(u) or cmath.isinf(v) or cmath.isinf(w):
            val = INFINITY
        else:
            val = u + v * cmath.sqrt(w)
        if report_branch:
            on_cut = w.real < 0 and abs(w.imag) <= 1e-14 * max(1.0, abs(w))
            return val, on_cut
        return val

    def __str__(self) -> str:
        if self.v.is_zero():
            return str(self.u)
        vt = str(self.v)
        if vt == "1":
            rad = f"sqrt({self.w})"
        elif vt == "-1":
            rad = f"-sqrt({self.w})"
        elif self.v.is_const() and len(self.v.const_value().terms()) == 1:
            rad = f"{vt}*sqrt({self.w})"
        else:
            rad = f"({vt})*sqrt({self.w})"
        if self.u.is_zero():
            return rad
        return f"{self.u} + {rad}"

    def __repr__(self) -> str:
        return f"Surd({str(self)!r})"

    def sort_key(self) -> tuple:
        return (str(self.u), str(self.v), str(self.w))

    def _terms_single(self) -> Optional[tuple[int, str]]:
        if self.v.is_zero() and self.u.is_const():
            ts = self.u.const_value().terms()
            if len(ts) == 1:
                return ts[0]
        return None


SZERO = Surd._raw(RZERO, RZERO, RZERO)
SONE = Surd._raw(RONE, RZERO, RZERO)


# ---------------------------------------------------------------------------
# polynomials in f with surd coefficients

class PolyF(_DensePoly):
    """Polynomial in f whose coefficients are Surd values over K(z)."""

    __slots__ = ()
    var = "f"

    @classmethod
    def _coerce_coef(cls, c):
        return Surd.coerce(c)

    @classmethod
    def _czero(cls):
        return SZERO

    @classmethod
    def _cone(cls):
        return SONE

    @classmethod
    def f(cls) -> "PolyF":
        return cls._raw([SZERO, SONE])

    def common_w(self) -> RatFunc:
        w = RZERO
        for c in self.coeffs:
            if not c.v.is_zero():
                if w.is_zero():
                    w = c.w
                elif c.w != w:
                    raise IncompatibleSurd("polynomial mixes independent radicals")
        return w

    def is_rational(self) -> bool:
        return all(c.v.is_zero() for c in self.coeffs)

    def shift_z(self, j: int) -> "PolyF":
        return self._raw([c.shift(j) for c in self.coeffs])

    def conjugate(self) -> "PolyF":
        return self._raw([c.conjugate() for c in self.coeffs])

    def scale_var(self, alpha) -> "PolyF":
        """P(alpha*f)."""
        alpha = Surd.coerce(alpha)
        out, pw = [], SONE
        for c in self.coeffs:
            out.append(c * pw)
            pw = pw * alpha
        return self._raw(out)

    def homogeneous_reverse(self, d: int, alpha=None) -> "PolyF":
        """f^d * P(1/(alpha*f)), requiring d >= degree."""
        alpha = SONE if alpha is None else Surd.coerce(alpha)
        inv = alpha.inverse()
        out = [SZERO] * (d + 1)
        pw = SONE
        for k, c in enumerate(self.coeffs):
            out[d - k] = c * pw
            pw = pw * inv
        return self._raw(out)

    def eval_complex(self, z0: complex, f0: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * f0 + c.eval_complex(z0)
        return acc

    def complex_coeffs(self, z0: complex) -> list[complex]:
        return [c.eval_complex(z0) for c in self.coeffs]

    def _coef_text(self, c):
        single = c._terms_single()
        if single is not None:
            return single[0], single[1], True
        if c.v.is_zero() and c.u.den.degree == 0:
            nz = [(k, s) for k, s in enumerate(c.u.num.coeffs) if not s.is_zero()]
            if len(nz) == 1 and len(nz[0][1].terms()) == 1:
                k, s = nz[0]
                sign, txt = s.terms()[0]
                mono = "z" if k == 1 else f"z^{k}"
                return sign, (mono if txt == "1" else f"{txt}*{mono}"), True
        txt = str(c)
        atomic = c.v.is_zero() and c.u.den.degree == 0 and len(c.u.num.coeffs) == 1 \
            and len(c.u.num.lc().terms()) == 1
        return 1, txt, atomic


# ---------------------------------------------------------------------------
# root extraction

@dataclass(frozen=True)
class RootStructure:
    """P = lc * prod (f - root)^mult * residual, residual monic."""

    lc: Surd
    roots: tuple = ()
    residual: PolyF = field(default_factory=lambda: PolyF([SONE]))

    def distinct(self) -> int:
        return len(self.roots) + max(self.residual.degree, 0)

    def multiplicities(self) -> list[int]:
        return sorted((m for _, m in self.roots), reverse=True)

    def expand(self) -> PolyF:
        # Multiply factors with a shared radicand together first, so that
        # conjugate pairs collapse to K(z) before meeting other radicands.
        groups: dict = {}
        for r, m in self.roots:
            groups.setdefault(r.w, []).append((r, m))
        out = PolyF([self.lc]) * self.residual
        for _, items in sorted(groups.items(), key=lambda kv: str(kv[0])):
            g = PolyF([SONE])
            for r, m in items:
                g = g * PolyF([-r, SONE]) ** m
            try:
                out = out * g
            except IncompatibleSurd:
                g = PolyF([Surd.coerce(c.ratfunc()) for c in g.coeffs])
                out = out * g
        return out


def _quadratic_roots(A: PolyF) -> Optional[list]:
    b, c = A.coeff(1), A.coeff(0)
    disc = b * b - c * 4
    try:
        s = disc.sqrt()
        if s is None:
            return None
        half = Fraction(1, 2)
        return [(-b + s) * half, (-b - s) * half]
    except IncompatibleSurd:
        return None


def _constant_roots(cs: Sequence[FieldScalar]) -> list[FieldScalar]:
    """Roots in K of a polynomial with coefficients in K (low degree first)."""
    d = len(cs) - 1
    signs = ((1, 1), (-1, 1), (1, -1), (-1, -1))
    embedded = []
    for si, st in signs:
        embedded.append(np.roots([c.embed(si, st) for c in reversed(cs)]))
    poly = PolyZ(cs)
    found: list[FieldScalar] = []
    for y0 in embedded[0]:
        for rest in itertools.product(*embedded[1:]):
            combo = (y0,) + rest
            s0 = sum(combo) / 4
            s1 = sum(sg[0] * y for sg, y in zip(signs, combo)) / 4j
            s2 = sum(sg[1] * y for sg, y in zip(signs, combo)) / (4 * SQRT3_F)
            s3 = sum(sg[0] * sg[1] * y for sg, y in zip(signs, combo)) / (4j * SQRT3_F)
            scale = 1e-6 * (1 + max(abs(s0), abs(s1), abs(s2), abs(s3)))
            if max(abs(s0.imag), abs(s1.imag), abs(s2.imag), abs(s3.imag)) > scale:
                continue
            x = FieldScalar(*(Fraction(s.real).limit_denominator(10 ** 6) for s in (s0, s1, s2, s3)))
            if x not in found and poly(x).is_zero():
                found.append(x)
                break
        if len(found) == d:
            break
    return found


def _binomial_roots(A: PolyF) -> Optional[list]:
    d = A.degree
    if any(not A.coeff(k).is_zero() for k in range(1, d)):
        return None
    if d not in (3, 4, 6):
        return None
    r0 = (-A.coeff(0)).kth_root(d)
    if r0 is None:
        return None
    return [r0 * zeta for zeta in FieldScalar.roots_of_unity(d)]


def _linear_roots_high(A: PolyF) -> list:
    """Roots in K(z) of a monic squarefree A of degree >= 3 (best effort)."""
    d = A.degree
    shift = A.coeff(d - 1) * Fraction(1, d)
    B = A.compose(PolyF([-shift, SONE])) if not shift.is_zero() else A
    try:
        rs = _binomial_roots(B)
    except IncompatibleSurd:
        rs = None
    if rs is not None:
        return [r - shift for r in rs]
    for C, back in ((A, SZERO), (B, shift)):
        j = max((k for k in range(d) if not C.coeff(k).is_zero()), default=None)
        if j is None or not C.coeff(j).is_rational():
            continue
        a = C.coeff(j).ratfunc()
        lead = a.num.lc()
        s = (a / lead).kth_root(d - j)
        if s is None or s.is_zero():
            continue
        S = Surd.coerce(s)
        D = C.scale_var(S) * (S ** d).inverse()
        if all(c.is_rational() and c.is_const() for c in D.coeffs):
            consts = _constant_roots([c.u.const_value() if not c.u.is_zero() else ZERO
                                      for c in D.coeffs])
            if consts:
                return [S * x - back for x in consts]
    if all(c.is_rational() for c in A.coeffs):
        return _rational_roots_kz(A)
    return []


def _linear_factors_z(p: PolyZ) -> tuple[list, PolyZ]:
    """Linear factors (root, multiplicity) of p over K, and the cofactor."""
    out = []
    rest = PolyZ([p.lc()])
    _, facs = p.squarefree()
    for A, m in facs:
        roots = _constant_roots(list(A.coeffs)) if A.degree >= 1 else []
        for r in roots:
            A = A.exact_div(PolyZ([-r, ONE]))
            out.append((r, m))
        rest = rest * A ** m
    return out, rest


def _divisors(lin: list, rest: PolyZ, cap: int) -> Optional[list]:
    total = 1
    for _, m in lin:
        total *= m + 1
    if rest.degree > 0:
        total *= 2
    if total > cap:
        return None
    divs = [PolyZ([ONE])]
    for r, m in lin:
        lf = PolyZ([-r, ONE])
        divs = [d * lf ** e for d in divs for e in range(m + 1)]
    if rest.degree > 0:
        divs = divs + [d * rest.monic() for d in divs]
    return divs


def _rational_roots_kz(A: PolyF, cap: int = 2048) -> list:
    """Roots in K(z) of A with K(z) coefficients by the rational root test
    over K[z]: a root t*N/D in lowest terms has N | a_0 and D | a_d, and the
    constant t solves a polynomial system over K."""
    coeffs = [c.ratfunc() for c in A.coeffs]
    L = PolyZ([ONE])
    for c in coeffs:
        L = L * c.den.exact_div(L.gcd(c.den))
    a = [(c * RatFunc.coerce(L)).num for c in coeffs]
    d = len(a) - 1
    if a[0].is_zero():
        return [SZERO]
    num_div = _divisors(*_linear_factors_z(a[0]), cap)
    den_div = _divisors(*_linear_factors_z(a[d]), cap)
    if num_div is None or den_div is None or len(num_div) * len(den_div) > cap:
        return []
    found: list = []
    for N in num_div:
        Npow = [PolyZ([ONE])]
        for _ in range(d):
            Npow.append(Npow[-1] * N)
        for D in den_div:
            if N.gcd(D).degree > 0:
                continue
            Dpow = [PolyZ([ONE])]
            for _ in range(d):
                Dpow.append(Dpow[-1] * D)
            H = [a[k] * Npow[k] * Dpow[d - k] for k in range(d + 1)]
            top = max(h.degree for h in H)
            g = None
            for j in range(top + 1):
                T = PolyZ([H[k].coeff(j) for k in range(d + 1)])
                if T.is_zero():
                    continue
                g = T if g is None else g.gcd(T)
                if g.degree < 1:
                    break
            if g is None or g.degree < 1:
                continue
            for t in _constant_roots(list(g.monic().coeffs)):
                if t.is_zero():
                    continue
                r = Surd.coerce(RatFunc(N * t, D))
                if r not in found:
                    found.append(r)
    return found


def _split_linear(A: PolyF):
    found = []
    while A.degree >= 1:
        if A.degree == 1:
            found.append(-A.coeff(0) / A.coeff(1))
            A = PolyF([SONE])
            break
        if A.degree == 2:
            rs = _quadratic_roots(A.monic())
            if rs is None:
                break
            found.extend(rs)
            A = PolyF([SONE])
            break
        rs = _linear_roots_high(A)
        if not rs:
            break
        for r in rs:
            A = A.exact_div(PolyF([-r, SONE]))
            found.append(r)
    return found, A.monic()


def extract_roots(P: PolyF) -> RootStructure:
    """Squarefree split, then linear and conjugate-quadratic roots."""
    if P.degree < 1:
        raise ValueError("extract_roots needs degree at least 1 in f")
    lc, facs = P.squarefree()
    roots = []
    residual = PolyF([SONE])
    for A, m in facs:
        found, rest = _split_linear(A)
        roots.extend((r, m) for r in found)
        if rest.degree >= 1:
            residual = residual * rest ** m
    return RootStructure(lc, tuple(roots), residual)


# ---------------------------------------------------------------------------
# dispatch helpers

def shift_z(r, j: int):
    """Substitute z -> z + j."""
    if isinstance(r, (RatFunc, Surd, PolyZ)):
        return r.shift(j)
    if isinstance(r, PolyF):
        return r.shift_z(j)
    if isinstance(r, (int, Fraction, FieldScalar)):
        return r
    raise TypeError(f"cannot shift {type(r).__name__}")


def eval_complex(x, z0: complex, report_branch: bool = False):
    """Floating value at z0; poles give INFINITY.  With report_branch the
    result is (value, on_branch_cut)."""
    if isinstance(x, Surd):
        return x.eval_complex(z0, report_branch)
    if isinstance(x, (RatFunc, PolyZ)):
        val = x.eval_complex(z0)
    elif isinstance(x, (int, Fraction, FieldScalar)):
        val = complex(FieldScalar.coerce(x))
    else:
        raise TypeError(f"cannot evaluate {type(x).__name__}")
    return (val, False) if report_branch else val
