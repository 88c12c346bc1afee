"""Weierstrass and Jacobi elliptic functions in double precision, the Fermat
pair H, G with H^3 + G^3 = 1, and the shift a with H(z + a) G(z) = 1."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

__all__ = [
    "POLE",
    "EllipticInvariants",
    "EQUIANHARMONIC",
    "wp",
    "wp_status",
    "periods",
    "reduce_to_cell",
    "JacobiModulus",
    "complete_K",
    "sn",
    "cn",
    "dn",
    "sncndn",
    "fermat_pair",
    "find_fermat_shift",
    "wp_zero",
]

POLE = complex(math.inf, 0.0)
SQRT3 = math.sqrt(3.0)
_LAURENT_TERMS = 20


def _is_pole(x: complex) -> bool:
    return cmath.isinf(x) or cmath.isnan(x)


# ---------------------------------------------------------------------------
# lattices

def _cubic_roots(g2: complex, g3: complex) -> list[complex]:
    return [complex(r) for r in np.roots([4.0, 0.0, -complex(g2), -complex(g3)])]


def _agm(a: complex, b: complex, tol: float = 1e-16) -> complex:
    for _ in range(100):
        a, b = (a + b) / 2, cmath.sqrt(a * b)
        if abs(a - b) <= tol * abs(a):
            break
    return a


def _half_period(d1: complex, d2: complex) -> complex:
    """int_0^inf ds / sqrt((s^2 + d1)(s^2 + d2)) = pi / (2 AGM(sqrt d1, sqrt d2))
    for d1, d2 real positive or complex conjugate."""
    return math.pi / (2 * _agm(cmath.sqrt(d1), cmath.sqrt(d2)))


def _equianharmonic_unit() -> tuple[complex, complex]:
    """Half periods for g2 = 0, g3 = 1."""
    e = _cubic_roots(0.0, 1.0)
    e1 = max(e, key=lambda r: r.real).real
    ez = [r for r in e if abs(r - e1) > 1e-9]
    w1 = _half_period(e1 - ez[0], e1 - ez[1]).real
    return complex(w1, 0.0), w1 * cmath.exp(1j * math.pi / 3)


@dataclass(frozen=True)
class EllipticInvariants:
    """Invariants g2, g3 and the half periods (omega1, omega2) of the lattice.

    Supported: g2 = 0 with any g3 != 0 (by homogeneity from g3 = 1) and
    real g2, g3 with positive discriminant."""

    g2: complex = 0.0
    g3: complex = 1.0
    omega1: complex = field(init=False)
    omega2: complex = field(init=False)

    def __post_init__(self):
        g2, g3 = complex(self.g2), complex(self.g3)
        disc = g2 ** 3 - 27 * g3 ** 2
        if abs(disc) < 1e-14 * max(1.0, abs(g2) ** 3, abs(g3) ** 2):
            raise ValueError("degenerate invariants: g2^3 - 27 g3^2 = 0")
        if abs(g2) == 0.0:
            u1, u2 = _equianharmonic_unit()
            # wp(z; 0, g3) = l^2 wp(l z; 0, 1) with l^-6 = g3
            lam = g3 ** (-1.0 / 6.0)
            w1, w2 = u1 / lam, u2 / lam
        elif abs(g2.imag) < 1e-300 and abs(g3.imag) < 1e-300 and disc.real > 0:
            e = sorted((r.real for r in _cubic_roots(g2.real, g3.real)), reverse=True)
            e1, e2, e3 = e
            w1 = complex(_half_period(e1 - e2, e1 - e3).real, 0.0)
            w2 = 1j * _half_period(e1 - e3, e2 - e3).real
        else:
            raise NotImplementedError("only g2 = 0, or real invariants with positive discriminant")
        if (w2 / w1).imag < 0:
            w2 = -w2
        object.__setattr__(self, "omega1", w1)
        object.__setattr__(self, "omega2", w2)

    @property
    def discriminant(self) -> complex:
        return complex(self.g2) ** 3 - 27 * complex(self.g3) ** 2

    def lattice_point(self, m: int, n: int) -> complex:
        return 2 * m * self.omega1 + 2 * n * self.omega2

    def cell_area(self) -> float:
        a, b = 2 * self.omega1, 2 * self.omega2
        return abs((a.conjugate() * b).imag)

    def min_period(self) -> float:
        a, b = 2 * self.omega1, 2 * self.omega2
        return min(abs(a), abs(b), abs(a + b), abs(a - b))


EQUIANHARMONIC = EllipticInvariants(0.0, 1.0)


def periods(inv: EllipticInvariants) -> tuple[complex, complex]:
    """Fundamental period pair (2 omega1, 2 omega2)."""
    return 2 * inv.omega1, 2 * inv.omega2


def reduce_to_cell(z: complex, inv: EllipticInvariants) -> tuple[complex, complex]:
    """(z - L, L) with L the lattice point nearest to z."""
    a, b = 2 * inv.omega1, 2 * inv.omega2
    # solve z = x a + y b for real x, y
    det = (a.conjugate() * b).imag
    x = (z.conjugate() * b).imag / det
    y = (a.conjugate() * z).imag / det
    m0, n0 = math.floor(x), math.floor(y)
    best = None
    for m in (m0, m0 + 1):
        for n in (n0, n0 + 1):
            L = m * a + n * b
            d = abs(z - L)
            if best is None or d < best[0]:
                best = (d, L)
    return z - best[1], best[1]


# ---------------------------------------------------------------------------
# Weierstrass p

def _laurent_coeffs(g2: complex, g3: complex, terms: int) -> list[complex]:
    # wp = z^-2 + sum_{k>=2} c_k z^(2k-2)
    c = [0j, 0j, g2 / 20, g3 / 28]
    for k in range(4, terms + 2):
        s = sum(c[m] * c[k - m] for m in range(2, k - 1))
        c.append(3 * s / ((2 * k + 1) * (k - 3)))
    return c


def _wp_series(z: complex, c: list[complex]) -> tuple[complex, complex]:
    z2 = z * z
    p, dp = 0j, 0j
    for k in range(len(c) - 1, 1, -1):
        p = p * z2 + c[k]
        dp = dp * z2 + (2 * k - 2) * c[k]
    # p holds sum c_k z^(2k-4); dp holds sum (2k-2) c_k z^(2k-4)
    return 1 / z2 + p * z2, -2 / (z2 * z) + dp * z


def wp_status(z: complex, inv: EllipticInvariants = EQUIANHARMONIC) -> tuple[complex, complex, bool]:
    """(wp(z), wp'(z), near_pole); near_pole flags points closer than
    1e-6 of the shortest period to a lattice point."""
    z = complex(z)
    g2 = complex(inv.g2)
    w, _ = reduce_to_cell(z, inv)
    scale = inv.min_period()
    if abs(w) < 1e-300:
        return POLE, POLE, True
    near = abs(w) < 1e-6 * scale
    c = _laurent_coeffs(g2, complex(inv.g3), _LAURENT_TERMS)
    r0 = 0.4 * scale
    m = 0
    while abs(w) > r0:
        w /= 2
        m += 1
    p, dp = _wp_series(w, c)
    for _ in range(m):
        p2 = 6 * p * p - g2 / 2
        p3 = 12 * p * dp
        if dp == 0:
            return POLE, POLE, True
        newp = (p2 / dp) ** 2 / 4 - 2 * p
        newdp = p2 * (p3 * dp - p2 * p2) / (4 * dp ** 3) - dp
        p, dp = newp, newdp
    return p, dp, near


def wp(z: complex, inv: EllipticInvariants = EQUIANHARMONIC) -> tuple[complex, complex]:
    """(wp(z), wp'(z)); lattice points return (POLE, POLE)."""
    p, dp, _ = wp_status(z, inv)
    return p, dp


def wp_zero(inv: EllipticInvariants = EQUIANHARMONIC) -> complex:
    """A zero z0 of wp; the zeros are +-z0 modulo the lattice."""
    if abs(complex(inv.g2)) != 0.0:
        raise NotImplementedError("wp_zero is implemented for g2 = 0")
    # for g2 = 0 the zeros sit at the centroids (2 w1 + 2 w2)/3 and its negative
    z0 = (2 * inv.omega1 + 2 * inv.omega2) / 3
    return _newton(lambda z: wp(z, inv), z0, target=0.0)


def _newton(fun, z0: complex, target: complex, iters: int = 60, tol: float = 1e-15) -> complex:
    z = z0
    for _ in range(iters):
        p, dp = fun(z)
        if _is_pole(p) or dp == 0:
            raise ArithmeticError("Newton step hit a pole or critical point")
        step = (p - target) / dp
        z -= step
        if abs(step) < tol * max(1.0, abs(z)):
            break
    return z


# ---------------------------------------------------------------------------
# Jacobi elliptic functions

def complete_K(k: complex) -> complex:
    """K(k) = pi / (2 AGM(1, k')) with k' = sqrt(1 - k^2)."""
    kp = cmath.sqrt(1 - complex(k) ** 2)
    return math.pi / (2 * _agm(1.0, kp))


@dataclass(frozen=True)
class JacobiModulus:
    k: complex
    K: complex = field(init=False)
    Kp: complex = field(init=False)

    def __post_init__(self):
        k2 = complex(self.k) ** 2
        if abs(k2) < 1e-15 or abs(k2 - 1) < 1e-15:
            raise ValueError("modulus must satisfy k^2 not in {0, 1}")
        object.__setattr__(self, "K", complete_K(self.k))
        object.__setattr__(self, "Kp", complete_K(cmath.sqrt(1 - k2)))

    @property
    def is_real(self) -> bool:
        k = complex(self.k)
        return abs(k.imag) < 1e-300 and 0 < k.real < 1

    def complementary(self) -> "JacobiModulus":
        return JacobiModulus(cmath.sqrt(1 - complex(self.k) ** 2))


def _sncndn_agm(u: float, k: float) -> tuple[float, float, float]:
    """Descending Landen (arithmetic-geometric mean) scheme for real u and
    real 0 < k < 1."""
    a = [1.0]
    c = [k]
    b = math.sqrt(1 - k * k)
    while abs(c[-1]) > 1e-16 and len(a) < 60:
        an, bn, cn_ = (a[-1] + b) / 2, math.sqrt(a[-1] * b), (a[-1] - b) / 2
        a.append(an)
        c.append(cn_)
        b = bn
    n = len(a) - 1
    phi = (2 ** n) * a[-1] * u
    for j in range(n, 0, -1):
        phi = (phi + math.asin(c[j] / a[j] * math.sin(phi))) / 2
    s = math.sin(phi)
    # dn > 0 on the real line, and the square root stays accurate at u = K
    return s, math.cos(phi), math.sqrt(1 - k * k * s * s)


def _theta_all(v: complex, q: complex, terms: int = 40) -> tuple[complex, complex, complex, complex]:
    t1 = t2 = 0j
    t3 = t4 = 1 + 0j
    for n in range(terms):
        h = q ** ((n + 0.5) ** 2)
        t1 += 2 * (-1) ** n * h * cmath.sin((2 * n + 1) * v)
        t2 += 2 * h * cmath.cos((2 * n + 1) * v)
        if n:
            g = q ** (n * n)
            t3 += 2 * g * cmath.cos(2 * n * v)
            t4 += 2 * (-1) ** n * g * cmath.cos(2 * n * v)
        if abs(h) < 1e-18 * max(1.0, abs(t3)):
            break
    return t1, t2, t3, t4


def _sncndn_theta(u: complex, m: "JacobiModulus") -> tuple[complex, complex, complex]:
    """Theta quotients with nome q = exp(-pi K'/K), after reducing u by the
    periods 4K and 2iK' of sn."""
    K, Kp = complex(m.K), complex(m.Kp)
    w1, w2 = 4 * K, 2j * Kp
    det = (w1.conjugate() * w2).imag
    x = (u.conjugate() * w2).imag / det
    y = (w1.conjugate() * u).imag / det
    u = u - round(x) * w1 - round(y) * w2
    q = cmath.exp(-math.pi * Kp / K)
    if abs(q) >= 0.9:
        raise NotImplementedError("nome too close to the unit circle")
    v = math.pi * u / (2 * K)
    _, z2, z3, z4 = _theta_all(0j, q)
    t1, t2, t3, t4 = _theta_all(v, q)
    if abs(t4) < 1e-300:
        return POLE, POLE, POLE
    return z3 * t1 / (z2 * t4), z4 * t2 / (z2 * t4), z4 * t3 / (z3 * t4)


def _reduce_real(x: float, K: float) -> tuple[float, int]:
    # sn(x + 2K) = -sn(x), so fold into [-K, K] and track the sign
    q = round(x / (2 * K))
    return x - 2 * K * q, (-1) ** (q % 2)


def sncndn(z: complex, m: JacobiModulus) -> tuple[complex, complex, complex]:
    """(sn, cn, dn) at z; poles give POLE entries."""
    z = complex(z)
    if not m.is_real:
        return _sncndn_theta(z, m)
    k = complex(m.k).real
    kp = math.sqrt(1 - k * k)
    K, Kp = m.K.real, m.Kp.real
    x, sx = _reduce_real(z.real, K)
    s, c, d = _sncndn_agm(x, k)
    s, c = s * sx, c * sx
    if z.imag == 0.0:
        return complex(s), complex(c), complex(d)
    # imaginary part through the complementary modulus (A&S 16.21)
    y, sy = _reduce_real(z.imag, Kp)
    s1, c1, d1 = _sncndn_agm(y, kp)
    s1, c1 = s1 * sy, c1 * sy
    den = c1 * c1 + k * k * s * s * s1 * s1
    if abs(den) < 1e-300:
        return POLE, POLE, POLE
    sn_ = (s * d1 + 1j * c * d * s1 * c1) / den
    cn_ = (c * c1 - 1j * s * d * s1 * d1) / den
    dn_ = (d * c1 * d1 - 1j * k * k * s * c * s1) / den
    return sn_, cn_, dn_


def sn(z: complex, m: JacobiModulus) -> complex:
    return sncndn(z, m)[0]


def cn(z: complex, m: JacobiModulus) -> complex:
    return sncndn(z, m)[1]


def dn(z: complex, m: JacobiModulus) -> complex:
    return sncndn(z, m)[2]


# ---------------------------------------------------------------------------
# Fermat pair for x^3 + y^3 = 1

def fermat_pair(z: complex, inv: EllipticInvariants = EQUIANHARMONIC) -> tuple[complex, complex]:
    """H = (1 + wp'/sqrt3)/(2 wp), G = (1 - wp'/sqrt3)/(2 wp) for g2 = 0, g3 = 1.

    At lattice points and zeros of wp both entries are POLE."""
    p, dp = wp(z, inv)
    if _is_pole(p) or p == 0:
        return POLE, POLE
    return (1 + dp / SQRT3) / (2 * p), (1 - dp / SQRT3) / (2 * p)


def find_fermat_shift(sign: int = -1, inv: EllipticInvariants = EQUIANHARMONIC) -> complex:
    """The point a of the fundamental cell with wp(a) = 1 and wp'(a) = sign*sqrt3.

    Newton on wp(a) = 1 from a grid of starting points; the two solutions
    are +-a and sign selects one of them."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    a1, a2 = periods(inv)
    found: list[complex] = []
    for s in np.linspace(0.05, 0.95, 7):
        for t in np.linspace(0.05, 0.95, 7):
            z0 = s * a1 + t * a2
            try:
                z = _newton(lambda w: wp(w, inv), z0, target=1.0)
            except ArithmeticError:
                continue
            p, dp = wp(z, inv)
            if abs(p - 1) < 1e-12 and abs(dp - sign * SQRT3) < 1e-9:
                z, _ = reduce_to_cell(z, inv)
                if all(abs(z - f) > 1e-8 for f in found):
                    found.append(z)
    if not found:
        raise ArithmeticError("no starting point converged to wp(a) = 1")
    # lattice translates are identified by reduce_to_cell; take the canonical one
    return min(found, key=lambda z: (round(z.real, 9), round(z.imag, 9)))
