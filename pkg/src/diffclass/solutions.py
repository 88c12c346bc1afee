"""Explicit solutions of the autonomous normal forms, difference Riccati
closed forms, QRT orbits, orbit residual checks, exact squared-orbit
periods and pole-count growth estimates."""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .classifier import form_instance, verify_coefficient_relation
from .eqmodel import DifferenceEquation, parse_coefficient
from .exactalg import ETA, FieldScalar, RatFunc, Surd
from .specfun import (
    EQUIANHARMONIC,
    POLE,
    fermat_pair,
    find_fermat_shift,
    periods,
    wp_zero,
)

__all__ = [
    "SolutionHandle",
    "OrbitReport",
    "GrowthReport",
    "FixedSigns",
    "PrincipalRoot",
    "QRTOrbit",
    "ConjugationReport",
    "riccati_closed_form",
    "riccati_matrix",
    "solve_form",
    "qrt_orbit",
    "qrt_pair_residual",
    "qrt_conjugation_check",
    "verify_orbit",
    "squared_orbit_period",
    "growth_estimate",
    "CONSTRUCTIBLE",
    "TOLERANCE",
    "parse_complex",
    "pullback",
    "grid_points",
    "mobius_power",
]

CONSTRUCTIBLE = ("F1", "F3", "F5", "F9", "F10")
# residual tolerances: Riccati and trigonometric constructions, composed elliptic ones
TOLERANCE = {"F1": 1e-10, "F3": 1e-10, "F5": 1e-10, "F9": 1e-7, "F10": 1e-7}
SQRT2 = math.sqrt(2.0)
_J = ((0, -1), (1, 0))  # g -> -1/g


def _finite(x: complex) -> bool:
    return not (cmath.isinf(x) or cmath.isnan(x))


def _mob(M, g: complex) -> complex:
    num = M[0][0] * g + M[0][1]
    den = M[1][0] * g + M[1][1]
    if den == 0:
        return POLE
    return num / den


def _matmul(A, B):
    return (
        (A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
        (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]),
    )


def parse_complex(text: str) -> complex:
    """Complex number written as "a+bi" (also "bi", "i", "-i", "2"); any other
    text is read as an exact constant expression and embedded."""
    t = text.strip().replace(" ", "")
    if not t:
        raise ValueError("empty complex number")
    c = re.sub(r"(^|[+\-])i$", r"\g<1>1i", t).replace("i", "j")
    try:
        return complex(c)
    except ValueError:
        pass
    return _as_complex(parse_coefficient(text))


def _as_complex(x) -> complex:
    if isinstance(x, str):
        return parse_complex(x)
    if isinstance(x, FieldScalar):
        return complex(x)
    if isinstance(x, (Surd, RatFunc)):
        if not x.is_const():
            raise ValueError(f"parameter {x} is not constant")
        return complex(x.eval_complex(0.0))
    return complex(x)


# ---------------------------------------------------------------------------
# difference Riccati equations

@dataclass(frozen=True)
class _RiccatiData:
    kind: str  # diagonal, parabolic, affine, constant
    mu: complex = 0j
    V: tuple = ((1, 0), (0, 1))
    p: complex = 0j
    beta: complex = 0j


def _riccati_data(M) -> _RiccatiData:
    a, b = complex(M[0][0]), complex(M[0][1])
    c, d = complex(M[1][0]), complex(M[1][1])
    det = a * d - b * c
    if det == 0:
        raise ValueError("Riccati matrix is singular")
    scale = max(abs(a), abs(b), abs(c), abs(d))
    tr = a + d
    disc = cmath.sqrt(tr * tr - 4 * det)
    if abs(disc) <= 1e-13 * scale:
        lam = tr / 2
        if max(abs(a - lam), abs(b), abs(c), abs(d - lam)) <= 1e-13 * scale:
            return _RiccatiData("constant")
        if c == 0:
            return _RiccatiData("affine", beta=b / d)
        p = (a - d) / (2 * c)
        # u = 1/(g - p) obeys u(z+1) = u(z) + beta
        beta = 1 / (_mob(M, p + 1) - p) - 1
        return _RiccatiData("parabolic", p=p, beta=beta)
    lams = ((tr + disc) / 2, (tr - disc) / 2)
    cols = []
    for lam in lams:
        if abs(b) > 1e-14 * scale:
            v = (b, lam - a)
        elif abs(c) > 1e-14 * scale:
            v = (lam - d, c)
        else:
            v = (1, 0) if abs(lam - a) <= abs(lam - d) else (0, 1)
        cols.append(v)
    V = ((cols[0][0], cols[1][0]), (cols[0][1], cols[1][1]))
    if abs(V[0][0] * V[1][1] - V[0][1] * V[1][0]) <= 1e-14 * scale * scale:
        raise ValueError("degenerate eigenvectors")
    return _RiccatiData("diagonal", mu=cmath.log(lams[0] / lams[1]), V=V)


def riccati_closed_form(M, C: complex, z: complex) -> complex:
    """gamma(z) solving gamma(z+1) = (a gamma + b)/(c gamma + d) for M = [[a, b], [c, d]].

    Distinct eigenvalues: gamma = (p1 C e^(mu z) + p2)/(q1 C e^(mu z) + q2)
    with eigenvector columns (p1, q1), (p2, q2) and e^mu = l1/l2 (principal
    log).  A repeated eigenvalue uses gamma = p + 1/(C + beta z) around the
    fixed point p, or gamma = C + (b/d) z when the fixed point is infinity.
    A scalar matrix gives the constant C."""
    R = _riccati_data(M)
    return _riccati_eval(R, complex(C), complex(z))


def _riccati_eval(R: _RiccatiData, C: complex, z: complex) -> complex:
    if R.kind == "constant":
        return C
    if R.kind == "affine":
        return C + R.beta * z
    if R.kind == "parabolic":
        u = C + R.beta * z
        return POLE if u == 0 else R.p + 1 / u
    e = C * cmath.exp(R.mu * z)
    num = R.V[0][0] * e + R.V[0][1]
    den = R.V[1][0] * e + R.V[1][1]
    if den == 0:
        return POLE
    return num / den


def riccati_matrix(form: str, delta: complex = 0j, theta: int = 1):
    """The Mobius matrix of the auxiliary Riccati equation for F3 (gamma with
    f = (gamma + 1/gamma)/2) or F5 (lambda with
    f = (8 lambda^2 - (lambda^2 + 1)^2)/(lambda^2 + 1)^2).  theta = -1 selects
    the second branch gamma(z+1) = -1/m(gamma)."""
    if theta not in (1, -1):
        raise ValueError("theta must be +1 or -1")
    if form == "F3":
        d = complex(delta)
        s = cmath.sqrt(1 - d * d)
        M = ((1j * d + s, -1j), (1, -d + 1j * s))
    elif form == "F5":
        M = ((-1 + SQRT2, -1j), (1, -1j + 1j * SQRT2))
    else:
        raise ValueError(f"no Riccati reduction for {form}")
    return M if theta == 1 else _matmul(_J, M)


# ---------------------------------------------------------------------------
# solution handles

@dataclass
class SolutionHandle:
    form: str
    construction: str
    eval: Callable[[complex], complex]
    parameters: dict
    growth: str  # finite-order(rho), hyper-order>=1, unknown
    equation: DifferenceEquation
    inner: dict = field(default_factory=dict, repr=False)

    def __call__(self, z: complex) -> complex:
        return self.eval(complex(z))

    def to_json(self) -> dict:
        return {
            "form": self.form,
            "construction": self.construction,
            "parameters": {k: _cjson(v) for k, v in sorted(self.parameters.items())},
            "growth": self.growth,
            "equation": self.equation.render(),
        }


def _cjson(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (int, float, str)):
        return v
    return str(v)


def _opt(init: dict, params: dict, name: str, default):
    if name in init:
        return init[name]
    if name in params:
        return params[name]
    return default


def _theta(x) -> int:
    t = int(round(_as_complex(x).real))
    if t not in (1, -1):
        raise ValueError("theta must be +1 or -1")
    return t


def _f3_delta(params: dict) -> tuple[complex, Optional[Surd]]:
    """(numeric delta2, exact delta2 or None)."""
    if "delta2" not in params:
        raise ValueError("F3 needs delta2")
    raw = params["delta2"]
    exact = None
    if not isinstance(raw, (complex, float)):
        try:
            exact = parse_coefficient(raw) if isinstance(raw, str) else Surd.coerce(raw)
        except (TypeError, ValueError):
            exact = None
    if exact is not None:
        rel = verify_coefficient_relation("F3", {"delta2": exact})
        if not rel:
            raise ValueError(f"F3 parameter rejected: {rel.reason}")
        d = _as_complex(exact)
    else:
        d = _as_complex(raw)
    if abs(d - 1) < 1e-12 or abs(d + 1) < 1e-12:
        raise ValueError("F3 parameter rejected: delta2 must differ from +1 and -1")
    return d, exact


def solve_form(form: str, params: Optional[dict] = None, init: Optional[dict] = None) -> SolutionHandle:
    """Explicit meromorphic solution of a constructible normal form.

    init supplies the free constants: beta0 (F1), C and theta (F3, F5),
    A and omega (F9), b (F10)."""
    params = dict(params or {})
    init = dict(init or {})
    if form == "F1":
        b0 = _as_complex(_opt(init, params, "beta0", 1.0))
        if b0 == 0:
            raise ValueError("beta0 must be nonzero")
        w = 1j * math.pi / 2

        def f1(z: complex) -> complex:
            beta = b0 * cmath.exp(w * z)
            return (beta + 1 / beta) / 2

        return SolutionHandle("F1", "F1: f = (beta + 1/beta)/2, beta = beta0*exp(i*pi*z/2)", f1,
                              {"beta0": b0}, "finite-order(1)", form_instance("F1"),
                              {"kind": "entire"})
    if form in ("F3", "F5"):
        theta = _theta(_opt(init, params, "theta", 1))
        C = _as_complex(_opt(init, params, "C", 0.7 + 0.3j))
        if C == 0:
            raise ValueError("C must be nonzero")
        if form == "F3":
            d, exact = _f3_delta(params)
            M = riccati_matrix("F3", d, theta)
            eq = form_instance("F3", {"delta2": exact}) if exact is not None else _numeric_f3(d)
            outer, poles_of = _f3_outer, (0j, POLE)
            desc = "F3: f = (gamma + 1/gamma)/2, gamma Riccati"
            pars = {"delta2": d, "C": C, "theta": theta}
        else:
            M = riccati_matrix("F5", theta=theta)
            eq = form_instance("F5")
            outer, poles_of = _f5_outer, (1j, -1j)
            desc = "F5: f = (8 l^2 - (l^2 + 1)^2)/(l^2 + 1)^2, l Riccati"
            pars = {"C": C, "theta": theta}
        R = _riccati_data(M)

        def fr(z: complex, R=R, C=C, outer=outer) -> complex:
            return outer(_riccati_eval(R, C, z))

        return SolutionHandle(form, desc + f" with M = {_mat_text(M)}", fr, pars, "finite-order(1)", eq,
                              {"kind": "riccati", "data": R, "C": C, "targets": poles_of})
    if form == "F9":
        A = _as_complex(_opt(init, params, "A", 1.0))
        if A == 0:
            raise ValueError("A must be nonzero")
        w1, w2 = periods(EQUIANHARMONIC)
        omega = _as_complex(_opt(init, params, "omega", w1))
        if not _in_lattice(omega):
            raise ValueError("omega must be a lattice period")
        eta = complex(ETA)
        mu = cmath.log(-eta * eta)
        shift = omega / eta

        def f9(z: complex) -> complex:
            return fermat_pair(A * cmath.exp(mu * z) - shift)[0]

        return SolutionHandle("F9", "F9: f = H(A*exp(mu*z) - omega/eta), exp(mu) = -eta^2", f9,
                              {"A": A, "omega": omega, "mu": mu}, "hyper-order>=1", form_instance("F9"),
                              {"kind": "elliptic-exp", "A": A, "mu": mu})
    if form == "F10":
        b = _as_complex(_opt(init, params, "b", 0.3 + 0.2j))
        a = find_fermat_shift()

        def f10(z: complex) -> complex:
            h = fermat_pair(a * z + b)[0]
            if not _finite(h):
                return 0j
            return POLE if h == 0 else 1 / h

        return SolutionHandle("F10", "F10: f = 1/H(a*z + b), wp(a) = 1, wp'(a) = -sqrt3", f10,
                              {"a": a, "b": b}, "finite-order(2)", form_instance("F10"),
                              {"kind": "elliptic-affine", "a": a, "b": b})
    if form in ("F2", "F4", "F6", "F7", "F8", "LINEAR", "RICCATI"):
        raise ValueError(f"no explicit construction is provided for {form}")
    raise ValueError(f"unknown normal form {form!r}")


def _numeric_f3(d: complex):
    # complex delta2 values have no exact carrier; keep the equation numeric
    return _NumericEquation(2, (-(1 - d * d), 0, 1 - d * d), (d * d, -2 * d, 1))


def _f3_outer(g: complex) -> complex:
    if not _finite(g) or g == 0:
        return POLE
    return (g + 1 / g) / 2


def _f5_outer(l: complex) -> complex:
    if not _finite(l):
        return -1 + 0j
    s = (l * l + 1) ** 2
    if s == 0:
        return POLE
    return (8 * l * l - s) / s


def _mat_text(M) -> str:
    def c(x):
        x = complex(x)
        return f"{x.real:.12g}{x.imag:+.12g}i"
    return "[[" + ", ".join(c(x) for x in M[0]) + "], [" + ", ".join(c(x) for x in M[1]) + "]]"


def _in_lattice(w: complex, tol: float = 1e-9) -> bool:
    a, b = periods(EQUIANHARMONIC)
    det = (a.conjugate() * b).imag
    x = (w.conjugate() * b).imag / det
    y = (a.conjugate() * w).imag / det
    return abs(x - round(x)) < tol and abs(y - round(y)) < tol


@dataclass(frozen=True)
class _NumericEquation:
    """Autonomous equation with complex coefficients (constant in z)."""

    n: int
    P: tuple
    Q: tuple

    def render(self) -> str:
        return f"f(z+1)^{self.n} = P/Q with P={list(self.P)}, Q={list(self.Q)}"

    def eval_pq(self, z0: complex, f0: complex) -> tuple[complex, complex]:
        return _horner(self.P, f0), _horner(self.Q, f0)


def _horner(cs, x: complex) -> complex:
    acc = 0j
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def pullback(sol: SolutionHandle, transform, equation=None) -> SolutionHandle:
    """Solution of the equation that transform maps onto sol's normal form:
    with steps T1, ..., Tk the original unknown is f = T1(T2(...Tk(g)))."""
    steps = transform.steps()
    if not steps:
        return sol
    g = sol.eval

    def f(z: complex) -> complex:
        v = g(z)
        for step in reversed(steps):
            if not _finite(v):
                # f = a*g is infinite, f = 1/(a*g) vanishes
                v = POLE if step.kind == "Scale" else 0j
                continue
            a = 1.0 if step.kind == "Invert" else complex(step.alpha.eval_complex(z))
            if step.kind == "Scale":
                v = a * v
            else:
                v = POLE if a * v == 0 else 1 / (a * v)
        return v

    return SolutionHandle(sol.form, f"{sol.construction}, pulled back by {transform}", f,
                          dict(sol.parameters), sol.growth,
                          equation if equation is not None else sol.equation, {"kind": "pullback"})


# ---------------------------------------------------------------------------
# orbit verification

@dataclass
class OrbitReport:
    gridpoints: list
    residuals: list
    max_residual: float
    skipped: list  # (z, reason)

    def to_json(self) -> dict:
        return {
            "max_residual": self.max_residual,
            "points": [{"z": [z.real, z.imag], "residual": r} for z, r in zip(self.gridpoints, self.residuals)],
            "skipped": [{"z": [z.real, z.imag], "reason": why} for z, why in self.skipped],
        }


def _eval_pq(eq, z0: complex, f0: complex):
    if isinstance(eq, _NumericEquation):
        return eq.eval_pq(z0, f0)
    return eq.P.eval_complex(z0, f0), eq.Q.eval_complex(z0, f0)


def verify_orbit(eq, sol, grid: Sequence[complex]) -> OrbitReport:
    """Relative residual |f(z+1)^n Q(z, f) - P(z, f)| / (1 + |P| + |Q f(z+1)^n|)
    at each grid point; points where f, f(z+1) or a coefficient is infinite
    are skipped with a reason."""
    fun = sol.eval if isinstance(sol, SolutionHandle) else sol
    pts, res, skipped = [], [], []
    for z in grid:
        z = complex(z)
        f0, f1 = fun(z), fun(z + 1)
        if not _finite(f0):
            skipped.append((z, "pole of f(z)"))
            continue
        if not _finite(f1):
            skipped.append((z, "pole of f(z+1)"))
            continue
        P, Q = _eval_pq(eq, z, f0)
        if not (_finite(P) and _finite(Q)):
            skipped.append((z, "coefficient pole"))
            continue
        lhs = f1 ** eq.n * Q
        r = abs(lhs - P) / (1 + abs(P) + abs(lhs))
        pts.append(z)
        res.append(r)
    return OrbitReport(pts, res, max(res) if res else 0.0, skipped)


def grid_points(x0: float, x1: float, nx: int, y0: float, y1: float, ny: int) -> list[complex]:
    xs = np.linspace(x0, x1, nx) if nx > 1 else np.array([x0])
    ys = np.linspace(y0, y1, ny) if ny > 1 else np.array([y0])
    return [complex(x, y) for y in ys for x in xs]


# ---------------------------------------------------------------------------
# QRT orbits for F6

@dataclass(frozen=True)
class FixedSigns:
    signs: tuple

    def __init__(self, signs):
        seq = tuple(int(s) for s in signs)
        if any(s not in (1, -1) for s in seq):
            raise ValueError("signs must be +1 or -1")
        object.__setattr__(self, "signs", seq)

    @classmethod
    def parse(cls, text: str) -> "FixedSigns":
        table = {"+": 1, "-": -1, "−": -1}
        try:
            return cls([table[ch] for ch in text.strip()])
        except KeyError as exc:
            raise ValueError(f"bad sign character {exc.args[0]!r}") from None

    def sign(self, j: int) -> int:
        if j >= len(self.signs):
            raise ValueError(f"sign sequence exhausted after {len(self.signs)} steps")
        return self.signs[j]


@dataclass(frozen=True)
class PrincipalRoot:
    def sign(self, j: int) -> int:
        return 1


BranchPolicy = Union[FixedSigns, PrincipalRoot]


def qrt_pair_residual(kappa2: complex, f0: complex, f1: complex) -> float:
    """|f1^2 f0^2 - (f1^2 + f0^2) + kappa2| scaled by 1 + the term sizes."""
    a, b = f1 * f1, f0 * f0
    return abs(a * b - (a + b) + kappa2) / (1 + abs(a * b) + abs(a) + abs(b) + abs(kappa2))


@dataclass
class QRTOrbit:
    kappa2: complex
    points: list
    signs: list
    residuals: list
    halted: Optional[str] = None

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, k):
        return self.points[k]

    def __iter__(self):
        return iter(self.points)

    def to_json(self) -> dict:
        return {
            "kappa2": [self.kappa2.real, self.kappa2.imag],
            "points": [[p.real, p.imag] for p in self.points],
            "signs": list(self.signs),
            "max_residual": self.max_residual,
            "halted": self.halted,
        }


def qrt_orbit(kappa2, f0, steps: int, policy: Optional[BranchPolicy] = None) -> QRTOrbit:
    """Iterate f_{j+1} = s_j sqrt((f_j^2 - kappa2)/(f_j^2 - 1)) with the
    principal square root and signs s_j from the policy.  A step with
    f_j^2 = 1 appends POLE and halts the orbit."""
    k2, f = _as_complex(kappa2), _as_complex(f0)
    if abs(k2) < 1e-300 or k2 == 1:
        raise ValueError("kappa^2 must not be 0 or 1")
    if f * f == 1:
        raise ValueError("f0^2 must not be 1")
    policy = policy or PrincipalRoot()
    if isinstance(policy, FixedSigns) and len(policy.signs) < steps:
        raise ValueError(f"sign sequence has {len(policy.signs)} entries, {steps} steps requested")
    pts, signs, res = [f], [], []
    halted = None
    for j in range(steps):
        s = policy.sign(j)
        den = f * f - 1
        if den == 0:
            pts.append(POLE)
            halted = f"pole at step {j}"
            break
        nxt = s * cmath.sqrt((f * f - k2) / den)
        if not _finite(nxt):
            pts.append(POLE)
            halted = f"overflow at step {j}"
            break
        res.append(qrt_pair_residual(k2, f, nxt))
        signs.append(s)
        pts.append(nxt)
        f = nxt
    return QRTOrbit(k2, pts, signs, res, halted)


# bivariate polynomials in (g, gbar) as {(i, j): coeff}

def _bmul(A: dict, B: dict, zero) -> dict:
    out: dict = {}
    for (i, j), a in A.items():
        for (k, l), b in B.items():
            key = (i + k, j + l)
            out[key] = out.get(key, zero) + a * b
    return out


def _badd(A: dict, B: dict, zero, sb=1) -> dict:
    out = dict(A)
    for k, b in B.items():
        out[k] = out.get(k, zero) + (b if sb == 1 else -b)
    return out


def _bscale(A: dict, c) -> dict:
    return {k: c * v for k, v in A.items()}


def _conjugated_f6(A2, A4, one, zero) -> dict:
    """(g-1)^2 (gb-1)^2 * [fb^2 f^2 - fb^2 - f^2 + kappa^2] with
    f = a (g+1)/(g-1), fb = a (gb+1)/(gb-1), a^2 = A2 and kappa^2 = a^4 = A4."""
    gp = {(0, 0): one, (1, 0): one}
    gm = {(0, 0): -one, (1, 0): one}
    hp = {(0, 0): one, (0, 1): one}
    hm = {(0, 0): -one, (0, 1): one}

    def sq(X):
        return _bmul(X, X, zero)

    X = _bmul(sq(hp), sq(gp), zero)
    Y = _bmul(sq(hp), sq(gm), zero)
    Z = _bmul(sq(hm), sq(gp), zero)
    W = _bmul(sq(hm), sq(gm), zero)
    E = _badd(_bscale(X, A4), _bscale(Y, A2), zero, sb=-1)
    E = _badd(E, _bscale(Z, A2), zero, sb=-1)
    return _badd(E, _bscale(W, A4), zero)


def _qrt_target(A2, one, zero) -> dict:
    # gb^2 g^2 + gb^2 + g^2 + 4(1 + 4a^2) gb g + 1
    four = one + one + one + one
    return {(2, 2): one, (0, 2): one, (2, 0): one, (1, 1): four * (one + four * A2), (0, 0): one}


@dataclass
class ConjugationReport:
    exact_ok: bool
    numeric_ok: bool
    factor: str
    numeric_factor: complex
    numeric_error: float
    a: float

    @property
    def ok(self) -> bool:
        return self.exact_ok and self.numeric_ok

    def to_json(self) -> dict:
        return {"exact_ok": self.exact_ok, "numeric_ok": self.numeric_ok, "factor": self.factor,
                "numeric_factor": [self.numeric_factor.real, self.numeric_factor.imag],
                "numeric_error": self.numeric_error, "a": self.a}


def qrt_conjugation_check(tol: float = 1e-12) -> ConjugationReport:
    """Conjugate F6 with kappa^2 = a^4 by f = a(g+1)/(g-1), 2a^4 - 2a^2 - 1 = 0,
    and compare with the symmetric QRT biquadratic up to a constant factor.

    Exact route: only a^2 = (1 + sqrt3)/2 enters, so the comparison runs in
    Q(i, sqrt3).  Numeric route: a itself is adjoined as a float and the
    coefficient ratios are compared at tolerance tol."""
    zero, one = FieldScalar(0), FieldScalar(1)
    A2 = FieldScalar(0.5, 0, 0.5, 0)
    if not (2 * A2 * A2 - 2 * A2 - 1).is_zero():
        raise ArithmeticError("a^2 does not satisfy 2a^4 - 2a^2 - 1 = 0")
    E = _conjugated_f6(A2, A2 * A2, one, zero)
    T = _qrt_target(A2, one, zero)
    lam = E[(2, 2)]
    keys = set(E) | set(T)
    exact_ok = not lam.is_zero() and all((E.get(k, zero) - lam * T.get(k, zero)).is_zero() for k in keys)
    # numeric route
    a = math.sqrt((1 + math.sqrt(3.0)) / 2)
    En = _conjugated_f6(a * a, a ** 4, 1.0 + 0j, 0j)
    Tn = _qrt_target(a * a, 1.0 + 0j, 0j)
    lam_n = En[(2, 2)]
    err = max(abs(En.get(k, 0j) / lam_n - Tn.get(k, 0j)) for k in set(En) | set(Tn))
    return ConjugationReport(exact_ok, err < tol and abs(lam_n) > tol, str(lam), lam_n, err, a)


# ---------------------------------------------------------------------------
# exact squared-orbit periods

def _exact_const(x) -> Optional[Surd]:
    if isinstance(x, str):
        x = parse_coefficient(x)
    try:
        s = Surd.coerce(x)
    except (TypeError, ValueError):
        return None
    return s if s.is_const() and s.is_rational() else None


def squared_orbit_period(form: str, const, max_period: int = 12) -> Optional[tuple[int, int]]:
    """(period of s = f^2, period of f) for F2 and F7 with a constant coefficient,
    or None.  The induced map on s is a Mobius map over Q(i, sqrt3); its
    k-fold composition is formed symbolically and compared with s."""
    c = _exact_const(const)
    if c is None or form not in ("F2", "F7"):
        return None
    key = "delta1" if form == "F2" else "kappa2_sq"
    if not verify_coefficient_relation(form, {key: c}):
        return None
    k = c.ratfunc().const_value()
    one, zero = FieldScalar(1), FieldScalar(0)
    if form == "F2":
        M = ((k, -k), (zero, one))  # s -> delta1 (s - 1)
    else:
        M = ((k, -one), (one, -one))  # s -> (kappa^2 s - 1)/(s - 1), kappa constant
    s = RatFunc.z()
    r = s
    for period in range(1, max_period + 1):
        r = (r * M[0][0] + M[0][1]) / (r * M[1][0] + M[1][1])
        if r == s:
            return period, 2 * period
    return None


def mobius_power(form: str, const, k: int):
    """k-th power of the induced matrix, exact entries."""
    c = _exact_const(const)
    if c is None:
        raise ValueError("constant coefficient required")
    v = c.ratfunc().const_value()
    one, zero = FieldScalar(1), FieldScalar(0)
    M = ((v, -v), (zero, one)) if form == "F2" else ((v, -one), (one, -one))
    out = ((one, zero), (zero, one))
    for _ in range(k):
        out = _matmul(out, M)
    return out


# ---------------------------------------------------------------------------
# growth

@dataclass
class GrowthReport:
    radii: list
    counts: list
    rho_hat: Optional[float]
    fit: dict
    semilog_fit: dict
    method: str
    signature: str
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "radii": list(self.radii),
            "counts": [int(c) for c in self.counts],
            "rho_hat": self.rho_hat,
            "fit": self.fit,
            "semilog_fit": self.semilog_fit,
            "method": self.method,
            "signature": self.signature,
            "notes": list(self.notes),
        }


def _linfit(x, y) -> dict:
    x, y = np.asarray(x, float), np.asarray(y, float)
    if len(x) < 2:
        return {"slope": None, "intercept": None, "corr": None, "points": int(len(x))}
    slope, icpt = np.polyfit(x, y, 1)
    corr = float(np.corrcoef(x, y)[0, 1]) if np.std(y) > 0 else 1.0
    return {"slope": float(slope), "intercept": float(icpt), "corr": corr, "points": int(len(x))}


def _lattice_disk_count(center: complex, rho: float, p1: complex, p2: complex) -> int:
    """Number of lattice points m p1 + n p2 with |m p1 + n p2 - center| <= rho."""
    det = (p1.conjugate() * p2).imag
    h = abs(det) / abs(p1)  # row spacing
    n0 = (p1.conjugate() * center).imag / det
    nmax = int(math.ceil(rho / h)) + 2
    ns = np.arange(math.floor(n0) - nmax, math.floor(n0) + nmax + 1)
    # along each row m runs over an interval; solve |m p1 + n p2 - c|^2 <= rho^2
    base = ns * p2 - center
    u = p1 / abs(p1)
    t0 = -(base * np.conj(u)).real  # foot parameter along the row, in length units
    dist2 = np.abs(base) ** 2 - t0 ** 2
    half = np.sqrt(np.maximum(rho * rho - dist2, 0.0))
    ok = dist2 <= rho * rho
    lo = np.ceil((t0 - half) / abs(p1) - 1e-12)
    hi = np.floor((t0 + half) / abs(p1) + 1e-12)
    cnt = np.where(ok, np.maximum(hi - lo + 1, 0), 0)
    return int(cnt.sum())


def _f10_count(a: complex, b: complex, r: float) -> int:
    p1, p2 = periods(EQUIANHARMONIC)
    eta = complex(ETA)
    total = 0
    for c in (a, eta * a, eta * eta * a):
        # a z + b = c + L, |z| <= r  <=>  |L - (b - c)| <= |a| r ... with L = a z + b - c
        total += _lattice_disk_count(b - c, abs(a) * r, p1, p2)
    return total


def _exp_target_count(t: complex, mu: complex, r: float) -> int:
    """Number of z with exp(mu z) = t and |z| <= r."""
    if t == 0 or not _finite(t):
        return 0
    L = cmath.log(t)
    R = abs(mu) * r
    rem = R * R - L.real ** 2
    if rem < 0:
        return 0
    s = math.sqrt(rem)
    lo = math.ceil((-s - L.imag) / (2 * math.pi))
    hi = math.floor((s - L.imag) / (2 * math.pi))
    return max(0, hi - lo + 1)


def _riccati_targets(inner: dict) -> list[complex]:
    """Values of C e^(mu z) where the outer map has a pole."""
    R, C = inner["data"], inner["C"]
    out = []
    for w in inner["targets"]:
        V = R.V
        if not _finite(w):
            # denominator q1 e + q2 = 0
            if V[1][0] == 0:
                continue
            out.append(-V[1][1] / V[1][0] / C)
        else:
            den = C * (w * V[1][0] - V[0][0])
            if den == 0:
                continue
            out.append((V[0][1] - w * V[1][1]) / den)
    return out


def _count_k(theta, L2, R):
    """Number of integers k with (theta + 2 pi k)^2 + L2 <= R^2 (vectorized)."""
    rem = R * R - L2
    ok = rem >= 0
    s = np.sqrt(np.where(ok, rem, 0.0))
    lo = np.ceil((-s - theta) / (2 * math.pi))
    hi = np.floor((s - theta) / (2 * math.pi))
    return np.where(ok, np.maximum(hi - lo + 1, 0), 0)


def _row_interval_count(d, th0, offs, step, k, R, smax):
    """For rows u(s) = foot + s * dir at distance d >= 1 from 0, with lattice
    points at s = offs + m * step, count points with
    (theta(s) + 2 pi k)^2 + ln|u(s)|^2 <= R^2, theta(s) = th0 + atan(s/d).

    In theta the left side is convex, so each k gives one interval."""
    tlo = th0 - math.pi / 2 + 1e-15
    thi = th0 + math.pi / 2 - 1e-15
    w = th0 + 2 * math.pi * k  # shift so that x = theta - th0

    def q(x):
        F = np.log(d) - np.log(np.cos(x))
        return (x + w) ** 2 + F * F

    def dq(x):
        F = np.log(d) - np.log(np.cos(x))
        return 2 * (x + w) + 2 * F * np.tan(x)

    a = np.full_like(d, tlo - th0)
    b = np.full_like(d, thi - th0)
    for _ in range(60):
        m = (a + b) / 2
        pos = dq(m) > 0
        b = np.where(pos, m, b)
        a = np.where(pos, a, m)
    xs = (a + b) / 2
    live = q(xs) <= R * R
    if not live.any():
        return np.zeros(0)
    d, offs, xs, w = d[live], offs[live], xs[live], w[live]
    ss = d * np.tan(xs)
    # boundaries in s: q is monotone on each side of the minimizer
    def qs(s):
        x = np.arctan(s / d)
        F = 0.5 * np.log(d * d + s * s)
        return (x + w) ** 2 + F * F

    def boundary(direction):
        lo = ss.copy()
        hi = ss + direction * smax
        for _ in range(56):
            m = (lo + hi) / 2
            inside = qs(m) <= R * R
            lo = np.where(inside, m, lo)
            hi = np.where(inside, hi, m)
        return lo

    left, right = boundary(-1.0), boundary(1.0)
    mlo = np.ceil((left - offs) / step)
    mhi = np.floor((right - offs) / step)
    return np.maximum(mhi - mlo + 1, 0)


def _f9_count(A: complex, mu: complex, r: float) -> int:
    """Distinct poles of H(A e^(mu z) - omega/eta) in |z| <= r.

    Poles sit where u = e^(mu z) lies in (Lambda U (z0 + Lambda) U (-z0 + Lambda))/A
    minus 0.  For a target u, z = (Log u + 2 pi i k)/mu, so |z| <= r reads
    (arg u + 2 pi k)^2 + ln|u|^2 <= R^2 with R = |mu| r.  Points are grouped
    in lattice rows; each row is solved in closed form except for the few
    rows passing within distance 1 of the origin, which are enumerated."""
    R = abs(mu) * r
    # mu = i pi/3 here, but a general mu only rotates/rescales: z = (Log u + 2 pi i k)/mu
    p1, p2 = periods(EQUIANHARMONIC)
    z0 = wp_zero()
    v1, v2 = p1 / A, p2 / A
    step = abs(v1)
    e1 = v1 / step
    det = (v1.conjugate() * v2).imag
    h = abs(det) / step
    umax = math.exp(R)
    total = 0
    kmax = int(math.ceil((R + 1.5 * math.pi) / (2 * math.pi))) + 1
    ks = np.arange(-kmax, kmax + 1)
    for c in (0j, z0, -z0):
        cu = c / A
        # rows: u = cu + n v2 + m v1
        n_c = (e1.conjugate() * cu).imag / (det / step)
        nmax = int(math.ceil(umax / h)) + 2
        ns = np.arange(math.floor(-n_c) - nmax, math.floor(-n_c) + nmax + 2, dtype=float)
        base = cu + ns * v2
        t0 = (base * np.conj(e1)).real  # position of base along e1
        foot = base - t0 * e1
        d = np.abs(foot)
        keep = d <= umax
        base, t0, foot, d = base[keep], t0[keep], foot[keep], d[keep]
        near = d < 1.0
        # direct enumeration for near rows
        for j in np.nonzero(near)[0]:
            mlo = math.floor((-umax - t0[j]) / step) - 1
            mhi = math.ceil((umax - t0[j]) / step) + 1
            ms = np.arange(mlo, mhi + 1, dtype=float)
            u = base[j] + ms * v1
            mag = np.abs(u)
            sel = (mag > 0) & (mag <= umax)
            if c == 0:
                sel &= ~((np.abs(u) < 1e-12 * step))
            u = u[sel]
            th = np.angle(u)
            L2 = np.log(np.abs(u)) ** 2
            total += int(_count_k(th, L2, R).sum())
        far = ~near
        if far.any():
            df, th0 = d[far], np.angle(foot[far])
            # s = position along e1 from the foot, points at s = t0 + m step; flip s
            # where e1 turns clockwise so that arg u = th0 + atan(s/d)
            orient = np.sign((e1 * np.conj(foot[far])).imag)
            offs = orient * t0[far]
            for k in ks:
                # quick prune: need |theta + 2 pi k| <= sqrt(R^2 - ln^2 d) for some theta in the row
                rem = R * R - np.log(df) ** 2
                lo_t = th0 - math.pi / 2 + 2 * math.pi * k
                hi_t = th0 + math.pi / 2 + 2 * math.pi * k
                s = np.sqrt(np.maximum(rem, 0.0))
                cand = (rem >= 0) & (hi_t >= -s) & (lo_t <= s)
                if not cand.any():
                    continue
                cnt = _row_interval_count(df[cand], th0[cand], offs[cand], step, k, R, umax * 2 + 1)
                total += int(cnt.sum())
    return total


def _f9_count_bruteforce(A: complex, mu: complex, r: float) -> int:
    """Pointwise version of _f9_count for small radii."""
    R = abs(mu) * r
    p1, p2 = periods(EQUIANHARMONIC)
    z0 = wp_zero()
    umax = math.exp(R)
    lim = abs(A) * umax
    det = abs((p1.conjugate() * p2).imag)
    nmax = int(lim * max(abs(p1), abs(p2)) / det) + 3
    total = 0
    for c in (0j, z0, -z0):
        for m in range(-nmax, nmax + 1):
            for n in range(-nmax, nmax + 1):
                t = c + m * p1 + n * p2
                if abs(t) < 1e-12 or abs(t) > lim:
                    continue
                total += _exp_target_count(t / A, mu, r)
    return total


def growth_estimate(sol: SolutionHandle, radii: Sequence[float]) -> GrowthReport:
    """Pole counts N(r) in |z| <= r and least-squares fits of log N against
    log r (order estimate rho_hat) and against r (hyper-order signature).
    Entire solutions are fitted with the max-modulus function instead."""
    radii = [float(r) for r in radii]
    if any(r <= 0 for r in radii):
        raise ValueError("radii must be positive")
    radii = sorted(radii)
    kind = sol.inner.get("kind")
    notes: list = []
    if kind == "elliptic-affine":
        a, b = sol.inner["a"], sol.inner["b"]
        counts = [_f10_count(a, b, r) for r in radii]
        method = "lattice points of {a, eta a, eta^2 a} + Lambda in the disk |a z + b - c| <= |a| r"
    elif kind == "elliptic-exp":
        counts = [_f9_count(sol.inner["A"], sol.inner["mu"], r) for r in radii]
        method = "exp(mu z) preimages of the pole lattice cosets, counted row by row"
    elif kind == "riccati":
        R = sol.inner["data"]
        if R.kind != "diagonal":
            raise ValueError("growth estimate needs a Riccati matrix with distinct eigenvalues")
        targets = _riccati_targets(sol.inner)
        counts = [sum(_exp_target_count(t, R.mu, r) for t in targets) for r in radii]
        method = "solutions of C exp(mu z) = t for the pole targets t of the outer map"
    elif kind == "entire":
        counts = [0 for _ in radii]
        logm = [_log_max_modulus(sol, r) for r in radii]
        xs = [math.log(r) for r, lm in zip(radii, logm) if lm > 0]
        ys = [math.log(lm) for lm in logm if lm > 0]
        fit = _linfit(xs, ys)
        notes.append("entire: no poles; order from log log M(r) against log r")
        return GrowthReport(radii, counts, fit["slope"], fit, {}, "max-modulus sampling on |z| = r",
                            sol.growth, notes)
    else:
        raise ValueError(f"unsupported construction for growth estimation: {sol.construction}")
    for x, y in zip(counts, counts[1:]):
        if y < x:
            raise ArithmeticError("pole counts are not monotone")
    pos = [(r, c) for r, c in zip(radii, counts) if c > 0]
    if len(pos) < len(radii):
        notes.append("radii with N(r) = 0 are left out of the fits")
    fit = _linfit([math.log(r) for r, _ in pos], [math.log(c) for _, c in pos])
    semi = _linfit([r for r, _ in pos], [math.log(c) for _, c in pos])
    return GrowthReport(radii, counts, fit["slope"], fit, semi, method, sol.growth, notes)


def _log_max_modulus(sol: SolutionHandle, r: float, samples: int = 720) -> float:
    best = -math.inf
    for k in range(samples):
        z = r * cmath.exp(2j * math.pi * k / samples)
        v = sol.eval(z)
        if _finite(v) and v != 0:
            best = max(best, math.log(abs(v)))
    return best
