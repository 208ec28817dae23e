"""The Z2 Ising 2-box and the closed-form B_1/2 recursion on the ray a 1 + b JP."""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass

import numpy as np

from .algebra import PLUS, Shading, TwoBox, norm2
from .biprojection import entropy
from .blockmap import ZERO_TOL, default_maxit
from .groups import cyclic

SQRT2 = math.sqrt(2.0)
BETA_C = 0.5 * math.log1p(SQRT2)
STABLE_TOL = 1e-13
BISECTION_STEPS = 200


@dataclass(frozen=True)
class IsingElement:
    """a 1 + b JP on Z2, where JP = delta e1 is the scaled Jones projection."""

    a: float
    b: float

    def __post_init__(self):
        if self.a < 0 or self.b < 0 or (self.a == 0 and self.b == 0):
            raise ValueError(f"need a, b >= 0 with one positive, got ({self.a}, {self.b})")

    @property
    def t(self) -> float:
        return math.inf if self.a == 0 else self.b / self.a

    @property
    def norm(self) -> float:
        return norm2(self.to_twobox())

    def to_twobox(self, delta: float = SQRT2) -> TwoBox:
        # 1 = L_e and JP = delta e1 = (delta / 2)(L_e + L_s)
        return TwoBox(cyclic(2), PLUS, [self.a + self.b * delta / 2, self.b * delta / 2])

    @classmethod
    def from_twobox(cls, x: TwoBox, delta: float = SQRT2) -> "IsingElement":
        if x.group.order != 2 or x.shading is not Shading.PLUS:
            raise ValueError("expected a Plus 2-box on Z2")
        c = x.coeff.real
        b = 2 * c[1] / delta
        return cls(max(c[0] - c[1], 0.0), max(b, 0.0))


def ising_twobox(beta: float) -> IsingElement:
    """(e^beta - e^-beta) 1 + e^-beta sqrt(2) e1, with t = b / a computed stably."""
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    a = 2.0 * math.sinh(beta)
    return IsingElement(a, a * initial_t(beta))


def initial_t(beta: float) -> float:
    """t = sqrt(2) / (e^(2 beta) - 1)."""
    return SQRT2 / math.expm1(2.0 * beta)


def _t_step_direct(t: float, delta: float) -> float:
    d2 = delta * delta
    num = 2 * d2 * (t * t + 1) + (delta**3 + 3 * delta) * t
    den = 2 * d2 + (delta**3 + 9 * delta) * t + (6 * d2 + 8) * t * t + 6 * delta * t**3
    return t + t * (t * t - 1) * num / den


def t_step(t: float, delta: float = SQRT2) -> float:
    """One B_1/2 step on the projective coordinate t = b / a."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t <= 1:
        return _t_step_direct(t, delta)
    if math.isclose(delta, SQRT2, rel_tol=0, abs_tol=1e-15):
        inner = _t_step_direct(1.0 / t, delta)
        return math.inf if inner == 0 else 1.0 / inner
    return math.inf if math.isinf(t) else _t_step_direct(t, delta)


def b_half_closed(a: float, b: float, delta: float = SQRT2) -> IsingElement:
    """Closed form of B_1/2(a 1 + b JP)."""
    if a < 0 or b < 0 or (a == 0 and b == 0):
        raise ValueError("need a, b >= 0 with one positive")
    p, q = a * delta + b, b * delta + a
    den = 2 * p * q * (a * a * delta + b * b * delta + 2 * a * b)
    ab2 = 2 * a * a * b * b * delta
    new_a = ((a * a * delta + 2 * a * b) ** 2 * q + (a**4 * delta + ab2 + 4 * a**3 * b) * p) / den
    new_b = ((b**4 * delta + ab2 + 4 * a * b**3) * q + (b * b * delta + 2 * a * b) ** 2 * p) / den
    return IsingElement(new_a, new_b)


class Phase(enum.Enum):
    ORDERED_ID = "Ordered_ID"
    DISORDERED_JP = "Disordered_JP"
    CRITICAL_ZERO = "Critical_Zero"


@dataclass(frozen=True)
class IsingPoint:
    beta: float
    t0: float
    phase: Phase
    limit_scalar: float
    iterations: int
    entropy_final: float


@dataclass(frozen=True)
class IsingFlow:
    limit: IsingElement | None
    iterations: int
    norms: tuple


def flow(x: IsingElement, maxit: int | None = None, zero_tol: float = ZERO_TOL) -> IsingFlow:
    """Iterate the closed form until (a, b) stabilizes or the norm falls below zero_tol."""
    maxit = default_maxit() if maxit is None else maxit
    norms = [x.norm]
    for n in range(1, maxit + 1):
        nxt = b_half_closed(x.a, x.b)
        size = math.hypot(nxt.a, nxt.b)
        change = math.hypot(nxt.a - x.a, nxt.b - x.b)
        x = nxt
        norms.append(x.norm)
        if norms[-1] < zero_tol:
            return IsingFlow(None, n, tuple(norms))
        if change <= STABLE_TOL * size:
            return IsingFlow(x, n, tuple(norms))
    return IsingFlow(x, maxit, tuple(norms))


def classify_beta(beta: float, maxit: int | None = None) -> IsingPoint:
    x = ising_twobox(beta)
    result = flow(x, maxit)
    if result.limit is None:
        return IsingPoint(beta, x.t, Phase.CRITICAL_ZERO, 0.0, result.iterations, 0.0)
    lim = result.limit
    if lim.a >= lim.b:
        phase, scalar = Phase.ORDERED_ID, lim.a
    else:
        phase, scalar = Phase.DISORDERED_JP, lim.b
    return IsingPoint(beta, x.t, phase, scalar, result.iterations, entropy(lim.to_twobox()))


def phase_scan(beta_min: float, beta_max: float, steps: int) -> list[IsingPoint]:
    if not 0 < beta_min < beta_max:
        raise ValueError("need 0 < beta_min < beta_max")
    if steps < 2:
        raise ValueError("need at least two scan points")
    return [classify_beta(float(b)) for b in np.linspace(beta_min, beta_max, steps)]


def _side(beta: float, n: int) -> float:
    t = initial_t(beta)
    for _ in range(n):
        t = t_step(t)
    return t - 1.0


def critical_beta(method: str = "bisection", lo: float = 0.05, hi: float = 1.2, tol: float = 1e-10,
                  n: int = BISECTION_STEPS) -> float:
    """Phase boundary in beta: analytic ln(1 + sqrt 2) / 2, or bisection on the sign of t_N - 1."""
    if method == "analytic":
        return BETA_C
    if method != "bisection":
        raise ValueError(f"unknown method {method!r}")
    f_lo, f_hi = _side(lo, n), _side(hi, n)
    if f_lo * f_hi > 0:
        raise ValueError("no phase flip inside the bracket")
    while hi - lo > tol / 4:
        mid = 0.5 * (lo + hi)
        f_mid = _side(mid, n)
        if f_mid == 0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def scan_csv(points: list[IsingPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["beta", "t0", "phase", "iterations", "limit_scalar", "entropy_final"])
    for p in points:
        w.writerow([f"{p.beta:.12g}", f"{p.t0:.17g}", p.phase.value, p.iterations,
                    f"{p.limit_scalar:.17g}", f"{p.entropy_final:.17g}"])
    return buf.getvalue()


__all__ = [
    "BETA_C",
    "IsingElement",
    "IsingFlow",
    "IsingPoint",
    "Phase",
    "b_half_closed",
    "classify_beta",
    "critical_beta",
    "flow",
    "initial_t",
    "ising_twobox",
    "phase_scan",
    "scan_csv",
    "t_step",
]
