"""Block maps B_cm, B_mc, B_lambda and their iteration."""

from __future__ import annotations

import csv
import enum
import io
import os
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    TwoBox,
    adjoint,
    contragredient,
    coproduct,
    multiply,
    norm2,
    norm_from_singular_values,
    sft,
    singular_values,
    trace,
)
from .biprojection import BiprojectionRecord, _enumerate, entropy
from .spectral import is_bipositive

STEP_TOL = 1e-12
ZERO_TOL = 1e-10
RESIDUAL_TOL = 1e-8
DEFAULT_MAXIT = 100_000


def default_maxit() -> int:
    raw = os.environ.get("QFOURIER_MAXIT")
    return int(raw) if raw else DEFAULT_MAXIT


def _norms(x: TwoBox) -> tuple[float, float, float]:
    s = singular_values(x)
    n2 = norm2(x)
    return norm_from_singular_values(s, 1), n2, float(s.max(initial=0.0))


def _check_nonzero(x: TwoBox):
    if norm2(x) == 0:
        raise ValueError("block maps are undefined at zero")


def _b_cm(x: TwoBox, n1: float, n2: float) -> TwoBox:
    xs = adjoint(x)
    left = coproduct(contragredient(xs), x)
    right = coproduct(contragredient(x), xs)
    return (x.delta**2 / (n1 * n2**2)) * multiply(left, right)


def _b_mc(x: TwoBox, ninf: float, n2: float) -> TwoBox:
    xs = adjoint(x)
    xb = contragredient(x)
    left = multiply(xb, contragredient(xs))
    right = multiply(xs, x)
    return (x.delta / (ninf * n2**2)) * coproduct(left, right)


def b_cm(x: TwoBox) -> TwoBox:
    """delta^2 / (||x||_1 ||x||_2^2) (xbar* * x)(xbar * x*)."""
    _check_nonzero(x)
    n1, n2, _ = _norms(x)
    return _b_cm(x, n1, n2)


def b_mc(x: TwoBox) -> TwoBox:
    """delta / (||x||_inf ||x||_2^2) (xbar xbar*) * (x* x)."""
    _check_nonzero(x)
    _, n2, ninf = _norms(x)
    return _b_mc(x, ninf, n2)


def b_lambda(x: TwoBox, lam: float) -> TwoBox:
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    _check_nonzero(x)
    n1, n2, ninf = _norms(x)
    if lam == 1.0:
        return _b_cm(x, n1, n2)
    if lam == 0.0:
        return _b_mc(x, ninf, n2)
    return lam * _b_cm(x, n1, n2) + (1 - lam) * _b_mc(x, ninf, n2)


def commute_check(x: TwoBox, lam: float, tol: float = 1e-9) -> bool:
    """F(B_lambda(x)) = B_{1 - lambda}(F(x)) for bi-positive x."""
    if not is_bipositive(x):
        raise ValueError("the Fourier intertwining is only claimed for bi-positive elements")
    lhs = sft(b_lambda(x, lam))
    rhs = b_lambda(sft(x), 1 - lam)
    return norm2(lhs - rhs) < tol * norm2(x)


class LimitKind(enum.Enum):
    ZERO = "Zero"
    BIPROJECTION_MULTIPLE = "BiprojectionMultiple"
    UNRESOLVED = "Unresolved"


@dataclass(frozen=True)
class Classification:
    kind: LimitKind
    witness: BiprojectionRecord | None = None
    scalar: float = 0.0
    residual: float = 0.0

    @property
    def index(self) -> int:
        """Position of the witness among the enumerated biprojections; -1 for Zero or Unresolved."""
        if self.witness is None:
            return -1
        recs = _enumerate(self.witness.element.group, self.witness.shading)
        return next(i for i, r in enumerate(recs) if r is self.witness)


@dataclass
class FlowResult:
    iterations: int
    trajectory_norms: list
    entropy_trace: list
    limit: TwoBox
    classification: Classification
    residual: float
    converged: bool
    trajectory: list = field(default_factory=list, repr=False)


def classify_limit(z: TwoBox, zero_tol: float = ZERO_TOL, residual_tol: float = RESIDUAL_TOL) -> Classification:
    """Nearest multiple of an enumerated biprojection, scalar from tr(zB) / tr(BB)."""
    if norm2(z) < zero_tol:
        return Classification(LimitKind.ZERO, residual=norm2(z))
    best = None
    for rec in _enumerate(z.group, z.shading):
        B = rec.element
        c = (trace(multiply(z, B)) / trace(multiply(B, B))).real
        res = norm2(z - c * B)
        if best is None or res < best[2]:
            best = (rec, c, res)
    rec, c, res = best
    kind = LimitKind.BIPROJECTION_MULTIPLE if res < residual_tol else LimitKind.UNRESOLVED
    return Classification(kind, rec, float(c), float(res))


def iterate(
    x: TwoBox,
    lam: float = 0.5,
    tol: float = STEP_TOL,
    maxit: int | None = None,
    track_entropy: bool = True,
    record: bool = False,
) -> FlowResult:
    """Iterate B_lambda until the step falls below tol, the norm drops below the zero threshold, or maxit."""
    _check_nonzero(x)
    maxit = default_maxit() if maxit is None else maxit
    norms = [norm2(x)]
    ent = [entropy(x)] if track_entropy else []
    traj = [x] if record else []
    converged = False
    n = 0
    while n < maxit:
        if norms[-1] < ZERO_TOL:
            converged = True
            break
        nxt = b_lambda(x, lam)
        n += 1
        step = norm2(nxt - x)
        x = nxt
        norms.append(norm2(x))
        if track_entropy and norms[-1] > 0:
            ent.append(entropy(x))
        if record:
            traj.append(x)
        if step < tol:
            converged = True
            break
    cls = classify_limit(x)
    if not converged and cls.kind is not LimitKind.ZERO:
        cls = Classification(LimitKind.UNRESOLVED, cls.witness, cls.scalar, cls.residual)
    return FlowResult(n, norms, ent, x, cls, cls.residual, converged or cls.kind is LimitKind.ZERO, traj)


def norms_monotone(result: FlowResult, slack: float = 1e-12) -> bool:
    a = np.asarray(result.trajectory_norms)
    return bool(np.all(np.diff(a) <= slack * np.maximum(a[:-1], 1.0)))


def trajectory_csv(result: FlowResult) -> str:
    """CSV with columns iter, norm2, entropy, dist_to_limit (needs a recorded trajectory)."""
    if not result.trajectory:
        raise ValueError("run iterate(..., record=True) to dump a trajectory")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["iter", "norm2", "entropy", "dist_to_limit"])
    for k, x in enumerate(result.trajectory):
        h = entropy(x) if norm2(x) > 0 else 0.0
        w.writerow([k, f"{norm2(x):.17g}", f"{h:.17g}", f"{norm2(x - result.limit):.17g}"])
    return buf.getvalue()


__all__ = [
    "Classification",
    "FlowResult",
    "LimitKind",
    "b_cm",
    "b_lambda",
    "b_mc",
    "classify_limit",
    "commute_check",
    "default_maxit",
    "entropy",
    "iterate",
    "norms_monotone",
    "trajectory_csv",
]
