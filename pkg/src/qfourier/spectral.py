"""Spectral calculus on 2-boxes: eigenprojections, |x|, polar parts, range projections."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    MINUS,
    PLUS,
    TwoBox,
    adjoint,
    is_self_adjoint,
    multiply,
    norm2,
    pnorm,
    sft,
    singular_values,
    trace,
    zero,
)

RANK_TOL = 1e-9


class NotSelfAdjointError(ValueError):
    pass


@dataclass(frozen=True)
class SpectralData:
    eigenvalues: tuple
    projections: tuple
    tol: float

    def reconstruct(self) -> TwoBox:
        out = 0 * self.projections[0]
        for lam, p in zip(self.eigenvalues, self.projections):
            out = out + lam * p
        return out


@dataclass(frozen=True)
class PolarData:
    absval: TwoBox
    partial_isometry: TwoBox


def _eigh(x: TwoBox):
    if x.shading is PLUS:
        m = x.matrix()
        return np.linalg.eigh(0.5 * (m + m.conj().T))
    w = x.coeff.real
    order = np.argsort(w, kind="stable")
    return w[order], np.eye(x.group.order)[:, order]


def apply_function(x: TwoBox, func) -> TwoBox:
    """Continuous functional calculus f(x) for self-adjoint x (f applied to a real array)."""
    if x.shading is MINUS:
        return x.like(func(x.coeff.real))
    w, v = _eigh(x)
    fw = np.asarray(func(w), dtype=complex)
    # column at the identity of V diag(f) V^*
    col = (v * fw) @ v[x.group.id].conj()
    return x.like(col)


def spectral_decompose(x: TwoBox, tol: float = RANK_TOL) -> SpectralData:
    """Eigenvalues and eigenprojections of a self-adjoint 2-box.

    Eigenvalues closer than ``tol * ||x||_inf`` are merged into one cluster.
    """
    if not is_self_adjoint(x, tol=max(tol, 1e-9)):
        raise NotSelfAdjointError("spectral_decompose needs a self-adjoint element")
    w, v = _eigh(x)
    scale = max(float(np.abs(w).max(initial=0.0)), 1e-300)
    cuts = np.flatnonzero(np.diff(w) > tol * scale) + 1
    eigenvalues, projections = [], []
    for blk in np.split(np.arange(len(w)), cuts):
        eigenvalues.append(float(w[blk].mean()))
        if x.shading is PLUS:
            vb = v[:, blk]
            projections.append(x.like(vb @ vb[x.group.id].conj()))
        else:
            projections.append(x.like(np.abs(v[:, blk]).sum(axis=1)))
    return SpectralData(tuple(eigenvalues), tuple(projections), tol)


def spectral_projection_at(x: TwoBox, value: float, tol: float = 1e-8) -> TwoBox:
    """Sum of eigenprojections with |eigenvalue - value| <= tol * max(1, |value|)."""
    if not is_self_adjoint(x, tol=max(tol, 1e-9)):
        raise NotSelfAdjointError("spectral_projection_at needs a self-adjoint element")
    window = tol * max(1.0, abs(value))
    if x.shading is MINUS:
        return x.like((np.abs(x.coeff.real - value) <= window).astype(float))
    w, v = _eigh(x)
    sel = np.abs(w - value) <= window
    if not sel.any():
        return zero(x.group, x.shading)
    vb = v[:, sel]
    return x.like(vb @ vb[x.group.id].conj())


def absolute(x: TwoBox) -> TwoBox:
    """|x| = (x* x)^(1/2)."""
    return apply_function(multiply(adjoint(x), x), lambda w: np.sqrt(np.clip(w, 0.0, None)))


def power_abs(x: TwoBox, p: float) -> TwoBox:
    """|x|^p."""
    return apply_function(multiply(adjoint(x), x), lambda w: np.clip(w, 0.0, None) ** (p / 2))


def polar(x: TwoBox, tol: float = RANK_TOL) -> PolarData:
    """x = w_x |x|, with singular values below tol * ||x||_inf treated as zero."""
    if x.shading is MINUS:
        a = np.abs(x.coeff)
        keep = a > tol * a.max(initial=0.0)
        phase = np.zeros_like(x.coeff)
        phase[keep] = x.coeff[keep] / a[keep]
        return PolarData(x.like(a), x.like(phase))
    u, s, vh = np.linalg.svd(x.matrix())
    r = int(np.count_nonzero(s > tol * s[0])) if s[0] > 0 else 0
    e = x.group.id
    v = vh.conj().T
    absval = (v * s) @ vh[:, e]
    w_x = u[:, :r] @ vh[:r, e]
    return PolarData(x.like(absval), x.like(w_x))


def range_projection(x: TwoBox, tol: float = RANK_TOL) -> TwoBox:
    """Projection onto the closure of the image of x."""
    if x.shading is MINUS:
        a = np.abs(x.coeff)
        top = a.max(initial=0.0)
        return x.like((a > tol * top).astype(float) if top > 0 else np.zeros_like(a))
    u, s, _ = np.linalg.svd(x.matrix())
    if s[0] == 0:
        return zero(x.group, x.shading)
    ur = u[:, s > tol * s[0]]
    return x.like(ur @ ur[x.group.id].conj())


def support(x: TwoBox, tol: float = RANK_TOL) -> float:
    """S(x) = tr(R(x))."""
    return trace(range_projection(x, tol)).real


def leq(p: TwoBox, q: TwoBox, tol: float = 1e-8) -> bool:
    """Projection order p <= q, tested as q p = p."""
    return norm2(multiply(q, p) - p) <= tol * max(1.0, norm2(p))


def is_positive(x: TwoBox, tol: float = RANK_TOL) -> bool:
    if not is_self_adjoint(x, tol=max(tol, 1e-9)):
        return False
    w, _ = _eigh(x)
    return bool(w[0] >= -tol * max(float(np.abs(w).max()), 1e-300))


def is_projection(x: TwoBox, tol: float = 1e-8) -> bool:
    if not is_self_adjoint(x, tol=max(tol, 1e-9)):
        return False
    return norm2(multiply(x, x) - x) <= tol * max(1.0, norm2(x))


def is_partial_isometry(x: TwoBox, tol: float = 1e-8) -> bool:
    return is_projection(multiply(adjoint(x), x), tol)


def is_multiple_of_partial_isometry(x: TwoBox, tol: float = 1e-8) -> bool:
    """All nonzero singular values agree (the zero element is excluded)."""
    s = singular_values(x)
    top = s.max(initial=0.0)
    if top == 0:
        return False
    nz = s[s > RANK_TOL * top]
    return bool(nz.min() >= top * (1 - tol))


def is_extremal(x: TwoBox, tol: float = 1e-8) -> bool:
    """||F(x)||_inf == ||x||_1 / delta within relative tol."""
    lhs = pnorm(sft(x), np.inf)
    rhs = pnorm(x, 1) / x.delta
    return abs(lhs - rhs) <= tol * max(rhs, 1e-300)


def is_bipositive(x: TwoBox, tol: float = RANK_TOL) -> bool:
    return is_positive(x, tol) and is_positive(sft(x), tol)


@dataclass(frozen=True)
class Predicates:
    is_positive: bool
    is_projection: bool
    is_partial_isometry: bool
    is_extremal: bool
    is_bipositive: bool


def predicates(x: TwoBox, tol: float = 1e-8) -> Predicates:
    return Predicates(
        is_positive=is_positive(x, tol),
        is_projection=is_projection(x, tol),
        is_partial_isometry=is_partial_isometry(x, tol),
        is_extremal=is_extremal(x, tol),
        is_bipositive=is_bipositive(x, tol),
    )


def entropy_of_positive(a: TwoBox) -> float:
    """H(a) = -tr(a log a) with 0 log 0 = 0."""
    if a.shading is MINUS:
        w = np.clip(a.coeff.real, 0.0, None)
    else:
        w = np.clip(_eigh(a)[0], 0.0, None)
    w = w[w > 0]
    return float(-(w * np.log(w)).sum())


def norm_inf(x: TwoBox) -> float:
    return pnorm(x, np.inf)


__all__ = [
    "SpectralData",
    "PolarData",
    "NotSelfAdjointError",
    "apply_function",
    "spectral_decompose",
    "spectral_projection_at",
    "absolute",
    "power_abs",
    "polar",
    "range_projection",
    "support",
    "leq",
    "predicates",
    "Predicates",
    "is_positive",
    "is_projection",
    "is_partial_isometry",
    "is_multiple_of_partial_isometry",
    "is_extremal",
    "is_bipositive",
    "entropy_of_positive",
    "norm_inf",
]
