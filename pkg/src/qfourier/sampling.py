"""Seeded random 2-boxes for property sweeps."""

from __future__ import annotations

import numpy as np

from .algebra import MINUS, PLUS, Shading, TwoBox, adjoint, multiply, sft
from .groups import FiniteGroup
from .spectral import spectral_decompose


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_element(group: FiniteGroup, shading, rng=None) -> TwoBox:
    """Complex Gaussian coefficients."""
    rng = _rng(rng)
    n = group.order
    return TwoBox(group, shading, rng.normal(size=n) + 1j * rng.normal(size=n))


def random_self_adjoint(group: FiniteGroup, shading, rng=None) -> TwoBox:
    x = random_element(group, shading, rng)
    return 0.5 * (x + adjoint(x))


def random_positive(group: FiniteGroup, shading, rng=None) -> TwoBox:
    h = random_self_adjoint(group, shading, rng)
    return multiply(h, h)


def random_projection(group: FiniteGroup, shading, rng=None, nonzero: bool = True) -> TwoBox:
    """Minus: indicator of a random subset.  Plus: a random sum of eigenprojections."""
    rng = _rng(rng)
    shading = Shading.parse(shading)
    if shading is MINUS:
        while True:
            mask = rng.random(group.order) < rng.uniform(0.2, 0.8)
            if mask.any() or not nonzero:
                return TwoBox(group, MINUS, mask.astype(float))
    spec = spectral_decompose(random_self_adjoint(group, PLUS, rng))
    while True:
        pick = rng.random(len(spec.projections)) < 0.5
        if pick.any() or not nonzero:
            out = 0 * spec.projections[0]
            for p, keep in zip(spec.projections, pick):
                if keep:
                    out = out + p
            return out


def random_bipositive(group: FiniteGroup, shading, rng=None, terms: int = 2) -> TwoBox:
    """Sum of a a* with a = sum f(g) L_g, f >= 0 sparse; transported by F for Minus."""
    rng = _rng(rng)
    n = group.order
    out = TwoBox(group, PLUS, np.zeros(n))
    for _ in range(terms):
        f = rng.random(n) * (rng.random(n) < rng.uniform(0.3, 1.0))
        if not f.any():
            f[rng.integers(n)] = 1.0
        a = TwoBox(group, PLUS, f)
        out = out + multiply(a, adjoint(a))
    out = out / out.coeff.real.sum()
    return out if Shading.parse(shading) is PLUS else sft(out)


def random_shading(rng=None) -> Shading:
    return PLUS if _rng(rng).random() < 0.5 else MINUS


__all__ = [
    "random_bipositive",
    "random_element",
    "random_positive",
    "random_projection",
    "random_self_adjoint",
    "random_shading",
]
