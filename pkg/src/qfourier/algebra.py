"""The pair of 2-box algebras of a group subfactor.

Plus-shaded elements are group-algebra elements ``sum_g x(g) L_g`` acting on
the left regular representation; Minus-shaded elements are functions on the
group.  The coproduct, string Fourier transform and Markov trace are pinned
so that

* ``delta * (x * y)`` is ordinary convolution on the Minus side,
* ``F(xy) = F(x) * F(y)``,
* ``tr(e1) = 1`` and ``tr(1) = delta**2``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from numbers import Number

import numpy as np

from .groups import FiniteGroup


class Shading(enum.Enum):
    PLUS = "+"
    MINUS = "-"

    def flip(self) -> "Shading":
        return Shading.MINUS if self is Shading.PLUS else Shading.PLUS

    @classmethod
    def parse(cls, value) -> "Shading":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        if key in ("+", "plus", "p"):
            return cls.PLUS
        if key in ("-", "minus", "m"):
            return cls.MINUS
        raise ValueError(f"unknown shading {value!r}")


PLUS = Shading.PLUS
MINUS = Shading.MINUS


class AlgebraMismatchError(ValueError):
    """Two 2-boxes from different groups or shadings were combined."""


@dataclass(frozen=True)
class ModelConstants:
    delta: float
    log_delta: float

    @classmethod
    def of(cls, group: FiniteGroup) -> "ModelConstants":
        return cls(delta=math.sqrt(group.order), log_delta=0.5 * math.log(group.order))


@dataclass(frozen=True, eq=False)
class TwoBox:
    """An element of the Plus or Minus 2-box space of a group model."""

    group: FiniteGroup
    shading: Shading
    coeff: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeff, dtype=complex)
        if c.shape != (self.group.order,):
            raise ValueError(f"expected {self.group.order} coefficients, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeff", c)
        object.__setattr__(self, "shading", Shading.parse(self.shading))

    @property
    def delta(self) -> float:
        return self.group.delta

    def like(self, coeff) -> "TwoBox":
        return TwoBox(self.group, self.shading, coeff)

    def _check(self, other: "TwoBox"):
        if not isinstance(other, TwoBox):
            raise TypeError(f"expected TwoBox, got {type(other).__name__}")
        if other.shading is not self.shading:
            raise AlgebraMismatchError("shading mismatch")
        if not self.group.same_as(other.group):
            raise AlgebraMismatchError("group mismatch")

    def __add__(self, other):
        if isinstance(other, Number):
            return self + other * identity(self.group, self.shading)
        self._check(other)
        return self.like(self.coeff + other.coeff)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1) * other

    def __rsub__(self, other):
        return (-1) * self + other

    def __neg__(self):
        return self.like(-self.coeff)

    def __mul__(self, other):
        if isinstance(other, Number):
            return self.like(self.coeff * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return self.like(self.coeff / other)
        return NotImplemented

    def __matmul__(self, other):
        return multiply(self, other)

    def matrix(self) -> np.ndarray:
        """Matrix of the element: regular representation (Plus) or diagonal (Minus)."""
        if self.shading is PLUS:
            return self.coeff[self.group.quot]
        return np.diag(self.coeff)

    @property
    def adj(self) -> "TwoBox":
        return adjoint(self)

    @property
    def bar(self) -> "TwoBox":
        return contragredient(self)

    def norm(self, p=2) -> float:
        return pnorm(self, p)

    def __repr__(self):
        vals = ", ".join(f"{v:.4g}" for v in self.coeff[:8])
        more = ", ..." if self.group.order > 8 else ""
        return f"TwoBox({self.group.name}, {self.shading.value}, [{vals}{more}])"


def from_matrix(group: FiniteGroup, mat: np.ndarray, shading=PLUS) -> TwoBox:
    """Read an algebra element back from its matrix.

    Plus: the matrix commutes with the right regular representation, so its
    column at the identity holds the coefficients.
    """
    shading = Shading.parse(shading)
    if shading is PLUS:
        return TwoBox(group, PLUS, mat[:, group.id])
    return TwoBox(group, MINUS, np.diag(mat))


def zero(group: FiniteGroup, shading) -> TwoBox:
    return TwoBox(group, shading, np.zeros(group.order))


def identity(group: FiniteGroup, shading) -> TwoBox:
    shading = Shading.parse(shading)
    if shading is PLUS:
        c = np.zeros(group.order)
        c[group.id] = 1.0
    else:
        c = np.ones(group.order)
    return TwoBox(group, shading, c)


def jones_projection(group: FiniteGroup, shading) -> TwoBox:
    """e1: the averaging projection (Plus) or the delta function at the identity (Minus)."""
    shading = Shading.parse(shading)
    if shading is PLUS:
        return TwoBox(group, PLUS, np.full(group.order, 1.0 / group.order))
    c = np.zeros(group.order)
    c[group.id] = 1.0
    return TwoBox(group, MINUS, c)


def basis(group: FiniteGroup, shading, g: int) -> TwoBox:
    """L_g (Plus) or the point mass at g (Minus)."""
    c = np.zeros(group.order)
    c[g] = 1.0
    return TwoBox(group, shading, c)


def indicator(group: FiniteGroup, subset, shading=MINUS) -> TwoBox:
    c = np.zeros(group.order)
    c[sorted(subset)] = 1.0
    return TwoBox(group, shading, c)


def _pair(x: TwoBox, y: TwoBox):
    x._check(y)
    return x.group, x.delta


def multiply(x: TwoBox, y: TwoBox) -> TwoBox:
    """Vertical product xy: group-algebra product (Plus) or pointwise product (Minus)."""
    _pair(x, y)
    if x.shading is PLUS:
        return x.like(x.matrix() @ y.coeff)
    return x.like(x.coeff * y.coeff)


def coproduct(x: TwoBox, y: TwoBox) -> TwoBox:
    """Coproduct x * y: delta * pointwise product (Plus) or convolution / delta (Minus)."""
    _, delta = _pair(x, y)
    if x.shading is PLUS:
        return x.like(delta * x.coeff * y.coeff)
    # (x*y)(g) = (1/delta) sum_h x(h) y(h^{-1} g) = (1/delta) (M(x) y)(g)
    return x.like((x.coeff[x.group.quot] @ y.coeff) / delta)


def convolution_power(x: TwoBox, k: int) -> TwoBox:
    """x^{*(k)}; k = 0 gives e1 (the Jones projection) as in the inverse sum-set theorem."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return jones_projection(x.group, x.shading)
    out = x
    for _ in range(k - 1):
        out = coproduct(out, x)
    return out


def sft(x: TwoBox) -> TwoBox:
    """String Fourier transform (90 degree rotation); flips the shading."""
    g = x.group
    if x.shading is PLUS:
        return TwoBox(g, MINUS, g.delta * x.coeff)
    return TwoBox(g, PLUS, x.coeff[g.inv] / g.delta)


def isft(x: TwoBox) -> TwoBox:
    """Inverse string Fourier transform."""
    g = x.group
    if x.shading is MINUS:
        return TwoBox(g, PLUS, x.coeff / g.delta)
    return TwoBox(g, MINUS, g.delta * x.coeff[g.inv])


def contragredient(x: TwoBox) -> TwoBox:
    """F^2(x): coefficient reversal g -> g^{-1} with no conjugation."""
    return x.like(x.coeff[x.group.inv])


def adjoint(x: TwoBox) -> TwoBox:
    if x.shading is PLUS:
        return x.like(np.conj(x.coeff[x.group.inv]))
    return x.like(np.conj(x.coeff))


def trace(x: TwoBox) -> complex:
    """Markov trace tr_2, normalized so that tr(e1) = 1 and tr(1) = delta**2."""
    if x.shading is PLUS:
        return complex(x.group.order * x.coeff[x.group.id])
    return complex(x.coeff.sum())


def inner(x: TwoBox, y: TwoBox) -> complex:
    """tr(x* y)."""
    x._check(y)
    scale = x.group.order if x.shading is PLUS else 1.0
    return complex(scale * np.vdot(x.coeff, y.coeff))


def singular_values(x: TwoBox) -> np.ndarray:
    """Singular values of x, counted with multiplicity against the Markov trace."""
    if x.shading is PLUS:
        return np.linalg.svd(x.matrix(), compute_uv=False)
    return np.abs(x.coeff)


def norm_from_singular_values(s: np.ndarray, p) -> float:
    p = float(p)
    if p < 1:
        raise ValueError(f"p-norm requires p >= 1, got {p}")
    if s.size == 0:
        return 0.0
    top = float(s.max())
    if math.isinf(p) or top == 0.0:
        return top
    return top * float(np.sum((s / top) ** p)) ** (1.0 / p)


def pnorm(x: TwoBox, p=2) -> float:
    """tr(|x|^p)^(1/p); p = inf gives the operator norm."""
    if float(p) == 2.0:
        return norm2(x)
    return norm_from_singular_values(singular_values(x), p)


def norm2(x: TwoBox) -> float:
    scale = x.group.order if x.shading is PLUS else 1.0
    return math.sqrt(scale * float(np.vdot(x.coeff, x.coeff).real))


def distance(x: TwoBox, y: TwoBox) -> float:
    x._check(y)
    return norm2(x - y)


def is_close(x: TwoBox, y: TwoBox, tol: float = 1e-10) -> bool:
    """||x - y||_2 <= tol * max(1, ||x||_2, ||y||_2)."""
    return distance(x, y) <= tol * max(1.0, norm2(x), norm2(y))


def is_self_adjoint(x: TwoBox, tol: float = 1e-9) -> bool:
    return norm2(x - adjoint(x)) <= tol * max(norm2(x), 1e-300)
