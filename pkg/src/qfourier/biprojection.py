"""Biprojections, shifts and bi-shifts in the group model, plus the Cesàro/absorption machinery."""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import groups as _groups
from .algebra import (
    MINUS,
    PLUS,
    Shading,
    TwoBox,
    adjoint,
    coproduct,
    contragredient,
    convolution_power,
    indicator,
    multiply,
    norm2,
    norm_from_singular_values,
    sft,
    singular_values,
    trace,
)
from .groups import FiniteGroup
from .spectral import (
    entropy_of_positive,
    is_multiple_of_partial_isometry,
    is_extremal,
    is_projection,
    leq,
    range_projection,
    spectral_projection_at,
    support,
)

SATURATION_TOL = 1e-8
EXPONENT_GRID = (1.25, 1.5, 1.75)


class NumericalToleranceError(ArithmeticError):
    """A result that must be a biprojection failed certification."""


class CesaroDivergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class BiprojectionRecord:
    element: TwoBox
    subgroup: frozenset | None
    trace: float

    @property
    def shading(self) -> Shading:
        return self.element.shading


def is_biprojection(x: TwoBox, tol: float = 1e-8) -> bool:
    """x is a projection and F(x) is a positive multiple of a projection."""
    if not is_projection(x, tol) or norm2(x) == 0:
        return False
    fx = sft(x)
    top = norm_from_singular_values(singular_values(fx), np.inf)
    return top > 0 and is_projection(fx / top, tol)


def subgroup_biprojection(group: FiniteGroup, subgroup, shading) -> BiprojectionRecord:
    """(1/|H|) sum_{h in H} L_h on the Plus side; the indicator 1_H on the Minus side."""
    shading = Shading.parse(shading)
    h = frozenset(int(v) for v in subgroup)
    if not _groups.is_subgroup(group, h):
        raise ValueError(f"{sorted(h)} is not a subgroup of {group.name}")
    if shading is PLUS:
        el = indicator(group, h, PLUS) / len(h)
    else:
        el = indicator(group, h, MINUS)
    return BiprojectionRecord(el, h, trace(el).real)


@functools.lru_cache(maxsize=None)
def _enumerate(group: FiniteGroup, shading: Shading) -> tuple:
    return tuple(subgroup_biprojection(group, h, shading) for h in _groups.subgroups(group))


def enumerate_biprojections(group: FiniteGroup, shading) -> list[BiprojectionRecord]:
    """One biprojection per subgroup; this list is complete for a group subfactor."""
    return list(_enumerate(group, Shading.parse(shading)))


def find_biprojection(x: TwoBox, tol: float = 1e-8) -> BiprojectionRecord | None:
    for rec in _enumerate(x.group, x.shading):
        if norm2(rec.element - x) <= tol * max(1.0, norm2(x)):
            return rec
    return None


def _as_record(b) -> BiprojectionRecord:
    if isinstance(b, BiprojectionRecord):
        return b
    rec = find_biprojection(b)
    if rec is None:
        if not is_biprojection(b):
            raise ValueError("element is not a biprojection")
        rec = BiprojectionRecord(b, None, trace(b).real)
    return rec


# ---------------------------------------------------------------- shifts


@dataclass(frozen=True)
class ShiftSet:
    base: BiprojectionRecord
    right_shifts: tuple
    left_shifts: tuple
    dual_range: TwoBox


def shift_set(b) -> ShiftSet:
    """Enumerate the left and right shifts of a subgroup biprojection.

    Minus side: indicators of the cosets Hg (right) and gH (left).  Plus side:
    (1/|H|) sum_h chi(h) L_h for the linear characters chi of H; the Plus
    coproduct is commutative, so left and right shifts coincide.
    """
    rec = _as_record(b)
    if rec.subgroup is None:
        raise ValueError("shift enumeration needs a subgroup witness")
    g, h = rec.element.group, rec.subgroup
    if rec.shading is MINUS:
        right = tuple(indicator(g, c, MINUS) for c in _groups.right_cosets(g, h))
        left = tuple(indicator(g, c, MINUS) for c in _groups.left_cosets(g, h))
    else:
        sub, emb = _groups.subgroup_as_group(g, h)
        table = _groups.character_table(sub)
        shifts = []
        for d, chi in zip(table.dims, table.values):
            if d != 1:
                continue
            c = np.zeros(g.order, dtype=complex)
            c[emb] = chi / len(h)
            shifts.append(TwoBox(g, PLUS, c))
        right = left = tuple(shifts)
    return ShiftSet(rec, right, left, range_projection(sft(rec.element)))


@dataclass(frozen=True)
class ShiftVerdict:
    is_left_shift: bool
    is_right_shift: bool
    is_right_subshift: bool
    is_left_subshift: bool


def _scaled_eq(lhs: TwoBox, rhs: TwoBox, tol: float) -> bool:
    return norm2(lhs - rhs) <= tol * max(1.0, norm2(rhs))


def is_right_shift(p: TwoBox, b, tol: float = 1e-9) -> bool:
    B = _as_record(b).element
    tb = trace(B).real
    return abs(trace(p).real - tb) <= tol * tb and _scaled_eq(coproduct(B, p), (tb / p.delta) * p, tol)


def is_left_shift(p: TwoBox, b, tol: float = 1e-9) -> bool:
    B = _as_record(b).element
    tb = trace(B).real
    return abs(trace(p).real - tb) <= tol * tb and _scaled_eq(coproduct(p, B), (tb / p.delta) * p, tol)


def is_right_subshift(q: TwoBox, b, tol: float = 1e-8) -> bool:
    """Range criterion: R(q * qbar) <= B."""
    B = _as_record(b).element
    return leq(range_projection(coproduct(q, contragredient(q))), B, tol)


def is_left_subshift(q: TwoBox, b, tol: float = 1e-8) -> bool:
    B = _as_record(b).element
    return leq(range_projection(coproduct(contragredient(q), q)), B, tol)


def shift_tests(p: TwoBox, b, tol: float = 1e-9) -> ShiftVerdict:
    if not is_projection(p, 1e-8):
        raise ValueError("shift tests need a projection")
    return ShiftVerdict(
        is_left_shift=is_left_shift(p, b, tol),
        is_right_shift=is_right_shift(p, b, tol),
        is_right_subshift=is_right_subshift(p, b),
        is_left_subshift=is_left_subshift(p, b),
    )


def dominating_right_shift(q: TwoBox, b) -> TwoBox:
    """R(B * q): the candidate right shift of B lying above q."""
    return range_projection(coproduct(_as_record(b).element, q))


# ---------------------------------------------------------------- generated biprojections


def generated_biprojection(x: TwoBox, tol: float = 1e-8) -> BiprojectionRecord:
    """Smallest biprojection B with B x B = x."""
    best = None
    for rec in _enumerate(x.group, x.shading):
        B = rec.element
        if norm2(multiply(multiply(B, x), B) - x) <= tol * max(norm2(x), 1e-300):
            if best is None or rec.trace < best.trace:
                best = rec
    assert best is not None  # the identity always qualifies
    return best


def b1_projection(x: TwoBox) -> BiprojectionRecord:
    """B_1(x): the biprojection generated by x * xbar."""
    return generated_biprojection(coproduct(x, contragredient(x)))


def b2_projection(x: TwoBox, tol: float = 1e-8) -> BiprojectionRecord:
    """B_2(x): spectral projection of xbar * x at ||x||_2^2 / delta."""
    y = coproduct(contragredient(x), x)
    p = spectral_projection_at(y, norm2(x) ** 2 / x.delta, tol)
    rec = find_biprojection(p, 1e-7)
    if rec is None:
        if not is_biprojection(p, 1e-7):
            raise NumericalToleranceError("B_2 spectral projection is not a biprojection")
        rec = BiprojectionRecord(p, None, trace(p).real)
    return rec


def biprojection_leq(b1, b2) -> bool:
    return leq(_as_record(b1).element, _as_record(b2).element)


# ---------------------------------------------------------------- Cesàro means


def convolution_operator(x: TwoBox) -> np.ndarray:
    """Matrix of y -> x * y on coefficient vectors."""
    if x.shading is PLUS:
        return np.diag(x.delta * x.coeff)
    return x.coeff[x.group.quot] / x.delta


def cesaro_partial_means(x: TwoBox):
    """Yield (n, x_n) with x_n = (1/n) sum_{k<=n} x^{*(k)}, literally."""
    power = x
    total = x
    n = 1
    while True:
        yield n, total / n
        power = coproduct(power, x)
        total = total + power
        n += 1


def cesaro_mean(x: TwoBox, tol: float = 1e-10) -> TwoBox:
    """Limit of the Cesàro means of the convolution powers of x.

    The means converge to the projection of x onto the fixed space of
    y -> x * y (mean ergodic theorem), taken along the complementary
    invariant subspace.  The literal means converge only like 1/n.
    """
    if norm_from_singular_values(singular_values(x), 1) > x.delta * (1 + 1e-12):
        warnings.warn("||x||_1 > delta: Cesàro means need not converge", stacklevel=2)
    c = convolution_operator(x)
    n = c.shape[0]
    radius = float(np.abs(np.linalg.eigvals(c)).max())
    if radius > 1 + 1e-9:
        raise CesaroDivergenceError(f"convolution operator has spectral radius {radius:.6g} > 1")
    a = c - np.eye(n)
    _, s, vh = np.linalg.svd(a)
    right = vh[s <= tol * max(1.0, s[0])].conj().T
    if right.shape[1] == 0:
        return 0 * x
    _, s2, vh2 = np.linalg.svd(a.conj().T)
    left = vh2[s2 <= tol * max(1.0, s2[0])].conj().T
    if left.shape[1] != right.shape[1]:
        raise CesaroDivergenceError("eigenvalue 1 is not semisimple")
    gram = left.conj().T @ right
    proj = right @ np.linalg.solve(gram, left.conj().T)
    return x.like(proj @ x.coeff)


# ---------------------------------------------------------------- absorption


def ras(p: TwoBox) -> BiprojectionRecord:
    """Right-absorbing support: the largest biprojection B with R(p * B) = p."""
    best = None
    for rec in _enumerate(p.group, p.shading):
        r = range_projection(coproduct(p, rec.element))
        if norm2(r - p) <= 1e-8 * max(1.0, norm2(p)):
            if best is None or rec.trace > best.trace:
                best = rec
    if best is None:
        raise ValueError("no biprojection is right-absorbed; is p a projection?")
    return best


def absorption_check(a: TwoBox, b: TwoBox, samples: int = 8, seed: int = 0, tol: float = 1e-9) -> bool:
    """Check a * bbar = (tr b / delta) a and a * (xb) = a * (bx) = (tr(xb) / delta) a on random x."""
    delta = a.delta
    tb = trace(b)
    scale = max(1.0, norm2(a))
    if norm2(coproduct(a, b) - (tb / delta) * a) > tol * scale * max(1.0, norm2(b)):
        return False
    if norm2(coproduct(a, contragredient(b)) - (tb / delta) * a) > tol * scale * max(1.0, norm2(b)):
        return False
    rng = np.random.default_rng(seed)
    n = a.group.order
    for _ in range(samples):
        x = a.like(rng.normal(size=n) + 1j * rng.normal(size=n))
        target = (trace(multiply(x, b)) / delta) * a
        bound = tol * scale * max(1.0, norm2(x) * norm2(b))
        if norm2(coproduct(a, multiply(x, b)) - target) > bound:
            return False
        if norm2(coproduct(a, multiply(b, x)) - target) > bound:
            return False
    return True


def is_absorbed(a: TwoBox, b) -> bool:
    """a * (delta / tr B) B = a."""
    B = _as_record(b).element
    lhs = coproduct(a, (a.delta / trace(B).real) * B)
    return norm2(lhs - a) <= 1e-9 * max(1.0, norm2(a))


# ---------------------------------------------------------------- bi-shifts


def make_bishift_abelian(group: FiniteGroup, subgroup, character: int = 0, shift: int = 0) -> TwoBox:
    """Translated subcharacter on an abelian group (Minus shading).

    ``character`` indexes the linear characters of H (0 is trivial);
    ``shift`` is the translating element.
    """
    if not group.is_abelian():
        raise ValueError(f"{group.name} is not abelian")
    h = frozenset(int(v) for v in subgroup)
    if not _groups.is_subgroup(group, h):
        raise ValueError(f"{sorted(h)} is not a subgroup of {group.name}")
    chars = _groups.subgroup_characters(group, h)
    chi = chars[character % len(chars)]
    c = np.zeros(group.order, dtype=complex)
    for k in h:
        c[group.mult[shift, k]] = chi[k]
    return TwoBox(group, MINUS, c)


def entropy(x: TwoBox) -> float:
    """Hirschman-Beckner entropy H(|x|^2) + H(|F(x)|^2)."""
    fx = sft(x)
    return entropy_of_positive(multiply(adjoint(x), x)) + entropy_of_positive(multiply(adjoint(fx), fx))


def entropy_bound(x: TwoBox) -> float:
    """||x||_2^2 (2 log delta - 4 log ||x||_2), attained exactly by bi-shifts."""
    n2 = norm2(x)
    return n2**2 * (2 * math.log(x.delta) - 4 * math.log(n2))


def _rel_eq(lhs: float, rhs: float, tol: float) -> bool:
    return abs(lhs - rhs) <= tol * max(abs(rhs), abs(lhs), 1e-300)


def is_extremal_bipartial_isometry(x: TwoBox, tol: float = SATURATION_TOL) -> bool:
    return (
        is_multiple_of_partial_isometry(x, tol)
        and is_multiple_of_partial_isometry(sft(x), tol)
        and is_extremal(x, tol)
        and is_extremal(sft(x), tol)
    )


@dataclass(frozen=True)
class BishiftCertificate:
    subject: TwoBox
    verdicts: dict = field(default_factory=dict)
    consistent: bool = True
    details: dict = field(default_factory=dict)

    @property
    def is_bishift(self) -> bool:
        return self.consistent and all(self.verdicts.values())


def is_bishift(x: TwoBox, grid=EXPONENT_GRID, tol: float = SATURATION_TOL, entropy_tol: float = 1e-9) -> BishiftCertificate:
    """Evaluate the directly computable characterizations of a bi-shift of a biprojection."""
    if norm2(x) == 0:
        raise ValueError("bi-shift certification needs a nonzero element")
    delta = x.delta
    fx = sft(x)
    sx = singular_values(x)
    sfx = singular_values(fx)
    n1 = norm_from_singular_values(sx, 1)
    y = coproduct(x, contragredient(adjoint(x)))
    sy = singular_values(y)
    s_x, s_fx = support(x), support(fx)
    h_val, h_bound = entropy(x), entropy_bound(x)

    c6 = [
        _rel_eq(norm_from_singular_values(sy, r), n1 * norm_from_singular_values(sx, r) / delta, tol)
        for r in grid
    ]
    c8 = [
        _rel_eq(
            norm_from_singular_values(sfx, t / (t - 1)),
            delta ** (1 - 2 / t) * norm_from_singular_values(sx, t),
            tol,
        )
        for t in grid
    ]
    verdicts = {
        "extremal_bipartial_isometry": is_extremal_bipartial_isometry(x, tol),
        "support_product": _rel_eq(s_x * s_fx, delta**2, tol),
        "entropy": abs(h_val - h_bound) <= entropy_tol * max(1.0, abs(h_bound)),
        "young_self": all(c6),
        "hausdorff_young": all(c8),
        "partial_isometry_support": (
            is_multiple_of_partial_isometry(x, tol)
            and _rel_eq(support(y), s_x, tol)
            and _rel_eq(norm_from_singular_values(sy, 1), n1**2 / delta, tol)
        ),
    }
    grid_consistent = len(set(c6)) == 1 and len(set(c8)) == 1
    consistent = grid_consistent and len(set(verdicts.values())) == 1
    details = {"entropy": h_val, "entropy_bound": h_bound, "support": s_x, "dual_support": s_fx}
    return BishiftCertificate(x, verdicts, consistent, details)


__all__ = [
    "BiprojectionRecord",
    "BishiftCertificate",
    "CesaroDivergenceError",
    "NumericalToleranceError",
    "ShiftSet",
    "ShiftVerdict",
    "absorption_check",
    "b1_projection",
    "b2_projection",
    "biprojection_leq",
    "cesaro_mean",
    "cesaro_partial_means",
    "convolution_operator",
    "convolution_power",
    "dominating_right_shift",
    "entropy",
    "entropy_bound",
    "enumerate_biprojections",
    "find_biprojection",
    "generated_biprojection",
    "is_absorbed",
    "is_biprojection",
    "is_bishift",
    "is_extremal_bipartial_isometry",
    "is_left_shift",
    "is_left_subshift",
    "is_right_shift",
    "is_right_subshift",
    "make_bishift_abelian",
    "ras",
    "shift_set",
    "shift_tests",
    "subgroup_biprojection",
]
