"""Young, Hausdorff-Young and Hölder checks, sum-set estimates and their equality cases."""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import groups as _groups
from .algebra import (
    PLUS,
    TwoBox,
    adjoint,
    contragredient,
    convolution_power,
    coproduct,
    isft,
    jones_projection,
    multiply,
    norm2,
    norm_from_singular_values,
    sft,
    singular_values,
    trace,
)
from .biprojection import (
    EXPONENT_GRID,
    _enumerate,
    b1_projection,
    b2_projection,
    biprojection_leq,
    is_bishift,
)
from .spectral import is_projection, leq, range_projection, support

SATURATION_TOL = 1e-8
VIOLATION_TOL = 1e-9
EXPONENT_TOL = 1e-12
INF = math.inf

HOLDS, SATURATED, VIOLATED = "holds", "saturated", "violated"


@dataclass(frozen=True)
class InequalityReport:
    check: str
    group: str
    params: dict
    lhs: float
    rhs: float
    ratio: float
    verdict: str

    def to_dict(self) -> dict:
        d = asdict(self)
        d["params"] = {k: _jsonable(v) for k, v in self.params.items()}
        return d


def _jsonable(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v


def classify(lhs: float, rhs: float, sat_tol: float = SATURATION_TOL, vio_tol: float = VIOLATION_TOL) -> str:
    scale = max(rhs, 1e-300)
    if lhs > rhs * (1 + vio_tol) and lhs - rhs > 1e-300:
        return VIOLATED
    if abs(lhs - rhs) <= sat_tol * scale or (rhs == 0 and lhs == 0):
        return SATURATED
    return HOLDS


def _report(check, x, params, lhs, rhs) -> InequalityReport:
    ratio = lhs / rhs if rhs > 0 else (1.0 if lhs == 0 else INF)
    return InequalityReport(check, x.group.name, dict(params), float(lhs), float(rhs), float(ratio), classify(lhs, rhs))


def _recip(p) -> float:
    return 0.0 if math.isinf(p) else 1.0 / p


def young_exponent(t, s) -> float:
    """r with 1/r + 1 = 1/t + 1/s."""
    inv = _recip(t) + _recip(s) - 1.0
    if inv < -EXPONENT_TOL or inv > 1 + EXPONENT_TOL:
        raise ValueError(f"no Young exponent r for t={t}, s={s}")
    return INF if inv <= EXPONENT_TOL else 1.0 / inv


def _check_exponent(p):
    if not (p >= 1 - EXPONENT_TOL):
        raise ValueError(f"exponent must lie in [1, inf], got {p}")


# ---------------------------------------------------------------- inequalities


def young_from_singular_values(x, y, sx, sy, sxy, r, t, s) -> InequalityReport:
    lhs = norm_from_singular_values(sxy, r)
    rhs = norm_from_singular_values(sx, t) * norm_from_singular_values(sy, s) / x.delta
    return _report("young", x, {"r": r, "t": t, "s": s}, lhs, rhs)


def young_check(x: TwoBox, y: TwoBox, r, t, s) -> InequalityReport:
    """||x * y||_r <= (1/delta) ||x||_t ||y||_s with 1/r + 1 = 1/t + 1/s."""
    for p in (r, t, s):
        _check_exponent(p)
    if abs(_recip(r) + 1 - _recip(t) - _recip(s)) > EXPONENT_TOL:
        raise ValueError(f"exponents violate 1/r + 1 = 1/t + 1/s: r={r}, t={t}, s={s}")
    xy = coproduct(x, y)
    return young_from_singular_values(x, y, singular_values(x), singular_values(y), singular_values(xy), r, t, s)


def hausdorff_young_check(x: TwoBox, t) -> InequalityReport:
    """||F(x)||_t <= (1/delta)^(1 - 2/t) ||x||_s with 2 <= t <= inf and 1/t + 1/s = 1."""
    if not (t >= 2 - EXPONENT_TOL):
        raise ValueError(f"Hausdorff-Young needs t >= 2, got {t}")
    s = 1.0 if math.isinf(t) else t / (t - 1)
    return _hy_from_singular_values(x, singular_values(x), singular_values(sft(x)), t, s)


def _hy_from_singular_values(x, sx, sfx, t, s) -> InequalityReport:
    lhs = norm_from_singular_values(sfx, t)
    rhs = x.delta ** -(1 - 2 * _recip(t)) * norm_from_singular_values(sx, s)
    return _report("hausdorff_young", x, {"t": t, "s": s}, lhs, rhs)


def holder_check(x: TwoBox, y: TwoBox, t, s) -> InequalityReport:
    """||xy||_r <= ||x||_t ||y||_s with 1/r = 1/t + 1/s."""
    _check_exponent(t)
    _check_exponent(s)
    inv = _recip(t) + _recip(s)
    if inv > 1 + EXPONENT_TOL:
        raise ValueError(f"Hölder exponent r < 1 for t={t}, s={s}")
    r = INF if inv == 0 else 1.0 / inv
    lhs = norm_from_singular_values(singular_values(multiply(x, y)), r)
    rhs = norm_from_singular_values(singular_values(x), t) * norm_from_singular_values(singular_values(y), s)
    return _report("holder", x, {"r": r, "t": t, "s": s}, lhs, rhs)


YOUNG_GRID = (1.0, 1.25, 1.5, 1.75, 2.0, INF)
HY_GRID = (2.0, 3.0, 4.0, INF)
HOLDER_GRID = (1.0, 2.0, 3.0, INF)


def young_pairs(grid=YOUNG_GRID):
    """(r, t, s) triples from the grid with 1/t + 1/s >= 1."""
    for t, s in itertools.product(grid, repeat=2):
        if _recip(t) + _recip(s) >= 1 - EXPONENT_TOL:
            yield young_exponent(t, s), t, s


def inequality_sweep(x: TwoBox, y: TwoBox) -> list[InequalityReport]:
    """All grid checks for one pair; singular values are computed once."""
    sx, sy = singular_values(x), singular_values(y)
    sxy = singular_values(coproduct(x, y))
    out = [young_from_singular_values(x, y, sx, sy, sxy, r, t, s) for r, t, s in young_pairs()]
    sfx = singular_values(sft(x))
    for t in HY_GRID:
        out.append(_hy_from_singular_values(x, sx, sfx, t, 1.0 if math.isinf(t) else t / (t - 1)))
    for t, s in itertools.product(HOLDER_GRID, repeat=2):
        if _recip(t) + _recip(s) <= 1:
            out.append(holder_check(x, y, t, s))
    return out


# ---------------------------------------------------------------- sum sets


@dataclass(frozen=True)
class SumsetReport:
    lower: float
    value: float
    upper: float
    trace_p: float
    trace_q: float
    lower_equality: bool
    upper_equality: bool
    lower_certified: bool | None = None

    @property
    def consistent(self) -> bool:
        tol = 1e-6
        bounds = self.lower - tol <= self.value <= self.upper + tol
        return bounds and self.lower_certified is not False


def _require_projection(*ps):
    for p in ps:
        if not is_projection(p, 1e-8):
            raise ValueError("sum-set estimates need projections")


def _is_int_close(a: float, b: float) -> bool:
    return abs(a - b) <= 1e-6 * max(1.0, abs(b))


def sumset_bounds(p: TwoBox, q: TwoBox) -> SumsetReport:
    """max(tr p, tr q) <= S(p * q) <= tr p tr q.

    At the lower end S(p * q) = tr q, (delta / tr p) p * q is checked to be a
    projection (and symmetrically with p and q exchanged).
    """
    _require_projection(p, q)
    tp, tq = trace(p).real, trace(q).real
    pq = coproduct(p, q)
    value = support(pq)
    certified = None
    if _is_int_close(value, tq):
        certified = is_projection((p.delta / tp) * pq, 1e-7)
    if _is_int_close(value, tp):
        ok = is_projection((p.delta / tq) * pq, 1e-7)
        certified = ok if certified is None else (certified and ok)
    lower = max(tp, tq)
    return SumsetReport(
        lower=lower,
        value=value,
        upper=tp * tq,
        trace_p=tp,
        trace_q=tq,
        lower_equality=_is_int_close(value, lower),
        upper_equality=_is_int_close(value, tp * tq),
        lower_certified=certified,
    )


@dataclass(frozen=True)
class Certificate:
    """Verdicts of an equivalence theorem on one input; ``consistent`` means they agree."""

    name: str
    verdicts: dict
    consistent: bool
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(self.verdicts.values())


INVERSE_POWERS = [(m, j) for m in (0, 1, 2) for j in (0, 1) if m + j > 0]


def inverse_sumset_certify(p: TwoBox, q: TwoBox) -> Certificate:
    """Equality S(p * q) = tr p and its equivalent forms."""
    _require_projection(p, q)
    tp = trace(p).real
    qq = coproduct(q, contragredient(q))
    e1 = jones_projection(p.group, p.shading)

    c1 = _is_int_close(support(coproduct(p, q)), tp)
    powered = []
    for m, j in INVERSE_POWERS:
        z = coproduct(coproduct(p, convolution_power(qq, m) if m else e1), q if j else e1)
        powered.append(_is_int_close(support(z), tp))

    r_qq = range_projection(qq)
    witness = None
    for rec in _enumerate(p.group, p.shading):
        if not leq(r_qq, rec.element):
            continue
        if norm2(range_projection(coproduct(p, rec.element)) - p) <= 1e-8 * max(1.0, norm2(p)):
            if witness is None or rec.trace < witness.trace:
                witness = rec
    b1q = b1_projection(q)
    b2p = b2_projection(p)
    verdicts = {
        "support_equals_trace": c1,
        "some_power": any(powered),
        "all_powers": all(powered),
        "biprojection_witness": witness is not None,
        "b1_below_b2": biprojection_leq(b1q, b2p),
    }
    consistent = len(set(verdicts.values())) == 1
    details = {"witness": None if witness is None else sorted(witness.subgroup or ()), "powers": powered}
    return Certificate("inverse_sumset", verdicts, consistent, details)


def upper_sumset_certify(p: TwoBox, q: TwoBox, tol: float = 1e-9) -> Certificate:
    _require_projection(p, q)
    tp, tq = trace(p).real, trace(q).real
    lhs = multiply(coproduct(contragredient(p), p), coproduct(q, contragredient(q)))
    target = (tp * tq / p.delta**2) * jones_projection(p.group, p.shading)
    c1 = norm2(lhs - target) <= tol * max(1.0, norm2(target))
    c2 = is_projection(p.delta * coproduct(p, q), 1e-8)
    c3 = _is_int_close(support(coproduct(p, q)), tp * tq)
    verdicts = {"e1_identity": c1, "scaled_projection": c2, "support_product": c3}
    return Certificate("upper_sumset", verdicts, c1 == c2 and (c3 or not c2))


def _saturated(rep: InequalityReport) -> bool:
    return rep.verdict == SATURATED


def young_extremal_certify(x: TwoBox, y: TwoBox, grid=EXPONENT_GRID) -> Certificate:
    if norm2(x) == 0 or norm2(y) == 0:
        raise ValueError("extremal certification needs nonzero elements")
    sx, sy = singular_values(x), singular_values(y)
    sxy = singular_values(coproduct(x, y))
    sat = [
        _saturated(young_from_singular_values(x, y, sx, sy, sxy, young_exponent(t, s), t, s))
        for t, s in itertools.product(grid, repeat=2)
    ]
    lhs_range = range_projection(adjoint(isft(x)))
    rhs_range = range_projection(isft(y))
    ranges_match = norm2(lhs_range - rhs_range) <= 1e-8 * max(1.0, norm2(rhs_range))
    structural = is_bishift(x).is_bishift and is_bishift(y).is_bishift and ranges_match
    verdicts = {"saturated": all(sat), "bishift_pair": structural}
    consistent = len(set(sat)) == 1 and all(sat) == structural
    return Certificate("young_extremal", verdicts, consistent, {"grid": sat})


def hy_extremal_certify(x: TwoBox, grid=EXPONENT_GRID) -> Certificate:
    if norm2(x) == 0:
        raise ValueError("extremal certification needs a nonzero element")
    sx, sfx = singular_values(x), singular_values(sft(x))
    sat = [_saturated(_hy_from_singular_values(x, sx, sfx, t / (t - 1), t)) for t in grid]
    cert = is_bishift(x)
    verdicts = {"saturated": all(sat), "bishift": cert.is_bishift}
    consistent = len(set(sat)) == 1 and cert.consistent and all(sat) == cert.is_bishift
    return Certificate("hausdorff_young_extremal", verdicts, consistent, {"grid": sat})


# ---------------------------------------------------------------- representations


def central_projection(group, chars: tuple) -> TwoBox:
    """Sum of the central projections z_chi = (d/n) sum_g conj(chi(g)) L_g."""
    table = _groups.character_table(group)
    c = np.zeros(group.order, dtype=complex)
    for k in chars:
        c += table.dims[k] / group.order * np.conj(table.values[k])
    return TwoBox(group, PLUS, c)


def tensor_constituents(table, a: tuple, b: tuple) -> tuple:
    """Irreducibles occurring in (sum_a chi)(sum_b chi), by class-function inner products."""
    n = table.group.order
    phi = sum(table.values[i] for i in a) * sum(table.values[j] for j in b)
    mult = np.array([np.vdot(psi, phi) for psi in table.values]) / n
    return tuple(int(k) for k in np.flatnonzero(mult.real > 0.5))


@dataclass(frozen=True)
class RepSumsetRow:
    v: tuple
    w: tuple
    size_v: int
    size_w: int
    value: float
    oracle: int
    report: SumsetReport

    @property
    def matches(self) -> bool:
        return abs(self.value - round(self.value)) < 1e-6 and round(self.value) == self.oracle


def rep_sumset_report(group, max_size: int | None = None) -> list[RepSumsetRow]:
    """Sum-set estimate for every pair of central projections (nonempty sets of irreducibles)."""
    table = _groups.character_table(group)
    k = len(table.dims)
    top = k if max_size is None else min(k, max_size)
    subsets = [c for size in range(1, top + 1) for c in itertools.combinations(range(k), size)]
    proj = {a: central_projection(group, a) for a in subsets}
    rows = []
    for a in subsets:
        for b in subsets:
            rep = sumset_bounds(proj[a], proj[b])
            oracle = sum(table.dims[c] ** 2 for c in tensor_constituents(table, a, b))
            rows.append(
                RepSumsetRow(
                    v=a,
                    w=b,
                    size_v=sum(table.dims[c] ** 2 for c in a),
                    size_w=sum(table.dims[c] ** 2 for c in b),
                    value=rep.value,
                    oracle=int(oracle),
                    report=rep,
                )
            )
    return rows


__all__ = [
    "Certificate",
    "InequalityReport",
    "RepSumsetRow",
    "SumsetReport",
    "central_projection",
    "classify",
    "hausdorff_young_check",
    "holder_check",
    "hy_extremal_certify",
    "inequality_sweep",
    "inverse_sumset_certify",
    "rep_sumset_report",
    "sumset_bounds",
    "tensor_constituents",
    "upper_sumset_certify",
    "young_check",
    "young_exponent",
    "young_extremal_certify",
    "young_pairs",
]
