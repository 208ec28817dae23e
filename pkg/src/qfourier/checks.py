"""Identity checks shared by the command line and the acceptance suite."""

from __future__ import annotations

import math

import numpy as np

from .algebra import (
    MINUS,
    PLUS,
    TwoBox,
    adjoint,
    contragredient,
    coproduct,
    identity,
    isft,
    jones_projection,
    multiply,
    norm2,
    pnorm,
    sft,
    trace,
)
from .groups import FiniteGroup, group_from_spec
from .inequalities import InequalityReport
from .sampling import random_element, random_positive
from .spectral import _eigh, support

IDENTITY_TOL = 1e-9


def identity_report(check: str, group: str, deviation: float, scale: float, tol: float = IDENTITY_TOL,
                    params: dict | None = None) -> InequalityReport:
    """Deviation of an identity against tol * max(1, scale); lhs is the deviation, rhs the allowance."""
    allowance = tol * max(1.0, scale)
    ratio = deviation / allowance
    verdict = "holds" if deviation <= allowance else "violated"
    return InequalityReport(check, group, dict(params or {}), float(deviation), float(allowance), float(ratio), verdict)


def structural_checks(x: TwoBox, y: TwoBox, z: TwoBox, a: TwoBox, b: TwoBox, tol: float = IDENTITY_TOL):
    """Parseval, multiplicativity of F, trace cyclicity, trace of a coproduct and Schur positivity.

    ``x, y, z`` are arbitrary; ``a, b`` positive; all share a shading.
    """
    name = x.group.name
    sh = {"shading": x.shading.value}
    fx = sft(x)
    out = [
        identity_report("parseval", name, abs(norm2(fx) - norm2(x)), norm2(x), tol, sh),
        identity_report("fourier_inverse", name, norm2(isft(fx) - x), norm2(x), tol, sh),
    ]
    lhs = sft(multiply(x, y))
    rhs = coproduct(fx, sft(y))
    out.append(identity_report("fourier_product", name, norm2(lhs - rhs), norm2(rhs), tol, sh))

    t1 = trace(multiply(coproduct(x, y), contragredient(z)))
    t2 = trace(multiply(coproduct(y, z), contragredient(x)))
    out.append(identity_report("trace_cyclicity", name, abs(t1 - t2), abs(t1), tol, sh))

    t3 = trace(coproduct(x, y))
    t4 = trace(x) * trace(y) / x.delta
    out.append(identity_report("trace_coproduct", name, abs(t3 - t4), abs(t4), tol, sh))

    ab = coproduct(a, b)
    w, _ = _eigh(ab)
    top = float(np.abs(w).max(initial=0.0))
    out.append(identity_report("schur_positivity", name, max(0.0, -float(w.min())), top, tol, sh))
    return out


def structural_sweep(group: FiniteGroup, samples: int, rng) -> list[InequalityReport]:
    reports = []
    for k in range(samples):
        shading = PLUS if k % 2 == 0 else MINUS
        x, y, z = (random_element(group, shading, rng) for _ in range(3))
        a, b = (random_positive(group, shading, rng) for _ in range(2))
        reports.extend(structural_checks(x, y, z, a, b))
    return reports


# ---------------------------------------------------------------- the S3 example


def s3_elements(group: FiniteGroup | None = None) -> dict:
    """e1, p1, p2, p3 and q in the S3 group algebra, with elements labelled as permutation tuples."""
    g = group or group_from_spec("S3")
    index = {lab: i for i, lab in enumerate(g.labels)}

    def L(perm):
        c = np.zeros(g.order)
        c[index[perm]] = 1.0
        return TwoBox(g, PLUS, c)

    one = identity(g, PLUS)
    e1 = jones_projection(g, PLUS)
    swaps = {"p1": (0, 2, 1), "p2": (2, 1, 0), "p3": (1, 0, 2)}
    out = {"e1": e1, "one": one}
    for key, perm in swaps.items():
        out[key] = 0.5 * (one + L(perm)) - e1
    out["q"] = (one + L((1, 2, 0)) + L((2, 0, 1))) / 3 - e1
    return out


def s3_identities(coproduct_scale: float = 1.0) -> list[dict]:
    """Computed versus expected values for the S3 projections p_j and q.

    ``coproduct_scale`` deliberately distorts the coproduct (a negative control).
    """

    def cp(u, v):
        return coproduct_scale * coproduct(u, v)

    el = s3_elements()
    e1, one = el["e1"], el["one"]
    ps = [el["p1"], el["p2"], el["p3"]]
    r6 = math.sqrt(6.0)
    rows = []

    def scalar(name, computed, expected):
        rows.append({"identity": name, "computed": complex(computed), "expected": complex(expected),
                     "deviation": abs(complex(computed) - expected)})

    def element(name, computed, expected):
        rows.append({"identity": name, "computed": norm2(computed), "expected": norm2(expected),
                     "deviation": norm2(computed - expected)})

    scalar("tr(e1)", trace(e1), 1)
    for j, p in enumerate(ps, 1):
        scalar(f"tr(p{j})", trace(p), 2)
    scalar("tr(q)", trace(el["q"]), 1)
    for j, p in enumerate(ps, 1):
        element(f"bar(p{j}) = p{j}", contragredient(p), p)
        element(f"p{j}*p{j}", cp(p, p), (2 / r6) * e1 + (1 / r6) * p)
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            pi, pj = ps[i], ps[j]
            element(f"p{i + 1}*p{j + 1}", cp(pi, pj), (1 / r6) * (1.5 * one - pi - pj - e1))
            scalar(f"S(p{i + 1}*p{j + 1})", support(cp(pi, pj)), trace(pi).real * trace(pj).real)
            lhs = multiply(cp(pi, pi), cp(pj, pj))
            rhs = (trace(pi).real * trace(pj).real / 6) * e1 + (1 / 6) * multiply(pi, pj)
            element(f"(p{i + 1}*p{i + 1})(p{j + 1}*p{j + 1})", lhs, rhs)
    return rows


def adjoint_fourier_deviation(x: TwoBox) -> float:
    """||F(x)* - F^{-1}(x*)||_2."""
    return norm2(adjoint(sft(x)) - isft(adjoint(x)))


def holder_trace_ratio(a: TwoBox, b: TwoBox, p: float) -> float:
    """|tr(ab)| / (||a||_p ||b||_q) for conjugate exponents."""
    q = math.inf if p == 1 else (1.0 if math.isinf(p) else p / (p - 1))
    return abs(trace(multiply(a, b))) / (pnorm(a, p) * pnorm(b, q))


__all__ = [
    "adjoint_fourier_deviation",
    "holder_trace_ratio",
    "identity_report",
    "s3_elements",
    "s3_identities",
    "structural_checks",
    "structural_sweep",
]
