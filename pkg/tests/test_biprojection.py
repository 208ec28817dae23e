import itertools
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import CORPUS
from qfourier import groups as G
from qfourier.algebra import (
    MINUS,
    PLUS,
    TwoBox,
    adjoint,
    basis,
    contragredient,
    coproduct,
    identity,
    indicator,
    jones_projection,
    multiply,
    norm2,
    sft,
    trace,
)
from qfourier.biprojection import (
    CesaroDivergenceError,
    absorption_check,
    b1_projection,
    b2_projection,
    cesaro_mean,
    cesaro_partial_means,
    dominating_right_shift,
    entropy,
    entropy_bound,
    enumerate_biprojections,
    find_biprojection,
    generated_biprojection,
    is_absorbed,
    is_biprojection,
    is_bishift,
    is_right_subshift,
    make_bishift_abelian,
    ras,
    shift_set,
    shift_tests,
    subgroup_biprojection,
)
from qfourier.groups import group_from_spec
from qfourier.sampling import random_bipositive, random_element, random_projection
from qfourier.spectral import is_projection, leq

seeds = st.integers(0, 2**32 - 1)


def close(x, y, tol=1e-9):
    return norm2(x - y) <= tol * max(1.0, norm2(x), norm2(y))


def _sub(g, size):
    return next(h for h in G.subgroups(g) if len(h) == size)


# ---------------------------------------------------------------- construction


def test_trivial_and_full_subgroups():
    g = group_from_spec("S3")
    assert close(subgroup_biprojection(g, {0}, PLUS).element, identity(g, PLUS))
    assert close(subgroup_biprojection(g, {0}, MINUS).element, jones_projection(g, MINUS))
    assert close(subgroup_biprojection(g, range(6), PLUS).element, jones_projection(g, PLUS))


def test_a3_trace():
    g = group_from_spec("S3")
    assert subgroup_biprojection(g, _sub(g, 3), PLUS).trace == pytest.approx(2)


def test_non_subgroup_rejected():
    with pytest.raises(ValueError):
        subgroup_biprojection(group_from_spec("Z6"), {0, 1}, MINUS)


@pytest.mark.parametrize("name, count", [("Z2", 2), ("S3", 6), ("Z2xZ2", 5)])
def test_enumeration_counts(name, count):
    assert len(enumerate_biprojections(group_from_spec(name), PLUS)) == count


@pytest.mark.parametrize("name", CORPUS)
def test_enumerated_biprojections_invariants(name):
    g = group_from_spec(name)
    for sh in (PLUS, MINUS):
        for rec in enumerate_biprojections(g, sh):
            b = rec.element
            assert is_biprojection(b)
            assert close(coproduct(b, b), (trace(b).real / g.delta) * b)
            assert close(contragredient(b), b)


def test_non_biprojection_projection():
    g = group_from_spec("Z6")
    p = indicator(g, {0, 1}, MINUS)
    assert is_projection(p) and not is_biprojection(p)


# ---------------------------------------------------------------- shifts


@pytest.mark.parametrize("name", ["S3", "D4", "Q8", "Z2xZ4"])
def test_shift_sets_satisfy_shift_equations(name):
    g = group_from_spec(name)
    for sh in (PLUS, MINUS):
        for rec in enumerate_biprojections(g, sh):
            ss = shift_set(rec)
            tb = rec.trace
            for p in ss.right_shifts:
                assert is_projection(p)
                assert trace(p).real == pytest.approx(tb)
                assert close(coproduct(rec.element, p), (tb / g.delta) * p)
            for p in ss.left_shifts:
                assert close(coproduct(p, rec.element), (tb / g.delta) * p)


def test_coset_indicators_are_shifts():
    g = group_from_spec("S3")
    h = _sub(g, 2)
    rec = subgroup_biprojection(g, h, MINUS)
    for c in G.left_cosets(g, h):
        v = shift_tests(indicator(g, c, MINUS), rec)
        assert v.is_left_shift
    for c in G.right_cosets(g, h):
        v = shift_tests(indicator(g, c, MINUS), rec)
        assert v.is_right_shift and v.is_right_subshift


def test_biprojection_is_its_own_shift():
    g = group_from_spec("D4")
    for sh in (PLUS, MINUS):
        for rec in enumerate_biprojections(g, sh):
            v = shift_tests(rec.element, rec)
            assert v.is_left_shift and v.is_right_shift


def test_point_mass_is_right_subshift():
    g = group_from_spec("Z6")
    rec = subgroup_biprojection(g, {0, 3}, MINUS)
    for k in range(6):
        assert shift_tests(basis(g, MINUS, k), rec).is_right_subshift


def test_shift_tests_reject_non_projection():
    g = group_from_spec("Z4")
    with pytest.raises(ValueError):
        shift_tests(2.0 * basis(g, MINUS, 1), subgroup_biprojection(g, {0}, MINUS))


@pytest.mark.parametrize("name", ["S3", "Z6", "D4"])
def test_subshift_criterion_against_coset_containment(name):
    # q = 1_S is a right subshift of 1_H iff S lies in a single right coset Hg
    g = group_from_spec(name)
    for h in G.subgroups(g):
        rec = subgroup_biprojection(g, h, MINUS)
        cosets = G.right_cosets(g, h)
        for r in (1, 2, 3):
            for s in itertools.combinations(range(g.order), r):
                inside = any(set(s) <= c for c in cosets)
                assert is_right_subshift(indicator(g, s, MINUS), rec) == inside


@pytest.mark.parametrize("name", ["S3", "Z6"])
def test_dominating_shift_contains_subshift(name):
    g = group_from_spec(name)
    for rec in enumerate_biprojections(g, MINUS):
        for c in G.right_cosets(g, rec.subgroup):
            q = basis(g, MINUS, min(c))
            p1 = dominating_right_shift(q, rec)
            assert leq(q, p1)
            assert shift_tests(p1, rec).is_right_shift


def test_plus_subshifts_match_shift_domination():
    g = group_from_spec("S3")
    rng = np.random.default_rng(5)
    for rec in enumerate_biprojections(g, PLUS):
        shifts = shift_set(rec).right_shifts
        for p in shifts:
            assert is_right_subshift(p, rec)
        for _ in range(20):
            q = random_projection(g, PLUS, rng)
            dominated = any(leq(q, p, 1e-7) for p in shifts)
            assert is_right_subshift(q, rec) == dominated


# ---------------------------------------------------------------- generated biprojections


def test_generated_examples():
    g = group_from_spec("Z6")
    e1 = jones_projection(g, PLUS)
    assert close(generated_biprojection(e1).element, e1)
    for sh in (PLUS, MINUS):
        for rec in enumerate_biprojections(g, sh):
            assert generated_biprojection(rec.element).subgroup == rec.subgroup
    assert generated_biprojection(basis(g, MINUS, 1)).subgroup == frozenset(range(6))
    assert generated_biprojection(basis(g, MINUS, 2)).subgroup == frozenset({0, 2, 4})


@pytest.mark.parametrize("name", ["Z6", "S3", "D4"])
def test_generated_matches_support_growth(name):
    # the subgroup generated by supp(x) equals the support of sum_k x^{*(k)} for x >= 0
    g = group_from_spec(name)
    rng = np.random.default_rng(0)
    for _ in range(10):
        s = rng.choice(g.order, size=2, replace=False)
        x = indicator(g, s, MINUS)
        acc, power = x, x
        for _ in range(g.order):
            power = coproduct(power, x)
            acc = acc + power
        grown = frozenset(np.flatnonzero(np.abs(acc.coeff) > 1e-12)) | {0}
        assert generated_biprojection(x).subgroup == grown


def test_b1_of_point_mass_is_trivial():
    g = group_from_spec("Z6")
    assert b1_projection(basis(g, MINUS, 1)).subgroup == frozenset({0})


def test_b2_examples():
    g = group_from_spec("S3")
    for sh in (PLUS, MINUS):
        for rec in enumerate_biprojections(g, sh):
            assert b2_projection(rec.element).subgroup == rec.subgroup
    e1 = jones_projection(g, PLUS)
    assert close(b2_projection(e1).element, e1)
    z2 = group_from_spec("Z2")
    one = identity(z2, PLUS)
    assert close(b2_projection(one).element, one)


def test_b2_is_largest_absorbed():
    # for projections, B_2(p) is the largest biprojection with R(p * B) = p
    g = group_from_spec("S3")
    for s in [{0, 1}, {0, 3, 4}, {1, 2}, {0}]:
        p = indicator(g, s, MINUS)
        assert b2_projection(p).subgroup == ras(p).subgroup


# ---------------------------------------------------------------- Cesàro means


def test_cesaro_unit():
    g = group_from_spec("S3")
    x = g.delta * jones_projection(g, PLUS)
    assert close(cesaro_mean(x), x)


@pytest.mark.parametrize("name", ["Z4", "S3", "Q8"])
def test_cesaro_scaled_biprojection_is_fixed(name):
    g = group_from_spec(name)
    for sh in (PLUS, MINUS):
        for rec in enumerate_biprojections(g, sh):
            x = (g.delta / rec.trace) * rec.element
            assert close(cesaro_mean(x), x)


def test_cesaro_z4_against_literal_means():
    g = group_from_spec("Z4")
    x = TwoBox(g, MINUS, [0, 1.2, 0, 0.8])  # positive, trace delta, generates Z4
    a = cesaro_mean(x)
    rec = generated_biprojection(x)
    assert rec.subgroup == frozenset(range(4))
    assert close(a, (g.delta / rec.trace) * rec.element)
    for n, m in cesaro_partial_means(x):
        if n == 4000:
            break
    # literal means converge like 1/n
    assert norm2(m - a) < 2e-3


@pytest.mark.parametrize("name", ["Z6", "S3", "D4"])
def test_cesaro_limit_is_idempotent(name):
    g = group_from_spec(name)
    rng = np.random.default_rng(1)
    for sh in (PLUS, MINUS):
        for _ in range(5):
            x = random_bipositive(g, sh, rng)
            x = (g.delta / trace(x).real) * x  # ||x||_1 = tr x = delta
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    a = cesaro_mean(x)
            except CesaroDivergenceError:
                continue
            if norm2(a) < 1e-9:
                continue
            assert close(coproduct(a, a), a, 1e-8)
            fa = sft(a)
            assert close(multiply(fa, fa), fa, 1e-8)
            top = float(np.abs(np.linalg.svd(a.matrix(), compute_uv=False)).max())
            assert is_biprojection(a / top, 1e-7)


def test_cesaro_divergence():
    g = group_from_spec("Z3")
    with pytest.warns(UserWarning):
        with pytest.raises(CesaroDivergenceError):
            cesaro_mean(3.0 * g.delta * jones_projection(g, PLUS))


# ---------------------------------------------------------------- absorption


def test_ras_examples():
    g = group_from_spec("S3")
    h = _sub(g, 3)
    rec = subgroup_biprojection(g, h, MINUS)
    assert ras(rec.element).subgroup == rec.subgroup
    assert ras(jones_projection(g, MINUS)).subgroup == frozenset({0})
    z = group_from_spec("Z6")
    h = frozenset({0, 3})
    p = indicator(z, h | {1, 4}, MINUS)
    assert ras(p).subgroup == h


def _coset_constant(g, h, rng):
    c = np.zeros(g.order, dtype=complex)
    for coset in G.left_cosets(g, h):
        c[list(coset)] = rng.normal() + 1j * rng.normal()
    return TwoBox(g, MINUS, c)


@pytest.mark.parametrize("name", ["S3", "D4", "Z6"])
def test_absorbed_set_is_algebra(name):
    g = group_from_spec(name)
    rng = np.random.default_rng(3)
    for rec in enumerate_biprojections(g, MINUS):
        b = rec.element
        a1, a2 = _coset_constant(g, rec.subgroup, rng), _coset_constant(g, rec.subgroup, rng)
        for a in (a1, a2, a1 + a2, multiply(a1, a2), adjoint(a1)):
            assert absorption_check(a, b)
            assert is_absorbed(a, rec)


def test_absorption_fails_off_cosets():
    g = group_from_spec("Z6")
    rec = subgroup_biprojection(g, {0, 3}, MINUS)
    assert not absorption_check(basis(g, MINUS, 1), rec.element)


def test_plus_absorbed_set_is_subalgebra():
    g = group_from_spec("S3")
    rng = np.random.default_rng(4)
    for rec in enumerate_biprojections(g, PLUS):
        c = np.zeros(6, dtype=complex)
        c[list(rec.subgroup)] = rng.normal(size=len(rec.subgroup))
        a = TwoBox(g, PLUS, c)
        assert absorption_check(a, rec.element)


# ---------------------------------------------------------------- bi-shifts


def test_make_bishift_examples():
    z4 = group_from_spec("Z4")
    assert np.allclose(make_bishift_abelian(z4, {0, 2}, 1, 1).coeff, [0, 1, 0, -1])
    z2 = group_from_spec("Z2")
    assert np.allclose(make_bishift_abelian(z2, {0, 1}, 1, 0).coeff, [1, -1])
    z6 = group_from_spec("Z6")
    assert close(make_bishift_abelian(z6, {0, 2, 4}), indicator(z6, {0, 2, 4}, MINUS))
    x = make_bishift_abelian(z6, {0, 3}, 1, 2)
    assert norm2(x) == pytest.approx(math.sqrt(2))
    with pytest.raises(ValueError):
        make_bishift_abelian(group_from_spec("S3"), {0})


@pytest.mark.parametrize("name", ["Z4", "Z6", "Z2xZ4"])
def test_translated_subcharacters_are_bishifts(name):
    g = group_from_spec(name)
    for h in G.subgroups(g):
        for c in range(len(h)):
            for s in range(g.order):
                x = make_bishift_abelian(g, h, c, s)
                for y in (x, sft(x), 2.5 * x):
                    cert = is_bishift(y)
                    assert cert.consistent and cert.is_bishift, cert.verdicts


def test_e1_is_bishift():
    for sh in (PLUS, MINUS):
        assert is_bishift(jones_projection(group_from_spec("S3"), sh)).is_bishift


@given(st.sampled_from(["Z4", "Z6", "S3", "Q8"]), seeds, st.sampled_from([PLUS, MINUS]))
def test_random_elements_are_not_bishifts(name, seed, sh):
    x = random_element(group_from_spec(name), sh, np.random.default_rng(seed))
    cert = is_bishift(x)
    assert cert.consistent and not any(cert.verdicts.values())


def test_entropy_closed_forms():
    g = group_from_spec("Z6")
    e1 = jones_projection(g, PLUS)
    assert entropy(e1) == pytest.approx(2 * math.log(g.delta), abs=1e-12)
    one = identity(g, PLUS)
    assert entropy(one) == pytest.approx(entropy_bound(one), abs=1e-12)
    assert entropy(one / norm2(one)) == pytest.approx(2 * math.log(g.delta), abs=1e-12)
    x = make_bishift_abelian(g, {0, 2, 4}, 1, 1)
    x = x / norm2(x)
    assert entropy(x) == pytest.approx(2 * math.log(g.delta), abs=1e-12)
    assert entropy_bound(x) == pytest.approx(2 * math.log(g.delta), abs=1e-12)


def test_find_biprojection():
    g = group_from_spec("Q8")
    rec = enumerate_biprojections(g, PLUS)[2]
    assert find_biprojection(rec.element).subgroup == rec.subgroup
    assert find_biprojection(identity(g, PLUS) * 0.5) is None
