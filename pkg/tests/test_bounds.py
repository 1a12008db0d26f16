import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from unimoments import bounds as bd
from unimoments import correlation as corr
from unimoments import fixtures
from unimoments.errors import DimensionTooSmall, SupportTooLarge

seeds = st.integers(0, 2**32 - 1)
X4_BOUND = math.sqrt(2) / (1 + math.sqrt(2))


def x4():
    return corr.validate(fixtures.x4())


@pytest.mark.parametrize("n,ratio", [(3, Fraction(1)), (4, Fraction(1, 2)), (5, Fraction(3, 10)), (6, Fraction(1, 5))])
def test_averaging_ratio_exact(n, ratio):
    assert bd.averaging_ratio(n) == ratio
    cert = bd.averaging_bound(corr.random_correlation(n, rng=n), certify=False)
    assert cert.bound_c == float(ratio)
    assert cert.evidence["ratio"] == ratio


@pytest.mark.parametrize("n", range(3, 9))
def test_group_size(n):
    assert len(bd.sigma_group(n)) == math.comb(n, 3) * math.factorial(n - 3)


def test_sigma_block_orientation():
    x = corr.random_correlation(5, rng=0)
    s = (3, 0, 4, 1, 2)
    b = bd.sigma_block(x, s)
    for a in range(3):
        for c in range(3):
            assert b[s[a], s[c]] == x.entries[s[a], s[c]]
    rest = [1, 2]
    assert np.allclose(b[np.ix_(rest, rest)], np.eye(2))


@given(st.integers(3, 7), seeds)
def test_averaging_identity(n, seed):
    x = corr.random_correlation(n, rng=seed)
    avg = bd.sigma_average(x)
    assert np.abs(avg.averaged - bd.target(x, float(bd.averaging_ratio(n)))).max() <= 1e-12


def test_small_dimension_rejected():
    with pytest.raises(DimensionTooSmall):
        bd.averaging_bound(corr.identity(2))
    with pytest.raises(DimensionTooSmall):
        bd.best_lower_bound(corr.identity(2))


def test_eigen_shift_examples():
    assert bd.eigen_shift_bound(corr.identity(4)).bound_c == 1
    # rank-deficient input: no improvement over plain averaging
    assert bd.eigen_shift_bound(x4()).bound_c == pytest.approx(0.5)
    x = corr.validate(0.5 * np.eye(4) + 0.5 * np.ones((4, 4)))
    cert = bd.eigen_shift_bound(x)
    assert cert.evidence["lambda0"] == pytest.approx(0.5) and cert.bound_c == 1


def test_skew_x4_worked_example():
    cert = bd.skew_reduction_bound(x4())
    assert cert.bound_c == pytest.approx(X4_BOUND, abs=1e-9)
    assert cert.evidence["d"] == pytest.approx(math.sqrt(2))
    assert cert.evidence["skew_norm"] == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    # the chosen phases equal the worked rotation up to a global phase
    ph = np.asarray(cert.evidence["phases"])
    ratio = ph / fixtures.X4_ROTATION
    assert np.allclose(ratio, ratio[0])


def test_skew_x4_without_rotation():
    cand = bd.skew_candidate(x4(), None)
    assert cand.norm == pytest.approx(math.sqrt(3) / 2, abs=1e-12)
    assert cand.d == pytest.approx(2 / math.sqrt(3))
    assert cand.bound == pytest.approx(0.5359, abs=1e-4)


def test_skew_real_input():
    for n in (3, 4, 5):
        cert = bd.skew_reduction_bound(corr.random_correlation(n, real=True, rng=n))
        assert cert.bound_c == 1 and cert.evidence["d"] == "inf"


def test_skew_large_support():
    with pytest.raises(SupportTooLarge):
        bd.skew_reduction_bound(corr.random_correlation(5, rng=1))


def test_skew_n6_matrix_unitary_only():
    cert = bd.skew_reduction_bound(corr.random_correlation(6, real=True, rng=2))
    assert cert.bound_c is None and cert.bound_a == 1
    assert bd.verify(corr.random_correlation(6, real=True, rng=2), cert)["ok"]


@given(seeds)
def test_skew_phase_invariance(seed):
    rng = np.random.default_rng(seed)
    x = corr.random_correlation(4, rng=seed)
    d = np.exp(2j * np.pi * rng.random(4))
    a = bd.skew_reduction_bound(x, certify=False).bound_c
    b = bd.skew_reduction_bound(corr.conjugate_diag(x, d), certify=False).bound_c
    assert abs(a - b) <= 1e-12


def test_best_lower_bound_examples():
    assert bd.best_lower_bound(corr.identity(4)).bound_c == 1
    cert = bd.best_lower_bound(x4())
    assert cert.kind == "combined" and cert.evidence["winner"] == "skew_reduction"
    assert cert.bound_c == pytest.approx(X4_BOUND, abs=1e-9)
    assert bd.best_lower_bound(corr.random_correlation(5, real=True, rng=7)).bound_c == 1


@given(st.integers(3, 6), seeds, st.booleans())
def test_monotone_and_in_range(n, seed, real):
    x = corr.random_correlation(n, real=real, rng=seed)
    best = bd.best_lower_bound(x, certify=False)
    avg = bd.averaging_bound(x, certify=False)
    assert 0 <= avg.bound_c <= best.bound_c <= 1
    assert best.bound_c <= best.bound_a <= 1


@given(st.integers(3, 5), seeds, st.booleans())
def test_certificate_soundness(n, seed, real):
    x = corr.random_correlation(n, real=real, rng=seed)
    for make in (bd.averaging_bound, bd.eigen_shift_bound, bd.best_lower_bound):
        cert = make(x)
        report = bd.verify(x, cert)
        assert report["ok"], report


def test_certificate_soundness_fixtures():
    for x in (x4(), corr.validate(fixtures.ex3()), corr.identity(5)):
        assert bd.verify(x, bd.best_lower_bound(x))["ok"]


def test_tampered_certificate_fails():
    cert = bd.skew_reduction_bound(x4())
    cert.bound_c = 0.7
    assert not bd.verify(x4(), cert)["ok"]


def test_json_is_serializable():
    obj = json.loads(json.dumps(bd.best_lower_bound(x4()).to_json()))
    assert obj["kind"] == "combined" and obj["nested"]["kind"] == "skew_reduction"
    assert "hull" in obj
