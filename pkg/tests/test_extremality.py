import numpy as np
import pytest
from hypothesis import given, strategies as st

from unimoments import correlation as corr
from unimoments import extremality as ext
from unimoments import fixtures
from unimoments import matkernel as mk
from unimoments.errors import DegenerateDirection, NotInSupport, NotUnimodular


def test_identity_perturbation_dimension():
    for n in range(2, 7):
        x = corr.identity(n)
        assert ext.perturbation_space(x).dimension == n * n - n
        assert ext.perturbation_space(x, real_mode=True).dimension == n * (n - 1) // 2


def test_x4_is_extreme_rank_two():
    rep = ext.is_extreme(corr.validate(fixtures.x4()))
    assert rep.is_extreme and rep.rank == 2 and rep.dimension == 0
    assert rep.rank_bound_satisfied


def test_f6_is_real_extreme():
    rep = ext.is_extreme(corr.validate(fixtures.f6()), real_mode=True)
    assert rep.is_extreme and rep.rank == 3


def test_ex3_real_vs_complex():
    x = corr.validate(fixtures.ex3())
    assert ext.is_extreme(x, real_mode=True).is_extreme
    rep = ext.is_extreme(x, real_mode=False)
    assert not rep.is_extreme and rep.witness is not None


def test_rank_one_matrix_examples():
    assert np.allclose(ext.rank_one_matrix(np.ones(3)).entries, np.ones((3, 3)))
    m = ext.rank_one_matrix([1, 1j, -1]).entries
    assert m[0, 1] == pytest.approx(1j) and m[0, 2] == pytest.approx(-1) and m[1, 2] == pytest.approx(1j)
    with pytest.raises(NotUnimodular):
        ext.rank_one_matrix([1, 2])


@given(st.integers(2, 7), st.integers(0, 2**32 - 1))
def test_rank_one_always_extreme(n, seed):
    z = np.exp(2j * np.pi * np.random.default_rng(seed).random(n))
    assert ext.is_extreme(ext.rank_one_matrix(z)).is_extreme


def test_max_step_two_by_two():
    lo, hi = ext.max_step(corr.identity(2), np.array([[0, 1], [1, 0.0]]))
    assert lo == pytest.approx(-1) and hi == pytest.approx(1)


def test_max_step_identity_matches_spectrum(rng):
    for _ in range(20):
        y = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        y = (y + y.conj().T) / 2
        np.fill_diagonal(y, 0)
        y /= mk.operator_norm(y)
        ev = np.linalg.eigvalsh(y)
        lo, hi = ext.max_step(corr.identity(5), y)
        assert hi == pytest.approx(1 / abs(ev[0])) and lo == pytest.approx(-1 / ev[-1])


def test_max_step_errors():
    x = corr.identity(3)
    with pytest.raises(DegenerateDirection):
        ext.max_step(x, np.zeros((3, 3)))
    with pytest.raises(NotInSupport):
        ext.max_step(x, np.eye(3))
    with pytest.raises(NotInSupport):
        # direction leaving the range of a rank-one matrix
        ext.max_step(corr.validate(np.ones((2, 2))), np.array([[0, 1j], [-1j, 0]]))


def test_max_step_endpoints_drop_rank():
    rng = np.random.default_rng(5)
    for trial in range(200):
        n = int(rng.integers(3, 6))
        x = corr.random_correlation(n, rng=trial)
        space = ext.perturbation_space(x)
        y = np.tensordot(rng.standard_normal(space.dimension), space.basis, axes=1)
        lo, hi = ext.max_step(x, y)
        r = corr.rank(x)
        for t in (lo, hi):
            m = x.entries + t * y
            assert mk.min_eigenvalue(m) > -1e-9
            assert mk.rank(m, mk.DEFAULT_TOL.widened()) < r


@given(st.integers(3, 6), st.integers(0, 2**32 - 1), st.booleans())
def test_witness_validity(n, seed, real):
    x = corr.random_correlation(n, real=real, rng=seed)
    rep = ext.is_extreme(x, real_mode=real)
    assert not rep.is_extreme
    lo, hi = ext.max_step(x, rep.witness)
    eps = min(abs(lo), hi) / 2
    for s in (1, -1):
        assert mk.is_psd(x.entries + s * eps * rep.witness)


@given(st.integers(2, 8), st.integers(1, 8), st.integers(0, 2**32 - 1), st.booleans())
def test_rank_filter(n, r, seed, real):
    x = corr.random_correlation(n, rank=min(r, n), real=real, rng=seed)
    rep = ext.is_extreme(x, real_mode=real)
    if rep.is_extreme:
        assert ext.rank_bound(rep.rank, n, real)


def test_extreme_input_single_term():
    x = corr.validate(fixtures.x4())
    dec = ext.decompose_extreme(x)
    assert len(dec) == 1 and dec.terms[0][0] == 1.0


def test_ex3_two_rank_one_halves():
    dec = ext.decompose_extreme(corr.validate(fixtures.ex3()))
    assert len(dec) == 2
    assert [w for w, _ in dec.terms] == pytest.approx([0.5, 0.5])
    assert all(corr.rank(t) == 1 for _, t in dec.terms)
    a, b = fixtures.ex3_rank_one_terms()
    (_, p), (_, q) = dec.terms
    # the halves are complex conjugates of each other, as in the closed form
    assert np.allclose(p.entries, q.entries.conj())
    a, b = fixtures.ex3_rank_one_terms()
    assert any(np.allclose(p.entries, m) for m in (a, b))
    assert np.allclose(dec.matrix(), fixtures.ex3())


@pytest.mark.parametrize("n", [3, 4, 5, 6])
@pytest.mark.parametrize("real", [False, True])
def test_decomposition_random(n, real):
    count = 200
    for seed in range(count):
        x = corr.random_correlation(n, real=real, rng=1000 * n + seed)
        dec = ext.decompose_extreme(x, real_mode=real)
        assert np.abs(dec.matrix() - x.entries).max() <= 1e-8
        assert sum(w for w, _ in dec.terms) == pytest.approx(1)
        assert len(dec) <= 2 ** corr.rank(x)
        for _, leaf in dec.terms:
            assert ext.is_extreme(leaf, real_mode=real).is_extreme
            if n == 3 and not real:
                assert corr.rank(leaf) == 1
