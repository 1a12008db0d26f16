import numpy as np
import pytest
from hypothesis import given, strategies as st

from unimoments import fixtures
from unimoments import matkernel as mk
from unimoments.errors import ConvergenceError, NotPSD
from unimoments.matkernel import Tolerance

from conftest import random_hermitian


def test_identity_eigenvalues():
    dec = mk.eigen(np.eye(3))
    assert np.allclose(dec.eigenvalues, 1)
    assert np.allclose(dec.eigenvectors.conj().T @ dec.eigenvectors, np.eye(3))


def test_all_ones_eigenvalues():
    assert np.allclose(mk.eigvalsh(np.ones((3, 3))), [3, 0, 0], atol=1e-12)


def test_x4_has_rank_two():
    ev = mk.eigvalsh(fixtures.x4())
    assert (ev > 1e-7).sum() == 2


def test_descending_order_and_real_vectors_for_real_input(rng):
    h = random_hermitian(rng, 6, real=True)
    dec = mk.eigen(h)
    assert np.all(np.diff(dec.eigenvalues) <= 0)
    assert not np.iscomplexobj(dec.eigenvectors)


def test_gauge_first_component_positive(rng):
    dec = mk.eigen(random_hermitian(rng, 5))
    for col in dec.eigenvectors.T:
        z = col[np.argmax(np.abs(col) > 1e-10)]
        assert abs(z.imag) < 1e-12 and z.real > 0


def test_matches_numpy_spectrum(rng):
    for n in (1, 2, 7, 20):
        h = random_hermitian(rng, n)
        assert np.allclose(mk.eigvalsh(h), np.linalg.eigvalsh(h)[::-1], atol=1e-10)


def test_python_fallback_kernel_agrees(rng):
    h = random_hermitian(rng, 5)
    work = mk.hermitian(h)
    v = np.eye(5, dtype=complex)
    sweeps, off = mk._jacobi_loop(work, v, mk.MAX_SWEEPS)
    assert sweeps < mk.MAX_SWEEPS
    assert np.allclose(np.sort(np.diag(work).real), np.linalg.eigvalsh(h), atol=1e-10)
    assert np.allclose(v @ np.diag(np.diag(work)) @ v.conj().T, h, atol=1e-10)


def test_convergence_error_when_sweeps_exhausted(rng, monkeypatch):
    monkeypatch.setattr(mk, "MAX_SWEEPS", 1)
    with pytest.raises(ConvergenceError):
        mk.eigen(random_hermitian(rng, 12))


def test_input_is_symmetrized():
    h = np.array([[1.0, 2.0 + 1e-14], [2.0, 1.0]])
    assert np.allclose(mk.eigvalsh(h), [3, -1])


def test_is_psd_examples():
    assert mk.is_psd(np.eye(4))
    assert not mk.is_psd(np.diag([1.0, -1.0]))
    assert mk.is_psd(fixtures.x4())


def test_rank_and_support_examples():
    r, p = mk.rank_and_support(np.eye(5))
    assert r == 5 and np.allclose(p, np.eye(5))
    assert mk.rank(fixtures.x4()) == 2
    assert mk.rank(fixtures.f6()) == 3


def test_nullspace_examples():
    assert mk.nullspace(np.eye(4)).shape == (4, 0)
    k = mk.nullspace(np.ones((3, 3)))
    assert k.shape == (3, 2)
    assert np.allclose(k.conj().T @ np.ones(3), 0, atol=1e-12)
    assert mk.subspace_distance(mk.nullspace(fixtures.f6()), fixtures.f6_kernel()) <= 1e-9


def test_nullspace_rejects_indefinite():
    with pytest.raises(NotPSD):
        mk.nullspace(np.diag([1.0, -1.0]))


def test_operator_norm_examples():
    assert mk.operator_norm(fixtures.x4_skew()) == pytest.approx(np.sqrt(3) / 2, abs=1e-12)
    assert mk.operator_norm(fixtures.x4_skew_rotated()) == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    assert mk.operator_norm(np.zeros((3, 3))) == 0


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(eps_psd=-1.0)
    assert Tolerance().widened().eps_rank == pytest.approx(1e-6)


@given(st.integers(1, 16), st.integers(0, 2**32 - 1), st.booleans())
def test_reconstruction(n, seed, real):
    h = random_hermitian(np.random.default_rng(seed), n, real)
    rec = mk.eigen(h).reconstruct()
    assert np.abs(rec - h).max() <= 1e-10 * max(1.0, np.abs(h).max())


@given(st.integers(1, 10), st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_rank_plus_kernel_dimension(n, r, seed):
    rng = np.random.default_rng(seed)
    f = rng.standard_normal((min(r, n), n)) + 1j * rng.standard_normal((min(r, n), n))
    h = f.conj().T @ f
    assert mk.rank(h) + mk.nullspace(h).shape[1] == n


@given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_gram_is_psd(r, n, seed):
    rng = np.random.default_rng(seed)
    f = rng.standard_normal((r, n)) + 1j * rng.standard_normal((r, n))
    assert mk.is_psd(f.conj().T @ f)


@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_operator_norm_dominates_numerical_range(n, seed):
    rng = np.random.default_rng(seed)
    h = random_hermitian(rng, n)
    v = rng.standard_normal((1000, n)) + 1j * rng.standard_normal((1000, n))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    sampled = np.abs(np.einsum("ki,ij,kj->k", v.conj(), h, v)).max()
    assert sampled <= mk.operator_norm(h) + 1e-8
