"""Correlation matrices (complex elliptope), frames and closure operations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matkernel as mk
from .errors import (
    DimensionMismatch,
    NotHermitian,
    NotPermutation,
    NotSquare,
    NotUnimodular,
    NotUnitDiagonal,
    WeightsNotNormalized,
)
from .matkernel import DEFAULT_TOL, Tolerance


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """Hermitian PSD matrix with unit diagonal. Build through :func:`validate`."""

    entries: np.ndarray
    is_real: bool

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def as_real(self):
        """Real part as a float array (only meaningful when ``is_real``)."""
        return self.entries.real.copy()

    def __repr__(self):
        return f"CorrelationMatrix(n={self.n}, is_real={self.is_real})"


@dataclass(frozen=True, eq=False)
class Frame:
    """Columns of ``vectors`` (shape r x n) are unit vectors f_1..f_n."""

    vectors: np.ndarray

    @property
    def r(self) -> int:
        return self.vectors.shape[0]

    @property
    def n(self) -> int:
        return self.vectors.shape[1]

    def gram(self):
        return self.vectors.conj().T @ self.vectors


def validate(m, tol: Tolerance = DEFAULT_TOL) -> CorrelationMatrix:
    """Check that ``m`` is a correlation matrix and wrap it.

    The returned matrix is exactly Hermitian with an exactly unit diagonal;
    if every imaginary part is below ``eps_eq`` it is flagged real and its
    imaginary parts are dropped.
    """
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    asym = np.abs(a - a.conj().T)
    if n and asym.max() > tol.eps_eq * scale:
        i, j = np.unravel_index(int(np.argmax(asym)), asym.shape)
        raise NotHermitian((int(i), int(j)), float(asym[i, j]))
    a = (a + a.conj().T) / 2
    for i in range(n):
        if abs(a[i, i] - 1) > tol.eps_eq:
            raise NotUnitDiagonal(i, complex(a[i, i]))
    np.fill_diagonal(a, 1.0)
    is_real = bool(n == 0 or np.abs(a.imag).max() <= tol.eps_eq)
    if is_real:
        a = a.real.astype(complex)
    lam = mk.min_eigenvalue(a.real if is_real else a, tol) if n else 0.0
    if lam < -tol.eps_psd:
        raise mk.NotPSD(lam)
    a.setflags(write=False)
    return CorrelationMatrix(a, is_real)


def _values(x: CorrelationMatrix):
    # real inputs go through the eigensolver in real arithmetic
    return x.as_real() if x.is_real else x.entries


def eigen(x: CorrelationMatrix, tol: Tolerance = DEFAULT_TOL):
    return mk.eigen(_values(x), tol)


def rank(x: CorrelationMatrix, tol: Tolerance = DEFAULT_TOL) -> int:
    return mk.rank_and_support(_values(x), tol)[0]


def frame_factor(x: CorrelationMatrix, tol: Tolerance = DEFAULT_TOL) -> Frame:
    """Factor ``X = F* F`` with ``F`` of shape ``rank(X) x n``.

    ``F = diag(lambda)^(1/2) V*`` over the nonzero eigenpairs; the eigenvector
    gauge is fixed, so the output is deterministic. Real ``X`` gives a real frame.
    """
    dec = eigen(x, tol)
    keep = dec.eigenvalues > mk.rank_threshold(dec.eigenvalues, tol)
    lam = dec.eigenvalues[keep]
    g = dec.eigenvectors[:, keep]
    f = np.sqrt(lam)[:, None] * g.conj().T
    # columns have unit norm up to roundoff; normalize exactly
    f = f / np.linalg.norm(f, axis=0, keepdims=True)
    return Frame(f)


def gram(frame: Frame, tol: Tolerance = DEFAULT_TOL) -> CorrelationMatrix:
    return validate(frame.gram(), tol)


def _same_n(*xs):
    ns = {x.n for x in xs}
    if len(ns) > 1:
        raise DimensionMismatch(f"dimensions differ: {sorted(ns)}")


def schur_product(x: CorrelationMatrix, y: CorrelationMatrix, tol: Tolerance = DEFAULT_TOL):
    _same_n(x, y)
    return validate(x.entries * y.entries, tol)


def _unimodular(phases, n, tol):
    d = np.asarray(phases, dtype=complex).ravel()
    if d.shape != (n,):
        raise DimensionMismatch(f"expected {n} phases, got {d.shape[0]}")
    bad = np.abs(np.abs(d) - 1) > tol.eps_eq
    if bad.any():
        raise NotUnimodular(f"phase {int(np.argmax(bad))} has modulus {abs(d[np.argmax(bad)])}")
    return d


def conjugate_diag(x: CorrelationMatrix, phases, tol: Tolerance = DEFAULT_TOL):
    """Entries become ``conj(d_i) x_ij d_j``, i.e. ``D* X D``."""
    d = _unimodular(phases, x.n, tol)
    return validate(d.conj()[:, None] * x.entries * d[None, :], tol)


def _check_perm(sigma, n):
    s = [int(v) for v in sigma]
    if sorted(s) != list(range(n)):
        raise NotPermutation(f"{s} is not a permutation of 0..{n - 1}")
    return np.array(s)


def conjugate_perm(x: CorrelationMatrix, sigma, tol: Tolerance = DEFAULT_TOL):
    """Relabel indices: output entry ``(sigma[a], sigma[b])`` is ``x[a, b]`` (0-based)."""
    s = _check_perm(sigma, x.n)
    out = np.empty_like(x.entries)
    out[np.ix_(s, s)] = x.entries
    return validate(out, tol)


def convex_combine(terms, tol: Tolerance = DEFAULT_TOL) -> CorrelationMatrix:
    terms = list(terms)
    if not terms:
        raise WeightsNotNormalized("no terms")
    _same_n(*(x for _, x in terms))
    w = np.array([float(t) for t, _ in terms])
    if (w < -tol.eps_eq).any() or abs(w.sum() - 1) > tol.eps_eq:
        raise WeightsNotNormalized(f"weights {w.tolist()} are not a probability vector")
    return validate(sum(wi * x.entries for wi, (_, x) in zip(w, terms)), tol)


def realify_row(x: CorrelationMatrix, k: int, tol: Tolerance = DEFAULT_TOL):
    """Diagonal conjugation making row ``k`` real and nonnegative.

    ``phases[j] = conj(x_kj)/|x_kj|``, or 1 where ``x_kj`` vanishes.
    Returns ``(phases, X')``.
    """
    row = x.entries[k]
    mag = np.abs(row)
    phases = np.ones(x.n, dtype=complex)
    nz = mag > tol.eps_eq
    phases[nz] = row[nz].conj() / mag[nz]
    return phases, conjugate_diag(x, phases, tol)


def skew_part(x: CorrelationMatrix) -> np.ndarray:
    """``(X - conj(X))/2``: Hermitian, purely imaginary, zero diagonal."""
    return 1j * x.entries.imag


def real_part(x: CorrelationMatrix, tol: Tolerance = DEFAULT_TOL) -> CorrelationMatrix:
    """``(X + conj(X))/2``, always a real correlation matrix."""
    return validate(x.entries.real, tol)


def conj(x: CorrelationMatrix, tol: Tolerance = DEFAULT_TOL) -> CorrelationMatrix:
    return validate(x.entries.conj(), tol)


def identity(n: int) -> CorrelationMatrix:
    return validate(np.eye(n))


def random_correlation(n, rank=None, real=False, rng=None, tol: Tolerance = DEFAULT_TOL):
    """Gram matrix of ``n`` random unit vectors in C^rank (or R^rank)."""
    rng = np.random.default_rng(rng)
    r = n if rank is None else rank
    f = rng.standard_normal((r, n))
    if not real:
        f = f + 1j * rng.standard_normal((r, n))
    f /= np.linalg.norm(f, axis=0, keepdims=True)
    return validate(f.conj().T @ f, tol)
