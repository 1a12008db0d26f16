"""Dense Hermitian linear algebra.

Eigendecomposition is done with cyclic Jacobi rotations, which is plenty
for the matrix sizes that occur here (at most a few hundred rows) and keeps
real-symmetric inputs in real arithmetic, so real inputs give real
eigenvectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, NotPSD

MAX_SWEEPS = 100


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds shared by every module.

    ``eps_rank`` is relative: an eigenvalue counts as nonzero when it exceeds
    ``eps_rank * max(1, ||H||)``.
    """

    eps_psd: float = 1e-9
    eps_rank: float = 1e-7
    eps_eq: float = 1e-9

    def __post_init__(self):
        if min(self.eps_psd, self.eps_rank, self.eps_eq) <= 0:
            raise ValueError("tolerances must be strictly positive")
        if self.eps_rank < self.eps_psd:
            raise ValueError("eps_rank must be at least eps_psd")

    def widened(self, factor=10.0):
        return Tolerance(self.eps_psd, self.eps_rank * factor, self.eps_eq)


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # columns

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermitian(m):
    """Return ``(M + M*)/2`` as a fresh array; real input stays real."""
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.iscomplexobj(a):
        a = a.astype(float)
    return (a + a.conj().T) / 2


def _jacobi_loop(h, v, max_sweeps):
    """Cyclic Jacobi sweeps on ``h`` in place, accumulating rotations in ``v``.

    Returns ``(sweeps_used, off_diagonal_norm)``; ``sweeps_used == max_sweeps``
    with a nonzero norm means no convergence.
    """
    n = h.shape[0]
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += abs(h[i, j]) ** 2
    scale = math.sqrt(scale)
    floor = 1e-300 + 1e-18 * scale
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += abs(h[i, j]) ** 2
        off = math.sqrt(off)
        if off <= 1e-15 * scale:
            return sweep, off
        for p in range(n - 1):
            for q in range(p + 1, n):
                hpq = h[p, q]
                mag = abs(hpq)
                if mag <= floor:
                    h[p, q] = 0
                    h[q, p] = 0
                    continue
                a = h[p, p].real
                b = h[q, q].real
                theta = (b - a) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # phase taking h[p, q] to |h[p, q]|; +-1 for real input
                ph = np.conj(hpq) / mag
                g10 = -s * ph
                g11 = c * ph
                for i in range(n):
                    hip = h[i, p]
                    hiq = h[i, q]
                    h[i, p] = hip * c + hiq * g10
                    h[i, q] = hip * s + hiq * g11
                for j in range(n):
                    hpj = h[p, j]
                    hqj = h[q, j]
                    h[p, j] = c * hpj + np.conj(g10) * hqj
                    h[q, j] = s * hpj + np.conj(g11) * hqj
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = vip * c + viq * g10
                    v[i, q] = vip * s + viq * g11
                h[p, q] = 0
                h[q, p] = 0
                h[p, p] = a - t * mag
                h[q, q] = b + t * mag
    off = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                off += abs(h[i, j]) ** 2
    return max_sweeps, math.sqrt(off)


try:  # compiled kernel when numba is available; identical semantics otherwise
    import numba

    _jacobi_kernel = numba.njit(cache=True)(_jacobi_loop)
except ImportError:  # pragma: no cover
    _jacobi_kernel = _jacobi_loop


def _jacobi(h):
    """Diagonalize the Hermitian array ``h`` in place; return the rotation accumulator."""
    v = np.eye(h.shape[0], dtype=h.dtype)
    if h.shape[0] < 2:
        return v
    sweeps, off = _jacobi_kernel(h, v, MAX_SWEEPS)
    if sweeps >= MAX_SWEEPS and off > 0:
        raise ConvergenceError(MAX_SWEEPS, float(off))
    return v


def _fix_gauge(vecs):
    # first non-negligible component of each eigenvector made positive real
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        k = int(np.argmax(np.abs(col) > 1e-10))
        z = col[k]
        if abs(z) > 0:
            vecs[:, j] = col * (abs(z) / z)
    return vecs


def eigen(h, tol: Tolerance = DEFAULT_TOL) -> EigenDecomposition:
    """Full spectral decomposition of a Hermitian matrix.

    Eigenvalues are returned in descending order. Real-symmetric input is
    processed in real arithmetic and yields real eigenvectors.
    """
    work = hermitian(h)
    if np.iscomplexobj(work) and not np.any(work.imag):
        work = work.real.copy()
    v = _jacobi(work)
    w = np.diag(work).real.copy()
    order = np.argsort(-w, kind="stable")
    return EigenDecomposition(w[order], _fix_gauge(v[:, order]))


def eigvalsh(h, tol: Tolerance = DEFAULT_TOL):
    return eigen(h, tol).eigenvalues


def min_eigenvalue(h, tol: Tolerance = DEFAULT_TOL):
    return float(eigen(h, tol).eigenvalues[-1])


def is_psd(h, tol: Tolerance = DEFAULT_TOL) -> bool:
    return min_eigenvalue(h, tol) >= -tol.eps_psd


def operator_norm(h, tol: Tolerance = DEFAULT_TOL) -> float:
    w = eigen(h, tol).eigenvalues
    return float(max(abs(w[0]), abs(w[-1]))) if len(w) else 0.0


def rank_threshold(eigenvalues, tol: Tolerance):
    norm = float(np.max(np.abs(eigenvalues))) if len(eigenvalues) else 0.0
    return tol.eps_rank * max(1.0, norm)


def _checked(h, tol):
    dec = eigen(h, tol)
    if len(dec.eigenvalues) and dec.eigenvalues[-1] < -tol.eps_psd:
        raise NotPSD(float(dec.eigenvalues[-1]))
    return dec


def rank_and_support(h, tol: Tolerance = DEFAULT_TOL):
    """Return ``(rank, P)`` where ``P`` projects onto the range of ``h``."""
    dec = _checked(h, tol)
    keep = dec.eigenvalues > rank_threshold(dec.eigenvalues, tol)
    g = dec.eigenvectors[:, keep]
    return int(keep.sum()), g @ g.conj().T


def rank(h, tol: Tolerance = DEFAULT_TOL) -> int:
    return rank_and_support(h, tol)[0]


def nullspace(h, tol: Tolerance = DEFAULT_TOL):
    """Orthonormal kernel basis of a PSD matrix, one vector per column."""
    dec = _checked(h, tol)
    drop = dec.eigenvalues <= rank_threshold(dec.eigenvalues, tol)
    return dec.eigenvectors[:, drop]


def subspace_distance(a, b):
    """Operator-norm distance between the orthogonal projections onto span(a), span(b)."""
    qa = np.linalg.qr(np.asarray(a))[0]
    qb = np.linalg.qr(np.asarray(b))[0]
    return float(np.linalg.norm(qa @ qa.conj().T - qb @ qb.conj().T, 2))
