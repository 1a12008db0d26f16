"""Extreme points of the complex and real elliptopes.

A point X = F*F is extreme iff no nonzero Hermitian Z (real symmetric in real
mode) satisfies <Z f_j, f_j> = 0 for all frame vectors. The perturbation
directions are then Y = F* Z F, which are exactly the zero-diagonal
Hermitian matrices living under the support projection of X.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import correlation as corr
from . import matkernel as mk
from .correlation import CorrelationMatrix
from .errors import DegenerateDirection, NotInSupport, NotReal, NotUnimodular, RecursionOverflow
from .matkernel import DEFAULT_TOL, Tolerance

MAX_DEPTH = 64


@dataclass(frozen=True, eq=False)
class PerturbationSpace:
    basis: list  # Hermitian n x n arrays, orthonormal in the real trace inner product
    real_mode: bool

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass(frozen=True, eq=False)
class ExtremalityReport:
    is_extreme: bool
    rank: int
    rank_bound_satisfied: bool
    real_mode: bool
    witness: np.ndarray | None = None
    dimension: int = 0


@dataclass(eq=False)
class ExtremeDecomposition:
    terms: list = field(default_factory=list)  # (weight, CorrelationMatrix)

    def matrix(self):
        return sum(w * x.entries for w, x in self.terms)

    def __len__(self):
        return len(self.terms)


def hermitian_basis(r: int, real: bool):
    """Basis of r x r Hermitian (or real symmetric) matrices, orthonormal under Re tr(A B*)."""
    out = []
    for a in range(r):
        e = np.zeros((r, r), dtype=complex)
        e[a, a] = 1
        out.append(e)
    h = 1 / math.sqrt(2)
    for a in range(r):
        for b in range(a + 1, r):
            e = np.zeros((r, r), dtype=complex)
            e[a, b] = e[b, a] = h
            out.append(e)
            if not real:
                e = np.zeros((r, r), dtype=complex)
                e[a, b] = 1j * h
                e[b, a] = -1j * h
                out.append(e)
    return out


def _flatten(y):
    return np.concatenate([y.real.ravel(), y.imag.ravel()])


def _real_frame(x, real_mode, tol):
    if real_mode and not x.is_real:
        raise NotReal("real mode requires a real correlation matrix")
    return corr.frame_factor(x, tol)


def perturbation_space(x: CorrelationMatrix, real_mode: bool = False, tol: Tolerance = DEFAULT_TOL):
    frame = _real_frame(x, real_mode, tol)
    f = frame.vectors
    zs = hermitian_basis(frame.r, real_mode)
    # row j, column m: <Z_m f_j, f_j>
    a = np.array([[np.vdot(fj, z @ fj).real for z in zs] for fj in f.T]).reshape(x.n, len(zs))
    _, s, vt = np.linalg.svd(a)
    thresh = 1e-9 * max(1.0, s[0] if len(s) else 0.0)
    null_rank = int((s > thresh).sum())
    coeffs = vt[null_rank:]
    ys = [f.conj().T @ sum(c * z for c, z in zip(row, zs)) @ f for row in coeffs]
    if not ys:
        return PerturbationSpace([], real_mode)
    # orthonormalize in the real trace inner product; leading direction first
    mat = np.array([_flatten(y) for y in ys])
    u, sv, wt = np.linalg.svd(mat, full_matrices=False)
    n = x.n
    basis = []
    for row in wt[: int((sv > 1e-12 * sv[0]).sum())]:
        y = row[: n * n].reshape(n, n) + 1j * row[n * n:].reshape(n, n)
        y = (y + y.conj().T) / 2
        np.fill_diagonal(y, 0)
        if real_mode:
            y = y.real.astype(complex)
        basis.append(y)
    return PerturbationSpace(basis, real_mode)


def rank_bound(r: int, n: int, real_mode: bool) -> bool:
    return r * (r + 1) // 2 <= n if real_mode else r * r <= n


def is_extreme(x: CorrelationMatrix, real_mode: bool = False, tol: Tolerance = DEFAULT_TOL):
    r = corr.rank(x, tol)
    space = perturbation_space(x, real_mode, tol)
    witness = space.basis[0] if space.dimension else None
    return ExtremalityReport(
        is_extreme=space.dimension == 0,
        rank=r,
        rank_bound_satisfied=rank_bound(r, x.n, real_mode),
        real_mode=real_mode,
        witness=witness,
        dimension=space.dimension,
    )


def _whiten(x, y, tol):
    """Return Z with Y = F* Z F for the canonical frame F of X."""
    dec = corr.eigen(x, tol)
    keep = dec.eigenvalues > mk.rank_threshold(dec.eigenvalues, tol)
    g = dec.eigenvectors[:, keep]
    p = g @ g.conj().T
    if np.abs(y - p @ y @ p).max() > 1e3 * tol.eps_eq * max(1.0, np.abs(y).max()):
        raise NotInSupport("perturbation direction is not supported under the range of X")
    w = 1 / np.sqrt(dec.eigenvalues[keep])
    return w[:, None] * (g.conj().T @ y @ g) * w[None, :]


def max_step(x: CorrelationMatrix, y, tol: Tolerance = DEFAULT_TOL):
    """Largest interval ``[t_minus, t_plus]`` on which ``X + tY`` stays PSD.

    With ``X = F*F`` and ``Y = F* Z F`` we have ``X + tY = F*(I + tZ)F`` and
    F has full row rank, so the endpoints are ``-1/lambda_max(Z)`` and
    ``-1/lambda_min(Z)``. A zero-diagonal Y forces Z to be indefinite, hence
    both endpoints are finite.
    """
    y = mk.hermitian(np.asarray(y, dtype=complex))
    if np.abs(y).max(initial=0.0) <= tol.eps_eq:
        raise DegenerateDirection("perturbation direction is numerically zero")
    if np.abs(np.diag(y)).max() > 1e3 * tol.eps_eq * max(1.0, np.abs(y).max()):
        raise NotInSupport("perturbation direction must have zero diagonal")
    z = _whiten(x, y, tol)
    w = mk.eigvalsh(z, tol)
    if w[0] <= 0 or w[-1] >= 0:
        raise DegenerateDirection("whitened direction is semidefinite; Y cannot have zero diagonal")
    return -1.0 / w[0], -1.0 / w[-1]


def _endpoint(x, y, t, real_mode, tol):
    m = x.entries + t * y
    if real_mode:
        m = m.real
    dec = mk.eigen(m, tol)
    lam = dec.eigenvalues
    if -1e-6 * max(1.0, lam[0]) <= lam[-1] < 0:
        # the endpoint is singular; roundoff can push it just outside the cone
        g = dec.eigenvectors
        m = (g * np.clip(lam, 0.0, None)) @ g.conj().T
        s = 1 / np.sqrt(np.diag(m).real)
        m = s[:, None] * m * s[None, :]
    np.fill_diagonal(m, 1.0)
    return corr.validate(m, tol)


def decompose_extreme(x: CorrelationMatrix, real_mode: bool = False, tol: Tolerance = DEFAULT_TOL):
    """Write X as a convex combination of extreme points by recursive peeling.

    Each step moves along a perturbation direction to both boundary points,
    where the rank strictly drops, so the recursion depth is at most rank(X).
    """
    out = ExtremeDecomposition()
    _peel(x, 1.0, real_mode, tol, out.terms, 0)
    return out


def _peel(x, weight, real_mode, tol, terms, depth):
    if depth > MAX_DEPTH:
        raise RecursionOverflow(f"peeling exceeded depth {MAX_DEPTH}")
    report = is_extreme(x, real_mode, tol)
    if report.is_extreme:
        terms.append((weight, x))
        return
    y = report.witness
    t_minus, t_plus = max_step(x, y, tol)
    span = t_plus - t_minus
    for t, w in ((t_minus, t_plus / span), (t_plus, -t_minus / span)):
        child = _endpoint(x, y, t, real_mode, tol)
        child_tol = tol
        if corr.rank(child, tol) >= report.rank:
            # endpoint singularity lost to tolerance interplay: retry once with a wider rank cut
            child_tol = tol.widened()
            if corr.rank(child, child_tol) >= report.rank:
                raise RecursionOverflow("rank failed to drop at a boundary point")
        _peel(child, weight * w, real_mode, child_tol, terms, depth + 1)


def rank_one_matrix(phases, tol: Tolerance = DEFAULT_TOL) -> CorrelationMatrix:
    """Matrix with entries ``conj(z_i) z_j``."""
    z = np.asarray(phases, dtype=complex).ravel()
    if (np.abs(np.abs(z) - 1) > tol.eps_eq).any():
        raise NotUnimodular("rank-one phases must be unimodular")
    return corr.validate(np.outer(z.conj(), z), tol)
