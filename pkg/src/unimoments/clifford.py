"""Clifford generators and exact unitary realizations of real correlation matrices.

The generators on R^r are the 2^r x 2^r matrices

    L(e_i) = U (x) ... (x) U (x) V (x) I_2 (x) ... (x) I_2
             (i-1 copies)          (r-i copies)

with U = diag(1, -1) and V the 2x2 swap. They are real symmetric, square to
the identity and pairwise anticommute, so L(x)L(y) + L(y)L(x) = 2<x, y> I.
"""
from __future__ import annotations

import functools
import os
from dataclasses import dataclass

import numpy as np

from . import correlation as corr
from .correlation import CorrelationMatrix
from .errors import DimensionCap, LengthMismatch, NotReal, NotUnitary
from .matkernel import DEFAULT_TOL, Tolerance

DEFAULT_CAP = 8  # max r, i.e. 256 x 256 matrices

_U = np.array([[1.0, 0.0], [0.0, -1.0]])
_V = np.array([[0.0, 1.0], [1.0, 0.0]])
_I2 = np.eye(2)


def dimension_cap() -> int:
    return int(os.environ.get("UNIMOMENTS_CAP", DEFAULT_CAP))


@dataclass(frozen=True, eq=False)
class CliffordGenerators:
    r: int
    generators: np.ndarray  # shape (r, 2^r, 2^r), read-only

    @property
    def k(self) -> int:
        return 2**self.r


@dataclass(frozen=True, eq=False)
class UnitaryTuple:
    """n unitaries of size k x k, stored as an array of shape (n, k, k)."""

    unitaries: np.ndarray

    @property
    def k(self) -> int:
        return self.unitaries.shape[1]

    @property
    def n(self) -> int:
        return self.unitaries.shape[0]

    def __iter__(self):
        return iter(self.unitaries)


def make_tuple(unitaries, tol: Tolerance = DEFAULT_TOL) -> UnitaryTuple:
    u = np.array(unitaries, dtype=complex)
    if u.ndim != 3 or u.shape[1] != u.shape[2]:
        raise NotUnitary(f"expected an (n, k, k) stack, got shape {u.shape}")
    eye = np.eye(u.shape[1])
    for j, v in enumerate(u):
        err = np.abs(v.conj().T @ v - eye).max()
        if err > tol.eps_eq:
            raise NotUnitary(f"matrix {j} deviates from unitarity by {err:.3e}")
    u.setflags(write=False)
    return UnitaryTuple(u)


def _kron_all(factors):
    out = np.ones((1, 1))
    for f in factors:
        out = np.kron(out, f)
    return out


@functools.lru_cache(maxsize=None)
def _generators(r: int) -> np.ndarray:
    gens = np.array([_kron_all([_U] * i + [_V] + [_I2] * (r - i - 1)) for i in range(r)])
    gens.setflags(write=False)
    return gens


def build_generators(r: int, cap: int | None = None) -> CliffordGenerators:
    if r < 1:
        raise ValueError("r must be positive")
    cap = dimension_cap() if cap is None else cap
    if r > cap:
        raise DimensionCap(f"2^{r} x 2^{r} generators exceed the cap of 2^{cap}")
    return CliffordGenerators(r, _generators(r))


def lambda_of(gens: CliffordGenerators, x) -> np.ndarray:
    x = np.asarray(x, dtype=float).ravel()
    if x.shape != (gens.r,):
        raise LengthMismatch(f"vector of length {x.shape[0]} for {gens.r} generators")
    return np.tensordot(x, gens.generators, axes=1)


def anticommutator(a, b):
    return a @ b + b @ a


def realize_real(x: CorrelationMatrix, tol: Tolerance = DEFAULT_TOL, cap: int | None = None) -> UnitaryTuple:
    """Self-adjoint unitaries L(f_1), ..., L(f_n) whose normalized-trace moments equal X.

    f_j is the real frame of X, so the unitaries have size 2^rank(X).
    """
    if not x.is_real:
        raise NotReal("Clifford realization needs a real correlation matrix")
    frame = corr.frame_factor(x, tol)
    f = frame.vectors.real
    gens = build_generators(max(frame.r, 1), cap)
    if frame.r == 0:  # n == 0
        return make_tuple(np.zeros((0, 2, 2)), tol)
    return make_tuple(np.tensordot(f.T, gens.generators, axes=1), tol)
