"""Moment matrices of unitary tuples and the commuting-moment set.

Membership of a matrix in the commuting-moment set is certified
constructively by a :class:`RankOneHull`: an explicit convex combination of
rank-one correlation matrices conj(z_i) z_j with unimodular z.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np
from scipy.linalg import block_diag

from . import correlation as corr
from . import extremality as ext
from . import fixtures
from . import matkernel as mk
from .clifford import UnitaryTuple, make_tuple
from .correlation import CorrelationMatrix
from .errors import (
    DimensionMismatch,
    DomainError,
    SizeOverflow,
    UnimomentsError,
    WeightsNotNormalized,
    WrongInput,
    ZeroVector,
)
from .matkernel import DEFAULT_TOL, Tolerance

BLOCK_CAP = 4096
HULL_RESIDUAL = 1e-10  # above this a hull is rebuilt with the tightest rank cut
PROVENANCES = ("from_tuple", "rank_one", "tensor", "block_convex", "external")


@dataclass(frozen=True, eq=False)
class MomentMatrix:
    X: CorrelationMatrix
    provenance: str = "from_tuple"

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")


def moment_matrix(t: UnitaryTuple, tol: Tolerance = DEFAULT_TOL, provenance="from_tuple") -> MomentMatrix:
    """Entries tr_k(V_i* V_j) with the normalized trace."""
    v = t.unitaries
    m = np.einsum("iab,jab->ij", v.conj(), v) / t.k
    return MomentMatrix(corr.validate(m, tol), provenance)


def haar_unitary(k: int, seed=None) -> np.ndarray:
    """Haar-distributed k x k unitary.

    ``seed`` may be an int or a ``numpy.random.Generator``; passing the same
    generator on successive calls draws successive samples.
    """
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))[None, :]


def haar_tuple(n: int, k: int, seed=None, tol: Tolerance = DEFAULT_TOL) -> UnitaryTuple:
    rng = np.random.default_rng(seed)
    return make_tuple([haar_unitary(k, rng) for _ in range(n)], tol)


def tensor_realize(t1: UnitaryTuple, t2: UnitaryTuple, tol: Tolerance = DEFAULT_TOL) -> UnitaryTuple:
    """Componentwise Kronecker products; moments multiply entrywise."""
    if t1.n != t2.n:
        raise DimensionMismatch(f"tuples of lengths {t1.n} and {t2.n}")
    return make_tuple([np.kron(a, b) for a, b in zip(t1, t2)], tol)


def _rational(w):
    if isinstance(w, (Fraction, int)):
        return Fraction(w)
    if isinstance(w, str):
        return Fraction(w)
    raise TypeError(f"block_convex_realize needs rational weights, got {type(w).__name__}")


def block_convex_realize(terms, tol: Tolerance = DEFAULT_TOL, cap: int = BLOCK_CAP) -> UnitaryTuple:
    """Direct sums of block copies realizing a rational convex combination.

    A weight a/L on a tuple of size k is realized by a*(K/k) copies, where K
    is the lcm of the sizes, so every term occupies a share of the diagonal
    proportional to its weight.
    """
    terms = [(_rational(w), t) for w, t in terms]
    if not terms:
        raise WeightsNotNormalized("no terms")
    if any(w <= 0 for w, _ in terms) or sum(w for w, _ in terms) != 1:
        raise WeightsNotNormalized(f"weights {[str(w) for w, _ in terms]} must be positive and sum to 1")
    ns = {t.n for _, t in terms}
    if len(ns) > 1:
        raise DimensionMismatch(f"tuples of lengths {sorted(ns)}")
    denom = math.lcm(*(w.denominator for w, _ in terms))
    big_k = math.lcm(*(t.k for _, t in terms))
    copies = [int(w * denom) * (big_k // t.k) for w, t in terms]
    g = math.gcd(*copies)
    copies = [c // g for c in copies]
    size = sum(c * t.k for c, (_, t) in zip(copies, terms))
    if size > cap:
        raise SizeOverflow(f"block realization needs {size} x {size} matrices (cap {cap})")
    n = ns.pop()
    out = []
    for i in range(n):
        blocks = [t.unitaries[i] for c, (_, t) in zip(copies, terms) for _ in range(c)]
        out.append(block_diag(*blocks))
    return make_tuple(out, tol)


def kernel_relation_residual(t: UnitaryTuple, c, tol: Tolerance = DEFAULT_TOL) -> float:
    """Operator norm of sum_i c_i V_i."""
    c = np.asarray(c, dtype=complex).ravel()
    if c.shape != (t.n,):
        raise DimensionMismatch(f"coefficient vector of length {c.shape[0]} for {t.n} unitaries")
    if not np.any(c):
        raise ZeroVector("coefficient vector is zero")
    z = np.tensordot(c, t.unitaries, axes=1)
    return math.sqrt(max(mk.operator_norm(z.conj().T @ z, tol), 0.0))


# ---------------------------------------------------------------- rank-one hulls


@dataclass(frozen=True, eq=False)
class RankOneHull:
    """Convex combination sum_m w_m R(z_m) with R(z)_ij = conj(z_i) z_j."""

    weights: np.ndarray  # (m,)
    phases: np.ndarray  # (m, n)

    @property
    def n(self):
        return self.phases.shape[1]

    def __len__(self):
        return len(self.weights)

    def matrix(self):
        return np.einsum("m,mi,mj->ij", self.weights, self.phases.conj(), self.phases)

    def conjugated(self, d):
        """Hull of D* M D for the diagonal unitary D = diag(d)."""
        return RankOneHull(self.weights, self.phases * np.asarray(d)[None, :])

    def embedded(self, indices, n):
        """Hull of the n x n matrix with this block on ``indices`` and identity elsewhere.

        Independent uniform signs on the remaining coordinates average every
        cross term to zero.
        """
        indices = list(indices)
        rest = [i for i in range(n) if i not in indices]
        signs = np.array(list(itertools.product((1.0, -1.0), repeat=len(rest))), dtype=float).reshape(2 ** len(rest), len(rest))
        w, ph = [], []
        for wm, zm in zip(self.weights, self.phases):
            for s in signs:
                z = np.ones(n, dtype=complex)
                z[indices] = zm
                z[rest] = s
                ph.append(z)
                w.append(wm / len(signs))
        return RankOneHull(np.array(w), np.array(ph))

    def residual(self, target):
        return float(np.abs(self.matrix() - np.asarray(target)).max())

    def is_valid(self, tol: Tolerance = DEFAULT_TOL):
        return bool(
            (self.weights >= -tol.eps_eq).all()
            and abs(self.weights.sum() - 1) <= tol.eps_eq
            and (np.abs(np.abs(self.phases) - 1) <= tol.eps_eq).all()
        )

    def to_json(self):
        from .serialize import complex_to_json

        return {
            "weights": [float(w) for w in self.weights],
            "phases": [[complex_to_json(z) for z in row] for row in self.phases],
        }


def mix_hulls(parts) -> RankOneHull:
    parts = [(float(w), h) for w, h in parts if w > 0]
    return RankOneHull(
        np.concatenate([w * h.weights for w, h in parts]),
        np.concatenate([h.phases for _, h in parts]),
    )


def identity_hull(n: int) -> RankOneHull:
    """I_n as the average of R(z) over sign vectors z with z_1 = 1."""
    return RankOneHull(np.ones(1), np.ones((1, 1), dtype=complex)).embedded([0], n)


def _leaf_phases(leaf: CorrelationMatrix, real_mode, tol):
    frame = corr.frame_factor(leaf, tol)
    f = frame.vectors
    if frame.r == 1:
        z = f[0] / np.abs(f[0])
        return [(1.0, z)]
    if real_mode and frame.r == 2:
        # real rank two: cos(a_i - a_j) = Re(conj(z_i) z_j) with z = f1 + i f2
        z = f[0].real + 1j * f[1].real
        z = z / np.abs(z)
        return [(0.5, z), (0.5, z.conj())]
    raise DomainError(f"extreme point of rank {frame.r} is not a rank-one combination")


def rank_one_hull(x: CorrelationMatrix, real_mode: bool = False, tol: Tolerance = DEFAULT_TOL) -> RankOneHull:
    """Certify X as a convex combination of rank-one points via extreme-point peeling.

    Succeeds whenever every extreme point met has rank one (complex mode,
    n <= 3) or rank at most two (real mode, n <= 5); raises DomainError otherwise.
    """
    hull = _peeled_hull(x, real_mode, tol)
    if hull.residual(x.entries) > HULL_RESIDUAL and tol.eps_rank > tol.eps_psd:
        # an eigenvalue just under the rank cut is lost by the leaves; resolve it
        tight = replace(tol, eps_rank=tol.eps_psd)
        try:
            alt = _peeled_hull(x, real_mode, tight)
        except UnimomentsError:
            return hull
        if alt.residual(x.entries) < hull.residual(x.entries):
            hull = alt
    return hull


def _peeled_hull(x, real_mode, tol):
    dec = ext.decompose_extreme(x, real_mode, tol)
    w, ph = [], []
    for weight, leaf in dec.terms:
        for wl, z in _leaf_phases(leaf, real_mode, tol):
            w.append(weight * wl)
            ph.append(z)
    return RankOneHull(np.array(w), np.array(ph))


# -------------------------------------------------------- commuting-moment facts


def classify_extreme_point(x: CorrelationMatrix, tol: Tolerance = DEFAULT_TOL) -> dict:
    """Exclusion report for the trace-moment set.

    An extreme point of the elliptope that is not rank one cannot lie in the
    rank-one hull. Rank <= 2 points of the trace-moment set always lie in that
    hull, so a rank-two extreme point is outside the trace-moment set too.
    """
    report = ext.is_extreme(x, False, tol)
    outside_c = report.is_extreme and report.rank > 1
    outside_g = outside_c and report.rank == 2
    if outside_g:
        reason = "rank-2 extreme => outside G_n unless commuting-realizable; extreme and not rank one => not commuting-realizable"
    elif outside_c:
        reason = "extreme and not rank one => outside C_n"
    elif report.is_extreme:
        reason = "rank-one extreme point, realized by 1x1 unitaries"
    else:
        reason = "not an extreme point; no exclusion claimed"
    return {
        "rank": report.rank,
        "is_extreme": report.is_extreme,
        "perturbation_dimension": report.dimension,
        "outside_C": bool(outside_c),
        "outside_G": bool(outside_g),
        "commuting_realizable": False if outside_c else None,
        "reason": reason,
    }


@dataclass(eq=False)
class RefutationCertificate:
    relations: list = field(default_factory=list)
    case_table: list = field(default_factory=list)
    kernel_distance: float = 0.0
    refuted: bool = False

    def to_json(self):
        from .serialize import complex_to_json

        return {
            "relations": self.relations,
            "case_table": [
                {**c, "zeta": {k: complex_to_json(v) for k, v in c["zeta"].items()}} for c in self.case_table
            ],
            "kernel_distance": self.kernel_distance,
            "refuted": self.refuted,
        }


def _unit_solutions(w_a, w_b):
    """Ratios z = zeta_a/zeta_b on the unit circle with |w_a z + w_b| = 1."""
    cos = (1 - w_a * w_a - w_b * w_b) / (2 * w_a * w_b)
    if abs(cos) > 1:
        return []
    theta = math.acos(cos)
    if theta in (0.0, math.pi):
        return [complex(cos, 0.0)]
    return [complex(math.cos(theta), math.sin(theta)), complex(math.cos(theta), -math.sin(theta))]


def refute_commuting_prop36(x, tol: Tolerance = DEFAULT_TOL) -> RefutationCertificate:
    """Show the 6x6 rank-3 real extreme point has no commuting realization.

    Each kernel vector v forces sum_j v_j U_j = 0. Evaluating commuting
    unitaries at a point gives unimodular numbers zeta_j; normalizing zeta_2 = 1,
    the first two relations pin zeta_1 and zeta_3 to two values each, and in
    all four cases the third relation yields |zeta_6| != 1.
    """
    x = np.asarray(x.entries if isinstance(x, CorrelationMatrix) else x, dtype=complex)
    ref = fixtures.f6()
    if x.shape != ref.shape or np.abs(x - ref).max() > tol.eps_eq:
        raise WrongInput("input is not the 6x6 counterexample matrix")
    X = corr.validate(x, tol)
    vs = fixtures.f6_kernel()
    dist = mk.subspace_distance(mk.nullspace(X.as_real(), tol), vs)
    cert = RefutationCertificate(kernel_distance=dist)
    names = ("U4 = (U1 + U2)/sqrt2", "U5 = (U2 + U3)/sqrt2", "U6 = (U1 + U2 + U3)/sqrt3")
    for v, name in zip(vs.T, names):
        cert.relations.append({"kernel_vector": v.tolist(), "relation": name,
                               "residual_Xv": float(np.abs(X.entries @ v).max())})
    # relation weights read off the kernel vectors (coefficient -1 on the dependent unitary)
    w4 = vs[[0, 1], 0]
    w5 = vs[[1, 2], 1]
    w6 = vs[[0, 1, 2], 2]
    z1s = _unit_solutions(w4[0], w4[1])
    z3s = _unit_solutions(w5[1], w5[0])
    for z1, z3 in itertools.product(z1s, z3s):
        z6 = w6[0] * z1 + w6[1] + w6[2] * z3
        cert.case_table.append({
            "zeta": {"zeta1": z1, "zeta2": 1 + 0j, "zeta3": z3, "zeta6": complex(z6)},
            "abs_zeta6": abs(z6),
            "gap": abs(abs(z6) - 1),
        })
    cert.refuted = (
        dist <= 1e-9 and len(cert.case_table) == 4 and all(c["gap"] > 0.1 for c in cert.case_table)
    )
    return cert
