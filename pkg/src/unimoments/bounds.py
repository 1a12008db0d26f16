"""Lower bounds for how far tX + (1-t)I stays inside the moment sets.

``bound_c`` certifies tX + (1-t)I in the commuting-moment set for every
t <= bound_c, ``bound_a`` the same for the matrix-unitary moment set. Every
commuting-set certificate carries a :class:`~unimoments.moments.RankOneHull`
reproducing tX + (1-t)I, so it can be checked without trusting this code.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import clifford
from . import correlation as corr
from . import matkernel as mk
from . import moments
from .correlation import CorrelationMatrix
from .errors import DimensionTooSmall, SupportTooLarge
from .matkernel import DEFAULT_TOL, Tolerance

KINDS = ("averaging", "eigen_shift", "skew_reduction", "combined")


@dataclass(eq=False)
class BoundCertificate:
    kind: str
    bound_c: float | None
    bound_a: float | None
    evidence: dict = field(default_factory=dict)
    hull: moments.RankOneHull | None = None
    nested: BoundCertificate | None = None

    @property
    def bound(self) -> float:
        return self.bound_c if self.bound_c is not None else self.bound_a

    def to_json(self):
        from .serialize import complex_to_json, matrix_to_json

        def enc(v):
            if isinstance(v, np.ndarray):
                return matrix_to_json(v) if v.ndim == 2 else [complex_to_json(z) for z in v]
            if isinstance(v, CorrelationMatrix):
                return matrix_to_json(v.entries)
            if isinstance(v, Fraction):
                return str(v)
            if isinstance(v, dict):
                return {k: enc(w) for k, w in v.items()}
            if isinstance(v, (list, tuple)):
                return [enc(w) for w in v]
            if isinstance(v, (np.floating, np.integer)):
                return v.item()
            return v

        out = {"kind": self.kind, "bound_c": self.bound_c, "bound_a": self.bound_a, "evidence": enc(self.evidence)}
        if self.hull is not None:
            out["hull"] = self.hull.to_json()
        if self.nested is not None:
            out["nested"] = self.nested.to_json()
        return out


@dataclass(frozen=True, eq=False)
class SigmaAverage:
    n: int
    group_size: int
    averaged: np.ndarray


def target(x: CorrelationMatrix, t: float) -> np.ndarray:
    return t * x.entries + (1 - t) * np.eye(x.n)


def _need_three(n):
    if n < 3:
        raise DimensionTooSmall(f"bounds need n >= 3, got {n}")


def averaging_ratio(n: int) -> Fraction:
    return Fraction(6, n * n - n)


# ----------------------------------------------------------------- averaging


def sigma_group(n: int):
    """Permutations of 0..n-1 (as tuples) whose first three values increase."""
    return [s for s in itertools.permutations(range(n)) if s[0] < s[1] < s[2]]


def sigma_block(x, sigma) -> np.ndarray:
    """Relabelled block matrix: the 3x3 pattern of X on sigma[:3], identity elsewhere.

    Built as B = X[sigma[:3], sigma[:3]] (+) I_{n-3} and then moved by the
    relabelling a -> sigma[a], so entry (sigma[a], sigma[b]) of the result is B[a, b].
    """
    a = np.asarray(x.entries if isinstance(x, CorrelationMatrix) else x)
    n = a.shape[0]
    s = np.asarray(sigma)
    b = np.eye(n, dtype=a.dtype)
    b[:3, :3] = a[np.ix_(s[:3], s[:3])]
    out = np.empty_like(b)
    out[np.ix_(s, s)] = b
    return out


def sigma_average(x: CorrelationMatrix) -> SigmaAverage:
    _need_three(x.n)
    group = sigma_group(x.n)
    total = np.zeros((x.n, x.n), dtype=complex)
    for s in group:
        total += sigma_block(x.entries, s)
    return SigmaAverage(x.n, len(group), total / len(group))


def averaging_hull(x: CorrelationMatrix, tol: Tolerance = DEFAULT_TOL) -> moments.RankOneHull:
    """Rank-one hull of the averaged matrix; each 3x3 principal block is peeled into rank ones."""
    n = x.n
    triples = list(itertools.combinations(range(n), 3))
    parts = []
    for tri in triples:
        block = corr.validate(x.entries[np.ix_(tri, tri)], tol)
        parts.append((1 / len(triples), moments.rank_one_hull(block, False, tol).embedded(tri, n)))
    return moments.mix_hulls(parts)


def averaging_bound(x: CorrelationMatrix, tol: Tolerance = DEFAULT_TOL, certify: bool = True) -> BoundCertificate:
    _need_three(x.n)
    ratio = averaging_ratio(x.n)
    avg = sigma_average(x)
    residual = float(np.abs(avg.averaged - target(x, float(ratio))).max())
    evidence = {
        "n": x.n,
        "group_size": avg.group_size,
        "ratio": ratio,
        "identity_residual": residual,
        "averaged": avg.averaged,
    }
    hull = averaging_hull(x, tol) if certify else None
    return BoundCertificate("averaging", float(ratio), float(ratio), evidence, hull)


# --------------------------------------------------------------- eigen shift


def eigen_shift_bound(x: CorrelationMatrix, tol: Tolerance = DEFAULT_TOL, certify: bool = True) -> BoundCertificate:
    """Shift the spectrum down to zero before averaging.

    With lam0 the smallest eigenvalue, Y = (X - lam0 I)/(1 - lam0) is again a
    correlation matrix and the averaging bound for Y rescales by 1/(1 - lam0).
    """
    _need_three(x.n)
    n = x.n
    lam0 = float(corr.eigen(x, tol).eigenvalues[-1])
    if abs(lam0) <= tol.eps_psd:
        lam0 = 0.0
    if lam0 >= 1 - tol.eps_eq:
        hull = moments.identity_hull(n) if certify else None
        return BoundCertificate("eigen_shift", 1.0, 1.0, {"lambda0": 1.0, "identity": True}, hull)
    ratio = float(averaging_ratio(n))
    bound = ratio / (1 - lam0)
    # values within roundoff of the cap are the cap
    bound = 1.0 if bound >= 1.0 - 1e-12 else bound
    y = corr.validate((x.entries - lam0 * np.eye(n)) / (1 - lam0), tol)
    evidence = {"lambda0": lam0, "shifted": y}
    hull = None
    if certify:
        s = bound * (1 - lam0)
        hull = moments.mix_hulls(
            [(s / ratio, averaging_hull(y, tol)), (1 - s / ratio, moments.identity_hull(n))]
        )
    return BoundCertificate("eigen_shift", bound, bound, evidence, hull)


# ------------------------------------------------------------ skew reduction


@dataclass(frozen=True, eq=False)
class SkewCandidate:
    k: int | None  # realified row, None for the untouched matrix
    phases: np.ndarray
    rotated: CorrelationMatrix
    skew: np.ndarray
    support: tuple
    norm: float

    @property
    def d(self) -> float:
        return math.inf if self.norm == 0.0 else 1.0 / self.norm

    @property
    def fits_block(self) -> bool:
        return len(self.support) <= 3

    @property
    def bound(self) -> float:
        return 1.0 if self.norm == 0.0 else self.d / (self.d + 1)


def skew_candidate(x: CorrelationMatrix, k: int | None, tol: Tolerance = DEFAULT_TOL) -> SkewCandidate:
    if k is None:
        phases, rotated = np.ones(x.n, dtype=complex), x
    else:
        phases, rotated = corr.realify_row(x, k, tol)
    s = corr.skew_part(rotated)
    live = np.abs(s) > tol.eps_eq
    support = tuple(int(i) for i in np.flatnonzero(live.any(axis=1)))
    norm = mk.operator_norm(s, tol) if support else 0.0
    return SkewCandidate(k, phases, rotated, s, support, norm)


def skew_hull(x: CorrelationMatrix, cand: SkewCandidate, tol: Tolerance = DEFAULT_TOL) -> moments.RankOneHull:
    """Rank-one hull of tX + (1-t)I for t = d/(d+1) (needs n <= 5).

    (1/(d+1)) I + (d/(d+1)) X' splits into (1/(d+1))(I + dS) plus
    (d/(d+1)) Re X'. The first piece is a 3x3 block padded by the identity,
    the second a real correlation matrix whose real extreme points have rank
    at most two. Conjugating back by the row phases recovers X.
    """
    n = x.n
    real = moments.rank_one_hull(corr.real_part(cand.rotated, tol), True, tol)
    if cand.norm == 0.0:
        hull = real
    else:
        d = cand.d
        sup = list(cand.support)
        block = np.eye(len(sup)) + d * cand.skew[np.ix_(sup, sup)]
        block_hull = moments.rank_one_hull(corr.validate(block, tol), False, tol).embedded(sup, n)
        hull = moments.mix_hulls([(1 / (d + 1), block_hull), (d / (d + 1), real)])
    return hull.conjugated(cand.phases.conj())


def skew_reduction_bound(x: CorrelationMatrix, tol: Tolerance = DEFAULT_TOL, certify: bool = True) -> BoundCertificate:
    """Best skew-part bound over all rows used for phase normalization.

    The commuting-set claim needs n <= 5; for larger n only ``bound_a`` is set.
    """
    _need_three(x.n)
    n = x.n
    cands = [skew_candidate(x, k, tol) for k in range(n)]
    usable = [c for c in cands if c.fits_block]
    if not usable:
        raise SupportTooLarge(f"every row normalization leaves a skew support larger than 3 (n={n})")
    top = max(c.bound for c in usable)
    # lowest row index among (numerically) tied candidates keeps the choice stable
    best = next(c for c in usable if c.bound >= top - 1e-12)
    evidence = {
        "k": best.k,
        "phases": best.phases,
        "d": "inf" if best.norm == 0.0 else best.d,
        "skew_norm": best.norm,
        "support": list(best.support),
        "candidates": {str(c.k): (c.bound if c.fits_block else None) for c in cands},
    }
    bound = best.bound
    hull = None
    if n <= 5:
        if certify:
            hull = skew_hull(x, best, tol)
        return BoundCertificate("skew_reduction", bound, bound, evidence, hull)
    if certify:
        # matrix-unitary variant: Re X' is realized exactly by Clifford symmetries
        re = corr.real_part(best.rotated, tol)
        t = clifford.realize_real(re, tol)
        evidence["real_part_realization_residual"] = float(
            np.abs(moments.moment_matrix(t, tol).X.entries - re.entries).max()
        )
    return BoundCertificate("skew_reduction", None, bound, evidence, None)


# ------------------------------------------------------------------- combined


def best_lower_bound(x: CorrelationMatrix, tol: Tolerance = DEFAULT_TOL, certify: bool = True) -> BoundCertificate:
    _need_three(x.n)
    certs = [averaging_bound(x, tol, certify), eigen_shift_bound(x, tol, certify)]
    try:
        certs.append(skew_reduction_bound(x, tol, certify))
    except SupportTooLarge:
        pass
    with_c = [c for c in certs if c.bound_c is not None]
    # first maximum wins, so ties keep the earliest (simplest) construction
    winner = max(with_c, key=lambda c: c.bound_c)
    bound_a = max(c.bound_a for c in certs)
    evidence = {"winner": winner.kind, "candidates": {c.kind: {"bound_c": c.bound_c, "bound_a": c.bound_a} for c in certs}}
    return BoundCertificate("combined", winner.bound_c, bound_a, evidence, winner.hull, winner)


# ------------------------------------------------------------- verification


def verify(x: CorrelationMatrix, cert: BoundCertificate, tol: Tolerance = DEFAULT_TOL, atol: float = 1e-8) -> dict:
    """Recheck a certificate from its evidence alone.

    Returns a dict of residuals and an overall ``ok`` flag.
    """
    if cert.kind == "combined":
        inner = verify(x, cert.nested, tol, atol)
        ok = inner["ok"] and cert.bound_c == cert.nested.bound_c
        return {**inner, "ok": ok}
    n = x.n
    out = {}
    ev = cert.evidence
    if cert.kind == "averaging":
        recomputed = float(averaging_ratio(n))
        out["identity_residual"] = float(
            np.abs(sigma_average(x).averaged - target(x, recomputed)).max()
        )
    elif cert.kind == "eigen_shift":
        if ev.get("identity"):
            recomputed = 1.0
        else:
            lam0 = ev["lambda0"]
            recomputed = min(float(averaging_ratio(n)) / (1 - lam0), 1.0)
    else:
        cand = skew_candidate(x, ev["k"], tol)
        recomputed = cand.bound
    out["bound_recomputation"] = abs(recomputed - cert.bound)
    ok = out["bound_recomputation"] <= tol.eps_eq and out.get("identity_residual", 0.0) <= 1e-12 * n
    if cert.bound_c is not None:
        if cert.hull is None:
            ok = False
        else:
            out["hull_valid"] = cert.hull.is_valid(tol)
            out["hull_residual"] = cert.hull.residual(target(x, cert.bound_c))
            ok = ok and out["hull_valid"] and out["hull_residual"] <= atol
    elif "real_part_realization_residual" in ev:
        ok = ok and ev["real_part_realization_residual"] <= atol
    out["ok"] = bool(ok)
    return out
