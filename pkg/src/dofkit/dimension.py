"""Exact information-dimension rules.

Three evaluation paths, one per scheme family:
  * rank rule          -- d(sum_j A_j Xtilde_j) = rank [A_1 ... A_K]
  * mixture formula    -- d = M (1 - prod_j (1 - alpha_j))
  * entropy ratio      -- d = H(W) / log2(1/r) for self-similar sums,
    guarded by the sufficient contraction condition r <= m/(m+M) on the
    support's minimum/maximum pairwise l-infinity distances.

The third path only certifies the formula under the sufficient condition;
when it fails the answer may still be correct, but this module refuses to
guess (OpenSetUnverified).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import fsum
from typing import Iterable, Sequence

from .errors import (
    AlphaOutOfRange,
    DimMismatch,
    InputError,
    OpenSetUnverified,
    RatioOutOfRange,
    SupportTooLarge,
    TooFewPoints,
)
from .linalg import RatMatrix, mat_rank
from .schemes import FiniteDist, _vec

Q = Fraction

CONVOLVE_CAP = 10 ** 6


@dataclass(frozen=True)
class DimValue:
    """An information-dimension value with its provenance.

    kind "rational":      exact Fraction (rank and mixture paths)
    kind "entropy-ratio": entropy_bits / log2_inv_ratio (self-similar path)
    kind "estimate":      Monte Carlo point estimate with optional stderr
    """

    kind: str
    rational: Fraction | None = None
    entropy_bits: float | None = None
    log2_inv_ratio: float | None = None
    estimate: float | None = None
    stderr: float | None = None

    @staticmethod
    def from_rational(q) -> "DimValue":
        return DimValue(kind="rational", rational=Q(q))

    @staticmethod
    def from_entropy_ratio(bits: float, log2_inv_ratio: float) -> "DimValue":
        if log2_inv_ratio <= 0:
            raise RatioOutOfRange("log2(1/r) must be positive")
        return DimValue(kind="entropy-ratio", entropy_bits=float(bits),
                        log2_inv_ratio=float(log2_inv_ratio))

    @staticmethod
    def from_estimate(value: float, stderr: float | None = None) -> "DimValue":
        return DimValue(kind="estimate", estimate=float(value),
                        stderr=None if stderr is None else float(stderr))

    def as_float(self) -> float:
        if self.kind == "rational":
            return float(self.rational)
        if self.kind == "entropy-ratio":
            return self.entropy_bits / self.log2_inv_ratio
        return self.estimate

    def minus(self, other: "DimValue") -> "DimValue":
        if self.kind != other.kind:
            raise DimMismatch("cannot combine %s with %s dimension values"
                              % (self.kind, other.kind))
        if self.kind == "rational":
            return DimValue.from_rational(self.rational - other.rational)
        if self.kind == "entropy-ratio":
            if self.log2_inv_ratio != other.log2_inv_ratio:
                raise DimMismatch("entropy ratios with different denominators")
            return DimValue.from_entropy_ratio(
                self.entropy_bits - other.entropy_bits, self.log2_inv_ratio)
        se = None
        if self.stderr is not None and other.stderr is not None:
            se = math.hypot(self.stderr, other.stderr)
        return DimValue.from_estimate(self.estimate - other.estimate, se)


def sum_dims(values: Sequence[DimValue]) -> DimValue:
    """Sum of same-kind dimension values (entropy ratios must share the
    denominator; estimate standard errors combine in quadrature)."""
    if not values:
        raise InputError("sum of no dimension values")
    kinds = {v.kind for v in values}
    if len(kinds) != 1:
        raise DimMismatch("mixed dimension kinds in one aggregate")
    kind = kinds.pop()
    if kind == "rational":
        return DimValue.from_rational(sum((v.rational for v in values), Q(0)))
    if kind == "entropy-ratio":
        L = values[0].log2_inv_ratio
        if any(v.log2_inv_ratio != L for v in values):
            raise DimMismatch("entropy ratios with different denominators")
        return DimValue.from_entropy_ratio(
            fsum(v.entropy_bits for v in values), L)
    ses = [v.stderr for v in values]
    se = None if any(s is None for s in ses) else math.sqrt(fsum(s * s for s in ses))
    return DimValue.from_estimate(fsum(v.estimate for v in values), se)


def _point_set(points: Iterable) -> list[tuple[Fraction, ...]]:
    return sorted({_vec(p) for p in points})


def _linf(a: tuple[Fraction, ...], b: tuple[Fraction, ...]) -> Fraction:
    return max(abs(x - y) for x, y in zip(a, b))


def minmax_dist(points: Iterable) -> tuple[Fraction, Fraction]:
    """Minimum and maximum pairwise l-infinity distance of a point set."""
    pts = _point_set(points)
    if len(pts) < 2:
        raise TooFewPoints("need at least 2 distinct points, got %d" % len(pts))
    if len(pts[0]) == 1:
        # scalar fast path: sorted gaps
        vals = [p[0] for p in pts]
        m = min(b - a for a, b in zip(vals, vals[1:]))
        return m, vals[-1] - vals[0]
    m = None
    M = None
    for a, b in itertools.combinations(pts, 2):
        d = _linf(a, b)
        m = d if m is None or d < m else m
        M = d if M is None or d > M else M
    return m, M


def open_set_check(r, points: Iterable) -> bool:
    """Sufficient condition r <= m/(m+M) for the contraction images of the
    point set to stay disjoint.  Single-point sets pass trivially."""
    r = Q(r)
    if not (0 < r < 1):
        raise RatioOutOfRange("ratio must lie in (0,1), got %s" % (r,))
    pts = _point_set(points)
    if len(pts) == 1:
        return True
    m, M = minmax_dist(pts)
    return r <= Q(m, m + M) if (m + M) != 0 else False


def entropy_finite(D: FiniteDist) -> float:
    """Shannon entropy in bits; fsum keeps the result exactly rounded and
    independent of summation order."""
    return -fsum(float(p) * math.log2(float(p)) for p in D.probs)


def convolve_linear(terms: Sequence[tuple[RatMatrix, FiniteDist]],
                    cap: int = CONVOLVE_CAP) -> FiniteDist:
    """Exact distribution of sum_j A_j Z_j for independent Z_j ~ D_j.

    Coinciding image points merge by probability addition; the product
    support size is bounded by `cap` before any enumeration starts.
    """
    if not terms:
        raise InputError("convolution of no terms")
    out_dim = terms[0][0].rows
    for A, D in terms:
        if A.rows != out_dim:
            raise DimMismatch("terms map into different output dimensions")
        if A.cols != D.dim:
            raise DimMismatch("matrix takes dimension %d, support has %d"
                              % (A.cols, D.dim))
    size = 1
    for _, D in terms:
        size *= len(D.points)
    if size > cap:
        raise SupportTooLarge("product support of %d points exceeds cap %d"
                              % (size, cap))
    per_term = []
    for A, D in terms:
        imgs = []
        for z, pz in zip(D.points, D.probs):
            image = tuple(
                sum((A.at(i, c) * z[c] for c in range(A.cols)), Q(0))
                for i in range(out_dim))
            imgs.append((image, pz))
        per_term.append(tuple(imgs))
    acc: dict[tuple[Fraction, ...], Fraction] = {}
    for combo in itertools.product(*per_term):
        point = tuple(sum(coords, Q(0))
                      for coords in zip(*[img for img, _ in combo]))
        prob = Q(1)
        for _, pz in combo:
            prob *= pz
        acc[point] = acc.get(point, Q(0)) + prob
    pts = sorted(acc)
    return FiniteDist(tuple(pts), tuple(acc[p] for p in pts))


def dim_subspace_sum(terms: Sequence[RatMatrix]) -> int:
    """d(sum_j A_j Xtilde_j) for independent jointly absolutely continuous
    latents: the rank of the column-concatenation [A_1 ... A_K]."""
    if not terms:
        return 0
    rows = terms[0].rows
    if any(t.rows != rows for t in terms):
        raise DimMismatch("terms with different output dimensions")
    return mat_rank(RatMatrix.hstack(list(terms)))


def dim_mixture_sum(alphas: Sequence, M: int) -> Fraction:
    """d(sum_j B_j X_j) for nonsingular B_j and coordinate-wise mixtures:
    M * (1 - prod_j (1 - alpha_j)).  The caller guarantees nonsingularity."""
    prod = Q(1)
    for j, a in enumerate(alphas):
        a = Q(a)
        if not (0 <= a <= 1):
            raise AlphaOutOfRange("alpha_%d = %s outside [0,1]" % (j + 1, a))
        prod *= 1 - a
    return M * (1 - prod)


def dim_selfsimilar(r, D: FiniteDist) -> DimValue:
    """H(D)/log2(1/r), certified only under the sufficient contraction
    condition; refuses (rather than guesses) when the check fails."""
    r = Q(r)
    if not open_set_check(r, D.points):
        raise OpenSetUnverified(
            "cannot certify r = %s against the support's distance ratio" % (r,))
    bits = entropy_finite(D)
    log2_inv = math.log2(Q(1) / r)
    return DimValue.from_entropy_ratio(bits, log2_inv)
