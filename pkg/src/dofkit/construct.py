"""Full-DoF self-similar input construction for integer channels.

Pipeline: size a dyadic grid from the channel (grid_build), put an i.i.d.
uniform codeword distribution on grid-valued M x N codewords, fold each
codeword into a single vector W = sum_n r^{n-1} x^{(n)} with r = 2^{-k}
(fold_codewords), and lift the folded distribution to a self-similar
input with ratio r^N (lift_selfsimilar).  constructed_dof then evaluates
the per-receiver entropy ratios H(sumset)/(N k) exactly; every sumset is
re-verified against the contraction sufficient condition rather than
trusting the sizing chain that motivated the grid.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .dimension import (
    CONVOLVE_CAP,
    DimValue,
    convolve_linear,
    entropy_finite,
    minmax_dist,
    open_set_check,
)
from .engine import DofReport, assemble_report, scale_transform
from .errors import (
    ConditionViolated,
    InputError,
    OpenSetUnverified,
    ResolutionTooCoarse,
    SupportTooLarge,
    TooFewPoints,
)
from .linalg import ChannelMatrix, RatMatrix
from .schemes import FiniteDist, SelfSimilarScheme, validate_scheme

Q = Fraction


@dataclass(frozen=True)
class ConstructionParams:
    """Resolution exponent k (single-letter ratio r = 2^{-k}), grid
    coarsening p, blocklength N, and the channel magnitude the sizing
    used.  k > p is structural; the sizing inequality 2^{-p} <= 1/(8KM
    H_max) is grid_build's postcondition, not re-checked here, so
    hand-built params can explore finer grids than the sizing allows
    (all downstream safety comes from direct sumset checks)."""

    k: int
    p: int
    N: int
    H_max: Fraction

    def __post_init__(self):
        if self.k < 1 or self.p < 1 or self.N < 1:
            raise InputError("k, p, N must be positive integers")
        if self.k <= self.p:
            raise ResolutionTooCoarse(
                "need k > p, got k=%d, p=%d" % (self.k, self.p))

    @property
    def r(self) -> Fraction:
        return Q(1, 2 ** self.k)

    @property
    def grid_step(self) -> Fraction:
        return Q(1, 2 ** (self.k - self.p))


@dataclass(frozen=True)
class GridSet:
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.values:
            raise InputError("empty grid")
        if any(not (0 <= v <= 1) for v in self.values):
            raise InputError("grid values must lie in [0,1]")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise InputError("grid values must be strictly increasing")


def clear_to_integers(H: ChannelMatrix) -> ChannelMatrix:
    """Scale each transmitter's column block by the lcm of its entry
    denominators; the result has integer entries and identical dof."""
    from math import lcm
    scalings = []
    for j in range(H.K):
        denoms = [x.denominator for i in range(H.K)
                  for x in H.block(i, j).entries]
        scalings.append(RatMatrix.identity(H.M).scale(lcm(*denoms)))
    eye = [RatMatrix.identity(H.M) for _ in range(H.K)]
    return scale_transform(H, eye, scalings)


def grid_build(H: ChannelMatrix, k: int, N: int = 1
               ) -> tuple[ConstructionParams, GridSet]:
    """Smallest grid coarsening p with 2^{-p} <= 1/(8 K M H_max), then the
    dyadic grid 2^{-(k-p)} {0, 1, ..., 2^{k-p}}.  H must already have
    integer entries (see clear_to_integers)."""
    if any(x.denominator != 1 for row in H.blocks for b in row
           for x in b.entries):
        raise InputError("grid sizing needs integer entries; "
                         "clear denominators first")
    h_max = max(abs(x) for row in H.blocks for b in row for x in b.entries)
    if h_max == 0:
        raise InputError("all-zero channel has no grid sizing")
    need = 8 * H.K * H.M * int(h_max)  # want 2^p >= need
    p = max(1, (need - 1).bit_length())
    if k <= p:
        raise ResolutionTooCoarse(
            "k=%d does not exceed the required coarsening p=%d" % (k, p))
    params = ConstructionParams(k=k, p=p, N=N, H_max=Q(h_max))
    step = params.grid_step
    count = 2 ** (k - p)
    grid = GridSet(tuple(t * step for t in range(count + 1)))
    return params, grid


def uniform_codewords(grid: GridSet, K: int, M: int, N: int,
                      cap: int = CONVOLVE_CAP) -> tuple[FiniteDist, ...]:
    """The default multi-letter input: i.i.d. uniform over the grid in
    every one of the M*N codeword entries, identical across users."""
    n_points = len(grid.values) ** (M * N)
    if n_points > cap:
        raise SupportTooLarge("codeword support of %d points exceeds cap %d"
                              % (n_points, cap))
    pts = tuple(itertools.product(grid.values, repeat=M * N))
    dist = FiniteDist(pts, (Q(1, n_points),) * n_points)
    return tuple(dist for _ in range(K))


def fold_codewords(codeword_dists: Sequence[FiniteDist],
                   params: ConstructionParams) -> tuple[FiniteDist, ...]:
    """Push each user's codeword distribution through the folding map
    W = sum_{n=1..N} r^{n-1} x^{(n)} (codeword entries laid out letter by
    letter).  Folding is injective whenever r <= m/(m+M) for the set of
    codeword entry values; that condition is checked per user and a
    failure refuses rather than silently merging codewords."""
    r = params.r
    N = params.N
    out = []
    for u, dist in enumerate(codeword_dists):
        if dist.dim % N != 0:
            raise InputError("user %d codewords have %d entries, not a "
                             "multiple of N=%d" % (u + 1, dist.dim, N))
        M = dist.dim // N
        values = {x for pt in dist.points for x in pt}
        if not open_set_check(r, values):
            raise OpenSetUnverified(
                "user %d: folding injectivity not certified for r=%s"
                % (u + 1, r))
        acc: dict[tuple[Fraction, ...], Fraction] = {}
        for pt, prob in zip(dist.points, dist.probs):
            w = tuple(
                sum((r ** n * pt[n * M + c] for n in range(N)), Q(0))
                for c in range(M))
            acc[w] = acc.get(w, Q(0)) + prob
        assert len(acc) == len(dist.points)  # injectivity, per the check above
        pts = sorted(acc)
        out.append(FiniteDist(tuple(pts), tuple(acc[p] for p in pts)))
    return tuple(out)


def lift_selfsimilar(folded: Sequence[FiniteDist],
                     params: ConstructionParams) -> SelfSimilarScheme:
    """Repeat the folded block geometrically: ratio r^N, supports as-is."""
    return SelfSimilarScheme(ratio=params.r ** params.N,
                             supports=tuple(folded))


def constructed_dof(H: ChannelMatrix, scheme: SelfSimilarScheme,
                    params: ConstructionParams) -> DofReport:
    """Exact per-receiver entropy ratios H(sumset)/(N k) for a scheme from
    this pipeline.  Both the full and the interference sumset of every
    receiver must pass the contraction check with ratio r^N."""
    validate_scheme(scheme, H)
    if scheme.ratio != params.r ** params.N:
        raise InputError("scheme ratio %s does not match params (r^N = %s)"
                         % (scheme.ratio, params.r ** params.N))
    log2_inv = float(params.N * params.k)
    pairs = []
    for i in range(H.K):
        full = convolve_linear(
            [(H.block(i, j), scheme.supports[j]) for j in range(H.K)])
        if not open_set_check(scheme.ratio, full.points):
            raise OpenSetUnverified(
                "receiver %d full sumset fails the contraction check"
                % (i + 1,))
        intf = convolve_linear(
            [(H.block(i, j), scheme.supports[j])
             for j in range(H.K) if j != i])
        if not open_set_check(scheme.ratio, intf.points):
            raise OpenSetUnverified(
                "receiver %d interference sumset fails the contraction check"
                % (i + 1,))
        pairs.append((
            DimValue.from_entropy_ratio(entropy_finite(full), log2_inv),
            DimValue.from_entropy_ratio(entropy_finite(intf), log2_inv)))
    return assemble_report(pairs, H, "entropy-ratio")


def minkowski_check(V: Sequence, r, ell: int) -> tuple[Fraction, int]:
    """Enumerate V + rV + ... + r^{ell-1}V exactly and return its minimum
    distance and cardinality.  Requires r <= m(V)/(m(V)+M(V)); under that
    condition the sum has |V|^ell distinct points with minimum distance at
    least r^{ell-1} m(V), and both facts are asserted on the enumeration."""
    vals = sorted({Q(v) for v in V})
    if len(vals) < 2:
        raise TooFewPoints("need at least 2 distinct values, got %d"
                           % len(vals))
    if ell < 1:
        raise InputError("ell must be at least 1")
    r = Q(r)
    m, M = minmax_dist(vals)
    if not (0 < r < 1) or r > Q(m, m + M):
        raise ConditionViolated(
            "r=%s exceeds the injectivity threshold m/(m+M)=%s"
            % (r, Q(m, m + M)))
    sums = sorted({
        sum((r ** t * combo[t] for t in range(ell)), Q(0))
        for combo in itertools.product(vals, repeat=ell)})
    min_dist = min(b - a for a, b in zip(sums, sums[1:]))
    assert min_dist >= r ** (ell - 1) * m
    assert len(sums) == len(vals) ** ell
    return min_dist, len(sums)
