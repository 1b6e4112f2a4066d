"""Monte Carlo cross-validation of the exact dimension rules.

Information dimension is estimated as the two-point slope of the plug-in
entropy over dyadic cells,

    d_hat = (H_hat[k2] - H_hat[k1]) / (k2 - k1),

which cancels the resolution-independent additive constants.  Sampling is
counter-based (Philox) with keys derived from (seed xor batch, user), so
identical configs give bit-identical streams regardless of batching.

NOTE: floating point is confined to this module; nothing here feeds back
into the exact evaluation paths.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .dimension import DimValue, minmax_dist
from .engine import DofReport, assemble_report
from .errors import InputError
from .linalg import ChannelMatrix
from .schemes import (
    MixtureScheme,
    Scheme,
    SelfSimilarScheme,
    SubspaceScheme,
    validate_scheme,
)

Q = Fraction

_MASK64 = (1 << 64) - 1
_BATCH = 1 << 16

# Entropy ceiling per dimension for unit-power integer parts; the constant
# 26*pi*e/3 comes from a max-entropy bound with second-moment budget.
INTEGER_ENTROPY_BITS_PER_DIM = 0.5 * math.log2(26 * math.pi * math.e / 3)


@dataclass(frozen=True)
class EstimatorConfig:
    n_samples: int
    k1: int
    k2: int
    seed: int
    ifs_depth: Optional[int] = None  # None = derive from k2 and the support

    def __post_init__(self):
        if self.n_samples < 1:
            raise InputError("need at least one sample")
        if not (self.k2 > self.k1 >= 1):
            raise InputError("need k2 > k1 >= 1, got k1=%d, k2=%d"
                             % (self.k1, self.k2))
        if self.ifs_depth is not None and self.ifs_depth < 1:
            raise InputError("ifs_depth must be positive")


@dataclass(frozen=True)
class DimEstimate:
    value: float
    stderr: float
    k1: int
    k2: int


def _generator(seed: int, user: int, batch: int) -> np.random.Generator:
    key = np.array([(seed ^ batch) & _MASK64, user & _MASK64],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def ifs_truncation_depth(scheme: SelfSimilarScheme, k2: int) -> int:
    """Smallest D with r^D M(W) / (1-r) < 2^{-(k2+2)}: the discarded tail
    then cannot move any sample across a k2-cell boundary by more than a
    quarter cell."""
    r = scheme.ratio
    spans = []
    for s in scheme.supports:
        if len(s.points) >= 2:
            spans.append(minmax_dist(s.points)[1])
    if not spans:
        return 1  # every support is an atom; the series is constant
    span = max(spans)
    threshold = Q(1, 2 ** (k2 + 2))
    D = 1
    while r ** D * span / (1 - r) >= threshold:
        D += 1
    return D


def sample_scheme(scheme: Scheme, n: int, seed: int, *,
                  M: Optional[int] = None,
                  ifs_depth: Optional[int] = None,
                  k2: Optional[int] = None) -> list[np.ndarray]:
    """n i.i.d. samples per user, shape (n, M) each.  Mixture schemes do
    not carry their ambient dimension and need M passed in (usually the
    channel's); self-similar series are truncated at ifs_depth terms
    (derived from k2 when not given)."""
    if isinstance(scheme, SubspaceScheme):
        users = len(scheme.directions)
        M = scheme.directions[0].rows
    elif isinstance(scheme, MixtureScheme):
        if M is None:
            raise InputError("mixture sampling needs the ambient dimension M")
        return sample_mixture(scheme, M, n, seed)
    elif isinstance(scheme, SelfSimilarScheme):
        users = len(scheme.supports)
        M = scheme.supports[0].dim
        if ifs_depth is None:
            if k2 is None:
                raise InputError("self-similar sampling needs ifs_depth or k2")
            ifs_depth = ifs_truncation_depth(scheme, k2)
    else:
        raise InputError("unknown scheme type %r" % (type(scheme).__name__,))

    out = []
    for u in range(users):
        chunks = []
        for start in range(0, n, _BATCH):
            size = min(_BATCH, n - start)
            gen = _generator(seed, u, start // _BATCH)
            if isinstance(scheme, SubspaceScheme):
                V = scheme.directions[u]
                if V.cols == 0:
                    chunks.append(np.zeros((size, M)))
                    continue
                Vf = np.array(V.to_float_rows())
                if scheme.latent_tag == "gaussian":
                    lat = gen.standard_normal((size, V.cols))
                else:
                    lat = gen.random((size, V.cols))
                chunks.append(lat @ Vf.T)
            else:
                support = scheme.supports[u]
                P = len(support.points)
                pts = np.array([[float(x) for x in pt]
                                for pt in support.points])
                probs = np.array([float(q) for q in support.probs])
                probs = probs / probs.sum()
                idx = gen.choice(P, size=(size, ifs_depth), p=probs)
                weights = float(scheme.ratio) ** np.arange(ifs_depth)
                chunks.append(
                    (pts[idx] * weights[None, :, None]).sum(axis=1))
        out.append(np.concatenate(chunks, axis=0))
    return out


def sample_mixture(scheme: MixtureScheme, M: int, n: int, seed: int
                   ) -> list[np.ndarray]:
    """Mixture samples: with probability alpha_j a uniform [0,1)^M draw,
    otherwise the atom at the origin."""
    out = []
    for u, alpha in enumerate(scheme.alphas):
        a = float(alpha)
        chunks = []
        for start in range(0, n, _BATCH):
            size = min(_BATCH, n - start)
            gen = _generator(seed, u, start // _BATCH)
            mask = gen.random(size) < a
            ac = gen.random((size, M))
            chunks.append(ac * mask[:, None])
        out.append(np.concatenate(chunks, axis=0))
    return out


def _cells(samples: np.ndarray, k: int) -> np.ndarray:
    arr = np.asarray(samples, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    return np.floor(arr * float(2 ** k)).astype(np.int64)


def quantized_entropy(samples: np.ndarray, k: int) -> float:
    """Plug-in Shannon entropy (bits) of the empirical distribution over
    the dyadic cells floor(2^k x)."""
    if k < 0:
        raise InputError("resolution exponent must be nonnegative")
    cells = _cells(samples, k)
    _, counts = np.unique(cells, axis=0, return_counts=True)
    p = counts / cells.shape[0]
    return float(-np.sum(p * np.log2(p)))


def estimate_dim(samples: np.ndarray, cfg: EstimatorConfig) -> DimEstimate:
    """Two-point entropy slope with an analytic uncertainty proxy.

    The proxy combines, in quadrature, the three error sources that matter
    at finite n and finite resolution:

    - sampling noise, from the per-sample quantity
      g_i = (log2 p1(cell_i) - log2 p2(cell_i)) / (k2 - k1), whose mean is
      exactly the slope (this keeps the strong correlation between the two
      resolutions instead of adding their variances);
    - occupancy bias: the plug-in entropy underestimates by about
      (cells - 1)/(2 n ln 2), which does not cancel between the two
      resolutions;
    - curvature: the slope over (k1, k2) is only meaningful where H(k) is
      close to linear, so the second difference of H at an intermediate
      resolution is charged as a systematic term.
    """
    cells1 = _cells(samples, cfg.k1)
    cells2 = _cells(samples, cfg.k2)
    n = cells1.shape[0]
    span = cfg.k2 - cfg.k1
    _, inv1, c1 = np.unique(cells1, axis=0, return_inverse=True,
                            return_counts=True)
    _, inv2, c2 = np.unique(cells2, axis=0, return_inverse=True,
                            return_counts=True)
    inv1 = inv1.reshape(-1)
    inv2 = inv2.reshape(-1)
    p1 = c1 / n
    p2 = c2 / n
    h1 = float(-np.sum(p1 * np.log2(p1)))
    h2 = float(-np.sum(p2 * np.log2(p2)))
    value = (h2 - h1) / span
    g = (np.log2(p1[inv1]) - np.log2(p2[inv2])) / span
    s_noise = float(np.std(g, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    s_bias = (len(c2) - len(c1)) / (2.0 * n * math.log(2) * span)
    s_curv = 0.0
    if span >= 2:
        mid = (cfg.k1 + cfg.k2) // 2
        hm = quantized_entropy(samples, mid)
        s_curv = abs((h2 - hm) / (cfg.k2 - mid)
                     - (hm - h1) / (mid - cfg.k1))
    stderr = math.hypot(s_noise, s_bias, s_curv)
    needed = 50 * 2.0 ** (cfg.k2 * max(value, 0.0))
    if cfg.n_samples < needed:
        warnings.warn(
            "n_samples=%d below the guidance 50 * 2^(k2 d) ~ %.3g for the "
            "estimated dimension %.3f" % (cfg.n_samples, needed, value))
    return DimEstimate(value=value, stderr=stderr, k1=cfg.k1, k2=cfg.k2)


def estimate_dof(H: ChannelMatrix, scheme: Scheme,
                 cfg: EstimatorConfig) -> DofReport:
    """Monte Carlo mirror of dof_eval: estimate the full and interference
    dimensions at every receiver from sampled channel outputs."""
    validate_scheme(scheme, H)
    samples = sample_scheme(scheme, cfg.n_samples, cfg.seed, M=H.M,
                            ifs_depth=cfg.ifs_depth, k2=cfg.k2)
    blocks = [[np.array(H.block(i, j).to_float_rows())
               for j in range(H.K)] for i in range(H.K)]
    pairs = []
    for i in range(H.K):
        full = sum(samples[j] @ blocks[i][j].T for j in range(H.K))
        intf = sum(samples[j] @ blocks[i][j].T
                   for j in range(H.K) if j != i)
        ef = estimate_dim(full, cfg)
        ei = estimate_dim(intf, cfg)
        pairs.append((DimValue.from_estimate(ef.value, ef.stderr),
                      DimValue.from_estimate(ei.value, ei.stderr)))
    return assemble_report(pairs, H, "monte-carlo")
