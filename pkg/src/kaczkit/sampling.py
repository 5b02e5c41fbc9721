"""Row-sampling distributions and without-replacement draws.

Distributions never include zero-norm rows in their support. Zero *weights*
inside the support are allowed (they are simply never drawn), which is how
the spectral weighting handles rows orthogonal to the weighting vector.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSpectrumError, EmptySupportError, SampleSizeError
from .feasibility import FeasibilitySystem
from .matgen import LinearSystem

#: strategy kinds accepted in configs
STRATEGY_KINDS = (
    "uniform",
    "sq-norm",
    "spectral",
    "scheme-base",
    "scheme-combined",
    "scheme-pairs",
    "cluster",
)


@dataclass
class SamplingStrategy:
    """Named sampling rule; the spectral rule carries its weighting vector."""

    kind: str
    vector: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown sampling strategy {self.kind!r}")
        if self.kind == "spectral":
            if self.vector is None:
                raise ValueError("spectral strategy needs a weighting vector")
            self.vector = np.asarray(self.vector, dtype=float)
            if abs(np.linalg.norm(self.vector) - 1.0) > 1e-12:
                raise ValueError("spectral weighting vector must have unit norm")


@dataclass
class RowDistribution:
    """Discrete distribution over a support of row indices."""

    support: np.ndarray
    weights: np.ndarray
    _cumulative: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.support = np.asarray(self.support, dtype=np.intp)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.support.size == 0:
            raise EmptySupportError("distribution has empty support")
        if self.support.shape != self.weights.shape:
            raise ValueError("support and weights have different lengths")
        if np.any(self.weights < 0.0):
            raise ValueError("weights must be non-negative")
        total = float(self.weights.sum())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {total!r}, expected 1")

    @property
    def cumulative(self) -> np.ndarray:
        if self._cumulative is None:
            self._cumulative = np.cumsum(self.weights)
        return self._cumulative

    @property
    def positive_count(self) -> int:
        return int(np.count_nonzero(self.weights > 0.0))


def spectral_weights(a: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Weights proportional to |<a_i, v>| over all rows, normalized to sum 1."""
    a = np.asarray(a, dtype=float)
    v = np.asarray(v, dtype=float)
    coeff = np.abs(a @ v)
    total = coeff.sum()
    if total == 0.0:
        raise DegenerateSpectrumError("all rows are orthogonal to the weighting vector")
    return coeff / total


def _uniform(support: np.ndarray) -> RowDistribution:
    if support.size == 0:
        raise EmptySupportError("no sampleable rows")
    w = np.full(support.size, 1.0 / support.size)
    return RowDistribution(support=support, weights=w)


def build_distribution(strategy: SamplingStrategy, system) -> RowDistribution:
    """Resolve a strategy against a system.

    The scheme-* kinds need a FeasibilitySystem (they address the combined
    base + pair indexing); the others accept a plain LinearSystem too.
    """
    if isinstance(system, FeasibilitySystem):
        target = system.combined if system.pair_rows is not None else system.base
        m_base = system.m
    elif isinstance(system, LinearSystem):
        target = system
        m_base = system.shape[0]
    else:
        raise TypeError(f"cannot build a distribution over {type(system)!r}")

    norms_sq = target.row_norms_sq
    nonzero = norms_sq > 0.0
    kind = strategy.kind

    if kind == "uniform":
        return _uniform(np.flatnonzero(nonzero))
    if kind == "sq-norm":
        support = np.flatnonzero(nonzero)
        if support.size == 0:
            raise EmptySupportError("no sampleable rows")
        w = norms_sq[support]
        return RowDistribution(support=support, weights=w / w.sum())
    if kind == "spectral":
        support = np.flatnonzero(nonzero)
        if support.size == 0:
            raise EmptySupportError("no sampleable rows")
        w = spectral_weights(target.matrix[support], strategy.vector)
        return RowDistribution(support=support, weights=w)
    if kind == "scheme-base":
        mask = nonzero.copy()
        mask[m_base:] = False
        return _uniform(np.flatnonzero(mask))
    if kind == "scheme-combined":
        return _uniform(np.flatnonzero(nonzero))
    if kind == "scheme-pairs":
        mask = nonzero.copy()
        mask[:m_base] = False
        return _uniform(np.flatnonzero(mask))
    if kind == "cluster":
        raise ValueError(
            "cluster strategy is iterate-dependent; build a sampler via "
            "clustering.ClusterGuidedSource instead"
        )
    raise ValueError(f"unknown sampling strategy {kind!r}")


def sample_rows(
    dist: RowDistribution, beta: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw beta distinct support indices proportional to the weights.

    Sequential draw-and-renormalize semantics: duplicates are rejected and
    redrawn, which is distribution-identical to renormalizing after each
    removal. After 64 consecutive rejections the cumulative table is rebuilt
    without the already-chosen rows so concentrated weights cannot stall.
    """
    if beta < 1:
        raise SampleSizeError(f"sample size must be >= 1, got {beta}")
    if beta > dist.positive_count:
        raise SampleSizeError(
            f"sample size {beta} exceeds {dist.positive_count} sampleable rows"
        )
    support = dist.support
    cum = dist.cumulative
    total = cum[-1]
    if beta == 1:
        pos = _draw_position(cum, dist.weights, total, rng)
        return support[pos : pos + 1].copy()

    chosen: list[int] = []
    taken = np.zeros(support.size, dtype=bool)
    weights = dist.weights
    rejects = 0
    while len(chosen) < beta:
        pos = _draw_position(cum, weights, total, rng)
        if taken[pos]:
            rejects += 1
            if rejects >= 64:
                # exact renormalization over the remaining rows
                weights = np.where(taken, 0.0, dist.weights)
                cum = np.cumsum(weights)
                total = cum[-1]
                rejects = 0
            continue
        taken[pos] = True
        chosen.append(pos)
        rejects = 0
    return np.sort(support[np.array(chosen, dtype=np.intp)])


def _draw_position(cum, weights, total, rng) -> int:
    """One inverse-CDF draw; guards the u*total == total rounding edge."""
    pos = int(np.searchsorted(cum, rng.random() * total, side="right"))
    if pos >= weights.size:
        pos = weights.size - 1
    while weights[pos] == 0.0 and pos > 0:
        pos -= 1
    return pos
