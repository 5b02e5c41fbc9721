"""Row-projection solvers: single-row Kaczmarz steps, the greedy
max-residual variant over a sampled row set, and the run loop.

A greedy step samples beta rows, projects onto the one with the largest
residual, and for <= systems only acts when that residual is positive.
With beta = 1 this reduces to plain randomized Kaczmarz.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptySampleError,
    MissingSvdError,
    NonFiniteIterateError,
    ZeroRowError,
)
from .matgen import LinearSystem, Relation
from .metrics import IterationTrace, TraceRecorder
from .sampling import RowDistribution, SamplingStrategy, build_distribution, sample_rows


@dataclass
class SolverConfig:
    """Run parameters.

    beta is the sample size per iteration, lam the relaxation in (0, 2],
    stop_tolerance an optional ||x - x*|| target checked at recorded
    iterations (requires a ground truth), trace_stride the recording period.
    """

    max_iterations: int
    beta: int = 1
    lam: float = 1.0
    seed: int | None = None
    stop_tolerance: float | None = None
    trace_stride: int = 1

    def __post_init__(self):
        if self.beta < 1:
            raise ValueError(f"beta must be >= 1, got {self.beta}")
        if not 0.0 < self.lam <= 2.0:
            raise ValueError(f"relaxation must lie in (0, 2], got {self.lam}")
        if self.max_iterations < 1:
            raise ValueError("iteration budget must be >= 1")
        if self.trace_stride < 1:
            raise ValueError("trace stride must be >= 1")


@dataclass
class SolveResult:
    x: np.ndarray
    iterations: int
    trace: IterationTrace
    reason: str  # "budget" | "tolerance" | "degenerate"


def rk_step(
    system: LinearSystem, x: np.ndarray, row: int, lam: float = 1.0
) -> np.ndarray:
    """Project x toward the hyperplane (or half-space) of one row.

    Equality rows always project; <= rows use the positive part of the
    residual, so satisfied rows leave x untouched.
    """
    a = system.matrix[row]
    norm_sq = float(a @ a)
    if norm_sq == 0.0:
        raise ZeroRowError(f"row {row} has zero norm")
    residual = float(a @ x) - system.rhs[row]
    if system.relation is Relation.LESS_EQUAL and residual <= 0.0:
        return x
    return x - (lam * residual / norm_sq) * a


def skm_step(
    system: LinearSystem, x: np.ndarray, tau: np.ndarray, lam: float = 1.0
) -> tuple[np.ndarray, int]:
    """Greedy step over a candidate set: project onto the max-residual row.

    Ties go to the lowest row index. Returns (new iterate, chosen row).
    """
    tau = np.asarray(tau, dtype=np.intp)
    if tau.size == 0:
        raise EmptySampleError("candidate set is empty")
    tau = np.sort(tau)
    residuals = system.matrix[tau] @ x - system.rhs[tau]
    t = int(tau[np.argmax(residuals)])
    return rk_step(system, x, t, lam), t


def distribution_sampler(dist: RowDistribution, beta: int):
    """Iterate-independent sampler drawing beta rows per iteration."""

    def select(_k, _x, rng):
        return sample_rows(dist, beta, rng)

    return select


def _resolve_sampler(sampler, system, beta):
    if isinstance(sampler, RowDistribution):
        return distribution_sampler(sampler, beta)
    if isinstance(sampler, SamplingStrategy):
        return distribution_sampler(build_distribution(sampler, system), beta)
    if callable(sampler):
        return sampler
    raise TypeError(f"cannot use {type(sampler)!r} as a row sampler")


def run_solver(
    system: LinearSystem,
    config: SolverConfig,
    sampler,
    x0: np.ndarray | None = None,
    recorder: TraceRecorder | None = None,
    observers: tuple = (),
    rng: np.random.Generator | None = None,
) -> SolveResult:
    """Run greedy randomized projections for up to max_iterations.

    sampler may be a RowDistribution, a SamplingStrategy, or a callable
    (k, x, rng) -> row indices (iterate-dependent samplers plug in here).
    Recording happens at k = 0, every trace_stride iterations, and at the
    final iteration; the stop tolerance is evaluated at those same points.
    Observers receive (k, x) at recording points and must not mutate x.
    An explicit rng overrides config.seed.
    """
    m, n = system.shape
    x = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float).copy()
    if x.shape != (n,):
        raise ValueError(f"initial iterate has shape {x.shape}, expected ({n},)")
    if rng is None:
        rng = np.random.default_rng(config.seed)
    select = _resolve_sampler(sampler, system, config.beta)

    if recorder is None:
        recorder = TraceRecorder(x_star=system.ground_truth)
    x_star = system.ground_truth
    tol = config.stop_tolerance
    if tol is not None and x_star is None:
        raise ValueError("stop tolerance needs a ground-truth solution")

    matrix = system.matrix
    rhs = system.rhs
    norms_sq = system.row_norms_sq
    lam = config.lam
    feasibility = system.relation is Relation.LESS_EQUAL
    stride = config.trace_stride
    budget = config.max_iterations

    def observe(k):
        if not np.all(np.isfinite(x)):
            raise NonFiniteIterateError(f"iterate left finite range at k={k}")
        recorder.record(k, x)
        for obs in observers:
            obs(k, x)

    observe(0)
    if tol is not None and float(np.linalg.norm(x - x_star)) <= tol:
        return SolveResult(x=x, iterations=0, trace=recorder.build(), reason="tolerance")

    reason = "budget"
    iterations = 0
    for k in range(1, budget + 1):
        tau = select(k, x, rng)
        if len(tau) == 0:
            reason = "degenerate"
            if (k - 1) % stride != 0 and k - 1 != 0:
                observe(k - 1)
            break
        if len(tau) == 1:
            i = tau[0]
            a = matrix[i]
            residual = a @ x - rhs[i]
        else:
            tau = np.sort(np.asarray(tau, dtype=np.intp))
            res = matrix[tau] @ x - rhs[tau]
            i = tau[int(np.argmax(res))]
            a = matrix[i]
            # scalar recompute keeps this path bitwise-equal to rk_step
            residual = a @ x - rhs[i]
        if not feasibility or residual > 0.0:
            x -= (lam * residual / norms_sq[i]) * a
        iterations = k
        if k % stride == 0 or k == budget:
            observe(k)
            if tol is not None and float(np.linalg.norm(x - x_star)) <= tol:
                reason = "tolerance"
                break

    return SolveResult(x=x, iterations=iterations, trace=recorder.build(), reason=reason)


def rk_bound(system: LinearSystem, k: int, err0_norm_sq: float) -> float:
    """Expected squared-error bound (1 - sigma_min^2/||A||_F^2)^k * ||e_0||^2."""
    if system.svd is None:
        raise MissingSvdError("system carries no singular values")
    sigma_min = float(system.svd[1][-1])
    fro_sq = float(np.sum(system.matrix * system.matrix))
    return (1.0 - sigma_min**2 / fro_sq) ** k * err0_norm_sq
