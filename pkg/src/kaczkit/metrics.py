"""Measurement: approximation error, classification accuracy, Chebyshev
center and error, per-singular-direction errors, and iteration traces."""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import ZeroRowError
from .simplex import solve_lp


def approximation_error(x: np.ndarray, x_star: np.ndarray) -> float:
    """Euclidean distance between an iterate and the intended solution."""
    x = np.asarray(x, dtype=float)
    x_star = np.asarray(x_star, dtype=float)
    if x.shape != x_star.shape:
        raise ValueError("dimension mismatch")
    return float(np.linalg.norm(x - x_star))


def classification_accuracy(a: np.ndarray, labels: np.ndarray, x: np.ndarray) -> float:
    """Fraction of rows whose sign matches its label; sign(0) counts as +1."""
    signs = np.where(np.asarray(a, dtype=float) @ x >= 0.0, 1.0, -1.0)
    return float(np.mean(signs == np.asarray(labels, dtype=float)))


def singular_errors(x: np.ndarray, x_star: np.ndarray, v: np.ndarray) -> np.ndarray:
    """|<x - x*, v_j>| for every column v_j of the right factor."""
    diff = np.asarray(x, dtype=float) - np.asarray(x_star, dtype=float)
    return np.abs(np.asarray(v, dtype=float).T @ diff)


@dataclass
class ChebyshevResult:
    """Center and radius of the largest ball inscribed in a bounded region."""

    center: np.ndarray
    radius: float
    box_bound: float


def chebyshev_center(
    rows: np.ndarray, box_bound: float, rhs: np.ndarray | None = None
) -> ChebyshevResult:
    """Chebyshev center of {x : rows @ x <= rhs} intersected with a box.

    The inscribed ball respects the region rows; the box |x_j| <= box_bound
    only bounds the center (it makes the homogeneous cone case well posed).
    Solved as an LP in (x, r): maximize r subject to
    <a_i, x> + r ||a_i|| <= rhs_i and -R <= x_j <= R, r >= 0.
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    m, n = rows.shape
    if rhs is None:
        rhs = np.zeros(m)
    rhs = np.asarray(rhs, dtype=float)
    if box_bound <= 0.0:
        raise ValueError("box bound must be positive")
    norms = np.linalg.norm(rows, axis=1)
    if np.any(norms == 0.0):
        raise ZeroRowError("region rows must be nonzero")

    # variables z = (y, r) >= 0 with y = x + R so the box becomes y <= 2R
    r_bound = box_bound
    a_ub = np.zeros((m + n, n + 1))
    b_ub = np.zeros(m + n)
    a_ub[:m, :n] = rows
    a_ub[:m, n] = norms
    b_ub[:m] = rhs + r_bound * rows.sum(axis=1)
    a_ub[m:, :n] = np.eye(n)
    b_ub[m:] = 2.0 * r_bound
    cost = np.zeros(n + 1)
    cost[n] = -1.0

    z, _ = solve_lp(cost, a_ub, b_ub)
    center = z[:n] - r_bound
    return ChebyshevResult(center=center, radius=float(z[n]), box_bound=box_bound)


def chebyshev_error(x: np.ndarray, result: ChebyshevResult) -> float:
    """Distance from an iterate to a previously computed Chebyshev center."""
    return float(np.linalg.norm(np.asarray(x, dtype=float) - result.center))


@dataclass
class IterationTrace:
    """Per-iteration metric series; absent metrics stay None.

    All present series have one value per recorded iteration;
    singular_errors is a (records, n) array.
    """

    iterations: np.ndarray
    approximation_error: np.ndarray | None = None
    chebyshev_error: np.ndarray | None = None
    accuracy: np.ndarray | None = None
    singular_errors: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.iterations)

    def series(self) -> dict[str, np.ndarray]:
        """Present metric series keyed by their artifact names."""
        out = {}
        if self.approximation_error is not None:
            out["approx_error"] = self.approximation_error
        if self.chebyshev_error is not None:
            out["cheb_error"] = self.chebyshev_error
        if self.accuracy is not None:
            out["accuracy"] = self.accuracy
        if self.singular_errors is not None:
            out["singular_errors"] = self.singular_errors
        return out

    def to_csv(self) -> str:
        """CSV text: iteration column plus every present metric column."""
        cols: list[tuple[str, np.ndarray]] = []
        if self.approximation_error is not None:
            cols.append(("approx_error", self.approximation_error))
        if self.chebyshev_error is not None:
            cols.append(("cheb_error", self.chebyshev_error))
        if self.accuracy is not None:
            cols.append(("accuracy", self.accuracy))
        sing = self.singular_errors
        buf = io.StringIO()
        header = ["iteration"] + [name for name, _ in cols]
        if sing is not None:
            header += [f"sing_err_{j + 1}" for j in range(sing.shape[1])]
        buf.write(",".join(header) + "\n")
        for r, k in enumerate(self.iterations):
            fields = [str(int(k))] + [f"{series[r]:.17g}" for _, series in cols]
            if sing is not None:
                fields += [f"{v:.17g}" for v in sing[r]]
            buf.write(",".join(fields) + "\n")
        return buf.getvalue()


class TraceRecorder:
    """Observer that assembles an IterationTrace from solver callbacks.

    Configure with whatever reference data is available: the true solution
    for approximation error, a Chebyshev result for region error, the raw
    classification matrix plus labels for accuracy, and the right singular
    factor for per-direction errors.
    """

    def __init__(
        self,
        x_star: np.ndarray | None = None,
        chebyshev: ChebyshevResult | None = None,
        classification: tuple[np.ndarray, np.ndarray] | None = None,
        v_factor: np.ndarray | None = None,
    ):
        self.x_star = None if x_star is None else np.asarray(x_star, dtype=float)
        self.chebyshev = chebyshev
        self.classification = classification
        self.v_factor = None if v_factor is None else np.asarray(v_factor, dtype=float)
        self._iterations: list[int] = []
        self._approx: list[float] = []
        self._cheb: list[float] = []
        self._acc: list[float] = []
        self._sing: list[np.ndarray] = []

    def record(self, k: int, x: np.ndarray) -> None:
        self._iterations.append(k)
        if self.x_star is not None:
            self._approx.append(approximation_error(x, self.x_star))
        if self.chebyshev is not None:
            self._cheb.append(chebyshev_error(x, self.chebyshev))
        if self.classification is not None:
            a, labels = self.classification
            self._acc.append(classification_accuracy(a, labels, x))
        if self.v_factor is not None and self.x_star is not None:
            self._sing.append(singular_errors(x, self.x_star, self.v_factor))

    def build(self) -> IterationTrace:
        return IterationTrace(
            iterations=np.asarray(self._iterations, dtype=np.intp),
            approximation_error=np.asarray(self._approx) if self._approx else None,
            chebyshev_error=np.asarray(self._cheb) if self._cheb else None,
            accuracy=np.asarray(self._acc) if self._acc else None,
            singular_errors=np.vstack(self._sing) if self._sing else None,
        )


def mean_traces(traces: list[IterationTrace]) -> IterationTrace:
    """Pointwise mean of several traces at matched iterations.

    Traces may have different lengths when runs stop early on tolerance;
    the mean is taken over the common prefix so every averaged point covers
    every run.
    """
    if not traces:
        raise ValueError("need at least one trace")
    length = min(len(t) for t in traces)
    base = traces[0].iterations[:length]
    for t in traces[1:]:
        if not np.array_equal(t.iterations[:length], base):
            raise ValueError("traces record different iteration grids")

    def mean_of(name):
        series = [getattr(t, name) for t in traces]
        if any(s is None for s in series):
            return None
        return np.mean([s[:length] for s in series], axis=0)

    return IterationTrace(
        iterations=base.copy(),
        approximation_error=mean_of("approximation_error"),
        chebyshev_error=mean_of("chebyshev_error"),
        accuracy=mean_of("accuracy"),
        singular_errors=mean_of("singular_errors"),
    )
