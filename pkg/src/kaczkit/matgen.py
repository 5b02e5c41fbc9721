"""Synthetic system generation and dense linear-algebra utilities.

Systems are built by reversing an SVD: two orthogonal factors come from
Householder QR of Gaussian matrices and the singular values are prescribed,
which pins the condition number exactly.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, InvalidSpectrumError, RankDeficiencyError


class Relation(enum.Enum):
    """Row relation of a linear system: Ax = b or Ax <= b."""

    EQUALITY = "eq"
    LESS_EQUAL = "le"


@dataclass
class SpectrumSpec:
    """Prescription for the singular values of a generated system.

    kind "exp-decay": sigma_j = e^(n-j+1), so the condition number is e^(n-1).
    kind "ratio":     n values log-uniform from 1 down to 1/kappa.
    kind "explicit":  a full list, positive and non-increasing.
    """

    kind: str
    kappa: float | None = None
    values: np.ndarray | None = None

    @classmethod
    def exponential_decay(cls) -> "SpectrumSpec":
        return cls(kind="exp-decay")

    @classmethod
    def explicit_ratio(cls, kappa: float) -> "SpectrumSpec":
        if not kappa >= 1.0:
            raise InvalidSpectrumError(f"condition number must be >= 1, got {kappa}")
        return cls(kind="ratio", kappa=float(kappa))

    @classmethod
    def explicit(cls, values) -> "SpectrumSpec":
        return cls(kind="explicit", values=np.asarray(values, dtype=float))

    def resolve(self, n: int) -> np.ndarray:
        """Return the length-n singular value list for this spec."""
        if self.kind == "exp-decay":
            sigma = np.exp(np.arange(n, 0, -1, dtype=float))
        elif self.kind == "ratio":
            if self.kappa is None:
                raise InvalidSpectrumError("ratio spectrum needs kappa")
            if n == 1:
                sigma = np.ones(1)
            else:
                sigma = 10.0 ** np.linspace(0.0, -np.log10(self.kappa), n)
        elif self.kind == "explicit":
            if self.values is None:
                raise InvalidSpectrumError("explicit spectrum needs values")
            sigma = np.asarray(self.values, dtype=float)
            if sigma.shape != (n,):
                raise InvalidSpectrumError(
                    f"explicit spectrum has {sigma.size} values, system needs {n}"
                )
        else:
            raise InvalidSpectrumError(f"unknown spectrum kind {self.kind!r}")
        if sigma.size == 0 or np.any(sigma <= 0.0):
            raise InvalidSpectrumError("singular values must be strictly positive")
        if np.any(np.diff(sigma) > 0.0):
            raise InvalidSpectrumError("singular values must be non-increasing")
        return sigma


@dataclass
class LinearSystem:
    """Dense m x n system with an equality or <= relation.

    ground_truth and svd are optional; generated systems carry both after
    make_system so metrics can use the exact factors.
    """

    matrix: np.ndarray
    rhs: np.ndarray
    relation: Relation = Relation.EQUALITY
    ground_truth: np.ndarray | None = None
    svd: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None
    _row_norms_sq: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.matrix = np.ascontiguousarray(self.matrix, dtype=float)
        self.rhs = np.asarray(self.rhs, dtype=float)
        m, n = self.matrix.shape
        if self.rhs.shape != (m,):
            raise ValueError(f"rhs has shape {self.rhs.shape}, expected ({m},)")
        if self.ground_truth is not None:
            self.ground_truth = np.asarray(self.ground_truth, dtype=float)
            if self.ground_truth.shape != (n,):
                raise ValueError("ground_truth has wrong length")

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def row_norms_sq(self) -> np.ndarray:
        if self._row_norms_sq is None:
            self._row_norms_sq = np.einsum("ij,ij->i", self.matrix, self.matrix)
        return self._row_norms_sq


@dataclass
class GeneratedSystem:
    """A generated system together with its exact SVD factors."""

    system: LinearSystem
    u_factor: np.ndarray       # m x m orthogonal
    v_factor: np.ndarray       # n x n orthogonal
    singular_values: np.ndarray


def generate_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Q factor of the Householder QR of a dim x dim standard-normal draw."""
    if dim < 1:
        raise ValueError(f"dimension must be >= 1, got {dim}")
    gauss = rng.standard_normal((dim, dim))
    q, _ = np.linalg.qr(gauss)
    return q


def generate_ill_conditioned(
    m: int, n: int, spectrum: SpectrumSpec, rng: np.random.Generator
) -> GeneratedSystem:
    """Build A = U S V^T with prescribed singular values.

    U is full m x m (its first n columns enter the product) and V is n x n,
    both from generate_orthogonal. The returned system has a zero rhs and no
    ground truth; apply make_system to complete it.
    """
    if not m >= n >= 1:
        raise ValueError(f"need m >= n >= 1, got m={m}, n={n}")
    sigma = spectrum.resolve(n)
    u = generate_orthogonal(m, rng)
    v = generate_orthogonal(n, rng)
    a = (u[:, :n] * sigma) @ v.T
    system = LinearSystem(matrix=a, rhs=np.zeros(m), relation=Relation.EQUALITY)
    return GeneratedSystem(system=system, u_factor=u, v_factor=v, singular_values=sigma)


def make_system(
    gen: GeneratedSystem, x_star: np.ndarray, relation: Relation = Relation.EQUALITY
) -> LinearSystem:
    """Complete a generated system: rhs = A x*, ground truth and SVD attached."""
    x_star = np.asarray(x_star, dtype=float)
    a = gen.system.matrix
    if x_star.shape != (a.shape[1],):
        raise ValueError(
            f"solution vector has shape {x_star.shape}, expected ({a.shape[1]},)"
        )
    if not np.all(np.isfinite(x_star)):
        raise ValueError("solution vector must be finite")
    return LinearSystem(
        matrix=a,
        rhs=a @ x_star,
        relation=relation,
        ground_truth=x_star,
        svd=(gen.u_factor, gen.singular_values, gen.v_factor),
    )


#: relative threshold on QR diagonal entries below which a matrix is
#: treated as rank deficient
RANK_TOLERANCE = 1e-13


def least_squares(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Minimize ||Ax - b||_2 by Householder QR.

    Raises RankDeficiencyError naming the first pivot whose R diagonal falls
    below RANK_TOLERANCE * ||A||_F.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = a.shape
    if m < n:
        raise ValueError(f"least squares needs m >= n, got {m} x {n}")
    q, r = np.linalg.qr(a)
    threshold = RANK_TOLERANCE * np.linalg.norm(a)
    diag = np.abs(np.diag(r))
    small = np.flatnonzero(diag <= threshold)
    if small.size:
        j = int(small[0])
        raise RankDeficiencyError(pivot=j, value=float(diag[j]), threshold=threshold)
    return np.linalg.solve(r, q.T @ b)


def smallest_right_singular_vector(
    a: np.ndarray, tol: float = 1e-10, max_iter: int = 200
) -> tuple[np.ndarray, float]:
    """Estimate the right singular vector of the smallest singular value.

    Inverse power iteration on A^T A with a small Tikhonov shift; the sign is
    fixed so the first nonzero component is positive. Returns (v, sigma_min).
    """
    a = np.asarray(a, dtype=float)
    m, n = a.shape
    if m < n:
        raise ValueError(f"need m >= n, got {m} x {n}")
    gram = a.T @ a

    # crude largest-eigenvalue estimate for the stopping scale
    w = np.ones(n) / np.sqrt(n)
    for _ in range(50):
        w = gram @ w
        nw = np.linalg.norm(w)
        if nw == 0.0:
            break
        w /= nw
    sigma1_sq = max(float(w @ gram @ w), np.finfo(float).tiny)

    shifted = gram + (1e-14 * sigma1_sq) * np.eye(n)
    v = np.ones(n) / np.sqrt(n)
    residual = np.inf
    for _ in range(max_iter):
        prev = v
        v = np.linalg.solve(shifted, v)
        v /= np.linalg.norm(v)
        moved = min(np.linalg.norm(v - prev), np.linalg.norm(v + prev))
        lam = float(v @ gram @ v)
        residual = float(np.linalg.norm(gram @ v - lam * v))
        # iterate to a fixpoint, not just the loose residual scale: the gap
        # between the bottom eigenvalues is tiny relative to sigma1^2
        if moved <= 1e-13 and residual <= tol * sigma1_sq:
            nonzero = np.flatnonzero(np.abs(v) > 1e-14)
            if nonzero.size and v[nonzero[0]] < 0.0:
                v = -v
            return v, float(np.sqrt(max(lam, 0.0)))
    raise ConvergenceError(
        f"inverse iteration did not reach tol {tol:g} in {max_iter} iterations",
        residual=residual,
    )


def save_matrix_csv(a: np.ndarray, path) -> None:
    """Write a matrix as CSV, one row per line, 17 significant digits."""
    np.savetxt(path, np.atleast_2d(a), fmt="%.17g", delimiter=",")
