"""Signed scaling of a classification system into a linear feasibility
problem, plus the pairwise-difference row augmentation.

Given labels b in {-1,+1}^m, each row is scaled by -b_i so that a correct
sign on row i is exactly (A'x)_i < 0; the feasibility problem is A'x <= 0.
Pair rows A'_i - A'_j (i < j, lexicographic) extend the system with
inter-row comparisons.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidLabelError, PairIndexError, TooFewRowsError
from .matgen import LinearSystem, Relation


@dataclass(frozen=True)
class PairIndexMap:
    """Bijection between flat pair ranks and ordered pairs i < j.

    Pairs are enumerated lexicographically with zero-based indices:
    (0,1), (0,2), ..., (0,m-1), (1,2), ...
    """

    m: int

    @property
    def count(self) -> int:
        return self.m * (self.m - 1) // 2

    def pair_rank(self, i: int, j: int) -> int:
        if not (0 <= i < j < self.m):
            raise PairIndexError(f"need 0 <= i < j < {self.m}, got ({i}, {j})")
        return i * (self.m - 1) - i * (i - 1) // 2 + (j - i - 1)

    def pair_index(self, h: int) -> tuple[int, int]:
        if not (0 <= h < self.count):
            raise PairIndexError(f"pair rank {h} out of range [0, {self.count})")
        # offset(i) = number of pairs with first index < i; invert by quadratic
        i = int((2 * self.m - 1 - np.sqrt((2 * self.m - 1) ** 2 - 8 * h)) // 2)
        while self._offset(i + 1) <= h:
            i += 1
        while self._offset(i) > h:
            i -= 1
        j = h - self._offset(i) + i + 1
        return i, j

    def _offset(self, i: int) -> int:
        return i * (self.m - 1) - i * (i - 1) // 2


@dataclass
class FeasibilitySystem:
    """Sign-scaled system A' (rhs 0, relation <=) with optional pair rows."""

    base: LinearSystem
    labels: np.ndarray
    pair_rows: np.ndarray | None = None
    pair_map: PairIndexMap | None = None
    _combined: LinearSystem | None = field(default=None, repr=False, compare=False)

    @property
    def m(self) -> int:
        return self.base.shape[0]

    @property
    def combined(self) -> LinearSystem:
        """Base rows followed by pair rows as one <= system (cached)."""
        if self._combined is None:
            self._combined = combined_system(self.base, self.pair_rows)
            self._combined.ground_truth = self.base.ground_truth
        return self._combined

    def row(self, h: int) -> np.ndarray:
        """Row h of the combined indexing: base rows first, then pair rows."""
        if h < self.m:
            return self.base.matrix[h]
        if self.pair_rows is None:
            raise PairIndexError(f"row {h} out of range: no pair rows present")
        return self.pair_rows[h - self.m]


def binarize_rhs(a: np.ndarray, x_star: np.ndarray) -> np.ndarray:
    """Labels b_i = -1 where (A x*)_i < 0 and +1 otherwise (zero maps to +1)."""
    a = np.asarray(a, dtype=float)
    x_star = np.asarray(x_star, dtype=float)
    if x_star.shape != (a.shape[1],):
        raise ValueError("dimension mismatch between matrix and solution")
    return np.where(a @ x_star < 0.0, -1.0, 1.0)


def hadamard_transform(a: np.ndarray, labels: np.ndarray) -> FeasibilitySystem:
    """Scale each row by -b_i and pose A'x <= 0."""
    a = np.asarray(a, dtype=float)
    labels = np.asarray(labels, dtype=float)
    if labels.shape != (a.shape[0],):
        raise InvalidLabelError("labels must have one entry per row")
    if not np.all(np.isin(labels, (-1.0, 1.0))):
        raise InvalidLabelError("labels must be exactly +1 or -1")
    scaled = -labels[:, None] * a
    base = LinearSystem(
        matrix=scaled, rhs=np.zeros(a.shape[0]), relation=Relation.LESS_EQUAL
    )
    return FeasibilitySystem(base=base, labels=labels)


def pairwise_differences(base: np.ndarray) -> tuple[np.ndarray, PairIndexMap]:
    """All C(m,2) difference rows base_i - base_j in lexicographic pair order."""
    base = np.asarray(base, dtype=float)
    m = base.shape[0]
    if m < 2:
        raise TooFewRowsError(f"pairwise differences need m >= 2, got {m}")
    ii, jj = np.triu_indices(m, k=1)
    return base[ii] - base[jj], PairIndexMap(m)


def combined_system(base: LinearSystem, pair_rows: np.ndarray | None) -> LinearSystem:
    """Stack base rows over pair rows as one homogeneous <= system."""
    if pair_rows is None:
        matrix = base.matrix.copy()
    else:
        pair_rows = np.asarray(pair_rows, dtype=float)
        if pair_rows.shape[1] != base.matrix.shape[1]:
            raise ValueError("pair rows and base rows have different widths")
        matrix = np.vstack([base.matrix, pair_rows])
    return LinearSystem(
        matrix=matrix, rhs=np.zeros(matrix.shape[0]), relation=Relation.LESS_EQUAL
    )


def augment_with_pairs(fs: FeasibilitySystem) -> FeasibilitySystem:
    """Attach the pairwise-difference rows to a sign-scaled system."""
    p, pmap = pairwise_differences(fs.base.matrix)
    return FeasibilitySystem(
        base=fs.base, labels=fs.labels, pair_rows=p, pair_map=pmap
    )


def count_violated_pairs(fs: FeasibilitySystem, x: np.ndarray) -> int:
    """Number of pair rows with positive residual at x.

    The true solution need not satisfy the pair rows, so this diagnostic
    reports how much of the augmentation excludes a given point.
    """
    if fs.pair_rows is None:
        return 0
    return int(np.count_nonzero(fs.pair_rows @ np.asarray(x, dtype=float) > 0.0))
