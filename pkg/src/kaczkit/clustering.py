"""Row reduction machinery: inner-product coresets, greedy cover-net
partitioning of row directions, cluster-guided row selection, and the
halving schedule for online active-set reduction."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SampleSizeError, ZeroRowError
from .matgen import LinearSystem


def score_rows(a: np.ndarray, x_ref: np.ndarray) -> np.ndarray:
    """Alignment scores s_i = |<a_i, x_ref>|."""
    a = np.asarray(a, dtype=float)
    x_ref = np.asarray(x_ref, dtype=float)
    if x_ref.shape != (a.shape[1],):
        raise ValueError("reference vector length does not match row width")
    return np.abs(a @ x_ref)


def extract_coreset(
    system: LinearSystem, c: float, x_ref: np.ndarray
) -> tuple[LinearSystem, np.ndarray]:
    """Keep the round(c*n) rows least aligned with x_ref.

    Returns the reduced system (same relation, matching rhs entries) and the
    kept row indices. Ties break toward lower indices; c*n >= m keeps
    everything.
    """
    if c <= 0.0:
        raise ValueError(f"coreset factor must be positive, got {c}")
    m, n = system.shape
    k = min(int(round(c * n)), m)
    k = max(k, 1)
    scores = score_rows(system.matrix, x_ref)
    keep = np.sort(np.argsort(scores, kind="stable")[:k])
    reduced = LinearSystem(
        matrix=system.matrix[keep].copy(),
        rhs=system.rhs[keep].copy(),
        relation=system.relation,
        ground_truth=system.ground_truth,
    )
    return reduced, keep


@dataclass
class ClusterPartition:
    """Disjoint row-index groups with their raw-mean centroids."""

    clusters: list[np.ndarray]
    centroids: np.ndarray  # (len(clusters), n)
    epsilon: float

    def __len__(self) -> int:
        return len(self.clusters)


def epsilon_cover(
    a: np.ndarray, epsilon: float, criterion: str = "normalized-distance"
) -> ClusterPartition:
    """Greedy sequential partition of rows into direction clusters.

    Each row joins the nearest existing cluster when it qualifies under the
    criterion, else it starts a new one. Centroids are running means of the
    raw member rows.

    criterion "normalized-distance" (default): the row joins when the
    Euclidean distance between its direction and the nearest centroid
    direction is below epsilon. criterion "inner-product": the row joins the
    cluster with the minimal raw inner product when that minimum is below
    epsilon (kept for fidelity comparisons; not a metric).
    """
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if criterion not in ("normalized-distance", "inner-product"):
        raise ValueError(f"unknown cover criterion {criterion!r}")
    a = np.asarray(a, dtype=float)
    m, n = a.shape
    norms = np.linalg.norm(a, axis=1)
    if np.any(norms == 0.0):
        raise ZeroRowError("cannot cluster zero-norm rows")
    directions = a / norms[:, None]

    centroids = np.empty((m, n))      # raw running means, first `count` used
    centroid_dirs = np.empty((m, n))
    members: list[list[int]] = []
    count = 0
    for i in range(m):
        joined = False
        if count:
            if criterion == "normalized-distance":
                dist = np.linalg.norm(centroid_dirs[:count] - directions[i], axis=1)
                best = int(np.argmin(dist))
                joined = dist[best] < epsilon
            else:
                inner = centroids[:count] @ a[i]
                best = int(np.argmin(inner))
                joined = inner[best] < epsilon
        if joined:
            members[best].append(i)
            centroids[best] += (a[i] - centroids[best]) / len(members[best])
            norm = np.linalg.norm(centroids[best])
            centroid_dirs[best] = centroids[best] / norm if norm > 0.0 else 0.0
        else:
            centroids[count] = a[i]
            centroid_dirs[count] = directions[i]
            members.append([i])
            count += 1
    return ClusterPartition(
        clusters=[np.asarray(g, dtype=np.intp) for g in members],
        centroids=centroids[:count].copy(),
        epsilon=epsilon,
    )


def choose_epsilon(
    a: np.ndarray,
    low: int,
    high: int,
    criterion: str = "normalized-distance",
    grid: np.ndarray | None = None,
) -> float:
    """One-shot sweep for a radius whose cluster count lands in [low, high].

    Scans an ascending radius grid and returns the first value whose greedy
    cover has between low and high clusters; if none qualifies, returns the
    radius whose count is closest to the target band. Passes abort early
    once the count exceeds the band, so tiny radii stay cheap.
    """
    if grid is None:
        grid = np.linspace(0.05, 1.95, 39)
    best_eps = float(grid[-1])
    best_gap = np.inf
    for eps in grid:
        count = _cover_count(a, float(eps), criterion, abort_above=high)
        if count is None:  # aborted: too many clusters
            gap = np.inf
        elif low <= count <= high:
            return float(eps)
        else:
            gap = low - count if count < low else count - high
        if gap < best_gap:
            best_gap = gap
            best_eps = float(eps)
    return best_eps


def _cover_count(a, epsilon, criterion, abort_above):
    """Cluster count of the greedy cover, or None once it exceeds the cap."""
    a = np.asarray(a, dtype=float)
    norms = np.linalg.norm(a, axis=1)
    if np.any(norms == 0.0):
        raise ZeroRowError("cannot cluster zero-norm rows")
    directions = a / norms[:, None]
    m, n = a.shape
    centroids = np.empty((m, n))
    centroid_dirs = np.empty((m, n))
    sizes = np.zeros(m)
    count = 0
    for i in range(m):
        joined = False
        if count:
            if criterion == "normalized-distance":
                dist = np.linalg.norm(centroid_dirs[:count] - directions[i], axis=1)
                best = int(np.argmin(dist))
                joined = dist[best] < epsilon
            else:
                inner = centroids[:count] @ a[i]
                best = int(np.argmin(inner))
                joined = inner[best] < epsilon
        if joined:
            sizes[best] += 1.0
            centroids[best] += (a[i] - centroids[best]) / sizes[best]
            norm = np.linalg.norm(centroids[best])
            centroid_dirs[best] = centroids[best] / norm if norm > 0.0 else 0.0
        else:
            centroids[count] = a[i]
            centroid_dirs[count] = directions[i]
            sizes[count] = 1.0
            count += 1
            if count > abort_above:
                return None
    return count


def reassign_pass(
    a: np.ndarray, partition: ClusterPartition, criterion: str = "normalized-distance"
) -> ClusterPartition:
    """Full re-pass: rows rejoin the nearest qualifying current centroid.

    Runs the same greedy membership rule seeded with the existing centroids;
    rows that no longer fit any cluster start new ones, and clusters left
    empty are dropped.
    """
    a = np.asarray(a, dtype=float)
    m, n = a.shape
    eps = partition.epsilon
    seeds = partition.centroids
    capacity = m + len(seeds)
    centroids = np.empty((capacity, n))
    centroid_dirs = np.empty((capacity, n))
    count = len(seeds)
    centroids[:count] = seeds
    seed_norms = np.linalg.norm(seeds, axis=1)
    centroid_dirs[:count] = np.where(
        seed_norms[:, None] > 0.0, seeds / np.maximum(seed_norms, 1e-300)[:, None], 0.0
    )
    members: list[list[int]] = [[] for _ in range(count)]
    sizes = np.zeros(capacity)
    norms = np.linalg.norm(a, axis=1)
    if np.any(norms == 0.0):
        raise ZeroRowError("cannot cluster zero-norm rows")
    directions = a / norms[:, None]
    for i in range(m):
        if criterion == "normalized-distance":
            dist = np.linalg.norm(centroid_dirs[:count] - directions[i], axis=1)
            best = int(np.argmin(dist))
            joined = dist[best] < eps
        else:
            inner = centroids[:count] @ a[i]
            best = int(np.argmin(inner))
            joined = inner[best] < eps
        if joined:
            members[best].append(i)
            sizes[best] += 1.0
        else:
            centroids[count] = a[i]
            centroid_dirs[count] = directions[i]
            members.append([i])
            sizes[count] = 1.0
            count += 1
    keep = [c for c in range(count) if members[c]]
    new_centroids = np.array([a[members[c]].mean(axis=0) for c in keep])
    return ClusterPartition(
        clusters=[np.asarray(members[c], dtype=np.intp) for c in keep],
        centroids=new_centroids,
        epsilon=eps,
    )


def best_cluster(partition: ClusterPartition, x: np.ndarray) -> int:
    """Index of the cluster whose centroid is most orthogonal to x."""
    if len(partition) == 0:
        raise ValueError("partition has no clusters")
    return int(np.argmin(np.abs(partition.centroids @ np.asarray(x, dtype=float))))


def cluster_guided_sampler(
    partition: ClusterPartition, x: np.ndarray, rng: np.random.Generator
) -> int:
    """One uniformly random member of the most orthogonal cluster."""
    group = partition.clusters[best_cluster(partition, x)]
    return int(group[int(rng.random() * len(group))])


class ClusterGuidedSource:
    """Iterate-dependent sampler built on a fixed partition.

    mode "best" (default) yields one random row from the most orthogonal
    cluster per iteration; mode "round-robin" yields one random row from
    every cluster, letting the greedy step pick among them. An optional
    reassign_every triggers a full membership re-pass on that period.
    """

    def __init__(self, a, partition, mode="best", reassign_every=0,
                 criterion="normalized-distance"):
        if mode not in ("best", "round-robin"):
            raise ValueError(f"unknown cluster sampling mode {mode!r}")
        self.a = np.asarray(a, dtype=float)
        self.partition = partition
        self.mode = mode
        self.reassign_every = int(reassign_every)
        self.criterion = criterion

    def __call__(self, k, x, rng):
        if self.reassign_every and k > 1 and (k - 1) % self.reassign_every == 0:
            self.partition = reassign_pass(self.a, self.partition, self.criterion)
        if self.mode == "best":
            return np.array([cluster_guided_sampler(self.partition, x, rng)],
                            dtype=np.intp)
        picks = [int(g[int(rng.random() * len(g))]) for g in self.partition.clusters]
        return np.asarray(picks, dtype=np.intp)


@dataclass
class ReductionSchedule:
    """Halving plan for the online active set.

    events lists (iteration, new active-set size): iteration 100 * 2^j,
    sizes ceil(m / 2^(j+1)) clamped at the 4n floor, stopping at the first
    event that reaches the floor. working_size is the 2n projection pool.
    """

    events: list[tuple[int, int]]
    working_size: int
    floor: int


def build_schedule(m: int, n: int) -> ReductionSchedule:
    if m < 1 or n < 1:
        raise ValueError("need m >= 1 and n >= 1")
    floor = 4 * n
    events: list[tuple[int, int]] = []
    size = m
    iteration = 100
    while size > floor:
        size = max(-(-size // 2), floor)  # ceiling halves, clamped
        events.append((iteration, size))
        if size == floor:
            break
        iteration *= 2
    return ReductionSchedule(events=events, working_size=2 * n, floor=floor)


def select_best_rows(
    system: LinearSystem,
    active: np.ndarray,
    x: np.ndarray,
    count: int,
    criterion: str = "absolute",
) -> np.ndarray:
    """The `count` active rows most orthogonal to the iterate.

    criterion "absolute" ranks by |<a_i, x> - b_i| (default); "signed" keeps
    the raw residual ordering as printed in the update rule. Ties break
    toward lower row indices; the result is sorted ascending.
    """
    active = np.asarray(active, dtype=np.intp)
    if count > active.size:
        raise SampleSizeError(f"cannot select {count} rows from {active.size}")
    if criterion not in ("absolute", "signed"):
        raise ValueError(f"unknown selection criterion {criterion!r}")
    active = np.sort(active)
    residuals = system.matrix[active] @ np.asarray(x, dtype=float) - system.rhs[active]
    key = np.abs(residuals) if criterion == "absolute" else residuals
    order = np.argsort(key, kind="stable")
    return np.sort(active[order[:count]])


class OnlineReductionSource:
    """Sampler that halves its active set on schedule.

    Projects uniformly from a working pool of the 2n best rows; every
    scheduled event shrinks the active set to its best half (same
    orthogonality criterion) and reselects the pool against the current
    iterate.
    """

    def __init__(self, system, schedule=None, criterion="absolute"):
        self.system = system
        m, n = system.shape
        self.schedule = schedule or build_schedule(m, n)
        self.criterion = criterion
        self.active = np.arange(m, dtype=np.intp)
        self.working: np.ndarray | None = None
        self._events = dict(self.schedule.events)

    def __call__(self, k, x, rng):
        size = self._events.get(k)
        if size is not None:
            self.active = select_best_rows(
                self.system, self.active, x, min(size, self.active.size),
                self.criterion,
            )
            self.working = None
        if self.working is None:
            pool = min(self.schedule.working_size, self.active.size)
            self.working = select_best_rows(
                self.system, self.active, x, pool, self.criterion
            )
        w = self.working
        return np.array([w[int(rng.random() * len(w))]], dtype=np.intp)
