"""Fitting the feature partition by k-means on the transposed data matrix.

The p features are treated as points: feature i is the column vector
T_i of its n sample values.  An initial partition comes from standard
Euclidean k-means (k-means++ seeding) over those points.  The partition
is then refined by an adapted Lloyd alternation in which the center of
group j lives only on the rows of class j:

    update:  m_j[s] = mean over features i in I_j of X[s, i],  s in S_j
    assign:  feature i joins the group j minimizing the dn-distance
             between T_i restricted to S_j and m_j

With feature selection a special group I_0 takes part, whose center m_0
is defined on all rows; its assignment distance is scaled by the
multiplier ``lam``.  Small ``lam`` pulls features into I_0 (they are then
excluded from prediction); ``lam = inf`` disables the special group
entirely, which recovers the no-selection algorithm.

The alternation monotonically decreases its own clustering objective
(`clustering_objective`); the classification risk the partition is
ultimately judged by is only targeted heuristically, which is why
`fit_best` reruns the whole procedure from many seeds and keeps the
partition with the lowest training error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng as rngmod
from .classifier import NdcModel, compute_centroids, training_error, with_lambda
from .data import FeaturePartition, LabeledDataset, class_index_sets


class EmptyGroupError(ValueError):
    """A class group lost all its features; the run must restart."""


class RestartsExhaustedError(RuntimeError):
    """Every attempted run ended with an empty class group."""

    def __init__(self, attempts: int):
        super().__init__(f"gave up after {attempts} attempts that all produced an empty group")
        self.attempts = attempts


class FitFailedError(RuntimeError):
    """All restarts of fit_best failed."""


@dataclass(frozen=True)
class FitConfig:
    """Knobs for the partition fit.

    ``lam`` is the special-group distance multiplier; ``math.inf`` (the
    default) disables feature selection.  ``max_restart_attempts_on_empty``
    bounds how many fresh initializations one run may burn through when a
    class group empties out.
    """

    restarts: int = 100
    max_iters: int = 100
    lam: float = math.inf
    seed: int = 0
    max_restart_attempts_on_empty: int = 50

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not (self.lam > 0):
            raise ValueError("lam must be positive (use math.inf for no selection)")
        if self.max_restart_attempts_on_empty < 1:
            raise ValueError("max_restart_attempts_on_empty must be >= 1")

    @property
    def with_selection(self) -> bool:
        return not math.isinf(self.lam)


@dataclass(frozen=True)
class ClusterCenters:
    """Alternation centers, aligned with the partition's groups.

    ``centers[0]`` is m_0 on all n rows when the special group is active
    (None while I_0 is empty); the remaining centers live on their class's
    rows.
    """

    centers: tuple[np.ndarray | None, ...]
    has_special: bool = False


def kmeans_rows(points: np.ndarray, n_clusters: int, rng: np.random.Generator,
                max_iters: int = 100) -> np.ndarray:
    """Standard Euclidean k-means (k-means++ seeding, Lloyd iterations).

    Returns the cluster label of each row; clusters may come out empty.
    """
    n = points.shape[0]
    if n_clusters > n:
        raise ValueError("more clusters than points")
    centers = np.empty((n_clusters, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    d2 = np.square(points - centers[0]).sum(axis=1)
    for j in range(1, n_clusters):
        total = d2.sum()
        if total > 0:
            idx = rng.choice(n, p=d2 / total)
        else:
            idx = rng.integers(n)
        centers[j] = points[idx]
        d2 = np.minimum(d2, np.square(points - centers[j]).sum(axis=1))
    labels = None
    for _ in range(max_iters):
        dist = np.square(points[:, None, :] - centers[None, :, :]).sum(axis=2)
        new_labels = dist.argmin(axis=1)
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j in range(n_clusters):
            members = points[labels == j]
            if len(members):
                centers[j] = members.mean(axis=0)
    return labels


def init_partition(ds: LabeledDataset, n_groups: int, rng: np.random.Generator,
                   max_attempts: int = 50) -> FeaturePartition:
    """Initial partition from k-means over the transposed data matrix.

    ``n_groups`` is k for the no-selection algorithm and k + 1 with
    feature selection, in which case the most populated cluster is
    designated the special group (ties to the smallest cluster index).
    Seeding is retried when k-means leaves a cluster empty.
    """
    if n_groups not in (ds.k, ds.k + 1):
        raise ValueError("n_groups must be k or k + 1")
    if n_groups > ds.p:
        raise ValueError("cannot form more groups than features")
    has_special = n_groups == ds.k + 1
    points = np.ascontiguousarray(ds.x.T)
    for _ in range(max_attempts):
        labels = kmeans_rows(points, n_groups, rng)
        sizes = np.bincount(labels, minlength=n_groups)
        if sizes.min() > 0:
            break
    else:
        raise RestartsExhaustedError(max_attempts)
    order = np.arange(n_groups)
    if has_special:
        special = int(sizes.argmax())
        order = np.concatenate(([special], np.delete(order, special)))
    groups = tuple(np.flatnonzero(labels == j) for j in order)
    return FeaturePartition(groups, has_special=has_special)


def update_centers(ds: LabeledDataset, part: FeaturePartition) -> ClusterCenters:
    """Recompute the alternation centers for the current partition."""
    class_rows = class_index_sets(ds)
    centers: list[np.ndarray | None] = []
    if part.has_special:
        special = part.special
        centers.append(ds.x[:, special].mean(axis=1) if len(special) else None)
    for g, s in zip(part.class_groups, class_rows):
        if len(g) == 0:
            raise EmptyGroupError("empty class group; the run must restart")
        centers.append(ds.x[np.ix_(s, g)].mean(axis=1))
    return ClusterCenters(tuple(centers), has_special=part.has_special)


def assign_rows(ds: LabeledDataset, centers: ClusterCenters, lam: float) -> FeaturePartition:
    """Reassign every feature to its nearest center.

    Distances are dn-distances on each group's own rows; the special
    center's distance is scaled by ``lam`` (``inf`` bars assignment to the
    special group outright).  Ties go to the smallest group index, the
    special group being index 0.
    """
    class_rows = class_index_sets(ds)
    n_cols = len(centers.centers)
    dist = np.full((ds.p, n_cols), np.inf)
    offset = 1 if centers.has_special else 0
    if centers.has_special:
        m0 = centers.centers[0]
        if m0 is not None and not math.isinf(lam):
            dist[:, 0] = lam * np.sqrt(np.square(ds.x - m0[:, None]).mean(axis=0))
    for j, s in enumerate(class_rows):
        m = centers.centers[j + offset]
        dist[:, j + offset] = np.sqrt(np.square(ds.x[s, :] - m[:, None]).mean(axis=0))
    assignment = dist.argmin(axis=1)
    groups = tuple(np.flatnonzero(assignment == j) for j in range(n_cols))
    return FeaturePartition(groups, has_special=centers.has_special)


def clustering_objective(ds: LabeledDataset, part: FeaturePartition) -> float:
    """The alternation's own objective: total squared dn-distance of each
    feature to its group's freshly recomputed center (special group
    included, unscaled).  Non-increasing across update/assign rounds."""
    centers = update_centers(ds, part)
    class_rows = class_index_sets(ds)
    total = 0.0
    if part.has_special and len(part.special):
        m0 = centers.centers[0]
        total += np.square(ds.x[:, part.special] - m0[:, None]).mean(axis=0).sum()
    offset = 1 if part.has_special else 0
    for j, (g, s) in enumerate(zip(part.class_groups, class_rows)):
        m = centers.centers[j + offset]
        total += np.square(ds.x[np.ix_(s, g)] - m[:, None]).mean(axis=0).sum()
    return float(total)


def refine_partition(ds: LabeledDataset, part: FeaturePartition, config: FitConfig):
    """Run the update/assign alternation from ``part`` until the partition
    repeats or ``max_iters`` is hit.

    Returns ``(partition, iterations)``; raises EmptyGroupError if a
    class group empties (the caller restarts from a fresh initialization).
    """
    current = part
    for it in range(1, config.max_iters + 1):
        centers = update_centers(ds, current)
        new = assign_rows(ds, centers, config.lam)
        for g in new.class_groups:
            if len(g) == 0:
                raise EmptyGroupError("empty class group during alternation")
        if all(np.array_equal(a, b) for a, b in zip(new.groups, current.groups)):
            return new, it
        current = new
    return current, config.max_iters


def lloyd_fit(ds: LabeledDataset, config: FitConfig, rng: np.random.Generator) -> FeaturePartition:
    """One full run: initialize, then alternate to convergence.

    Runs that hit an empty class group are abandoned and re-initialized,
    up to ``config.max_restart_attempts_on_empty`` total attempts.
    """
    n_groups = ds.k + (1 if config.with_selection else 0)
    attempts = 0
    while attempts < config.max_restart_attempts_on_empty:
        attempts += 1
        try:
            part = init_partition(ds, n_groups, rng, max_attempts=1)
            refined, _ = refine_partition(ds, part, config)
            return refined
        except (RestartsExhaustedError, EmptyGroupError):
            continue
    raise RestartsExhaustedError(attempts)


def fit_best(ds: LabeledDataset, config: FitConfig):
    """Run ``config.restarts`` independent fits and keep the best.

    Every restart gets its own derived stream; the winner is the model
    with the lowest training error, ties to the earliest restart.
    Returns ``(partition, model, training_error)``.
    """
    best: tuple[float, int, FeaturePartition, NdcModel] | None = None
    failures = 0
    for r in range(config.restarts):
        stream = rngmod.generator(config.seed, "restart", r)
        try:
            part = lloyd_fit(ds, config, stream)
        except RestartsExhaustedError:
            failures += 1
            continue
        model = with_lambda(compute_centroids(ds, part), config.lam)
        err = training_error(ds, model)
        if best is None or err < best[0]:
            best = (err, r, part, model)
    if best is None:
        raise FitFailedError(f"all {config.restarts} restarts failed "
                             f"({failures} exhausted their empty-group attempts)")
    err, _, part, model = best
    return part, model, err
