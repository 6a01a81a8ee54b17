"""Reference classifiers: nearest centroid, nearest shrunken centroid,
and k-nearest neighbors.

All tie-breaking is deterministic: equal scores go to the smallest class
index, and equal neighbor distances to the smaller training-row index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import LabeledDataset, class_index_sets


# ---------------------------------------------------------------------------
# Nearest centroid
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NcModel:
    centroids: np.ndarray  # k x p class means
    k: int
    p: int


def nc_fit(ds: LabeledDataset) -> NcModel:
    centroids = np.stack([ds.x[s].mean(axis=0) for s in class_index_sets(ds)])
    return NcModel(centroids, k=ds.k, p=ds.p)


def nc_predict_many(model: NcModel, x: np.ndarray) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[1] != model.p:
        raise ValueError(f"expected {model.p} features, got {x.shape[1]}")
    d2 = np.square(x[:, None, :] - model.centroids[None, :, :]).sum(axis=2)
    return d2.argmin(axis=1) + 1


def nc_predict(model: NcModel, x) -> int:
    return int(nc_predict_many(model, x)[0])


# ---------------------------------------------------------------------------
# Nearest shrunken centroid
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NscModel:
    """Soft-thresholded class centroids in pooled-sd units.

    ``shrunken`` holds the k x p shrunken class centroids, ``d_shrunk``
    the thresholded standardized differences (a feature is selected iff
    some class keeps a nonzero one), ``scale`` the per-feature
    denominators s_i + s0, and ``priors`` the empirical class proportions
    entering the score's -2 log prior term.
    """

    overall: np.ndarray
    shrunken: np.ndarray
    d_shrunk: np.ndarray
    scale: np.ndarray
    s0: float
    priors: np.ndarray
    delta: float
    k: int
    p: int

    @property
    def selected_feature_count(self) -> int:
        return int(np.any(self.d_shrunk != 0.0, axis=0).sum())


def _nsc_stats(ds: LabeledDataset):
    if ds.k < 2:
        raise ValueError("shrunken centroids need at least two classes")
    if ds.n <= ds.k:
        raise ValueError("pooled within-class sd needs n > k")
    rows = class_index_sets(ds)
    overall = ds.x.mean(axis=0)
    class_means = np.stack([ds.x[s].mean(axis=0) for s in rows])
    within_ss = np.zeros(ds.p)
    for j, s in enumerate(rows):
        within_ss += np.square(ds.x[s] - class_means[j]).sum(axis=0)
    s_i = np.sqrt(within_ss / (ds.n - ds.k))
    s0 = float(np.median(s_i))
    scale = s_i + s0
    if np.any(scale == 0):
        raise ValueError("degenerate constant data: zero pooled sd and zero s0")
    counts = np.array([len(s) for s in rows], dtype=np.float64)
    m_k = np.sqrt(1.0 / counts - 1.0 / ds.n)
    d = (class_means - overall) / (m_k[:, None] * scale[None, :])
    return overall, scale, s0, counts, m_k, d


def nsc_fit(ds: LabeledDataset, delta: float) -> NscModel:
    if delta < 0:
        raise ValueError("shrinkage threshold must be >= 0")
    overall, scale, s0, counts, m_k, d = _nsc_stats(ds)
    d_shrunk = np.sign(d) * np.maximum(np.abs(d) - delta, 0.0)
    shrunken = overall[None, :] + m_k[:, None] * scale[None, :] * d_shrunk
    return NscModel(overall=overall, shrunken=shrunken, d_shrunk=d_shrunk,
                    scale=scale, s0=s0, priors=counts / ds.n, delta=delta,
                    k=ds.k, p=ds.p)


def nsc_scores_many(model: NscModel, x: np.ndarray) -> np.ndarray:
    """Discriminant score per class: standardized squared distance to the
    shrunken centroid minus twice the log prior (smaller is better)."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[1] != model.p:
        raise ValueError(f"expected {model.p} features, got {x.shape[1]}")
    z = (x[:, None, :] - model.shrunken[None, :, :]) / model.scale[None, None, :]
    return np.square(z).sum(axis=2) - 2.0 * np.log(model.priors)[None, :]


def nsc_predict_many(model: NscModel, x: np.ndarray) -> np.ndarray:
    return nsc_scores_many(model, x).argmin(axis=1) + 1


def nsc_predict(model: NscModel, x) -> int:
    return int(nsc_predict_many(model, x)[0])


def nsc_delta_grid(ds: LabeledDataset, size: int = 30) -> np.ndarray:
    """Evenly spaced shrinkage thresholds from 0 (no shrinkage) to the
    largest standardized difference (everything shrunk away)."""
    *_, d = _nsc_stats(ds)
    return np.linspace(0.0, float(np.abs(d).max()), size)


# ---------------------------------------------------------------------------
# k-nearest neighbors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KnnModel:
    x: np.ndarray
    labels: np.ndarray
    m: int
    k: int
    p: int


def knn_fit(ds: LabeledDataset, m: int = 15) -> KnnModel:
    if not (1 <= m <= ds.n):
        raise ValueError("neighbor count must be in 1..n")
    return KnnModel(ds.x, ds.labels, m=m, k=ds.k, p=ds.p)


def knn_predict_many(model: KnnModel, x: np.ndarray) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[1] != model.p:
        raise ValueError(f"expected {model.p} features, got {x.shape[1]}")
    d2 = np.square(x[:, None, :] - model.x[None, :, :]).sum(axis=2)
    # stable sort: equal distances resolve to the smaller training row
    neighbors = np.argsort(d2, axis=1, kind="stable")[:, :model.m]
    votes = model.labels[neighbors]
    out = np.empty(x.shape[0], dtype=np.int64)
    for r in range(x.shape[0]):
        counts = np.bincount(votes[r], minlength=model.k + 1)
        out[r] = counts[1:].argmax() + 1
    return out


def knn_predict(model: KnnModel, x) -> int:
    return int(knn_predict_many(model, x)[0])
