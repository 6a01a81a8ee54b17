"""Disjoint-centroid models: fitting centroids on a partition, prediction
under the dimensionality-normalized norm, and the empirical risk.

Given a feature partition I_1..I_k, the class-j centroid is the mean of
the class-j training rows restricted to I_j.  A point is classified to
the class whose centroid is nearest in squared dn-distance, i.e. the mean
squared residual over that class's own feature group; features in the
special group I_0 are never consulted.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .data import FeaturePartition, LabeledDataset, class_index_sets, validate_partition

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class NdcModel:
    """A fitted partition plus per-class centroids on their own features."""

    partition: FeaturePartition
    centroids: tuple[np.ndarray, ...]
    k: int
    p: int
    lambda_used: float | None = None

    def __post_init__(self):
        groups = self.partition.class_groups
        if len(groups) != self.k or len(self.centroids) != self.k:
            raise ValueError("need one feature group and one centroid per class")
        for g, c in zip(groups, self.centroids):
            if len(g) == 0:
                raise ValueError("class feature groups must be non-empty")
            if len(c) != len(g):
                raise ValueError("centroid length must match its feature group")
        problem = validate_partition(self.partition, self.p, self.k)
        if problem is not None:
            raise ValueError(f"invalid partition: {problem}")

    @property
    def selected_feature_count(self) -> int:
        return sum(len(g) for g in self.partition.class_groups)


def compute_centroids(ds: LabeledDataset, part: FeaturePartition) -> NdcModel:
    """Per-class mean of the rows restricted to that class's feature group."""
    rows = class_index_sets(ds)
    centroids = []
    for g, s in zip(part.class_groups, rows):
        if len(g) == 0:
            raise ValueError("cannot compute a centroid for an empty feature group")
        centroids.append(ds.x[np.ix_(s, g)].mean(axis=0))
    return NdcModel(part, tuple(centroids), k=ds.k, p=ds.p)


def with_lambda(model: NdcModel, lam: float | None) -> NdcModel:
    """Record the multiplier the model was fitted with (None or infinity
    both mean no feature selection was in play)."""
    if lam is not None and math.isinf(lam):
        lam = None
    return replace(model, lambda_used=lam)


def predict_scores_many(model: NdcModel, x: np.ndarray) -> np.ndarray:
    """Squared dn-distance of each row of ``x`` to each class centroid."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[1] != model.p:
        raise ValueError(f"expected {model.p} features, got {x.shape[1]}")
    scores = np.empty((x.shape[0], model.k))
    for j, (g, c) in enumerate(zip(model.partition.class_groups, model.centroids)):
        scores[:, j] = np.square(x[:, g] - c).mean(axis=1)
    return scores


def predict_scores(model: NdcModel, x) -> np.ndarray:
    return predict_scores_many(model, x)[0]


def predict_many(model: NdcModel, x: np.ndarray) -> np.ndarray:
    """Class labels for the rows of ``x``; ties go to the smallest class."""
    return predict_scores_many(model, x).argmin(axis=1) + 1


def predict(model: NdcModel, x) -> int:
    return int(predict_many(model, x)[0])


def empirical_risk(ds: LabeledDataset, model: NdcModel) -> float:
    """Average squared dn-distance of each row to its own class centroid."""
    if ds.p != model.p or ds.k != model.k:
        raise ValueError("model and dataset dimensions disagree")
    total = 0.0
    for s, g, c in zip(class_index_sets(ds), model.partition.class_groups, model.centroids):
        total += np.square(ds.x[np.ix_(s, g)] - c).mean(axis=1).sum()
    return float(total) / ds.n


def training_error(ds: LabeledDataset, model: NdcModel) -> float:
    """Fraction of training rows whose prediction differs from the label."""
    return float(np.mean(predict_many(model, ds.x) != ds.labels))


def save_model(model: NdcModel, path) -> None:
    """Write the model file: JSON with 1-based feature indices.

    The partition and centroid arrays are aligned; when the special group
    is present it occupies slot 0 and its centroid slot is an empty array.
    """
    partition = model.partition.groups_1based()
    centroids = [c.tolist() for c in model.centroids]
    if model.partition.has_special:
        centroids = [[]] + centroids
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "k": model.k,
        "p": model.p,
        "has_special": model.partition.has_special,
        "partition": partition,
        "centroids": centroids,
    }
    if model.lambda_used is not None:
        doc["lambda"] = "inf" if math.isinf(model.lambda_used) else model.lambda_used
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_model(path) -> NdcModel:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format_version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {doc.get('format_version')!r}")
    has_special = bool(doc["has_special"])
    groups = tuple(np.asarray(g, dtype=np.int64) - 1 for g in doc["partition"])
    part = FeaturePartition(groups, has_special=has_special)
    centroids = [np.asarray(c, dtype=np.float64) for c in doc["centroids"]]
    if has_special:
        centroids = centroids[1:]
    lam = doc.get("lambda")
    if lam == "inf":
        lam = math.inf
    return NdcModel(part, tuple(centroids), k=int(doc["k"]), p=int(doc["p"]),
                    lambda_used=lam)
