"""Core dataset types, the dimensionality-normalized norm, and CSV ingestion.

Conventions
-----------
- Samples are rows, features are columns, all values 64-bit floats.
- Class labels are integers ``1..k`` and every class must occur.
- Inside the library feature/row indices are 0-based numpy arrays; the
  file formats (CSV, model JSON) and all printed output use 1-based
  indices instead.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np


class CsvFormatError(ValueError):
    """Raised when an input CSV does not match the ingestion format."""


@dataclass(frozen=True)
class DataMatrix:
    """Dense n_rows x n_cols matrix of finite floats."""

    values: np.ndarray

    def __post_init__(self):
        # copy before freezing so the caller's array is left untouched
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError("data matrix must be 2-dimensional")
        if values.shape[0] < 1 or values.shape[1] < 1:
            raise ValueError("data matrix must have at least one row and one column")
        if not np.all(np.isfinite(values)):
            raise ValueError("data matrix contains NaN or infinite entries")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class LabeledDataset:
    """A data matrix plus integer class labels in ``1..k``.

    Every class in ``1..k`` must be represented, and ``k`` may not exceed
    either dimension of the matrix.
    """

    matrix: DataMatrix
    labels: np.ndarray
    k: int

    def __post_init__(self):
        labels = np.array(self.labels, dtype=np.int64)
        if labels.ndim != 1 or labels.shape[0] != self.matrix.n_rows:
            raise ValueError("labels must be one per data-matrix row")
        if self.k < 1:
            raise ValueError("class count must be at least 1")
        if self.k > min(self.matrix.n_rows, self.matrix.n_cols):
            raise ValueError(
                f"class count k={self.k} exceeds min(n_rows, n_cols)="
                f"{min(self.matrix.n_rows, self.matrix.n_cols)}"
            )
        present = np.unique(labels)
        if present[0] < 1 or present[-1] > self.k:
            raise ValueError("labels must lie in 1..k")
        if len(present) != self.k:
            missing = sorted(set(range(1, self.k + 1)) - set(present.tolist()))
            raise ValueError(f"classes with no samples: {missing}")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_arrays(cls, x, labels, k: int | None = None) -> "LabeledDataset":
        labels = np.asarray(labels, dtype=np.int64)
        if k is None:
            k = int(labels.max()) if labels.size else 0
        return cls(DataMatrix(np.asarray(x, dtype=np.float64)), labels, k)

    @property
    def x(self) -> np.ndarray:
        return self.matrix.values

    @property
    def n(self) -> int:
        return self.matrix.n_rows

    @property
    def p(self) -> int:
        return self.matrix.n_cols


@dataclass(frozen=True)
class FeaturePartition:
    """Disjoint feature-index groups covering ``0..p-1``.

    ``groups[0]`` is the special unused-feature group when ``has_special``
    is set; it may be empty.  All other groups correspond to classes
    ``1..k`` in order and must stay non-empty.
    """

    groups: tuple[np.ndarray, ...]
    has_special: bool = False

    def __post_init__(self):
        frozen = []
        for g in self.groups:
            arr = np.unique(np.asarray(g, dtype=np.int64))
            arr.setflags(write=False)
            frozen.append(arr)
        object.__setattr__(self, "groups", tuple(frozen))

    @property
    def n_class_groups(self) -> int:
        return len(self.groups) - (1 if self.has_special else 0)

    @property
    def class_groups(self) -> tuple[np.ndarray, ...]:
        """The groups tied to classes 1..k, excluding the special group."""
        return self.groups[1:] if self.has_special else self.groups

    @property
    def special(self) -> np.ndarray | None:
        return self.groups[0] if self.has_special else None

    @property
    def n_features(self) -> int:
        return sum(len(g) for g in self.groups)

    def groups_1based(self) -> list[list[int]]:
        return [(g + 1).tolist() for g in self.groups]


def dn_norm_sq(v) -> float:
    """Squared dimensionality-normalized norm: mean of squared entries."""
    v = np.asarray(v, dtype=np.float64)
    if v.size == 0:
        raise ValueError("dn-norm of an empty vector is undefined")
    return float(np.mean(np.square(v)))


def restrict(x, indices) -> np.ndarray:
    """Entries of ``x`` at the given 0-based indices, ascending.

    The index set must be non-empty and within range.
    """
    x = np.asarray(x, dtype=np.float64)
    idx = np.unique(np.asarray(indices, dtype=np.int64))
    if idx.size == 0:
        raise ValueError("restriction to an empty index set is undefined")
    if idx[0] < 0 or idx[-1] >= x.shape[-1]:
        raise IndexError(f"feature index out of range 0..{x.shape[-1] - 1}")
    return x[..., idx]


def class_index_sets(ds: LabeledDataset) -> list[np.ndarray]:
    """Row indices of each class: element j-1 holds the rows labeled j."""
    return [np.flatnonzero(ds.labels == j) for j in range(1, ds.k + 1)]


def validate_partition(part: FeaturePartition, p: int, k: int) -> str | None:
    """Return None if ``part`` is a valid partition for (p, k), else the
    first violation found, as a human-readable message."""
    if part.n_class_groups != k:
        return f"expected {k} class groups, found {part.n_class_groups}"
    seen = np.zeros(p, dtype=bool)
    for pos, g in enumerate(part.groups):
        if len(g) and (g[0] < 0 or g[-1] >= p):
            return f"group {pos}: feature index out of range 1..{p}"
        dup = g[seen[g]]
        if dup.size:
            return f"overlap at feature {int(dup[0]) + 1}"
        seen[g] = True
    for pos, g in enumerate(part.class_groups):
        if len(g) == 0:
            return f"class group {pos + 1} is empty"
    if not seen.all():
        missing = int(np.flatnonzero(~seen)[0]) + 1
        return f"feature {missing} not covered"
    return None


def read_labeled_csv(path, label_col: str = "label") -> LabeledDataset:
    """Read the delimited ingestion format: a header row, one integer label
    column, and numeric feature columns taken in file order."""
    x, labels, _ = _read_csv(path, label_col, require_labels=True)
    try:
        return LabeledDataset.from_arrays(x, labels)
    except ValueError as exc:
        raise CsvFormatError(f"{path}: {exc}") from exc


def read_feature_csv(path, label_col: str = "label"):
    """Read features from CSV, tolerating an absent label column.

    Returns ``(x, labels_or_none, raw_header, raw_rows)`` where the raw
    parts preserve the file text for pass-through output.
    """
    return _read_csv(path, label_col, require_labels=False, keep_raw=True)


def _read_csv(path, label_col, require_labels, keep_raw=False):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError(f"{path}: empty file") from None
        rows = list(reader)
    rows = [r for r in rows if r]
    if not rows:
        raise CsvFormatError(f"{path}: no data rows")
    label_idx = header.index(label_col) if label_col in header else None
    if require_labels and label_idx is None:
        raise CsvFormatError(f"{path}: no '{label_col}' column in header")
    feat_idx = [i for i in range(len(header)) if i != label_idx]
    if not feat_idx:
        raise CsvFormatError(f"{path}: no feature columns")
    x = np.empty((len(rows), len(feat_idx)), dtype=np.float64)
    labels = np.empty(len(rows), dtype=np.int64) if label_idx is not None else None
    for r, row in enumerate(rows):
        if len(row) != len(header):
            raise CsvFormatError(f"{path}: row {r + 2} has {len(row)} cells, header has {len(header)}")
        for c, i in enumerate(feat_idx):
            try:
                x[r, c] = float(row[i])
            except ValueError:
                raise CsvFormatError(
                    f"{path}: row {r + 2}, column '{header[i]}': non-numeric value {row[i]!r}"
                ) from None
        if labels is not None:
            try:
                labels[r] = int(row[label_idx])
            except ValueError:
                raise CsvFormatError(
                    f"{path}: row {r + 2}: non-integer label {row[label_idx]!r}"
                ) from None
    if keep_raw:
        return x, labels, header, rows
    return x, labels, header


def write_labeled_csv(path, ds: LabeledDataset, label_col: str = "label") -> None:
    """Write the ingestion format with the label column first."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([label_col] + [f"x{i}" for i in range(1, ds.p + 1)])
        for label, row in zip(ds.labels, ds.x):
            writer.writerow([int(label)] + [repr(float(v)) for v in row])
