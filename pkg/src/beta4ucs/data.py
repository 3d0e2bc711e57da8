"""Dataset loading, min-max normalization, and split protocols.

Features live in float arrays with NaN marking missing cells.  All split
protocols are deterministic functions of a seed.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np


@dataclass
class Dataset:
    """Feature matrix (NaN = missing) plus integer labels in [0, m)."""

    features: np.ndarray
    labels: np.ndarray
    attribute_names: list[str] = field(default_factory=list)
    class_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.features.ndim != 2:
            raise ValueError("features must be a 2-D matrix")
        if len(self.features) != len(self.labels):
            raise ValueError("feature and label counts differ")
        if not self.attribute_names:
            self.attribute_names = [f"x{i + 1}" for i in range(self.features.shape[1])]
        if not self.class_names:
            m = int(self.labels.max()) + 1 if len(self.labels) else 0
            self.class_names = [str(c) for c in range(m)]
        if len(self.labels) and (self.labels.min() < 0
                                 or self.labels.max() >= len(self.class_names)):
            raise ValueError("labels out of range")

    @property
    def n_instances(self) -> int:
        return len(self.labels)

    @property
    def n_dims(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def subset(self, idx: np.ndarray) -> "Dataset":
        return Dataset(self.features[idx], self.labels[idx],
                       list(self.attribute_names), list(self.class_names))


_MISSING = {"", "?"}


def load_csv(path, label_col: int = -1, header: bool = False) -> Dataset:
    """Parse a CSV file into a Dataset.

    "?" and empty cells become missing values; class labels are mapped to
    contiguous indices in order of first appearance.
    """
    rows = []
    names: list[str] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for lineno, rec in enumerate(reader, start=1):
            if not rec or (len(rec) == 1 and rec[0].strip() == ""):
                continue
            if header and lineno == 1 and not rows:
                names = [c.strip() for c in rec]
                continue
            rows.append((lineno, [c.strip() for c in rec]))
    if not rows:
        raise ValueError(f"{path}: no data rows")
    width = len(rows[0][1])
    if width < 2:
        raise ValueError(f"{path}: need at least one feature and a label column")
    lab = label_col if label_col >= 0 else width + label_col
    if not 0 <= lab < width:
        raise ValueError(f"{path}: label column {label_col} out of range")

    feats = []
    labels = []
    class_map: dict[str, int] = {}
    for lineno, rec in rows:
        if len(rec) != width:
            raise ValueError(f"{path}:{lineno}: expected {width} columns, got {len(rec)}")
        vals = []
        for j, cell in enumerate(rec):
            if j == lab:
                continue
            if cell in _MISSING:
                vals.append(math.nan)
                continue
            try:
                vals.append(float(cell))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: cannot parse {cell!r} as a number")
        cls = rec[lab]
        if cls in _MISSING:
            raise ValueError(f"{path}:{lineno}: missing class label")
        if cls not in class_map:
            class_map[cls] = len(class_map)
        feats.append(vals)
        labels.append(class_map[cls])
    if names:
        names = [n for j, n in enumerate(names) if j != lab]
    return Dataset(np.array(feats), np.array(labels), names, list(class_map))


@dataclass
class Normalizer:
    """Per-attribute min-max map fitted on training data only."""

    mins: np.ndarray
    maxs: np.ndarray

    def __post_init__(self):
        self.mins = np.asarray(self.mins, dtype=float)
        self.maxs = np.asarray(self.maxs, dtype=float)
        if (self.mins > self.maxs).any():
            raise ValueError("per-attribute min must not exceed max")

    @classmethod
    def fit(cls, features: np.ndarray) -> "Normalizer":
        with np.errstate(all="ignore"):
            mins = np.nanmin(features, axis=0)
            maxs = np.nanmax(features, axis=0)
        # all-missing attribute: pick an arbitrary but valid range
        mins = np.where(np.isnan(mins), 0.0, mins)
        maxs = np.where(np.isnan(maxs), 1.0, maxs)
        return cls(mins, maxs)

    def transform(self, features: np.ndarray, clip: bool = True) -> np.ndarray:
        span = self.maxs - self.mins
        const = span == 0.0
        safe = np.where(const, 1.0, span)
        out = (features - self.mins) / safe
        out = np.where(const & ~np.isnan(features), 0.5, out)
        if clip:
            out = np.clip(out, 0.0, 1.0)
        return out

    def inverse(self, values: np.ndarray) -> np.ndarray:
        return self.mins + values * (self.maxs - self.mins)


def fit_transform(train: Dataset, test: Dataset) -> tuple[Dataset, Dataset, Normalizer]:
    """Fit min-max on the training part, normalize both, clip the test part."""
    norm = Normalizer.fit(train.features)
    tr = replace(train, features=norm.transform(train.features, clip=False))
    te = replace(test, features=norm.transform(test.features, clip=True))
    return tr, te, norm


def split(dataset: Dataset, protocol: str, seed: int,
          ratio: float = 0.9, k: int = 10) -> list[tuple[Dataset, Dataset]]:
    """Produce (train, test) folds under the named protocol.

    ``shuffle``/``stratified_shuffle`` yield one fold at the given train
    ratio; ``kfold`` yields k folds with disjoint test parts.  All
    protocols draw a fresh permutation from the seed.
    """
    n = dataset.n_instances
    rng = np.random.default_rng(seed)
    if protocol == "shuffle":
        perm = rng.permutation(n)
        cut = round(n * ratio)
        if cut < 1 or cut >= n:
            raise ValueError("ratio leaves an empty split")
        return [(dataset.subset(perm[:cut]), dataset.subset(perm[cut:]))]
    if protocol == "stratified_shuffle":
        return [_stratified(dataset, rng, ratio)]
    if protocol == "kfold":
        if not 2 <= k <= n:
            raise ValueError(f"kfold needs 2 <= k <= {n}")
        perm = rng.permutation(n)
        folds = np.array_split(perm, k)
        out = []
        for i in range(k):
            test_idx = folds[i]
            train_idx = np.concatenate([folds[j] for j in range(k) if j != i])
            out.append((dataset.subset(train_idx), dataset.subset(test_idx)))
        return out
    raise ValueError(f"unknown split protocol {protocol!r}")


def _stratified(dataset, rng, ratio):
    """One shuffle split preserving class proportions.

    Per-class train counts use largest-remainder rounding against the
    global target so both parts keep the class mix.
    """
    n = dataset.n_instances
    target = round(n * ratio)
    if target < 1 or target >= n:
        raise ValueError("ratio leaves an empty split")
    classes = np.unique(dataset.labels)
    per_class = []
    for c in classes:
        idx = np.flatnonzero(dataset.labels == c)
        if idx.size < 2:
            raise ValueError(f"class {c} has fewer than 2 instances")
        per_class.append(rng.permutation(idx))
    quotas = [len(idx) * ratio for idx in per_class]
    take = [math.floor(q) for q in quotas]
    rem = sorted(range(len(classes)), key=lambda i: quotas[i] - take[i], reverse=True)
    i = 0
    while sum(take) < target and i < len(rem):
        c = rem[i]
        if take[c] < len(per_class[c]) - 1:
            take[c] += 1
        i += 1
    train_idx = np.concatenate([idx[:t] for idx, t in zip(per_class, take)])
    test_idx = np.concatenate([idx[t:] for idx, t in zip(per_class, take)])
    train_idx = rng.permutation(train_idx)
    test_idx = rng.permutation(test_idx)
    return dataset.subset(train_idx), dataset.subset(test_idx)
