"""Evaluation metrics and the kurtosis-landscape emitter."""

from __future__ import annotations

from dataclasses import dataclass, field, asdict

import numpy as np


@dataclass
class EvalReport:
    """One run's evaluation summary.

    ``confusion[i][j]`` counts test instances of true class i predicted
    as class j.  ``wall_time`` is informational only and is kept out of
    the deterministic report files.
    """

    accuracy: float
    macro_f1: float
    confusion: list
    macro_rules: int
    micro_rules: int
    crisp_fraction: float
    train_accuracy: float = 0.0
    wall_time: float = 0.0

    def to_dict(self, include_timing: bool = False) -> dict:
        d = asdict(self)
        if not include_timing:
            d.pop("wall_time")
        return d


def confusion_matrix(y_true, y_pred, n_classes: int) -> np.ndarray:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape:
        raise ValueError("prediction and truth lengths differ")
    out = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(out, (y_true, y_pred), 1)
    return out


def accuracy(confusion: np.ndarray) -> float:
    confusion = np.asarray(confusion)
    total = confusion.sum()
    if total == 0:
        raise ValueError("empty confusion matrix")
    return float(np.trace(confusion)) / float(total)


def macro_f1(confusion: np.ndarray) -> float:
    """Unweighted mean of per-class F1; a class with zero precision and
    recall denominators contributes 0."""
    confusion = np.asarray(confusion, dtype=float)
    if confusion.sum() == 0:
        raise ValueError("empty confusion matrix")
    tp = np.diag(confusion)
    pred = confusion.sum(axis=0)
    actual = confusion.sum(axis=1)
    denom = pred + actual
    with np.errstate(divide="ignore", invalid="ignore"):
        f1 = np.where(denom > 0.0, 2.0 * tp / np.where(denom > 0.0, denom, 1.0), 0.0)
    return float(f1.mean())


def kurtosis_landscape(model, resolution: int = 101) -> np.ndarray:
    """Numerosity-weighted mean rule kurtosis over a 2-D grid.

    At each grid point the experienced match set (exp > theta_exp, mu > 0)
    contributes sum_k (kurt1 + kurt2) * num_k / (2 * sum_k num_k); cells
    with no experienced matching rule hold NaN.
    """
    if model.n_dims != 2:
        raise ValueError("kurtosis landscape requires a 2-D population")
    if not getattr(model, "_beta_rep", True):
        raise ValueError("kurtosis landscape requires beta-shaped rules")
    ticks = np.arange(resolution) / (resolution - 1)
    out = np.full((resolution, resolution), np.nan)
    theta = model.cfg.theta_exp
    for i, xi in enumerate(ticks):
        for j, yj in enumerate(ticks):
            x = np.array([xi, yj])
            mu = model.match_degrees(x)
            rows = np.flatnonzero((mu > 0.0) & (model.exp_[: model._top] > theta))
            if rows.size == 0:
                continue
            num = model.num[rows].astype(float)
            ksum = model.kurt[rows].sum(axis=1)
            out[i, j] = float((ksum * num).sum() / (2.0 * num.sum()))
    return out


def landscape_to_csv(grid: np.ndarray, path) -> None:
    """Write (x, y, value) rows; uncovered cells serialize as 'nan'."""
    res = grid.shape[0]
    ticks = np.arange(res) / (res - 1)
    with open(path, "w") as fh:
        fh.write("x,y,kurtosis\n")
        for i in range(res):
            for j in range(grid.shape[1]):
                fh.write(f"{ticks[i]:.6f},{ticks[j]:.6f},{grid[i, j]:.6f}\n")
