"""Unsupervised temperature scaling.

No labels are read. For every class k, the samples *not* predicted as k give
a threshold ``theta_k = mean + std`` of their class-k confidence; the class-k
subset ``M_k`` holds every sample whose class-k confidence reaches that
threshold, whatever its prediction. T is then chosen to minimize

    sum_k sum_{i in M_k} -log softmax(h_i / T)[k]

with the subsets built once from the T = 1 confidences and held fixed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (ConfidenceMatrix, LogitDataset, Method, OptimizationError, Temperature,
                   _prob_array, predicted_classes, tempered_softmax)
from .metrics import PROB_FLOOR
from .scalar_opt import OptimizerConfig, minimize_scalar


class SubsetError(OptimizationError):
    """Every class subset came out empty, so the loss is undefined."""


@dataclass(frozen=True)
class ClassSubsets:
    thresholds: np.ndarray
    subsets: tuple
    complement_sizes: np.ndarray
    warnings: tuple = field(default_factory=tuple)

    @property
    def n_classes(self) -> int:
        return len(self.subsets)

    @property
    def sizes(self) -> list[int]:
        return [len(s) for s in self.subsets]

    @property
    def active_classes(self) -> list[int]:
        return [k for k, s in enumerate(self.subsets) if len(s)]

    def audit(self) -> dict:
        return {
            "thresholds": [float(t) for t in self.thresholds],
            "subset_sizes": self.sizes,
            "complement_sizes": [int(c) for c in self.complement_sizes],
        }


def _thresholds(p: np.ndarray):
    pred = predicted_classes(p)
    n, k = p.shape
    thresholds = np.empty(k)
    sizes = np.empty(k, dtype=np.int64)
    warnings = []
    for c in range(k):
        col = p[pred != c, c]
        sizes[c] = col.size
        if col.size == 0:
            warnings.append(f"class {c}: every sample is predicted as {c}; threshold uses all {n} samples")
            col = p[:, c]
        mean = col.mean()
        thresholds[c] = mean + np.sqrt(np.mean((mean - col) ** 2))
    return thresholds, sizes, warnings


def compute_thresholds(probs: ConfidenceMatrix) -> np.ndarray:
    """Per-class ``mean + population std`` of class-k confidence over samples not predicted as k.

    If every sample is predicted as k, all samples are used instead.
    """
    return _thresholds(_prob_array(probs))[0]


def build_subsets(probs: ConfidenceMatrix, thresholds=None) -> ClassSubsets:
    p = _prob_array(probs)
    t, sizes, warnings = _thresholds(p)
    if thresholds is not None:
        t = np.asarray(thresholds, dtype=np.float64)
        if t.shape != (p.shape[1],):
            raise ValueError(f"thresholds must have shape ({p.shape[1]},), got {t.shape}")
    subsets = []
    for c in range(p.shape[1]):
        members = np.flatnonzero(p[:, c] >= t[c])
        members.setflags(write=False)
        if members.size == 0:
            warnings.append(f"class {c}: empty subset (threshold {t[c]:.6g}); class left out of the loss")
        subsets.append(members)
    if not any(len(s) for s in subsets):
        raise SubsetError("every class subset is empty; the unsupervised loss is undefined")
    t = t.copy()
    t.setflags(write=False)
    sizes.setflags(write=False)
    return ClassSubsets(t, tuple(subsets), sizes, tuple(warnings))


def _pairs(subsets: ClassSubsets):
    # (sample, class) pairs in class-major, ascending-sample order
    rows = np.concatenate([s for s in subsets.subsets]).astype(np.int64)
    cols = np.concatenate([np.full(len(s), c, dtype=np.int64) for c, s in enumerate(subsets.subsets)])
    return rows, cols


def uts_loss(data: LogitDataset, subsets: ClassSubsets, T) -> float:
    p = tempered_softmax(data, T).probs
    rows, cols = _pairs(subsets)
    if rows.size == 0:
        return 0.0
    terms = -np.log(np.maximum(p[rows, cols], PROB_FLOOR))
    return float(np.cumsum(terms)[-1])


def uts_objective(data: LogitDataset, subsets: ClassSubsets):
    rows, cols = _pairs(subsets)
    # only the rows that appear in some subset matter
    used, inverse = np.unique(rows, return_inverse=True)
    reduced = LogitDataset(data.logits[used])

    def objective(t: float) -> float:
        p = tempered_softmax(reduced, t).probs
        terms = -np.log(np.maximum(p[inverse, cols], PROB_FLOOR))
        return float(np.cumsum(terms)[-1])

    return objective


def fit_uts(data: LogitDataset, cfg: OptimizerConfig | None = None) -> tuple[Temperature, ClassSubsets]:
    """Fit a temperature without labels; returns it with the frozen subsets for auditing.

    ``data.labels`` is never read.
    """
    logits_only = LogitDataset(data.logits)
    warnings = []
    if logits_only.n_samples < logits_only.n_classes:
        warnings.append(f"only {logits_only.n_samples} samples for {logits_only.n_classes} classes")
    subsets = build_subsets(tempered_softmax(logits_only, 1.0))
    res = minimize_scalar(uts_objective(logits_only, subsets), cfg)
    temp = Temperature(res.t_star, Method.UTS, res.f_star, res.evaluations,
                       tuple(warnings) + subsets.warnings + res.warnings)
    return temp, subsets
