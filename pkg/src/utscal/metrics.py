"""Calibration measures: NLL, ECE with reliability bins, accuracy."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import ConfidenceMatrix, DomainError, InputError, _prob_array

#: floor applied to a true-label probability before taking its log
PROB_FLOOR = 1e-300

DEFAULT_BINS = 15


class NLLStats(NamedTuple):
    total: float
    mean: float
    n_clamped: int


@dataclass(frozen=True)
class ReliabilityBin:
    index: int
    lower: float
    upper: float
    count: int
    mean_confidence: float
    accuracy: float

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "lower": self.lower,
            "upper": self.upper,
            "count": self.count,
            "mean_confidence": self.mean_confidence,
            "accuracy": self.accuracy,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ReliabilityBin":
        return cls(int(d["index"]), float(d["lower"]), float(d["upper"]), int(d["count"]),
                   float(d["mean_confidence"]), float(d["accuracy"]))


def _labels_for(p: np.ndarray, labels) -> np.ndarray:
    if labels is None:
        raise InputError("labels are required")
    y = np.asarray(labels)
    if y.shape != (p.shape[0],):
        raise InputError(f"labels must have shape ({p.shape[0]},), got {y.shape}")
    y = y.astype(np.int64)
    if np.any((y < 0) | (y >= p.shape[1])):
        raise InputError("label outside [0, K)")
    return y


def nll_stats(probs: ConfidenceMatrix, labels) -> NLLStats:
    """Summed and mean negative log-likelihood of the true labels.

    Probabilities that underflowed to zero are clamped to ``PROB_FLOOR`` and
    counted in ``n_clamped``.
    """
    p = _prob_array(probs)
    y = _labels_for(p, labels)
    p_true = p[np.arange(p.shape[0]), y]
    n_clamped = int(np.count_nonzero(p_true < PROB_FLOOR))
    terms = -np.log(np.maximum(p_true, PROB_FLOOR))
    total = float(np.cumsum(terms)[-1])  # sequential, ascending index
    return NLLStats(total, total / p.shape[0], n_clamped)


def nll(probs: ConfidenceMatrix, labels) -> float:
    """Sum over samples of ``-log p[i, y_i]``; see :func:`nll_stats` for the mean."""
    return nll_stats(probs, labels).total


def accuracy(probs: ConfidenceMatrix, labels) -> float:
    p = _prob_array(probs)
    y = _labels_for(p, labels)
    return float(np.mean(np.argmax(p, axis=1) == y))


def bin_index(conf: np.ndarray, n_bins: int) -> np.ndarray:
    """Equal-width bin of each confidence; 1.0 lands in the last bin."""
    return np.minimum(np.floor(np.asarray(conf) * n_bins).astype(np.int64), n_bins - 1)


def reliability_bins(probs: ConfidenceMatrix, labels, n_bins: int = DEFAULT_BINS) -> list[ReliabilityBin]:
    if int(n_bins) != n_bins or n_bins < 1:
        raise DomainError(f"n_bins must be a positive integer, got {n_bins}")
    n_bins = int(n_bins)
    p = _prob_array(probs)
    y = _labels_for(p, labels)
    pred = np.argmax(p, axis=1)
    conf = p[np.arange(p.shape[0]), pred]
    correct = (pred == y).astype(np.float64)
    idx = bin_index(conf, n_bins)

    counts = np.bincount(idx, minlength=n_bins)
    conf_sum = np.bincount(idx, weights=conf, minlength=n_bins)
    hit_sum = np.bincount(idx, weights=correct, minlength=n_bins)

    bins = []
    for l in range(n_bins):
        c = int(counts[l])
        mean_conf = conf_sum[l] / c if c else 0.0
        acc = hit_sum[l] / c if c else 0.0
        bins.append(ReliabilityBin(l, l / n_bins, (l + 1) / n_bins, c, float(mean_conf), float(acc)))
    return bins


def ece_from_bins(bins: list[ReliabilityBin]) -> float:
    n = sum(b.count for b in bins)
    total = 0.0
    for b in bins:
        if b.count:
            total += (b.count / n) * abs(b.accuracy - b.mean_confidence)
    return total


def ece(probs: ConfidenceMatrix, labels, n_bins: int = DEFAULT_BINS) -> tuple[float, list[ReliabilityBin]]:
    """Expected calibration error as a fraction in [0, 1], plus the bin table.

    A sample's confidence is the probability of its predicted class and it
    falls into bin ``floor(conf * n_bins)`` (clamped to the last bin).
    """
    bins = reliability_bins(probs, labels, n_bins)
    return ece_from_bins(bins), bins
