"""Domain types, the tempered softmax and argmax prediction."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np


class CalibrationError(Exception):
    """Base class for all errors raised by utscal."""


class InputError(CalibrationError, ValueError):
    """Malformed or invalid input data (non-finite logits, bad labels, ragged CSV)."""


class DomainError(CalibrationError, ValueError):
    """A parameter lies outside its admissible range (T <= 0, n_bins = 0, ...)."""


class UsageError(CalibrationError):
    """The caller asked for something the data cannot support, e.g. TS without labels."""


class OptimizationError(CalibrationError):
    """The temperature search could not produce a usable minimizer."""


class Method(str, enum.Enum):
    TS = "TS"
    UTS = "UTS"
    FIXED = "Fixed"


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LogitDataset:
    """N x K matrix of raw logits with an optional vector of 0-based labels."""

    logits: np.ndarray
    labels: Optional[np.ndarray] = None

    def __post_init__(self):
        logits = np.array(self.logits, dtype=np.float64)
        if logits.ndim == 1:
            logits = logits[None, :]
        if logits.ndim != 2:
            raise InputError(f"logits must be 2-D, got shape {logits.shape}")
        n, k = logits.shape
        if n < 1:
            raise InputError("need at least one sample")
        if k < 2:
            raise InputError(f"need at least two classes, got {k}")
        bad = ~np.isfinite(logits)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise InputError(f"non-finite logit at row {i}, column {j}: {logits[i, j]}")
        object.__setattr__(self, "logits", _readonly(logits))

        if self.labels is not None:
            raw = np.asarray(self.labels)
            if raw.ndim != 1 or raw.shape[0] != n:
                raise InputError(f"labels must have shape ({n},), got {raw.shape}")
            if raw.dtype.kind == "f":
                if not np.all(np.isfinite(raw)) or np.any(raw != np.round(raw)):
                    raise InputError("labels must be integers")
            labels = raw.astype(np.int64)
            out = (labels < 0) | (labels >= k)
            if out.any():
                i = int(np.flatnonzero(out)[0])
                raise InputError(f"label {labels[i]} at row {i} outside [0, {k})")
            object.__setattr__(self, "labels", _readonly(labels))

    @property
    def n_samples(self) -> int:
        return self.logits.shape[0]

    @property
    def n_classes(self) -> int:
        return self.logits.shape[1]

    @property
    def has_labels(self) -> bool:
        return self.labels is not None

    def without_labels(self) -> "LogitDataset":
        return LogitDataset(self.logits)

    def take(self, indices: Sequence[int]) -> "LogitDataset":
        idx = np.asarray(indices, dtype=np.int64)
        labels = None if self.labels is None else self.labels[idx]
        return LogitDataset(self.logits[idx], labels)


@dataclass(frozen=True)
class Temperature:
    """A strictly positive temperature together with how it was obtained."""

    value: float
    method: Method = Method.FIXED
    loss_at_optimum: float = 0.0
    evaluations: int = 0
    warnings: tuple = field(default_factory=tuple)

    def __post_init__(self):
        value = float(self.value)
        if not np.isfinite(value) or value <= 0:
            raise DomainError(f"temperature must be finite and > 0, got {self.value}")
        if not np.isfinite(self.loss_at_optimum):
            raise DomainError("loss_at_optimum must be finite")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "warnings", tuple(self.warnings))

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class ConfidenceMatrix:
    probs: np.ndarray
    temperature_used: float = 1.0

    def __post_init__(self):
        probs = np.array(self.probs, dtype=np.float64)
        if probs.ndim != 2:
            raise InputError(f"probs must be 2-D, got shape {probs.shape}")
        object.__setattr__(self, "probs", _readonly(probs))

    @property
    def n_samples(self) -> int:
        return self.probs.shape[0]

    @property
    def n_classes(self) -> int:
        return self.probs.shape[1]


@dataclass(frozen=True)
class Prediction:
    predicted_class: int
    confidence: float


def _temperature_value(T) -> float:
    t = T.value if isinstance(T, Temperature) else float(T)
    if not np.isfinite(t) or t <= 0:
        raise DomainError(f"temperature must be finite and > 0, got {t}")
    return t


def _logit_array(logits) -> np.ndarray:
    if isinstance(logits, LogitDataset):
        return logits.logits
    return LogitDataset(logits).logits


def tempered_softmax(logits: Union[LogitDataset, np.ndarray], T: Union[Temperature, float] = 1.0) -> ConfidenceMatrix:
    """Softmax of ``logits / T`` computed row-wise with max subtraction.

    Parameters
    ----------
    logits : LogitDataset or array_like, shape (N, K)
    T : Temperature or float
        Must be strictly positive.

    Returns
    -------
    ConfidenceMatrix
    """
    t = _temperature_value(T)
    h = _logit_array(logits)
    z = h / t
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    probs = e / e.sum(axis=1, keepdims=True)
    return ConfidenceMatrix(probs, t)


def log_tempered_softmax(logits: Union[LogitDataset, np.ndarray], T: Union[Temperature, float] = 1.0) -> np.ndarray:
    """Log of :func:`tempered_softmax`, without the underflow of ``log(exp(.))``."""
    t = _temperature_value(T)
    z = _logit_array(logits) / t
    m = z.max(axis=1, keepdims=True)
    return z - (m + np.log(np.exp(z - m).sum(axis=1, keepdims=True)))


def _prob_array(probs) -> np.ndarray:
    if isinstance(probs, ConfidenceMatrix):
        return probs.probs
    return np.asarray(probs, dtype=np.float64)


def predicted_classes(probs) -> np.ndarray:
    # np.argmax returns the first maximal index, i.e. ties go to the lowest class id
    return np.argmax(_prob_array(probs), axis=1)


def confidences(probs) -> np.ndarray:
    return _prob_array(probs).max(axis=1)


def predict(probs) -> list[Prediction]:
    p = _prob_array(probs)
    cls = predicted_classes(p)
    conf = p[np.arange(p.shape[0]), cls]
    return [Prediction(int(c), float(v)) for c, v in zip(cls, conf)]
