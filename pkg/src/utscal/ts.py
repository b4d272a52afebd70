"""Supervised temperature scaling: choose T minimizing the summed NLL of labelled logits."""

from __future__ import annotations

import numpy as np

from .core import LogitDataset, Method, Temperature, UsageError, tempered_softmax
from .metrics import nll
from .scalar_opt import OptimizerConfig, minimize_scalar


def ts_objective(data: LogitDataset):
    if not data.has_labels:
        raise UsageError("temperature scaling needs labels")

    h = data.logits
    h_true = h[np.arange(data.n_samples), data.labels]
    row_max = h.max(axis=1)
    shifted = h - row_max[:, None]

    # -log softmax(h/T)[y] = logsumexp(h/T) - h_y/T, without materialising the probabilities
    def objective(t: float) -> float:
        lse = row_max / t + np.log(np.exp(shifted / t).sum(axis=1))
        return float(np.cumsum(lse - h_true / t)[-1])

    return objective


def ts_objective_composed(data: LogitDataset):
    """Same objective as :func:`ts_objective`, literally ``nll(tempered_softmax(data, T))``."""
    if not data.has_labels:
        raise UsageError("temperature scaling needs labels")
    return lambda t: nll(tempered_softmax(data, t), data.labels)


def fit_ts(data: LogitDataset, cfg: OptimizerConfig | None = None) -> Temperature:
    if not data.has_labels:
        raise UsageError("temperature scaling needs labels")
    if data.n_samples < 2:
        raise UsageError("temperature scaling needs at least two samples")
    warnings = []
    if np.unique(data.labels).size == 1:
        warnings.append(f"all calibration labels are class {int(data.labels[0])}")
    res = minimize_scalar(ts_objective(data), cfg)
    return Temperature(res.t_star, Method.TS, res.f_star, res.evaluations, tuple(warnings) + res.warnings)
