"""Synthetic classifiers with a known miscalibration temperature.

Base logits ``z`` are i.i.d. N(0, sigma^2); each label is drawn from
``softmax(z_i)``, and the emitted logits are ``T0 * z``. Dividing by ``T0``
therefore recovers a perfectly calibrated model.

Random numbers come from numpy's PCG64 bit generator seeded with ``seed``:
first the N*K normals in row-major order (``Generator.standard_normal``),
then N uniforms on [0, 1) (``Generator.random``) used for inverse-CDF label
sampling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DomainError, LogitDataset, tempered_softmax


@dataclass(frozen=True)
class SynthConfig:
    n_samples: int
    n_classes: int
    true_temperature: float
    logit_scale: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if self.n_samples < 1:
            raise DomainError("n_samples must be >= 1")
        if self.n_classes < 2:
            raise DomainError("n_classes must be >= 2")
        if not self.true_temperature > 0:
            raise DomainError("true_temperature must be > 0")
        if not self.logit_scale > 0:
            raise DomainError("logit_scale must be > 0")


def base_logits_and_labels(cfg: SynthConfig) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    z = cfg.logit_scale * rng.standard_normal((cfg.n_samples, cfg.n_classes))
    u = rng.random(cfg.n_samples)
    cdf = np.cumsum(tempered_softmax(z, 1.0).probs, axis=1)
    # first class whose cumulative probability exceeds u; rounding can leave cdf[-1] < u
    labels = np.minimum((cdf <= u[:, None]).sum(axis=1), cfg.n_classes - 1)
    return z, labels


def generate(cfg: SynthConfig) -> LogitDataset:
    z, labels = base_logits_and_labels(cfg)
    return LogitDataset(cfg.true_temperature * z, labels)
