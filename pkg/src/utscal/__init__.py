"""Post-hoc temperature calibration of classifier logits, supervised (TS) and unsupervised (UTS)."""

from .core import (CalibrationError, ConfidenceMatrix, DomainError, InputError, LogitDataset, Method,
                   OptimizationError, Prediction, Temperature, UsageError, predict, tempered_softmax)
from .io import CalibrationReport, evaluate, read_logits_csv, split, write_logits_csv
from .metrics import ReliabilityBin, accuracy, ece, nll, nll_stats
from .scalar_opt import OptimizerConfig, minimize_scalar
from .synth import SynthConfig, generate
from .ts import fit_ts
from .uts import ClassSubsets, build_subsets, compute_thresholds, fit_uts, uts_loss

__version__ = "0.1.0"
