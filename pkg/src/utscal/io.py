"""Logit CSV files, calibration/test splitting and JSON calibration reports."""

from __future__ import annotations

import csv
import json
import os
import tempfile
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import DomainError, InputError, LogitDataset, UsageError, Method, Temperature, tempered_softmax
from .metrics import DEFAULT_BINS, ReliabilityBin, accuracy, ece_from_bins, nll_stats, reliability_bins

SCHEMA_VERSION = 1


# ---- files -----------------------------------------------------------------------------------

def atomic_write_text(path, text: str) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_logits_csv(path, has_labels: bool = False, header: bool = False) -> LogitDataset:
    """Read a headerless comma-separated logit matrix.

    Each row holds K logits, followed by an integer label when ``has_labels``.
    K is taken from the first data row; ragged rows are rejected.
    """
    rows, labels = [], []
    width = None
    with open(path, newline="") as fh:
        for lineno, record in enumerate(csv.reader(fh), start=1):
            if header and lineno == 1:
                continue
            if not record or all(not c.strip() for c in record):
                continue
            if width is None:
                width = len(record)
                if width < (3 if has_labels else 2):
                    raise InputError(f"line {lineno}: need at least two logit columns"
                                     + (" plus a label" if has_labels else ""))
            elif len(record) != width:
                raise InputError(f"line {lineno}: expected {width} columns, found {len(record)}")
            values = []
            for col, cell in enumerate(record, start=1):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise InputError(f"line {lineno}, column {col}: not a number: {cell!r}") from None
            if has_labels:
                lab = values.pop()
                if not np.isfinite(lab) or lab != int(lab):
                    raise InputError(f"line {lineno}, column {width}: label must be an integer, got {record[-1]!r}")
                labels.append(int(lab))
            rows.append(values)
    if not rows:
        raise InputError(f"{path}: no data rows")
    return LogitDataset(np.array(rows, dtype=np.float64), np.array(labels, dtype=np.int64) if has_labels else None)


def _format_rows(matrix: np.ndarray, labels: Optional[np.ndarray] = None) -> str:
    lines = []
    for i, row in enumerate(matrix):
        cells = [repr(float(v)) for v in row]
        if labels is not None:
            cells.append(str(int(labels[i])))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_logits_csv(path, data: LogitDataset, include_labels: bool = True) -> None:
    atomic_write_text(path, _format_rows(data.logits, data.labels if include_labels else None))


def write_probs_csv(path, probs: np.ndarray) -> None:
    atomic_write_text(path, _format_rows(np.asarray(probs)))


# ---- splitting -------------------------------------------------------------------------------

def split_indices(n: int, calib_fraction: float = 0.2, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    if not 0 < calib_fraction < 1:
        raise DomainError(f"calib_fraction must lie in (0, 1), got {calib_fraction}")
    if n < 2:
        raise InputError("need at least two samples to split")
    perm = np.random.Generator(np.random.PCG64(seed)).permutation(n)
    n_cal = max(1, int(np.floor(calib_fraction * n)))
    return perm[:n_cal], perm[n_cal:]


def split(data: LogitDataset, calib_fraction: float = 0.2, seed: int = 0) -> tuple[LogitDataset, LogitDataset]:
    """Random calibration/test split; the calibration part gets ``max(1, floor(frac * N))`` rows."""
    cal, test = split_indices(data.n_samples, calib_fraction, seed)
    return data.take(cal), data.take(test)


# ---- reports ---------------------------------------------------------------------------------

@dataclass(frozen=True)
class CalibrationReport:
    accuracy: float
    nll_mean: float
    nll_sum: float
    ece_fraction: float
    n_bins: int
    temperature: float
    method: Method
    bins: tuple = ()
    warnings: tuple = ()
    uts_audit: Optional[dict] = None
    n_samples: int = 0

    @property
    def ece_percent(self) -> float:
        return 100.0 * self.ece_fraction

    def table_row(self) -> dict:
        """Accuracy (%), mean NLL, ECE (%) and T, as one row of a results table."""
        return {"Accuracy": 100.0 * self.accuracy, "NLL": self.nll_mean, "ECE": self.ece_percent, "T": self.temperature}

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "n_samples": self.n_samples,
            "accuracy": self.accuracy,
            "nll_mean": self.nll_mean,
            "nll_sum": self.nll_sum,
            "ece_fraction": self.ece_fraction,
            "ece_percent": self.ece_percent,
            "n_bins": self.n_bins,
            "temperature": {"value": self.temperature, "method": Method(self.method).value},
            "bins": [b.to_dict() for b in self.bins],
            "warnings": list(self.warnings),
            "uts_audit": self.uts_audit,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CalibrationReport":
        if d.get("schema") != SCHEMA_VERSION:
            raise InputError(f"unsupported report schema {d.get('schema')!r}")
        return cls(
            accuracy=d["accuracy"], nll_mean=d["nll_mean"], nll_sum=d["nll_sum"],
            ece_fraction=d["ece_fraction"], n_bins=d["n_bins"],
            temperature=d["temperature"]["value"], method=Method(d["temperature"]["method"]),
            bins=tuple(ReliabilityBin.from_dict(b) for b in d["bins"]),
            warnings=tuple(d.get("warnings", ())), uts_audit=d.get("uts_audit"),
            n_samples=d.get("n_samples", 0),
        )

    def to_json(self) -> str:
        return dumps(self.to_dict())


def dumps(obj) -> str:
    # json writes floats with repr(), which round-trips 64-bit values exactly
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def evaluate(data: LogitDataset, T=1.0, n_bins: int = DEFAULT_BINS, uts_audit: Optional[dict] = None) -> CalibrationReport:
    if not data.has_labels:
        raise UsageError("evaluation needs labels")
    if not isinstance(T, Temperature):
        T = Temperature(T)
    probs = tempered_softmax(data, T)
    stats = nll_stats(probs, data.labels)
    bins = reliability_bins(probs, data.labels, n_bins)
    warnings = list(T.warnings)
    if stats.n_clamped:
        warnings.append(f"{stats.n_clamped} true-label probabilities underflowed and were clamped to 1e-300")
    return CalibrationReport(
        accuracy=accuracy(probs, data.labels), nll_mean=stats.mean, nll_sum=stats.total,
        ece_fraction=ece_from_bins(bins), n_bins=int(n_bins), temperature=T.value, method=T.method,
        bins=tuple(bins), warnings=tuple(warnings), uts_audit=uts_audit, n_samples=data.n_samples,
    )


def fit_result_dict(T: Temperature, subsets=None) -> dict:
    """JSON body written by the fit commands."""
    return {
        "schema": SCHEMA_VERSION,
        "temperature": {
            "value": T.value,
            "method": T.method.value,
            "loss_at_optimum": T.loss_at_optimum,
            "evaluations": T.evaluations,
        },
        "warnings": list(T.warnings),
        "uts_audit": None if subsets is None else subsets.audit(),
    }
