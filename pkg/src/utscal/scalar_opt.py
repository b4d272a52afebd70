"""Bounded scalar minimization over T > 0: log-spaced grid scan, then golden section."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import DomainError, OptimizationError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OptimizerConfig:
    t_min: float = 0.05
    t_max: float = 20.0
    grid_points: int = 200
    refine_tol: float = 1e-4
    max_refine_iters: int = 200

    def __post_init__(self):
        if not (0 < self.t_min < self.t_max) or not math.isfinite(self.t_max):
            raise DomainError(f"need 0 < t_min < t_max, got [{self.t_min}, {self.t_max}]")
        if self.grid_points < 3:
            raise DomainError("grid_points must be >= 3")
        if not self.refine_tol > 0:
            raise DomainError("refine_tol must be > 0")
        if self.max_refine_iters < 0:
            raise DomainError("max_refine_iters must be >= 0")

    def grid(self) -> np.ndarray:
        return np.geomspace(self.t_min, self.t_max, self.grid_points)


@dataclass(frozen=True)
class ScalarMinimum:
    t_star: float
    f_star: float
    evaluations: int
    warnings: tuple = field(default_factory=tuple)
    grid_min: float = math.inf

    def __iter__(self):
        # lets callers unpack ``t, f, n = minimize_scalar(...)``
        return iter((self.t_star, self.f_star, self.evaluations))


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float, max_iter: int,
                   trace: list | None = None):
    """Golden-section search on [lo, hi] until the bracket is at most ``tol`` wide.

    Returns ``(x, fx, n_evals, n_iters)`` for the best point evaluated. If
    ``trace`` is a list, every bracket ``(a, b)`` visited is appended to it.
    """
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    it = 0
    if trace is not None:
        trace.append((a, b))
    while (b - a) > tol and it < max_iter:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        if trace is not None:
            trace.append((a, b))
        evals += 1
        it += 1
    if fc <= fd:
        return c, fc, evals, it
    return d, fd, evals, it


def minimize_scalar(f: Callable[[float], float], cfg: OptimizerConfig | None = None) -> ScalarMinimum:
    """Minimize ``f`` over ``[cfg.t_min, cfg.t_max]``.

    ``f`` is first scanned on a log-spaced grid; the first grid minimum is then
    refined by golden section inside its two neighbouring grid intervals.
    Non-finite values count as +inf; more than half of them is an error.
    """
    cfg = cfg or OptimizerConfig()
    grid = cfg.grid()

    def safe(t: float) -> float:
        v = float(f(float(t)))
        return v if math.isfinite(v) else math.inf

    values = np.array([safe(t) for t in grid])
    bad = ~np.isfinite(values)
    if bad.sum() * 2 > len(grid):
        shown = ", ".join(f"{t:.6g}" for t in grid[bad][:10])
        raise OptimizationError(
            f"objective non-finite at {int(bad.sum())}/{len(grid)} grid points (T = {shown}"
            + (", ..." if bad.sum() > 10 else "") + ")")

    i = int(np.argmin(values))  # first minimum wins
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    t, ft, n_refine, _ = golden_section(safe, lo, hi, cfg.refine_tol, cfg.max_refine_iters)
    if not ft <= values[i]:
        t, ft = float(grid[i]), float(values[i])

    warnings = []
    if t - cfg.t_min <= cfg.refine_tol or cfg.t_max - t <= cfg.refine_tol:
        warnings.append(f"minimizer T={t:.6g} is at the search boundary [{cfg.t_min}, {cfg.t_max}]")
    return ScalarMinimum(float(t), float(ft), len(grid) + n_refine, tuple(warnings), float(values[i]))
