import math

import numpy as np
import pytest

from utscal.core import DomainError, OptimizationError
from utscal.scalar_opt import OptimizerConfig, golden_section, minimize_scalar


@pytest.mark.parametrize("f,expected", [
    (lambda t: (t - 2.0) ** 2, 2.0),
    (lambda t: math.log(t) ** 2, 1.0),
    (lambda t: (t - 7.3) ** 4 + 1.0, 7.3),
    (lambda t: abs(t - 0.4), 0.4),
])
def test_analytic_minima(f, expected):
    res = minimize_scalar(f, OptimizerConfig())
    assert res.t_star == pytest.approx(expected, abs=1e-4)
    assert not res.warnings


def test_result_unpacks():
    t, f, n = minimize_scalar(lambda t: (t - 2.0) ** 2)
    assert t == pytest.approx(2.0, abs=1e-4) and f >= 0 and n > 200


def test_never_worse_than_grid():
    rng = np.random.default_rng(4)
    cfg = OptimizerConfig()
    for _ in range(20):
        a, b, c = rng.uniform(0.1, 10, 3)
        f = lambda t: math.sin(a * t) + 0.1 * (t - b) ** 2 + c
        res = minimize_scalar(f, cfg)
        assert res.f_star <= min(f(t) for t in cfg.grid())


def test_deterministic():
    f = lambda t: (math.log(t) - 0.3) ** 2 + 0.01 * math.cos(40 * t)
    assert minimize_scalar(f) == minimize_scalar(f)


def test_golden_section_bracket_shrinks():
    trace = []
    x, _, _, n = golden_section(lambda t: (t - 1.234) ** 2, 0.0, 3.0, 1e-8, 500, trace)
    widths = [b - a for a, b in trace]
    assert len(widths) == n + 1
    assert all(w1 < w0 for w0, w1 in zip(widths, widths[1:]))
    assert widths[-1] <= 1e-8
    assert x == pytest.approx(1.234, abs=1e-8)


def test_boundary_hit_is_reported():
    res = minimize_scalar(lambda t: t, OptimizerConfig(t_min=0.5, t_max=5.0))
    assert res.t_star == pytest.approx(0.5, abs=1e-4)
    assert res.warnings and "boundary" in res.warnings[0]
    res = minimize_scalar(lambda t: -t, OptimizerConfig(t_min=0.5, t_max=5.0))
    assert res.t_star == pytest.approx(5.0, abs=1e-4)
    assert res.warnings


def test_mostly_non_finite_objective_fails():
    with pytest.raises(OptimizationError, match="non-finite"):
        minimize_scalar(lambda t: math.nan if t < 10 else t)


def test_some_non_finite_values_are_tolerated():
    res = minimize_scalar(lambda t: math.inf if t < 0.2 else (t - 3) ** 2)
    assert res.t_star == pytest.approx(3.0, abs=1e-4)


@pytest.mark.parametrize("kwargs", [
    dict(t_min=0.0), dict(t_min=2.0, t_max=1.0), dict(grid_points=2), dict(refine_tol=0.0),
])
def test_config_validation(kwargs):
    with pytest.raises(DomainError):
        OptimizerConfig(**kwargs)


def test_grid_is_log_spaced():
    g = OptimizerConfig().grid()
    assert len(g) == 200 and g[0] == pytest.approx(0.05) and g[-1] == pytest.approx(20.0)
    ratios = g[1:] / g[:-1]
    assert np.allclose(ratios, ratios[0])
