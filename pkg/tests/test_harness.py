import math

import numpy as np
import pytest
from scipy import integrate

from conftest import constant_barrier_cdf, ks_statistic
from fptsim import harness
from fptsim.harness import (
    ExperimentConfig,
    empirical_cdf,
    psi_curve,
    run_monte_carlo,
    run_trials,
    sandwich_check,
    steps_vs_epsilon,
    steps_vs_horizon,
    summarize,
)

PI = math.pi
COSINE_SPEC = "cosine:alpha=3.5,beta=3,omega=1.5707963267948966"


def psi_quadrature(a):
    g = lambda u: u * np.log1p(u) / (1 + u) ** 1.5 * np.exp(-a * u * u / (2 * (1 + u)))
    v, _ = integrate.quad(g, 0, np.inf, limit=300)
    return -math.sqrt(a / (2 * PI)) * v


def test_constant_boundary_cdf_against_reflection_principle():
    cfg = ExperimentConfig(boundary="const:c=1", algorithm="algo1",
                           epsilon=0.5, n_trials=10 ** 5, master_seed=3)
    res = run_trials(cfg)
    assert ks_statistic(res.tau, constant_barrier_cdf) < 1.36 / math.sqrt(10 ** 5)


def test_single_trial_summary_is_the_sample():
    cfg = ExperimentConfig(boundary="const:c=1", algorithm="algo1",
                           epsilon=0.5, n_trials=1, master_seed=4)
    res = run_trials(cfg)
    s = summarize(cfg, res)
    assert s.n_trials == 1
    assert s.mean_tau == res.tau[0]
    assert s.stderr_tau == 0.0
    assert s.mean_steps == res.steps[0]


@pytest.mark.parametrize("cfg", [
    ExperimentConfig(boundary="sqrt:alpha=1", algorithm="algo1",
                     epsilon=2.0 ** -8, n_trials=1000, master_seed=11),
    ExperimentConfig(boundary=COSINE_SPEC, algorithm="algo2",
                     epsilon=2.0 ** -8, horizon=20.0, n_trials=1000,
                     master_seed=12),
    ExperimentConfig(boundary="ou:alpha=2,beta=1,omega=6.283185307179586,"
                              "lambda=0.5,x0=0",
                     algorithm="ou", epsilon=2.0 ** -8, horizon=5.0,
                     n_trials=1000, master_seed=13),
    ExperimentConfig(boundary="ou:alpha=1,beta=0,omega=1,lambda=0,x0=0",
                     algorithm="euler-bridge", dt=0.25, horizon=10.0,
                     n_trials=1000, master_seed=14),
], ids=("algo1", "algo2", "ou", "euler"))
def test_worker_count_does_not_change_results(cfg):
    one = run_trials(cfg, workers=1)
    many = run_trials(cfg, workers=8)
    assert np.array_equal(one.tau, many.tau)
    assert np.array_equal(one.steps, many.steps)
    assert np.array_equal(one.truncated, many.truncated)
    assert np.array_equal(one.exit_codes, many.exit_codes)


def test_rerun_is_deterministic():
    cfg = ExperimentConfig(boundary=COSINE_SPEC, algorithm="algo2",
                           epsilon=2.0 ** -6, horizon=20.0, n_trials=500,
                           master_seed=9)
    assert np.array_equal(run_trials(cfg).tau, run_trials(cfg).tau)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(boundary="const:c=1", algorithm="warp",
                         n_trials=10, master_seed=0)
    with pytest.raises(ValueError):
        ExperimentConfig(boundary="const:c=1", algorithm="algo1",
                         n_trials=0, master_seed=0)
    with pytest.raises(ValueError):
        harness.resolve(ExperimentConfig(boundary="const:c=1",
                                         algorithm="algo1", n_trials=1,
                                         master_seed=0))  # missing epsilon
    with pytest.raises(ValueError):
        harness.resolve(ExperimentConfig(boundary="const:c=1",
                                         algorithm="ou", epsilon=0.1,
                                         horizon=1.0, n_trials=1,
                                         master_seed=0))  # not an ou: spec


def test_cdf_is_right_continuous_step_function():
    samples = np.array([1.0, 1.0, 2.0, 3.0])
    grid = np.array([0.5, 1.0, 1.5, 2.0, 3.0, 4.0])
    f, se = empirical_cdf(samples, grid)
    assert f.tolist() == [0.0, 0.5, 0.5, 0.75, 1.0, 1.0]
    assert np.all(np.diff(f) >= 0)
    assert np.all(se >= 0)


def test_summary_cdf_monotone_and_bounded():
    cfg = ExperimentConfig(boundary=COSINE_SPEC, algorithm="algo2",
                           epsilon=2.0 ** -6, horizon=20.0, n_trials=2000,
                           master_seed=10)
    s = run_monte_carlo(cfg)
    assert np.all(np.diff(s.cdf_f) >= 0)
    assert 0.0 <= s.truncation_rate <= 1.0
    assert s.cdf_t[0] == 0.0
    assert s.cdf_t[-1] == 20.0


def test_steps_vs_epsilon_algo1_monotone():
    cfg = ExperimentConfig(boundary="sqrt:alpha=1", algorithm="algo1",
                           epsilon=1.0, n_trials=3000, master_seed=21)
    rows = steps_vs_epsilon(cfg, range(1, 9))
    means = [r.mean_steps for r in rows]
    assert all(a <= b for a, b in zip(means, means[1:]))
    assert [r.epsilon for r in rows] == [0.5 ** n for n in range(1, 9)]
    ratios = [r.mean_steps / math.sqrt(r.x * math.log(2)) for r in rows]
    assert max(ratios) < 3.0 * ratios[-1]


def test_steps_vs_epsilon_horizon_effect():
    # matched seeds: a larger truncation horizon only lengthens trials
    base = dict(boundary=COSINE_SPEC, algorithm="algo2", epsilon=2.0 ** -4,
                n_trials=2000, master_seed=22)
    rows20 = steps_vs_epsilon(ExperimentConfig(horizon=20.0, **base), range(1, 7))
    rows100 = steps_vs_epsilon(ExperimentConfig(horizon=100.0, **base), range(1, 7))
    for r20, r100 in zip(rows20, rows100):
        assert r100.mean_steps > r20.mean_steps


def test_steps_vs_epsilon_validates_schedule():
    cfg = ExperimentConfig(boundary="sqrt:alpha=1", algorithm="algo1",
                           epsilon=1.0, n_trials=10, master_seed=0)
    with pytest.raises(ValueError):
        steps_vs_epsilon(cfg, [])
    with pytest.raises(ValueError):
        steps_vs_epsilon(cfg, [0, 1])


def test_steps_vs_horizon_monotone():
    cfg = ExperimentConfig(boundary=COSINE_SPEC, algorithm="algo2",
                           epsilon=2.0 ** -6, horizon=20.0, n_trials=2000,
                           master_seed=23)
    rows = steps_vs_horizon(cfg, [5.0, 10.0, 20.0, 40.0])
    means = [r.mean_steps for r in rows]
    assert all(a <= b for a, b in zip(means, means[1:]))
    single = steps_vs_horizon(cfg, [10.0])
    assert len(single) == 1
    assert single[0].mean_steps == means[1]
    again = steps_vs_horizon(cfg, [5.0, 10.0, 20.0, 40.0])
    assert [r.mean_steps for r in again] == means


def test_sandwich_algo1_sqrt():
    cfg = ExperimentConfig(boundary="sqrt:alpha=1", algorithm="algo1",
                           epsilon=2.0 ** -6, n_trials=2 * 10 ** 4,
                           master_seed=31)
    rep = sandwich_check(cfg, eps_coarse=2.0 ** -6, eps_fine=2.0 ** -14)
    assert rep.passed
    assert rep.bound == pytest.approx(3.0 * math.sqrt(2.0 ** -6 / (2 * PI)))
    assert rep.grid[0] >= 2.0 ** -6  # the bound only speaks for t >= eps


def test_sandwich_algo2_cosine():
    cfg = ExperimentConfig(boundary=COSINE_SPEC, algorithm="algo2",
                           epsilon=2.0 ** -6, horizon=20.0,
                           n_trials=2 * 10 ** 4, master_seed=32)
    rep = sandwich_check(cfg, eps_coarse=2.0 ** -6, eps_fine=2.0 ** -10)
    assert rep.passed
    rho = 3.0 * PI / 2
    assert rep.bound == pytest.approx((1.0 + rho) * math.sqrt(2.0 * 2.0 ** -6 / PI))


def test_sandwich_requires_fine_proxy():
    cfg = ExperimentConfig(boundary="sqrt:alpha=1", algorithm="algo1",
                           epsilon=2.0 ** -6, n_trials=100, master_seed=0)
    with pytest.raises(ValueError):
        sandwich_check(cfg, eps_coarse=2.0 ** -6, eps_fine=2.0 ** -8)


def test_psi_curve_bounds():
    alphas = [0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0]
    rows = psi_curve(alphas, 10 ** 5, master_seed=41)
    assert all(r.psi < 0 for r in rows)
    # upper envelope -c * min(1/alpha, 1) with c = 0.0241
    for r in rows:
        assert r.psi <= -0.0241 * min(1.0 / r.alpha, 1.0) + 3.0 * r.stderr
    r05 = next(r for r in rows if r.alpha == 0.5)
    assert r05.psi <= -0.0241 + 3.0 * r05.stderr


def test_psi_curve_matches_quadrature():
    for alpha in (0.5, 1.0, 10.0):
        row = psi_curve([alpha], 10 ** 5, master_seed=42)[0]
        assert row.psi == pytest.approx(psi_quadrature(alpha),
                                        abs=4.0 * row.stderr)


def test_psi_curve_validates_alpha():
    with pytest.raises(ValueError):
        psi_curve([0.0], 1000, master_seed=0)
