"""
Exit criteria.  Each test carries a ``criterion`` marker; the terminal
summary prints one PASS/FAIL line per criterion.

Run only these with ``pytest tests/test_acceptance.py -v``.
"""

import dataclasses
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from censored_tail.distributions import (
    CensoredSample,
    CensorModel,
    TailModel,
    a2_diagnostic,
    expected_censor_rate,
    lambda_prob,
    sample,
    simulate_censored,
    survival,
)
from censored_tail.estimators import (
    TuningError,
    derive_tuning,
    empirical_survival,
    empirical_uncensored_survival,
    estimate_gamma_x,
    manual_tuning,
    rho_hat,
    zeta_hat,
    zeta_hat_integral,
)
from censored_tail.montecarlo import BUILTIN_CASES, builtin_cases, get_case, run_case, run_sweep, summary_stats

pytestmark = pytest.mark.acceptance

LG = TailModel.log_gamma


def report(line):
    sys.stdout.write(line + "\n")


@pytest.fixture(scope="module")
def builtin_summaries():
    return {c.case_id: run_case(c) for c in builtin_cases()}


# 1 -------------------------------------------------------------------------

@pytest.mark.criterion(1, "censor-rate reproduction for the six built-in cases (±0.015)")
@pytest.mark.parametrize("case_id", list(BUILTIN_CASES))
def test_censor_rate_reproduction(builtin_summaries, case_id):
    summary = builtin_summaries[case_id]
    target = BUILTIN_CASES[case_id][-1]
    report(f"case {case_id}: mean censor rate {summary.mean_censor_rate:.4f} (table {target})")
    assert abs(summary.mean_censor_rate - target) <= 0.015


@pytest.mark.criterion(1, "censor-rate reproduction for the six built-in cases (±0.015)")
@pytest.mark.parametrize("case_id", list(BUILTIN_CASES))
def test_censor_rate_matches_quadrature(builtin_summaries, case_id):
    summary = builtin_summaries[case_id]
    p = expected_censor_rate(summary.config.cm)
    draws = len(summary.records) * summary.config.n
    assert abs(summary.mean_censor_rate - p) <= 3 * math.sqrt(p * (1 - p) / draws)


# 2 -------------------------------------------------------------------------

@pytest.mark.criterion(2, "integral and sum forms of zeta agree to 1e-12 on 1000 random samples")
def test_form_identity():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 10_001))
        model = LG(float(rng.uniform(0.1, 3.0)), float(rng.uniform(0.3, 3.0)))
        z = sample(model, n, rng)
        delta = rng.integers(0, 2, size=n)
        s = CensoredSample(z, delta)
        log_t = rng.uniform(np.log(z.min()) - 0.5, np.log(z.max()) + 0.1)
        tp = manual_tuning(n, float(np.exp(log_t)), 1e-9, 0.5)
        a, cut_a = zeta_hat(s, tp)
        b, cut_b = zeta_hat_integral(s, tp)
        assert cut_a == cut_b
        if a != b:
            worst = max(worst, abs(a - b) / max(abs(a), abs(b)))
    report(f"worst relative difference {worst:.3e}")
    assert worst <= 1e-12


# 3 -------------------------------------------------------------------------

@pytest.mark.criterion(3, "pure-Pareto zeta mean within 3 standard errors of gamma_Z")
def test_exponential_oracle():
    gamma_z = 2.0 / 3.0
    n, reps = 100_000, 200
    model = TailModel.pareto(gamma_z)
    tp = derive_tuning(n, 0.05, gamma0=0.3)
    values, counts = [], []
    for r in range(reps):
        s = CensoredSample(sample(model, n, np.random.SeedSequence(3, spawn_key=(r,))), np.ones(n, dtype=np.int8))
        value, cut = zeta_hat(s, tp)
        assert not cut
        values.append(value)
        counts.append(np.count_nonzero(s.z >= tp.t))
    se = gamma_z / math.sqrt(np.mean(counts) * reps)
    mean = float(np.mean(values))
    report(f"mean zeta {mean:.6f} vs gamma_Z {gamma_z:.6f}; 3 SE = {3 * se:.2e}")
    assert abs(mean - gamma_z) <= 3 * se


# 4 -------------------------------------------------------------------------

@pytest.mark.criterion(4, "rho within 0.02 of 2/3 in at least 45 of 50 replications")
def test_rho_limit():
    cm = CensorModel(TailModel.pareto(1.0), TailModel.pareto(2.0))
    n = 100_000
    tp = derive_tuning(n, 0.05, gamma0=0.3)
    hits = 0
    for r in range(50):
        value, _ = rho_hat(simulate_censored(cm, n, np.random.SeedSequence(4, spawn_key=(r,))), tp)
        hits += abs(value - 2.0 / 3.0) < 0.02
    report(f"{hits}/50 replications within 0.02 of 2/3")
    assert hits >= 45


# 5 -------------------------------------------------------------------------

@pytest.mark.criterion(5, "case 2, beta=0.1: median relative error falls from n=2500 to n=40000")
def test_convergence_trend():
    config = dataclasses.replace(get_case("2"), beta_grid=(0.1,))
    summary = run_sweep(config, n_values=(2500, 10000, 40000))
    medians = {row.n: row.median for row in summary.rows}
    report("median relative error by n: " + ", ".join(f"{n}: {m:.4f}" for n, m in medians.items()))
    assert medians[40000] < medians[2500]


# 6 -------------------------------------------------------------------------

@pytest.mark.criterion(6, "case 1: error-minimising beta is interior to the default grid")
def test_u_shape_in_beta(builtin_summaries):
    summary = builtin_summaries["1"]
    means = [row.mean for row in summary.rows]
    best = int(np.argmin(means))
    report("mean relative error by beta: " + ", ".join(f"{r.beta:.4f}: {r.mean:.4f}" for r in summary.rows))
    report(f"argmin index {best} of {len(means)}")
    assert best not in (0, len(means) - 1)


# 7 -------------------------------------------------------------------------

@pytest.mark.criterion(7, "A2 diagnostic times log x bounded by |beta_K - 1| for log-gamma laws")
@pytest.mark.parametrize("shape", [0.5, 1.0, 1.2, 1.4, 1.5, 2.0])
def test_a2_bound(shape):
    worst = -math.inf
    for gamma in (0.4, 0.476, 0.5, 1.0, 2.0):
        model = LG(gamma, shape)
        for log_x in np.linspace(2.0, 50.0, 49):
            value = a2_diagnostic(model, math.exp(log_x)) * log_x
            worst = max(worst, value - abs(shape - 1.0))
            assert value <= abs(shape - 1.0) + 1e-6
    report(f"shape {shape}: max excess over bound {worst:.3e}")


# 8 -------------------------------------------------------------------------

@pytest.mark.criterion(8, "simulate --case 1 --seed 7 is byte-identical across runs and thread counts")
def test_cli_determinism(tmp_path):
    many = str(max(os.cpu_count() or 1, 4))
    snapshots = []
    for i, threads in enumerate(("1", many, "1", many)):
        out = tmp_path / f"run{i}"
        result = subprocess.run(
            [sys.executable, "-m", "censored_tail", "simulate", "--case", "1", "--seed", "7",
             "--threads", threads, "--out", str(out)],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0, result.stderr
        snapshots.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    assert len(snapshots[0]) == 2
    assert all(snap == snapshots[0] for snap in snapshots[1:])


# 9 -------------------------------------------------------------------------

E = math.e
TOY = CensoredSample([1.0, 2.0, 3.0, 4.0], [1, 0, 1, 1])
LOGS = CensoredSample([2 * E, 1.0, 2 * E**2], [1, 1, 1])
PARETO_12 = CensorModel(TailModel.pareto(1.0), TailModel.pareto(2.0))
CASE_1 = CensorModel(LG(2.0, 1.2), LG(2.0, 1.4))


def _raises(fn, exc, fragment):
    try:
        fn()
    except exc as err:
        return fragment in str(err)
    return False


def _tp(t, s=0.1, h=0.3):
    return manual_tuning(16, t, s, h)


HAND_EXAMPLES = {
    "survival LogGamma(0.5, 1) at e = e^-2": lambda: math.isclose(survival(LG(0.5, 1.0), E), math.exp(-2), rel_tol=1e-14),
    "survival at support_min = 1": lambda: survival(LG(0.7, 1.3), 1.0) == 1.0 and survival(TailModel.pareto(1.0, 3.0), 3.0) == 1.0,
    "survival LogGamma(0.5, 2) at e = 3e^-2": lambda: math.isclose(survival(LG(0.5, 2.0), E), 3 * math.exp(-2), rel_tol=1e-12),
    "sample LogGamma(2, 1): mean log within 0.02 of 2": lambda: abs(np.log(sample(LG(2.0, 1.0), 100_000, 1)).mean() - 2.0) < 0.02,
    "sample respects support": lambda: bool(np.all(sample(TailModel.pareto(1.0, 5.0), 10_000, 2) >= 5.0)),
    "sample is deterministic": lambda: np.array_equal(sample(LG(1.0, 1.5), 100, 9), sample(LG(1.0, 1.5), 100, 9)),
    "simulate_censored n=1000 invariants": lambda: simulate_censored(CASE_1, 1000, 3).n == 1000,
    "identical Pareto laws: mean delta 0.5 ± 0.005": lambda: abs(
        simulate_censored(CensorModel(TailModel.pareto(1.0), TailModel.pareto(1.0)), 100_000, 4).delta.mean() - 0.5
    ) < 0.005,
    "lambda symmetric Pareto = 0.5": lambda: lambda_prob(CensorModel(TailModel.pareto(2.0), TailModel.pareto(2.0)), 7.0) == 0.5,
    "lambda Pareto(1), Pareto(2) = 2/3": lambda: math.isclose(lambda_prob(PARETO_12, 13.0), 2 / 3, rel_tol=1e-14),
    "lambda case 1 at 1e6 within 0.05 of 0.5": lambda: abs(lambda_prob(CASE_1, 1e6) - 0.5) < 0.05,
    "censor rate of identical laws = 0.5": lambda: math.isclose(
        expected_censor_rate(CensorModel(LG(1.0, 1.5), LG(1.0, 1.5))), 0.5, abs_tol=1e-8
    ),
    "a2 of Pareto = 0": lambda: a2_diagnostic(LG(1.0, 1.0), 100.0) == 0.0,
    "a2 LogGamma(1.5) at e^10 <= 0.05": lambda: a2_diagnostic(LG(1.0, 1.5), math.exp(10)) <= 0.05,
    "a2 LogGamma(2) at e^100 <= 0.01": lambda: a2_diagnostic(LG(1.0, 2.0), math.exp(100)) <= 0.01,
    "p([1,2,3,4], 2) = 0.75": lambda: empirical_survival(TOY, 2.0) == 0.75,
    "p(x <= min z) = 1": lambda: empirical_survival(TOY, 1.0) == 1.0,
    "p([1,2,3,4], 5) = 0": lambda: empirical_survival(TOY, 5.0) == 0.0,
    "q([1,2,3,4], [1,0,1,1], 2) = 0.5": lambda: empirical_uncensored_survival(TOY, 2.0) == 0.5,
    "q = p when all uncensored": lambda: all(
        empirical_uncensored_survival(LOGS, x) == empirical_survival(LOGS, x) for x in (0.5, 2.0, 6.0, 20.0)
    ),
    "q = 0 when all censored": lambda: empirical_uncensored_survival(CensoredSample([1.0, 2.0], [0, 0]), 0.5) == 0.0,
    "derive_tuning A3 defaults": lambda: (
        lambda tp: math.isclose(tp.t, 1.5849, abs_tol=1e-4)
        and tp.c == 0.375
        and math.isclose(tp.s, 0.0316, abs_tol=1e-4)
        and math.isclose(tp.h, 1 / math.log(math.log(10000)), rel_tol=1e-15)
    )(derive_tuning(10000, 0.05, 0.2)),
    "derive_tuning beta=0.15, gamma0=0.2 rejected": lambda: _raises(
        lambda: derive_tuning(10000, 0.15, 0.2), TuningError, "beta ≥ gamma0/2"
    ),
    "derive_tuning NoA3": lambda: (
        lambda tp: math.isclose(tp.t, 84.83, abs_tol=0.01) and math.isclose(tp.s, 0.1, rel_tol=1e-14)
    )(derive_tuning(10000, 2.0, c=0.25)),
    "rho toy = 2/3": lambda: rho_hat(TOY, _tp(2.0)) == (0.5 / 0.75, False),
    "rho truncated when p < s": lambda: rho_hat(CensoredSample([1.0] * 19 + [5.0], [1] * 20), _tp(2.0)) == (0.0, True),
    "rho = 1 when all uncensored": lambda: rho_hat(LOGS, _tp(2.0)) == (1.0, False),
    "zeta [2e, 1, 2e^2], t=2 = 1.5": lambda: math.isclose(zeta_hat(LOGS, _tp(2.0))[0], 1.5, rel_tol=1e-15),
    "zeta with no exceedances = (0, True)": lambda: zeta_hat(LOGS, _tp(100.0)) == (0.0, True),
    "zeta with all z = t = (0, False)": lambda: zeta_hat(CensoredSample([2.0] * 3, [1] * 3), _tp(2.0)) == (0.0, False),
    "zeta integral [2e, 1, 2e^2], t=2 = 1.5": lambda: math.isclose(zeta_hat_integral(LOGS, _tp(2.0))[0], 1.5, rel_tol=1e-15),
    "zeta integral truncated = (0, True)": lambda: zeta_hat_integral(LOGS, _tp(100.0)) == (0.0, True),
    "gamma_x = 1.5 / 0.5 = 3": lambda: math.isclose(
        estimate_gamma_x(CensoredSample([2 * E, 2 * E**2, 1.0, 1.0], [1, 0, 1, 1]), _tp(2.0)).gamma_x_hat, 3.0, rel_tol=1e-15
    ),
    "gamma_x truncated by h": lambda: (
        lambda r: r.gamma_x_hat == 0.0 and r.truncated_by_h
    )(estimate_gamma_x(CensoredSample([3.0] * 5, [1, 0, 0, 0, 0]), _tp(2.0))),
    "gamma_x cascaded truncation": lambda: (
        lambda r: (r.rho_hat, r.zeta_hat, r.gamma_x_hat) == (0.0, 0.0, 0.0) and r.truncated_by_s
    )(estimate_gamma_x(CensoredSample([1.0] * 19 + [5.0], [1] * 20), _tp(2.0))),
    "summary_stats [0.1, 0.2, 0.3]": lambda: np.allclose(summary_stats([0.1, 0.2, 0.3]), (0.1, 0.2, 0.3), rtol=1e-15),
    "summary_stats [0.5]": lambda: summary_stats([0.5]) == (0.5, 0.5, 0.5),
    "builtin grids below gamma0/2": lambda: all(all(b < c.gamma0 / 2 for b in c.beta_grid) for c in builtin_cases()),
    "single replication: min = mean = max": lambda: (
        lambda row: row.min == row.mean == row.max
    )(run_case(dataclasses.replace(get_case("1"), replications=1, beta_grid=(0.05,))).rows[0]),
}


@pytest.mark.criterion(9, "every hand-computed example holds exactly as stated")
@pytest.mark.parametrize("name", list(HAND_EXAMPLES))
def test_hand_example(name):
    assert HAND_EXAMPLES[name]()
