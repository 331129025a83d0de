"""Campaign driver: determinism, worker invariance, paired-sample coupling."""

import numpy as np
import pytest

from fdmimo.montecarlo import (EmpiricalCdf, empirical_cdf, run_campaign,
                               run_drop)
from fdmimo.scenario import default_scenario


def _small_scenario(**overrides):
    base = dict(tiers=1, n_antennas=16, k_downlink_per_cell=2,
                k_uplink_per_cell=2, n_drops=6, base_seed=123)
    base.update(overrides)
    return default_scenario().with_overrides(**base)


def test_run_drop_is_deterministic():
    scenario = default_scenario()
    assert run_drop(scenario, 5) == run_drop(scenario, 5)


def test_run_drop_varies_with_index_and_seed():
    scenario = _small_scenario()
    assert run_drop(scenario, 0) != run_drop(scenario, 1)
    assert run_drop(scenario, 0) != run_drop(
        scenario.with_overrides(base_seed=124), 0)


def test_run_drop_rejects_unknown_average_domain():
    with pytest.raises(ValueError):
        run_drop(_small_scenario(), 0, average="median")


def test_db_average_never_exceeds_linear_average():
    # arithmetic mean dominates the geometric mean drop by drop
    scenario = _small_scenario()
    for drop in range(4):
        linear = run_drop(scenario, drop, average="linear")[0]
        geometric = run_drop(scenario, drop, average="db")[0]
        assert geometric <= linear


def test_effective_se_is_gross_se_without_overhead():
    scenario = _small_scenario(pilot_overhead_fraction_beta=0.0)
    _, gross, effective = run_drop(scenario, 0)
    assert effective == gross


def test_campaign_matches_per_drop_calls():
    scenario = _small_scenario()
    stats = run_campaign(scenario)
    assert stats.n_drops == 6
    for i in range(6):
        avg_db, gross, eff = run_drop(scenario, i)
        assert stats.samples[i] == avg_db
        assert stats.gross_se_samples[i] == gross
        assert stats.effective_se_samples[i] == eff


def test_campaign_invariant_under_worker_count():
    scenario = _small_scenario(n_drops=8)
    serial = run_campaign(scenario, workers=1)
    parallel = run_campaign(scenario, workers=3)
    assert np.array_equal(serial.samples, parallel.samples)
    assert np.array_equal(serial.gross_se_samples, parallel.gross_se_samples)
    assert np.array_equal(serial.effective_se_samples,
                          parallel.effective_se_samples)


def test_summary_layout():
    stats = run_campaign(_small_scenario())
    summary = stats.summary()
    assert summary["n_drops"] == 6
    q = summary["sqinr_db_quantiles"]
    assert list(q) == ["5", "25", "50", "75", "95"]
    assert q["5"] <= q["25"] <= q["50"] <= q["75"] <= q["95"]
    assert summary["mean_sqinr_db"] == pytest.approx(np.mean(stats.samples))


def test_more_bits_help_every_drop():
    # counter addressing pairs the drops exactly, so the quantizer gain is
    # the only difference and the per-drop ordering is deterministic
    coarse = _small_scenario(adc_bits=1)
    fine = _small_scenario(adc_bits=5)
    ideal = _small_scenario(adc_bits=float("inf"))
    for drop in range(4):
        a = run_drop(coarse, drop)[0]
        b = run_drop(fine, drop)[0]
        c = run_drop(ideal, drop)[0]
        assert a < b < c


def test_more_antennas_help_every_drop():
    small = _small_scenario(n_antennas=16)
    large = _small_scenario(n_antennas=64)
    for drop in range(4):
        assert run_drop(small, drop)[0] < run_drop(large, drop)[0]


def test_more_uplink_users_hurt_every_drop():
    # existing users' draws are untouched when the population grows; the
    # added users only add interference terms
    quiet = _small_scenario(k_uplink_per_cell=2)
    loud = _small_scenario(k_uplink_per_cell=8)
    for drop in range(4):
        assert run_drop(loud, drop)[0] < run_drop(quiet, drop)[0]


def test_empirical_cdf_basics():
    cdf = empirical_cdf([3.0, 1.0, 2.0])
    assert cdf.values.tolist() == [1.0, 2.0, 3.0]
    assert cdf.probabilities.tolist() == pytest.approx([1 / 3, 2 / 3, 1.0])
    assert cdf.at(0.5) == 0.0
    assert cdf.at(2.0) == pytest.approx(2 / 3)
    assert cdf.at(99.0) == 1.0
    assert cdf.quantile(0.0) == 1.0
    assert cdf.quantile(0.5) == 2.0
    assert cdf.quantile(1.0) == 3.0
    assert list(cdf) == [(1.0, pytest.approx(1 / 3)), (2.0, pytest.approx(2 / 3)),
                         (3.0, 1.0)]


def test_empirical_cdf_validation():
    with pytest.raises(ValueError):
        empirical_cdf([])
    with pytest.raises(ValueError):
        empirical_cdf([1.0]).quantile(1.5)
