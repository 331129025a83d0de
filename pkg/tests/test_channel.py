"""Large-scale gains, network realizations, link-budget assembly."""

import numpy as np
import pytest

from fdmimo.channel import (LinkBudget, assemble_link_budget, large_scale_gain,
                            realize_network, snr_terms)
from fdmimo.quantization import alpha_for_bits
from fdmimo.rng import stream_for_drop
from fdmimo.scenario import default_scenario, noise_power_w


def test_gain_splits_into_pathloss_and_shadow():
    gen = np.random.default_rng(0)
    g = large_scale_gain(200.0, 2.5, 8.0, 15.848931924611133, gen)
    assert g.gain == pytest.approx(15.848931924611133 * g.shadow / 200.0 ** 2.5)
    assert g.distance_m == 200.0


def test_gain_without_shadowing_is_deterministic():
    gen = np.random.default_rng(0)
    g = large_scale_gain(100.0, 2.5, 0.0, 2.0, gen)
    assert g.shadow == 1.0
    assert g.gain == pytest.approx(2.0 / 100.0 ** 2.5)


def test_gain_rejects_nonpositive_distance():
    gen = np.random.default_rng(0)
    with pytest.raises(ValueError):
        large_scale_gain(0.0, 2.5, 8.0, 1.0, gen)


def test_shadow_moments():
    gen = np.random.default_rng(1)
    n = 200000
    sigma = 8.0
    shadows_db = np.array([10.0 * np.log10(
        large_scale_gain(1.0, 2.5, sigma, 1.0, gen).shadow) for _ in range(n)])
    assert abs(shadows_db.mean()) < 4.0 * sigma / np.sqrt(n)
    assert shadows_db.std() == pytest.approx(sigma, rel=0.01)


def test_snr_terms():
    assert snr_terms(2.0, 10.0, 4.0) == 5.0
    out = snr_terms(np.array([1.0, 2.0]), 3.0, 1.5)
    assert np.allclose(out, [2.0, 4.0])
    with pytest.raises(ValueError):
        snr_terms(1.0, 1.0, 0.0)


@pytest.fixture(scope="module")
def default_realization():
    scenario = default_scenario()
    return scenario, realize_network(scenario, stream_for_drop(42, 0))


def test_realization_shapes(default_realization):
    scenario, real = default_realization
    assert len(real.sites) == 19
    assert real.contamination_cells.tolist() == [8, 10, 11, 14, 15, 17]
    assert real.observed_cells.tolist() == [0, 8, 10, 11, 14, 15, 17]
    assert real.dl_positions.shape == (19, 10, 2)
    assert real.ul_positions.shape == (19, 10, 2)
    assert real.dl_gains.shape == (7, 10, 19)
    assert real.ue_gains.shape == (19, 10, 10)
    assert np.all(real.dl_gains > 0) and np.all(real.ue_gains > 0)


def test_users_stay_in_their_cells(default_realization):
    _, real = default_realization
    centers = np.array([s.position for s in real.sites])
    for pos in (real.dl_positions, real.ul_positions):
        for cell in range(19):
            d = np.hypot(*(pos[cell] - centers[:, None, :]).transpose(2, 0, 1))
            # hexagonal cells are the lattice's Voronoi cells
            assert np.all(np.argmin(d, axis=0) == cell)
            assert np.all(d[cell] >= 10.0)


def test_association_conditioning_holds(default_realization):
    _, real = default_realization
    for row, cell in enumerate(real.observed_cells):
        assert np.all(np.argmax(real.dl_gains[row], axis=1) == cell)


def test_realization_is_a_pure_function_of_the_stream():
    scenario = default_scenario()
    a = realize_network(scenario, stream_for_drop(42, 3))
    b = realize_network(scenario, stream_for_drop(42, 3))
    assert np.array_equal(a.dl_gains, b.dl_gains)
    assert np.array_equal(a.ue_gains, b.ue_gains)


def test_min_link_distance_guard():
    scenario = default_scenario().with_overrides(min_link_distance_m=220.0)
    with pytest.raises(ValueError):
        realize_network(scenario, stream_for_drop(0, 0))


def test_budget_fields(default_realization):
    scenario, real = default_realization
    budget = assemble_link_budget(real, scenario, 0)
    assert budget.snr_d_cells.shape == (19,)
    assert budget.snr_d_cross.shape == (6, 6)
    assert budget.snr_iui.shape == (190,)
    assert np.allclose(budget.p_frac_dl, 0.1)
    assert np.allclose(budget.p_frac_ul, 1.0)
    assert np.allclose(budget.pilot_frac_ul, 1.0)
    assert np.allclose(budget.dl_frac_sums, 1.0)
    assert budget.alpha == alpha_for_bits(5)
    assert budget.varrho == pytest.approx(200.0)
    assert budget.n_antennas == 100
    assert budget.k_d_per_cell.tolist() == [10] * 19
    assert budget.k_u_per_cell.tolist() == [10] * 19
    assert budget.contamination_set.tolist() == [8, 10, 11, 14, 15, 17]


def test_budget_cross_matrix_orientation(default_realization):
    scenario, real = default_realization
    user_k = 2
    budget = assemble_link_budget(real, scenario, user_k)
    n0 = noise_power_w(scenario)
    cont = real.contamination_cells
    for i, bs in enumerate(cont):
        for j in range(len(cont)):
            gain = real.dl_gains[1 + j, user_k, bs]  # user of cell cont[j] -> BS cont[i]
            assert budget.snr_d_cross[i, j] == pytest.approx(
                gain * scenario.p_downlink_w / n0)


def test_budget_iui_layout(default_realization):
    scenario, real = default_realization
    user_k = 4
    budget = assemble_link_budget(real, scenario, user_k)
    n0 = noise_power_w(scenario)
    expected_first_cell = real.ue_gains[0, :, user_k] * scenario.p_uplink_w / n0
    assert np.allclose(budget.snr_iui[:10], expected_first_cell)


def test_budget_rejects_out_of_range_user(default_realization):
    scenario, real = default_realization
    for bad in (-1, scenario.k_downlink_per_cell):
        with pytest.raises(ValueError):
            assemble_link_budget(real, scenario, bad)


def test_single_cell_budget_has_no_contamination():
    scenario = default_scenario().with_overrides(tiers=0, n_drops=1)
    real = realize_network(scenario, stream_for_drop(0, 0))
    budget = assemble_link_budget(real, scenario, 0)
    assert budget.snr_d_cells.shape == (1,)
    assert budget.snr_d_cross.shape == (0, 0)
    assert budget.contamination_set.size == 0


def test_no_uplink_users_yields_empty_iui():
    scenario = default_scenario().with_overrides(k_uplink_per_cell=0)
    real = realize_network(scenario, stream_for_drop(0, 0))
    budget = assemble_link_budget(real, scenario, 0)
    assert budget.snr_iui.size == 0


def test_matched_powers_give_unit_power_ratio():
    scenario = default_scenario().with_overrides(p_uplink_w=40.0)
    real = realize_network(scenario, stream_for_drop(0, 0))
    assert assemble_link_budget(real, scenario, 0).varrho == pytest.approx(1.0)


def test_budget_validation():
    good = dict(
        snr_d_cells=np.array([5.0]),
        snr_d_cross=np.zeros((0, 0)),
        snr_iui=np.zeros(0),
        p_frac_dl=np.array([1.0]),
        p_frac_ul=np.zeros(0),
        pilot_frac_ul=np.array([1.0]),
        dl_frac_sums=np.array([1.0]),
        alpha=0.9,
        varrho=1.0,
        n_antennas=4,
        k_d_per_cell=np.array([1]),
        k_u_per_cell=np.array([0]),
        contamination_set=np.zeros(0, dtype=np.int64),
    )
    LinkBudget(**good)
    with pytest.raises(ValueError):
        LinkBudget(**{**good, "alpha": 0.0})
    with pytest.raises(ValueError):
        LinkBudget(**{**good, "snr_d_cells": np.array([-1.0])})
    with pytest.raises(ValueError):
        LinkBudget(**{**good, "snr_d_cells": np.zeros(0)})
