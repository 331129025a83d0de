"""Large-scale gains, shadowing, and link-budget assembly.

One drop produces a NetworkRealization (positions plus large-scale gains)
from which a LinkBudget is assembled for each scored downlink user of the
origin cell. The budget is the complete input of the closed-form SQINR:
per-cell downlink SNRs, the pilot-contamination cross matrix, the direct
user-to-user interference terms, power fractions, and the quantizer gain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .geometry import (CellSite, cell_circumradius, hex_lattice,
                       pilot_reuse_coloring, site_positions)
from .quantization import alpha_for_bits
from .rng import (PURPOSE_POSITION_DOWNLINK, PURPOSE_POSITION_UPLINK,
                  PURPOSE_SHADOWING, PURPOSE_UE_UE_SHADOWING, DropStream)
from .scenario import (Scenario, forward_reverse_ratio, noise_power_w,
                       ue_pathloss_intercept)

_SQRT3 = np.sqrt(3.0)


@dataclass(frozen=True)
class LargeScaleGain:
    """One link's large-scale channel gain and its factors."""
    gain: float          # linear, lref * shadow / distance^eta
    distance_m: float
    shadow: float        # linear lognormal draw


def large_scale_gain(distance_m: float, eta: float, sigma_db: float,
                     lref: float, rng: np.random.Generator) -> LargeScaleGain:
    """Distance-based pathloss with lognormal shadowing.

    The shadow factor is 10^(sigma_db * z / 10) with z standard normal
    drawn from `rng`; gain = lref * shadow / distance^eta.
    """
    if distance_m <= 0:
        raise ValueError("distance must be positive")
    z = rng.standard_normal() if sigma_db > 0 else 0.0
    shadow = float(10.0 ** (sigma_db * z / 10.0))
    gain = lref * shadow / distance_m ** eta
    return LargeScaleGain(gain=gain, distance_m=float(distance_m), shadow=shadow)


def snr_terms(gain, p_tx_w: float, n0_w: float):
    """Transmit SNR of a link: G * P / N_0."""
    if n0_w <= 0:
        raise ValueError("noise power must be positive")
    return gain * (p_tx_w / n0_w)


@dataclass(frozen=True)
class NetworkRealization:
    """Positions and large-scale gains of one drop.

    Gains are kept only where the forward-link score needs them: downlink
    users of the origin cell and of its co-pilot cells (their reverse-link
    pilots contaminate the estimates), and every uplink user's direct gain
    to the origin cell's downlink users.
    """
    sites: tuple[CellSite, ...]
    contamination_cells: np.ndarray  # (n_c,) cell ids sharing cell 0's pilots
    observed_cells: np.ndarray       # (n_obs,) = [0] + contamination cells
    dl_positions: np.ndarray         # (L, k_d, 2) all cells, for dumping
    ul_positions: np.ndarray         # (L, k_u, 2)
    dl_gains: np.ndarray             # (n_obs, k_d, L) user-to-BS gains
    ue_gains: np.ndarray             # (L, k_u, k_d) uplink user -> cell-0 dl user


def _pairwise_distances(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    d = points[:, None, :] - centers[None, :, :]
    return np.hypot(d[..., 0], d[..., 1])


def realize_network(scenario: Scenario, stream: DropStream) -> NetworkRealization:
    """Draw one network realization from a per-drop random stream.

    Every user is associated with its drop cell; the shadowing vector of
    each scored downlink user is redrawn until the home site is the strict
    argmax of the large-scale gain, which conditions on max-gain
    association without disturbing the uniform position law. Uplink users'
    BS-side shadowing never enters the forward-link score (their user-to-
    user shadowing is independent), so it is not drawn.
    """
    isd = scenario.inter_site_distance_m
    if scenario.min_link_distance_m >= (1.0 - 1.0 / _SQRT3) * isd:
        raise ValueError("min link distance too large for the lattice pitch")
    sites = hex_lattice(scenario.tiers, isd)
    n_sites = len(sites)
    contamination = pilot_reuse_coloring(sites)
    observed = np.concatenate(([0], contamination)).astype(np.int64)
    centers = site_positions(sites)

    radius = cell_circumradius(isd)
    half_width = _SQRT3 * radius / 2.0
    min_d_sq = scenario.min_link_distance_m ** 2
    k_d = scenario.k_downlink_per_cell
    k_u = scenario.k_uplink_per_cell

    def positions(purpose: int, count: int) -> np.ndarray:
        out = np.empty((n_sites, count, 2), dtype=np.float64)
        for site in sites:
            out[site.cell_id] = kernels.sample_hex_positions(
                stream.key_lo, stream.key_hi, purpose, site.cell_id, count,
                half_width, radius, 1.0 / _SQRT3, min_d_sq,
                site.position[0], site.position[1])
        return out

    dl_positions = positions(PURPOSE_POSITION_DOWNLINK, k_d)
    ul_positions = positions(PURPOSE_POSITION_UPLINK, k_u)

    eta = scenario.pathloss_exponent_eta
    sigma = scenario.shadowing_sigma_db
    lref_db = 10.0 * np.log10(scenario.pathloss_intercept_lref)

    dl_gains = np.empty((len(observed), k_d, n_sites), dtype=np.float64)
    for row, cell in enumerate(observed):
        dist = _pairwise_distances(dl_positions[cell], centers)  # (k_d, L)
        scores = -10.0 * eta * np.log10(dist)
        z = kernels.sample_conditioned_shadows(
            stream.key_lo, stream.key_hi, PURPOSE_SHADOWING, int(cell),
            scores, int(cell), sigma)
        dl_gains[row] = 10.0 ** ((scores + sigma * z + lref_db) / 10.0)

    lref_ue = ue_pathloss_intercept(scenario)
    ue_gains = np.empty((n_sites, k_u, k_d), dtype=np.float64)
    if k_u > 0:
        scored = dl_positions[0]  # (k_d, 2)
        for site in sites:
            dist = _pairwise_distances(ul_positions[site.cell_id], scored)
            np.maximum(dist, scenario.min_link_distance_m, out=dist)
            z = kernels.sample_plane_normals(
                stream.key_lo, stream.key_hi, PURPOSE_UE_UE_SHADOWING,
                site.cell_id, k_u, k_d)
            ue_gains[site.cell_id] = (lref_ue * 10.0 ** (sigma * z / 10.0)
                                      / dist ** eta)

    return NetworkRealization(
        sites=tuple(sites), contamination_cells=contamination,
        observed_cells=observed, dl_positions=dl_positions,
        ul_positions=ul_positions, dl_gains=dl_gains, ue_gains=ue_gains)


@dataclass(frozen=True)
class LinkBudget:
    """Everything the closed-form SQINR of one scored user consumes.

    Index 0 of per-cell arrays is the serving cell. The cross matrix holds
    the downlink-referenced SNR from co-pilot base station i to the
    co-pilot user of cell j, both indexed along contamination_set; the
    scored user's own gain toward each co-pilot BS enters separately
    through snr_d_cells.
    """
    snr_d_cells: np.ndarray        # (L,) scored user's downlink SNR per BS
    snr_d_cross: np.ndarray        # (n_c, n_c) co-pilot BS x co-pilot user
    snr_iui: np.ndarray            # (L*k_u,) uplink-user -> scored-user SNR
    p_frac_dl: np.ndarray          # (L,) downlink fraction of the pilot-k user
    p_frac_ul: np.ndarray          # (L*k_u,) uplink fraction per interferer
    pilot_frac_ul: np.ndarray      # (L,) reverse-pilot fraction of the pilot-k user
    dl_frac_sums: np.ndarray       # (L,) per-cell sum of downlink fractions
    alpha: float
    varrho: float
    n_antennas: int
    k_d_per_cell: np.ndarray       # (L,)
    k_u_per_cell: np.ndarray       # (L,)
    contamination_set: np.ndarray  # (n_c,)

    def __post_init__(self):
        if self.snr_d_cells.size == 0:
            raise ValueError("budget needs at least the serving cell")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must lie in (0, 1]")
        for name in ("snr_d_cells", "snr_d_cross", "snr_iui"):
            if np.any(getattr(self, name) < 0):
                raise ValueError(f"{name} must be nonnegative")


def assemble_link_budget(realization: NetworkRealization, scenario: Scenario,
                         user_k: int) -> LinkBudget:
    """Budget of downlink user `user_k` of the origin cell.

    Uniform downlink power fractions 1/k_d; uplink users and reverse-link
    pilots at full power (fraction 1).
    """
    k_d = scenario.k_downlink_per_cell
    if not 0 <= user_k < k_d:
        raise ValueError("scored user must be a downlink user of cell 0")
    n0 = noise_power_w(scenario)
    n_sites = len(realization.sites)
    cont = realization.contamination_cells
    n_c = len(cont)

    snr_d_cells = snr_terms(realization.dl_gains[0, user_k, :],
                            scenario.p_downlink_w, n0)
    # cross[i, j]: BS cont[i] to the pilot-sharing user of cell cont[j]
    cross_gains = realization.dl_gains[1:, user_k, :][:, cont].T if n_c else \
        np.zeros((0, 0))
    snr_d_cross = snr_terms(cross_gains, scenario.p_downlink_w, n0)
    snr_iui = snr_terms(realization.ue_gains[:, :, user_k].ravel(),
                        scenario.p_uplink_w, n0)

    return LinkBudget(
        snr_d_cells=snr_d_cells,
        snr_d_cross=np.ascontiguousarray(snr_d_cross),
        snr_iui=snr_iui,
        p_frac_dl=np.full(n_sites, 1.0 / k_d),
        p_frac_ul=np.ones(snr_iui.size),
        pilot_frac_ul=np.ones(n_sites),
        dl_frac_sums=np.ones(n_sites),
        alpha=alpha_for_bits(scenario.adc_bits),
        varrho=forward_reverse_ratio(scenario),
        n_antennas=scenario.n_antennas,
        k_d_per_cell=np.full(n_sites, k_d, dtype=np.int64),
        k_u_per_cell=np.full(n_sites, scenario.k_uplink_per_cell, dtype=np.int64),
        contamination_set=cont)
