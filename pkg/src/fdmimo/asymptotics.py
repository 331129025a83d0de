"""Asymptotic limits of the closed-form SQINR and convergence probes.

Four regimes, named for the quantity being driven:

- full_resolution: quantizer bits b grows, alpha approaches 1.
- high_snr: the scored user's own-link gain grows without bound.
- power_scaling: both transmit powers shrink as E/n_antennas while the
  array grows, holding the radiated energy fixed; the array gain exactly
  cancels the power cut, so the probe compares the energy-compensated
  SQINR (n_antennas times the raw value) against the limit.
- antenna_ratio: the array grows with user counts and gains fixed, up to
  the pilot-contamination ceiling.

Each probe rebuilds the budget along a schedule of scale points and
reports the gap to the closed-form limit value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .channel import LinkBudget
from .quantization import alpha_for_bits
from .sqinr import closed_form_sqinr, gross_se

REGIME_KINDS = ("full_resolution", "high_snr", "power_scaling", "antenna_ratio")

DEFAULT_SCHEDULES = {
    "full_resolution": (6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0),
    "high_snr": (1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8),
    "power_scaling": (1e3, 1e4, 1e5, 1e6),
    "antenna_ratio": (1e2, 1e3, 1e4, 1e5),
}


class DivergentLimitError(ValueError):
    """The requested limit grows without bound for this budget."""


@dataclass(frozen=True)
class LimitRegime:
    """A limit regime plus the schedule its probe walks through."""

    kind: str
    schedule: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in REGIME_KINDS:
            raise ValueError(f"unknown regime kind {self.kind!r}")
        if len(self.schedule) < 3:
            raise ValueError("schedule needs at least 3 probe points")
        if any(b >= a for a, b in zip(self.schedule[1:], self.schedule)):
            raise ValueError("schedule must be strictly increasing")


def default_regime(kind: str) -> LimitRegime:
    return LimitRegime(kind=kind, schedule=DEFAULT_SCHEDULES[kind])


@dataclass(frozen=True)
class ProbePoint:
    scale: float
    se_bits: float
    limit_bits: float
    gap: float


def limit_full_resolution(budget: LinkBudget) -> float:
    """Spectral efficiency at infinite DAC resolution.

    The quantization noise term vanishes and every squared quantizer gain
    becomes 1; uplink interference and contamination remain.
    """
    s = budget.snr_d_cells
    pu = budget.pilot_frac_ul
    pd = budget.p_frac_dl
    cont = budget.contamination_set
    n_a = budget.n_antennas

    own_den = budget.varrho + pu[0] * s[0] + float(np.sum(pu[cont] * s[cont]))
    num = n_a * pu[0] * pd[0] * s[0] ** 2 / own_den
    den = 1.0 + float(np.sum(budget.dl_frac_sums * s)) + float(
        np.sum(budget.p_frac_ul * budget.snr_iui))
    if len(cont):
        cross_den = budget.varrho + pu[0] * s[cont] + budget.snr_d_cross @ pu[cont]
        den += n_a * float(np.sum(pu[cont] * pd[cont] * s[cont] ** 2 / cross_den))
    return gross_se(num / den)


def limit_high_snr(alpha: float, n_antennas: int, k_downlink: int) -> float:
    """Spectral efficiency as the own-link gain grows, uniform allocation.

    Interference, contamination and noise are outgrown; what remains is
    the array gain damped by the quantizer and shared among users.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    if n_antennas < 0 or k_downlink <= 0:
        raise ValueError("counts must be positive")
    return math.log2(1.0 + alpha * n_antennas / (k_downlink - alpha + 1.0))


def limit_power_scaling(alpha: float, varrho: float, fraction_ul: float,
                        fraction_dl: float, snr_at_energy: float) -> float:
    """Limit of the energy-compensated SQINR under P = E / n_antennas.

    snr_at_energy is the scored user's downlink SNR evaluated at the full
    energy E; varrho is the forward-reverse energy ratio.
    """
    if varrho <= 0 or snr_at_energy < 0:
        raise ValueError("inputs must be positive")
    x = (alpha ** 2 / varrho) * fraction_ul * fraction_dl * snr_at_energy ** 2
    return math.log2(1.0 + x)


def limit_antenna_ratio(budget: LinkBudget) -> float:
    """Interference-limited ceiling as the array outgrows everything else.

    Only the hardened terms survive: the desired beam over the co-pilot
    contamination beams, with the array size cancelled.
    """
    cont = budget.contamination_set
    if len(cont) == 0:
        raise DivergentLimitError(
            "no co-pilot cells: the SQINR grows without bound")
    s = budget.snr_d_cells
    pu = budget.pilot_frac_ul
    pd = budget.p_frac_dl
    own_den = budget.varrho + pu[0] * s[0] + float(np.sum(pu[cont] * s[cont]))
    cross_den = budget.varrho + pu[0] * s[cont] + budget.snr_d_cross @ pu[cont]
    num = pu[0] * pd[0] * s[0] ** 2 / own_den
    den = float(np.sum(pu[cont] * pd[cont] * s[cont] ** 2 / cross_den))
    return gross_se(num / den)


def _scaled_for_high_snr(budget: LinkBudget, scale: float) -> LinkBudget:
    s = budget.snr_d_cells.copy()
    s[0] *= scale
    return replace(budget, snr_d_cells=s)


def _scaled_for_power(budget: LinkBudget, n_antennas: float) -> LinkBudget:
    t = float(n_antennas)
    return replace(budget, n_antennas=t,
                   snr_d_cells=budget.snr_d_cells / t,
                   snr_d_cross=budget.snr_d_cross / t,
                   snr_iui=budget.snr_iui / t)


def convergence_probe(regime: LimitRegime, budget: LinkBudget) -> list[ProbePoint]:
    """Walk the regime's schedule and report the gap to the limit value.

    Scale semantics per regime: quantizer bits (full_resolution), own-gain
    multiplier (high_snr), array size under P = E/n_antennas
    (power_scaling), array-to-user ratio at fixed per-cell user count
    (antenna_ratio).
    """
    points = []
    for scale in regime.schedule:
        if regime.kind == "full_resolution":
            probe = replace(budget, alpha=alpha_for_bits(int(scale)))
            se = gross_se(closed_form_sqinr(probe).sqinr)
            limit = limit_full_resolution(budget)
        elif regime.kind == "high_snr":
            probe = _scaled_for_high_snr(budget, scale)
            se = gross_se(closed_form_sqinr(probe).sqinr)
            limit = limit_high_snr(budget.alpha, budget.n_antennas,
                                   int(budget.k_d_per_cell[0]))
        elif regime.kind == "power_scaling":
            probe = _scaled_for_power(budget, scale)
            se = math.log2(1.0 + scale * closed_form_sqinr(probe).sqinr)
            limit = limit_power_scaling(
                budget.alpha, budget.varrho, budget.pilot_frac_ul[0],
                budget.p_frac_dl[0], budget.snr_d_cells[0])
        else:  # antenna_ratio
            limit = limit_antenna_ratio(budget)
            n_a = scale * float(budget.k_d_per_cell[0])
            probe = replace(budget, n_antennas=n_a)
            se = gross_se(closed_form_sqinr(probe).sqinr)
        points.append(ProbePoint(scale=scale, se_bits=se, limit_bits=limit,
                                 gap=abs(se - limit)))
    return points


def make_probe_budget(snr_own: float = 100.0, snr_cross: float = 100.0,
                      snr_iui: float = 1.0, n_copilot: int = 2,
                      k_downlink: int = 10, k_uplink: int = 2,
                      n_antennas: int = 100, varrho: float = 200.0,
                      bits: float = 5) -> LinkBudget:
    """Small synthetic budget with contamination, for probes and checks.

    One serving cell plus n_copilot co-pilot cells, flat gains, uniform
    downlink allocation, full uplink power.
    """
    n_cells = 1 + n_copilot
    cont = np.arange(1, n_cells, dtype=np.int64)
    snr_d_cells = np.full(n_cells, snr_cross, dtype=np.float64)
    snr_d_cells[0] = snr_own
    return LinkBudget(
        snr_d_cells=snr_d_cells,
        snr_d_cross=np.full((n_copilot, n_copilot), snr_cross, dtype=np.float64),
        snr_iui=np.full(n_cells * k_uplink, snr_iui, dtype=np.float64),
        p_frac_dl=np.full(n_cells, 1.0 / k_downlink),
        p_frac_ul=np.ones(n_cells * k_uplink),
        pilot_frac_ul=np.ones(n_cells),
        dl_frac_sums=np.ones(n_cells),
        alpha=alpha_for_bits(bits),
        varrho=varrho,
        n_antennas=n_antennas,
        k_d_per_cell=np.full(n_cells, k_downlink, dtype=np.int64),
        k_u_per_cell=np.full(n_cells, k_uplink, dtype=np.int64),
        contamination_set=cont)
