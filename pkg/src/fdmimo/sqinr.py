"""Closed-form per-user SQINR and spectral efficiency.

All evaluators share one convention: every link power is stored as a
downlink-referenced SNR (gain times downlink power over noise), and the
reverse-link pilot SNRs enter through the forward-reverse ratio varrho,
so an estimator denominator (1 + sum of pilot SNRs) appears here as
(varrho + sum of downlink-referenced SNRs).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace

import numpy as np

from .channel import LinkBudget


@dataclass(frozen=True)
class SqinrBreakdown:
    """Itemized numerator and denominator of the closed-form SQINR."""

    numerator: float
    den_noise: float
    den_intracell_intercell: float
    den_pilot_contamination: float
    den_iui: float
    den_aqnm: float
    sqinr: float

    def to_dict(self) -> dict:
        return asdict(self)


def _estimator_denominators(budget: LinkBudget):
    """varrho-form estimator denominators of the serving and co-pilot BSs.

    own: the serving BS estimates the scored user against the co-pilot
    users' pilots. cross[i]: co-pilot BS i estimates its own user against
    the scored user's pilot and the other co-pilot users'.
    """
    s = budget.snr_d_cells
    pu = budget.pilot_frac_ul
    cont = budget.contamination_set
    own = budget.varrho + pu[0] * s[0] + float(np.sum(pu[cont] * s[cont]))
    cross = (budget.varrho + pu[0] * s[cont]
             + budget.snr_d_cross @ pu[cont])
    return own, cross


def closed_form_sqinr(budget: LinkBudget) -> SqinrBreakdown:
    """SQINR of the scored user under quantized matched-filter precoding.

    Numerator: the hardened desired beam, damped by the pilot-estimate
    quality of the serving BS. Denominator terms: thermal noise, the
    unit-variance fluctuation of every beam in the network, the hardened
    contamination beams of co-pilot BSs, direct uplink-user interference,
    and the transmit quantization noise.
    """
    s = budget.snr_d_cells
    pu = budget.pilot_frac_ul
    pd = budget.p_frac_dl
    cont = budget.contamination_set
    alpha = budget.alpha
    n_a = budget.n_antennas

    own_den, cross_den = _estimator_denominators(budget)
    numerator = alpha ** 2 * n_a * pu[0] * pd[0] * s[0] ** 2 / own_den

    den_noise = 1.0
    den_beams = alpha ** 2 * float(np.sum(budget.dl_frac_sums * s))
    den_pc = alpha ** 2 * n_a * float(
        np.sum(pu[cont] * pd[cont] * s[cont] ** 2 / cross_den)) if len(cont) \
        else 0.0
    den_iui = float(np.sum(budget.p_frac_ul * budget.snr_iui))
    den_aqnm = alpha * (1.0 - alpha) * float(
        np.sum(pd * s * (budget.k_d_per_cell + 1)))

    total = den_noise + den_beams + den_pc + den_iui + den_aqnm
    return SqinrBreakdown(
        numerator=numerator, den_noise=den_noise,
        den_intracell_intercell=den_beams, den_pilot_contamination=den_pc,
        den_iui=den_iui, den_aqnm=den_aqnm, sqinr=numerator / total)


def sinr_half_duplex_full_resolution(budget: LinkBudget) -> float:
    """SINR with an ideal transmitter and no uplink users on the band.

    Written out as its own expression (not by substitution into the
    general formula) so the algebraic identity between the two is a real
    cross-check.
    """
    s = budget.snr_d_cells
    pu = budget.pilot_frac_ul
    pd = budget.p_frac_dl
    cont = budget.contamination_set
    n_a = budget.n_antennas

    own_den, cross_den = _estimator_denominators(budget)
    num = n_a * pu[0] * pd[0] * s[0] ** 2 / own_den
    den = 1.0 + float(np.sum(budget.dl_frac_sums * s))
    if len(cont):
        den += n_a * float(np.sum(pu[cont] * pd[cont] * s[cont] ** 2 / cross_den))
    return num / den


def sinr_no_contamination(budget: LinkBudget) -> float:
    """Contamination-free half-duplex full-resolution SINR."""
    s = budget.snr_d_cells
    num = (budget.pilot_frac_ul[0] * budget.p_frac_dl[0] * s[0] ** 2
           * budget.n_antennas)
    den = ((budget.varrho + budget.pilot_frac_ul[0] * s[0])
           * (1.0 + float(np.sum(budget.dl_frac_sums * s))))
    return num / den


def gross_se(sqinr: float, log_base: float = 2.0) -> float:
    """Spectral efficiency of one symbol, log_base 2 for bits/s/Hz."""
    if sqinr < 0:
        raise ValueError("sqinr must be nonnegative")
    return math.log1p(sqinr) / math.log(log_base)


def effective_se(sqinr: float, beta: float, n_pilots: int, n_coherence: int,
                 log_base: float = 2.0) -> float:
    """Gross spectral efficiency discounted by the forward pilot overhead."""
    if not 0.0 <= beta <= 1.0:
        raise ValueError("beta must lie in [0, 1]")
    if n_pilots > n_coherence:
        raise ValueError("pilot block cannot exceed the coherence tile")
    return (1.0 - beta * n_pilots / n_coherence) * gross_se(sqinr, log_base)


def with_alpha(budget: LinkBudget, alpha: float) -> LinkBudget:
    """Budget copy at a different quantizer gain."""
    return replace(budget, alpha=alpha)


def without_iui(budget: LinkBudget) -> LinkBudget:
    """Budget copy with the direct uplink-user interference removed."""
    return replace(budget, snr_iui=np.zeros_like(budget.snr_iui))
