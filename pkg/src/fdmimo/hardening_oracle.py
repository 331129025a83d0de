"""Signal-level Monte Carlo oracle for the closed-form SQINR.

Draws the small-scale fading explicitly, builds the matched-filter
precoders, and measures the power of every component of the scored
user's received sample: desired beam, beam fluctuation (the hardening
residual), intra- and inter-cell beams, transmit quantization noise,
direct uplink-user interference, and thermal noise. The closed form is
validated by comparing its SQINR against the measured power ratio.

Co-pilot structure is generated exactly in law without materializing the
interfering cells' full user populations: each base station's
pilot-indexed beam is its estimate direction, a weighted sum of the
channel toward the scored user and an independent remainder, and the
other beams are isotropic. Batches are addressed by index, so results
do not depend on how the draw count is split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import LinkBudget

_BATCH = 4096


def _generator(seed: int, batch_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(batch_index,))
    return np.random.Generator(np.random.Philox(ss))


def _cnormal(gen: np.random.Generator, *shape: int) -> np.ndarray:
    z = gen.standard_normal(shape + (2,))
    return (z[..., 0] + 1j * z[..., 1]) * math.sqrt(0.5)


def _batch_sizes(n_samples: int):
    full, rest = divmod(n_samples, _BATCH)
    return [_BATCH] * full + ([rest] if rest else [])


@dataclass(frozen=True)
class FadingDraw:
    """Raw fading needed for one batch of serving-cell precoders.

    h_own: scored user's channel to the serving BS, unit-variance entries.
    h_cross: co-pilot users' channels to the serving BS, one block per
    co-pilot cell. est_noise: reverse-link estimation noise, unit variance
    per entry (its weight is applied by the precoder builder).
    """
    h_own: np.ndarray     # (n, n_antennas) complex
    h_cross: np.ndarray   # (n_c, n, n_antennas) complex
    est_noise: np.ndarray  # (n, n_antennas) complex


def draw_fading(budget: LinkBudget, n: int, gen: np.random.Generator) -> FadingDraw:
    n_a = budget.n_antennas
    n_c = len(budget.contamination_set)
    return FadingDraw(h_own=_cnormal(gen, n, n_a),
                      h_cross=_cnormal(gen, n_c, n, n_a),
                      est_noise=_cnormal(gen, n, n_a))


@dataclass(frozen=True)
class PrecoderRealization:
    """Matched-filter beams for the scored user, E[norm squared] = n_antennas."""
    f_vectors: np.ndarray   # (n, n_antennas) complex
    alignment: float        # weight of h_own in f: sqrt(estimate quality)


def build_precoder(draw: FadingDraw, budget: LinkBudget) -> PrecoderRealization:
    """Serving-cell beam toward the scored user from its reverse pilots.

    The estimate direction mixes the true channel, the co-pilot users'
    channels, and noise, with the varrho-form weights of the closed form;
    entries of f come out exactly unit-variance.
    """
    cont = budget.contamination_set
    n_c = len(cont)
    if draw.h_cross.shape[0] != n_c:
        raise ValueError("draw carries a different co-pilot count than the budget")
    if draw.h_own.shape[1] != budget.n_antennas:
        raise ValueError("draw antenna count does not match the budget")
    s = budget.snr_d_cells
    pu = budget.pilot_frac_ul
    own_den = budget.varrho + pu[0] * s[0] + float(np.sum(pu[cont] * s[cont]))
    f = np.sqrt(pu[0] * s[0]) * draw.h_own
    for i, cell in enumerate(cont):
        f = f + np.sqrt(pu[cell] * s[cell]) * draw.h_cross[i]
    f = (f + math.sqrt(budget.varrho) * draw.est_noise) / math.sqrt(own_den)
    return PrecoderRealization(f_vectors=f,
                               alignment=math.sqrt(pu[0] * s[0] / own_den))


@dataclass(frozen=True)
class MomentCheck:
    name: str
    estimate: float
    target: float
    std_error: float

    @property
    def passed(self) -> bool:
        return abs(self.estimate - self.target) <= 3.0 * self.std_error

    def to_dict(self) -> dict:
        return {"name": self.name, "estimate": self.estimate,
                "target": self.target, "std_error": self.std_error,
                "passed": self.passed}


@dataclass(frozen=True)
class MomentReport:
    checks: tuple[MomentCheck, ...]
    n_samples: int

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"n_samples": self.n_samples, "all_passed": self.all_passed,
                "checks": [c.to_dict() for c in self.checks]}


def verify_precoder_moments(budget: LinkBudget, n_samples: int,
                            seed: int = 0) -> MomentReport:
    """Monte Carlo check of the four matched-filter moment identities.

    E[norm^2] = n_antennas, E[norm^4] = n_antennas^2 + n_antennas,
    |E[h* f]| = alignment * n_antennas, and unit leakage per antenna
    toward any uncorrelated user's channel.
    """
    if n_samples < 10 ** 4:
        raise ValueError("need at least 1e4 samples for stable moments")
    n_a = budget.n_antennas
    sums = np.zeros(3)      # norm2, norm4, |h_indep* f|^2
    sqsums = np.zeros(3)    # squares for standard errors
    hf_sum = 0.0 + 0.0j
    hf_sq = 0.0
    n_done = 0
    alignment = 0.0
    for b, size in enumerate(_batch_sizes(n_samples)):
        gen = _generator(seed, b)
        draw = draw_fading(budget, size, gen)
        h_indep = _cnormal(gen, size, n_a)
        precoder = build_precoder(draw, budget)
        f = precoder.f_vectors
        alignment = precoder.alignment
        norm2 = np.sum(np.abs(f) ** 2, axis=1)
        hf = np.sum(np.conj(draw.h_own) * f, axis=1)
        leak = np.abs(np.sum(np.conj(h_indep) * f, axis=1)) ** 2
        sums += (norm2.sum(), (norm2 ** 2).sum(), leak.sum())
        sqsums += ((norm2 ** 2).sum(), (norm2 ** 4).sum(), (leak ** 2).sum())
        hf_sum += hf.sum()
        hf_sq += float(np.sum(np.abs(hf) ** 2))
        n_done += size

    means = sums / n_done
    variances = np.maximum(sqsums / n_done - means ** 2, 0.0)
    ses = np.sqrt(variances / n_done)
    m_hat = hf_sum / n_done
    var_hf = max(hf_sq / n_done - abs(m_hat) ** 2, 0.0)
    checks = (
        MomentCheck("mean_norm_sq", float(means[0]), float(n_a), float(ses[0])),
        MomentCheck("mean_norm_4th", float(means[1]), float(n_a ** 2 + n_a),
                    float(ses[1])),
        MomentCheck("alignment_mean", float(abs(m_hat)),
                    alignment * n_a, math.sqrt(var_hf / (2 * n_done))),
        MomentCheck("uncorrelated_leakage", float(means[2]), float(n_a),
                    float(ses[2])),
    )
    return MomentReport(checks=checks, n_samples=n_done)


@dataclass(frozen=True)
class TermPowers:
    """Measured average power of each received-signal component."""
    desired: float
    channel_estimation_error: float
    intra_cell: float
    aqnm: float
    inter_cell: float
    same_cell_iui: float
    other_cells_iui: float
    noise: float
    total: float

    @property
    def sum_of_terms(self) -> float:
        return (self.desired + self.channel_estimation_error + self.intra_cell
                + self.aqnm + self.inter_cell + self.same_cell_iui
                + self.other_cells_iui + self.noise)

    @property
    def sqinr(self) -> float:
        return self.desired / (self.sum_of_terms - self.desired)

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name)
             for f in self.__dataclass_fields__.values()}  # type: ignore[attr-defined]
        d["sum_of_terms"] = self.sum_of_terms
        return d


def measure_term_powers(budget: LinkBudget, n_samples: int,
                        seed: int = 0) -> TermPowers:
    """Simulate received samples and average each component's power.

    Per draw, each base station contributes its pilot-indexed beam (the
    correlated one where pilots are shared), the isotropic remainder of
    its downlink beams, and a quantization-noise vector whose per-antenna
    variance follows the instantaneous transmit profile
    alpha*(1-alpha)*diag(x x*). The desired/fluctuation split uses the
    empirical beam mean, mirroring what a hardening receiver locks to.
    """
    s = budget.snr_d_cells
    pu = budget.pilot_frac_ul
    pd = budget.p_frac_dl
    cont = list(budget.contamination_set)
    n_cells = len(s)
    n_a = budget.n_antennas
    alpha = budget.alpha
    own_den = budget.varrho + pu[0] * s[0] + float(np.sum(pu[cont] * s[cont]))
    cross_den = {int(cell): budget.varrho + pu[0] * s[cell]
                 + float(budget.snr_d_cross[i] @ pu[cont])
                 for i, cell in enumerate(cont)}

    k_u0 = int(budget.k_u_per_cell[0])
    proj = np.empty(n_samples, dtype=np.complex128)   # beam-k projection, cell 0
    sym_k = np.empty(n_samples, dtype=np.complex128)  # its data symbol
    amp = {name: np.zeros(n_samples, dtype=np.complex128)
           for name in ("intra", "aqnm", "inter", "iui_same", "iui_other",
                        "noise")}

    pos = 0
    for b, size in enumerate(_batch_sizes(n_samples)):
        gen = _generator(seed, b)
        sl = slice(pos, pos + size)
        for cell in range(n_cells):
            h = _cnormal(gen, size, n_a)
            k_d = int(budget.k_d_per_cell[cell])
            frac_other = ((budget.dl_frac_sums[cell] - pd[cell]) / (k_d - 1)
                          if k_d > 1 else 0.0)
            # pilot-indexed beam: correlated at the serving and co-pilot BSs
            if cell == 0:
                c = pu[0] * s[0] / own_den
            elif cell in cont:
                c = pu[0] * s[cell] / cross_den[cell]
            else:
                c = 0.0
            u = _cnormal(gen, size, n_a)
            f_k = math.sqrt(c) * h + math.sqrt(1.0 - c) * u
            proj_k = np.sum(np.conj(h) * f_k, axis=1)
            s_k = _cnormal(gen, size)
            if cell == 0:
                proj[sl] = proj_k
                sym_k[sl] = s_k
            else:
                amp["inter"][sl] += (alpha * math.sqrt(pd[cell] * s[cell] / n_a)
                                     * proj_k * s_k)
            # isotropic remainder beams: projections are norm(h) * CN(0,1)
            if k_d > 1:
                zeta = _cnormal(gen, size, k_d - 1)
                s_other = _cnormal(gen, size, k_d - 1)
                mix = np.sum(zeta * s_other, axis=1)
                term = (alpha * math.sqrt(frac_other * s[cell] / n_a)
                        * np.linalg.norm(h, axis=1) * mix)
                amp["intra" if cell == 0 else "inter"][sl] += term
            if alpha < 1.0:
                profile = pd[cell] * np.abs(f_k) ** 2
                if k_d > 1:
                    profile = profile + frac_other * gen.gamma(k_d - 1.0,
                                                               size=(size, n_a))
                xi = _cnormal(gen, size, n_a)
                q = np.sqrt(alpha * (1.0 - alpha) * profile / n_a) * xi
                amp["aqnm"][sl] += math.sqrt(s[cell]) * np.sum(np.conj(h) * q,
                                                               axis=1)
        n_iui = budget.snr_iui.size
        if n_iui:
            g = _cnormal(gen, size, n_iui)
            s_u = _cnormal(gen, size, n_iui)
            w = np.sqrt(budget.p_frac_ul * budget.snr_iui)
            terms = w * g * s_u
            amp["iui_same"][sl] = terms[:, :k_u0].sum(axis=1)
            amp["iui_other"][sl] = terms[:, k_u0:].sum(axis=1)
        amp["noise"][sl] = _cnormal(gen, size)
        pos += size

    m_hat = proj.mean()
    coef = alpha * math.sqrt(pd[0] * s[0] / n_a)
    desired = coef * m_hat * sym_k
    est_err = coef * (proj - m_hat) * sym_k
    y = desired + est_err
    for a in amp.values():
        y = y + a

    def power(x):
        return float(np.mean(np.abs(x) ** 2))

    return TermPowers(
        desired=power(desired), channel_estimation_error=power(est_err),
        intra_cell=power(amp["intra"]), aqnm=power(amp["aqnm"]),
        inter_cell=power(amp["inter"]), same_cell_iui=power(amp["iui_same"]),
        other_cells_iui=power(amp["iui_other"]), noise=power(amp["noise"]),
        total=power(y))


def empirical_sqinr(budget: LinkBudget, n_samples: int, seed: int = 0) -> float:
    """Measured SQINR: desired power over the sum of the other components."""
    return measure_term_powers(budget, n_samples, seed).sqinr
