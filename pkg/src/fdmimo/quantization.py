"""DAC resolution -> distortion factor for the additive quantization noise model.

The model linearizes an optimal scalar quantizer as output = alpha * input + q
with alpha = 1 - rho, where rho is the inverse signal-to-quantization-noise
ratio of the quantizer, and q zero-mean with covariance
alpha * (1 - alpha) * diag(F F*) for precoded input F s. Tabulated rho values
cover 1..5 bits; beyond that the optimal-Gaussian-quantizer asymptote
rho = (pi * sqrt(3) / 2) * 2^(-2b) applies, and infinite resolution maps to
rho = 0 (alpha = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# inverse SQNR of the optimal scalar quantizer for a Gaussian input, 1..5 bits
_RHO_TABLE = {1: 0.3634, 2: 0.1175, 3: 0.03454, 4: 0.009497, 5: 0.002499}

# asymptotic constant of the optimal Gaussian quantizer, rho ~ c * 2^(-2b)
_GAUSSIAN_QUANTIZER_COEFF = math.pi * math.sqrt(3.0) / 2.0


@dataclass(frozen=True)
class QuantizationModel:
    """Resolution b together with its distortion rho and linear gain alpha."""

    bits: float
    rho: float

    @property
    def alpha(self) -> float:
        return 1.0 - self.rho


def rho_for_bits(bits: float) -> float:
    """Distortion factor rho for a b-bit DAC (0 for infinite resolution)."""
    if math.isinf(bits) and bits > 0:
        return 0.0
    if bits < 1 or bits != int(bits):
        raise ValueError("bits must be an integer >= 1 or infinity")
    bits = int(bits)
    if bits in _RHO_TABLE:
        return _RHO_TABLE[bits]
    return _GAUSSIAN_QUANTIZER_COEFF * 2.0 ** (-2 * bits)


def alpha_for_bits(bits: float) -> float:
    """Linear gain alpha = 1 - rho of a b-bit DAC."""
    return 1.0 - rho_for_bits(bits)


def quantization_model(bits: float) -> QuantizationModel:
    """Bundle (bits, rho, alpha) for a given resolution."""
    return QuantizationModel(bits=bits, rho=rho_for_bits(bits))
