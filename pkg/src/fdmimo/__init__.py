"""Forward-link analysis of full-duplex cellular networks with
low-resolution transmit quantization: closed-form per-user SQINR and
spectral efficiency, asymptotic limits, and Monte Carlo validation."""

from ._backend import BACKEND_NAME
from .scenario import Scenario, default_scenario

__all__ = ["Scenario", "default_scenario", "BACKEND_NAME"]
__version__ = "0.1.0"
