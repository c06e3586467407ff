"""Reservoir statistics and the per-reservoir transition rates."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .core import CoupledQubitSystem


class Statistics(str, enum.Enum):
    BOSON = "boson"
    FERMION = "fermion"


@dataclass(frozen=True)
class ReservoirSpec:
    """One reservoir with a flat spectral density ``coupling`` (J)."""

    kind: Statistics
    temperature: float
    mu: float = 0.0
    coupling: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Statistics(self.kind))
        if not self.temperature > 0:
            raise ValueError(f"temperature must be positive, got T={self.temperature}")
        if not self.coupling > 0:
            raise ValueError(f"coupling must be positive, got J={self.coupling}")
        if self.kind is Statistics.BOSON and self.mu != 0.0:
            raise ValueError(f"boson reservoirs have zero chemical potential, got mu={self.mu}")
        if not math.isfinite(self.mu):
            raise ValueError(f"chemical potential must be finite, got mu={self.mu}")

    @classmethod
    def boson(cls, temperature: float, coupling: float = 1.0) -> "ReservoirSpec":
        return cls(Statistics.BOSON, temperature, 0.0, coupling)

    @classmethod
    def fermion(cls, temperature: float, mu: float, coupling: float = 1.0) -> "ReservoirSpec":
        return cls(Statistics.FERMION, temperature, mu, coupling)


@dataclass(frozen=True)
class RateSet:
    """Absorption (gamma) and emission (Gamma) rates at omega_+ and omega_-."""

    gamma_plus: float
    gamma_minus: float
    Gamma_plus: float
    Gamma_minus: float


def _factors(spec: ReservoirSpec, omega: float) -> tuple[float, float]:
    """(N, 1 -/+ N): occupation and the emission enhancement/blocking factor."""
    x = (omega - spec.mu) / spec.temperature
    if spec.kind is Statistics.FERMION:
        return float(expit(-x)), float(expit(x))
    if not omega > 0:
        raise ValueError(f"boson occupation diverges for omega <= 0 (omega={omega})")
    # 1 - exp(-x) without cancellation, so both factors stay accurate for small and huge x
    denom = -np.expm1(-x)
    return float(np.exp(-x) / denom), float(1.0 / denom)


def occupation(spec: ReservoirSpec, omega: float) -> float:
    """Bose-Einstein or Fermi-Dirac mean occupation at frequency ``omega``."""
    return _factors(spec, omega)[0]


def transition_rates(spec: ReservoirSpec, system: CoupledQubitSystem) -> RateSet:
    """gamma(w) = J N(w); Gamma(w) = J (N(w) + 1) for bosons, J (1 - N(w)) for fermions."""
    J = spec.coupling
    n_plus, e_plus = _factors(spec, system.omega_plus)
    n_minus, e_minus = _factors(spec, system.omega_minus)
    return RateSet(J * n_plus, J * n_minus, J * e_plus, J * e_minus)
