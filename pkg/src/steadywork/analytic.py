"""Closed-form steady states in the energy eigenbasis.

Two population orderings are offered:

``physical``
    every population is attached to the eigenstate whose detailed-balance
    weight it carries, and the (2,3) coherence is quoted as <e2|rho|e3> in
    the eigenvector phase convention of :mod:`steadywork.core`. This is the
    ordering that agrees with the Redfield generator.
``paper-literal``
    closed-form index k is attached to |e_k> and the literal coherence
    expression is used as rho_23 verbatim. For the equilibrium formula this yields a
    population-inverted state at low temperature.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import Basis, CoupledQubitSystem, DensityMatrix
from .reservoir import ReservoirSpec, Statistics, occupation, transition_rates


class OrderingMode(str, enum.Enum):
    PHYSICAL = "physical"
    PAPER_LITERAL = "paper-literal"


# Literal equilibrium index (0-based) that lands on each ascending eigenstate.
_EQUILIBRIUM_PHYSICAL_ORDER = (3, 0, 2, 1)


@dataclass(frozen=True)
class NoneqFactors:
    """Mean occupations L, half-differences M and their detuned versions."""

    L_plus: float
    L_minus: float
    M_plus: float
    M_minus: float
    script_L_plus: float
    script_L_minus: float
    script_M_plus: float
    script_M_minus: float


def noneq_factors(
    system: CoupledQubitSystem, reservoir1: ReservoirSpec, reservoir2: ReservoirSpec
) -> NoneqFactors:
    wp, wm = system.omega_plus, system.omega_minus
    n1p, n1m = occupation(reservoir1, wp), occupation(reservoir1, wm)
    n2p, n2m = occupation(reservoir2, wp), occupation(reservoir2, wm)
    Lp, Lm = 0.5 * (n1p + n2p), 0.5 * (n1m + n2m)
    Mp, Mm = 0.5 * (n1p - n2p), 0.5 * (n1m - n2m)
    if system.symmetric:
        # exact pi/2: keep the detuned factors bit-identical to the symmetric ones
        cos_t, sin_t = 0.0, 1.0
    else:
        cos_t, sin_t = math.cos(system.theta), math.sin(system.theta)
    return NoneqFactors(
        Lp, Lm, Mp, Mm,
        Lp + Mp * cos_t, Lm - Mm * cos_t, Mp * sin_t, Mm * sin_t,
    )


def _require_closed_form_system(system: CoupledQubitSystem) -> None:
    if system.params.lam <= 0:
        raise ValueError("closed-form steady states need lambda > 0 (e2, e3 degenerate otherwise)")


def _require_same_kind(r1: ReservoirSpec, r2: ReservoirSpec) -> None:
    if r1.kind is not r2.kind:
        raise ValueError("mixed boson/fermion reservoir pairs are not supported")
    if r1.coupling != r2.coupling:
        raise ValueError(
            f"closed forms assume a balanced spectral density, got J1={r1.coupling}, J2={r2.coupling}"
        )


def _require_symmetric(system: CoupledQubitSystem) -> None:
    if not system.symmetric:
        raise ValueError(
            f"symmetric-qubit closed form requires Delta = 0, got Delta={system.Delta}"
        )


def _assemble(pops, rho23: complex) -> DensityMatrix:
    m = np.diag(np.asarray(pops, dtype=complex))
    m[1, 2] = rho23
    m[2, 1] = np.conj(rho23)
    return DensityMatrix(m, Basis.ENERGY)


def equilibrium_steady_state(
    system: CoupledQubitSystem,
    reservoir1: ReservoirSpec,
    reservoir2: ReservoirSpec,
    mode: OrderingMode = OrderingMode.PHYSICAL,
) -> DensityMatrix:
    """Diagonal steady state for two identical reservoirs and symmetric qubits."""
    mode = OrderingMode(mode)
    _require_same_kind(reservoir1, reservoir2)
    if reservoir1 != reservoir2:
        raise ValueError("equilibrium closed form requires identical reservoirs (same T, mu, J)")
    _require_symmetric(system)
    _require_closed_form_system(system)
    r1 = transition_rates(reservoir1, system)
    r2 = transition_rates(reservoir2, system)
    gp = r1.gamma_plus + r2.gamma_plus
    gm = r1.gamma_minus + r2.gamma_minus
    Gp = r1.Gamma_plus + r2.Gamma_plus
    Gm = r1.Gamma_minus + r2.Gamma_minus
    Z = (gm + Gm) * (gp + Gp)
    weights = np.array([Gp * gm, gm * gp, Gm * gp, Gm * Gp]) / Z
    if mode is OrderingMode.PHYSICAL:
        weights = weights[list(_EQUILIBRIUM_PHYSICAL_ORDER)]
    return _assemble(weights, 0.0)


def _boson_elements(Lp, Lm, Mp, Mm, omega_over_J):
    K = 1.0 + 2.0 * Lp + 2.0 * Lm
    s1 = Mp - Mm * (K + 2.0)
    s2 = Mm - Mp * (K + 2.0)
    z1 = Mp + Mm * K
    z2 = Mm + Mp * K
    S = 1.0 + Lp + Lm
    R = 1.0 / (4.0 * S * S + omega_over_J**2)
    norm = (1.0 + 2.0 * Lp) * (1.0 + 2.0 * Lm) - 16.0 * Mp * Mm * S * S * R
    pops = np.array([
        (1.0 + Lp) * (1.0 + Lm) - s1 * s2 * R,
        Lm * (1.0 + Lp) + s2 * z1 * R,
        Lp * (1.0 + Lm) + s1 * z2 * R,
        Lp * Lm - z1 * z2 * R,
    ]) / norm
    rho23 = (Mp * (1.0 + 2.0 * Lm) + Mm * (1.0 + 2.0 * Lp)) / (2.0 * S + 1j * omega_over_J) / norm
    return pops, rho23


def _fermion_elements(Lp, Lm, Mp, Mm, omega_over_J):
    R = (Mp + Mm) ** 2 / (4.0 + omega_over_J**2)
    pops = np.array([
        (1.0 - Lp) * (1.0 - Lm) - R,
        Lm * (1.0 - Lp) + R,
        Lp * (1.0 - Lm) + R,
        Lp * Lm - R,
    ])
    rho23 = -(Mp + Mm) / (2.0 + 1j * omega_over_J)
    return pops, rho23


def _physical_coherence(kind: Statistics, literal: complex) -> complex:
    # The literal coherences are <e3|rho|e2>; the boson one additionally uses
    # the opposite sign for |e3>. Both checked against the Redfield null space.
    if kind is Statistics.BOSON:
        return -np.conj(literal)
    return np.conj(literal)


def _noneq_state(system, reservoir1, reservoir2, mode, detuned: bool) -> DensityMatrix:
    mode = OrderingMode(mode)
    f = noneq_factors(system, reservoir1, reservoir2)
    if detuned:
        args = (f.script_L_plus, f.script_L_minus, f.script_M_plus, f.script_M_minus)
    else:
        args = (f.L_plus, f.L_minus, f.M_plus, f.M_minus)
    ratio = system.Omega / reservoir1.coupling
    kind = reservoir1.kind
    if kind is Statistics.BOSON:
        pops, rho23 = _boson_elements(*args, ratio)
    else:
        pops, rho23 = _fermion_elements(*args, ratio)
    if mode is OrderingMode.PHYSICAL:
        rho23 = _physical_coherence(kind, rho23)
    return _assemble(pops, rho23)


def noneq_boson_steady_state(
    system: CoupledQubitSystem,
    reservoir1: ReservoirSpec,
    reservoir2: ReservoirSpec,
    mode: OrderingMode = OrderingMode.PHYSICAL,
) -> DensityMatrix:
    """Steady state for symmetric qubits between boson baths at T1, T2."""
    _require_same_kind(reservoir1, reservoir2)
    if reservoir1.kind is not Statistics.BOSON:
        raise ValueError("noneq_boson_steady_state needs boson reservoirs")
    _require_symmetric(system)
    _require_closed_form_system(system)
    return _noneq_state(system, reservoir1, reservoir2, mode, detuned=False)


def _require_equal_temperatures(r1: ReservoirSpec, r2: ReservoirSpec) -> None:
    if r1.temperature != r2.temperature:
        raise ValueError(
            "fermion closed form covers mu-driven non-equilibrium at equal temperatures, "
            f"got T1={r1.temperature}, T2={r2.temperature}"
        )


def noneq_fermion_steady_state(
    system: CoupledQubitSystem,
    reservoir1: ReservoirSpec,
    reservoir2: ReservoirSpec,
    mode: OrderingMode = OrderingMode.PHYSICAL,
) -> DensityMatrix:
    """Steady state for symmetric qubits between fermion leads at mu1, mu2 (T1 = T2)."""
    _require_same_kind(reservoir1, reservoir2)
    if reservoir1.kind is not Statistics.FERMION:
        raise ValueError("noneq_fermion_steady_state needs fermion reservoirs")
    _require_equal_temperatures(reservoir1, reservoir2)
    _require_symmetric(system)
    _require_closed_form_system(system)
    return _noneq_state(system, reservoir1, reservoir2, mode, detuned=False)


def asymmetric_steady_state(
    system: CoupledQubitSystem,
    reservoir1: ReservoirSpec,
    reservoir2: ReservoirSpec,
    mode: OrderingMode = OrderingMode.PHYSICAL,
) -> DensityMatrix:
    """Detuned qubits: the symmetric formulas with L, M replaced by their detuned forms.

    Reduces bit-for-bit to the symmetric result when Delta = 0.
    """
    _require_same_kind(reservoir1, reservoir2)
    if reservoir1.kind is Statistics.FERMION:
        _require_equal_temperatures(reservoir1, reservoir2)
    _require_closed_form_system(system)
    return _noneq_state(system, reservoir1, reservoir2, mode, detuned=True)


def is_equilibrium(reservoir1: ReservoirSpec, reservoir2: ReservoirSpec) -> bool:
    return reservoir1 == reservoir2


def analytic_steady_state(
    system: CoupledQubitSystem,
    reservoir1: ReservoirSpec,
    reservoir2: ReservoirSpec,
    mode: OrderingMode = OrderingMode.PHYSICAL,
    scenario: str = "auto",
) -> DensityMatrix:
    """Pick the closed form for a point.

    ``scenario`` is one of ``auto``, ``equilibrium``, ``nonequilibrium`` or
    ``asymmetric``; ``auto`` chooses from the point itself.
    """
    if scenario == "auto":
        if not system.symmetric:
            scenario = "asymmetric"
        elif is_equilibrium(reservoir1, reservoir2):
            scenario = "equilibrium"
        else:
            scenario = "nonequilibrium"
    if scenario == "equilibrium":
        return equilibrium_steady_state(system, reservoir1, reservoir2, mode)
    if scenario == "asymmetric":
        return asymmetric_steady_state(system, reservoir1, reservoir2, mode)
    if scenario == "nonequilibrium":
        if reservoir1.kind is Statistics.BOSON:
            return noneq_boson_steady_state(system, reservoir1, reservoir2, mode)
        return noneq_fermion_steady_state(system, reservoir1, reservoir2, mode)
    raise ValueError(f"unknown scenario {scenario!r}")
