"""Conversion between laboratory parameters and the dimensionless pair (u, theta).

Inputs use the units natural for semiconductor wires: effective mass in
units of the bare electron mass, energy in meV, contact exchange coupling in
eV*Angstrom and impurity spacing in nm.  The only physics downstream of this
module is dimensionless, so conversion is a thin front end:

    k      = sqrt(2 m* E) / hbar
    rho(E) = sqrt(2 m* / E) / (pi hbar)      (states per unit length and energy)
    u      = rho(E) * J
    theta  = k * x0
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants

from ..closed_form import DimensionlessParams
from ..errors import DomainError

_EV = constants.elementary_charge  # J
_MEV = 1e-3 * _EV
_EV_ANGSTROM = _EV * 1e-10         # J * m
_NM = 1e-9


@dataclass(frozen=True)
class PhysicalParams:
    """Material parameters of the wire and the injected electron."""

    effective_mass: float        # units of the bare electron mass
    energy_mev: float
    coupling_ev_angstrom: float
    spacing_nm: float

    def __post_init__(self):
        for name in ("effective_mass", "energy_mev", "spacing_nm"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise DomainError(f"{name} must be finite and > 0, got {value}")
        if not math.isfinite(self.coupling_ev_angstrom) or self.coupling_ev_angstrom < 0:
            raise DomainError("coupling must be finite and >= 0")


def wave_number(effective_mass: float, energy_mev: float) -> float:
    """Electron wave number in 1/m."""
    if effective_mass <= 0 or energy_mev <= 0:
        raise DomainError("mass and energy must be positive")
    m = effective_mass * constants.m_e
    e = energy_mev * _MEV
    return math.sqrt(2.0 * m * e) / constants.hbar


def density_of_states(effective_mass: float, energy_mev: float) -> float:
    """1D density of states per unit length, in 1/(J*m)."""
    m = effective_mass * constants.m_e
    e = energy_mev * _MEV
    return math.sqrt(2.0 * m / e) / (math.pi * constants.hbar)


def convert_units(phys: PhysicalParams) -> DimensionlessParams:
    """Map physical parameters to the dimensionless coupling and phase."""
    u = density_of_states(phys.effective_mass, phys.energy_mev) * (
        phys.coupling_ev_angstrom * _EV_ANGSTROM
    )
    theta = wave_number(phys.effective_mass, phys.energy_mev) * phys.spacing_nm * _NM
    return DimensionlessParams(u=u, theta=theta)


def spacing_for_phase(effective_mass: float, energy_mev: float, theta: float) -> float:
    """Impurity spacing in nm that realizes a given phase theta = k x0."""
    if theta <= 0:
        raise DomainError("theta must be > 0")
    return theta / wave_number(effective_mass, energy_mev) / _NM
