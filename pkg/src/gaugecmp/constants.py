"""Physical constants and the internal unit system.

Internally the package works in natural units hbar = c = epsilon_0 = 1 with
the electron (reduced) mass mu_e as the mass unit, so mu_e = 1. The
fine-structure constant alpha is the only coupling parameter; the Bohr
radius is a0 = 1/(mu_e * alpha) and the electric charge is q = sqrt(4 pi
alpha). SI conversions happen only at the output boundary through the
natural time unit hbar/(mu_e c^2) expressed in seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "FINE_STRUCTURE_CONSTANT",
    "ELECTRON_PROTON_MASS_RATIO",
    "HYDROGEN_REDUCED_MASS",
    "ELEMENTARY_CHARGE_NATURAL",
    "PhysicalConstants",
    "seconds_per_natural_time",
]

# CODATA 2018 fine-structure constant.
FINE_STRUCTURE_CONSTANT = 7.2973525693e-3

# CODATA 2018 electron-to-proton mass ratio.
ELECTRON_PROTON_MASS_RATIO = 1.0 / 1836.15267343

# Reduced mass of the electron-proton system in electron masses.
HYDROGEN_REDUCED_MASS = 1.0 / (1.0 + ELECTRON_PROTON_MASS_RATIO)

# q = sqrt(4 pi alpha) in natural (Heaviside-Lorentz) units.
ELEMENTARY_CHARGE_NATURAL = math.sqrt(4.0 * math.pi * FINE_STRUCTURE_CONSTANT)

# hbar and the electron rest energy, used only for the seconds-per-natural-
# time conversion at the output boundary.
_HBAR_SI = 1.054571817e-34  # J s
_ELECTRON_REST_ENERGY_SI = 8.1871057769e-14  # J


def seconds_per_natural_time(mass_in_electron_masses: float = HYDROGEN_REDUCED_MASS) -> float:
    """Seconds per natural time unit, hbar/(mu c^2).

    The default mass is the hydrogen reduced mass, which is the convention
    under which the 2p -> 1s decay rate comes out at its textbook value.
    """
    if mass_in_electron_masses <= 0.0:
        raise ValueError("mass must be positive")
    return _HBAR_SI / (_ELECTRON_REST_ENERGY_SI * mass_in_electron_masses)


@dataclass(frozen=True)
class PhysicalConstants:
    """Unit-system snapshot: alpha, the Bohr radius, and the SI time unit.

    The invariant a0 * mu_e * alpha = 1 holds exactly by construction.
    """

    alpha: float = FINE_STRUCTURE_CONSTANT
    a0: float = 1.0 / FINE_STRUCTURE_CONSTANT
    si_time_unit: float = seconds_per_natural_time()

    def __post_init__(self) -> None:
        if self.alpha <= 0.0 or self.a0 <= 0.0 or self.si_time_unit <= 0.0:
            raise ValueError("constants must be positive")

    @property
    def charge(self) -> float:
        """q = sqrt(4 pi alpha)."""
        return math.sqrt(4.0 * math.pi * self.alpha)
