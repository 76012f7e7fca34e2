"""Physical constants and the hydrogen 2p-1s transition energy.

CODATA-2018 values.  h, q and c are exact SI-defined values; hbar is
derived from h at full float precision rather than stored truncated, so
that derived identities (Bohr radius, eps0*mu0*c^2 = 1) close to much
better than 1e-9 relative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

PLANCK_H = 6.62607015e-34          # J s, exact
ELEMENTARY_CHARGE = 1.602176634e-19  # C, exact
SPEED_OF_LIGHT = 299792458.0       # m/s, exact
ELECTRON_MASS = 9.1093837015e-31   # kg
BOHR_RADIUS = 5.29177210903e-11    # m
VACUUM_PERMEABILITY = 1.25663706212e-6   # H/m
VACUUM_PERMITTIVITY = 8.8541878128e-12   # F/m


@dataclass(frozen=True)
class PhysicalConstants:
    """Bundle of the constants every module consumes.

    All values SI.  Frozen: safe to share between threads.
    """

    bohr_radius_a0: float = BOHR_RADIUS
    electron_charge_q: float = ELEMENTARY_CHARGE
    electron_mass_m: float = ELECTRON_MASS
    hbar: float = field(default=PLANCK_H / (2.0 * math.pi))
    c: float = SPEED_OF_LIGHT
    mu0: float = VACUUM_PERMEABILITY
    eps0: float = VACUUM_PERMITTIVITY

    def bohr_radius_from_parts(self) -> float:
        """Bohr radius rebuilt from q, m, hbar, eps0 (consistency check)."""
        return (4.0 * math.pi * self.eps0 * self.hbar**2
                / (self.electron_mass_m * self.electron_charge_q**2))

    def hartree_energy(self) -> float:
        """q^2 / (4 pi eps0 a0) in joules."""
        return self.electron_charge_q**2 / (
            4.0 * math.pi * self.eps0 * self.bohr_radius_a0)


@dataclass(frozen=True)
class TransitionEnergy:
    """The 2p -> 1s transition energy computed two ways.

    ``rydberg_J`` is the level difference E2 - E1 = (3/8) q^2/(4 pi eps0 a0)
    (about 10.20 eV).  ``printed_J`` is the alternative closed form
    9 q^2/(128 pi eps0 a0) (about 7.65 eV) that circulates in some
    derivations of the transfer timescale.  The two disagree by the factor
    3/4; ``discrepant`` is set when they differ beyond 1e-6 relative.
    Downstream timescale formulas use the Rydberg value for omega0, which
    is the choice that reproduces the ~0.04 s/m free-space transfer time.
    """

    rydberg_J: float
    printed_J: float
    omega0: float          # rad/s, from the Rydberg value
    wavelength_m: float    # 2 pi c / omega0
    discrepant: bool

    @property
    def rydberg_eV(self) -> float:
        return self.rydberg_J / ELEMENTARY_CHARGE

    @property
    def printed_eV(self) -> float:
        return self.printed_J / ELEMENTARY_CHARGE


def transition_energy(constants: PhysicalConstants | None = None) -> TransitionEnergy:
    """Energy and angular frequency of the hydrogen 2p -> 1s transition."""
    k = constants or PhysicalConstants()
    rydberg = 0.375 * k.hartree_energy()
    printed = 9.0 * k.electron_charge_q**2 / (
        128.0 * math.pi * k.eps0 * k.bohr_radius_a0)
    omega0 = rydberg / k.hbar
    return TransitionEnergy(
        rydberg_J=rydberg,
        printed_J=printed,
        omega0=omega0,
        wavelength_m=2.0 * math.pi * k.c / omega0,
        discrepant=abs(printed / rydberg - 1.0) > 1e-6,
    )
