"""Hydrogen 1s/2p eigenstates, two-component superpositions, and the
volume quadratures (norms, orthogonality, dipole strength) that feed the
transfer dynamics.

All spatial coordinates are dimensionless, in units of the Bohr radius;
conversion to SI happens only at module boundaries.  The amplitudes are

    R_1s(r)        = exp(-r) / sqrt(pi)
    R_2p0(r,theta) = r exp(-r/2) cos(theta) / (4 sqrt(2 pi))

both normalized so that  int R^2 dvol = 1  over all space.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .constants import PhysicalConstants, TransitionEnergy, transition_energy

SQRT_PI = math.sqrt(math.pi)
P210_NORM = 1.0 / (4.0 * math.sqrt(2.0 * math.pi))


class StateLabel(enum.Enum):
    S100 = "S100"
    P210 = "P210"
    # surrogate labels for the three-level cascade; no spatial amplitude
    S_UPPER = "S_upper"
    P_MIDDLE = "P_middle"
    S_GROUND = "S_ground"


@dataclass(frozen=True)
class EigenState:
    """A stationary state: label, angular frequency, spatial amplitude.

    ``amplitude`` maps (r, theta) -> real amplitude with r in Bohr radii.
    Cascade surrogate states carry ``amplitude=None`` and cannot be fed to
    the quadrature operations.
    """

    label: StateLabel
    omega: float  # rad/s
    amplitude: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    parity: int = 0  # +1 even in z, -1 odd in z, 0 unknown

    def __call__(self, r, theta):
        return eval_eigenstate(self, r, theta)


def _amp_s100(r, theta):
    return np.exp(-r) / SQRT_PI


def _amp_p210(r, theta):
    return P210_NORM * r * np.exp(-r / 2.0) * np.cos(theta)


def ground_state(constants: PhysicalConstants | None = None) -> EigenState:
    """The 1s state (n=1), omega = E_1/hbar with E_1 = -hartree/2."""
    k = constants or PhysicalConstants()
    return EigenState(StateLabel.S100, -0.5 * k.hartree_energy() / k.hbar,
                      _amp_s100, parity=+1)


def excited_state(constants: PhysicalConstants | None = None) -> EigenState:
    """The 2p, m=0 state (n=2), omega = E_2/hbar with E_2 = -hartree/8."""
    k = constants or PhysicalConstants()
    return EigenState(StateLabel.P210, -0.125 * k.hartree_energy() / k.hbar,
                      _amp_p210, parity=-1)


def eval_eigenstate(state: EigenState, r, theta) -> np.ndarray:
    """Evaluate a state's real spatial amplitude at (r, theta).

    r is in Bohr radii and must be >= 0; theta is the polar angle.
    """
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(r < 0):
        raise ValueError("radial coordinate must be non-negative")
    if state.amplitude is None:
        raise ValueError(f"state {state.label.value} has no spatial amplitude")
    return state.amplitude(r, theta)


@dataclass(frozen=True)
class SuperpositionState:
    """Real mixing amplitudes and phase offsets of a 2- or 3-component state.

    The squared amplitudes are level occupations and must sum to 1.
    """

    amps: tuple
    phases: tuple

    def __post_init__(self):
        amps = tuple(float(a) for a in self.amps)
        phases = tuple(float(p) for p in self.phases)
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "phases", phases)
        if len(amps) not in (2, 3) or len(phases) != len(amps):
            raise ValueError("need 2 or 3 amplitudes with matching phases")
        if not all(0.0 <= a <= 1.0 for a in amps):
            raise ValueError("amplitudes must lie in [0, 1]")
        if not abs(sum(a * a for a in amps) - 1.0) <= 1e-12:
            raise ValueError("squared amplitudes must sum to 1 within 1e-12")

    @property
    def a(self) -> float:
        return self.amps[0]

    @property
    def b(self) -> float:
        return self.amps[1]

    @property
    def relative_phase(self) -> float:
        """phi = phi_a - phi_b, the phase of the density cross term."""
        return self.phases[0] - self.phases[1]


def two_state(a: float, b: float, phi: float = 0.0) -> SuperpositionState:
    """Convenience constructor with phase phi carried on the first component."""
    return SuperpositionState((a, b), (phi, 0.0))


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureSpec:
    """Tensor-product Gauss-Legendre rule in (r, theta).

    The radial cutoff must be far enough out that the neglected exponential
    tail is below the target tolerance; 40 Bohr radii leaves a 1s tail
    below 1e-15.
    """

    radial_cutoff: float = 40.0
    radial_points: int = 2000
    angular_points: int = 200

    def refined(self, factor: int = 2) -> "QuadratureSpec":
        return QuadratureSpec(self.radial_cutoff,
                              self.radial_points * factor,
                              self.angular_points * factor)

    def coarsened(self) -> "QuadratureSpec":
        return QuadratureSpec(self.radial_cutoff,
                              max(8, self.radial_points // 2),
                              max(8, self.angular_points // 2))


@dataclass(frozen=True)
class QuadratureResult:
    """Integral value with a refinement-based error estimate."""

    value: float
    error_estimate: float
    converged: bool

    def __float__(self) -> float:
        return self.value


@lru_cache(maxsize=32)
def _gauss_nodes(a: float, b: float, n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


def _volume_integral(f, spec: QuadratureSpec) -> float:
    """2 pi * int f(r,theta) r^2 sin(theta) dr dtheta (azimuthal symmetry)."""
    r, wr = _gauss_nodes(0.0, spec.radial_cutoff, spec.radial_points)
    th, wth = _gauss_nodes(0.0, math.pi, spec.angular_points)
    vals = f(r[:, None], th[None, :])
    integ = np.einsum("i,j,ij->", wr * r * r, wth * np.sin(th), vals)
    return 2.0 * math.pi * float(integ)


def _with_refinement(f, spec: QuadratureSpec) -> QuadratureResult:
    fine = _volume_integral(f, spec)
    coarse = _volume_integral(f, spec.coarsened())
    err = abs(fine - coarse)
    return QuadratureResult(fine, err, err <= 1e-6)


def norm_integral(s1: EigenState, s2: EigenState,
                  spec: QuadratureSpec | None = None) -> QuadratureResult:
    """int R1 R2 dvol: 1 for a state paired with itself, 0 for distinct states."""
    spec = spec or QuadratureSpec()
    return _with_refinement(
        lambda r, th: eval_eigenstate(s1, r, th) * eval_eigenstate(s2, r, th),
        spec)


def dipole_strength(s1: EigenState, s2: EigenState,
                    spec: QuadratureSpec | None = None) -> QuadratureResult:
    """Transition dipole strength 2 q int R1 R2 z dvol, in units of q*a0.

    Vanishes for same-parity pairs (the integrand is odd in z); the 1s-2p0
    pair gives 2 * 128 sqrt(2)/243 ~ 1.48987.
    """
    spec = spec or QuadratureSpec()
    return _with_refinement(
        lambda r, th: 2.0 * eval_eigenstate(s1, r, th)
        * eval_eigenstate(s2, r, th) * r * np.cos(th),
        spec)


def dipole_strength_si(value_q_a0: float,
                       constants: PhysicalConstants | None = None) -> float:
    """Convert a dipole strength from q*a0 units to coulomb-meters."""
    k = constants or PhysicalConstants()
    return value_q_a0 * k.electron_charge_q * k.bohr_radius_a0


# ---------------------------------------------------------------------------
# two-component charge density
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DensitySliceProfile:
    """Per-slice contributions of the two-component density along z.

    Each array gives the charge fraction contributed by the transverse
    plane at the corresponding z (in Bohr radii): the two stationary
    terms a^2 R1^2 and b^2 R2^2, the oscillating cross term
    2ab R1 R2 cos(omega0 t + phi), and their sum.  The total integrates
    to 1 over z at every time.
    """

    z: np.ndarray
    ground: np.ndarray
    excited: np.ndarray
    cross: np.ndarray
    total: np.ndarray

    def first_moment(self) -> float:
        """<z> of the slice profile, by trapezoid over the z grid."""
        return float(np.trapezoid(self.total * self.z, self.z))


def _slice_integrals(z_grid: np.ndarray, spec: QuadratureSpec):
    """Transverse-plane integrals of R1^2, R2^2 and R1 R2 at each z.

    Integrates 2 pi s ds over the in-plane radius s, with
    r = sqrt(s^2 + z^2) and cos(theta) = z/r.
    """
    s, ws = _gauss_nodes(0.0, spec.radial_cutoff, spec.radial_points)
    z = np.asarray(z_grid, dtype=float)[:, None]
    r = np.sqrt(s[None, :] ** 2 + z ** 2)
    r_safe = np.where(r == 0.0, 1e-300, r)
    cos_th = z / r_safe
    r1 = np.exp(-r) / SQRT_PI
    r2 = P210_NORM * r * np.exp(-r / 2.0) * cos_th
    w = 2.0 * math.pi * ws * s
    return r1 * r1 @ w, r2 * r2 @ w, r1 * r2 @ w


def mixed_density_slice(state: SuperpositionState, t: float,
                        z_grid: Sequence[float],
                        omega0: float = 1.0,
                        spec: QuadratureSpec | None = None) -> DensitySliceProfile:
    """Decomposed slice profile of the two-component charge density.

    ``t`` is in units matching ``omega0`` (default: omega0 = 1, so t is in
    radians of the beat oscillation).
    """
    if len(state.amps) != 2:
        raise ValueError("mixed_density_slice needs a 2-component state")
    spec = spec or QuadratureSpec()
    z = np.asarray(z_grid, dtype=float)
    g_sl, e_sl, x_sl = _slice_integrals(z, spec)
    a, b = state.amps
    cosw = math.cos(omega0 * t + state.relative_phase)
    ground = a * a * g_sl
    excited = b * b * e_sl
    cross = 2.0 * a * b * cosw * x_sl
    return DensitySliceProfile(z, ground, excited, cross,
                               ground + excited + cross)


# ---------------------------------------------------------------------------
# oscillating dipole of a superposition
# ---------------------------------------------------------------------------

def dipole_moment(state: SuperpositionState, d12: float, omega0: float,
                  t) -> np.ndarray:
    """d12 * a * b * cos(omega0 t + phi): the oscillating dipole moment.

    Units follow d12 (q*a0 or C*m).  A pure eigenstate (a or b zero) is
    stationary and returns 0 for all t.
    """
    if len(state.amps) != 2:
        raise ValueError("dipole_moment needs a 2-component state")
    a, b = state.amps
    return d12 * a * b * np.cos(omega0 * np.asarray(t, dtype=float)
                                + state.relative_phase)


def dipole_velocity(state: SuperpositionState, d12: float, omega0: float,
                    t) -> np.ndarray:
    """q d<z>/dt = -omega0 d12 a b sin(omega0 t + phi).

    Valid when the mixing amplitudes drift slowly over one beat cycle
    (d(ab)/dt << ab omega0), which drops the envelope-derivative term.
    """
    a, b = state.amps
    return -omega0 * d12 * a * b * np.sin(
        omega0 * np.asarray(t, dtype=float) + state.relative_phase)


def dipole_acceleration(state: SuperpositionState, d12: float, omega0: float,
                        t) -> np.ndarray:
    """q d2<z>/dt2 = -omega0^2 d12 a b cos(omega0 t + phi) (slow envelope)."""
    a, b = state.amps
    return -omega0 ** 2 * d12 * a * b * np.cos(
        omega0 * np.asarray(t, dtype=float) + state.relative_phase)


__all__ = [
    "StateLabel", "EigenState", "SuperpositionState", "two_state",
    "QuadratureSpec", "QuadratureResult", "DensitySliceProfile",
    "ground_state", "excited_state", "eval_eigenstate",
    "norm_integral", "dipole_strength", "dipole_strength_si",
    "mixed_density_slice", "dipole_moment", "dipole_velocity",
    "dipole_acceleration", "transition_energy", "TransitionEnergy",
]
