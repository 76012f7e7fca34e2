"""Discrete phasor sums over two-segment propagation paths.

Every path runs source -> screen point -> detector; its phasor is a unit
arrow rotated by 2 pi (path length)/wavelength, optionally retimed by a
per-path delay (a lens).  Summing the arrows head-to-tail gives the
resultant whose squared length measures the event probability.  The
constructive core of the ensemble is the band of offsets within
sqrt(wavelength * r / 8) of the axis, where the extra path length stays
under a quarter wave.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

SPEED_OF_LIGHT = 299792458.0


class SamplingError(ValueError):
    """Adjacent paths differ by too much phase to resolve the sum."""


@dataclass(frozen=True)
class PathEnsemble:
    """Two-segment paths from ``source`` to ``detector`` via a screen.

    ``offsets`` are the transverse screen coordinates of the paths and
    must be symmetric about the axis.  ``delay_fn`` maps an offset to an
    extra propagation delay in seconds (positive = slowed), modelling
    glass in the path.  ``weights`` optionally apodize the aperture edge;
    unit weights reproduce plain head-to-tail arrows.
    """

    source: tuple = (0.0, 0.0)
    detector: tuple = (1.0, 0.0)
    screen_x: float | None = None    # default: midway
    offsets: np.ndarray = field(default_factory=lambda: np.linspace(-1e-3, 1e-3, 2001))
    wavelength: float = 5e-7
    delay_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    weights: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "offsets",
                           np.asarray(self.offsets, dtype=float))
        if self.wavelength <= 0:
            raise ValueError("wavelength must be positive")
        if self.screen_x is None:
            object.__setattr__(
                self, "screen_x",
                0.5 * (self.source[0] + self.detector[0]))
        if not (min(self.source[0], self.detector[0]) < self.screen_x
                < max(self.source[0], self.detector[0])):
            raise ValueError("screen must sit between source and detector")
        sym = np.sort(self.offsets) + np.sort(self.offsets)[::-1]
        if np.max(np.abs(sym)) > 1e-9 * (1.0 + np.max(np.abs(self.offsets))):
            raise ValueError("offsets must be symmetric about the axis")
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != self.offsets.shape:
                raise ValueError("weights must match offsets")
            object.__setattr__(self, "weights", w)

    def path_lengths(self) -> np.ndarray:
        sx, sy = self.source
        dx, dy = self.detector
        y = self.offsets
        leg1 = np.hypot(self.screen_x - sx, y - sy)
        leg2 = np.hypot(dx - self.screen_x, dy - y)
        return leg1 + leg2

    def phases(self) -> np.ndarray:
        ph = 2.0 * math.pi * self.path_lengths() / self.wavelength
        if self.delay_fn is not None:
            omega = 2.0 * math.pi * SPEED_OF_LIGHT / self.wavelength
            ph = ph + omega * np.asarray(self.delay_fn(self.offsets),
                                         dtype=float)
        return ph


def path_length(r: float, y) -> tuple:
    """Two-segment path length at axial distance r and screen offset y.

    Returns (exact, approximate): the Pythagorean value
    2 sqrt((r/2)^2 + y^2) and its small-offset expansion r + 2 y^2 / r.
    Phase accumulation always uses the exact value; the expansion is
    exposed for validation only.
    """
    if r <= 0:
        raise ValueError("axial distance must be positive")
    y = np.asarray(y, dtype=float)
    exact = 2.0 * np.sqrt((0.5 * r) ** 2 + y ** 2)
    approx = r + 2.0 * y ** 2 / r
    return exact, approx


def contributing_zone_halfwidth(r: float, wavelength: float) -> float:
    """Offset where the extra path length reaches a quarter wave:
    sqrt(wavelength * r / 8)."""
    return math.sqrt(wavelength * r / 8.0)


@dataclass(frozen=True)
class PhasorResultant:
    """Arrows, their head-to-tail sum, and the cumulative partial sums."""

    arrows: np.ndarray       # complex, one per path
    resultant: complex
    amplitude: float         # |resultant| / path count
    partial_sums: np.ndarray  # the "seahorse" polyline, cumulative

    @property
    def probability(self) -> float:
        """Squared normalized resultant length."""
        return self.amplitude ** 2


def phasor_sum(ensemble: PathEnsemble) -> PhasorResultant:
    """Sum the ensemble's phasors head to tail.

    Refuses (with a spacing diagnostic) when adjacent paths differ by more
    than pi/4 of phase, since the sum is then unresolved.
    """
    phases = ensemble.phases()
    order = np.argsort(ensemble.offsets, kind="stable")
    dphi = np.abs(np.diff(phases[order]))
    if dphi.size and float(dphi.max()) > math.pi / 4.0:
        worst = int(np.argmax(dphi))
        raise SamplingError(
            "adjacent-path phase step "
            f"{float(dphi.max()):.3f} rad > pi/4 near offset "
            f"{ensemble.offsets[order][worst]:.3e}; densify the offsets")
    arrows = np.exp(1j * phases)
    if ensemble.weights is not None:
        arrows = ensemble.weights * arrows
    resultant = complex(arrows.sum())
    return PhasorResultant(
        arrows=arrows,
        resultant=resultant,
        amplitude=abs(resultant) / len(arrows),
        partial_sums=np.cumsum(arrows[order]),
    )


def equal_delay_modifier(r: float) -> Callable[[np.ndarray], np.ndarray]:
    """Ideal-lens delay: slows each path so all arrive together.

    Compensates the exact extra propagation time (l(y) - l(0))/c, so
    every arrow in the ensemble points the same way and the resultant
    reaches the path count exactly.
    """
    def delay(y: np.ndarray) -> np.ndarray:
        exact, _ = path_length(r, y)
        return -(exact - r) / SPEED_OF_LIGHT
    return delay


# ---------------------------------------------------------------------------
# amplitude vs distance: the 1/r law
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistanceScan:
    """Result of an amplitude-vs-distance scan with its log-log fit."""

    r_values: np.ndarray
    amplitudes: np.ndarray    # coherent solid-angle measure per distance
    slope: float              # d log|A| / d log r
    intercept: float

    @property
    def intensity_slope(self) -> float:
        return 2.0 * self.slope


def _solid_angle_ensemble(r: float, wavelength: float, aperture: float,
                          n_paths: int, taper_frac: float):
    """Paths spaced uniformly in solid angle (uniform in y^2) out to the
    fixed transverse ``aperture``, with a cosine taper over the outer
    ``taper_frac`` so the hard edge does not ring."""
    u = (np.arange(n_paths) + 0.5) / n_paths     # cell centers in y^2
    y = aperture * np.sqrt(u)
    w = np.ones(n_paths)
    m = u > (1.0 - taper_frac)
    w[m] = 0.5 * (1.0 + np.cos(math.pi * (u[m] - (1.0 - taper_frac))
                               / taper_frac))
    offsets = np.concatenate([-y[::-1], y])
    weights = np.concatenate([w[::-1], w])
    return offsets, weights


def amplitude_vs_distance(r_values: Sequence[float],
                          wavelength: float = 5e-7,
                          aperture: float | None = None,
                          n_paths: int = 20001,
                          taper_frac: float = 0.35) -> DistanceScan:
    """Coherent amplitude vs source-detector distance, with log-log fit.

    For each r the screen sits midway, paths carry one unit of solid
    angle each (uniform in offset squared) out to a fixed transverse
    aperture, and the amplitude is the mean arrow times the aperture's
    solid angle -- the coherent solid angle that survives the phase
    winding.  Its fitted slope against r is -1: only the zone within a
    quarter-wave extra path keeps adding, and that zone's solid angle
    shrinks as pi * wavelength / (8 r).
    """
    r_values = np.asarray(sorted(float(r) for r in r_values))
    if np.any(r_values <= 0):
        raise ValueError("distances must be positive")
    if r_values[-1] / r_values[0] < 10.0:
        raise ValueError("scan should span at least one decade")
    if aperture is None:
        # a few contributing zones at the farthest distance
        aperture = math.sqrt(4.0 * r_values[-1] * wavelength)

    amps = []
    for r in r_values:
        offsets, weights = _solid_angle_ensemble(
            r, wavelength, aperture, n_paths, taper_frac)
        ens = PathEnsemble(source=(0.0, 0.0), detector=(r, 0.0),
                           offsets=offsets, wavelength=wavelength,
                           weights=weights)
        res = phasor_sum(ens)
        solid_angle = math.pi * (aperture / r) ** 2
        amps.append(abs(np.mean(res.arrows)) * solid_angle)
    amps = np.asarray(amps)
    slope, intercept = np.polyfit(np.log(r_values), np.log(amps), 1)
    return DistanceScan(r_values, amps, float(slope), float(intercept))


def enhancement_factor(r: float, wavelength: float,
                       lens_solid_angle: float) -> float:
    """Amplitude boost from an equal-delay optical system:
    (8 r / (pi wavelength)) * solid angle.

    Reduces to 1 when the solid angle is just the bare contributing zone
    pi*wavelength/(8r).  One steradian a meter from a ~1.2e-7 m source
    gives about 2e7.
    """
    if r <= 0 or wavelength <= 0 or lens_solid_angle <= 0:
        raise ValueError("arguments must be positive")
    if lens_solid_angle > 4.0 * math.pi:
        raise ValueError("solid angle cannot exceed 4 pi")
    return 8.0 * r * lens_solid_angle / (math.pi * wavelength)
