"""Coincidence-counting experiment models: two-source intensity
interference, single-photon splitting statistics, and the cascade
polarization-correlation curve with its shared-axis classical contrast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


# ---------------------------------------------------------------------------
# two incoherent sources, two detectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HbtGeometry:
    """Two sources a distance ``d12`` apart, two detectors ``dAB`` apart,
    source and detector baselines parallel and ``L`` apart."""

    d12: float
    dAB: float
    L: float
    wavelength: float

    def __post_init__(self):
        if min(self.d12, self.L, self.wavelength) <= 0 or self.dAB < 0:
            raise ValueError("geometry lengths must be positive")

    @property
    def far_field(self) -> bool:
        """Validity flag: the closed-form rate assumes L >> baselines."""
        return self.L >= 100.0 * max(self.d12, self.dAB)


def hbt_coincidence_rate(g: HbtGeometry) -> float:
    """Normalized coincidence rate 1 + cos(2 pi dAB d12 / (wavelength L)).

    Ranges over [0, 2]: twice the accidental level at coincident
    detectors, with fringe period wavelength * L / d12 in the detector
    separation.
    """
    return 1.0 + math.cos(2.0 * math.pi * g.dAB * g.d12
                          / (g.wavelength * g.L))


def hbt_fringe_period(g: HbtGeometry) -> float:
    """Detector-separation period of the coincidence fringe."""
    return g.wavelength * g.L / g.d12


# ---------------------------------------------------------------------------
# splitting a single photon between two detectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EmitterStream:
    """A sequentially re-excited source feeding a two-detector splitter.

    The source produces one whole-photon event per ~``mean_interval`` as a
    renewal stream whose gaps are Erlang-distributed (``erlang_shape``
    pump stages), so two *primary* events never land in the same
    coincidence window.  An independent second excited atom contaminates
    the stream at ``double_fraction`` of the primary rate, supplying the
    accidental simultaneous pairs.  Each event routes to one detector
    (never both): lost with probability ``p_loss``, otherwise A or B with
    equal chance.
    """

    mean_interval: float = 12e-9   # s
    window: float = 1e-9           # s, coincidence bin width
    duration: float = 1e-3         # s
    rng_seed: int = 0
    p_loss: float = 0.0
    double_fraction: float = 0.02
    erlang_shape: int = 6

    def __post_init__(self):
        if self.window >= self.mean_interval:
            raise ValueError("window must be below the mean interval")
        if min(self.mean_interval, self.window, self.duration) <= 0:
            raise ValueError("times must be positive")
        if not 0.0 <= self.p_loss <= 1.0:
            raise ValueError("p_loss must lie in [0, 1]")
        if self.double_fraction < 0:
            raise ValueError("double_fraction must be non-negative")


@dataclass(frozen=True)
class SplitPhotonResult:
    """Delay histogram of A-B coincidences plus the outcome tally."""

    delay_bins: np.ndarray       # bin centers, seconds
    counts: np.ndarray
    n_emitted: int
    n_detected_a: int
    n_detected_b: int
    n_lost: int
    zero_delay_count: int
    plateau_level: float         # mean count of the outermost bins
    accidental_expectation: float

    @property
    def dip_ratio(self) -> float:
        """Zero-delay bin over the large-delay plateau."""
        return self.zero_delay_count / self.plateau_level


def accidental_zero_delay_expectation(s: EmitterStream) -> float:
    """Expected zero-delay coincidences from uncorrelated event pairs.

    Primary events pair with contaminant events (both orderings) and
    contaminants pair among themselves; primaries never self-pair at zero
    delay.  Each stream's detector rate is (rate) * (1-p_loss)/2, and a
    flat pair density contributes rate_A * rate_B * window * duration
    per bin.
    """
    lam1 = 1.0 / s.mean_interval
    lam2 = s.double_fraction * lam1
    per_det = 0.5 * (1.0 - s.p_loss)
    pair_density = (2.0 * lam1 * lam2 + lam2 * lam2) * per_det ** 2
    return pair_density * s.window * s.duration


def split_photon_run(s: EmitterStream,
                     max_delay: float | None = None) -> SplitPhotonResult:
    """Monte Carlo event stream through the splitter.

    Every emission completes exactly one whole-photon transfer into one
    detector (or into a non-detector partner with probability
    ``p_loss``), so a lone emission can never produce a coincidence: the
    zero-delay bin fills only when a second excited atom happens to fire
    inside the same window, and is far below the large-delay plateau.
    Bit-for-bit reproducible for a fixed ``rng_seed``.
    """
    rng = np.random.default_rng(s.rng_seed)
    if max_delay is None:
        max_delay = 20.0 * s.mean_interval

    # primary renewal stream: Erlang(k) gaps, mean = mean_interval
    k = s.erlang_shape
    n_guess = int(s.duration / s.mean_interval * 1.25) + 16
    times = []
    t_acc = 0.0
    while True:
        gaps = rng.gamma(k, s.mean_interval / k, size=n_guess)
        block = t_acc + np.cumsum(gaps)
        times.append(block[block < s.duration])
        if block[-1] >= s.duration:
            break
        t_acc = float(block[-1])
    primary = np.concatenate(times)

    # independent second-atom stream: Poisson at double_fraction of the rate
    n_double = rng.poisson(s.double_fraction * s.duration / s.mean_interval)
    contaminant = np.sort(rng.uniform(0.0, s.duration, size=n_double))

    events = np.sort(np.concatenate([primary, contaminant]))
    if events.size == 0:
        raise ValueError("degenerate run: no events within the duration")
    routes = rng.choice(3, size=events.size,
                        p=[s.p_loss, 0.5 * (1 - s.p_loss),
                           0.5 * (1 - s.p_loss)])
    t_a = events[routes == 1]
    t_b = events[routes == 2]

    n_bins = 2 * int(round(max_delay / s.window)) + 1
    edges = (np.arange(n_bins + 1) - n_bins / 2.0) * s.window
    counts = np.zeros(n_bins, dtype=np.int64)
    # histogram all B-A delays within +-max_delay, blockwise over A
    for start in range(0, t_a.size, 65536):
        chunk = t_a[start:start + 65536]
        lo = np.searchsorted(t_b, chunk - max_delay, side="left")
        hi = np.searchsorted(t_b, chunk + max_delay, side="right")
        n_per = hi - lo
        total = int(n_per.sum())
        if total == 0:
            continue
        within = (np.arange(total)
                  - np.repeat(np.cumsum(n_per) - n_per, n_per))
        d = t_b[np.repeat(lo, n_per) + within] - np.repeat(chunk, n_per)
        counts += np.histogram(d, bins=edges)[0]

    centers = 0.5 * (edges[:-1] + edges[1:])
    outer = np.abs(centers) > 0.5 * max_delay
    plateau = float(counts[outer].mean())
    zero_idx = n_bins // 2
    return SplitPhotonResult(
        delay_bins=centers,
        counts=counts,
        n_emitted=int(events.size),
        n_detected_a=int(t_a.size),
        n_detected_b=int(t_b.size),
        n_lost=int(np.count_nonzero(routes == 0)),
        zero_delay_count=int(counts[zero_idx]),
        plateau_level=plateau,
        accidental_expectation=accidental_zero_delay_expectation(s),
    )


# ---------------------------------------------------------------------------
# polarization-correlation curve
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolarimeterPair:
    """Two linear polarizers with per-axis transmittances.

    ``eff_major``/``eff_minor`` are the transmittances along and across
    each polarizer's axis; a perfect polarizer is (1, 0).
    """

    theta1: float = 0.0
    theta2: float = 0.0
    eff_major: tuple = (1.0, 1.0)
    eff_minor: tuple = (0.0, 0.0)

    def __post_init__(self):
        for m, mn in zip(self.eff_major, self.eff_minor):
            if not (0.0 <= mn <= m <= 1.0):
                raise ValueError(
                    "need 0 <= eff_minor <= eff_major <= 1 per polarizer")

    @property
    def phi(self) -> float:
        return self.theta2 - self.theta1


def _transmittance(major: float, minor: float, angle) -> np.ndarray:
    """Passage probability of light polarized ``angle`` from the axis.

    cos^2 is computed via the double angle, (1 + cos 2*angle)/2, which is
    exactly zero at a right angle (cos of the float pi is exactly -1).
    """
    c2 = 0.5 * (1.0 + np.cos(2.0 * np.asarray(angle, dtype=float)))
    return major * c2 + minor * (1.0 - c2)


def fc_coincidence_ti(p: PolarimeterPair) -> float:
    """Coincidence probability with the shared axis locked to polarizer 2.

    The first transfer to complete passes polarizer 2 along its major
    axis and pins the dipole direction there, so the partner photon meets
    polarizer 1 at the relative angle phi: the coincidence probability is
    (e1M cos^2 phi + e1m sin^2 phi) * e2M.  Perfect polarizers give
    cos^2(phi), exactly zero at phi = pi/2; any minor-axis leakage leaves
    a strictly positive floor there.  Depends on the polarizer angles
    only through their difference.
    """
    e1M, e2M = p.eff_major
    e1m, _ = p.eff_minor
    return float(_transmittance(e1M, e1m, p.phi) * e2M)


def fc_coincidence_classical(p: PolarimeterPair, samples: int = 100_000,
                             rng_seed: int = 0) -> float:
    """Shared-random-axis model: Monte Carlo mean of the product of the
    two independent passage probabilities.

    Each pair carries one polarization axis drawn uniformly; each photon
    then passes its polarizer with the axis-angle transmittance.  For
    perfect polarizers this converges to (2 + cos 2 phi)/8, which never
    drops below 1/8: the 90-degree coincidence rate cannot vanish, and
    that floor is what separates this family from the locked-axis model.
    """
    if samples < 1e4:
        raise ValueError("use at least 1e4 samples")
    rng = np.random.default_rng(rng_seed)
    theta = rng.uniform(0.0, math.pi, size=samples)
    t1 = _transmittance(p.eff_major[0], p.eff_minor[0], theta - p.theta1)
    t2 = _transmittance(p.eff_major[1], p.eff_minor[1], theta - p.theta2)
    return float(np.mean(t1 * t2))


def fc_classical_exact(p: PolarimeterPair) -> float:
    """Closed form of the shared-random-axis coincidence probability.

    Averaging the transmittance product over the axis gives
    (e1M+e1m)(e2M+e2m)/4 + (e1M-e1m)(e2M-e2m) cos(2 phi) / 8;
    for perfect polarizers, (2 + cos 2 phi)/8.
    """
    e1M, e2M = p.eff_major
    e1m, e2m = p.eff_minor
    return ((e1M + e1m) * (e2M + e2m) / 4.0
            + (e1M - e1m) * (e2M - e2m) * math.cos(2.0 * p.phi) / 8.0)


def fc_curve(p_base: PolarimeterPair, phi_values: Sequence[float]) -> dict:
    """Tabulate both models over polarizer angles phi in [0, pi/2].

    Returns columns ``phi``, ``locked_axis`` (zero at pi/2 for perfect
    polarizers) and ``shared_random_axis`` (never zero).
    """
    phi_values = np.asarray(phi_values, dtype=float)
    if np.any(phi_values < 0) or np.any(phi_values > math.pi / 2 + 1e-12):
        raise ValueError("phi values must lie in [0, pi/2]")
    ti = []
    classical = []
    for phi in phi_values:
        pair = PolarimeterPair(theta1=p_base.theta1,
                               theta2=p_base.theta1 + phi,
                               eff_major=p_base.eff_major,
                               eff_minor=p_base.eff_minor)
        ti.append(fc_coincidence_ti(pair))
        classical.append(fc_classical_exact(pair))
    return {"phi": phi_values, "locked_axis": np.asarray(ti),
            "shared_random_axis": np.asarray(classical)}
