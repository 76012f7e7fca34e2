"""Paired retarded/advanced vector potential of an emitter/absorber pair,
and everything derived from it: field maps, zero-crossing contours,
Poynting flow, and path-phase diagnostics.

Natural units throughout: omega0 = c = 1, so lengths are in wavelength/2pi
and times in 1/omega0.  The emitter sits at the origin and radiates the
retarded wave; the absorber sits at (separation, 0) and hosts the advanced
wave.  Both terms carry a 1/r envelope scaled by ``envelope_rate``:

    A_ret(x,y,t) = -(envelope_rate / r_e) sin(t - r_e)
    A_adv(x,y,t) = +(envelope_rate / r_a) cos(t + separation + r_a)

with r_e, r_a the distances to the emitter and absorber.  Between the
atoms both terms propagate from emitter to absorber, so the interference
maxima drift steadily toward the absorber instead of standing still.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

TWO_PI = 2.0 * math.pi


class OutOfDomainError(ValueError):
    """Point query inside one of the exclusion discs around the atoms."""


@dataclass(frozen=True)
class HandshakeFieldConfig:
    """Geometry and sampling for the two-atom field.

    ``separation`` is the emitter-absorber distance in wavelength/2pi
    units.  The grid excludes discs of radius ``exclusion_radius`` around
    each atom, where the 1/r envelopes diverge.
    """

    separation: float = 12.0
    times: tuple = (0.0,)
    x_range: tuple | None = None      # default (-5, separation + 5)
    y_range: tuple = (-10.0, 10.0)
    nx: int = 800
    ny: int = 400
    envelope_rate: float = 1.0
    exclusion_radius: float = 0.05

    def __post_init__(self):
        if self.separation <= 0:
            raise ValueError("separation must be positive")
        if self.exclusion_radius <= 0:
            raise ValueError("exclusion radius must be positive")
        if len(self.times) == 0:
            raise ValueError("need at least one evaluation time")
        if self.x_range is None:
            object.__setattr__(self, "x_range",
                               (-5.0, self.separation + 5.0))

    def x_coords(self) -> np.ndarray:
        return np.linspace(self.x_range[0], self.x_range[1], self.nx)

    def y_coords(self) -> np.ndarray:
        return np.linspace(self.y_range[0], self.y_range[1], self.ny)


def _distances(cfg: HandshakeFieldConfig, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r_e = np.hypot(x, y)
    r_a = np.hypot(x - cfg.separation, y)
    return r_e, r_a


def retarded_potential(cfg: HandshakeFieldConfig, x, y, t):
    """Outgoing term radiated by the emitter (no exclusion handling)."""
    r_e, _ = _distances(cfg, x, y)
    return -(cfg.envelope_rate / r_e) * np.sin(t - r_e)


def advanced_potential(cfg: HandshakeFieldConfig, x, y, t):
    """Converging term hosted by the absorber (no exclusion handling)."""
    _, r_a = _distances(cfg, x, y)
    return (cfg.envelope_rate / r_a) * np.cos(t + cfg.separation + r_a)


def eval_handshake_potential(cfg: HandshakeFieldConfig, x, y, t,
                             swap_roles: bool = False):
    """Total vector potential at (x, y, t).

    Scalar queries inside an exclusion disc raise
    :class:`OutOfDomainError`; array queries return NaN there.
    ``swap_roles`` puts the retarded source on the absorber site and the
    advanced wave on the emitter site (the mirrored transfer).
    """
    r_e, r_a = _distances(cfg, x, y)
    inside = (r_e < cfg.exclusion_radius) | (r_a < cfg.exclusion_radius)
    if np.ndim(inside) == 0:
        if inside:
            raise OutOfDomainError(
                f"({x}, {y}) is within {cfg.exclusion_radius} of an atom")
    env = cfg.envelope_rate
    with np.errstate(divide="ignore", invalid="ignore"):
        if not swap_roles:
            total = (-(env / r_e) * np.sin(t - r_e)
                     + (env / r_a) * np.cos(t + cfg.separation + r_a))
        else:
            total = (-(env / r_a) * np.sin(t - r_a)
                     + (env / r_e) * np.cos(t + cfg.separation + r_e))
    if np.ndim(inside) > 0:
        total = np.where(inside, np.nan, total)
    return total


# ---------------------------------------------------------------------------
# field maps and on-axis peak tracking
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldGrid:
    """Sampled total potential over the grid at each requested time.

    ``values[k]`` is the (nx, ny) array for ``times[k]``; samples inside
    the exclusion discs are NaN.  ``onaxis_maxima[k]`` lists the x
    positions of the interference maxima on the inter-atom axis.
    """

    x_coords: np.ndarray
    y_coords: np.ndarray
    times: np.ndarray
    values: np.ndarray              # (nt, nx, ny)
    onaxis_maxima: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def frame(self, k: int) -> np.ndarray:
        return self.values[k]


def _axis_profile_maxima(cfg: HandshakeFieldConfig, t: float,
                         margin: float = 0.5, n: int = 4001) -> np.ndarray:
    """Sub-grid x positions of local maxima of A on the y=0 axis
    strictly between the atoms, ``margin`` away from either atom."""
    x = np.linspace(margin, cfg.separation - margin, n)
    a = eval_handshake_potential(cfg, x, np.zeros_like(x), t)
    i = np.where((a[1:-1] > a[:-2]) & (a[1:-1] > a[2:]))[0] + 1
    if i.size == 0:
        return np.empty(0)
    # parabolic refinement through the three samples around each peak;
    # a flat top keeps the grid position
    h = x[1] - x[0]
    num = a[i - 1] - a[i + 1]
    den = a[i - 1] - 2.0 * a[i] + a[i + 1]
    shift = np.where(np.abs(den) > 1e-300, 0.5 * h * num / np.where(den == 0, 1.0, den), 0.0)
    return x[i] + shift


def field_movie(cfg: HandshakeFieldConfig,
                peak_margin: float = 0.5) -> FieldGrid:
    """Evaluate the total potential over the grid at every config time.

    Frames one full optical period (2 pi) apart are identical; frames a
    half period apart are negatives of each other.  Per-frame on-axis
    interference maxima land in ``onaxis_maxima`` for drift tracking.
    """
    times = np.asarray(cfg.times, dtype=float)
    if times.size == 0 or np.any(np.diff(times) <= 0):
        raise ValueError("times must be non-empty and strictly increasing")
    x = cfg.x_coords()
    y = cfg.y_coords()
    X, Y = np.meshgrid(x, y, indexing="ij")
    values = np.empty((times.size, x.size, y.size))
    maxima = []
    for k, t in enumerate(times):
        values[k] = eval_handshake_potential(cfg, X, Y, t)
        maxima.append(_axis_profile_maxima(cfg, t, margin=peak_margin))
    return FieldGrid(x, y, times, values, onaxis_maxima=maxima,
                     metadata={"separation": cfg.separation,
                               "envelope_rate": cfg.envelope_rate,
                               "exclusion_radius": cfg.exclusion_radius,
                               "peak_margin": peak_margin})


def track_peak(maxima_per_frame: Sequence[np.ndarray], start: float,
               match_radius: float = 0.6) -> np.ndarray:
    """Follow one interference maximum across frames by nearest matching.

    Tracking stops when no maximum lies within ``match_radius`` of the
    last matched position (the peak left the window or handed off).
    Returns the matched positions, one per tracked frame.
    """
    positions = []
    current = start
    for peaks in maxima_per_frame:
        if len(peaks) == 0:
            break
        j = int(np.argmin(np.abs(peaks - current)))
        if abs(peaks[j] - current) > match_radius:
            break
        current = float(peaks[j])
        positions.append(current)
    return np.asarray(positions)


# ---------------------------------------------------------------------------
# zero-crossing contours (marching squares)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContourSet:
    """Iso-lines of A = 0: ordered polylines plus flagged saddle cells."""

    polylines: list                  # each an (n, 2) array of (x, y)
    saddle_cells: list               # (i, j) cell indices left ambiguous


def _edge_point(xa, ya, va, xb, yb, vb):
    s = va / (va - vb)
    return (xa + s * (xb - xa), ya + s * (yb - ya))


def zero_crossing_contours(cfg: HandshakeFieldConfig, t: float,
                           nx: int | None = None,
                           ny: int | None = None) -> ContourSet:
    """Marching-squares zero contours of the total potential at time t.

    Saddle cells (all four corner signs alternating) are disambiguated by
    the cell-center value and flagged rather than silently joined.  Cells
    touching an exclusion disc (NaN samples) are skipped.  The contour
    pattern is mirror-symmetric about the inter-atom axis because the
    potential depends on y only through y^2.
    """
    x = np.linspace(cfg.x_range[0], cfg.x_range[1], nx or cfg.nx)
    y = np.linspace(cfg.y_range[0], cfg.y_range[1], ny or cfg.ny)
    X, Y = np.meshgrid(x, y, indexing="ij")
    A = eval_handshake_potential(cfg, X, Y, t)
    return marching_squares(x, y, A)


def marching_squares(x: np.ndarray, y: np.ndarray,
                     A: np.ndarray) -> ContourSet:
    """Zero iso-lines of a sampled scalar field; NaN cells are skipped."""
    pos = A > 0.0
    case = (pos[:-1, :-1].astype(np.int8)
            | pos[1:, :-1].astype(np.int8) << 1
            | pos[1:, 1:].astype(np.int8) << 2
            | pos[:-1, 1:].astype(np.int8) << 3)
    bad = (np.isnan(A[:-1, :-1]) | np.isnan(A[1:, :-1])
           | np.isnan(A[1:, 1:]) | np.isnan(A[:-1, 1:]))
    cells = np.argwhere((case != 0) & (case != 15) & ~bad)

    # which cell edges each case joins: b(ottom), t(op), l(eft), r(ight)
    CASE_EDGES = {
        1: [("b", "l")], 2: [("b", "r")], 3: [("l", "r")], 4: [("t", "r")],
        6: [("b", "t")], 7: [("l", "t")], 8: [("l", "t")], 9: [("b", "t")],
        11: [("t", "r")], 12: [("l", "r")], 13: [("b", "r")],
        14: [("b", "l")],
    }

    segments = []      # (edge_key_a, point_a, edge_key_b, point_b)
    saddles = []
    for i, j in cells:
        v = (A[i, j], A[i + 1, j], A[i + 1, j + 1], A[i, j + 1])
        c = int(case[i, j])
        if c in (5, 10):
            saddles.append((int(i), int(j)))
            # pair crossings so the contour separates the center's sign
            if (0.25 * sum(v) > 0.0) == (c == 5):
                conn = [("l", "t"), ("b", "r")]
            else:
                conn = [("l", "b"), ("t", "r")]
        else:
            conn = CASE_EDGES[c]
        keys = {"b": ("h", i, j), "t": ("h", i, j + 1),
                "l": ("v", i, j), "r": ("v", i + 1, j)}
        points = {
            "b": lambda: _edge_point(x[i], y[j], v[0], x[i + 1], y[j], v[1]),
            "t": lambda: _edge_point(x[i], y[j + 1], v[3],
                                     x[i + 1], y[j + 1], v[2]),
            "l": lambda: _edge_point(x[i], y[j], v[0], x[i], y[j + 1], v[3]),
            "r": lambda: _edge_point(x[i + 1], y[j], v[1],
                                     x[i + 1], y[j + 1], v[2]),
        }
        for ea, eb in conn:
            segments.append((keys[ea], points[ea](), keys[eb], points[eb]()))

    polylines = _stitch_segments(segments)
    return ContourSet(polylines, saddles)


def _stitch_segments(segments):
    """Join marching-squares segments into ordered polylines."""
    links = {}
    for idx, (ka, pa, kb, pb) in enumerate(segments):
        links.setdefault(ka, []).append(idx)
        links.setdefault(kb, []).append(idx)
    used = [False] * len(segments)
    polylines = []

    def walk(start_key):
        chain = [start_key]
        key = start_key
        while True:
            nxt = [i for i in links.get(key, []) if not used[i]]
            if not nxt:
                break
            i = nxt[0]
            used[i] = True
            ka, pa, kb, pb = segments[i]
            key = kb if ka == key else ka
            chain.append(key)
        return chain

    point_of = {}
    for ka, pa, kb, pb in segments:
        point_of[ka] = pa
        point_of[kb] = pb

    # open chains first (keys hit by exactly one segment), then cycles
    degree = {k: len(v) for k, v in links.items()}
    endpoints = [k for k, d in degree.items() if d == 1]
    for key in endpoints:
        if all(used[i] for i in links[key]):
            continue
        chain = walk(key)
        polylines.append(np.array([point_of[k] for k in chain]))
    for idx in range(len(segments)):
        if used[idx]:
            continue
        used[idx] = True
        ka, pa, kb, pb = segments[idx]
        chain = [ka] + walk(kb)
        polylines.append(np.array([point_of[k] for k in chain]))
    return polylines


# ---------------------------------------------------------------------------
# electromagnetic fields and Poynting flow
# ---------------------------------------------------------------------------

def electric_field(cfg: HandshakeFieldConfig, x, y, t):
    """E_z = -dA/dt, by analytic differentiation of both terms."""
    r_e, r_a = _distances(cfg, x, y)
    env = cfg.envelope_rate
    return ((env / r_e) * np.cos(t - r_e)
            + (env / r_a) * np.sin(t + cfg.separation + r_a))


def magnetic_field(cfg: HandshakeFieldConfig, x, y, t, h: float = 1e-2):
    """(B_x, B_y) = (dA/dy, -dA/dx) by 4th-order central differences.

    The potential is z-directed, so the curl has only in-plane parts.
    """
    def a(xx, yy):
        r_e = np.hypot(xx, yy)
        r_a = np.hypot(xx - cfg.separation, yy)
        return (-(cfg.envelope_rate / r_e) * np.sin(t - r_e)
                + (cfg.envelope_rate / r_a)
                * np.cos(t + cfg.separation + r_a))

    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    bx = (a(x, y - 2 * h) - 8 * a(x, y - h)
          + 8 * a(x, y + h) - a(x, y + 2 * h)) / (12 * h)
    by = -(a(x - 2 * h, y) - 8 * a(x - h, y)
           + 8 * a(x + h, y) - a(x + 2 * h, y)) / (12 * h)
    return bx, by


def poynting_vector(cfg: HandshakeFieldConfig, x, y, t):
    """In-plane (S_x, S_y) = (-E_z B_y, E_z B_x) in natural units (mu0 = 1).

    Vanishes wherever E_z vanishes at the sample time.
    """
    e = electric_field(cfg, x, y, t)
    bx, by = magnetic_field(cfg, x, y, t)
    return -e * by, e * bx


def time_averaged_poynting(cfg: HandshakeFieldConfig, x, y,
                           n_time: int = 8):
    """Poynting vector averaged over one optical period.

    The integrand carries only DC and second-harmonic parts, so the
    periodic rectangle rule is exact for any n_time > 2.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    shape = np.broadcast(x, y).shape
    sx = np.zeros(shape)
    sy = np.zeros(shape)
    for k in range(n_time):
        t = TWO_PI * k / n_time
        a, b = poynting_vector(cfg, x, y, t)
        sx += a
        sy += b
    return sx / n_time, sy / n_time


@dataclass(frozen=True)
class Streamline:
    points: np.ndarray               # (n, 2)
    termination: str                 # absorber_disc / emitter_disc /
    #                                  left_grid / stagnation / max_steps


def poynting_streamlines(cfg: HandshakeFieldConfig,
                         seeds: Sequence[Sequence[float]],
                         t: float | None = None,
                         step: float = 0.05,
                         max_steps: int = 20000,
                         stagnation_tol: float = 1e-12) -> list:
    """Integrate Poynting streamlines from each seed point.

    ``t=None`` uses the time-averaged field (the net energy flow), under
    which streamlines seeded between the atoms run into the absorber-side
    exclusion disc.  Integration is arc-length RK4 with step halving when
    the direction turns sharply, and stops on grid exit, entering an
    exclusion disc, field stagnation, or the step budget.
    """
    if t is None:
        velocity = lambda p: np.array(
            time_averaged_poynting(cfg, p[0], p[1]), dtype=float)
    else:
        velocity = lambda p: np.array(
            poynting_vector(cfg, p[0], p[1], t), dtype=float)

    x0, x1 = cfg.x_range
    y0, y1 = cfg.y_range
    out = []
    for seed in seeds:
        p = np.array(seed, dtype=float)
        r_e, r_a = _distances(cfg, p[0], p[1])
        if r_e < cfg.exclusion_radius or r_a < cfg.exclusion_radius:
            raise ValueError(f"seed {seed} lies inside an exclusion disc")
        pts = [p.copy()]
        term = "max_steps"
        ds = step
        for _ in range(max_steps):
            v = velocity(p)
            speed = float(np.hypot(*v))
            if speed < stagnation_tol:
                term = "stagnation"
                break

            def unit(q):
                w = velocity(q)
                n = float(np.hypot(*w))
                return w / n if n > 0 else w

            k1 = v / speed
            k2 = unit(p + 0.5 * ds * k1)
            k3 = unit(p + 0.5 * ds * k2)
            k4 = unit(p + ds * k3)
            dp = (ds / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            # halve the step while the direction turns more than ~20 deg
            turn = float(np.hypot(*(k4 - k1)))
            if turn > 0.35 and ds > step / 64.0:
                ds *= 0.5
                continue
            if turn < 0.05 and ds < step:
                ds = min(step, ds * 2.0)
            p = p + dp
            pts.append(p.copy())
            r_e, r_a = _distances(cfg, p[0], p[1])
            if r_a < cfg.exclusion_radius:
                term = "absorber_disc"
                break
            if r_e < cfg.exclusion_radius:
                term = "emitter_disc"
                break
            if not (x0 <= p[0] <= x1 and y0 <= p[1] <= y1):
                term = "left_grid"
                break
        out.append(Streamline(np.array(pts), term))
    return out


def box_flux_balance(cfg: HandshakeFieldConfig, box: tuple,
                     n_edge: int = 801) -> tuple:
    """Net vs gross time-averaged Poynting flux through a rectangle.

    ``box`` is (x0, x1, y0, y1) and must not contain either atom.  Away
    from the atoms the averaged flow is divergence-free, so the net flux
    closes to a small fraction of the gross face flux.
    Returns (net, gross).
    """
    bx0, bx1, by0, by1 = box
    for ax, ay in ((0.0, 0.0), (cfg.separation, 0.0)):
        if bx0 <= ax <= bx1 and by0 <= ay <= by1:
            raise ValueError("flux box must not contain an atom")
    ys = np.linspace(by0, by1, n_edge)
    xs = np.linspace(bx0, bx1, n_edge)
    sx_r, _ = time_averaged_poynting(cfg, np.full_like(ys, bx1), ys)
    sx_l, _ = time_averaged_poynting(cfg, np.full_like(ys, bx0), ys)
    _, sy_t = time_averaged_poynting(cfg, xs, np.full_like(xs, by1))
    _, sy_b = time_averaged_poynting(cfg, xs, np.full_like(xs, by0))
    f_r = float(np.trapezoid(sx_r, ys))
    f_l = float(np.trapezoid(sx_l, ys))
    f_t = float(np.trapezoid(sy_t, xs))
    f_b = float(np.trapezoid(sy_b, xs))
    net = f_r - f_l + f_t - f_b
    gross = abs(f_r) + abs(f_l) + abs(f_t) + abs(f_b)
    return net, gross


# ---------------------------------------------------------------------------
# path-phase diagnostics
# ---------------------------------------------------------------------------

def high_amplitude_lobes(cfg: HandshakeFieldConfig, t: float = 0.0,
                         threshold: float = 0.12,
                         keep_away: float = 1.5,
                         nx: int = 1200, ny: int = 800) -> np.ndarray:
    """Locations (x, y) of the high-amplitude interference lobes at time t.

    Local maxima of |A| above ``threshold`` within the inter-atom band
    (0 <= x <= separation), at least ``keep_away`` from either atom.
    Outside the band a two-segment emitter -> lobe -> absorber path
    doubles back on itself, and close to an atom the 1/r envelope
    gradient drags maxima off the phase-alignment points.
    """
    x = np.linspace(cfg.x_range[0], cfg.x_range[1], nx)
    y = np.linspace(cfg.y_range[0], cfg.y_range[1], ny)
    X, Y = np.meshgrid(x, y, indexing="ij")
    a = np.abs(np.nan_to_num(eval_handshake_potential(cfg, X, Y, t)))
    core = a[1:-1, 1:-1]
    m = ((core >= a[:-2, 1:-1]) & (core >= a[2:, 1:-1])
         & (core >= a[1:-1, :-2]) & (core >= a[1:-1, 2:])
         & (core > threshold))
    lx = X[1:-1, 1:-1][m]
    ly = Y[1:-1, 1:-1][m]
    r_e, r_a = _distances(cfg, lx, ly)
    keep = ((r_e > keep_away) & (r_a > keep_away)
            & (lx >= 0.0) & (lx <= cfg.separation))
    return np.column_stack([lx[keep], ly[keep]])


def lobe_path_phases(cfg: HandshakeFieldConfig,
                     lobes: np.ndarray) -> np.ndarray:
    """Accumulated propagation phase of the two-segment path
    emitter -> lobe -> absorber, for each lobe point.

    In natural units the phase equals the path length.  Paths threading
    distinct high-amplitude lobes agree modulo 2 pi.
    """
    r_e, r_a = _distances(cfg, lobes[:, 0], lobes[:, 1])
    return r_e + r_a


def circular_spread(phases: np.ndarray, period: float = TWO_PI) -> float:
    """Largest deviation from the circular mean, as a fraction of period."""
    ang = phases * (TWO_PI / period)
    mean = math.atan2(float(np.mean(np.sin(ang))), float(np.mean(np.cos(ang))))
    dev = np.angle(np.exp(1j * (ang - mean)))
    return float(np.max(np.abs(dev))) / TWO_PI
