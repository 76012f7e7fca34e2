import math

import numpy as np
import pytest

from handshake import fields
from handshake.fields import (
    HandshakeFieldConfig, OutOfDomainError, advanced_potential,
    box_flux_balance, circular_spread, electric_field,
    eval_handshake_potential, field_movie, high_amplitude_lobes,
    lobe_path_phases, poynting_streamlines, poynting_vector,
    retarded_potential, track_peak, zero_crossing_contours,
)

TWO_PI = 2.0 * math.pi


@pytest.fixture(scope="module")
def cfg():
    return HandshakeFieldConfig()


@pytest.fixture(scope="module")
def movie():
    times = tuple(np.linspace(0.0, TWO_PI, 25))
    return field_movie(HandshakeFieldConfig(times=times))


# ---------------------------------------------------------------------------
# potential evaluation
# ---------------------------------------------------------------------------

def test_exclusion_zone_scalar_raises(cfg):
    with pytest.raises(OutOfDomainError):
        eval_handshake_potential(cfg, 0.01, 0.0, 0.0)
    with pytest.raises(OutOfDomainError):
        eval_handshake_potential(cfg, cfg.separation, 0.02, 0.0)


def test_exclusion_zone_grid_is_nan(cfg):
    x = np.array([0.0, 6.0, cfg.separation])
    y = np.zeros(3)
    v = eval_handshake_potential(cfg, x, y, 0.0)
    assert np.isnan(v[0]) and np.isnan(v[2]) and np.isfinite(v[1])


def test_total_is_sum_of_terms(cfg):
    x, y, t = 4.3, 2.1, 0.7
    total = eval_handshake_potential(cfg, x, y, t)
    assert total == pytest.approx(
        retarded_potential(cfg, x, y, t) + advanced_potential(cfg, x, y, t),
        rel=1e-14)


def test_single_source_terms_match_literal_formulas(cfg):
    # each term alone against its frozen closed form
    rng = np.random.default_rng(3)
    pts = rng.uniform([0.5, -6.0], [11.5, 6.0], (50, 2))
    t = 0.37
    r_e = np.hypot(pts[:, 0], pts[:, 1])
    r_a = np.hypot(pts[:, 0] - cfg.separation, pts[:, 1])
    want_ret = -np.sin(t - r_e) / r_e
    want_adv = np.cos(t + cfg.separation + r_a) / r_a
    got_ret = retarded_potential(cfg, pts[:, 0], pts[:, 1], t)
    got_adv = advanced_potential(cfg, pts[:, 0], pts[:, 1], t)
    assert np.max(np.abs(got_ret - want_ret)) < 1e-15
    assert np.max(np.abs(got_adv - want_adv)) < 1e-15


def test_far_field_decay(cfg):
    # |A| of either term falls off as 1/r
    for r in (50.0, 500.0, 5000.0):
        v = abs(retarded_potential(cfg, r, 0.0, 0.3))
        assert v <= cfg.envelope_rate / r + 1e-15


def test_inverse_r_envelope_constancy(cfg):
    # peak |A * r| over a window of one period is the same far and near
    theta = math.radians(30.0)
    windows = []
    for r0 in (5.0, 50.0, 500.0):
        r = np.linspace(r0, r0 + TWO_PI, 4001)
        a = retarded_potential(cfg, r * math.cos(theta), r * math.sin(theta), 0.0)
        windows.append(np.max(np.abs(a * r)))
    spread = max(windows) - min(windows)
    assert spread / max(windows) < 1e-3


def test_light_cone_phase_delay(cfg):
    # pure propagation: same ray, delayed time, same retarded amplitude
    direction = np.array([0.6, 0.8])
    r1, r2 = 7.0, 19.5
    p1, p2 = r1 * direction, r2 * direction
    t = 1.234
    a1 = retarded_potential(cfg, p1[0], p1[1], t)
    a2 = retarded_potential(cfg, p2[0], p2[1], t + (r2 - r1))
    assert a2 == pytest.approx(a1 * r1 / r2, rel=1e-12)


def test_role_swap_antisymmetry(cfg):
    # swapping emitter/absorber and running time backward (about the
    # offset pi/2 - separation) flips the total field's sign
    rng = np.random.default_rng(7)
    pts = rng.uniform([-3.0, -7.0], [cfg.separation + 3.0, 7.0], (200, 2))
    r_e = np.hypot(pts[:, 0], pts[:, 1])
    r_a = np.hypot(pts[:, 0] - cfg.separation, pts[:, 1])
    pts = pts[(r_e > 0.2) & (r_a > 0.2)]
    t = 0.83
    swapped = eval_handshake_potential(
        cfg, pts[:, 0], pts[:, 1],
        (math.pi / 2.0 - cfg.separation) - t, swap_roles=True)
    direct = eval_handshake_potential(cfg, pts[:, 0], pts[:, 1], t)
    assert np.max(np.abs(swapped + direct)) < 1e-12


# ---------------------------------------------------------------------------
# movie frames and peak drift
# ---------------------------------------------------------------------------

def test_frames_one_period_apart_identical(cfg):
    x = np.linspace(0.7, cfg.separation - 0.7, 300)
    y = np.linspace(-5, 5, 7)[:, None]
    a0 = eval_handshake_potential(cfg, x[None, :], y, 0.4)
    a1 = eval_handshake_potential(cfg, x[None, :], y, 0.4 + TWO_PI)
    assert np.max(np.abs(a1 - a0)) < 1e-12


def test_half_period_negates(cfg):
    x = np.linspace(0.7, cfg.separation - 0.7, 300)
    a0 = eval_handshake_potential(cfg, x, np.zeros_like(x), 0.4)
    a1 = eval_handshake_potential(cfg, x, np.zeros_like(x), 0.4 + math.pi)
    assert np.max(np.abs(a1 + a0)) < 1e-12


def test_movie_records_maxima(movie):
    assert len(movie.onaxis_maxima) == len(movie.times)
    assert all(len(p) >= 1 for p in movie.onaxis_maxima)


def test_maxima_drift_toward_absorber(movie):
    start = movie.onaxis_maxima[0]
    mid = start[np.argmin(np.abs(start - 6.0))]
    track = track_peak(movie.onaxis_maxima, start=mid)
    assert len(track) >= len(movie.times) // 2
    assert np.all(np.diff(track) > 0)


def test_movie_rejects_decreasing_times():
    with pytest.raises(ValueError):
        field_movie(HandshakeFieldConfig(times=(1.0, 0.5)))


# ---------------------------------------------------------------------------
# zero crossings
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def contours(cfg):
    return zero_crossing_contours(cfg, 0.0, nx=500, ny=260)


def test_contour_points_lie_on_zero(cfg, contours):
    pts = np.vstack(contours.polylines)
    r_e = np.hypot(pts[:, 0], pts[:, 1])
    r_a = np.hypot(pts[:, 0] - cfg.separation, pts[:, 1])
    ok = (r_e > 0.5) & (r_a > 0.5)
    vals = np.abs(eval_handshake_potential(cfg, pts[ok, 0], pts[ok, 1], 0.0))
    # linear interpolation on the grid: residual shrinks with cell size
    dx = (cfg.x_range[1] - cfg.x_range[0]) / 499
    assert np.max(vals) < 5.0 * dx


def test_contour_count_matches_axis_sign_changes(cfg, contours):
    eps = cfg.exclusion_radius
    x = np.linspace(eps + 0.02, cfg.separation - eps - 0.02, 4001)
    a = eval_handshake_potential(cfg, x, np.zeros_like(x), 0.0)
    sign_changes = int(np.sum(np.signbit(a[:-1]) != np.signbit(a[1:])))
    crossings = 0
    for line in contours.polylines:
        ys = line[:, 1]
        xs = line[:, 0]
        for i in range(len(line) - 1):
            if (ys[i] > 0) != (ys[i + 1] > 0):
                frac = ys[i] / (ys[i] - ys[i + 1])
                xx = xs[i] + frac * (xs[i + 1] - xs[i])
                if eps + 0.05 < xx < cfg.separation - eps - 0.05:
                    crossings += 1
    assert crossings == sign_changes


def test_contour_polylines_are_contiguous(cfg, contours):
    # stitched chains never jump: consecutive vertices stay within one
    # grid cell diagonal of each other
    dx = (cfg.x_range[1] - cfg.x_range[0]) / 499
    dy = (cfg.y_range[1] - cfg.y_range[0]) / 259
    diag = math.hypot(dx, dy)
    for line in contours.polylines:
        if len(line) > 1:
            steps = np.hypot(*np.diff(line, axis=0).T)
            assert float(steps.max()) <= diag


def test_contours_mirror_symmetric(contours):
    pts = np.vstack(contours.polylines)
    mirrored = pts * np.array([1.0, -1.0])
    # every mirrored vertex has a close partner in the original set
    d2 = np.min(
        (pts[None, :, 0] - mirrored[:, 0, None]) ** 2
        + (pts[None, :, 1] - mirrored[:, 1, None]) ** 2, axis=1)
    assert math.sqrt(float(d2.max())) < 1e-9


def test_saddle_cells_flagged_and_disambiguated():
    # x*y changes sign in all four quadrants: the single cell around the
    # origin has alternating corner signs and must be flagged
    x = np.array([-1.0, 1.0])
    y = np.array([-1.0, 1.0])
    saddle_vals = np.array([[1.0, -1.0], [-1.0, 1.0]])  # [ix, iy]
    cs = fields.marching_squares(x, y, saddle_vals)
    assert cs.saddle_cells == [(0, 0)]
    assert len(cs.polylines) == 2
    # center value 0 pairs the contour so the negative corners are cut off
    for line in cs.polylines:
        assert len(line) == 2


def test_marching_squares_skips_nan_cells():
    x = np.linspace(0, 3, 4)
    y = np.linspace(0, 3, 4)
    vals = np.fromfunction(lambda i, j: i - 1.4, (4, 4))
    vals[2, 2] = np.nan
    cs = fields.marching_squares(x, y, vals)
    pts = np.vstack(cs.polylines)
    assert np.all(np.isfinite(pts))


# ---------------------------------------------------------------------------
# Poynting flow
# ---------------------------------------------------------------------------

def test_poynting_zero_where_e_zero(cfg):
    # at fixed position, find a time where E vanishes; S must vanish too
    x, y = 5.2, 1.3
    f = lambda t: electric_field(cfg, x, y, t)
    lo, hi = 0.0, 0.5
    while f(lo) * f(hi) > 0:
        hi += 0.25
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(lo) * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
    t0 = 0.5 * (lo + hi)
    sx, sy = poynting_vector(cfg, x, y, t0)
    assert math.hypot(sx, sy) < 1e-12


def test_axis_streamlines_terminate_at_absorber(cfg):
    seeds = [(2.0, 0.0), (6.0, 0.0), (10.0, 0.0)]
    lines = poynting_streamlines(cfg, seeds)
    assert all(ln.termination == "absorber_disc" for ln in lines)
    for ln in lines:
        assert np.max(np.abs(ln.points[:, 1])) < 1e-9


def test_streamline_rejects_seed_in_disc(cfg):
    with pytest.raises(ValueError):
        poynting_streamlines(cfg, [(0.0, 0.01)])


def test_streamline_stagnation_flag(cfg):
    # instantaneous field: wherever E vanishes the flow stops; a seed
    # there must come back flagged, not spin forever
    x, y = 5.2, 1.3
    f = lambda t: electric_field(cfg, x, y, t)
    lo, hi = 0.0, 0.5
    while f(lo) * f(hi) > 0:
        hi += 0.25
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(lo) * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
    t0 = 0.5 * (lo + hi)
    lines = poynting_streamlines(cfg, [(x, y)], t=t0)
    assert lines[0].termination == "stagnation"
    assert len(lines[0].points) == 1


def test_flux_balance_source_free_boxes(cfg):
    for box in ((4.0, 8.0, -2.0, 2.0), (2.0, 10.0, 1.0, 6.0),
                (5.0, 7.0, -4.0, -1.0)):
        net, gross = box_flux_balance(cfg, box, n_edge=401)
        assert abs(net) / gross < 0.01


def test_flux_box_must_exclude_atoms(cfg):
    with pytest.raises(ValueError):
        box_flux_balance(cfg, (-1.0, 1.0, -1.0, 1.0))


# ---------------------------------------------------------------------------
# path-phase coherence of the lobe pattern
# ---------------------------------------------------------------------------

def test_high_amplitude_paths_agree_mod_two_pi(cfg):
    lobes = high_amplitude_lobes(cfg)
    assert len(lobes) >= 6
    phases = lobe_path_phases(cfg, lobes)
    assert circular_spread(phases) < 0.05
    # and the lobes are not all the same path length: successive rings
    assert np.ptp(phases) > TWO_PI


def test_circular_spread_helper():
    assert circular_spread(np.array([0.0, TWO_PI, 4 * TWO_PI])) < 1e-12
    # two phases 0.2 rad apart: worst deviation from the mean is 0.1 rad
    assert circular_spread(np.array([1.0, 1.2])) == pytest.approx(
        0.1 / TWO_PI, rel=1e-9)
    # antipodal pair: maximally incoherent, a quarter period off any mean
    assert circular_spread(np.array([0.0, math.pi])) == pytest.approx(0.25)
