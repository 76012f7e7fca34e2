import math

import numpy as np
import pytest
from scipy.special import fresnel

from handshake.paths import (
    DistanceScan, PathEnsemble, SamplingError, amplitude_vs_distance,
    contributing_zone_halfwidth, enhancement_factor, equal_delay_modifier,
    path_length, phasor_sum,
)

LAM = 5e-7


# ---------------------------------------------------------------------------
# path geometry
# ---------------------------------------------------------------------------

def test_on_axis_path_is_straight():
    exact, approx = path_length(1.0, 0.0)
    assert exact == 1.0
    assert approx == 1.0


def test_quadratic_expansion_accuracy():
    r = 1.0
    y = 1e-4 * r  # y^2/r^2 = 1e-8
    exact, approx = path_length(r, y)
    assert abs(exact - approx) < 1e-15 * r


def test_zone_edge_is_quarter_wave():
    r = 1.0
    y = contributing_zone_halfwidth(r, LAM)
    assert y == pytest.approx(math.sqrt(LAM * r / 8.0), rel=1e-15)
    exact, _ = path_length(r, y)
    # the extra path at the zone edge is a quarter wavelength
    assert exact - r == pytest.approx(LAM / 4.0, rel=1e-6)


def test_path_length_validation():
    with pytest.raises(ValueError):
        path_length(0.0, 1.0)


# ---------------------------------------------------------------------------
# phasor sums
# ---------------------------------------------------------------------------

def test_single_path_unit_arrow():
    ens = PathEnsemble(source=(0, 0), detector=(1.0, 0), offsets=[0.0],
                       wavelength=LAM)
    res = phasor_sum(ens)
    assert res.amplitude == pytest.approx(1.0, rel=1e-15)
    expected = np.exp(1j * 2 * math.pi * 1.0 / LAM)
    assert res.resultant == pytest.approx(expected, rel=1e-9)


def test_sampling_criterion_violation():
    ens = PathEnsemble(source=(0, 0), detector=(1.0, 0),
                       offsets=np.linspace(-3e-3, 3e-3, 9), wavelength=LAM)
    with pytest.raises(SamplingError, match="densify"):
        phasor_sum(ens)


def test_offsets_must_be_symmetric():
    with pytest.raises(ValueError, match="symmetric"):
        PathEnsemble(offsets=np.array([0.0, 1e-4, 2e-4]), wavelength=LAM)


def _dense_ensemble(r, n=40001, zones=6.0, offsets=None):
    if offsets is None:
        half = zones * contributing_zone_halfwidth(r, LAM)
        offsets = np.linspace(-half, half, n)
    return PathEnsemble(source=(0, 0), detector=(r, 0), offsets=offsets,
                        wavelength=LAM)


def fresnel_band_magnitude(r, y_lo, y_hi):
    """|int_{y_lo}^{y_hi} exp(i a y^2) dy| with a = 4 pi/(r lam): the
    continuum oracle for the discrete sums.  scipy's fresnel integrates
    sin/cos(pi t^2/2), so substitute y = t sqrt(pi/(2a))."""
    a = 4.0 * math.pi / (r * LAM)
    unit = math.sqrt(math.pi / (2.0 * a))
    s_hi, c_hi = fresnel(y_hi / unit)
    s_lo, c_lo = fresnel(y_lo / unit)
    return abs(complex((c_hi - c_lo) * unit, (s_hi - s_lo) * unit))


def test_zone_dominance_against_fresnel_oracle():
    # discrete arrows vs the continuum Fresnel integrals, and the
    # probability cost of removing the quarter-wave zone
    r = 1.0
    ens = _dense_ensemble(r)
    res = phasor_sum(ens)
    y_c = contributing_zone_halfwidth(r, LAM)
    half = 6.0 * y_c
    dy = ens.offsets[1] - ens.offsets[0]

    full_oracle = fresnel_band_magnitude(r, -half, half) / dy
    assert abs(res.resultant) == pytest.approx(full_oracle, rel=1e-3)

    outside = ens.offsets[np.abs(ens.offsets) > y_c]
    tail = phasor_sum(_dense_ensemble(r, offsets=outside))
    ratio_sq = (abs(tail.resultant) / abs(res.resultant)) ** 2
    # the inner zone carries the probability: removing it costs > 80%
    assert ratio_sq < 0.20
    assert ratio_sq == pytest.approx(0.175, abs=0.02)


def test_lens_aligns_all_arrows():
    r = 1.0
    ens = _dense_ensemble(r, n=20001)
    lens = PathEnsemble(source=(0, 0), detector=(r, 0), offsets=ens.offsets,
                        wavelength=LAM, delay_fn=equal_delay_modifier(r))
    res = phasor_sum(lens)
    assert abs(res.resultant) / len(lens.offsets) == pytest.approx(1.0,
                                                                   abs=1e-9)


def test_lens_beats_other_modifiers():
    r = 1.0
    offsets = _dense_ensemble(r, n=8001).offsets
    c = 299792458.0

    def quadratic(y):
        return -(2.0 * y**2 / r) / c

    def half_strength(y):
        exact, _ = path_length(r, y)
        return -0.5 * (exact - r) / c

    candidates = {
        "none": None,
        "quadratic": quadratic,
        "half": half_strength,
        "exact": equal_delay_modifier(r),
    }
    mags = {}
    for name, fn in candidates.items():
        ens = PathEnsemble(source=(0, 0), detector=(r, 0), offsets=offsets,
                           wavelength=LAM, delay_fn=fn)
        mags[name] = abs(phasor_sum(ens).resultant)
    assert max(mags, key=mags.get) == "exact"


def test_resultant_bounded_by_arrow_lengths():
    res = phasor_sum(_dense_ensemble(1.0, n=5001))
    assert abs(res.resultant) <= float(np.sum(np.abs(res.arrows))) + 1e-9


def test_phasor_linearity():
    r = 1.0
    ens = _dense_ensemble(r, n=10001)
    res = phasor_sum(ens)
    inner = ens.offsets[np.abs(ens.offsets) <= 2e-4]
    outer = ens.offsets[np.abs(ens.offsets) > 2e-4]
    r_in = phasor_sum(_dense_ensemble(r, offsets=inner))
    r_out = phasor_sum(_dense_ensemble(r, offsets=outer))
    assert r_in.resultant + r_out.resultant == pytest.approx(
        res.resultant, abs=1e-10 * len(ens.offsets))


def test_partial_sums_shape():
    ens = _dense_ensemble(1.0, n=501, zones=1.0)
    res = phasor_sum(ens)
    assert len(res.partial_sums) == len(ens.offsets)
    assert res.partial_sums[-1] == pytest.approx(res.resultant, rel=1e-12)


def test_refinement_convergence():
    r = 1.0
    a1 = phasor_sum(_dense_ensemble(r, n=20001)).amplitude
    a2 = phasor_sum(_dense_ensemble(r, n=40001)).amplitude
    assert abs(a1 - a2) / a2 < 1e-3


# ---------------------------------------------------------------------------
# the 1/r law
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def scan() -> DistanceScan:
    return amplitude_vs_distance(np.logspace(-1, 1, 21), wavelength=LAM)


def test_amplitude_slope_is_inverse_r(scan):
    assert scan.slope == pytest.approx(-1.0, abs=0.05)


def test_intensity_slope_is_inverse_r_squared(scan):
    assert scan.intensity_slope == pytest.approx(-2.0, abs=0.1)


def test_scan_requires_a_decade():
    with pytest.raises(ValueError):
        amplitude_vs_distance([1.0, 2.0])


def test_zone_area_linear_in_wavelength():
    r = 0.7
    zone = math.pi * LAM / (8.0 * r)
    zone2 = math.pi * (2 * LAM) / (8.0 * r)
    assert zone2 == pytest.approx(2.0 * zone, rel=1e-15)
    # consistency: the bare zone's solid angle makes the enhancement 1
    assert enhancement_factor(r, LAM, zone) == pytest.approx(1.0, rel=1e-12)


def test_eighty_percent_halfwidth_tracks_zone_scale():
    ratios = []
    for r in (0.1, 1.0, 10.0):
        half = 8.0 * contributing_zone_halfwidth(r, LAM)
        offsets = np.linspace(-half, half, 400001)
        arrows = np.exp(1j * 2 * math.pi
                        * path_length(r, offsets)[0] / LAM)
        full = abs(arrows.sum())
        order = np.argsort(np.abs(offsets), kind="stable")
        csum = np.cumsum(arrows[order])
        k = int(np.argmax(np.abs(csum) >= 0.8 * full))
        w80 = float(np.abs(offsets)[order][k])
        ratios.append(w80 / contributing_zone_halfwidth(r, LAM))
    assert max(ratios) / min(ratios) < 1.15
    for ratio in ratios:
        assert 0.4 < ratio < 0.7


# ---------------------------------------------------------------------------
# enhancement factor
# ---------------------------------------------------------------------------

def test_enhancement_reference_values():
    assert enhancement_factor(1.0, 1.2150227341124456e-07, 1.0) == (
        pytest.approx(2.1e7, rel=0.10))
    # visible light at reading distance with a 1 sr lens: the formula
    # gives 2.5e5; a rough 1e-7 read-off of the bare zone stretches the
    # same comparison to ~1e7, so order-of-magnitude bounds only
    bare = math.pi * LAM / (8.0 * 0.05)
    assert enhancement_factor(0.05, LAM, 1.0) == pytest.approx(1.0 / bare,
                                                               rel=1e-12)
    assert 1e5 < enhancement_factor(0.05, LAM, 1.0) < 1e7
    assert 1.0 / 1e-7 == pytest.approx(1e7, rel=1e-12)


def test_enhancement_validation():
    with pytest.raises(ValueError):
        enhancement_factor(-1.0, LAM, 1.0)
    with pytest.raises(ValueError):
        enhancement_factor(1.0, LAM, 14.0)
