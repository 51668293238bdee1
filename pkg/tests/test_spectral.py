import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import spectral_weights
from qspeed.errors import DomainError, NormalizationError
from qspeed.numerics import compute_constants
from qspeed.spectral import (
    DensityState,
    PureState,
    SpectralWeights,
    bound_report,
    dispersion_stats,
    g_c,
    g_ml,
    g_teur,
    weights_from_density,
    weights_from_pure,
)

A = compute_constants().A
X_M = compute_constants().x_m


def aadm_brute_force(w):
    # f(x) = sum w|E - x| is piecewise linear, so its minimum sits on a level
    return min(float(np.dot(w.weights, np.abs(w.energies - x))) for x in w.energies)


def test_weights_from_pure_two_level():
    s = PureState.from_levels([(-2.0, 1 / math.sqrt(2)), (2.0, 1j / math.sqrt(2))])
    np.testing.assert_allclose(weights_from_pure(s).levels, [(-2.0, 0.5), (2.0, 0.5)])


def test_weights_from_pure_tight_state():
    alpha = 1 / (A * X_M)
    s = PureState.from_arrays(
        [0.0, -1.0, 1.0], [math.sqrt(1 - alpha), math.sqrt(alpha / 2), math.sqrt(alpha / 2)]
    )
    np.testing.assert_allclose(
        weights_from_pure(s).levels, [(-1.0, alpha / 2), (0.0, 1 - alpha), (1.0, alpha / 2)], atol=1e-15
    )
    assert alpha == pytest.approx(0.592011, abs=1e-6)


def test_weights_from_pure_phase_invariance():
    assert weights_from_pure(PureState.from_levels([(3.0, 1j)])).levels == [(3.0, 1.0)]


def test_degenerate_kets_add_incoherently():
    s = PureState.from_arrays([1.0, 1.0], [0.6, -0.8])
    np.testing.assert_allclose(weights_from_pure(s).levels, [(1.0, 1.0)])


def test_normalization_policy():
    with pytest.raises(NormalizationError):
        PureState.from_arrays([0.0, 1.0], [1.0, 1.0])
    with pytest.raises(NormalizationError):
        SpectralWeights.from_arrays([0.0], [0.9])
    w = SpectralWeights.from_arrays([0.0, 1.0], [0.5, 0.5 + 5e-10])
    assert math.fsum(w.weights) == pytest.approx(1.0, abs=1e-15)
    exact = np.array([0.25, 0.75])
    assert SpectralWeights.from_arrays([0, 1], exact).weights.tolist() == exact.tolist()


def test_weights_reject_bad_input():
    with pytest.raises(DomainError):
        SpectralWeights.from_levels([])
    with pytest.raises(DomainError):
        SpectralWeights.from_arrays([0.0, 1.0], [1.5, -0.5])
    with pytest.raises(DomainError):
        SpectralWeights.from_arrays([math.inf], [1.0])
    with pytest.raises(DomainError):
        SpectralWeights.from_arrays([0.0], [1.0], hbar=0.0)


def test_duplicate_energies_merge_and_sort():
    w = SpectralWeights.from_levels([(2.0, 0.25), (-1.0, 0.25), (2.0, 0.5)])
    assert w.levels == [(-1.0, 0.25), (2.0, 0.75)]


def test_weights_are_immutable():
    w = SpectralWeights.from_levels([(0.0, 1.0)])
    with pytest.raises(ValueError):
        w.weights[0] = 0.5


@pytest.mark.parametrize(
    "diag, energies",
    [([0.5, 0.5], [-1.0, 1.0]), ([0.1, 0.2, 0.7], [0.0, 1.0, 2.0]), ([1.0, 0.0], [4.0, 5.0])],
)
def test_weights_from_density_reads_diagonal(diag, energies):
    rho = DensityState.from_arrays(energies, np.diag(diag))
    w = weights_from_density(rho)
    got = dict(w.levels)
    for e, p in zip(energies, diag):
        assert got[e] == pytest.approx(p)


def test_density_validation():
    with pytest.raises(NormalizationError):
        DensityState.from_arrays([0, 1], np.diag([0.5, 0.6]))
    with pytest.raises(DomainError):
        DensityState.from_arrays([0, 1], [[0.5, 1.0], [0.0, 0.5]])
    with pytest.raises(DomainError):
        DensityState.from_arrays([0, 1], np.diag([1.5, -0.5]))
    with pytest.raises(DomainError):
        DensityState.from_arrays([0, 1, 2], np.eye(2) / 2)


def test_stats_two_level():
    st_ = dispersion_stats(SpectralWeights.from_levels([(-1.0, 0.5), (1.0, 0.5)]))
    assert (st_.mean_energy, st_.std_dev, st_.above_ground, st_.median, st_.aadm) == pytest.approx(
        (0.0, 1.0, 1.0, 0.0, 1.0)
    )


def test_stats_single_level():
    st_ = dispersion_stats(SpectralWeights.from_levels([(5.0, 1.0)]))
    assert (st_.mean_energy, st_.std_dev, st_.median, st_.aadm) == (5.0, 0.0, 5.0, 0.0)
    assert st_.excess_kurtosis is None


def test_stats_four_level():
    w = SpectralWeights.from_levels([(0, 0.1), (1, 0.2), (2, 0.3), (3, 0.4)])
    st_ = dispersion_stats(w)
    assert st_.median == 2.0
    assert st_.aadm == pytest.approx(0.8, abs=1e-15)
    assert st_.aadm == pytest.approx(aadm_brute_force(w), abs=1e-15)
    # mean 2, variance 0.4 + 0.2 + 0 + 0.4 = 1
    assert st_.mean_energy == pytest.approx(2.0)
    assert st_.std_dev == pytest.approx(1.0)
    assert st_.excess_kurtosis == pytest.approx((0.1 * 16 + 0.2 * 1 + 0.4 * 1) - 3)


def test_stats_symmetric_tie():
    assert dispersion_stats(SpectralWeights.from_levels([(0, 0.5), (1, 0.5)])).median == 0.5


@pytest.mark.parametrize("n", [1, 2, 3, 5, 7, 10, 49])
def test_median_of_symmetric_comb_is_centre(n):
    k = np.arange(n) + 0.5
    w = SpectralWeights.from_arrays(np.concatenate((-k, k)), np.full(2 * n, 1 / (2 * n)))
    assert dispersion_stats(w).median == 0.0


def test_ignores_zero_weight_levels():
    st_ = dispersion_stats(SpectralWeights.from_levels([(-9.0, 0.0), (1.0, 1.0)]))
    assert st_.ground_energy == 1.0


@settings(max_examples=300)
@given(spectral_weights())
def test_dispersion_ordering(w):
    st_ = dispersion_stats(w)
    assert st_.aadm <= st_.std_dev + 1e-12
    assert st_.aadm <= st_.above_ground + 1e-12


@settings(max_examples=200)
@given(spectral_weights(), st.lists(st.floats(-20, 20), min_size=1, max_size=20))
def test_median_minimises_absolute_deviation(w, probes):
    st_ = dispersion_stats(w)
    assert st_.aadm == pytest.approx(aadm_brute_force(w), abs=1e-12)
    for x in probes:
        assert st_.aadm <= float(np.dot(w.weights, np.abs(w.energies - x))) + 1e-12


@settings(max_examples=200)
@given(spectral_weights(), st.floats(-50, 50), st.sampled_from([0.0, 0.3, 0.9]))
def test_energy_shift_covariance(w, c, eps):
    a, b = dispersion_stats(w), dispersion_stats(w.shifted(c))
    for field in ("mean_energy", "ground_energy", "median"):
        assert getattr(b, field) == pytest.approx(getattr(a, field) + c, abs=1e-9)
    for field in ("std_dev", "above_ground", "aadm"):
        assert getattr(b, field) == pytest.approx(getattr(a, field), abs=1e-9)
    if a.excess_kurtosis is not None and a.std_dev > 1e-3:
        assert b.excess_kurtosis == pytest.approx(a.excess_kurtosis, rel=1e-6, abs=1e-6)
    ra, rb = bound_report(w, eps), bound_report(w.shifted(c), eps)
    for field in ("tau_teur", "tau_ml", "tau_c"):
        x, y = getattr(ra, field), getattr(rb, field)
        if math.isfinite(x) and x < 1e6:
            assert y == pytest.approx(x, rel=1e-6)


@pytest.mark.parametrize(
    "g, at_quarter", [(g_teur, 2 / 3), (g_ml, 4 / 9), (g_c, 0.5)]
)
def test_g_function_values(g, at_quarter):
    assert g(0.0) == 1.0
    assert g(1.0) == 0.0
    assert g(0.25) == pytest.approx(at_quarter, abs=1e-15)


@pytest.mark.parametrize("g", [g_teur, g_ml, g_c])
@pytest.mark.parametrize("eps", [-1e-9, 1.0000001, math.nan])
def test_g_function_domain(g, eps):
    with pytest.raises(DomainError):
        g(eps)


@given(st.floats(0, 1), st.floats(0, 1))
def test_g_functions_decrease_into_unit_interval(e1, e2):
    assume(e1 < e2)
    for g in (g_teur, g_ml, g_c):
        assert 0.0 <= g(e2) <= g(e1) <= 1.0


def test_g_ratio_monotone_on_grid():
    grid = np.arange(100) / 100
    r_teur = [g_c(e) / g_teur(e) for e in grid]
    r_ml = [g_c(e) / g_ml(e) for e in grid]
    assert np.all(np.diff(r_teur) <= 0) and np.all(np.diff(r_ml) >= 0)
    assert r_teur[0] == r_ml[0] == 1.0


def test_g_ratio_limits_near_one():
    # the ratio to g_teur vanishes only as eps -> 1, not as eps -> 0
    assert g_c(1 - 1e-12) / g_teur(1 - 1e-12) < 1e-5
    assert g_c(1 - 1e-10) / g_ml(1 - 1e-10) == pytest.approx(math.pi**2 / 8, rel=1e-4)
    assert g_c(1e-12) / g_teur(1e-12) == pytest.approx(1.0, abs=1e-5)


def test_bound_report_two_level():
    rep = bound_report(SpectralWeights.from_levels([(-1.0, 0.5), (1.0, 0.5)]), 0.0)
    assert rep.tau_teur == pytest.approx(math.pi / 2)
    assert rep.tau_ml == pytest.approx(math.pi / 2)
    assert rep.tau_c == pytest.approx(1.38006, abs=1e-5)


def test_bound_report_tight_state():
    alpha = 1 / (A * X_M)
    w = SpectralWeights.from_levels([(-1.0, alpha / 2), (0.0, 1 - alpha), (1.0, alpha / 2)])
    rep = bound_report(w, 0.0)
    assert rep.tau_c == pytest.approx(X_M, rel=1e-12)
    assert rep.tau_c == pytest.approx(2.33112, abs=1e-5)


def test_bound_report_scales_with_hbar_and_energy():
    base = bound_report(SpectralWeights.from_levels([(-1.0, 0.3), (2.0, 0.7)]), 0.2)
    scaled = bound_report(SpectralWeights.from_levels([(-3.0, 0.3), (6.0, 0.7)], hbar=2.0), 0.2)
    for field in ("tau_teur", "tau_ml", "tau_c"):
        assert getattr(scaled, field) == pytest.approx(getattr(base, field) * 2 / 3)


@settings(max_examples=50)
@given(spectral_weights())
def test_bounds_vanish_at_unit_fidelity(w):
    rep = bound_report(w, 1.0)
    assert (rep.tau_teur, rep.tau_ml, rep.tau_c) == (0.0, 0.0, 0.0)


def test_stationary_bounds_are_infinite():
    rep = bound_report(SpectralWeights.from_levels([(2.0, 1.0)]), 0.5)
    assert rep.tau_teur == rep.tau_ml == rep.tau_c == math.inf


def test_bound_report_accepts_states():
    s = PureState.from_arrays([-1.0, 1.0], [1, 1j] / np.sqrt(2))
    assert bound_report(s, 0.0).tau_teur == pytest.approx(math.pi / 2)
