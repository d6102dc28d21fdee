"""Tests for the log-derivative diagnostic and the complete weight."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate

from qtransverse.pipeline import (
    FlatModel,
    PeakCombination,
    complete_weight_g,
    log_derivative_diagnostic,
    log_derivative_trend,
)


def _peak(k: float) -> PeakCombination:
    return PeakCombination.single(FlatModel(1, k), [1.0])


def test_single_peak_log_derivative_stays_on_the_threshold_disc() -> None:
    # for one peak |d log s - k d'phi| = k |z - p| and the floor cuts at
    # k |z - p| < sqrt(2 k ln(1 / floor))
    diag = log_derivative_diagnostic(_peak(100.0), floor=0.1, probe_step=0.2)
    assert diag.kept > 0
    assert diag.probes >= diag.kept
    assert 0.0 < diag.raw_sup <= math.sqrt(200.0 * math.log(10.0)) + 1e-9
    assert diag.normalized_sup == pytest.approx(diag.raw_sup / 10.0)
    assert not diag.empty


def test_floor_above_the_peak_gives_an_empty_region() -> None:
    diag = log_derivative_diagnostic(_peak(10.0), floor=2.0, probe_step=0.5)
    assert diag.empty
    assert diag.raw_sup == 0.0
    assert diag.as_dict()["empty"] is True


def test_diagnostic_argument_errors() -> None:
    with pytest.raises(ValueError, match="floor must be > 0"):
        log_derivative_diagnostic(_peak(1.0), floor=0.0)
    with pytest.raises(ValueError, match="probe_step must be > 0"):
        log_derivative_diagnostic(_peak(1.0), floor=0.1, probe_step=-1.0)


def test_normalized_sup_is_stable_in_k() -> None:
    rows = log_derivative_trend({200.0: _peak(200.0), 50.0: _peak(50.0)}, floor=0.1, probe_step=0.2)
    assert [row["k"] for row in rows] == [50.0, 200.0]
    assert rows[0]["ratio"] is None
    assert rows[1]["ratio"] == pytest.approx(1.0, abs=0.15)


def test_weight_at_minus_one() -> None:
    w = complete_weight_g(-1.0)
    assert w.g1 == pytest.approx(1.0)
    assert w.g2 == pytest.approx(3.0)
    assert w.margin == pytest.approx(3.0)
    assert w.g > 0.0
    assert w.log_g1 == pytest.approx(0.0)
    assert set(w.as_dict()) == {"x", "g", "g1", "g2", "margin", "log_g", "log_g1"}


def test_weight_matches_direct_quadrature_away_from_zero() -> None:
    for x in (-3.0, -1.0, -0.5):
        direct, _ = integrate.quad(lambda t: math.exp(-t * t - 1.0 / t), -math.inf, x, epsabs=1e-13)
        assert complete_weight_g(x).g == pytest.approx(direct, rel=1e-7)


def test_weight_derivative_matches_quadrature() -> None:
    h = 1e-4
    slope = (complete_weight_g(-0.8 + h).g - complete_weight_g(-0.8 - h).g) / (2 * h)
    assert slope == pytest.approx(complete_weight_g(-0.8).g1, rel=1e-4)


def test_weight_margin_is_bounded_below() -> None:
    margins = [complete_weight_g(x).margin for x in np.linspace(-5.0, -0.1, 50)]
    # min of 2x^2 + 1/|x| is 3 * 2^{-1/3} at |x| = 4^{-1/3}
    assert min(margins) >= 3.0 * 2.0 ** (-1.0 / 3.0) - 1e-9


@pytest.mark.parametrize("x", [-1e-2, -1e-3, -1e-6])
def test_weight_near_zero_stays_finite_in_log_space(x: float) -> None:
    w = complete_weight_g(x)
    assert w.margin == pytest.approx(2.0 * x * x + 1.0 / abs(x))
    assert w.log_g1 == pytest.approx(-x * x - 1.0 / x)
    # g / g1 behaves like x^2 as x -> 0-
    assert w.log_g - w.log_g1 == pytest.approx(2.0 * math.log(abs(x)), abs=0.05)
    assert w.g1 == math.inf or w.g1 == pytest.approx(math.exp(w.log_g1))


def test_weight_margin_grows_without_bound_towards_zero() -> None:
    margins = [complete_weight_g(x).margin for x in (-1e-2, -1e-3, -1e-6)]
    assert margins == sorted(margins)
    assert margins[-1] > 1e5


def test_weight_rejects_nonnegative_x() -> None:
    with pytest.raises(ValueError, match="x must be < 0"):
        complete_weight_g(0.0)
