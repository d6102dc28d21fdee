"""Unit tests for :mod:`qtransverse.algvar.tube` and the variety specs."""

from __future__ import annotations

import numpy as np
import pytest

from qtransverse.algvar import (
    WONGKEW_COLUMNS,
    VarietySpec,
    hypersurface,
    loglog_slope,
    project_to_variety,
    random_hypersurface,
    tube_volume,
    wongkew_scan,
)
from qtransverse.polycore import HoloPoly


def _vertical_line() -> VarietySpec:
    return hypersurface(HoloPoly.variable(2, 1) - 0.5)


def test_variety_spec_rejects_complex_coefficients() -> None:
    with pytest.raises(ValueError, match="non-real coefficients"):
        hypersurface(HoloPoly.variable(2, 1) + 1j)


def test_constant_variety_is_empty() -> None:
    X = hypersurface(HoloPoly.constant(2, 1.0))
    assert X.is_empty
    _, converged = project_to_variety(X, np.zeros((3, 2)))
    assert not converged.any()


def test_random_hypersurface_has_the_requested_degree() -> None:
    X = random_hypersurface(3, seed=2)
    assert X.degree == 3
    assert X == random_hypersurface(3, seed=2)


def test_projection_onto_a_line() -> None:
    X = hypersurface(HoloPoly.variable(2, 1) + HoloPoly.variable(2, 2) - 1.0)
    pts = np.array([[0.0, 0.0], [0.9, 0.8], [0.2, 0.3]])
    found, converged = project_to_variety(X, pts)
    assert converged.all()
    assert np.allclose(found.sum(axis=1), 1.0)
    dist = np.linalg.norm(found - pts, axis=1)
    assert np.allclose(dist, np.abs(pts.sum(axis=1) - 1.0) / np.sqrt(2.0))


def test_tube_volume_of_a_line_is_twice_eps() -> None:
    est = tube_volume(_vertical_line(), 0.1, samples=20000, seed=1)
    assert est.failures == 0
    assert abs(est.estimate - 0.2) <= 3.0 * est.half_width
    assert est.misses == est.samples - est.hits


def test_tube_volume_is_monotone_in_eps() -> None:
    X = random_hypersurface(2, seed=0)
    small = tube_volume(X, 0.02, samples=4000, seed=3)
    large = tube_volume(X, 0.05, samples=4000, seed=3)
    assert large.hits >= small.hits


def test_tube_volume_rejects_bad_eps() -> None:
    with pytest.raises(ValueError, match="eps must be positive"):
        tube_volume(_vertical_line(), 0.0, samples=10)


def test_loglog_slope_of_linear_volumes() -> None:
    eps = [0.1, 0.05, 0.02]
    assert loglog_slope(eps, [2 * e for e in eps]) == pytest.approx(1.0)
    with pytest.raises(ValueError, match="at least two positive volumes"):
        loglog_slope(eps, [0.0, 0.0, 0.1])


def test_wongkew_scan_rows_follow_the_csv_columns() -> None:
    scan = wongkew_scan([1, 2], [0.1, 0.05], samples=2000, seed=0)
    assert len(scan.rows) == 4
    assert all(list(row) == WONGKEW_COLUMNS for row in scan.rows)
    assert set(scan.slopes) == {1, 2}
    payload = scan.as_dict()
    assert set(payload["slopes"]) == {"1", "2"}


def test_tube_volume_of_a_circle_is_a_quarter_annulus() -> None:
    x, y = HoloPoly.variable(2, 1), HoloPoly.variable(2, 2)
    X = hypersurface(x * x + y * y - 0.25)
    eps = 0.05
    est = tube_volume(X, eps, samples=20000, seed=4)
    assert est.failures == 0
    assert abs(est.estimate - np.pi * eps / 2.0) <= 3.0 * est.half_width


@pytest.mark.slow
def test_random_curves_follow_the_linear_scaling_law() -> None:
    degrees = [1, 2, 3, 4, 5]
    scan = wongkew_scan(degrees, [0.1, 0.05, 0.02, 0.01], samples=20000, seed=0)
    for d in degrees:
        assert 0.85 <= scan.slopes[d] <= 1.15
    # a degree d curve has length <= 2d inside the unit square
    assert max(scan.ratios.values()) <= 6.0
