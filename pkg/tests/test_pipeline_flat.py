"""Unit tests for :mod:`qtransverse.pipeline.flat`: peak sections and chart quotients."""

from __future__ import annotations

import math

import numpy as np
import pytest

from qtransverse.pipeline import FlatModel, PeakCombination, PeakSection, chart_frame, peak_section_eval


def test_flat_model_validation() -> None:
    with pytest.raises(ValueError, match="k must be > 0"):
        FlatModel(1, 0.0)
    model = FlatModel(2, 8.0)
    assert model.eps == pytest.approx(0.25)
    assert model.sphere.k == 8.0


def test_peak_section_weighted_modulus_at_the_origin() -> None:
    model = FlatModel(1, 10.0)
    value, weighted = peak_section_eval(model, PeakSection((1.0,), 10.0), np.array([0.0]))
    assert abs(value) == pytest.approx(math.exp(-10.0))
    assert weighted == pytest.approx(math.exp(-5.0))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_weighted_modulus_is_exactly_gaussian_in_the_rescaled_distance(n: int) -> None:
    rng = np.random.default_rng(n)
    worst = 0.0
    for _ in range(100):
        model = FlatModel(n, float(rng.uniform(1.0, 400.0)))
        g = rng.standard_normal(2 * n)
        p = (g[0::2] + 1j * g[1::2]) / np.linalg.norm(g)
        z = p + model.eps * (rng.standard_normal((100, n)) + 1j * rng.standard_normal((100, n)))
        _, weighted = peak_section_eval(model, PeakSection(tuple(p), model.k), z)
        d = model.distance(z, p)
        worst = max(worst, float(np.max(np.abs(weighted - np.exp(-0.25 * d * d)))))
        assert np.all(weighted + 1e-15 >= np.exp(-0.375 * d * d))
        assert np.all(weighted <= np.exp(-0.125 * d * d) + 1e-15)
    assert worst <= 1e-12


def test_peak_section_kind_is_checked() -> None:
    with pytest.raises(ValueError, match=r"kind must be 0 or lie in \[2, 2\]"):
        PeakSection((1.0, 0.0), 1.0, kind=3)


def test_chart_frame_is_unitary_and_maps_e1_to_p() -> None:
    p = np.array([0.6, 0.8j])
    U = chart_frame(p)
    assert np.allclose(U[:, 0], p)
    assert np.allclose(U.conj().T @ U, np.eye(2))
    with pytest.raises(ValueError, match="unit vectors"):
        chart_frame([1.0, 1.0])


def test_single_peak_decays_like_a_gaussian() -> None:
    model = FlatModel(2, 5.0)
    s = PeakCombination.single(model, [1.0, 0.0])
    theta = np.linspace(0.0, 1.0, 7)
    pts = np.stack([np.cos(theta), np.sin(theta) + 0j], axis=1)
    d = model.distance(pts, np.array([1.0, 0.0]))
    assert np.allclose(np.abs(s.weighted(pts)), np.exp(-0.25 * d * d))


def test_single_peak_transversality_on_the_sphere() -> None:
    model = FlatModel(2, 5.0)
    p = np.array([1.0, 0.0])
    s = PeakCombination.single(model, p)
    z = np.array([[math.cos(0.2), math.sin(0.2)]], dtype=complex)
    W = np.abs(s.weighted(z))[0]
    overlap = abs(np.vdot(p, z[0]))
    # d log sigma_p = k conj(p); its xi-part has length k sqrt(1 - |<z, p>|^2)
    expected = W * (1.0 + model.eps * model.k * math.sqrt(1.0 - overlap**2))
    assert s.transversality(z)[0] == pytest.approx(expected)
    assert s.transversality(p[None, :])[0] == pytest.approx(1.0)


def test_with_point_and_scaling_are_linear() -> None:
    model = FlatModel(1, 3.0)
    a = PeakCombination.single(model, [1.0])
    both = a.with_point([1j], [2.0])
    z = np.array([[math.cos(0.4) + 1j * math.sin(0.4)]])
    single_b = PeakCombination.single(model, [1j], 2.0)
    assert both.weighted(z) == pytest.approx(a.weighted(z) + single_b.weighted(z))
    assert both.scaled(0.5).weighted(z) == pytest.approx(0.5 * both.weighted(z))
    assert len(both) == 2


def test_chart_quotient_matches_the_section_ratio() -> None:
    model = FlatModel(2, 5.0)
    q = np.array([math.cos(0.3), 1j * math.sin(0.3)])
    s = PeakCombination(model, [[1.0, 0.0], q], [[1.0, 0.5j], [0.3, -0.2]])
    p = np.array([math.cos(0.1), math.sin(0.1) + 0j])
    U = chart_frame(p)
    Q, tail = s.chart_quotient(p, U)
    assert tail == 0.0
    zeta = np.array([0.2 - 0.1j, 0.3j])
    z = p + model.eps * (U @ zeta)
    sigma, _ = peak_section_eval(model, PeakSection(tuple(p), model.k), z)
    assert Q.evaluate(zeta) == pytest.approx(complex(s.evaluate(z)) / complex(sigma), rel=1e-9)


def test_chart_quotient_cutoff_moves_far_terms_into_the_tail() -> None:
    model = FlatModel(1, 50.0)
    s = PeakCombination(model, [[1.0], [-1.0]], [[1.0], [1.0]])
    Q, tail = s.chart_quotient([1.0], cutoff=5.0)
    assert len(Q.terms) == 1
    assert 0.0 < tail < 1e-30


def test_section_json_form() -> None:
    model = FlatModel(1, 2.0)
    s = PeakCombination.single(model, [1j], 0.5)
    back = PeakCombination.from_dict(s.to_dict())
    assert np.array_equal(back.centers, s.centers)
    assert np.array_equal(back.coeffs, s.coeffs)
    assert len(PeakCombination.from_dict({"n": 1, "k": 2.0})) == 0
