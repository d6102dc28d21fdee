"""Unit tests for the global checks in :mod:`qtransverse.pipeline.verify`."""

from __future__ import annotations

import math

import pytest

from qtransverse.pipeline import FlatModel, PeakCombination, sup_on_sublevel, verify_global


def test_sup_of_a_single_peak_is_one() -> None:
    model = FlatModel(1, 10.0)
    s = PeakCombination.single(model, [1.0])
    sup = sup_on_sublevel(s, step=0.25)
    assert 0.99 < sup.measured <= 1.0 + 1e-12
    assert sup.bound >= 1.0 - 1e-12
    assert sup.bound == pytest.approx(sup.measured + sup.slack)


def test_sup_scales_with_the_coefficient() -> None:
    model = FlatModel(1, 10.0)
    sup = sup_on_sublevel(PeakCombination.single(model, [1.0], 0.5))
    assert sup.bound == pytest.approx(0.5, rel=1e-9)


def test_sup_of_the_zero_section() -> None:
    sup = sup_on_sublevel(PeakCombination.zero(FlatModel(2, 4.0)))
    assert tuple(sup) == (0.0, 0.0, 0.0)


def test_sup_step_must_be_positive() -> None:
    with pytest.raises(ValueError, match="step must be > 0"):
        sup_on_sublevel(PeakCombination.single(FlatModel(1, 1.0), [1.0]), step=0.0)


def test_verify_global_on_the_circle() -> None:
    model = FlatModel(1, 1.0)
    s = PeakCombination.single(model, [1.0])
    result = verify_global(s, sphere_step=0.05)
    assert 0.0 < result.certificate.bound <= math.exp(-2.0)
    assert result.certificate.certified
    assert result.sup.bound >= 1.0 - 1e-12
    payload = result.as_dict()
    assert set(payload) == {"sup", "certificate"}
    assert payload["sup"]["bound"] == result.sup.bound
