"""Tests for :func:`qtransverse.pipeline.donaldson_construct`.

The end-to-end runs use a small circle (``n = 1``, ``k = 2``) with a forced
separation ``D = 2`` and ``p = 3``; with ``p = 1`` the cap-to-floor ratio of
the first color is below what the wall engine needs.
"""

from __future__ import annotations

import numpy as np
import pytest

from qtransverse.config import section
from qtransverse.core.errors import ConstructionAborted
from qtransverse.levi import Sphere
from qtransverse.nets import MetricCloud, Net, greedy_net, sample_boundary
from qtransverse.pipeline import (
    CONSTRUCTION_COLUMNS,
    ConstructionParams,
    FlatModel,
    Schedule,
    donaldson_construct,
    influence_radius,
)


def test_influence_radius() -> None:
    assert influence_radius(1.0, 1.0) == 5.0
    assert influence_radius(1e-6, 1.0) == 1.0
    assert influence_radius(10.0, 1.0) > influence_radius(1.0, 1.0)


def test_params_validation() -> None:
    with pytest.raises(ValueError, match="density must be > 0"):
        ConstructionParams(density=0.0)
    with pytest.raises(ValueError, match="D must be >= 1"):
        ConstructionParams(D=0.5)


def test_params_from_pipeline_defaults() -> None:
    params = ConstructionParams.from_config(section("pipeline"))
    assert params.D is None
    assert params.max_candidates == 2000
    assert params.cell_budget == 100_000
    assert params.p_exponent == 3.0


def test_empty_net_aborts() -> None:
    model = FlatModel(1, 2.0)
    cloud = MetricCloud(Sphere(1, 2.0), np.zeros((0, 1), dtype=complex))
    net = Net(cloud=cloud, indices=np.zeros(0, dtype=np.int64), separation=1.0)
    with pytest.raises(ConstructionAborted, match="empty net") as info:
        donaldson_construct(model, net=net)
    assert info.value.diagnostics["N"] == 0


def test_schedule_too_short_for_the_coloring() -> None:
    model = FlatModel(1, 2.0)
    net = greedy_net(sample_boundary(model.sphere, 4.0, 0), 1.0)
    with pytest.raises(ValueError, match="Schedule has M=1 levels"):
        donaldson_construct(model, Schedule.build(3.0, 8.0, 10.0, 4.0, 1), net=net)


def _run(seed: int = 0):
    model = FlatModel(1, 2.0)
    return donaldson_construct(model, params=ConstructionParams(D=2.0, density=4.0), seed=seed)


@pytest.fixture(scope="module")
def report():
    return _run()


@pytest.mark.slow
def test_construction_on_the_circle(report) -> None:
    assert report.schedule.D_override
    assert report.coloring.M == report.schedule.M == 2
    assert len(report.points) == len(report.net) == 10
    for rec in report.points:
        assert rec.amplitude <= rec.cap * (1.0 + 1e-9)
        assert rec.color in (1, 2)
    assert report.certified_min > 0.0
    assert report.verification.sup.bound <= 1.0 + 1e-12
    assert report.normalization >= 1.0


@pytest.mark.slow
def test_construction_report_layout(report) -> None:
    rows = report.csv_rows()
    assert len(rows) == 2
    assert all(list(row) == CONSTRUCTION_COLUMNS for row in rows)
    payload = report.as_dict()
    assert payload["schedule"]["M"] == 2
    assert len(payload["section"]["centers"]) == 10
    assert payload["normalization"] == report.normalization


@pytest.mark.slow
def test_construction_is_deterministic(report) -> None:
    again = _run()
    assert again.section.to_dict() == report.section.to_dict()
    assert again.certified_min == report.certified_min
