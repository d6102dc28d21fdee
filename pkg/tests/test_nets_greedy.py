"""Unit tests for :mod:`qtransverse.nets`: clouds, greedy nets and colorings."""

from __future__ import annotations

import math

import numpy as np
import pytest

from qtransverse.levi import Sphere, Wall
from qtransverse.nets import (
    MetricCloud,
    calibrate_colors,
    colors_as_rows,
    covering_radius,
    geodesic_slack,
    greedy_coloring,
    greedy_net,
    points_as_rows,
    sample_boundary,
    verify_coloring,
    verify_net,
)


def _wall_line(values) -> MetricCloud:
    return MetricCloud(Wall(1, radius=10.0), np.array([[1j * v] for v in values]))


def test_circle_cloud_size_follows_density() -> None:
    cloud = sample_boundary(Sphere(1, 2.0), density=20.0, seed=0)
    assert len(cloud) == math.ceil(20.0 * 2 * math.pi * 2.0)
    assert np.allclose(np.abs(cloud.points), 1.0)


def test_cloud_is_deterministic_in_the_seed() -> None:
    a = sample_boundary(Sphere(1, 2.0), density=4.0, seed=3)
    b = sample_boundary(Sphere(1, 2.0), density=4.0, seed=3)
    c = sample_boundary(Sphere(1, 2.0), density=4.0, seed=4)
    assert np.array_equal(a.points, b.points)
    assert not np.array_equal(a.points, c.points)


def test_cloud_rejects_bad_input() -> None:
    with pytest.raises(ValueError, match="density must be positive"):
        sample_boundary(Sphere(1, 2.0), density=0.0)
    with pytest.raises(ValueError, match=r"n in \{1, 2\}"):
        sample_boundary(Sphere(3, 2.0))
    with pytest.raises(ValueError, match="not on the sphere hypersurface"):
        MetricCloud(Sphere(1, 2.0), np.array([[0.5]]))


def test_wall_cloud_lies_on_the_wall() -> None:
    cloud = sample_boundary(Wall(2, radius=1.0), density=2.0, seed=1)
    assert len(cloud) > 0
    assert np.all(np.abs(cloud.points[:, 0].real) < 1e-12)
    assert np.all(np.linalg.norm(cloud.points, axis=1) <= 1.0 + 1e-12)


def test_circle_net_is_separated_and_maximal() -> None:
    cloud = sample_boundary(Sphere(1, 2.0), density=20.0, seed=0)
    net = greedy_net(cloud, 1.0)
    # chord 4 sin(theta / 2) >= 1 needs 21 cloud steps of 2 pi / 252
    assert len(net) == 12
    check = verify_net(net)
    assert check.ok
    assert check.min_separation >= 1.0
    assert check.covering_radius < 1.0


def test_circle_net_size_grows_like_sqrt_k() -> None:
    ks = [50.0, 100.0, 200.0, 400.0]
    ratios = []
    for k in ks:
        net = greedy_net(sample_boundary(Sphere(1, k), density=4.0, seed=1), 1.0)
        assert verify_net(net).ok
        ratios.append(len(net) / math.sqrt(k))
    center = float(np.mean(ratios))
    assert all(0.8 * center <= r <= 1.2 * center for r in ratios)


def test_net_on_a_line_and_its_covering_radius() -> None:
    net = greedy_net(_wall_line([0.0, 0.4, 1.0, 1.4]), 1.0)
    assert net.indices.tolist() == [0, 2]
    assert covering_radius(net) == pytest.approx(0.4)


def test_greedy_net_rejects_empty_cloud_and_bad_separation() -> None:
    with pytest.raises(ValueError, match="empty cloud"):
        greedy_net(MetricCloud(Wall(1), np.zeros((0, 1))), 1.0)
    with pytest.raises(ValueError, match="separation must be positive"):
        greedy_net(_wall_line([0.0]), 0.0)


def test_first_fit_coloring_rounds() -> None:
    net = greedy_net(_wall_line([0.0, 1.0, 2.0, 3.0, 4.0]), 1.0)
    coloring = greedy_coloring(net, 3.0)
    assert coloring.M == 3
    assert [cls.tolist() for cls in coloring.classes()] == [[0, 3], [1, 4], [2]]
    check = verify_coloring(coloring)
    assert check.ok
    assert check.min_same_color == pytest.approx(3.0)


def test_coloring_needs_d_at_least_one() -> None:
    net = greedy_net(_wall_line([0.0, 1.0]), 1.0)
    with pytest.raises(ValueError, match="D must be >= 1"):
        greedy_coloring(net, 0.5)


def test_calibrate_colors_grows_with_d() -> None:
    net = greedy_net(sample_boundary(Sphere(1, 50.0), density=4.0, seed=0), 1.0)
    table = calibrate_colors(net, [2.0, 4.0, 8.0])
    assert list(table) == [2.0, 4.0, 8.0]
    assert table[2.0] <= table[4.0] <= table[8.0]


def test_geodesic_slack() -> None:
    assert geodesic_slack(Wall(1), 1.0) == 0.0
    assert geodesic_slack(Sphere(1, 2.0), 1.0) > 0.0


def test_csv_rows() -> None:
    net = greedy_net(_wall_line([0.0, 1.0]), 1.0)
    rows = points_as_rows(net)
    assert list(rows[0]) == ["index", "re_z1", "im_z1"]
    assert rows[1]["im_z1"] == 1.0
    colored = colors_as_rows(greedy_coloring(net, 2.0))
    assert [row["color"] for row in colored] == [1, 2]
