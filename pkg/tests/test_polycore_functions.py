"""Unit tests for :mod:`qtransverse.polycore`: polynomials, exponential sums,
Taylor truncation, certified sup bounds and quadratic normal forms.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from qtransverse.polycore import (
    ExpAffinePoly,
    HoloPoly,
    MultiIndex,
    RealQuadratic,
    evaluate,
    iter_graded,
    measure_sup,
    pluriharmonic_split,
    random_polynomial,
    taylor_tail_bound,
    truncate_with_tail_bound,
    wirtinger_derivative,
)


def _z(n: int, axis: int) -> HoloPoly:
    return HoloPoly.variable(n, axis)


def _sphere_points(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    g = rng.standard_normal((count, 2 * n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g[:, 0::2] + 1j * g[:, 1::2]


def _ball_points(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    radii = rng.random((count, 1)) ** (1.0 / (2 * n))
    return radii * _sphere_points(rng, count, n)


def _random_expaffine(n: int, seed: int) -> ExpAffinePoly:
    rng = np.random.default_rng(seed)
    lam = 0.7 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    c = 0.1 * complex(rng.standard_normal(), rng.standard_normal())
    return ExpAffinePoly(
        n,
        [
            (random_polynomial(n, 2, seed=seed), tuple(lam), c),
            (random_polynomial(n, 3, seed=seed + 1000), (0j,) * n, 0j),
        ],
    )


def test_multiindex_rejects_negative_exponents() -> None:
    with pytest.raises(ValueError, match="nonnegative"):
        MultiIndex((1, -1))


def test_multiindex_unit_and_shift_are_zero_based() -> None:
    assert MultiIndex.unit(3, 0) == (1, 0, 0)
    assert MultiIndex.unit(3, 2).shifted(0, 2) == (2, 0, 1)


def test_graded_order_for_two_variables() -> None:
    assert list(iter_graded(2, 2)) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def test_holopoly_arithmetic_and_degree() -> None:
    p = (_z(2, 1) + 1) * (_z(2, 1) + 1)
    assert p.coefficient((2, 0)) == 1
    assert p.coefficient((1, 0)) == 2
    assert p.coefficient((0, 0)) == 1
    assert p.degree == 2
    assert HoloPoly.zero(2).degree == -math.inf


def test_holopoly_cancellation_drops_terms() -> None:
    p = _z(1, 1) - _z(1, 1)
    assert p.is_zero()
    assert len(p) == 0


def test_holopoly_derivative_uses_one_based_axes() -> None:
    p = _z(2, 1) * _z(2, 2) * _z(2, 2)
    assert p.derivative(2) == 2 * _z(2, 1) * _z(2, 2)
    with pytest.raises(ValueError, match=r"axis must lie in \[1, 2\]"):
        p.derivative(0)


def test_wirtinger_derivative_and_evaluate_accept_plain_polynomials() -> None:
    p = _z(2, 1) * _z(2, 1) * _z(2, 2)
    d1 = wirtinger_derivative(p, 1)
    assert d1 == 2 * _z(2, 1) * _z(2, 2)
    assert evaluate(d1, [1.0, 3.0]) == pytest.approx(6.0)
    with pytest.raises(ValueError):
        wirtinger_derivative(p, 3)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("kind", ["holopoly", "expaffine"])
def test_wirtinger_derivative_matches_central_differences(kind: str, n: int) -> None:
    rng = np.random.default_rng(10 * n)
    f = random_polynomial(n, 4, seed=n) if kind == "holopoly" else _random_expaffine(n, n)
    h = 1e-5
    for z in _ball_points(rng, 25, n):
        axis = int(rng.integers(1, n + 1))
        exact = wirtinger_derivative(f, axis).evaluate(z)
        step = np.zeros(n, dtype=complex)
        step[axis - 1] = h
        along_re = (f.evaluate(z + step) - f.evaluate(z - step)) / (2.0 * h)
        along_im = (f.evaluate(z + 1j * step) - f.evaluate(z - 1j * step)) / (2j * h)
        assert along_re == pytest.approx(exact, rel=1e-6, abs=1e-9)
        assert along_im == pytest.approx(exact, rel=1e-6, abs=1e-9)


def test_holopoly_evaluate_single_and_batched_points() -> None:
    p = _z(2, 1) * 2 + _z(2, 2) * 1j
    assert p.evaluate([1.0, 1.0]) == pytest.approx(2 + 1j)
    values = p.evaluate(np.ones((3, 4, 2)))
    assert values.shape == (3, 4)
    with pytest.raises(ValueError, match="dimension mismatch"):
        p.evaluate([1.0, 2.0, 3.0])


def test_holopoly_dimension_mismatch_on_add() -> None:
    with pytest.raises(ValueError, match="Dimension mismatch"):
        _z(1, 1) + _z(2, 1)


def test_holopoly_from_dict_reports_malformed_input() -> None:
    p = HoloPoly.from_dict({"n": 1, "terms": [{"alpha": [2], "re": 1.0, "im": -1.0}]})
    assert p.coefficient((2,)) == 1 - 1j
    with pytest.raises(ValueError, match="Malformed polynomial JSON"):
        HoloPoly.from_dict({"terms": []})


def test_ball_majorant_bounds_samples() -> None:
    p = _z(2, 1) * _z(2, 2) - 3 * _z(2, 1) + 0.5j
    rng = np.random.default_rng(0)
    pts = rng.standard_normal((200, 2)) + 1j * rng.standard_normal((200, 2))
    pts = 0.9 * pts / np.linalg.norm(pts, axis=1, keepdims=True)
    assert np.max(np.abs(p.evaluate(pts))) <= p.majorant(1.0)


def test_expaffine_derivative_of_exponential() -> None:
    f = ExpAffinePoly.exponential(1, [2.0])
    df = f.derivative(1)
    z = np.array([0.3 + 0.1j])
    assert df.evaluate(z) == pytest.approx(2.0 * np.exp(2.0 * z[0]))


def test_expaffine_taylor_matches_exponential() -> None:
    f = ExpAffinePoly.exponential(2, [1.0, -0.5j], c=0.1)
    poly = f.taylor(20)
    z = np.array([0.4, 0.2 + 0.3j])
    assert poly.evaluate(z) == pytest.approx(f.evaluate(z), abs=1e-12)


def test_expaffine_merges_terms_with_same_exponent() -> None:
    f = ExpAffinePoly.exponential(1, [1.0]) + ExpAffinePoly.exponential(1, [1.0])
    assert len(f.terms) == 1
    assert f.evaluate([0.0]) == pytest.approx(2.0)


def test_expaffine_to_holopoly_rejects_exponentials() -> None:
    assert ExpAffinePoly.from_holopoly(_z(1, 1)).to_holopoly() == _z(1, 1)
    with pytest.raises(ValueError, match="exponential terms"):
        ExpAffinePoly.exponential(1, [1.0]).to_holopoly()


def test_taylor_tail_bound_closed_form() -> None:
    # R = 2: M R^-1 / (1 - 1/R) = 1
    assert taylor_tail_bound(1.0, 0, 2.0) == pytest.approx(1.0)
    with pytest.raises(ValueError, match="margin must be > 0"):
        taylor_tail_bound(1.0, 3, 0.0)


@pytest.mark.parametrize("seed", range(100))
def test_truncation_error_is_below_tail_bound(seed: int) -> None:
    n = 1 + seed % 2
    f = _random_expaffine(n, seed)
    margin = 0.25
    sup = measure_sup(f, 1.0 + margin)
    poly, tail = truncate_with_tail_bound(f, 6, sup.bound, margin)
    pts = _sphere_points(np.random.default_rng(seed), 512, n)
    err = np.max(np.abs(poly.evaluate(pts) - f.evaluate(pts)))
    assert err <= tail


def test_measure_sup_certifies_the_sup() -> None:
    p = _z(1, 1) * _z(1, 1) + 0.5 * _z(1, 1)
    sup = measure_sup(p, 1.0, resolution=128)
    assert sup.measured <= 1.5 + 1e-12
    assert sup.bound >= 1.5
    assert sup.bound == pytest.approx(sup.measured + sup.slack)


def test_measure_sup_rejects_bad_arguments() -> None:
    with pytest.raises(ValueError, match="radius must be > 0"):
        measure_sup(_z(1, 1), 0.0)
    with pytest.raises(ValueError, match="resolution must be >= 4"):
        measure_sup(_z(1, 1), 1.0, resolution=2)


def test_random_polynomial_respects_sup_target() -> None:
    p = random_polynomial(2, 3, sup_target=0.5, seed=4)
    assert p.degree <= 3
    assert measure_sup(p, 1.25).measured <= 0.5 + 1e-12
    again = random_polynomial(2, 3, sup_target=0.5, seed=4)
    assert p == again


@pytest.mark.parametrize("seed", range(5))
def test_pluriharmonic_split_residual_vanishes(seed: int) -> None:
    rng = np.random.default_rng(seed)
    n = 2 + seed % 2
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    s = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    phi = RealQuadratic(
        a=float(rng.standard_normal()),
        linear=rng.standard_normal(n) + 1j * rng.standard_normal(n),
        holomorphic=0.5 * (s + s.T),
        hermitian=g @ g.conj().T + 0.1 * np.eye(n),
    )
    split = pluriharmonic_split(phi)
    pts = _ball_points(rng, 1000, n)
    assert np.max(np.abs(split.residual(phi, pts))) < 1e-10
    tz = pts @ split.T.T
    assert np.all(np.sum(np.abs(tz) ** 2, axis=1) > 0.0)


def test_pluriharmonic_split_needs_positive_definite_part() -> None:
    phi = RealQuadratic.from_hermitian([[1.0, 0.0], [0.0, -1.0]])
    with pytest.raises(ValueError, match="smallest eigenvalue"):
        pluriharmonic_split(phi)


def test_real_quadratic_validates_hermitian_part() -> None:
    with pytest.raises(ValueError, match="Hermitian part"):
        RealQuadratic(0.0, np.zeros(2), np.zeros((2, 2)), np.array([[1.0, 1.0], [0.0, 1.0]]))
