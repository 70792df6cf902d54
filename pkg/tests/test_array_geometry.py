import numpy as np
import pytest

from beamdoppler.array_geometry import (ArraySpec, antenna_gain,
                                        build_beam_grid, gain_pattern,
                                        steering_matrix, steering_vector)


def brute_gain(spec, theta, theta_tilde):
    """Independent oracle: explicit M-term normalized inner product."""
    a = np.exp(2j * np.pi * spec.d_over_lambda * np.cos(theta)
               * np.arange(spec.num_elements))
    b = np.exp(2j * np.pi * spec.d_over_lambda * np.cos(theta_tilde)
               * np.arange(spec.num_elements))
    return np.conj(a) @ b / spec.num_elements


def test_steering_broadside_is_all_ones():
    v = steering_vector(ArraySpec(4, 0.45), np.pi / 2)
    np.testing.assert_allclose(v, np.ones(4), atol=1e-15)


def test_steering_endfire_two_elements():
    v = steering_vector(ArraySpec(2, 0.45), 0.0)
    np.testing.assert_allclose(v, [1.0, np.exp(2j * np.pi * 0.45)], rtol=1e-15)


def test_steering_norm_is_sqrt_m():
    spec = ArraySpec(128, 0.45)
    v = steering_vector(spec, 1.0)
    assert np.linalg.norm(v) == pytest.approx(np.sqrt(128), rel=1e-14)
    # unit modulus entries make the squared norm exactly M
    rng = np.random.default_rng(3)
    for theta in rng.uniform(0, np.pi, 20):
        v = steering_vector(spec, theta)
        assert np.sum(np.abs(v) ** 2) == pytest.approx(128.0, abs=1e-11)


def test_steering_rejects_bad_angle():
    with pytest.raises(ValueError):
        steering_vector(ArraySpec(4, 0.45), -0.1)
    with pytest.raises(ValueError):
        steering_vector(ArraySpec(4, 0.45), np.pi + 0.1)


def test_steering_matrix_matches_vectors():
    spec = ArraySpec(16, 0.3)
    thetas = np.array([0.2, 1.0, 2.9])
    mat = steering_matrix(spec, thetas)
    for k, th in enumerate(thetas):
        np.testing.assert_allclose(mat[:, k], steering_vector(spec, th))


def test_array_spec_validation():
    with pytest.raises(ValueError):
        ArraySpec(1, 0.45)
    with pytest.raises(ValueError):
        ArraySpec(8, 0.5)


def test_gain_equal_angles_is_one():
    for m in (2, 16, 311):
        assert antenna_gain(ArraySpec(m, 0.45), 0.7, 0.7) == 1.0


def test_gain_first_null():
    m, r = 128, 0.45
    spec = ArraySpec(m, r)
    theta = np.pi / 2
    theta_null = np.arccos(np.cos(theta) - 1.0 / (m * r))
    assert abs(antenna_gain(spec, theta, theta_null)) < 1e-12


def test_gain_matches_inner_product_oracle():
    spec = ArraySpec(64, 0.45)
    g = antenna_gain(spec, 0.7, 1.9)
    assert abs(abs(g) - abs(brute_gain(spec, 0.7, 1.9))) < 1e-12


def test_gain_oracle_random_sample():
    rng = np.random.default_rng(11)
    spec = ArraySpec(96, 0.45)
    m, r = spec.num_elements, spec.d_over_lambda
    worst = 0.0
    for _ in range(1000):
        th, tt = rng.uniform(0, np.pi, 2)
        oracle = brute_gain(spec, th, tt)
        g = antenna_gain(spec, th, tt)
        worst = max(worst, abs(abs(g) - abs(oracle)))
        # restoring the inter-element phase recovers the full inner product
        phase = np.exp(1j * np.pi * (m - 1) * r * (np.cos(tt) - np.cos(th)))
        worst = max(worst, abs(g * phase - oracle))
    assert worst < 1e-10


def test_gain_symmetry_and_bound():
    rng = np.random.default_rng(5)
    spec = ArraySpec(32, 0.41)
    for _ in range(200):
        th, tt = rng.uniform(0, np.pi, 2)
        g1, g2 = antenna_gain(spec, th, tt), antenna_gain(spec, tt, th)
        assert abs(abs(g1) - abs(g2)) < 1e-12
        assert abs(g1) <= 1.0 + 1e-12


def test_gain_pattern_removable_singularity():
    spec = ArraySpec(32, 0.45)
    vals = gain_pattern(spec, np.array([0.0, 1e-13, -1e-13]))
    np.testing.assert_allclose(vals, 1.0, atol=1e-9)


def test_beam_grid_two_degrees():
    grid = build_beam_grid(2.0)
    assert grid.count == 90
    assert grid.angles_rad[0] == pytest.approx(np.deg2rad(1.0))
    assert grid.angles_rad[-1] == pytest.approx(np.deg2rad(179.0))


def test_beam_grid_coarse():
    np.testing.assert_allclose(build_beam_grid(90.0).angles_rad,
                               np.deg2rad([45.0, 135.0]))
    np.testing.assert_allclose(build_beam_grid(180.0).angles_rad,
                               [np.pi / 2])


def test_beam_grid_rejects_bad_spacing():
    with pytest.raises(ValueError):
        build_beam_grid(0.0)
    with pytest.raises(ValueError):
        build_beam_grid(-2.0)
    with pytest.raises(ValueError):
        build_beam_grid(7.0)   # does not divide 180


def test_beam_grid_interior():
    for spacing in (0.5, 2.0, 5.0, 60.0):
        grid = build_beam_grid(spacing)
        assert np.all(grid.angles_rad > 0)
        assert np.all(grid.angles_rad < np.pi)
        assert np.all(np.diff(grid.angles_rad) > 0)
