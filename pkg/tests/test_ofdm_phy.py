import itertools

import numpy as np
import pytest

from beamdoppler.config import SystemConfig
from beamdoppler.ofdm_phy import (constellation, nearest_symbol_indices,
                                  ofdm_demodulate, ofdm_modulate, qam_demap,
                                  qam_map, random_frame, training_symbols)


def small_cfg(n_c, cp):
    return SystemConfig(n_subcarriers=n_c, cp_len=cp, n_taps=1,
                        tap_delays=(0,))


def test_constellation_unit_energy():
    for order in (4, 16, 64):
        pts = constellation(order)
        assert len(pts) == order
        assert np.mean(np.abs(pts) ** 2) == pytest.approx(1.0, rel=1e-12)


def test_gray_neighbors_differ_by_one_bit():
    # adjacent levels on each axis must flip a single bit
    pts = constellation(16)
    for i, j in itertools.combinations(range(16), 2):
        d = abs(pts[i] - pts[j])
        if d < 2.1 / np.sqrt(10):   # nearest neighbors on the grid
            assert bin(i ^ j).count("1") == 1


def test_map_demap_roundtrip_all_words():
    for order, k in ((4, 2), (16, 4), (64, 6)):
        words = np.array(list(itertools.product([0, 1], repeat=k)))
        bits = words.ravel()
        np.testing.assert_array_equal(qam_demap(qam_map(bits, order), order),
                                      bits)


def test_demap_nearest_neighbor_within_half_min_distance():
    rng = np.random.default_rng(2)
    pts = constellation(16)
    dmin = min(abs(a - b) for a, b in itertools.combinations(pts, 2))
    idx = rng.integers(0, 16, 500)
    jitter = (rng.uniform(-1, 1, 500) + 1j * rng.uniform(-1, 1, 500))
    jitter *= 0.49 * dmin / np.abs(jitter)
    noisy = pts[idx] + jitter
    np.testing.assert_array_equal(nearest_symbol_indices(noisy, 16), idx)


def test_qam_map_rejects_bad_length():
    with pytest.raises(ValueError):
        qam_map([0, 1, 1], 16)


def test_modulate_zero_block():
    cfg = small_cfg(64, 8)
    np.testing.assert_array_equal(ofdm_modulate(np.zeros(64), cfg),
                                  np.zeros(72))


def test_modulate_dc_subcarrier_is_constant():
    cfg = small_cfg(64, 8)
    x = np.zeros(64, dtype=complex)
    x[0] = 1.0
    s = ofdm_modulate(x, cfg)
    np.testing.assert_allclose(s, np.full(72, 1 / np.sqrt(64)), atol=1e-15)


def test_parseval_energy_preserved():
    rng = np.random.default_rng(0)
    cfg = small_cfg(128, 16)
    x = rng.standard_normal(128) + 1j * rng.standard_normal(128)
    s = ofdm_modulate(x, cfg)
    body = s[cfg.cp_len:]
    assert np.sum(np.abs(body) ** 2) == pytest.approx(
        np.sum(np.abs(x) ** 2), rel=1e-12)


def test_cp_is_cyclic_copy():
    rng = np.random.default_rng(1)
    cfg = small_cfg(32, 7)
    s = ofdm_modulate(rng.standard_normal(32) + 0j, cfg)
    np.testing.assert_array_equal(s[:7], s[-7:])


@pytest.mark.parametrize("n_c", [8, 64, 128])
def test_roundtrip_identity(n_c):
    rng = np.random.default_rng(n_c)
    cfg = small_cfg(n_c, max(2, n_c // 8))
    x = rng.standard_normal(n_c) + 1j * rng.standard_normal(n_c)
    np.testing.assert_allclose(ofdm_demodulate(ofdm_modulate(x, cfg), cfg),
                               x, atol=1e-12)


def test_cyclic_delay_shift_theorem():
    rng = np.random.default_rng(9)
    cfg = small_cfg(64, 16)
    x = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    body = ofdm_modulate(x, cfg)[cfg.cp_len:]
    for d in (1, 5, 16):
        shifted = np.roll(body, d)
        got = np.fft.fft(shifted) / np.sqrt(64)
        want = x * np.exp(-2j * np.pi * np.arange(64) * d / 64)
        np.testing.assert_allclose(got, want, atol=1e-12)


def test_demodulate_matches_naive_dft_oracle():
    rng = np.random.default_rng(4)
    cfg = small_cfg(128, 16)
    x = rng.standard_normal(128) + 1j * rng.standard_normal(128)
    s = ofdm_modulate(x, cfg)
    body = s[cfg.cp_len:]
    # direct O(N^2) forward transform
    n = np.arange(128)
    naive = np.array([np.sum(body * np.exp(-2j * np.pi * k * n / 128))
                      for k in range(128)]) / np.sqrt(128)
    np.testing.assert_allclose(ofdm_demodulate(s, cfg), naive, atol=1e-10)


def test_demodulate_rejects_wrong_length():
    cfg = small_cfg(64, 8)
    with pytest.raises(ValueError):
        ofdm_demodulate(np.zeros(64), cfg)


def test_training_block_constant_amplitude_and_deterministic():
    t1 = training_symbols(128)
    t2 = training_symbols(128)
    np.testing.assert_array_equal(t1, t2)
    np.testing.assert_allclose(np.abs(t1), 1.0, rtol=1e-14)


def test_random_frame_layout():
    cfg = SystemConfig()
    frame = random_frame(cfg, np.random.default_rng(0))
    assert frame.symbols.shape == (5, 128)
    np.testing.assert_array_equal(frame.training, training_symbols(128))
    pts = constellation(16)
    np.testing.assert_array_equal(frame.data, pts[frame.data_indices])
