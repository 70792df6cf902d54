import numpy as np
import pytest

from beamdoppler.uplink_receiver import (ChannelEstimate, NoiseSpec, add_awgn,
                                         ls_estimate, measure_ser, mrc_detect)


def test_awgn_infinite_snr_noop():
    x = np.exp(1j * np.arange(10))
    np.testing.assert_array_equal(
        add_awgn(x, NoiseSpec(np.inf), np.random.default_rng(0)), x)


def test_awgn_zero_signal_rejected():
    with pytest.raises(ValueError):
        add_awgn(np.zeros(8), NoiseSpec(10.0), np.random.default_rng(0))


def test_awgn_zero_db_noise_power():
    rng = np.random.default_rng(1)
    x = np.exp(1j * rng.uniform(0, 2 * np.pi, 400_000))
    y = add_awgn(x, NoiseSpec(0.0), rng)
    noise_power = np.mean(np.abs(y - x) ** 2)
    assert noise_power == pytest.approx(1.0, rel=0.01)


def test_ls_recovers_static_channel():
    rng = np.random.default_rng(2)
    h = rng.standard_normal((4, 64)) + 1j * rng.standard_normal((4, 64))
    x = np.exp(1j * rng.uniform(0, 2 * np.pi, 64))
    est = ls_estimate(h * x[None, :], x)
    assert np.max(np.abs(est.response - h)) < 1e-10


def test_ls_all_ones():
    x = np.exp(1j * np.linspace(0, 1, 32))
    est = ls_estimate(x[None, :], x)
    np.testing.assert_allclose(est.response, 1.0, rtol=1e-14)


def test_ls_rejects_zero_training():
    x = np.ones(8, dtype=complex)
    x[3] = 0.0
    with pytest.raises(ValueError):
        ls_estimate(np.ones((2, 8), complex), x)


def test_mrc_single_antenna_identity():
    y = np.array([[1 + 2j, -0.5j, 3.0]])
    est = ChannelEstimate(response=np.ones((1, 3), complex))
    np.testing.assert_allclose(mrc_detect(y, est), y[0], rtol=1e-14)


def test_mrc_zero_noise_consistency():
    rng = np.random.default_rng(3)
    h = rng.standard_normal((4, 32)) + 1j * rng.standard_normal((4, 32))
    x = rng.standard_normal(32) + 1j * rng.standard_normal(32)
    got = mrc_detect(h * x[None, :], ChannelEstimate(response=h))
    np.testing.assert_allclose(got, x, rtol=1e-12)


def test_mrc_array_gain():
    # post-combining SNR beats the average per-branch SNR
    rng = np.random.default_rng(4)
    n, k, snr = 4, 20_000, 10 ** (30 / 10)
    h = (rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))) \
        / np.sqrt(2)
    x = np.exp(1j * rng.uniform(0, 2 * np.pi, k))
    noise = (rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))) \
        * np.sqrt(1 / (2 * snr))
    xhat = mrc_detect(h * x[None, :] + noise, ChannelEstimate(response=h))
    err_power = np.mean(np.abs(xhat - x) ** 2)
    post_snr = 1.0 / err_power
    per_branch = snr * np.mean(np.abs(h) ** 2)
    assert post_snr > per_branch * 2.0   # well above a single branch


def test_mrc_erasure_flagging():
    h = np.ones((2, 4), dtype=complex)
    h[:, 2] = 0.0
    out = mrc_detect(np.ones((2, 4), complex), ChannelEstimate(response=h))
    assert np.all(np.isfinite(out[[0, 1, 3]]))
    assert not np.isfinite(out[2])


def test_mrc_shape_mismatch():
    with pytest.raises(ValueError):
        mrc_detect(np.ones((2, 4), complex),
                   ChannelEstimate(response=np.ones((2, 5), complex)))


def test_ser_counts():
    assert measure_ser([1, 2, 3], [1, 2, 3]) == 0.0
    truth = np.zeros(1000, dtype=int)
    decided = truth.copy()
    decided[123] = 7
    assert measure_ser(decided, truth) == 0.001


def test_ser_chance_level():
    rng = np.random.default_rng(5)
    truth = rng.integers(0, 16, 200_000)
    guess = rng.integers(0, 16, 200_000)
    assert measure_ser(guess, truth) == pytest.approx(1 - 1 / 16, abs=0.005)


def test_ser_length_mismatch():
    with pytest.raises(ValueError):
        measure_ser([1, 2], [1, 2, 3])
