"""Receiver chain: AWGN injection, per-subcarrier LS estimation, MRC, SER.

The SNR reference is the average received signal power per antenna
measured on the actual noiseless samples, so the noise variance adapts to
each frame realization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_ERASURE_FLOOR = 1e-12  # per-antenna |H| below this counts as a dead subcarrier


@dataclass(frozen=True)
class NoiseSpec:
    """Per-receive-antenna SNR in dB; np.inf means noiseless."""

    snr_db: float


@dataclass(frozen=True)
class ChannelEstimate:
    """Per receive antenna, per subcarrier frequency response."""

    response: np.ndarray   # (n_rx, n_subcarriers)


def add_awgn(samples, spec: NoiseSpec, rng: np.random.Generator) -> np.ndarray:
    """Add circularly-symmetric complex Gaussian noise at the implied variance."""
    samples = np.asarray(samples, dtype=complex)
    if np.isinf(spec.snr_db):
        return samples.copy()
    power = float(np.mean(np.abs(samples) ** 2))
    if power <= 0.0:
        raise ValueError("zero signal power: SNR reference undefined")
    var = power * 10.0 ** (-spec.snr_db / 10.0)
    noise = rng.standard_normal(samples.shape) + 1j * rng.standard_normal(samples.shape)
    return samples + np.sqrt(var / 2.0) * noise


def ls_estimate(training_rx: np.ndarray, training_tx: np.ndarray) -> ChannelEstimate:
    """Per-subcarrier least squares: H[n_r, k] = Y[n_r, k] / X[k]."""
    training_rx = np.asarray(training_rx, dtype=complex)
    training_tx = np.asarray(training_tx, dtype=complex)
    if training_rx.ndim != 2 or training_rx.shape[1] != training_tx.shape[0]:
        raise ValueError("training dimensions do not match")
    if np.any(np.abs(training_tx) == 0.0):
        raise ValueError("training symbols must be nonzero on all subcarriers")
    h = training_rx / training_tx[None, :]
    h.setflags(write=False)
    return ChannelEstimate(response=h)


def mrc_detect(data_rx: np.ndarray, est: ChannelEstimate) -> np.ndarray:
    """Maximum ratio combining across receive antennas.

    x_hat[k] = sum_r conj(H[r,k]) Y[r,k] / sum_r |H[r,k]|^2. Subcarriers
    whose channel column is numerically dead are flagged as erasures
    (returned non-finite) and count as errors downstream.
    """
    data_rx = np.asarray(data_rx, dtype=complex)
    h = est.response
    if data_rx.shape != h.shape:
        raise ValueError("data dimensions do not match the estimate")
    den = np.sum(np.abs(h) ** 2, axis=0)
    dead = den < h.shape[0] * _ERASURE_FLOOR ** 2
    num = np.sum(np.conj(h) * data_rx, axis=0)
    out = np.where(dead, complex(np.nan, np.nan),
                   num / np.where(dead, 1.0, den))
    return out


def measure_ser(decided, truth) -> float:
    """Fraction of symbol mismatches (exact rational count)."""
    decided = np.asarray(decided).ravel()
    truth = np.asarray(truth).ravel()
    if decided.shape != truth.shape:
        raise ValueError("length mismatch")
    return float(np.count_nonzero(decided != truth)) / len(truth)
