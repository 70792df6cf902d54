"""Time-varying multipath MIMO channel (sum-of-paths Jakes construction).

Each tap holds N_p plane-wave paths with independent uniform departure and
arrival angles and uniform random phases; the per-path Doppler shift is
tied one-to-one to the departure angle, f = f_d * cos(aod). Path
parameters are frozen for the duration of a frame and redrawn per frame,
so Rayleigh statistics emerge from the path sum while the ensemble is
wide-sense stationary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .array_geometry import ArraySpec, steering_matrix
from .config import SystemConfig


class PathParams(NamedTuple):
    """One propagation path: complex gain, angles, derived Doppler shift."""

    gain: complex
    aod: float
    aoa: float
    dfo_hz: float


@dataclass(frozen=True)
class Tap:
    """One delay tap: integer sample delay plus its path parameter arrays."""

    delay: int
    gain: np.ndarray     # (n_paths,) complex, includes the random path phase
    aod: np.ndarray      # (n_paths,) radians in [0, pi]
    aoa: np.ndarray      # (n_paths,) radians in [0, pi]
    dfo_hz: np.ndarray   # (n_paths,) = f_d * cos(aod)

    @property
    def n_paths(self) -> int:
        return len(self.gain)

    def paths(self):
        for q in range(self.n_paths):
            yield PathParams(complex(self.gain[q]), float(self.aod[q]),
                             float(self.aoa[q]), float(self.dfo_hz[q]))


@dataclass(frozen=True)
class ChannelRealization:
    """The drawn taps of one frame; parameters are constant within a frame."""

    taps: tuple
    max_dfo_hz: float

    @property
    def n_taps(self) -> int:
        return len(self.taps)

    @property
    def max_delay(self) -> int:
        return max(t.delay for t in self.taps)

    def total_mean_power(self) -> float:
        return float(sum(np.sum(np.abs(t.gain) ** 2) for t in self.taps))


def _freeze(*arrays):
    for a in arrays:
        a.setflags(write=False)


def make_tap(delay: int, gain, aod, aoa, max_dfo_hz: float) -> Tap:
    gain = np.asarray(gain, dtype=complex)
    aod = np.asarray(aod, dtype=float)
    aoa = np.asarray(aoa, dtype=float)
    dfo = max_dfo_hz * np.cos(aod)
    _freeze(gain, aod, aoa, dfo)
    return Tap(delay=int(delay), gain=gain, aod=aod, aoa=aoa, dfo_hz=dfo)


def draw_realization(cfg: SystemConfig,
                     rng: np.random.Generator) -> ChannelRealization:
    """Draw one frame's channel: equal-magnitude paths, uniform angles.

    Path magnitudes are deterministic, |gain| = sqrt(p_l / N_p) with the
    per-tap powers p_l summing to one, so the total mean channel power is
    exactly 1; randomness enters through the phases and angles.
    """
    if cfg.n_taps * cfg.paths_per_tap < 1:
        raise ValueError("need at least one path")
    if max(cfg.tap_delays) > cfg.cp_len:
        raise ValueError("tap delay exceeds the cyclic prefix")
    powers = cfg.tap_power_profile()
    taps = []
    for delay, p in zip(cfg.tap_delays, powers):
        aod = rng.uniform(0.0, np.pi, cfg.paths_per_tap)
        aoa = rng.uniform(0.0, np.pi, cfg.paths_per_tap)
        phase = rng.uniform(0.0, 2.0 * np.pi, cfg.paths_per_tap)
        gain = np.sqrt(p / cfg.paths_per_tap) * np.exp(1j * phase)
        taps.append(make_tap(delay, gain, aod, aoa, cfg.max_dfo_hz))
    return ChannelRealization(taps=tuple(taps), max_dfo_hz=cfg.max_dfo_hz)


def single_path_realization(aod: float, aoa: float, gain: complex,
                            delay: int, max_dfo_hz: float) -> ChannelRealization:
    """Degenerate one-tap one-path channel, handy for controlled setups."""
    tap = make_tap(delay, [gain], [aod], [aoa], max_dfo_hz)
    return ChannelRealization(taps=(tap,), max_dfo_hz=max_dfo_hz)


def tap_gain(tap: Tap, n, tx_index: int, rx_index: int,
             tx_spec: ArraySpec, rx_spec: ArraySpec,
             sample_period_s: float) -> np.ndarray:
    """Complex tap amplitude g(l, n) for one antenna pair.

    n is the sample index (scalar or array); antenna indices are 0-based
    with element 0 the phase reference at both ends.
    """
    if not 0 <= tx_index < tx_spec.num_elements:
        raise ValueError("tx_index out of range")
    if not 0 <= rx_index < rx_spec.num_elements:
        raise ValueError("rx_index out of range")
    scalar = np.ndim(n) == 0
    n = np.atleast_1d(np.asarray(n, dtype=float))
    psi_t = 2.0 * np.pi * tx_index * tx_spec.d_over_lambda * np.cos(tap.aod)
    psi_r = 2.0 * np.pi * rx_index * rx_spec.d_over_lambda * np.cos(tap.aoa)
    rot = np.exp(1j * (2.0 * np.pi * tap.dfo_hz[:, None]
                       * n[None, :] * sample_period_s
                       + (psi_t + psi_r)[:, None]))
    out = np.sum(tap.gain[:, None] * rot, axis=0)
    return complex(out[0]) if scalar else out


def apply_channel(real: ChannelRealization, tx: np.ndarray, frame_offset: int,
                  tx_spec: ArraySpec, rx_spec: ArraySpec,
                  sample_period_s: float) -> np.ndarray:
    """Pass an M x T transmit sample matrix through the channel (noiseless).

    Column j of `tx` is emitted at channel time frame_offset + j, and
    y[n_r, n] = sum_{n_t, l} g_{n_r,n_t}(l, frame_offset + n - d_l)
                * tx[n_t, n - d_l],
    with tx treated as zero before the frame start. For a frame stream
    that begins with the first cyclic prefix, frame_offset = -cp_len.
    """
    tx = np.asarray(tx, dtype=complex)
    if tx.ndim != 2 or tx.shape[0] != tx_spec.num_elements:
        raise ValueError("tx must be an (num_elements, T) matrix")
    n_samples = tx.shape[1]
    if n_samples < real.max_delay:
        raise ValueError("frame shorter than the maximum tap delay")
    n_rx = rx_spec.num_elements
    times = frame_offset + np.arange(n_samples)
    y = np.zeros((n_rx, n_samples), dtype=complex)
    rx_elems = np.arange(n_rx)[:, None]
    for tap in real.taps:
        d = tap.delay
        tx_del = np.zeros_like(tx)
        tx_del[:, d:] = tx[:, :n_samples - d]
        # project the delayed transmit matrix onto each path's steering vector
        proj = steering_matrix(tx_spec, tap.aod).T @ tx_del        # (Np, T)
        ramp = np.exp(2j * np.pi * tap.dfo_hz[:, None]
                      * (times - d)[None, :] * sample_period_s)
        rho = tap.gain[None, :] * np.exp(
            2j * np.pi * rx_spec.d_over_lambda * rx_elems
            * np.cos(tap.aoa)[None, :])                            # (N, Np)
        y += rho @ (proj * ramp)
    return y
