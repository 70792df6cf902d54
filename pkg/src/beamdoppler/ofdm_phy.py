"""OFDM modulation, Gray-coded QAM mapping, and the frame structure.

A frame holds `n_blocks` OFDM blocks of `n_subcarriers` symbols each; the
first block is a known constant-amplitude training block, the rest carry
data. Time-domain blocks are cyclic-prefixed IDFT outputs with unit
average energy per symbol.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SystemConfig

# Per-axis Gray-coded PAM levels, index = 2-bit Gray word value.
_GRAY_LEVELS = {
    1: np.array([-1.0, 1.0]),
    2: np.array([-3.0, -1.0, 3.0, 1.0]),
    3: np.array([-7.0, -5.0, -1.0, -3.0, 7.0, 5.0, 1.0, 3.0]),
}

_TRAINING_SEED = 0x0F0D  # fixed: the training block is known to the receiver


def constellation(order: int) -> np.ndarray:
    """Unit-average-energy Gray-coded QAM constellation, index = bit word."""
    if order == 4:
        bits_per_axis = 1
    elif order == 16:
        bits_per_axis = 2
    elif order == 64:
        bits_per_axis = 3
    else:
        raise ValueError("modulation order must be 4, 16 or 64")
    lv = _GRAY_LEVELS[bits_per_axis]
    pts = lv[:, None] + 1j * lv[None, :]
    pts = pts.ravel()  # index = (I bits << bits_per_axis) | Q bits
    return pts / np.sqrt(np.mean(np.abs(pts) ** 2))


def qam_map(bits, order: int = 16) -> np.ndarray:
    """Map a bit array (values 0/1) to constellation symbols."""
    bits = np.asarray(bits, dtype=int).ravel()
    k = int(np.log2(order))
    if len(bits) % k:
        raise ValueError(f"bit count must be divisible by {k}")
    words = bits.reshape(-1, k)
    idx = words @ (1 << np.arange(k - 1, -1, -1))
    return constellation(order)[idx]


def nearest_symbol_indices(symbols, order: int = 16) -> np.ndarray:
    """Nearest-neighbor decision; non-finite inputs decide to index -1."""
    symbols = np.asarray(symbols)
    pts = constellation(order)
    d = np.abs(symbols[..., None] - pts)
    idx = np.argmin(d, axis=-1)
    return np.where(np.isfinite(symbols), idx, -1)


def qam_demap(symbols, order: int = 16) -> np.ndarray:
    """Nearest-neighbor demap back to bits; inverse of qam_map on the grid."""
    idx = np.atleast_1d(nearest_symbol_indices(symbols, order))
    if np.any(idx < 0):
        raise ValueError("cannot demap non-finite symbols")
    k = int(np.log2(order))
    shifts = np.arange(k - 1, -1, -1)
    bits = (idx[..., None] >> shifts) & 1
    return bits.reshape(*idx.shape[:-1], idx.shape[-1] * k)


def ofdm_modulate(block, cfg: SystemConfig) -> np.ndarray:
    """Frequency-domain block(s) to cyclic-prefixed time samples.

    s(n) = (1/sqrt(Nc)) * sum_k x_k exp(j*2*pi*k*n/Nc) for n in
    [-Ncp, Nc), returned as Ns = Ncp + Nc samples. Works on any leading
    batch dimensions; the last axis must have length n_subcarriers.
    """
    block = np.asarray(block, dtype=complex)
    if block.shape[-1] != cfg.n_subcarriers:
        raise ValueError("block length must equal n_subcarriers")
    body = np.fft.ifft(block, axis=-1) * np.sqrt(cfg.n_subcarriers)
    return np.concatenate([body[..., -cfg.cp_len:], body], axis=-1) \
        if cfg.cp_len else body


def ofdm_demodulate(samples, cfg: SystemConfig) -> np.ndarray:
    """Drop the cyclic prefix and apply the forward transform."""
    samples = np.asarray(samples, dtype=complex)
    if samples.shape[-1] != cfg.block_len:
        raise ValueError("sample count must equal the CP-prefixed block length")
    body = samples[..., cfg.cp_len:]
    return np.fft.fft(body, axis=-1) / np.sqrt(cfg.n_subcarriers)


def training_symbols(n_subcarriers: int) -> np.ndarray:
    """Known constant-amplitude QPSK training block (same every frame)."""
    rng = np.random.default_rng(_TRAINING_SEED)
    quadrant = rng.integers(0, 4, n_subcarriers)
    return np.exp(1j * (np.pi / 4 + quadrant * np.pi / 2))


@dataclass(frozen=True)
class OfdmFrame:
    """Frequency-domain frame; block 0 is the training block."""

    symbols: np.ndarray          # (n_blocks, n_subcarriers)
    data_indices: np.ndarray     # (n_blocks - 1, n_subcarriers) constellation indices

    @property
    def training(self) -> np.ndarray:
        return self.symbols[0]

    @property
    def data(self) -> np.ndarray:
        return self.symbols[1:]


def random_frame(cfg: SystemConfig, rng: np.random.Generator) -> OfdmFrame:
    """Training block plus uniformly random data symbols."""
    pts = constellation(cfg.modulation_order)
    idx = rng.integers(0, cfg.modulation_order,
                       (cfg.n_blocks - 1, cfg.n_subcarriers))
    symbols = np.vstack([training_symbols(cfg.n_subcarriers)[None, :], pts[idx]])
    symbols.setflags(write=False)
    idx.setflags(write=False)
    return OfdmFrame(symbols=symbols, data_indices=idx)


def frame_stream(frame: OfdmFrame, cfg: SystemConfig) -> np.ndarray:
    """Concatenated CP-prefixed time samples of all blocks, length frame_len.

    Stream position j corresponds to block m = j // Ns, within-block sample
    n = (j % Ns) - Ncp, i.e. absolute sample time m*Ns + n = j - Ncp.
    """
    return ofdm_modulate(frame.symbols, cfg).ravel()
