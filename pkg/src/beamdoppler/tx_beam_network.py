"""Transmit-side beamforming network with per-branch Doppler pre-rotation.

Q parallel branches share the same OFDM stream. Branch i derotates the
stream by the Doppler shift f_d*cos(theta_i) its beam direction will pick
up, then matched-filter beamforms toward theta_i; the branch outputs
superpose on the M antennas. Branch phases are redrawn every frame, which
makes the equivalent-channel ensemble stationary, and the normalizer eta
keeps the superposed transmit power equal to the input symbol power.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .array_geometry import ArraySpec, BeamGrid, gain_pattern, steering_matrix
from .config import SystemConfig
from .ofdm_phy import OfdmFrame, ofdm_modulate


@dataclass(frozen=True)
class BeamBranch:
    """One beamforming direction with its per-frame random phase."""

    direction_rad: float
    phase: float
    weight: np.ndarray   # (M,) = eta * a(direction) * exp(j*phase)


@dataclass(frozen=True)
class BeamNetwork:
    branches: tuple
    eta: float
    spec: ArraySpec

    @property
    def count(self) -> int:
        return len(self.branches)

    @property
    def directions(self) -> np.ndarray:
        return np.array([b.direction_rad for b in self.branches])

    @property
    def phases(self) -> np.ndarray:
        return np.array([b.phase for b in self.branches])


def build_network(grid: BeamGrid, spec: ArraySpec,
                  rng: np.random.Generator) -> BeamNetwork:
    """Draw branch phases and normalize the superposed weight power.

    eta = 1 / || sum_i a(theta_i) exp(j*phi_i) ||, recomputed per call
    because it depends on the drawn phases.
    """
    if grid.count < 1:
        raise ValueError("beam grid is empty")
    phases = rng.uniform(0.0, 2.0 * np.pi, grid.count)
    a = steering_matrix(spec, grid.angles_rad)          # (M, Q)
    eta = 1.0 / np.linalg.norm(a @ np.exp(1j * phases))
    branches = []
    for i in range(grid.count):
        w = eta * a[:, i] * np.exp(1j * phases[i])
        w.setflags(write=False)
        branches.append(BeamBranch(direction_rad=float(grid.angles_rad[i]),
                                   phase=float(phases[i]), weight=w))
    return BeamNetwork(branches=tuple(branches), eta=float(eta), spec=spec)


def dfo_precompensate(samples, theta_i: float, f_d: float, block_index: int,
                      cfg: SystemConfig) -> np.ndarray:
    """Derotate one CP-prefixed block by the branch's dominant Doppler shift.

    Sample j of the block corresponds to within-block time n = j - cp_len,
    and is multiplied by exp(-j*2*pi*f_d*cos(theta_i)*(m*Ns + n)*Ts).
    """
    samples = np.asarray(samples, dtype=complex)
    n = np.arange(samples.shape[-1]) - cfg.cp_len
    t = (block_index * cfg.block_len + n) * cfg.sample_period_s
    return samples * np.exp(-2j * np.pi * f_d * np.cos(theta_i) * t)


def transmit_frame(frame: OfdmFrame, net: BeamNetwork,
                   cfg: SystemConfig) -> np.ndarray:
    """Superpose all branch outputs; returns the M x frame_len sample matrix.

    Each branch contributes conj(w_i) * s_hat_i where s_hat_i is the
    pre-rotated stream, summed in fixed branch order for reproducibility.
    """
    if net.spec.num_elements != cfg.tx_antennas:
        raise ValueError("network was built for a different array size")
    blocks = ofdm_modulate(frame.symbols, cfg)          # (Nb, Ns)
    out = np.zeros((cfg.tx_antennas, cfg.frame_len), dtype=complex)
    for branch in net.branches:
        shifted = np.concatenate([
            dfo_precompensate(blocks[m], branch.direction_rad,
                              cfg.max_dfo_hz, m, cfg)
            for m in range(cfg.n_blocks)
        ])
        out += np.conj(branch.weight)[:, None] * shifted[None, :]
    return out


def beam_responses(net: BeamNetwork, aods) -> np.ndarray:
    """Scalar branch responses b[i, p] = w(theta_i)^H a(aod_p).

    Uses the closed-form array factor instead of the M-term inner product:
    w^H a = eta * exp(-j*phi_i) * M * G(theta_i, aod) *
    exp(j*pi*(M-1)*(d/lambda)*(cos(aod) - cos(theta_i))).
    """
    aods = np.asarray(aods, dtype=float).ravel()
    m, r = net.spec.num_elements, net.spec.d_over_lambda
    y = np.cos(aods)[None, :] - np.cos(net.directions)[:, None]
    g = gain_pattern(net.spec, y)
    phase = np.exp(1j * np.pi * (m - 1) * r * y)
    return (net.eta * m) * np.exp(-1j * net.phases)[:, None] * g * phase
