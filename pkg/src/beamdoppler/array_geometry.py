"""Uniform linear array geometry: steering vectors, gain pattern, beam grid.

The array lies along the motion axis, so a path at angle theta from that
axis sees the per-element phase progression 2*pi*(d/lambda)*cos(theta).
Element spacing is restricted to d < lambda/2, which keeps a single main
beam in the visible region.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ArraySpec:
    """ULA with `num_elements` antennas spaced `d_over_lambda` wavelengths."""

    num_elements: int
    d_over_lambda: float

    def __post_init__(self):
        if self.num_elements < 2:
            raise ValueError("num_elements must be at least 2")
        if not 0.0 < self.d_over_lambda < 0.5:
            raise ValueError("d_over_lambda must lie in (0, 0.5)")


@dataclass(frozen=True)
class BeamGrid:
    """Fixed offline beam directions, strictly inside (0, pi)."""

    angles_rad: np.ndarray
    spacing_rad: float

    @property
    def count(self) -> int:
        return len(self.angles_rad)


def _check_angle(theta: float) -> float:
    theta = float(theta)
    if not 0.0 <= theta <= np.pi:
        raise ValueError(f"angle {theta} outside [0, pi]")
    return theta


def steering_vector(spec: ArraySpec, theta: float) -> np.ndarray:
    """Array phase signature for a plane wave at angle `theta`.

    Element n (0-based, element 0 is the phase reference) carries the
    unit-modulus phasor exp(j*2*pi*n*(d/lambda)*cos(theta)), so the
    Euclidean norm is sqrt(num_elements).
    """
    theta = _check_angle(theta)
    n = np.arange(spec.num_elements)
    return np.exp(2j * np.pi * spec.d_over_lambda * np.cos(theta) * n)


def steering_matrix(spec: ArraySpec, thetas) -> np.ndarray:
    """Steering vectors for many angles at once, shape (M, len(thetas))."""
    thetas = np.asarray(thetas, dtype=float)
    if np.any(thetas < 0) or np.any(thetas > np.pi):
        raise ValueError("angles outside [0, pi]")
    n = np.arange(spec.num_elements)[:, None]
    return np.exp(2j * np.pi * spec.d_over_lambda * np.cos(thetas)[None, :] * n)


def gain_pattern(spec: ArraySpec, y) -> np.ndarray:
    """Normalized array factor sin(pi*M*r*y) / (M*sin(pi*r*y)).

    `y` is the difference cos(theta_tilde) - cos(theta). The removable
    singularity at y = 0 evaluates to 1. Signed (not magnitude), vectorized.
    """
    m, r = spec.num_elements, spec.d_over_lambda
    y = np.asarray(y, dtype=float)
    den = m * np.sin(np.pi * r * y)
    num = np.sin(np.pi * m * r * y)
    # |y| below 1e-12 is treated as the y -> 0 limit
    small = np.abs(y) < 1e-12
    safe = np.where(small, 1.0, den)
    out = np.where(small, 1.0, num / safe)
    return out if out.ndim else float(out)


def antenna_gain(spec: ArraySpec, theta: float, theta_tilde: float) -> float:
    """Gain toward `theta_tilde` when matched-filter beamforming to `theta`.

    Equals (1/M) * a(theta)^H a(theta_tilde) up to a unit-modulus phase
    factor; returns the real signed ratio, 1.0 at theta_tilde == theta.
    """
    theta = _check_angle(theta)
    theta_tilde = _check_angle(theta_tilde)
    return float(gain_pattern(spec, np.cos(theta_tilde) - np.cos(theta)))


def build_beam_grid(spacing_deg: float) -> BeamGrid:
    """Uniform beam grid of Q = 180/spacing directions centered in their bins.

    Angles are (i + 1/2) * spacing for i = 0..Q-1, which keeps every
    direction strictly inside (0, pi) and away from the degenerate endfire
    beams. The spacing must divide 180 degrees evenly.
    """
    if spacing_deg <= 0:
        raise ValueError("spacing must be positive")
    q = 180.0 / spacing_deg
    if abs(q - round(q)) > 1e-9:
        raise ValueError("spacing must divide 180 degrees evenly")
    q = int(round(q))
    angles = (np.arange(q) + 0.5) * np.deg2rad(spacing_deg)
    angles.setflags(write=False)
    return BeamGrid(angles_rad=angles, spacing_rad=float(np.deg2rad(spacing_deg)))
