"""System configuration and reproducible seeding.

The default values mirror the reference simulation setup: 128 subcarriers,
5 OFDM blocks per frame (first block is training), 0.1 ms block duration,
0.1 m carrier wavelength, 1 kHz maximum Doppler shift (360 km/h), a 128 to
1024 element transmit ULA with 0.45 wavelength spacing, a 4 element receive
ULA, a 2 degree beam grid, and a 6 tap channel with 64 paths per tap.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, fields, replace

import numpy as np

DEFAULT_SEED = 12345


@dataclass(frozen=True)
class SystemConfig:
    """All physical and OFDM parameters of the simulated uplink."""

    n_subcarriers: int = 128
    cp_len: int = 16
    n_blocks: int = 5
    sample_period_s: float = 1e-4 / 144.0
    wavelength_m: float = 0.1
    max_dfo_hz: float = 1000.0
    tx_antennas: int = 128
    rx_antennas: int = 4
    d_over_lambda: float = 0.45
    rx_d_over_lambda: float = 0.45
    beam_spacing_deg: float = 2.0
    modulation_order: int = 16
    n_taps: int = 6
    paths_per_tap: int = 64
    tap_delays: tuple = (0, 3, 6, 9, 12, 16)
    tap_powers: tuple = ()   # empty means uniform
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.n_subcarriers < 2 or self.cp_len < 0 or self.n_blocks < 1:
            raise ValueError("invalid OFDM geometry")
        if self.tx_antennas < 2:
            raise ValueError("tx_antennas must be at least 2")
        if not 0.0 < self.d_over_lambda < 0.5:
            raise ValueError("d_over_lambda must lie in (0, 0.5)")
        if not 0.0 < self.rx_d_over_lambda < 0.5:
            raise ValueError("rx_d_over_lambda must lie in (0, 0.5)")
        if self.modulation_order not in (4, 16, 64):
            raise ValueError("modulation_order must be 4, 16 or 64")
        delays = tuple(int(d) for d in self.tap_delays)
        if len(delays) != self.n_taps:
            raise ValueError("tap_delays length must equal n_taps")
        if len(set(delays)) != len(delays):
            raise ValueError("tap delays must be distinct")
        if delays[0] != 0:
            raise ValueError("first tap delay must be zero")
        if max(delays) > self.cp_len:
            raise ValueError("maximum tap delay exceeds the cyclic prefix")
        if self.tap_powers:
            if len(self.tap_powers) != self.n_taps:
                raise ValueError("tap_powers length must equal n_taps")
            if min(self.tap_powers) <= 0:
                raise ValueError("tap powers must be positive")
        object.__setattr__(self, "tap_delays", delays)

    @property
    def block_len(self) -> int:
        """Samples per OFDM block including the cyclic prefix."""
        return self.n_subcarriers + self.cp_len

    @property
    def block_duration_s(self) -> float:
        return self.block_len * self.sample_period_s

    @property
    def frame_len(self) -> int:
        return self.n_blocks * self.block_len

    @property
    def normalized_max_dfo(self) -> float:
        """Maximum Doppler shift times the block duration."""
        return self.max_dfo_hz * self.block_duration_s

    @property
    def omega_d(self) -> float:
        return 2.0 * np.pi * self.max_dfo_hz

    def tap_power_profile(self) -> np.ndarray:
        """Per-tap powers, normalized to sum to one."""
        if self.tap_powers:
            p = np.asarray(self.tap_powers, dtype=float)
        else:
            p = np.ones(self.n_taps)
        return p / p.sum()

    def with_updates(self, **kwargs) -> "SystemConfig":
        return replace(self, **kwargs)


_INT_FIELDS = {"n_subcarriers", "cp_len", "n_blocks", "tx_antennas",
               "rx_antennas", "modulation_order", "n_taps", "paths_per_tap",
               "seed"}
_TUPLE_FIELDS = {"tap_delays": int, "tap_powers": float}


def config_to_text(cfg: SystemConfig) -> str:
    """Render a config as flat key=value lines (the on-disk format)."""
    lines = []
    for f in fields(SystemConfig):
        v = getattr(cfg, f.name)
        if f.name in _TUPLE_FIELDS:
            v = ",".join(repr(x) for x in v)
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"


def parse_config_text(text: str) -> SystemConfig:
    """Parse flat key=value text. Unknown keys are an error."""
    known = {f.name for f in fields(SystemConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in known:
            raise ValueError(f"line {lineno}: unknown config key {key!r}")
        if key in _TUPLE_FIELDS:
            conv = _TUPLE_FIELDS[key]
            values[key] = tuple(conv(x) for x in val.split(",") if x.strip()) \
                if val else ()
        elif key in _INT_FIELDS:
            values[key] = int(val)
        else:
            values[key] = float(val)
    return SystemConfig(**values)


def load_config(path) -> SystemConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def _label_int(label) -> int:
    if isinstance(label, (int, np.integer)):
        return int(label) & 0xFFFFFFFFFFFFFFFF
    digest = hashlib.sha256(str(label).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def derive_rng(seed: int, *labels) -> np.random.Generator:
    """Generator derived from (seed, labels) via a stable hash.

    The same (seed, labels) tuple yields the same stream on every platform,
    so trial counts can grow without invalidating earlier trials.
    """
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF] + [_label_int(l) for l in labels]
    return np.random.default_rng(np.random.SeedSequence(entropy))
