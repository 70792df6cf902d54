import numpy as np
import pytest

from beamdoppler.array_geometry import (ArraySpec, BeamGrid, build_beam_grid,
                                        steering_vector)
from beamdoppler.channel_model import apply_channel, single_path_realization
from beamdoppler.config import SystemConfig, derive_rng
from beamdoppler.ofdm_phy import OfdmFrame, frame_stream, random_frame
from beamdoppler.tx_beam_network import (BeamNetwork, beam_responses,
                                         build_network, dfo_precompensate,
                                         transmit_frame)


def test_single_branch_eta():
    grid = BeamGrid(angles_rad=np.array([1.1]), spacing_rad=np.pi)
    net = build_network(grid, ArraySpec(64, 0.45), np.random.default_rng(0))
    assert net.eta == pytest.approx(1 / np.sqrt(64), rel=1e-14)


def test_eta_matches_direct_norm():
    grid = build_beam_grid(2.0)
    spec = ArraySpec(128, 0.45)
    net = build_network(grid, spec, derive_rng(42, "net"))
    total = sum(steering_vector(spec, b.direction_rad) * np.exp(1j * b.phase)
                for b in net.branches)
    assert net.eta == pytest.approx(1 / np.linalg.norm(total), rel=1e-12)
    assert net.eta > 0


def test_eta_finite_under_cancellation():
    # opposing phases cancel one component but never the whole norm
    grid = BeamGrid(angles_rad=np.array([0.9, 0.9]), spacing_rad=0.1)
    spec = ArraySpec(8, 0.45)
    for seed in range(5):
        net = build_network(grid, spec, np.random.default_rng(seed))
        assert np.isfinite(net.eta) and net.eta > 0


def test_precompensation_identity_cases():
    cfg = SystemConfig()
    x = np.exp(1j * np.linspace(0, 3, cfg.block_len))
    # broadside: cos(pi/2) is zero up to floating-point representation
    np.testing.assert_allclose(
        dfo_precompensate(x, np.pi / 2, cfg.max_dfo_hz, 2, cfg), x,
        rtol=0, atol=1e-12)
    np.testing.assert_array_equal(
        dfo_precompensate(x, 0.3, 0.0, 2, cfg), x)


def test_precompensation_scalar_oracle():
    cfg = SystemConfig()
    x = np.ones(cfg.block_len, dtype=complex)
    out = dfo_precompensate(x, 0.0, cfg.max_dfo_hz, 0, cfg)
    j = 20
    n = j - cfg.cp_len
    want = np.exp(-2j * np.pi * cfg.max_dfo_hz * n * cfg.sample_period_s)
    assert out[j] == pytest.approx(want, rel=1e-13)


def test_transmit_single_branch_is_rank_one():
    cfg = SystemConfig(tx_antennas=16)
    grid = BeamGrid(angles_rad=np.array([np.pi / 2]), spacing_rad=np.pi)
    net = build_network(grid, ArraySpec(16, 0.45), derive_rng(0, "tx"))
    frame = random_frame(cfg, derive_rng(1, "frame"))
    tx = transmit_frame(frame, net, cfg)
    # broadside direction: zero Doppler correction, every antenna a scalar
    # multiple of the stream
    stream = frame_stream(frame, cfg)
    w = np.conj(net.branches[0].weight)
    np.testing.assert_allclose(tx, np.outer(w, stream), atol=1e-14)
    assert np.linalg.matrix_rank(tx) == 1


def test_transmit_zero_frame():
    cfg = SystemConfig(tx_antennas=8)
    net = build_network(build_beam_grid(30.0), ArraySpec(8, 0.45),
                        derive_rng(2, "tx"))
    frame = OfdmFrame(symbols=np.zeros((5, 128), complex),
                      data_indices=np.zeros((4, 128), int))
    np.testing.assert_array_equal(transmit_frame(frame, net, cfg), 0)


def test_transmit_power_constraint_static():
    # with zero Doppler the superposed branches carry exactly the stream power
    cfg = SystemConfig(tx_antennas=32, max_dfo_hz=0.0)
    net = build_network(build_beam_grid(6.0), ArraySpec(32, 0.45),
                        derive_rng(3, "tx"))
    frame = random_frame(cfg, derive_rng(4, "frame"))
    tx = transmit_frame(frame, net, cfg)
    stream = frame_stream(frame, cfg)
    np.testing.assert_allclose(np.sum(np.abs(tx) ** 2, axis=0),
                               np.abs(stream) ** 2, rtol=1e-10)


def test_branch_linearity_through_channel():
    # per-branch transmission through the channel sums to the superposition
    cfg = SystemConfig(tx_antennas=32, n_taps=2, tap_delays=(0, 4),
                       paths_per_tap=6)
    spec = ArraySpec(32, cfg.d_over_lambda)
    rx = ArraySpec(cfg.rx_antennas, cfg.rx_d_over_lambda)
    net = build_network(build_beam_grid(12.0), spec, derive_rng(5, "tx"))
    frame = random_frame(cfg, derive_rng(6, "frame"))
    from beamdoppler.channel_model import draw_realization
    real = draw_realization(cfg, derive_rng(7, "ch"))

    full = apply_channel(real, transmit_frame(frame, net, cfg), -cfg.cp_len,
                         spec, rx, cfg.sample_period_s)
    parts = np.zeros_like(full)
    for b in net.branches:
        single = BeamNetwork(branches=(b,), eta=net.eta, spec=spec)
        parts += apply_channel(real, transmit_frame(frame, single, cfg),
                               -cfg.cp_len, spec, rx, cfg.sample_period_s)
    np.testing.assert_allclose(parts, full,
                               atol=1e-10 * np.max(np.abs(full)))


def test_on_grid_cancellation_direct_route():
    # a path exactly on its branch direction yields a time-invariant product
    cfg = SystemConfig(tx_antennas=64, n_taps=1, tap_delays=(0,),
                       paths_per_tap=1)
    theta = float(build_beam_grid(2.0).angles_rad[40])
    grid = BeamGrid(angles_rad=np.array([theta]), spacing_rad=0.1)
    spec = ArraySpec(64, cfg.d_over_lambda)
    net = build_network(grid, spec, derive_rng(8, "tx"))
    frame = random_frame(cfg, derive_rng(9, "frame"))
    real = single_path_realization(theta, 0.7, 1.0, 0, cfg.max_dfo_hz)
    y = apply_channel(real, transmit_frame(frame, net, cfg), -cfg.cp_len,
                      spec, ArraySpec(4, 0.45), cfg.sample_period_s)
    ratio = y[0] / frame_stream(frame, cfg)
    drift = np.max(np.abs(np.angle(ratio / ratio[0])))
    assert drift < 1e-9


def test_off_grid_suppression():
    m, r = 128, 0.45
    spec = ArraySpec(m, r)
    grid = build_beam_grid(2.0)
    net = build_network(grid, spec, derive_rng(10, "tx"))
    d_side = 1.0 / (m * np.sin(3 * np.pi / (2 * m)))
    rng = np.random.default_rng(0)
    i = 40
    theta_i = net.directions[i]
    null = 1.0 / (m * r)
    for theta in rng.uniform(0, np.pi, 400):
        if abs(np.cos(theta) - np.cos(theta_i)) < null:
            continue   # inside the mainlobe, no suppression claim there
        b = beam_responses(net, [theta])[i, 0]
        assert abs(b) <= m * net.eta * d_side * (1 + 1e-12)


def test_beam_responses_match_inner_products():
    spec = ArraySpec(48, 0.37)
    grid = build_beam_grid(15.0)
    net = build_network(grid, spec, derive_rng(11, "tx"))
    aods = np.array([0.3, 1.2, 2.8])
    got = beam_responses(net, aods)
    for i, b in enumerate(net.branches):
        for p, aod in enumerate(aods):
            want = np.vdot(b.weight, steering_vector(spec, aod))
            assert abs(got[i, p] - want) < 1e-12


def test_build_network_rejects_empty_grid():
    grid = BeamGrid(angles_rad=np.array([]), spacing_rad=1.0)
    with pytest.raises(ValueError):
        build_network(grid, ArraySpec(4, 0.45), np.random.default_rng(0))
