import numpy as np
import pytest

from beamdoppler.config import (SystemConfig, config_to_text, derive_rng,
                                parse_config_text)
from beamdoppler.experiment_cli import (main, run_psd, run_ser,
                                        run_spread_vs_fd, run_spread_vs_m)


def read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    return header, rows


def test_config_text_roundtrip():
    cfg = SystemConfig(tx_antennas=256, seed=99, tap_powers=(1, 1, 1, 1, 2, 2))
    assert parse_config_text(config_to_text(cfg)) == cfg


def test_config_unknown_key_rejected():
    with pytest.raises(ValueError, match="unknown config key"):
        parse_config_text("n_subcarriers = 128\nbogus = 3\n")


def test_config_comments_and_blanks():
    cfg = parse_config_text("# comment\n\ntx_antennas = 64  # trailing\n")
    assert cfg.tx_antennas == 64


def test_derive_rng_stability():
    a = derive_rng(5, "exp", 3).integers(0, 1 << 30, 4)
    b = derive_rng(5, "exp", 3).integers(0, 1 << 30, 4)
    c = derive_rng(5, "exp", 4).integers(0, 1 << 30, 4)
    np.testing.assert_array_equal(a, b)
    assert np.any(a != c)


def test_run_psd_outputs(tmp_path):
    cfg = SystemConfig()
    h1 = run_psd(cfg, tmp_path / "a")
    h2 = run_psd(cfg, tmp_path / "b")
    assert h1 == h2   # byte-identical CSVs for identical config
    header, rows = read_csv(tmp_path / "a" / "psd_equivalent.csv")
    assert header == ["omega_rad_s", "density", "dc_mass"]
    assert len(rows) == 16384
    om = np.array([float(r[0]) for r in rows])
    dens = np.array([float(r[1]) for r in rows])
    wd = 2 * np.pi * cfg.max_dfo_hz
    # equivalent-channel mass sits near zero frequency
    assert abs(om[np.argmax(dens)]) < 0.1 * wd
    assert np.max(dens[np.abs(om) > cfg.max_dfo_hz * 2 * np.pi]) > 0
    _, jrows = read_csv(tmp_path / "a" / "psd_jakes.csv")
    jdens = np.array([float(r[1]) for r in jrows])
    assert abs(abs(om[np.argmax(jdens)]) - wd) < 0.05 * wd
    assert (tmp_path / "a" / "psd_manifest.txt").exists()


def test_run_spread_vs_fd(tmp_path):
    cfg = SystemConfig()
    fds = [500.0, 1000.0]
    run_spread_vs_fd(cfg, fds, tmp_path, m_list=(128, 256))
    header, rows = read_csv(tmp_path / "spread_vs_fd.csv")
    assert header == ["m", "fd_Tb", "sigma_closed", "sigma_numeric",
                      "sigma_jakes"]
    by_m = {}
    for r in rows:
        by_m.setdefault(int(r[0]), []).append([float(x) for x in r[1:]])
    for m, pts in by_m.items():
        # closed-form spread is exactly linear in fd
        ratio = pts[1][1] / pts[0][1]
        assert ratio == pytest.approx(pts[1][0] / pts[0][0], rel=1e-8)
        for fd_tb, closed, numeric, jakes in pts:
            assert 0.85 <= numeric / closed <= 1.15
            assert closed < jakes
    # spread shrinks as the array grows
    assert by_m[256][0][1] < by_m[128][0][1]


def test_run_spread_vs_m(tmp_path, capsys):
    cfg = SystemConfig()
    run_spread_vs_m(cfg, [128, 256, 512], tmp_path)
    header, rows = read_csv(tmp_path / "spread_vs_m.csv")
    assert header == ["m", "sigma_closed", "sigma_asymptotic_fit"]
    sig = [float(r[1]) for r in rows]
    assert sig == sorted(sig, reverse=True)
    fit = [float(r[2]) for r in rows]
    for s, f in zip(sig, fit):
        assert abs(s - f) / s < 0.25
    assert "slope_hat" in capsys.readouterr().out
    manifest = (tmp_path / "spread_vs_m_manifest.txt").read_text()
    assert "slope_hat" in manifest and "kappa_hat" in manifest


def test_run_spread_vs_m_rejects_single_point(tmp_path):
    with pytest.raises(ValueError):
        run_spread_vs_m(SystemConfig(), [256], tmp_path)


def test_run_ser_csv(tmp_path):
    cfg = SystemConfig(tx_antennas=16)
    run_ser(cfg, [8.0], tmp_path, schemes=("proposed", "conventional_nodfo"),
            m_list=(16,), frames=2)
    header, rows = read_csv(tmp_path / "ser.csv")
    assert header == ["scheme", "m", "snr_db", "ser", "frames", "ci95"]
    assert {r[0] for r in rows} == {"proposed", "conventional_nodfo"}
    for r in rows:
        assert 0.0 <= float(r[3]) <= 1.0
        assert int(r[4]) == 2


def test_run_ser_rejects_unknown_scheme(tmp_path):
    with pytest.raises(ValueError):
        run_ser(SystemConfig(), [10.0], tmp_path, schemes=("wat",))


def test_cli_main_psd(tmp_path):
    rc = main(["psd", "--out", str(tmp_path / "o"), "--seed", "3"])
    assert rc == 0
    assert (tmp_path / "o" / "psd_equivalent.csv").exists()


def test_cli_main_config_file(tmp_path):
    cfg_path = tmp_path / "cfg.txt"
    cfg_path.write_text(config_to_text(SystemConfig(tx_antennas=256)))
    rc = main(["spread-vs-m", "--config", str(cfg_path),
               "--m-list", "128,256", "--out", str(tmp_path / "o")])
    assert rc == 0
    manifest = (tmp_path / "o" / "spread_vs_m_manifest.txt").read_text()
    assert "tx_antennas = 256" in manifest
