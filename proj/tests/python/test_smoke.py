import json
import math

import numpy as np
import pytest

import dpfbmc


def test_version():
    assert dpfbmc.__version__ == "0.1.0"


def test_filter_invariants():
    f = dpfbmc.design_filter("srrc", 4, 64)
    h = f.coeffs
    assert len(f) == 256 and h.shape == (256,)
    assert f.rolloff == pytest.approx(0.5)
    assert np.sum(h * h) == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(h, h[::-1], atol=1e-12)
    with pytest.raises(dpfbmc.UnsupportedDesign):
        dpfbmc.design_filter("phydyas", 16, 64)
    with pytest.raises(ValueError):
        dpfbmc.design_filter("srrc", 4, 64, rolloff=1.5)


def test_localization_table_center_and_symmetry():
    f = dpfbmc.design_filter("phydyas", 4, 64)
    q = dpfbmc.localization_table(f, 2, 3)
    assert q.shape == (5, 7)
    assert q[2, 3] == pytest.approx(1.0, abs=1e-9)
    # time neighbours are complex conjugates of each other
    assert q[2, 4] == pytest.approx(np.conj(q[2, 2]), abs=1e-12)


def test_modulator_loopback():
    rng = np.random.default_rng(3)
    a = rng.choice([-1.0, 1.0], size=(32, 10))
    f = dpfbmc.design_filter("phydyas", 4, 32)
    x = dpfbmc.fbmc_modulate(a, f)
    assert np.max(np.abs(x - dpfbmc.fbmc_modulate(a, f, fast=False))) < 1e-10
    r = dpfbmc.fbmc_demodulate(x, f)
    assert r.shape == a.shape
    assert np.max(np.abs(r.real - a)) < 2e-2
    d = dpfbmc.dp_loopback(a, dpfbmc.design_filter("srrc", 8, 32), "I")
    assert np.max(np.abs(d[:, 3:7].real - a[:, 3:7])) < 3e-2


def test_channels_and_closed_forms():
    assert "pedestrian_a" in dpfbmc.channel_profiles()
    assert dpfbmc.rms_delay_spread("pedestrian_a") == pytest.approx(46.0, rel=0.05)
    p = dpfbmc.theoretical_ber_qpsk(6.0)
    assert p == pytest.approx(0.5 * math.erfc(math.sqrt(10 ** 0.6)), rel=1e-12)
    assert dpfbmc.qpsk_ebn0_for_ber(p) == pytest.approx(6.0, abs=1e-6)


def test_config_round_trip_and_errors():
    cfg = dpfbmc.default_config("ber")
    assert cfg["num_subcarriers"] == 512
    fp = dpfbmc.config_fingerprint("ber", cfg)
    assert fp == dpfbmc.config_fingerprint("ber", json.dumps(cfg))
    assert fp != dpfbmc.config_fingerprint("ber", cfg, ["seed=2"])
    with pytest.raises(dpfbmc.ConfigError):
        dpfbmc.config_fingerprint("ber", {"no_such_key": 1})


def test_small_sweep_is_deterministic():
    overrides = ["num_subcarriers=64", "guard_left=4", "guard_right=3", "symbols_per_frame=8",
                 "systems=[\"cp_ofdm\",\"fbmc:phydyas:4\"]", "sweep.values=[0,10]", "frames=4",
                 "pilots=false", "equalizer=pck", "channel=awgn", "modulation=4"]
    rows, csv = dpfbmc.run_sweep("ber", overrides=overrides, workers=1)
    _, csv4 = dpfbmc.run_sweep("ber", overrides=overrides, workers=4)
    assert csv == csv4
    ber = [r for r in rows if r["metric"] == "ber" and r["system"] == "fbmc/phydyas4"]
    assert len(ber) == 2 and ber[1]["value"] <= ber[0]["value"]
    assert csv.startswith("# dpfbmc 0.1.0")


def test_table_report():
    assert "## Table 2: PHYDYAS K=4" in dpfbmc.table_report(512)
