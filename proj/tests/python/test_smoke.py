import math

import numpy as np
import pytest

import fqcsim


def test_single_level_tracks_exponential_decay():
    h = fqcsim.build_single_level(fqcsim.FqcSpec(15, 0.3))
    assert h.dim == 32
    times = fqcsim.uniform_grid(10.0, 2001)
    s = fqcsim.propagate(h, "e", times)
    assert fqcsim.d1(s, 1.0, 10.0) <= 0.01
    assert s.rho.shape == (2001, 1, 1)


def test_revival_at_two_pi_over_gap():
    spec = fqcsim.FqcSpec(30, fqcsim.coupling_for_gap(1.0))
    h = fqcsim.build_single_level(spec)
    s = fqcsim.propagate(h, "e", fqcsim.uniform_grid(9.0, 1801))
    r = fqcsim.revival_time(s)
    assert r["found"]
    assert abs(r["parameters"]["T_r"] - 2 * math.pi) < 0.01


def test_two_level_unitarity_and_projection():
    h = fqcsim.build_two_level(fqcsim.FqcSpec(10, 0.3), fqcsim.DriveSpec(1.0))
    s = fqcsim.propagate(h, np.array([1.0, 1.0j]) / math.sqrt(2), fqcsim.uniform_grid(5.0, 101))
    traces = np.trace(s.rho, axis1=1, axis2=2).real
    assert traces[0] == pytest.approx(1.0, abs=1e-12)
    assert np.all(traces <= 1.0 + 1e-12)
    assert traces[-1] < 0.5


def test_d2_against_reference():
    drive = fqcsim.DriveSpec(1.0)
    h = fqcsim.build_two_level(fqcsim.FqcSpec(30, 0.3), drive)
    times = fqcsim.uniform_grid(8.0, 2001)
    s = fqcsim.propagate(h, "e", times)
    ref = fqcsim.nonhermitian_reference(drive, np.array([0.0, 1.0]), times)
    assert fqcsim.d2(s, ref, 8.0) < 0.02
    assert fqcsim.d2(s, ref, 8.0, projected=True) <= fqcsim.d2(s, ref, 8.0)


def test_sideband_peak():
    spec = fqcsim.FqcSpec(22, 0.3)
    out = fqcsim.sideband_spectrum(spec, fqcsim.DriveSpec(10.0))
    assert out["n_max"] == 18
    assert len(out["k"]) == 45


def test_trace_distance_axioms():
    a = np.diag([0.7, 0.3]).astype(complex)
    b = np.diag([0.2, 0.8]).astype(complex)
    assert fqcsim.trace_distance(a, b) == pytest.approx(0.5)
    assert fqcsim.trace_distance(a, a) == 0.0


def test_invalid_parameters_raise_config_error():
    with pytest.raises(fqcsim.ConfigError):
        fqcsim.build_single_level(fqcsim.FqcSpec(-1, 0.3))
    with pytest.raises(ValueError):
        fqcsim.run("decay", {"N": 15, "bogus": 1})


def test_run_command_matches_defaults_and_is_deterministic():
    cfg = fqcsim.default_config("decay")
    assert cfg["N"] == 15
    summary, files = fqcsim.run("decay", {"grid_points": 501})
    again, files2 = fqcsim.run("decay", {"grid_points": 501})
    assert summary == again
    assert files == files2
    assert "timeseries.csv" in files
    assert summary["d1"] <= 0.01
