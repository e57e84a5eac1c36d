import math

import numpy as np
import pytest

import quditsim as qs


def test_presets_listed():
    names = [p[0] for p in qs.list_presets()]
    assert names == ["fig2", "fig3ab", "fig3cd", "fig3ef", "fig3gh"]


def test_spin_system_levels():
    spec = qs.HardwareSpec()
    spec.Jx = spec.Jy = spec.Jz = 0.0
    sys = qs.SpinSystem(spec)
    assert sys.dim == 8
    mu_b, cm = 13.9962449, 29.9792458
    for k in range(sys.dim):
        lab = sys.label(k)
        e = spec.g1 * mu_b * spec.B * lab.m1 + spec.g2 * mu_b * spec.B * lab.m2 + spec.D * cm * lab.m1**2
        assert sys.energies[k] == pytest.approx(e, abs=1e-9)
    assert len(sys.transitions) == 10
    h = qs.hardware_hamiltonian(spec)
    assert np.allclose(h, h.conj().T)


def test_rabi_ground_state():
    e, psi = qs.exact_ground_state(qs.RabiSpec(G=0.0, d=4))
    assert e == pytest.approx(-0.25)
    assert abs(psi[1]) == pytest.approx(1.0)
    h = qs.rabi_hamiltonian(qs.RabiSpec(G=0.3, d=6))
    e03, _ = qs.exact_ground_state(qs.RabiSpec(G=0.3, d=6))
    assert e03 == pytest.approx(np.linalg.eigvalsh(h)[0], abs=1e-12)


def test_exact_dynamics_and_truncation():
    times = qs.default_time_grid()
    n, sz = qs.exact_dynamics(qs.RabiSpec(G=0.5, d=10), times)
    assert len(n) == len(times) == 20
    assert max(n) > 0.1
    assert all(-0.5 - 1e-12 <= s <= 0.5 + 1e-12 for s in sz)
    dev4, _ = qs.truncation_error(qs.RabiSpec(G=0.7, d=4))
    dev6, _ = qs.truncation_error(qs.RabiSpec(G=0.7, d=6))
    assert dev6 < dev4


def test_vqe_ideal():
    cfg = qs.preset_config("fig2", backend="ideal", t2_us=[math.inf])
    cfg["vqe"]["g_grid"] = [0.0, 0.3]
    cfg["vqe"]["random_restarts"] = 0
    pts = qs.run_vqe(cfg)
    assert [p["G"] for p in pts] == [0.0, 0.3]
    assert pts[0]["energy"] == pytest.approx(-0.25, abs=1e-6)
    for p in pts:
        assert p["energy"] >= p["exact_energy"] - 1e-9


def test_dqs_ideal_closure():
    cfg = qs.preset_config("fig3ab", backend="ideal", t2_us=["inf"])
    cfg["dqs"]["times"] = [1.0, 2.0]
    runs = qs.run_dqs(cfg)
    assert len(runs) == 1
    for p in runs[0]["points"]:
        assert p["fidelity"] == pytest.approx(1.0, abs=1e-9)


def test_run_experiment_writes_files(tmp_path):
    cfg = qs.preset_config("fig3ab", kind="spectrum", output_dir=str(tmp_path / "spec"))
    out = qs.run_experiment(cfg)
    assert out["summary"]["levels"] == 8
    assert (tmp_path / "spec" / "levels.csv").exists()


def test_errors_map_to_python_exceptions():
    with pytest.raises(qs.ConfigError, match="unknown preset"):
        qs.preset_config("nope")
    with pytest.raises(ValueError):
        qs.run_vqe({"kind": "vqe", "hardware": {"S1": "big"}})
    cfg = qs.preset_config("fig3ab", kind="gates-check")
    cfg["pulse"]["max_pulse_ns"] = 5.0
    with pytest.raises(qs.SchedulingError):
        qs.run_experiment(cfg)
