import json
import math

import numpy as np
import pytest

import potflow


def test_full_euler_normal_shock():
    s = potflow.stationary_shock("full_euler", 2.0)
    g = 1.4
    exact = math.sqrt((1 + 0.5 * (g - 1) * 4) / (g * 4 - 0.5 * (g - 1)))
    assert s["mach_down"] == pytest.approx(exact, rel=1e-10)
    assert abs(s["production"]) < 1e-10
    assert s["physical_production"] > 0


def test_shock_curves_decrease_and_merge():
    curves = [potflow.shock_curve(m, 1.01, 5.0, 50)[1] for m in ("potential", "isentropic", "full_euler")]
    for c in curves:
        assert np.all(np.diff(c) < 0)
    weak = [c[0] for c in curves]
    assert max(weak) - min(weak) < 1e-3


def test_classification():
    assert potflow.classify_entropy("potential", candidate="energy")["accepted"]
    r = potflow.classify_entropy("isentropic", coeffs=[0.5, -1.0, 2.0, 0.25, 3.0])
    assert r["accepted"]
    assert np.allclose(r["coefficients"], [0.5, -1.0, 2.0, 0.25, 3.0], atol=1e-6)
    assert not potflow.classify_entropy("potential", candidate="sin-v")["accepted"]
    with pytest.raises(ValueError):
        potflow.classify_entropy("potential")


def test_hessian_sign_change_at_sound_speed():
    c = math.sqrt(1.4)
    assert potflow.entropy_hessian("potential", 1.0, [0.9 * c, 0.0])["positive_definite"]
    assert not potflow.entropy_hessian("potential", 1.0, [1.1 * c, 0.0])["positive_definite"]
    h = potflow.entropy_hessian("potential", 1.0, [0.3, 0.4])
    assert h["determinant"] == pytest.approx(1.4 - 0.25, rel=1e-10)
    assert h["hessian"].shape == (3, 3)


def test_simulate_conserves_mass():
    snaps = potflow.simulate("isentropic", ic="acoustic", n=128, tend=0.1, outputs=[0.05])
    assert [t for t, _ in snaps] == [0.0, 0.05, 0.1]
    mass = [u[:, 0].sum() for _, u in snaps]
    assert mass[-1] == pytest.approx(mass[0], rel=1e-12)
    two_d = potflow.simulate("potential", ic="curl-free", n=16, dims=2, tend=0.01)
    assert two_d[-1][1].shape == (16, 16, 3)


def test_vacuum_raises():
    with pytest.raises(ValueError):
        potflow.simulate("isentropic", n=16, rho0=-1.0)


def test_cone_and_sweep_small():
    cone = potflow.cone_test(n=512, tend=0.2, outputs=10)
    assert 0.5 <= cone["fitted_speed"] / cone["wavespeed_bound"] <= 1.2
    sweep = potflow.viscous_sweep(n=128, eps=[0.04, 0.02], tend=0.3, refine=2, outputs=3)
    assert sweep["decreasing"] and sweep["gronwall_ok"]


def test_cli_passthrough():
    code, out, err = potflow.run_cli(["entropy-check", "--model", "potential", "--candidate", "energy"])
    assert code == 0 and json.loads(out)["pass"] is True
    code, _, err = potflow.run_cli(["simulate", "--model", "nope"])
    assert code == 1 and err
