"""Smoke tests for the pybind bindings: construction, a few oracle values,
and one end-to-end orbit solve."""

import math

import pytest

floerlab = pytest.importorskip("floerlab")


def wave_spec():
    s = floerlab.ModelSpec()
    s.kind = floerlab.ModelKind.wave
    s.a = 1
    s.N = 1
    s.T = 2.0 * math.pi * 0.6180339887498949
    s.h = 6.0
    s.h_prime = 4.0
    s.k = 2
    return s


def test_lattice_and_theta():
    ms = floerlab.build_lattice(wave_spec(), 3)
    assert len(ms) == 7  # 1-d wave keeps the zero mode: {-3..3}
    thetas = sorted(ms.theta)
    assert thetas[0] == pytest.approx(1.0)
    assert thetas[-1] == pytest.approx(math.sqrt(10.0))


def test_small_divisor_oracles():
    T = 2.0 * math.pi
    assert floerlab.small_divisor(2.0, T) == pytest.approx(0.0, abs=1e-15)
    assert floerlab.small_divisor(2.25, T) == pytest.approx(0.25)
    assert floerlab.small_divisor(2.75, T) == pytest.approx(-0.25)
    # tie goes to +pi/T
    assert floerlab.small_divisor(2.5, T) == pytest.approx(0.5)


def test_admissibility_profile_dict():
    spec = wave_spec()
    rep = floerlab.admissibility_profile(spec, floerlab.build_lattice(spec, 16))
    assert rep["resonant"] is False
    assert rep["h0_floor"] >= 2.0


def test_decoupled_orbit_solve():
    ctx = floerlab.make_context(wave_spec(), 2, 4, floerlab.CouplingSpec.linear(0.0), 1.0)
    orbit = floerlab.newton_orbit(ctx, [0.0] * ctx.dim, 1e-10, 30, 2, 4.0)
    assert orbit.converged
    assert orbit.residual_norm < 1e-10


def test_verify_isometry_report():
    ctx = floerlab.make_context(wave_spec(), 2, 4, floerlab.CouplingSpec.linear(0.01), 1.0)
    rep = floerlab.verify_isometry(ctx, 2, 4.0, 25, 3)
    assert rep["pass"] is True
    assert all(c["value"] < 1e-12 for c in rep["cases"])
