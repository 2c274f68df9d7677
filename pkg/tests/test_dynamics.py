import numpy as np
import pytest

from eastwest.core import ChainGeometry, vacuum
from eastwest.dynamics import (
    EvolveConfig,
    LanczosPropagator,
    center_of_mass,
    dense_propagate,
    detect_revivals,
    evolve,
    oscillation_periods,
    site_zero_density,
    turning_points,
    unwrap_positions,
    window_contrast,
)
from eastwest.hamiltonians import build_hpx, build_hpx_g
from eastwest.leakage import momentum_leakage_small_tau
from eastwest.tb import TBRing, WavepacketParams, momentum_state, wavepacket

from conftest import random_state


def test_config_validation():
    with pytest.raises(ValueError):
        EvolveConfig(1.0, 0.1, tolerance=1e-2)
    with pytest.raises(ValueError):
        EvolveConfig(1.0, 0.0)
    assert np.allclose(EvolveConfig(1.0, 0.25).times, [0, 0.25, 0.5, 0.75, 1.0])


@pytest.mark.parametrize("which", ["vac", "pi_half"])
def test_zero_modes_static(which):
    L = 10
    H = build_hpx(ChainGeometry(L))
    psi = vacuum(L) if which == "vac" else momentum_state(TBRing(L), L // 2)
    traj = evolve(H, psi.astype(complex), EvolveConfig(5.0, 0.5))
    assert np.allclose(traj.fidelity, 1, atol=1e-12)
    assert np.allclose(traj.density, traj.density[0], atol=1e-12)
    assert np.allclose(traj.entropy, traj.entropy[0], atol=1e-10)


def test_oracle_equivalence_and_conservation(rng):
    for L in (6, 8, 10):
        H = build_hpx_g(ChainGeometry(L), rng.uniform(0, 5))
        psi0 = random_state(1 << L, rng)
        prop = LanczosPropagator(H, tol=1e-12)
        out = list(prop.propagate(psi0, [0.0, 2.5, 5.0]))
        ref = dense_propagate(H, psi0, [0.0, 2.5, 5.0])
        for a, b in zip(out, ref):
            assert np.linalg.norm(a - b) < 1e-8
        traj = evolve(H, psi0, EvolveConfig(5.0, 0.5, entropy=False))
        assert np.max(np.abs(traj.energy - traj.energy[0])) < 1e-8
        assert np.all(traj.fidelity <= 1 + 1e-10)
        assert np.allclose(traj.norm, 1, atol=1e-10)


def test_unnormalized_input_rejected():
    H = build_hpx(ChainGeometry(6))
    with pytest.raises(ValueError):
        evolve(H, 2 * vacuum(6), EvolveConfig(1.0, 0.1))


def test_small_time_leakage_law():
    L = 16
    ring = TBRing(L)
    psi = momentum_state(ring, L // 2 + 1)
    traj = evolve(build_hpx(ChainGeometry(L)), psi, EvolveConfig(1.0, 0.25, entropy=False))
    law = momentum_leakage_small_tau(L, 1, traj.times[1:])
    dev = np.abs(traj.leakage[1:] / law - 1)
    # leading-order law: within 20% for tau <= 0.5, then higher orders take over
    assert np.all(dev[:2] < 0.2)
    assert np.all(np.diff(dev) > 0)


def test_density_examples():
    L = 8
    ring = TBRing(L)
    assert not np.any(site_zero_density(vacuum(L)))
    d = site_zero_density(ring.a_state(3))
    assert d[2] == 1 and d.sum() == 1
    with pytest.raises(ValueError):
        site_zero_density(np.ones(10), 3)


def test_center_of_mass():
    prof = np.zeros(10)
    prof[6] = 1
    assert center_of_mass(prof) == pytest.approx(7)
    prof = np.zeros(10)
    prof[[0, 9]] = 1  # sites 1 and 10 straddle the wrap
    assert center_of_mass(prof) in (pytest.approx(10.5), pytest.approx(0.5))
    prof = np.zeros(10)
    prof[[2, 4]] = 1
    assert center_of_mass(prof, periodic=False) == pytest.approx(4)
    with pytest.raises(ValueError):
        center_of_mass(np.ones(8))
    assert np.allclose(unwrap_positions(np.array([9.5, 0.5, 1.5]), 10), [9.5, 10.5, 11.5])


def test_wavepacket_zero_density_sum():
    L = 16
    v = wavepacket(TBRing(L), WavepacketParams(9, 4, -np.pi / 2))
    assert site_zero_density(v).sum() == pytest.approx(1.5, abs=0.05)


def test_revival_detection():
    t = np.linspace(0, 30, 3001)
    T = 7.0
    F = np.cos(np.pi * t / T) ** 2
    peaks = detect_revivals(F, t)
    assert len(peaks) == 4
    for j, (tp, fp) in enumerate(peaks, start=1):
        assert abs(tp - j * T) <= t[1] - t[0]
        assert fp == pytest.approx(1, abs=1e-6)
    assert detect_revivals(np.ones(50)) == []


def test_turning_points_and_periods():
    t = np.linspace(0, 40, 801)
    x = 3 * np.sin(2 * np.pi * t / 10)
    pts = turning_points(x, t)
    assert [p[2] for p in pts[:2]] == ["max", "min"]
    periods = oscillation_periods(x, t)
    assert np.allclose(periods, 10, atol=0.01)
    assert np.allclose(window_contrast(x, t, 10.0), 6, atol=0.01)


def test_stabilization_property():
    L = 16
    ring = TBRing(L)
    psi = momentum_state(ring, L // 2 + 3)
    cfg = EvolveConfig(10.0, 10.0, entropy=False)
    F = {g: evolve(build_hpx_g(ChainGeometry(L), g), psi, cfg).fidelity[-1] for g in (0.0, 10.0)}
    assert F[10.0] > F[0.0] + 0.2


def test_store_states_and_columns():
    L = 6
    psi = momentum_state(TBRing(L), 1)
    traj = evolve(build_hpx(ChainGeometry(L)), psi, EvolveConfig(1.0, 0.5, store_states=True))
    assert len(traj.states) == 3
    cols = traj.as_columns()
    assert list(cols)[:4] == ["t", "F", "p", "S"] and "P_6" in cols and "xbar" in cols
