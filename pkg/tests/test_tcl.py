import numpy as np
import pytest
from numpy.testing import assert_allclose

from coolspec.bath import BathSpec, rate_a, shift_b
from coolspec.dynamics import heat_current_trace, propagate
from coolspec.generators import total_liouvillian, vectorize
from coolspec.system import SystemSpec, lower_ground_state
from coolspec.tcl import (
    MemoryKernelConfig,
    TclPropagator,
    bath_correlation,
    correlation_grid,
    tcl_generator,
    tcl_propagate,
)

BATH = BathSpec(alpha=0.01, omega_c=1.0, temperature=3.0)
SPEC = SystemSpec(e_man=2.0, delta=0.0, omega_rabi=1.0, gamma_rad=0.5)


def test_memory_config_validation():
    with pytest.raises(ValueError):
        MemoryKernelConfig(t_mem=0.0)
    with pytest.raises(ValueError):
        MemoryKernelConfig(dt=-0.1)
    with pytest.raises(ValueError):
        MemoryKernelConfig(quad_points=1)


def test_correlation_symmetry_and_decay():
    c0 = bath_correlation(0.0, BATH)
    assert c0.imag == pytest.approx(0.0, abs=1e-12)
    assert c0.real > 0.0
    for tau in (0.4, 1.7, 6.3):
        assert_allclose(bath_correlation(-tau, BATH),
                        np.conj(bath_correlation(tau, BATH)), atol=1e-12)
    # the correlation function is dead after a few tens of inverse cutoffs
    assert abs(bath_correlation(15.0, BATH)) < 1e-3 * abs(c0)
    assert abs(bath_correlation(30.0, BATH)) < 1e-5 * abs(c0)


def test_correlation_grid_matches_adaptive_quadrature():
    taus = np.array([0.0, 0.3, 2.7, 9.1, 14.0])
    grid = correlation_grid(taus, BATH)
    for k, tau in enumerate(taus):
        assert_allclose(grid[k], bath_correlation(tau, BATH), atol=1e-9)


def test_running_coefficients_saturate_to_markovian_rates():
    # the saturated half-Fourier transform of C must reproduce the
    # golden-rule rate (real part) and the principal-value shift (minus
    # the imaginary part); the coefficient stored at block (i, j) belongs
    # to the reversed transition frequency nu[j, i]
    cfg = MemoryKernelConfig(t_mem=30.0, dt=0.02, quad_points=2)
    prop = TclPropagator(SPEC, BATH, cfg)
    gam = prop.coefficients(cfg.t_mem)
    for i in range(3):
        for j in range(3):
            # the truncated tail of C leaves an O(1e-5) residue at t_mem=30
            nu = prop.eig.nu[j, i]
            assert_allclose(gam[i, j].real, rate_a(nu, BATH), atol=1e-5)
            assert_allclose(-gam[i, j].imag, shift_b(nu, BATH), atol=2e-5)
    # frozen past the memory horizon
    assert np.array_equal(prop.coefficients(cfg.t_mem + 5.0), gam)
    # and zero at the start
    assert np.abs(prop.coefficients(0.0)).max() == 0.0


def test_generator_converges_to_bloch_redfield():
    cfg = MemoryKernelConfig(t_mem=30.0, dt=0.02, quad_points=2)
    late = tcl_generator(60.0, SPEC, BATH, cfg)
    markov = total_liouvillian("bloch_redfield", SPEC, BATH, include_shifts=True)
    assert np.abs(late.matrix - markov.matrix).max() < 1e-4
    assert np.abs(late.heat_kernel - markov.heat_kernel).max() < 1e-4


def test_early_generator_has_no_dissipation():
    cfg = MemoryKernelConfig(t_mem=10.0, dt=0.02, quad_points=2)
    prop = TclPropagator(SPEC, BATH, cfg)
    from coolspec.generators import coherent_superoperator, radiative_dissipator
    from coolspec.system import build_hamiltonian

    static = coherent_superoperator(build_hamiltonian(SPEC)) + radiative_dissipator(SPEC)
    assert_allclose(prop.generator(0.0).matrix, static, atol=1e-14)
    assert np.abs(prop.generator(0.0).heat_kernel).max() == 0.0


def test_trajectory_slips_then_tracks_markovian_observables():
    cfg = MemoryKernelConfig(t_mem=20.0, dt=0.05, quad_points=2)
    times, states, record = tcl_propagate(SPEC, BATH, cfg, lower_ground_state(), 30.0)
    markov = total_liouvillian("bloch_redfield", SPEC, BATH)
    _, markov_states = propagate(markov, lower_ground_state(), 30.0, 0.05)
    currents = np.array([heat_current_trace(markov, s) for s in markov_states])
    prop = TclPropagator(SPEC, BATH, cfg)
    tcl_currents = np.array([
        prop._current(prop.generator(t), vectorize(s)) for t, s in zip(times, states)
    ])
    late = times >= 10.0
    rel = np.abs(tcl_currents[late] - currents[late]) / np.abs(currents[late])
    assert rel.max() < 0.05
    # trace preserved along the way
    assert np.abs(np.trace(states, axis1=1, axis2=2) - 1.0).max() < 1e-8
    assert record.method == "tcl_oracle"
    assert record.route == "kernel_trace"
    assert record.time == pytest.approx(30.0)
    assert record.current == pytest.approx(tcl_currents[-1])
    # transferred heat is the time integral of the current
    assert record.mean_heat == pytest.approx(np.trapezoid(tcl_currents, times), rel=1e-12)


def test_memory_horizon_insensitive():
    # doubling t_mem changes the plateau current by well under half a percent
    currents = []
    for t_mem in (20.0, 40.0):
        cfg = MemoryKernelConfig(t_mem=t_mem, dt=0.05, quad_points=2)
        _, _, record = tcl_propagate(SPEC, BATH, cfg, lower_ground_state(), 60.0)
        currents.append(record.current)
    assert abs(currents[1] - currents[0]) / abs(currents[1]) < 0.005


def test_zero_coupling_reduces_to_coherent_evolution():
    dead_bath = BathSpec(alpha=0.0, omega_c=1.0, temperature=3.0)
    cfg = MemoryKernelConfig(t_mem=5.0, dt=0.05, quad_points=2)
    times, states, record = tcl_propagate(SPEC, dead_bath, cfg, lower_ground_state(), 10.0)
    reference = total_liouvillian("bloch_redfield", SPEC, dead_bath)
    _, ref_states = propagate(reference, lower_ground_state(), 10.0, 0.05)
    assert_allclose(states, ref_states, atol=1e-12)
    assert record.mean_heat == 0.0
    assert record.current == 0.0
