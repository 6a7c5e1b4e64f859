"""Second-order time-convolutionless validation integrator.

Checks the Markovian generators against a finite-memory weak-coupling
treatment: the dissipator coefficients are running half-Fourier integrals
of the bath correlation function instead of their infinite-time limits.
As the running integrals saturate, the instantaneous generator converges
to the full (nonsecular) Markovian one with its principal-value shifts,
so long-time observables from the two treatments must agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import cumulative_trapezoid, quad, trapezoid

from .bath import BathSpec, QuadratureError, bose_occupation, spectral_density
from .dynamics import HeatRecord, PropagationError, TRACE_DRIFT_TOL
from .generators import (
    TRACE_VECTOR,
    Liouvillian,
    coherent_superoperator,
    left_superoperator,
    radiative_dissipator,
    right_superoperator,
    sandwich_superoperator,
    unvectorize,
    vectorize,
)
from .system import SystemSpec, build_hamiltonian, coupling_operator, eigensystem

CORRELATION_TOL = 1e-10
# Gauss-Legendre nodes for the vectorized correlation grid; the integrand
# oscillates with period 2 pi / tau in omega, so this resolves memory
# times up to several hundred inverse cutoffs
_GL_NODES = 4000


@dataclass(frozen=True)
class MemoryKernelConfig:
    """Discretization of the running memory integrals.

    t_mem:
        Horizon beyond which the correlation function is treated as dead
        and the running integrals are frozen.
    dt:
        Integration step of the propagator.
    quad_points:
        Subdivisions of dt used for the tau grid of the running
        integrals; at least 2.
    """

    t_mem: float = 30.0
    dt: float = 0.02
    quad_points: int = 2

    def __post_init__(self):
        if self.t_mem <= 0:
            raise ValueError(f"t_mem must be positive, got {self.t_mem}")
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.quad_points < 2:
            raise ValueError(f"quad_points must be at least 2, got {self.quad_points}")


def bath_correlation(tau: float, spec: BathSpec, omega_max: float | None = None,
                     tol: float = CORRELATION_TOL) -> complex:
    """Finite-temperature bath correlation function C(tau).

    C(tau) = integral over omega > 0 of
    j(omega) (coth(beta omega / 2) cos(omega tau) - i sin(omega tau)).
    Evaluated adaptively with oscillatory-weight quadrature; satisfies
    C(-tau) = conj(C(tau)).
    """
    if omega_max is None:
        omega_max = 40.0 * spec.omega_c
    if tau < 0:
        return np.conj(bath_correlation(-tau, spec, omega_max=omega_max, tol=tol))

    def j_coth(w: float) -> float:
        if w <= 0.0:
            return 0.0
        return spectral_density(w, spec) * (2.0 * bose_occupation(w, spec) + 1.0)

    def j_plain(w: float) -> float:
        if w <= 0.0:
            return 0.0
        return spectral_density(w, spec)

    if tau == 0.0:
        re, re_err = quad(j_coth, 0.0, omega_max, epsabs=tol, epsrel=1e-12, limit=400)
        im, im_err = 0.0, 0.0
    else:
        re, re_err = quad(j_coth, 0.0, omega_max, weight="cos", wvar=tau,
                          epsabs=tol, epsrel=1e-12, limit=400)
        im, im_err = quad(j_plain, 0.0, omega_max, weight="sin", wvar=tau,
                          epsabs=tol, epsrel=1e-12, limit=400)
    err = re_err + im_err
    if err > 10.0 * tol:
        raise QuadratureError(
            f"correlation integral error estimate {err:.3e} exceeds budget", err)
    return complex(re, -im)


@lru_cache(maxsize=4)
def _gl_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def correlation_grid(taus: np.ndarray, spec: BathSpec, omega_max: float | None = None) -> np.ndarray:
    """C(tau) on a grid, via fixed Gauss-Legendre quadrature in omega.

    Used for the memory-kernel tables where thousands of tau values are
    needed; agrees with bath_correlation to quadrature accuracy.
    """
    if omega_max is None:
        omega_max = 40.0 * spec.omega_c
    x, w = _gl_nodes(_GL_NODES)
    omega = 0.5 * omega_max * (x + 1.0)
    weights = 0.5 * omega_max * w
    j = spectral_density(omega, spec)
    coth = 2.0 / np.expm1(spec.beta * omega) + 1.0
    phase_cos = np.cos(np.outer(taus, omega))
    phase_sin = np.sin(np.outer(taus, omega))
    re = phase_cos @ (weights * j * coth)
    im = phase_sin @ (weights * j)
    return re - 1j * im


class TclPropagator:
    """Precomputed running-coefficient generator on a fixed time grid.

    The running coefficients Gamma[i, j](t) are cumulative integrals of
    C(tau) exp(-i nu[i, j] tau) up to min(t, t_mem), tabulated once on a
    tau grid of spacing dt / quad_points and interpolated linearly in
    between.  The generator and its heat kernel at any time are then
    linear recombinations of constant superoperator blocks.
    """

    def __init__(self, spec: SystemSpec, bath: BathSpec, cfg: MemoryKernelConfig):
        self.spec = spec
        self.bath = bath
        self.cfg = cfg
        self.eig = eigensystem(build_hamiltonian(spec), coupling_operator())

        step = cfg.dt / cfg.quad_points
        n_tau = max(1, int(round(cfg.t_mem / step)))
        taus = np.arange(n_tau + 1) * step
        corr = correlation_grid(taus, bath)
        gamma = np.empty((3, 3, n_tau + 1), dtype=complex)
        for i in range(3):
            for j in range(3):
                integrand = corr * np.exp(-1j * self.eig.nu[i, j] * taus)
                gamma[i, j] = cumulative_trapezoid(integrand, taus, initial=0.0)
        self._tau_step = step
        self._gamma_table = gamma
        self._n_tau = n_tau

        o_full = coupling_operator()
        blocks = self.eig.blocks
        # constant superoperator blocks; the time dependence enters only
        # through the scalar coefficients Gamma
        self._m_jump = np.empty((3, 3, 9, 9), dtype=complex)
        self._m_jump_conj = np.empty((3, 3, 9, 9), dtype=complex)
        self._s_jump = np.empty((3, 3, 9, 9), dtype=complex)
        self._s_jump_conj = np.empty((3, 3, 9, 9), dtype=complex)
        for i in range(3):
            for j in range(3):
                blk = blocks[i, j]
                self._s_jump[i, j] = sandwich_superoperator(blk, o_full)
                self._s_jump_conj[i, j] = sandwich_superoperator(o_full, blk)
                self._m_jump[i, j] = (left_superoperator(o_full @ blk)
                                      - sandwich_superoperator(blk, o_full))
                self._m_jump_conj[i, j] = (right_superoperator(blk @ o_full)
                                           - sandwich_superoperator(o_full, blk))
        self._static = (coherent_superoperator(build_hamiltonian(spec))
                        + radiative_dissipator(spec))

    def coefficients(self, t: float) -> np.ndarray:
        """Running coefficients Gamma[i, j] at time t (frozen past t_mem)."""
        if t <= 0:
            return self._gamma_table[:, :, 0].copy()
        pos = t / self._tau_step
        if pos >= self._n_tau:
            return self._gamma_table[:, :, -1].copy()
        k = int(pos)
        frac = pos - k
        return ((1.0 - frac) * self._gamma_table[:, :, k]
                + frac * self._gamma_table[:, :, k + 1])

    def generator(self, t: float) -> Liouvillian:
        """Instantaneous generator and heat kernel at time t."""
        gam = self.coefficients(t)
        gam_conj = np.conj(gam.T)
        lmat = (self._static
                - np.einsum("ij,ijab->ab", gam, self._m_jump)
                - np.einsum("ij,ijab->ab", gam_conj, self._m_jump_conj))
        nu = self.eig.nu
        kernel = (np.einsum("ij,ijab->ab", 1j * nu.T * gam, self._s_jump)
                  + np.einsum("ij,ijab->ab", 1j * nu * gam_conj, self._s_jump_conj))
        return Liouvillian(matrix=lmat, u=0.0, method="tcl_oracle",
                           include_shifts=True, heat_kernel=kernel)

    def propagate(self, rho0: np.ndarray, t_end: float) -> tuple[np.ndarray, np.ndarray, HeatRecord]:
        """Fixed-step RK4 with the time-dependent generator.

        Returns (times, states, record); the record integrates the
        kernel-trace heat current over the trajectory with the trapezoid
        rule.
        """
        dt = self.cfg.dt
        steps = int(round(t_end / dt))
        y = vectorize(rho0)
        trace0 = TRACE_VECTOR @ y
        times = np.arange(steps + 1) * dt
        states = np.empty((steps + 1, 3, 3), dtype=complex)
        currents = np.empty(steps + 1)
        states[0] = unvectorize(y)
        currents[0] = self._current(self.generator(0.0), y)
        for k in range(steps):
            t = times[k]
            l0 = self.generator(t).matrix
            l_half = self.generator(t + 0.5 * dt).matrix
            gen_full = self.generator(t + dt)
            k1 = l0 @ y
            k2 = l_half @ (y + 0.5 * dt * k1)
            k3 = l_half @ (y + 0.5 * dt * k2)
            k4 = gen_full.matrix @ (y + dt * k3)
            y = y + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
            drift = abs(TRACE_VECTOR @ y - trace0)
            if drift > TRACE_DRIFT_TOL:
                raise PropagationError(
                    f"trace drifted by {drift:.3e} at t = {times[k + 1]:.6g}; "
                    f"reduce dt (currently {dt})")
            states[k + 1] = unvectorize(y)
            currents[k + 1] = self._current(gen_full, y)
        heat = float(trapezoid(currents, times)) if steps else 0.0
        record = HeatRecord(time=float(times[-1]), mean_heat=heat,
                            current=float(currents[-1]), method="tcl_oracle",
                            route="kernel_trace")
        return times, states, record

    @staticmethod
    def _current(gen: Liouvillian, y: np.ndarray) -> float:
        val = -1j * (TRACE_VECTOR @ (gen.heat_kernel @ y))
        return float(val.real)


def tcl_generator(t: float, spec: SystemSpec, bath: BathSpec,
                  cfg: MemoryKernelConfig) -> Liouvillian:
    """Instantaneous generator at time t (convenience wrapper)."""
    return TclPropagator(spec, bath, cfg).generator(t)


def tcl_propagate(spec: SystemSpec, bath: BathSpec, cfg: MemoryKernelConfig,
                  rho0: np.ndarray, t_end: float) -> tuple[np.ndarray, np.ndarray, HeatRecord]:
    """Propagate rho0 to t_end under the finite-memory generator."""
    return TclPropagator(spec, bath, cfg).propagate(rho0, t_end)
