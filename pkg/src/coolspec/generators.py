"""Master-equation generators as superoperators on vectorized states.

Vectorization is column-stacking: vec(rho) stacks columns (Fortran order),
so the map rho -> A rho B has matrix kron(B.T, A).  All generators can be
annotated with a counting field u that tags phonon exchange with the bath;
the u-derivative at zero is kept alongside as a heat kernel, so a single
construction serves propagation, steady states, and both heat routes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bath import BathSpec, RateTable, bose_occupation, rate_table, spectral_density
from .system import (
    IDX_E,
    IDX_GL,
    IDX_GU,
    EigenSystem,
    SystemSpec,
    build_hamiltonian,
    coupling_operator,
    eigensystem,
)

DIM = 3

METHODS = ("bloch_redfield", "secular", "phenomenological")

# tolerance for treating two transition frequencies as equal in the
# rotating-wave pairing, as a fraction of the manifold splitting
SECULAR_PAIRING_FRACTION = 1e-10


def vectorize(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvectorize(v: np.ndarray) -> np.ndarray:
    return np.asarray(v).reshape(DIM, DIM, order="F")


def sandwich_superoperator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix of rho -> a rho b."""
    return np.kron(b.T, a)


def left_superoperator(a: np.ndarray) -> np.ndarray:
    """Matrix of rho -> a rho."""
    return np.kron(np.eye(DIM), a)


def right_superoperator(b: np.ndarray) -> np.ndarray:
    """Matrix of rho -> rho b."""
    return np.kron(b.T, np.eye(DIM))


TRACE_VECTOR = vectorize(np.eye(DIM))


def coherent_superoperator(hamiltonian: np.ndarray) -> np.ndarray:
    """Matrix of rho -> -i [H, rho]."""
    return -1j * (left_superoperator(hamiltonian) - right_superoperator(hamiltonian))


@dataclass(frozen=True)
class Liouvillian:
    """A generator in vectorized form, optionally counting-field annotated.

    matrix drives d/dt vec(rho) = matrix @ vec(rho).  heat_kernel is
    d(matrix)/du at u = 0 and is independent of the u the matrix itself was
    built at; tracing it against a state gives the instantaneous phonon
    heat current.  Radiative decay is never annotated, so photon emission
    does not enter the counted heat.
    """

    matrix: np.ndarray
    u: float = 0.0
    method: str = ""
    include_shifts: bool = False
    heat_kernel: np.ndarray | None = None


def bloch_redfield_generator(eig: EigenSystem, rates: RateTable, spec: SystemSpec,
                             u: float = 0.0, include_shifts: bool = True) -> Liouvillian:
    """Full weak-coupling generator, no rotating-wave approximation.

    For every ordered eigenstate pair (i, j) the dissipator contributes a
    rate bracket weighted by a[i, j] and, when include_shifts is set, a
    principal-value bracket weighted by b[i, j].  In each bracket only the
    sandwich terms (state between coupling operators) describe an exchange
    of a bath quantum nu[i, j] and carry the counting phase
    exp(i u nu[i, j]); the one-sided products do not.  At u = 0 the result
    preserves trace and hermiticity term by term.
    """
    o_full = coupling_operator()
    lmat = coherent_superoperator(build_hamiltonian(spec)).astype(complex)
    kernel = np.zeros((DIM * DIM, DIM * DIM), dtype=complex)
    for i in range(DIM):
        for j in range(DIM):
            a = rates.a[i, j]
            b = rates.b[i, j] if include_shifts else 0.0
            if a == 0.0 and b == 0.0:
                continue
            nu = rates.nu[i, j]
            phase = np.exp(1j * u * nu)
            jump_left = sandwich_superoperator(eig.blocks[j, i], o_full)
            jump_right = sandwich_superoperator(o_full, eig.blocks[i, j])
            one_sided_r = right_superoperator(eig.blocks[i, j] @ o_full)
            one_sided_l = left_superoperator(o_full @ eig.blocks[j, i])
            if a != 0.0:
                lmat += a * (phase * (jump_left + jump_right) - one_sided_r - one_sided_l)
                kernel += 1j * nu * a * (jump_left + jump_right)
            if b != 0.0:
                lmat += -1j * b * (phase * (jump_left - jump_right) + one_sided_r - one_sided_l)
                kernel += nu * b * (jump_left - jump_right)
    return Liouvillian(matrix=lmat, u=u, method="bloch_redfield",
                       include_shifts=include_shifts, heat_kernel=kernel)


def secular_generator(eig: EigenSystem, rates: RateTable, spec: SystemSpec,
                      pairing_tol: float | None = None, u: float = 0.0) -> Liouvillian:
    """Rotating-wave generator: only frequency-matched transition pairs.

    A pair of transitions is retained when its frequencies agree within
    pairing_tol (default 1e-10 * e_man, so only exact coincidences
    survive).  For a nondegenerate spectrum this reduces to a sum of
    Lindblad dissipators with jump operators blocks[j, i] and rates
    2 a[i, j].  No principal-value terms are included, matching the common
    presentation of this approximation.
    """
    if pairing_tol is None:
        pairing_tol = SECULAR_PAIRING_FRACTION * spec.e_man
    lmat = coherent_superoperator(build_hamiltonian(spec)).astype(complex)
    kernel = np.zeros((DIM * DIM, DIM * DIM), dtype=complex)
    for i in range(DIM):
        for j in range(DIM):
            a = rates.a[i, j]
            if a == 0.0:
                continue
            nu = rates.nu[i, j]
            phase = np.exp(1j * u * nu)
            for k in range(DIM):
                for l in range(DIM):
                    if abs(rates.nu[k, l] - nu) <= pairing_tol:
                        s = sandwich_superoperator(eig.blocks[j, i], eig.blocks[k, l])
                        lmat += a * (phase * s - left_superoperator(eig.blocks[k, l] @ eig.blocks[j, i]))
                        kernel += 1j * nu * a * s
                    if abs(rates.nu[k, l] + nu) <= pairing_tol:
                        s = sandwich_superoperator(eig.blocks[k, l], eig.blocks[i, j])
                        lmat += a * (phase * s - right_superoperator(eig.blocks[i, j] @ eig.blocks[k, l]))
                        kernel += 1j * nu * a * s
    return Liouvillian(matrix=lmat, u=u, method="secular",
                       include_shifts=False, heat_kernel=kernel)


def phenomenological_rates(spec: SystemSpec, bath: BathSpec) -> tuple[float, float]:
    """Drive-independent manifold rates (gamma_up, gamma_down).

    gamma_up drives |g_l> -> |g_u> by phonon absorption, gamma_down the
    reverse by emission; both are evaluated at the bare splitting e_man.
    Their ratio is the Boltzmann factor exp(-beta e_man).
    """
    j_man = spectral_density(spec.e_man, bath)
    n_man = bose_occupation(spec.e_man, bath)
    return 2.0 * math.pi * n_man * j_man, 2.0 * math.pi * (n_man + 1.0) * j_man


def phenomenological_generator(spec: SystemSpec, bath: BathSpec, u: float = 0.0) -> Liouvillian:
    """Fixed-basis Lindblad model that ignores the drive in the dissipator.

    Two jumps act in the working basis: phonon absorption |g_l> -> |g_u>
    tags a bath loss of e_man (phase exp(-i u e_man)), emission tags a
    gain.
    """
    gamma_up, gamma_down = phenomenological_rates(spec, bath)
    up = np.zeros((DIM, DIM), dtype=complex)
    up[IDX_GU, IDX_GL] = 1.0
    down = np.zeros((DIM, DIM), dtype=complex)
    down[IDX_GL, IDX_GU] = 1.0
    lmat = coherent_superoperator(build_hamiltonian(spec)).astype(complex)
    kernel = np.zeros((DIM * DIM, DIM * DIM), dtype=complex)
    for rate, jump, bath_gain in ((gamma_up, up, -spec.e_man), (gamma_down, down, spec.e_man)):
        proj = jump.conj().T @ jump
        s = sandwich_superoperator(jump, jump.conj().T)
        lmat += rate * (np.exp(1j * u * bath_gain) * s
                        - 0.5 * (left_superoperator(proj) + right_superoperator(proj)))
        kernel += 1j * bath_gain * rate * s
    return Liouvillian(matrix=lmat, u=u, method="phenomenological", heat_kernel=kernel)


def radiative_dissipator(spec: SystemSpec) -> np.ndarray:
    """Lindblad dissipator matrix for |e> -> |g_l> decay at gamma_rad.

    Dissipative part only (the coherent part lives with each method's
    generator).  Photon emission is not counted as phonon heat, so this
    term carries no counting annotation.
    """
    jump = np.zeros((DIM, DIM), dtype=complex)
    jump[IDX_GL, IDX_E] = 1.0
    proj = jump.conj().T @ jump
    return spec.gamma_rad * (
        sandwich_superoperator(jump, jump.conj().T)
        - 0.5 * (left_superoperator(proj) + right_superoperator(proj))
    )


@lru_cache(maxsize=2048)
def _eigensystem_cached(spec: SystemSpec) -> EigenSystem:
    return eigensystem(build_hamiltonian(spec), coupling_operator())


@lru_cache(maxsize=2048)
def _rate_table_cached(spec: SystemSpec, bath: BathSpec) -> RateTable:
    return rate_table(_eigensystem_cached(spec), bath)


def total_liouvillian(method: str, spec: SystemSpec, bath: BathSpec, u: float = 0.0,
                      include_shifts: bool | None = None,
                      pairing_tol: float | None = None) -> Liouvillian:
    """Full generator (phonon part plus radiative decay) for one method.

    include_shifts defaults to True for bloch_redfield and is rejected for
    the other methods, which do not implement principal-value terms.
    Eigensystems and rate tables are cached per (spec, bath).
    """
    if method == "bloch_redfield":
        if include_shifts is None:
            include_shifts = True
        part = bloch_redfield_generator(
            _eigensystem_cached(spec), _rate_table_cached(spec, bath), spec,
            u=u, include_shifts=include_shifts)
    elif method == "secular":
        if include_shifts:
            raise ValueError("secular method does not implement principal-value shifts")
        part = secular_generator(
            _eigensystem_cached(spec), _rate_table_cached(spec, bath), spec,
            pairing_tol=pairing_tol, u=u)
    elif method == "phenomenological":
        if include_shifts:
            raise ValueError("phenomenological method does not implement principal-value shifts")
        part = phenomenological_generator(spec, bath, u=u)
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    return Liouvillian(
        matrix=part.matrix + radiative_dissipator(spec),
        u=u,
        method=method,
        include_shifts=part.include_shifts,
        heat_kernel=part.heat_kernel,
    )
