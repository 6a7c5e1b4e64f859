"""Anti-Stokes cooling spectra for a driven three-level impurity.

Open-system dynamics of a laser-driven impurity whose ground-state doublet
couples to a super-Ohmic phonon bath.  Provides the full Bloch-Redfield,
secular, and phenomenological Lindblad generators with counting-field heat
statistics, a finite-memory (time-convolutionless) validation integrator,
and a sweep engine plus CLI for cooling spectra over detuning and drive
strength.
"""

from .bath import BathSpec, QuadratureError, RateTable, bose_occupation, rate_a, rate_table, shift_b, spectral_density
from .config import ConfigError, HeatRoute, SweepConfig, parse_config, profile_config, serialize_config
from .dynamics import (
    HeatRecord,
    PropagationError,
    SteadyStateError,
    characteristic_function,
    dressed_coherence,
    heat_current_trace,
    mean_heat_fd,
    min_eigenvalue,
    propagate,
    steady_state,
)
from .generators import (
    Liouvillian,
    bloch_redfield_generator,
    phenomenological_generator,
    phenomenological_rates,
    radiative_dissipator,
    secular_generator,
    total_liouvillian,
)
from .sweep import SpectrumRecord, run_sweep, write_output
from .system import EigenSystem, SystemSpec, build_hamiltonian, coupling_operator, eigensystem, lower_ground_state
from .tcl import MemoryKernelConfig, TclPropagator, bath_correlation, tcl_generator, tcl_propagate

__version__ = "0.1.0"

__all__ = [
    "BathSpec",
    "ConfigError",
    "EigenSystem",
    "HeatRecord",
    "HeatRoute",
    "Liouvillian",
    "MemoryKernelConfig",
    "PropagationError",
    "QuadratureError",
    "RateTable",
    "SpectrumRecord",
    "SteadyStateError",
    "SweepConfig",
    "SystemSpec",
    "TclPropagator",
    "bath_correlation",
    "bloch_redfield_generator",
    "bose_occupation",
    "build_hamiltonian",
    "characteristic_function",
    "coupling_operator",
    "dressed_coherence",
    "eigensystem",
    "heat_current_trace",
    "lower_ground_state",
    "mean_heat_fd",
    "min_eigenvalue",
    "parse_config",
    "phenomenological_generator",
    "phenomenological_rates",
    "profile_config",
    "propagate",
    "radiative_dissipator",
    "rate_a",
    "rate_table",
    "run_sweep",
    "secular_generator",
    "serialize_config",
    "shift_b",
    "spectral_density",
    "steady_state",
    "tcl_generator",
    "tcl_propagate",
    "total_liouvillian",
    "write_output",
]
