"""Open-system simulator for a disordered two-stroke driven spin chain.

Core pipeline: sample disorder, build the stroke Hamiltonians and the
collective bath coupling, resolve the coupling into Bohr-frequency jump
operators with thermal (detailed-balance) rates, exponentiate the resulting
Lindblad generators into stroke propagators, and drive the chain for many
periods while recording observables, thermodynamic rates, and (optionally)
projective-measurement outcomes.
"""

from .bath import (BathParams, BohrDecomposition, JumpOperatorSet,
                   bohr_decompose, build_jump_operators, gamma_rate)
from .errors import ConfigError, NumericalError
from .evolution import (EvolutionResult, Liouvillian, PeriodPropagators,
                        PeriodSchedule, StrokePropagator, build_liouvillian,
                        build_period_propagators, build_propagator, choi_matrix,
                        evolve, evolve_with, unvec, vec)
from .measure import (MagnetizationPOVM, MeasurementRecord, build_povm,
                      defect_density, dephase, mean_domain_size,
                      run_measured_average, run_trajectory, sample_measurement,
                      staggered_magnetization)
from .model import (DisorderRealization, ModelParams, SpinModel, build_model,
                    check_density, initial_state, pauli, sample_disorder)
from .thermo import (ThermoTrace, compute_trace, entropy_production_rate,
                     entropy_rate, expectation, fidelity, half_chain_entropy,
                     heat_rate, relative_difference, stroboscopic_signature,
                     thermal_state, vn_entropy, work_at_switch)

__version__ = "0.1.0"
