"""twistcav: torsional optomechanics of a twisted birefringent cavity.

Pipeline: permittivity tensors of the twisted uniaxial medium
(:mod:`~twistcav.tensor_optics`) -> cavity eigenmodes and frequencies
(:mod:`~twistcav.cavity_modes`) -> two-level + boson coupling
(:mod:`~twistcav.hamiltonian`) -> thermal-bath master equation for the
photon polarization (:mod:`~twistcav.lindblad`), certified against
brute-force validators (:mod:`~twistcav.bath_oracle`).
"""

from .backend import backend_name, using_compiled
from .bath_oracle import (
    DiscretizedBath,
    JaynesCummingsCheck,
    SurvivalResult,
    discretize_bath,
    evolve_single_excitation,
    jc_rabi_check,
)
from .cavity_modes import (
    CavityConfig,
    CavityFrequencies,
    EigenMode,
    EigenModeSet,
    WaveVector,
    cavity_frequencies,
    check_orthonormality,
    mode_matrix,
    solve_eigenmodes,
    solve_eigenmodes_numeric,
)
from .constants import BOLTZMANN, HBAR, SPEED_OF_LIGHT
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    OpticAxisDegeneracyError,
    StabilityGuardError,
    ThresholdError,
    TwistCavError,
    ValidityWarning,
)
from .hamiltonian import (
    QuantizedSystem,
    TwoLevelParams,
    build_hamiltonian,
    coupling_constant,
    interaction_energy,
    two_level_params,
)
from .lindblad import (
    BathParams,
    CouplingSpectrum,
    DensityMatrix2,
    DynamicsParams,
    Trajectory,
    analytic_solution,
    analytic_trajectory,
    bose_occupation,
    decay_rate,
    dynamics_from_bath,
    evolve,
    frequency_shift,
    frequency_shift_result,
    lindblad_rhs,
    steady_state,
)
from .quadrature import PrincipalValueResult, QuadratureSpec, principal_value
from .tensor_optics import (
    LAMBDA4,
    LAMBDA5,
    QUARTZ,
    TwistProfile,
    UniaxialMedium,
    permittivity_lab_exact,
    permittivity_lab_first_order,
    permittivity_twisted_frame,
    perturbation_tensor,
    rotation_matrix,
)

__version__ = "0.1.0"
