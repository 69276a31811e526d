"""dtforge: construct exact solutions of the dispersive water wave and
Jaulent-Miodek systems by Darboux transformation, and verify every claimed
identity numerically against independent oracles."""

from .darboux import (
    DtStep,
    EigenPotential,
    compute_B,
    dt_eigen,
    dt_iterate,
    dt_state,
    dt_state_sigma_form,
    eigen_stationary_residual,
    eigen_time_residual,
    reconstruct_q_from_eigen,
    reconstruct_r_from_eigen,
)
from .dww import (
    DwwState,
    DwwTangent,
    apply_phi,
    dww_eigen_residual,
    dww_linearized_rhs,
    dww_pde_residual,
    dww_rhs,
)
from .errors import (
    BlowupError,
    ConfigError,
    DtforgeError,
    EigenMismatchError,
    GridError,
    MaterializationError,
    PeriodicMeanError,
    SingularDenominatorError,
)
from .evolve import EvolveResult, burgers_cole_hopf, integrate
from .grid import Field, Grid, antiderivative, diff, diff2, make_grid, norm_inf, norm_rel
from .jm import (
    JmState,
    JmTangent,
    apply_psi,
    jm_eigen_residual,
    jm_linearized_rhs,
    jm_pde_residual,
    jm_rhs,
)
from .jm_darboux import (
    JmEigenPotential,
    dt_jm_eigen,
    dt_jm_state,
    jm_aux_B,
    jm_aux_E,
    jm_eigen_stationary_residual,
    make_jm_eigenpotential,
)
from .miura import (
    eigen_map_fwd,
    eigen_map_inv,
    map_eigenvalue_fwd,
    map_eigenvalue_inv,
    miura_fwd,
    miura_inv,
)
from .seeds import (
    EigenParams,
    ExponentialEigenFamily,
    SeedSpec,
    seed_eigenpotential,
    seed_independence_det,
    seed_jm_eigenpotential,
    seed_state,
    seed_stationary_residual,
    seed_tangent,
    seed_time_fd_residual,
    seed_time_residual,
)

__version__ = "0.1.0"
