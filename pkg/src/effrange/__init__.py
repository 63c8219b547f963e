"""Low-energy S-wave scattering: phase shifts and effective-range expansions.

Units are hbar = 2m = 1 throughout, so k**2 is the energy and potentials are
in inverse length squared.
"""

from .analysis import (
    ErFitResult,
    ErrorReport,
    compare_expansions,
    fit_effective_range,
    ksq_slope_at_threshold,
    scattering_length_scan,
    solve_beta_for_target_a,
)
from .expansions import ErParams, ExpansionKind, eval_expansion, reciprocal_coefficients
from .potentials import Exponential, Gaussian, SquareWell, Yukawa, evaluate_potential
from .radial import SolverConfig, integral_identity, solve_phase
from .records import PhaseRecord
from .squarewell import (
    SquareWellCoefficients,
    exact_k_cot_delta,
    exact_phase_record,
    exact_tan_delta_over_k,
    interior_wavefunction,
    scattering_length,
    taylor_coefficients,
)

__version__ = "0.1.0"
