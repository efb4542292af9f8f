"""Branch-aware numerics for the transcendental equation w * tan(w) = x.

The package covers real-axis evaluation of every branch, complex-plane
continuation on the finite-cuts sheet convention, small- and
large-argument series with their recursion and inversion routes, a
piecewise Chebyshev approximation of the principal branch, branch-point
location, cut discontinuities with the dispersion reconstruction, integral
identities, and the square-well eigenvalue problem the function solves.
"""

from .branch_points import (
    BranchPoint,
    asymptotic_branch_point,
    find_branch_point,
    local_expansion_check,
)
from .chebyshev import ChebyshevModel, eval_cheb, fit
from .complex_plane import (
    ContinuationPath,
    Cut,
    CutKind,
    DispersionConfig,
    SheetAtlas,
    Side,
    StepControl,
    boundary_value,
    discontinuity_delta0,
    discontinuity_delta1,
    dispersion_eval,
    eval_complex,
    trace_path,
)
from .core import (
    BranchedValue,
    BranchIndex,
    CutScheme,
    SolverConfig,
    branch_identity_residual,
    defining_residual,
    derivative,
    eval_real,
    halley_step,
    second_derivative,
    validate_branch,
)
from .integrals import (
    QuadratureConfig,
    check_indefinite_log,
    check_indefinite_logsin,
    definite_catalan,
    definite_lnsin,
)
from .quantum import (
    Parity,
    SpectrumEntry,
    Wavefunction,
    WellModel,
    rayleigh_quotient,
    spectrum,
    variational_bound_1,
    variational_bound_2,
    wavefunction,
)
from .series import (
    AsymptoticFit,
    RadiusEstimate,
    SeriesKind,
    SeriesTable,
    eval_series,
    fit_asymptotic,
    lagrange_b,
    large_x_coeffs,
    radius_estimates,
    small_x_coeffs,
)

__version__ = "0.1.0"
