"""Closed-form propagator solutions of the order-N Cauchy problem

    d^N u / dt^N = G u,   d^i u / dt^i (t0) = u_i,  i = 0..N-1,

through the sparse exponential series and its N-exponential closed form.
"""

from .errors import (
    CauchyPropError,
    ConfigurationError,
    DegenerateSystemError,
    IllConditionedDecompositionError,
    InvalidOrderError,
    InvalidResidueError,
    KernelOverflowError,
    MeanModeError,
    NonConvergenceError,
    NumericalError,
    ProblemFormatError,
    ValidationError,
)
from .operators import (
    Eigendecomposition,
    LinearOperator,
    apply_kernel_matrix,
    eigendecompose,
    series_kernel_matrix,
)
from .problem_io import load_problem, problem_from_dict, problem_to_dict
from .roots import (
    CoefficientTable,
    InitSystem,
    RootSet,
    build_init_system,
    coeffs_analytic,
    roots_of_unity,
    solve_coeffs,
)
from .solver import (
    CauchyProblem,
    InitialConditionReport,
    SolutionSample,
    solve_closed,
    solve_series,
    verify_initial_conditions,
    verify_pde_residual,
)
from .sparse_exp import (
    KernelArgs,
    Method,
    SeriesParams,
    phi_closed,
    phi_kernel,
    yj_closed,
    yj_derivative,
    yj_hybrid,
    yj_series,
)
from .wave import (
    PeriodicProfile,
    WaveProblem,
    dalembert_reference,
    spectral_symbol,
    wave_solve_shift,
    wave_solve_spectral,
)

__version__ = "0.1.0"
