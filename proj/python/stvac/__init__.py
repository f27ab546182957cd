from ._stvac import (
    AxisymmetricHarmonic,
    DivergenceError,
    DomainError,
    Error,
    InputError,
    IntegrationError,
    SingularMetricError,
    analyticity_classify,
    carleman_check,
    continuation_ode,
    estia_sample,
    exact_residuals,
    fg_boundary_nodes,
    fg_expand,
    flat_ball_kid_residuals,
    schwarzschild_lapse,
    sector_preset,
    solve_axisym_laplace,
    synthetic_spectrum,
    weyl_k,
    weyl_vacuum_check,
)

try:
    from ._stvac import run_cli
except ImportError:
    pass

__version__ = "0.1.0"
