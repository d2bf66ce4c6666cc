"""Continuous sparse attention: sparse density families and closed-form
softmax/sparsemax attention in 1D and 2D."""

from contattn._core import (  # noqa: F401
    DegenerateCovarianceError,
    InfiniteSupportError,
    NoBracketError,
    NotSpdError,
    SingularSystemError,
    SparseDensity,
    ToleranceNotReachedError,
    TooLargeError,
    alpha_entmax,
    attend_1d,
    attend_2d,
    beta_exp,
    beta_log,
    erf,
    fit_value,
    gamma_fn,
    gaussian,
    gaussian_2d,
    jacobian_discrete,
    moment_match,
    run_checks,
    run_demo,
    simplex_projection_bruteforce,
    softmax,
    sparsemax,
    triangular,
    truncated_parabola,
    truncated_paraboloid,
    tsallis_negentropy,
)

__version__ = "0.1.0"
