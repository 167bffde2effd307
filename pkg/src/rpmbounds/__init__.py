"""Hankel-determinant (Riccati-Pade) root sequences that bracket the energy
levels of x^2 + b x^2/(1 + c x^2), with an independent shooting check."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .hankel import (
    HankelSpec,
    build_matrix,
    determinant,
    determinant_with_derivative,
    hankel_determinant,
    symbolic_hankel,
)
from .oracle import ShootingConfig, harmonic_reference, shoot_eigenvalue
from .polynomial import EnergyPolynomial
from .precision import default_digits, working_context
from .roots import RootResult, refine_root, scan_brackets
from .sequences import (
    BoundsResult,
    Classification,
    RootSequence,
    bound_state,
    classify_bounds,
    generate_sequence,
    interpolate,
    interpolated_sequence,
    log_error_series,
    log_gap_series,
)
from .series import (
    PotentialParams,
    SeriesCoefficients,
    StateLabel,
    compute_coefficient_derivatives,
    compute_coefficients,
    exact_case_params,
    exact_series_reference,
)
