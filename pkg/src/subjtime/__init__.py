"""Weighted fractional calculus on subjective time scales.

Evaluates the weighted one-sided fractional integral and derivative (direct
and hypersingular forms), the weighted Fourier transform it diagonalizes
under, the weighted convolution, and the aging fractional Kelvin-Voigt
relaxation model with its Mittag-Leffler impulse response and memory-decay
analysis.
"""

from .geometry import (GridFunction, Profile, ProfileReport, ScaleFunction,
                       WeightFunction, conjugate, conjugate_inverse,
                       load_scale_csv, make_scale, make_weight,
                       validate_profile, weighted_norm_l1)
from .operators import (FracOrder, first_order, left_inverse_check,
                        weyl_derivative_marchaud, weyl_derivative_rl,
                        weyl_integral)
from .quadrature import QuadratureError, QuadratureSpec
from .special import (DivergentTruncationError, GammaPoleError,
                      MLConvergenceError, MLRegimePolicy, NegativeAxisML,
                      gamma, mittag_leffler, ml_asymptotic_negative,
                      neg_axis_ml, reciprocal_gamma)
from .spectral import (SpectralGrid, Symbol, apply_multiplier,
                       forward_transform, frac_power_symbol, inverse_transform,
                       plancherel_check, resolvent_symbol, weighted_convolution)
from .viscoelastic import (DecayFit, ForcingSpec, KVModel, amnesia_fit,
                           effective_kernel, greens_lag_kernel, kv_residual,
                           relaxation_experiment, solve_kv_spectral,
                           solve_kv_timedomain)

__version__ = "0.1.0"

__all__ = [
    "DecayFit", "DivergentTruncationError", "ForcingSpec", "FracOrder",
    "GammaPoleError", "GridFunction", "KVModel", "MLConvergenceError",
    "MLRegimePolicy", "NegativeAxisML", "Profile", "ProfileReport",
    "QuadratureError", "QuadratureSpec", "ScaleFunction", "SpectralGrid",
    "Symbol", "WeightFunction", "amnesia_fit", "apply_multiplier",
    "conjugate", "conjugate_inverse", "effective_kernel", "first_order",
    "forward_transform", "frac_power_symbol", "gamma", "greens_lag_kernel",
    "inverse_transform", "kv_residual", "left_inverse_check",
    "load_scale_csv", "make_scale", "make_weight", "mittag_leffler",
    "ml_asymptotic_negative", "neg_axis_ml", "plancherel_check",
    "relaxation_experiment", "resolvent_symbol", "solve_kv_spectral",
    "solve_kv_timedomain", "validate_profile", "weighted_convolution",
    "weighted_norm_l1", "weyl_derivative_marchaud", "weyl_derivative_rl",
    "weyl_integral",
]
