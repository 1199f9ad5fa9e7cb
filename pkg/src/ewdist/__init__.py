"""ewdist: Beta approximation for ratios of F-variates and elemental weights.

The ratio W = Y1/(Y1+Y2) of independent F variates with a shared
denominator df is approximated by Beta((m2+0.5)/2, m2/2); products of
such ratios give the law of elemental regression weights.  This package
provides the special functions, samplers, envelope-bound certificates,
product-law machinery, goodness-of-fit tests and a CLI (`ew`) that
reproduce the simulation study at desk scale.
"""

from .approx import (
    RatioSetting,
    approx_shape,
    certify_bounds,
    joint_density,
    lower_constant,
    marginal_w_density,
    tv_bound,
    upper_constant,
)
from .dist import BetaShape, FParams, MvtParams, beta_cdf, beta_pdf, f_cdf, f_pdf, w_sample
from .goftests import ad_two_sample, ecdf, ks_one_sample, ks_two_sample, tv_distance
from .product import ProductSpec, omega_cdf_numeric, omega_moment, omega_pdf_numeric, omega_sample
from .specfun import ln_beta, ln_gamma, reg_inc_beta

__version__ = "0.1.0"

__all__ = [
    "RatioSetting",
    "approx_shape",
    "certify_bounds",
    "joint_density",
    "lower_constant",
    "marginal_w_density",
    "tv_bound",
    "upper_constant",
    "BetaShape",
    "FParams",
    "MvtParams",
    "beta_cdf",
    "beta_pdf",
    "f_cdf",
    "f_pdf",
    "w_sample",
    "ad_two_sample",
    "ecdf",
    "ks_one_sample",
    "ks_two_sample",
    "tv_distance",
    "ProductSpec",
    "omega_cdf_numeric",
    "omega_moment",
    "omega_pdf_numeric",
    "omega_sample",
    "ln_beta",
    "ln_gamma",
    "reg_inc_beta",
]
