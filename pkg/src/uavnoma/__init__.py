"""Correlated Rician shadowed fading and outage analysis for a two-UAV NOMA downlink."""
from .bivariate import (
    BivariateShadowedParams,
    DegenerateCorrelationError,
    QuadratureError,
    TruncationOrders,
    adaptive_ktr1,
    alpha_coeff,
    g_term,
    joint_pdf_closed,
    joint_pdf_quadrature,
    marginal_cdf,
    marginal_cdf_gamma_form,
    marginal_cdf_quadrature,
    sample_pair,
)
from .common import Uav, db_to_linear, linear_to_db
from .config import RunConfig
from .geometry import GeometryParams, distance_cdf, distance_pdf, g_bar, sample_distance
from .montecarlo import SimPlan, mc_noma_outage, mc_oma_outage
from .outage import (
    CertainOutageError,
    LinkConfig,
    OutageResult,
    noma_outage_analytic,
    noma_threshold,
    noma_thresholds,
    oma_outage_analytic,
    oma_threshold,
)
from .special import SeriesAccuracy, bessel_i0, hyp1f1_integer_b1, lower_incomplete_gamma_regularized
from .univariate import UnivariateShadowedParams, alpha_bar_coeff, sample_univariate_power, univariate_cdf

__version__ = "0.1.0"
