"""Truncated high-dimensional EM with decorrelated score/Wald inference.

The package fits two-component latent-variable models (symmetric Gaussian
mixture, mixture of regressions, regression with missing covariates) by an
EM loop whose M-step output is hard-truncated to its largest-magnitude
coordinates, and provides debiased hypothesis tests and confidence
intervals for single coordinates of the fitted parameter.
"""

from .errors import (
    DegenerateInformationError,
    LpInfeasibleError,
    LpUnboundedError,
    UnsupportedOperationError,
)
from .sparsity import hard_truncate, top_support
from .models import (
    GaussianMixture,
    GaussianMixtureData,
    MissingCovariateData,
    MissingCovariateRegression,
    MixtureRegression,
    MixtureRegressionData,
)
from .lp import LpSolution, clime_inverse, dantzig_direction, solve_lp
from .em import EmConfig, EmTrace, run_em, run_em_resampled
from .inference import (
    InferenceConfig,
    InferenceResult,
    info_quadratic_form,
    score_function,
    score_test,
    std_normal_cdf,
    std_normal_quantile,
    wald_estimator,
    wald_test,
)
from .datagen import GenSpec, gen_dataset, make_beta_star, make_init

__all__ = [
    "DegenerateInformationError",
    "EmConfig",
    "EmTrace",
    "GaussianMixture",
    "GaussianMixtureData",
    "GenSpec",
    "InferenceConfig",
    "InferenceResult",
    "LpInfeasibleError",
    "LpSolution",
    "LpUnboundedError",
    "MissingCovariateData",
    "MissingCovariateRegression",
    "MixtureRegression",
    "MixtureRegressionData",
    "UnsupportedOperationError",
    "clime_inverse",
    "dantzig_direction",
    "gen_dataset",
    "hard_truncate",
    "info_quadratic_form",
    "make_beta_star",
    "make_init",
    "run_em",
    "run_em_resampled",
    "score_function",
    "score_test",
    "solve_lp",
    "std_normal_cdf",
    "std_normal_quantile",
    "top_support",
    "wald_estimator",
    "wald_test",
]
