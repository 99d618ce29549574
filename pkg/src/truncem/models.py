"""The three latent-variable models behind one uniform interface.

Each model exposes the EM surrogate ``q_value``, its first-slot gradient
``grad_q`` evaluated on the diagonal, exact and gradient M-steps, the
curvature matrix used for inference, and the observed-data log
likelihood.

Normalization convention
------------------------
The surrogate is the conditional expectation of the complete-data log
likelihood with the global ``1/(2 sigma^2)`` prefactor dropped, matching
the closed forms used by the EM updates (the exact M-step and the unit
stepsize of the gradient M-step are natural in this scaling).  As a
consequence ``grad_q(beta)`` equals ``sigma^2 * grad loglik(beta) / n``
exactly, and ``curvature_matrix(beta)`` equals ``sigma^2 / n`` times the
Hessian of the log likelihood.  The inference module divides by
``sigma^2`` where the Fisher scaling matters.

The posterior weight of the positive mixture component is the logistic
sigmoid of ``2 <beta, y> / sigma^2`` (Gaussian mixture) or
``2 y <beta, x> / sigma^2`` (mixture of regression); the factor 2 is
forced by Bayes' rule for the two symmetric components.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .errors import UnsupportedOperationError
from .lp import clime_inverse

GMM = "GMM"
MR = "MR"
RMC = "RMC"


def _check_vector(beta, d, name="beta"):
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (d,):
        raise ValueError(f"{name} must have shape ({d},), got {beta.shape}")
    return beta


@dataclass(frozen=True)
class GaussianMixtureData:
    """Observations from Y = Z * beta + noise, Z a random sign."""

    y: np.ndarray  # (n, d)
    sigma: float

    def __post_init__(self):
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        if self.y.ndim != 2 or self.y.shape[0] < 1:
            raise ValueError("y must be a nonempty (n, d) matrix")
        if not np.all(np.isfinite(self.y)):
            raise ValueError("y contains non-finite entries")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")


@dataclass(frozen=True)
class MixtureRegressionData:
    """Observations from Y = Z * <X, beta> + noise, Z a random sign."""

    x: np.ndarray  # (n, d)
    y: np.ndarray  # (n,)
    sigma: float

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        if self.x.ndim != 2 or self.x.shape[0] < 1:
            raise ValueError("x must be a nonempty (n, d) matrix")
        if self.y.shape != (self.x.shape[0],):
            raise ValueError("y must have shape (n,)")
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.y))):
            raise ValueError("data contains non-finite entries")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")


@dataclass(frozen=True)
class MissingCovariateData:
    """Linear regression where covariate entries are missing at random.

    ``mask[i, j] == 1`` iff ``x[i, j]`` was observed; values of ``x`` at
    unobserved coordinates are ignored.  ``p_missing`` is metadata (the
    declared per-coordinate missing probability), not used by the fit.
    """

    x: np.ndarray  # (n, d)
    mask: np.ndarray  # (n, d) of {0, 1}
    y: np.ndarray  # (n,)
    sigma: float
    p_missing: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "mask", np.asarray(self.mask, dtype=float))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        if self.x.ndim != 2 or self.x.shape[0] < 1:
            raise ValueError("x must be a nonempty (n, d) matrix")
        if self.mask.shape != self.x.shape:
            raise ValueError("mask must match x in shape")
        if not np.all((self.mask == 0) | (self.mask == 1)):
            raise ValueError("mask entries must be 0 or 1")
        if self.y.shape != (self.x.shape[0],):
            raise ValueError("y must have shape (n,)")
        if not np.all(np.isfinite(self.y)):
            raise ValueError("y contains non-finite entries")
        if not np.all(np.isfinite(self.x[self.mask == 1])):
            raise ValueError("observed x entries must be finite")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if not 0 <= self.p_missing < 1:
            raise ValueError("p_missing must lie in [0, 1)")


class GaussianMixture:
    """Symmetric two-component Gaussian mixture with known noise level."""

    tag = GMM

    def __init__(self, data: GaussianMixtureData):
        self.data = data

    @property
    def n_samples(self):
        return self.data.y.shape[0]

    @property
    def dim(self):
        return self.data.y.shape[1]

    @property
    def sigma(self):
        return self.data.sigma

    def subset(self, indices):
        return GaussianMixture(
            GaussianMixtureData(self.data.y[indices], self.data.sigma)
        )

    def _weights(self, beta):
        # posterior probability of the positive component, per sample
        beta = _check_vector(beta, self.dim)
        return expit(2.0 * (self.data.y @ beta) / self.sigma**2)

    def posterior_weight(self, beta, i):
        if not 0 <= i < self.n_samples:
            raise ValueError("sample index out of range")
        return float(self._weights(beta)[i])

    def q_value(self, beta_prime, beta):
        beta_prime = _check_vector(beta_prime, self.dim, "beta_prime")
        y = self.data.y
        w = self._weights(beta)
        plus = np.sum((y - beta_prime) ** 2, axis=1)
        minus = np.sum((y + beta_prime) ** 2, axis=1)
        return float(-0.5 * np.mean(w * plus + (1.0 - w) * minus))

    def grad_q(self, beta):
        beta = _check_vector(beta, self.dim)
        w = self._weights(beta)
        return (2.0 * w - 1.0) @ self.data.y / self.n_samples - beta

    def m_step_exact(self, beta):
        w = self._weights(beta)
        return (2.0 * w - 1.0) @ self.data.y / self.n_samples

    def m_step_gradient(self, beta, eta):
        if eta < 0:
            raise ValueError("eta must be nonnegative")
        return np.asarray(beta, dtype=float) + eta * self.grad_q(beta)

    def curvature_matrix(self, beta):
        y = self.data.y
        w = self._weights(beta)
        nu = (4.0 / self.sigma**2) * w * (1.0 - w)
        t_mat = (y * nu[:, None]).T @ y / self.n_samples - np.eye(self.dim)
        return 0.5 * (t_mat + t_mat.T)

    def loglik(self, beta):
        beta = _check_vector(beta, self.dim)
        y = self.data.y
        s2 = self.sigma**2
        lp = -np.sum((y - beta) ** 2, axis=1) / (2.0 * s2)
        lm = -np.sum((y + beta) ** 2, axis=1) / (2.0 * s2)
        const = -0.5 * self.dim * np.log(2.0 * np.pi * s2) - np.log(2.0)
        return float(np.sum(np.logaddexp(lp, lm) + const))


class MixtureRegression:
    """Symmetric two-component mixture of linear regressions.

    The exact M-step premultiplies by a CLIME estimate of the inverse
    covariance of the design; the estimate is computed once per
    (dataset, clime_lambda) pair and cached.
    """

    tag = MR

    def __init__(self, data: MixtureRegressionData, clime_lambda=None):
        self.data = data
        if clime_lambda is None:
            n, d = data.x.shape
            clime_lambda = 2.0 * np.sqrt(np.log(d) / n)
        if clime_lambda < 0:
            raise ValueError("clime_lambda must be nonnegative")
        self.clime_lambda = float(clime_lambda)
        self._theta_hat = None

    @property
    def n_samples(self):
        return self.data.x.shape[0]

    @property
    def dim(self):
        return self.data.x.shape[1]

    @property
    def sigma(self):
        return self.data.sigma

    def subset(self, indices):
        return MixtureRegression(
            MixtureRegressionData(
                self.data.x[indices], self.data.y[indices], self.data.sigma
            ),
            clime_lambda=self.clime_lambda,
        )

    def design_covariance(self):
        x = self.data.x
        return x.T @ x / self.n_samples

    def clime_theta(self):
        """Cached CLIME estimate of the inverse design covariance."""
        if self._theta_hat is None:
            self._theta_hat = clime_inverse(self.design_covariance(), self.clime_lambda)
        return self._theta_hat

    def _weights(self, beta):
        beta = _check_vector(beta, self.dim)
        margin = self.data.y * (self.data.x @ beta)
        return expit(2.0 * margin / self.sigma**2)

    def posterior_weight(self, beta, i):
        if not 0 <= i < self.n_samples:
            raise ValueError("sample index out of range")
        return float(self._weights(beta)[i])

    def q_value(self, beta_prime, beta):
        beta_prime = _check_vector(beta_prime, self.dim, "beta_prime")
        w = self._weights(beta)
        fit = self.data.x @ beta_prime
        plus = (self.data.y - fit) ** 2
        minus = (self.data.y + fit) ** 2
        return float(-0.5 * np.mean(w * plus + (1.0 - w) * minus))

    def grad_q(self, beta):
        beta = _check_vector(beta, self.dim)
        w = self._weights(beta)
        resid = (2.0 * w - 1.0) * self.data.y - self.data.x @ beta
        return self.data.x.T @ resid / self.n_samples

    def m_step_exact(self, beta):
        w = self._weights(beta)
        moment = self.data.x.T @ ((2.0 * w - 1.0) * self.data.y) / self.n_samples
        return self.clime_theta() @ moment

    def m_step_gradient(self, beta, eta):
        if eta < 0:
            raise ValueError("eta must be nonnegative")
        return np.asarray(beta, dtype=float) + eta * self.grad_q(beta)

    def curvature_matrix(self, beta):
        x, y = self.data.x, self.data.y
        w = self._weights(beta)
        nu = (4.0 / self.sigma**2) * w * (1.0 - w)
        weighted = (x * (nu * y**2)[:, None]).T @ x / self.n_samples
        t_mat = weighted - self.design_covariance()
        return 0.5 * (t_mat + t_mat.T)

    def loglik(self, beta):
        beta = _check_vector(beta, self.dim)
        fit = self.data.x @ beta
        s2 = self.sigma**2
        lp = -((self.data.y - fit) ** 2) / (2.0 * s2)
        lm = -((self.data.y + fit) ** 2) / (2.0 * s2)
        const = -0.5 * np.log(2.0 * np.pi * s2) - np.log(2.0)
        return float(np.sum(np.logaddexp(lp, lm) + const))


class MissingCovariateRegression:
    """Linear regression with covariates missing completely at random.

    The latent variable is the vector of unobserved covariates.  Only the
    gradient M-step is available: the per-sample conditional second
    moment makes the exact maximizer require a d x d solve that is not
    well posed in high dimensions, and no curvature matrix is defined for
    this model, so inference is unavailable.
    """

    tag = RMC

    def __init__(self, data: MissingCovariateData):
        self.data = data

    @property
    def n_samples(self):
        return self.data.x.shape[0]

    @property
    def dim(self):
        return self.data.x.shape[1]

    @property
    def sigma(self):
        return self.data.sigma

    def subset(self, indices):
        d = self.data
        return MissingCovariateRegression(
            MissingCovariateData(
                d.x[indices], d.mask[indices], d.y[indices], d.sigma, d.p_missing
            )
        )

    def _conditional_moments(self, beta):
        """Per-sample posterior mean m_i of x_i and the pieces of its
        second moment, given the observed coordinates and y_i."""
        beta = _check_vector(beta, self.dim)
        z = self.data.mask
        x_obs = z * self.data.x
        beta_miss = (1.0 - z) * beta  # (n, d)
        tau2 = self.sigma**2 + np.sum(beta_miss**2, axis=1)  # (n,)
        resid = self.data.y - x_obs @ beta  # (n,)
        m = x_obs + (resid / tau2)[:, None] * beta_miss
        return m, beta_miss, tau2, resid

    def posterior_weight(self, beta, i):
        raise UnsupportedOperationError(
            "posterior mixture weight is undefined for missing-covariate "
            "regression (the latent variable is continuous)"
        )

    def q_value(self, beta_prime, beta):
        beta_prime = _check_vector(beta_prime, self.dim, "beta_prime")
        m, beta_miss, tau2, _ = self._conditional_moments(beta)
        z = self.data.mask
        lin = self.data.y * (m @ beta_prime)
        # quadratic form in the conditional second moment of x
        quad = (
            (1.0 - z) @ (beta_prime**2)
            + (m @ beta_prime) ** 2
            - (beta_miss @ beta_prime) ** 2 / tau2
        )
        return float(np.mean(lin - 0.5 * quad))

    def grad_q(self, beta):
        m, beta_miss, tau2, _ = self._conditional_moments(beta)
        z = self.data.mask
        k_beta = (
            beta_miss
            + m * (m @ beta)[:, None]
            - beta_miss * ((beta_miss @ beta) / tau2)[:, None]
        )
        return np.mean(self.data.y[:, None] * m - k_beta, axis=0)

    def m_step_exact(self, beta):
        raise UnsupportedOperationError(
            "exact M-step is unavailable for missing-covariate regression: "
            "the per-sample second-moment matrix need not be invertible"
        )

    def m_step_gradient(self, beta, eta):
        if eta < 0:
            raise ValueError("eta must be nonnegative")
        return np.asarray(beta, dtype=float) + eta * self.grad_q(beta)

    def curvature_matrix(self, beta):
        raise UnsupportedOperationError(
            "no curvature matrix is defined for missing-covariate regression"
        )

    def loglik(self, beta):
        # y_i | observed x_i is Gaussian with mean <beta, x_obs> and
        # variance sigma^2 + ||beta restricted to the missing coords||^2
        _, _, tau2, resid = self._conditional_moments(beta)
        return float(np.sum(-0.5 * np.log(2.0 * np.pi * tau2) - resid**2 / (2.0 * tau2)))
