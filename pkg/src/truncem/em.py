"""The truncated EM loop and its data-splitting variant."""

from dataclasses import dataclass, field

import numpy as np

from .errors import UnsupportedOperationError
from .sparsity import hard_truncate, top_support

EXACT = "exact"
GRADIENT = "gradient"


@dataclass
class EmConfig:
    """Knobs of the truncated EM loop.

    s_hat: number of coordinates kept by the truncation step.
    n_iter: number of EM iterations (the loop always runs this many
        unless ``stop_tol`` is set).
    m_step: "exact" or "gradient".
    eta: stepsize for the gradient M-step.
    resample: use a fresh contiguous data block per iteration.
    stop_tol: optional early-stopping threshold on the l2 change between
        consecutive iterates; off by default to keep the iteration count
        fixed.
    """

    s_hat: int
    n_iter: int
    m_step: str = EXACT
    eta: float = 1.0
    resample: bool = False
    stop_tol: float | None = None

    def __post_init__(self):
        if self.s_hat < 1:
            raise ValueError("s_hat must be >= 1")
        if self.n_iter < 0:
            raise ValueError("n_iter must be >= 0")
        if self.m_step not in (EXACT, GRADIENT):
            raise ValueError(f"unknown m_step {self.m_step!r}")
        if self.m_step == GRADIENT and not self.eta >= 0:
            raise ValueError("eta must be nonnegative")


@dataclass
class EmTrace:
    """Full iterate history of one EM run.

    ``iterates`` holds beta^(0) ... beta^(T); ``half_iterates`` the raw
    M-step outputs; ``supports`` the truncation supports, with
    ``supports[t] == top_support(half_iterates[t], s_hat)``.
    """

    iterates: list = field(default_factory=list)
    half_iterates: list = field(default_factory=list)
    supports: list = field(default_factory=list)
    logliks: list = field(default_factory=list)

    @property
    def estimate(self):
        return self.iterates[-1]


def _check_setup(model, init, cfg):
    init = np.asarray(init, dtype=float)
    if init.shape != (model.dim,):
        raise ValueError(f"init must have shape ({model.dim},)")
    if cfg.s_hat > model.dim:
        raise ValueError("s_hat exceeds the parameter dimension")
    if cfg.m_step == EXACT and model.tag == "RMC":
        raise UnsupportedOperationError(
            "exact M-step is unavailable for missing-covariate regression"
        )
    return init


def _m_step(model, beta, cfg):
    if cfg.m_step == EXACT:
        return model.m_step_exact(beta)
    return model.m_step_gradient(beta, cfg.eta)


def run_em(model, init, cfg: EmConfig):
    """Truncated EM: alternate the M-step with hard truncation.

    Returns an EmTrace with n_iter + 1 iterates (fewer only if
    ``cfg.stop_tol`` triggers early stopping).
    """
    if cfg.resample:
        raise ValueError("cfg.resample is set; use run_em_resampled")
    init = _check_setup(model, init, cfg)
    trace = EmTrace()
    beta = hard_truncate(init, top_support(init, cfg.s_hat))
    trace.iterates.append(beta)
    trace.logliks.append(model.loglik(beta))
    for _ in range(cfg.n_iter):
        half = _m_step(model, beta, cfg)
        support = top_support(half, cfg.s_hat)
        nxt = hard_truncate(half, support)
        trace.half_iterates.append(half)
        trace.supports.append(support)
        trace.iterates.append(nxt)
        trace.logliks.append(model.loglik(nxt))
        if cfg.stop_tol is not None and np.linalg.norm(nxt - beta) < cfg.stop_tol:
            beta = nxt
            break
        beta = nxt
    return trace


def run_em_resampled(model, init, cfg: EmConfig):
    """Truncated EM where iteration t sees only the t-th data block.

    The first ``n_iter * (n // n_iter)`` samples are split into
    ``n_iter`` contiguous blocks in the given order; trailing samples are
    discarded.  Log likelihoods are evaluated on the full dataset so the
    trace is comparable with ``run_em``.
    """
    if not cfg.resample:
        raise ValueError("cfg.resample is not set; use run_em")
    if cfg.n_iter < 1:
        raise ValueError("resampled EM needs n_iter >= 1")
    init = _check_setup(model, init, cfg)
    block = model.n_samples // cfg.n_iter
    if block == 0:
        raise ValueError(
            f"cannot split {model.n_samples} samples into {cfg.n_iter} blocks"
        )
    trace = EmTrace()
    beta = hard_truncate(init, top_support(init, cfg.s_hat))
    trace.iterates.append(beta)
    trace.logliks.append(model.loglik(beta))
    for t in range(cfg.n_iter):
        sub = model.subset(np.arange(t * block, (t + 1) * block))
        half = _m_step(sub, beta, cfg)
        support = top_support(half, cfg.s_hat)
        nxt = hard_truncate(half, support)
        trace.half_iterates.append(half)
        trace.supports.append(support)
        trace.iterates.append(nxt)
        trace.logliks.append(model.loglik(nxt))
        if cfg.stop_tol is not None and np.linalg.norm(nxt - beta) < cfg.stop_tol:
            beta = nxt
            break
        beta = nxt
    return trace
