import numpy as np
import pytest

from conftest import random_gmm, random_rmc
from truncem.em import EmConfig, EmTrace, run_em, run_em_resampled
from truncem.errors import UnsupportedOperationError
from truncem.models import GaussianMixture, GaussianMixtureData
from truncem.sparsity import hard_truncate, top_support


def test_config_validation():
    with pytest.raises(ValueError):
        EmConfig(s_hat=0, n_iter=1)
    with pytest.raises(ValueError):
        EmConfig(s_hat=1, n_iter=-1)
    with pytest.raises(ValueError):
        EmConfig(s_hat=1, n_iter=1, m_step="newton")
    with pytest.raises(ValueError):
        EmConfig(s_hat=1, n_iter=1, m_step="gradient", eta=-1.0)


def test_zero_iterations_returns_truncated_init(rng):
    model = random_gmm(rng)
    init = rng.standard_normal(model.dim)
    trace = run_em(model, init, EmConfig(s_hat=2, n_iter=0))
    assert len(trace.iterates) == 1
    expect = hard_truncate(init, top_support(init, 2))
    assert np.array_equal(trace.iterates[0], expect)
    assert np.array_equal(trace.estimate, expect)
    assert len(trace.logliks) == 1
    assert trace.half_iterates == [] and trace.supports == []


def test_iterates_are_sparse_and_supports_consistent(rng):
    model = random_gmm(rng, n=30, d=8)
    init = rng.standard_normal(8)
    cfg = EmConfig(s_hat=3, n_iter=6)
    trace = run_em(model, init, cfg)
    assert len(trace.iterates) == 7
    for beta in trace.iterates:
        assert np.count_nonzero(beta) <= 3
    for half, support, nxt in zip(
        trace.half_iterates, trace.supports, trace.iterates[1:]
    ):
        assert np.array_equal(support, top_support(half, 3))
        assert np.array_equal(nxt, hard_truncate(half, support))


def test_determinism_bit_identical(rng):
    model = random_gmm(rng, n=25, d=6)
    init = rng.standard_normal(6)
    cfg = EmConfig(s_hat=2, n_iter=5)
    t1 = run_em(model, init, cfg)
    t2 = run_em(model, init, cfg)
    for a, b in zip(t1.iterates, t2.iterates):
        assert np.array_equal(a, b)
    assert t1.logliks == t2.logliks


def test_full_support_exact_em_ascends(rng):
    for _ in range(20):
        model = random_gmm(rng, n=15, d=4)
        init = rng.standard_normal(4)
        trace = run_em(model, init, EmConfig(s_hat=4, n_iter=20))
        diffs = np.diff(trace.logliks)
        assert np.all(diffs >= -1e-9)


def test_mismatched_resample_flag(rng):
    model = random_gmm(rng)
    init = np.ones(model.dim)
    with pytest.raises(ValueError):
        run_em(model, init, EmConfig(s_hat=2, n_iter=1, resample=True))
    with pytest.raises(ValueError):
        run_em_resampled(model, init, EmConfig(s_hat=2, n_iter=1))


def test_exact_m_step_rejected_for_rmc(rng):
    model = random_rmc(rng)
    with pytest.raises(UnsupportedOperationError):
        run_em(model, np.ones(model.dim), EmConfig(s_hat=2, n_iter=1))


def test_init_shape_and_s_hat_checked(rng):
    model = random_gmm(rng, d=4)
    with pytest.raises(ValueError):
        run_em(model, np.ones(5), EmConfig(s_hat=2, n_iter=1))
    with pytest.raises(ValueError):
        run_em(model, np.ones(4), EmConfig(s_hat=5, n_iter=1))


def test_stop_tol_truncates_trace(rng):
    # a noiseless-ish instance converges immediately, so the tolerance
    # stops the loop well before n_iter
    beta_star = np.array([3.0, -2.0, 0.0, 0.0])
    signs = rng.choice([-1.0, 1.0], 40)
    y = signs[:, None] * beta_star + 1e-4 * rng.standard_normal((40, 4))
    model = GaussianMixture(GaussianMixtureData(y, 1e-4))
    cfg = EmConfig(s_hat=2, n_iter=50, stop_tol=1e-10)
    trace = run_em(model, beta_star + 0.01, cfg)
    assert len(trace.iterates) < 51


def test_oracle_recovery_tiny_noise(rng):
    d, n, sigma = 10, 50, 1e-6
    beta_star = np.zeros(d)
    beta_star[:2] = [1.5, -2.0]
    signs = rng.choice([-1.0, 1.0], n)
    y = signs[:, None] * beta_star + sigma * rng.standard_normal((n, d))
    model = GaussianMixture(GaussianMixtureData(y, sigma))
    init = beta_star + 0.1 * rng.standard_normal(d)
    trace = run_em(model, init, EmConfig(s_hat=2, n_iter=1))
    beta1 = trace.iterates[1]
    if beta1 @ beta_star < 0:
        beta1 = -beta1
    assert np.linalg.norm(beta1 - beta_star) <= 1e-3


# ---------------------------------------------------------------------------
# resampled variant


def test_resampled_block_rule(rng):
    # n=10, T=3: blocks {0..2}, {3..5}, {6..8}; sample 9 unused
    model = random_gmm(rng, n=10, d=4)
    seen = []
    original_subset = model.subset

    def spying_subset(indices):
        seen.append(np.asarray(indices))
        return original_subset(indices)

    model.subset = spying_subset
    cfg = EmConfig(s_hat=2, n_iter=3, resample=True)
    run_em_resampled(model, rng.standard_normal(4), cfg)
    assert [s.tolist() for s in seen] == [[0, 1, 2], [3, 4, 5], [6, 7, 8]]


def test_resampled_single_block_matches_plain(rng):
    model = random_gmm(rng, n=12, d=5)
    init = rng.standard_normal(5)
    plain = run_em(model, init, EmConfig(s_hat=2, n_iter=1))
    res = run_em_resampled(
        model, init, EmConfig(s_hat=2, n_iter=1, resample=True)
    )
    for a, b in zip(plain.iterates, res.iterates):
        assert np.array_equal(a, b)


def test_resampled_too_many_blocks(rng):
    model = random_gmm(rng, n=3, d=4)
    cfg = EmConfig(s_hat=2, n_iter=5, resample=True)
    with pytest.raises(ValueError):
        run_em_resampled(model, np.ones(4), cfg)


def test_resampled_error_matches_plain_at_block_size(rng):
    # the resampled loop's final M-step sees one block of n/T samples, so
    # its error is comparable to a plain run on a block-sized dataset
    d, n, n_iter, s = 20, 1000, 5, 3
    block = n // n_iter
    beta_star = np.zeros(d)
    beta_star[:s] = [4.0, 4.0, 6.0]

    def err(beta):
        return min(
            np.linalg.norm(beta - beta_star), np.linalg.norm(beta + beta_star)
        )

    errs_res, errs_block = [], []
    for _ in range(10):
        signs = rng.choice([-1.0, 1.0], n)
        y = signs[:, None] * beta_star + rng.standard_normal((n, d))
        model = GaussianMixture(GaussianMixtureData(y, 1.0))
        init = beta_star + 0.125 * np.linalg.norm(
            beta_star
        ) * rng.standard_normal(d) / np.sqrt(d)
        res = run_em_resampled(
            model, init, EmConfig(s_hat=s, n_iter=n_iter, resample=True)
        )
        small = run_em(
            model.subset(np.arange(block)),
            init,
            EmConfig(s_hat=s, n_iter=n_iter),
        )
        errs_res.append(err(res.estimate))
        errs_block.append(err(small.estimate))
    rms_res = float(np.sqrt(np.mean(np.square(errs_res))))
    rms_block = float(np.sqrt(np.mean(np.square(errs_block))))
    assert rms_res <= 2.0 * rms_block


def test_trace_estimate_property():
    trace = EmTrace(iterates=[np.zeros(2), np.ones(2)])
    assert np.array_equal(trace.estimate, np.ones(2))
