"""Independent reference implementations used to cross-check the package.

Everything here is deliberately naive — per-sample double loops, exhaustive
enumeration, finite differences — so that agreement with the fast vectorized
code is meaningful evidence of correctness.
"""

import itertools
import math

import numpy as np

FEAS_TOL = 1e-8


# ---------------------------------------------------------------------------
# sparsity


def best_sparse_l2(beta, s):
    """Max l2 norm over all s-sparse restrictions of beta, by brute force."""
    beta = np.asarray(beta, dtype=float)
    d = beta.shape[0]
    best = 0.0
    for subset in itertools.combinations(range(d), s):
        out = np.zeros(d)
        out[list(subset)] = beta[list(subset)]
        best = max(best, float(np.linalg.norm(out)))
    return best


# ---------------------------------------------------------------------------
# linear programs


def lp_vertex_oracle(c, a_ub, b_ub):
    """Minimum of c.x over {a_ub x <= b_ub, x >= 0} by vertex enumeration.

    Only valid for bounded feasible regions (the caller must ensure
    boundedness, e.g. with explicit box rows).  Returns (x, objective) or
    None if infeasible.
    """
    c = np.asarray(c, dtype=float)
    a_ub = np.asarray(a_ub, dtype=float)
    b_ub = np.asarray(b_ub, dtype=float)
    m = c.shape[0]
    rows = np.vstack([a_ub, -np.eye(m)])
    rhs = np.concatenate([b_ub, np.zeros(m)])
    best = None
    for subset in itertools.combinations(range(rows.shape[0]), m):
        sub = rows[list(subset)]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        x = np.linalg.solve(sub, rhs[list(subset)])
        if np.all(a_ub @ x <= b_ub + FEAS_TOL) and np.all(x >= -FEAS_TOL):
            obj = float(c @ x)
            if best is None or obj < best[1]:
                best = (x, obj)
    return best


def l1_linf_oracle(g_mat, target, lam):
    """argmin ||w||_1 s.t. ||g_mat w - target||_inf <= lam, exhaustively.

    The minimizer of a piecewise-linear convex function over a polytope is
    attained where m independent hyperplanes among the 2m facets and the m
    coordinate planes {w_j = 0} are active; all such candidate points are
    enumerated.  Returns (w, l1) or None if infeasible.
    """
    g_mat = np.asarray(g_mat, dtype=float)
    target = np.asarray(target, dtype=float)
    m = g_mat.shape[1]
    planes = np.vstack([g_mat, g_mat, np.eye(m)])
    offsets = np.concatenate([target + lam, target - lam, np.zeros(m)])
    best = None
    for subset in itertools.combinations(range(planes.shape[0]), m):
        sub = planes[list(subset)]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        w = np.linalg.solve(sub, offsets[list(subset)])
        if np.max(np.abs(g_mat @ w - target)) <= lam + FEAS_TOL:
            l1 = float(np.sum(np.abs(w)))
            if best is None or l1 < best[1]:
                best = (w, l1)
    return best


# ---------------------------------------------------------------------------
# model surrogates, per-sample double loops


def _sigmoid(t):
    if t >= 0:
        return 1.0 / (1.0 + math.exp(-t))
    e = math.exp(t)
    return e / (1.0 + e)


def gmm_q_naive(y, sigma, beta_prime, beta):
    n, _ = y.shape
    total = 0.0
    for i in range(n):
        w = _sigmoid(2.0 * float(np.dot(beta, y[i])) / sigma**2)
        plus = float(np.sum((y[i] - beta_prime) ** 2))
        minus = float(np.sum((y[i] + beta_prime) ** 2))
        total += w * plus + (1.0 - w) * minus
    return -0.5 * total / n


def mr_q_naive(x, y, sigma, beta_prime, beta):
    n, _ = x.shape
    total = 0.0
    for i in range(n):
        w = _sigmoid(2.0 * y[i] * float(np.dot(beta, x[i])) / sigma**2)
        fit = float(np.dot(beta_prime, x[i]))
        total += w * (y[i] - fit) ** 2 + (1.0 - w) * (y[i] + fit) ** 2
    return -0.5 * total / n


def rmc_q_naive(x, mask, y, sigma, beta_prime, beta):
    n, d = x.shape
    total = 0.0
    for i in range(n):
        z = mask[i]
        x_obs = z * x[i]
        beta_miss = (1.0 - z) * beta
        tau2 = sigma**2 + float(np.dot(beta_miss, beta_miss))
        resid = y[i] - float(np.dot(x_obs, beta))
        m = x_obs + (resid / tau2) * beta_miss
        k_mat = (
            np.diag(1.0 - z)
            + np.outer(m, m)
            - np.outer(beta_miss, beta_miss) / tau2
        )
        total += y[i] * float(np.dot(m, beta_prime)) - 0.5 * float(
            beta_prime @ k_mat @ beta_prime
        )
    return total / n


# ---------------------------------------------------------------------------
# finite differences


def fd_gradient(fun, beta, h=1e-6):
    """Central finite-difference gradient of a scalar function."""
    beta = np.asarray(beta, dtype=float)
    grad = np.zeros_like(beta)
    for j in range(beta.shape[0]):
        e = np.zeros_like(beta)
        e[j] = h
        grad[j] = (fun(beta + e) - fun(beta - e)) / (2.0 * h)
    return grad


def fd_directional(fun_vec, beta, v, h=1e-6):
    """Central difference of a vector function along direction v."""
    beta = np.asarray(beta, dtype=float)
    v = np.asarray(v, dtype=float)
    return (fun_vec(beta + h * v) - fun_vec(beta - h * v)) / (2.0 * h)
