"""Compiled numerical kernels.

The Monte Carlo campaigns fit millions of small ridge-penalized logistic
regressions, so the Newton solver and the split-evaluation loop live here
as numba kernels.  Everything is scalar loops on float64 with a fixed
operation order: results are bit-reproducible for identical inputs, which
the campaign determinism contract relies on.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Weights pr*(1-pr) underflow for |logit| > ~37; the floor keeps the
# Hessian positive definite under (near-)perfect separation.  It changes
# the Newton path only, never the optimum (the gradient is untouched).
_W_FLOOR = 1e-10


@njit(cache=True)
def newton_logistic(X1, y, ridge, tol, max_iter):
    """Maximize the ridge-penalized log-likelihood by damped Newton steps.

    X1 carries the intercept as column 0; the ridge penalty applies to all
    coefficients except the intercept.  Convergence is declared when the
    gradient max-norm falls below ``tol``.  Returns (beta, converged,
    iterations, log_likelihood).
    """
    n, q = X1.shape
    beta = np.zeros(q)
    z = np.zeros(n)
    zn = np.zeros(n)
    pr = np.zeros(n)
    g = np.zeros(q)
    H = np.zeros((q, q))
    L = np.zeros((q, q))
    delta = np.zeros(q)
    dz = np.zeros(n)
    ll = -n * np.log(2.0)  # value at beta = 0
    converged = False
    iters = 0
    for _it in range(max_iter):
        for i in range(n):
            s = 0.0
            for j in range(q):
                s += X1[i, j] * beta[j]
            z[i] = s
            if s >= 0.0:
                pr[i] = 1.0 / (1.0 + np.exp(-s))
            else:
                e = np.exp(s)
                pr[i] = e / (1.0 + e)
        gmax = 0.0
        for j in range(q):
            s = 0.0
            for i in range(n):
                s += X1[i, j] * (y[i] - pr[i])
            if j >= 1:
                s -= ridge * beta[j]
            g[j] = s
            a = abs(s)
            if a > gmax:
                gmax = a
        if gmax < tol:
            converged = True
            break
        for a in range(q):
            for b in range(a, q):
                s = 0.0
                for i in range(n):
                    w = pr[i] * (1.0 - pr[i])
                    if w < _W_FLOOR:
                        w = _W_FLOOR
                    s += X1[i, a] * w * X1[i, b]
                H[a, b] = s
        for j in range(1, q):
            H[j, j] += ridge
        # Cholesky H = L L^T on the upper-triangle storage.
        for a in range(q):
            for b in range(a, q):
                s = H[a, b]
                for t in range(a):
                    s -= L[a, t] * L[b, t]
                if a == b:
                    L[a, a] = np.sqrt(s)
                else:
                    L[b, a] = s / L[a, a]
        for a in range(q):
            s = g[a]
            for t in range(a):
                s -= L[a, t] * delta[t]
            delta[a] = s / L[a, a]
        for a in range(q - 1, -1, -1):
            s = delta[a]
            for t in range(a + 1, q):
                s -= L[t, a] * delta[t]
            delta[a] = s / L[a, a]
        for i in range(n):
            s = 0.0
            for j in range(q):
                s += X1[i, j] * delta[j]
            dz[i] = s
        # Backtracking keeps the step inside the concave objective's
        # increase region; a full step is accepted almost always.  The
        # slack tolerates objective rounding noise: near the optimum the
        # true gain of a Newton step falls below the float64 resolution
        # of the log-likelihood, and without slack the search would
        # reject good steps and crawl.
        step = 1.0
        llnew = ll
        slack = 1e-12 * (1.0 + abs(ll))
        for _ls in range(50):
            llnew = 0.0
            for i in range(n):
                v = z[i] + step * dz[i]
                zn[i] = v
                if v > 0.0:
                    sp = v + np.log1p(np.exp(-v))
                else:
                    sp = np.log1p(np.exp(v))
                llnew += y[i] * v - sp
            pen = 0.0
            for j in range(1, q):
                bj = beta[j] + step * delta[j]
                pen += bj * bj
            llnew -= 0.5 * ridge * pen
            if llnew >= ll - slack and np.isfinite(llnew):
                break
            step *= 0.5
        for j in range(q):
            beta[j] += step * delta[j]
        ll = llnew
        iters = _it + 1
    return beta, converged, iters, ll


@njit(cache=True)
def evaluate_subset(X, y, cols, train_idx, train_off, eval_idx, eval_off,
                    ridge, tol, max_iter):
    """Train/evaluate one feature subset over a batch of split pairs.

    ``train_off``/``eval_off`` delimit each pair's row indices inside the
    concatenated index arrays.  Returns one evaluation-set accuracy per
    pair, computed with the decision rule logit >= 0 -> positive.
    """
    n_pairs = train_off.shape[0] - 1
    p = cols.shape[0]
    accs = np.empty(n_pairs)
    for s in range(n_pairs):
        t0, t1 = train_off[s], train_off[s + 1]
        nt = t1 - t0
        Xtr = np.empty((nt, p + 1))
        ytr = np.empty(nt)
        for r in range(nt):
            row = train_idx[t0 + r]
            Xtr[r, 0] = 1.0
            for j in range(p):
                Xtr[r, j + 1] = X[row, cols[j]]
            ytr[r] = y[row]
        beta, _conv, _iters, _ll = newton_logistic(Xtr, ytr, ridge, tol, max_iter)
        e0, e1 = eval_off[s], eval_off[s + 1]
        correct = 0
        for r in range(e0, e1):
            row = eval_idx[r]
            zval = beta[0]
            for j in range(p):
                zval += beta[j + 1] * X[row, cols[j]]
            pred = 1.0 if zval >= 0.0 else 0.0
            if pred == y[row]:
                correct += 1
        accs[s] = correct / (e1 - e0)
    return accs
