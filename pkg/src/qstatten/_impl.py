"""Reconstruction kernels, written so the same source compiles under
numba and also runs as plain numpy.

kernels.py rebinds every function here with numba.njit when that
backend is active; callers must always import through kernels, never
from this module directly. Keep the code inside restricted to
constructs both paths support: numpy arrays, scalars, explicit loops.
"""

import numpy as np


def rho_from_params(t, d):
    """Normalized T^dag T from the packed parameter vector.

    Layout: d diagonal reals first, then the strictly-lower entries in
    row-major order as (real, imag) pairs.
    """
    T = np.zeros((d, d), dtype=np.complex128)
    for i in range(d):
        T[i, i] = t[i]
    k = d
    for r in range(1, d):
        for c in range(r):
            T[r, c] = complex(t[k], t[k + 1])
            k += 2
    G = np.conj(T).T @ T
    tr = 0.0
    for i in range(d):
        tr += G[i, i].real
    return G / tr


def povm_probs(povm_t_flat, rho):
    """Outcome probabilities Tr(M_k rho) for every operator at once."""
    return np.real(povm_t_flat @ rho.flatten())


def ls_value(povm_t_flat, m, n_model, d, t):
    """Sum of squared residuals between modeled and measured counts."""
    q = povm_probs(povm_t_flat, rho_from_params(t, d))
    s = 0.0
    for k in range(m.shape[0]):
        diff = n_model * q[k] - m[k]
        s += diff * diff
    return s


def ls_gradient(povm_t_flat, m, n_model, d, t, g):
    """Central finite differences with per-coordinate relative step."""
    for j in range(t.shape[0]):
        tj = t[j]
        h = 1e-6 * max(1.0, abs(tj))
        t[j] = tj + h
        fp = ls_value(povm_t_flat, m, n_model, d, t)
        t[j] = tj - h
        fm = ls_value(povm_t_flat, m, n_model, d, t)
        t[j] = tj
        g[j] = (fp - fm) / (2.0 * h)


def bfgs_minimize(povm_t_flat, m, n_model, d, t0, max_iter, ftol, xtol):
    """Quasi-Newton descent with backtracking line search.

    Returns (t, f, iterations, converged). The inverse-Hessian update is
    skipped (and the matrix reset) whenever the curvature condition
    s.y > 0 fails, which keeps every search direction a descent one.
    """
    n = t0.shape[0]
    t = t0.copy()
    g = np.empty(n)
    f = ls_value(povm_t_flat, m, n_model, d, t)
    ls_gradient(povm_t_flat, m, n_model, d, t, g)
    H = np.eye(n)
    g_new = np.empty(n)
    iterations = 0
    if np.max(np.abs(g)) <= 1e-8 * max(1.0, f):
        return t, f, iterations, True
    for it in range(max_iter):
        iterations = it + 1
        p = -(H @ g)
        gtp = np.dot(g, p)
        if gtp >= 0.0:
            H = np.eye(n)
            p = -g
            gtp = np.dot(g, p)
        step = 1.0
        f_new = f
        accepted = False
        for _ls in range(40):
            f_new = ls_value(povm_t_flat, m, n_model, d, t + step * p)
            if f_new <= f + 1e-4 * step * gtp:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            # no descent at 2^-40 of the step: numerically stationary
            return t, f, iterations, True
        s = step * p
        t = t + s
        ls_gradient(povm_t_flat, m, n_model, d, t, g_new)
        y = g_new - g
        sy = np.dot(s, y)
        if sy > 1e-12:
            inv = 1.0 / sy
            hy = H @ y
            yhy = np.dot(y, hy)
            H = (
                H
                + ((sy + yhy) * inv * inv) * np.outer(s, s)
                - inv * (np.outer(hy, s) + np.outer(s, hy))
            )
        else:
            H = np.eye(n)
        df = f - f_new
        f = f_new
        for j in range(n):
            g[j] = g_new[j]
        if df <= ftol * max(1.0, abs(f)):
            return t, f, iterations, True
        if np.max(np.abs(s)) <= xtol:
            return t, f, iterations, True
        if np.max(np.abs(g)) <= 1e-8 * max(1.0, f):
            return t, f, iterations, True
    return t, f, iterations, False


def reconstruct_ls(povm_t_flat, m, n_model, d, starts, max_iter, ftol, xtol):
    """Multi-start driver. First restart wins ties within 1e-9."""
    t_best = starts[0].copy()
    f_best = np.inf
    total_iterations = 0
    converged_any = False
    best_restart = 0
    for r in range(starts.shape[0]):
        t, f, iters, conv = bfgs_minimize(
            povm_t_flat, m, n_model, d, starts[r], max_iter, ftol, xtol
        )
        total_iterations += iters
        if conv:
            converged_any = True
        if f < f_best - 1e-9:
            f_best = f
            t_best = t
            best_restart = r
    return t_best, f_best, total_iterations, converged_any, best_restart
