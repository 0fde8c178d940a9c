"""Jit-compiled Nelder-Mead core for the violation search.

The objective is the (negated) operator expectation evaluated by
contracting the state's correlation tensor with the six measurement
directions, so one evaluation costs a few hundred flops.  Each restart
runs an independent textbook simplex search over the twelve spherical
angles; the kernels are compiled once and cached on disk.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _expectation(tensor, idx1, idx2, idx3, weights, angles, scratch):
    """Weighted sum of triple contractions u_i . R . (u_j x u_k)."""
    for k in range(6):
        theta = angles[2 * k]
        phi = angles[2 * k + 1]
        st = np.sin(theta)
        scratch[k, 0] = st * np.cos(phi)
        scratch[k, 1] = st * np.sin(phi)
        scratch[k, 2] = np.cos(theta)
    total = 0.0
    for t in range(idx1.shape[0]):
        a = scratch[idx1[t]]
        b = scratch[idx2[t]]
        c = scratch[idx3[t]]
        acc = 0.0
        for i in range(3):
            for j in range(3):
                ab = a[i] * b[j]
                acc += ab * (
                    tensor[i, j, 0] * c[0]
                    + tensor[i, j, 1] * c[1]
                    + tensor[i, j, 2] * c[2]
                )
        total += weights[t] * acc
    return total


@njit(cache=True, nogil=True)
def _nm_minimize(tensor, idx1, idx2, idx3, weights, x0, xatol, fatol, maxiter, step):
    """Nelder-Mead on f = -expectation starting from x0; returns (x, f, iters)."""
    n = x0.shape[0]
    scratch = np.empty((6, 3))
    sim = np.empty((n + 1, n))
    fsim = np.empty(n + 1)
    for v in range(n + 1):
        for j in range(n):
            sim[v, j] = x0[j]
        if v > 0:
            sim[v, v - 1] += step
        fsim[v] = -_expectation(tensor, idx1, idx2, idx3, weights, sim[v], scratch)
    order = np.argsort(fsim, kind="mergesort")
    sim = sim[order]
    fsim = fsim[order]

    refl, expand, contract, shrink = 1.0, 2.0, 0.5, 0.5
    xbar = np.empty(n)
    cand = np.empty(n)
    it = 0
    while it < maxiter:
        fspread = 0.0
        xspread = 0.0
        for v in range(1, n + 1):
            df = abs(fsim[v] - fsim[0])
            if df > fspread:
                fspread = df
            for j in range(n):
                dx = abs(sim[v, j] - sim[0, j])
                if dx > xspread:
                    xspread = dx
        if fspread <= fatol and xspread <= xatol:
            break
        it += 1

        for j in range(n):
            acc = 0.0
            for v in range(n):
                acc += sim[v, j]
            xbar[j] = acc / n
        for j in range(n):
            cand[j] = (1.0 + refl) * xbar[j] - refl * sim[n, j]
        fxr = -_expectation(tensor, idx1, idx2, idx3, weights, cand, scratch)
        do_shrink = False
        if fxr < fsim[0]:
            xr = cand.copy()
            for j in range(n):
                cand[j] = (1.0 + refl * expand) * xbar[j] - refl * expand * sim[n, j]
            fxe = -_expectation(tensor, idx1, idx2, idx3, weights, cand, scratch)
            if fxe < fxr:
                sim[n] = cand
                fsim[n] = fxe
            else:
                sim[n] = xr
                fsim[n] = fxr
        elif fxr < fsim[n - 1]:
            sim[n] = cand
            fsim[n] = fxr
        else:
            if fxr < fsim[n]:
                for j in range(n):
                    cand[j] = (1.0 + contract * refl) * xbar[j] - contract * refl * sim[n, j]
                fxc = -_expectation(tensor, idx1, idx2, idx3, weights, cand, scratch)
                if fxc <= fxr:
                    sim[n] = cand
                    fsim[n] = fxc
                else:
                    do_shrink = True
            else:
                for j in range(n):
                    cand[j] = (1.0 - contract) * xbar[j] + contract * sim[n, j]
                fxc = -_expectation(tensor, idx1, idx2, idx3, weights, cand, scratch)
                if fxc < fsim[n]:
                    sim[n] = cand
                    fsim[n] = fxc
                else:
                    do_shrink = True
        if do_shrink:
            for v in range(1, n + 1):
                for j in range(n):
                    sim[v, j] = sim[0, j] + shrink * (sim[v, j] - sim[0, j])
                fsim[v] = -_expectation(tensor, idx1, idx2, idx3, weights, sim[v], scratch)
        order = np.argsort(fsim, kind="mergesort")
        sim = sim[order]
        fsim = fsim[order]
    return sim[0], fsim[0], it


@njit(cache=True, nogil=True)
def run_restarts(tensor, idx1, idx2, idx3, weights, starts, xatol, fatol, maxiter, step):
    """Run one independent simplex search per start row; returns all results."""
    count = starts.shape[0]
    best_x = np.empty((count, starts.shape[1]))
    best_f = np.empty(count)
    iters = np.empty(count, dtype=np.int64)
    for r in range(count):
        x, f, it = _nm_minimize(
            tensor, idx1, idx2, idx3, weights, starts[r], xatol, fatol, maxiter, step
        )
        best_x[r] = x
        best_f[r] = f
        iters[r] = it
    return best_x, best_f, iters


def warmup() -> None:
    """Trigger jit compilation with a toy problem (cached across processes)."""
    tensor = np.zeros((3, 3, 3))
    tensor[2, 2, 2] = 1.0
    idx = np.array([0], dtype=np.int64)
    starts = np.full((1, 12), 0.3)
    run_restarts(
        tensor, idx, np.array([1], dtype=np.int64), np.array([2], dtype=np.int64),
        np.ones(1), starts, 1e-3, 1e-3, 5, 0.25,
    )
