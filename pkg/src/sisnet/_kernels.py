"""Compiled inner loops for the Monte Carlo chain and the mean-field recursion."""

import numpy as np
from numba import njit

SAMPLER_CODES = {"X": 0, "Y": 1, "Z": 2}


@njit(cache=True)
def sis_run(indptr, indices, deg, cls, state, counts, nu, delta, max_degree,
            monophilic, sampler, n_steps, record_steps, out, seed):
    """Advance the SIS chain ``n_steps`` times in place.

    ``counts[c]`` tracks infected nodes in degree class ``c``; it is copied
    into ``out[r]`` after step ``record_steps[r]`` (step 0 is the input state).
    A negative ``seed`` continues the current compiled-RNG stream.
    """
    if seed >= 0:
        np.random.seed(seed)
    n = deg.shape[0]
    n_stubs = indices.shape[0]
    rec = 0
    n_rec = record_steps.shape[0]
    while rec < n_rec and record_steps[rec] == 0:
        out[rec, :] = counts
        rec += 1
    for step in range(1, n_steps + 1):
        if sampler == 0:
            m = np.random.randint(0, n)
        elif sampler == 1:
            m = indices[np.random.randint(0, n_stubs)]
        else:
            x = np.random.randint(0, n)
            m = indices[indptr[x] + np.random.randint(0, deg[x])]
        if state[m] == 1:
            if np.random.random() < delta:
                state[m] = 0
                counts[cls[m]] -= 1
        else:
            a = 0
            for _ in range(deg[m]):
                v = np.random.randint(0, n)
                if monophilic:
                    v = indices[indptr[v] + np.random.randint(0, deg[v])]
                a += state[v]
            if a > 0 and np.random.random() < nu * a / max_degree:
                state[m] = 1
                counts[cls[m]] += 1
        while rec < n_rec and record_steps[rec] == step:
            out[rec, :] = counts
            rec += 1


@njit(cache=True)
def meanfield_run(x, k, theta_w, step_w, nu, delta, max_degree, step_size, n_steps,
                  record_steps, out):
    """Iterate ``x <- x + step_size * w * drift(x)`` in place, recording as ``sis_run`` does."""
    rec = 0
    n_rec = record_steps.shape[0]
    K = x.shape[0]
    drift = np.empty(K)
    while rec < n_rec and record_steps[rec] == 0:
        out[rec, :] = x
        rec += 1
    for step in range(1, n_steps + 1):
        theta = 0.0
        for i in range(K):
            theta += theta_w[i] * x[i]
        for i in range(K):
            drift[i] = (1.0 - x[i]) * (nu * k[i] * theta / max_degree) - x[i] * delta
        for i in range(K):
            x[i] = x[i] + step_size * (step_w[i] * drift[i])
        while rec < n_rec and record_steps[rec] == step:
            out[rec, :] = x
            rec += 1


@njit(cache=True)
def seed_stream(seed):
    np.random.seed(seed)


@njit(cache=True)
def coupled_logistic_run(indptr, member_indices, deg, cls, sizes, probs, state, counts,
                         nu, delta, max_degree, beta, rho0, inertia, target, member,
                         transition_first, uniforms, record_steps, out_x, out_m, seed):
    """Coupled graph-chain / monophilic SIS run for the two-member logistic kernel.

    Consumes the same random numbers, in the same order, as the generic
    Python loop: ``uniforms[n]`` drives the graph move of step ``n + 1`` and
    the SIS part draws from the compiled stream seeded once with ``seed``.
    """
    np.random.seed(seed)
    K = counts.shape[0]
    no_rec = np.zeros(0, dtype=np.int64)
    dummy = np.zeros((0, K), dtype=np.int64)
    rec = 1
    n_rec = record_steps.shape[0]
    n_steps = uniforms.shape[0]
    for n in range(1, n_steps + 1):
        if transition_first:
            member = _logistic_move(counts, sizes, probs, beta, rho0, inertia, target,
                                    member, uniforms[n - 1])
        sis_run(indptr, member_indices[member], deg, cls, state, counts, nu, delta,
                max_degree, True, 0, 1, no_rec, dummy, -1)
        if not transition_first:
            member = _logistic_move(counts, sizes, probs, beta, rho0, inertia, target,
                                    member, uniforms[n - 1])
        if rec < n_rec and record_steps[rec] == n:
            for i in range(K):
                out_x[rec, i] = counts[i] / sizes[i]
            out_m[rec] = member
            rec += 1


@njit(cache=True)
def _logistic_move(counts, sizes, probs, beta, rho0, inertia, target, member, u):
    rho = 0.0
    for i in range(counts.shape[0]):
        rho += probs[i] * (counts[i] / sizes[i])
    s = 1.0 / (1.0 + np.exp(-beta * (rho - rho0)))
    # same arithmetic as LogisticSwitchKernel.row
    first = (1.0 - inertia) * (1.0 - s if target == 1 else s)
    if member == 0:
        first += inertia
    return 0 if u < first else 1
