"""Brute-force reference computations shared by the tests.

Everything here is written from the model definition with plain loops so it
does not share code paths with the package.
"""

import numpy as np
from scipy.stats import binom


def selection_probs(n, adj, sampler):
    deg = np.array([len(a) for a in adj], dtype=float)
    if sampler == "X":
        return np.full(n, 1.0 / n)
    if sampler == "Y":
        return deg / deg.sum()
    p = np.zeros(n)
    for v in range(n):
        for u in adj[v]:
            p[u] += 1.0 / (n * deg[v])
    return p


def observed_infected_prob(n, adj, state, rule):
    """Chance that one Step-2 draw reports an infected agent."""
    if rule == "non-monophilic":
        return state.sum() / n
    total = 0.0
    for v in range(n):
        total += sum(state[u] for u in adj[v]) / len(adj[v])
    return total / n


def step_category_probs(g, state, nu, delta, D, rule, sampler="X"):
    """Exact one-step law over categories.

    Categories: for each degree class ``k`` (ascending), ``S->I`` then
    ``I->S``; the last entry is "no change". The infection chance of a
    susceptible degree-``k`` node is the binomial mixture
    ``sum_a (nu a / D) Binom(a; k, theta)``.
    """
    n = g.n_nodes
    adj = [list(g.neighbors(v)) for v in range(n)]
    sel = selection_probs(n, adj, sampler)
    theta = observed_infected_prob(n, adj, state, rule)
    ks = sorted(set(len(a) for a in adj))
    out = np.zeros(2 * len(ks) + 1)
    for v in range(n):
        k = len(adj[v])
        i = ks.index(k)
        if state[v]:
            out[2 * i + 1] += sel[v] * delta
        else:
            a = np.arange(k + 1)
            out[2 * i] += sel[v] * np.sum(nu * a / D * binom.pmf(a, k, theta))
    out[-1] = 1.0 - out[:-1].sum()
    return out


def classify_step(before, after, degrees, ks):
    diff = np.flatnonzero(before != after)
    if len(diff) == 0:
        return 2 * len(ks)
    assert len(diff) == 1
    v = diff[0]
    i = int(np.searchsorted(ks, degrees[v]))
    return 2 * i if after[v] == 1 else 2 * i + 1
