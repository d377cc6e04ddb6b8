"""Random node, random friend and random-friend-of-random-node samplers."""

import numpy as np


def sample_node_X(g, rng, size=None):
    """Uniform node."""
    return rng.integers(g.n_nodes, size=size)


def sample_edge_end_Y(g, rng, size=None):
    """Uniform end of a uniform edge, i.e. a node drawn with weight ``d(v)``."""
    # every node v appears d(v) times in the CSR index array
    return g.indices[rng.integers(len(g.indices), size=size)]


def sample_neighbor_Z(g, rng, size=None):
    """Uniform neighbor of a uniform node."""
    x = rng.integers(g.n_nodes, size=size)
    offset = np.floor(rng.random(size=size) * g.degrees[x]).astype(np.int64)
    return g.indices[g.indptr[x] + offset]


SAMPLER_FUNCS = {"X": sample_node_X, "Y": sample_edge_end_Y, "Z": sample_neighbor_Z}


def node_selection_probs(g, sampler):
    """Exact per-node probability of being drawn by ``sampler``."""
    if sampler == "X":
        return np.full(g.n_nodes, 1.0 / g.n_nodes)
    if sampler == "Y":
        return g.degrees / g.degrees.sum()
    if sampler == "Z":
        p = np.zeros(g.n_nodes)
        src = np.repeat(np.arange(g.n_nodes), g.degrees)
        np.add.at(p, g.indices, 1.0 / g.degrees[src])
        return p / g.n_nodes
    raise ValueError("unknown sampler %r" % (sampler,))
