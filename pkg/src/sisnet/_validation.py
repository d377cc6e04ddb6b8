"""Input coercion shared by the estimators and the CLI."""

import numpy as np

from .errors import InvalidArgumentError
from .graph.core import Graph
from .graph.stats import DegreeDistribution, JointDegreeStats, joint_degree_stats, uncorrelated_stats


def check_graph(G):
    """Accept a :class:`Graph`, a networkx graph, or ``(n_nodes, edges)``."""
    if isinstance(G, Graph):
        return G
    if hasattr(G, "nodes") and hasattr(G, "edges"):
        nodes = sorted(G.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return Graph(len(nodes), [(index[u], index[v]) for u, v in G.edges()])
    if isinstance(G, tuple) and len(G) == 2:
        return Graph(G[0], G[1])
    raise InvalidArgumentError("expected a Graph, a networkx graph or (n_nodes, edges); got %r"
                               % type(G).__name__)


def check_stats(G):
    """Joint degree statistics for a graph, a degree distribution, or stats passed through."""
    if isinstance(G, JointDegreeStats):
        return G
    if isinstance(G, DegreeDistribution):
        return uncorrelated_stats(G)
    return joint_degree_stats(check_graph(G))


def check_lambdas(lambdas, increasing=False):
    lam = np.atleast_1d(np.asarray(lambdas, dtype=float))
    if lam.ndim != 1 or not np.all(np.isfinite(lam)) or np.any(lam <= 0):
        raise InvalidArgumentError("lambda values must be positive finite numbers")
    if increasing and np.any(np.diff(lam) <= 0):
        raise InvalidArgumentError("lambda grid must be strictly increasing")
    return lam


def check_state_vector(x, n_classes):
    x = np.asarray(x, dtype=float)
    if x.shape != (n_classes,) or np.any(x < 0) or np.any(x > 1):
        raise InvalidArgumentError("state must be a length-%d vector in [0, 1]" % n_classes)
    return x
