"""Immutable simple undirected graph stored in compressed sparse row form."""

from __future__ import annotations

import numpy as np

from ..errors import InvalidGraphError


class Graph:
    """Simple undirected graph with no isolated nodes.

    Adjacency is kept as CSR arrays (``indptr``, ``indices``) with each
    neighbor list sorted. Arrays are made read-only after construction.

    Parameters
    ----------
    n_nodes : int
        Number of nodes ``M``; nodes are ``0 .. M-1``.
    edges : array-like of shape (n_edges, 2)
        Undirected edges, each listed once.

    Raises
    ------
    InvalidGraphError
        On self-loops, duplicate edges, out-of-range ids or isolated nodes.
    """

    __slots__ = ("n_nodes", "indptr", "indices", "degrees", "max_degree", "_edges")

    def __init__(self, n_nodes, edges):
        n_nodes = int(n_nodes)
        if n_nodes < 1:
            raise InvalidGraphError("graph needs at least one node")
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size and (edges.min() < 0 or edges.max() >= n_nodes):
            raise InvalidGraphError("node id out of range [0, %d)" % n_nodes)
        if np.any(edges[:, 0] == edges[:, 1]):
            raise InvalidGraphError("self-loop present")
        canon = np.sort(edges, axis=1)
        canon = canon[np.lexsort((canon[:, 1], canon[:, 0]))]
        if len(canon) > 1 and np.any(np.all(canon[1:] == canon[:-1], axis=1)):
            raise InvalidGraphError("duplicate edge present")

        src = np.concatenate([canon[:, 0], canon[:, 1]])
        dst = np.concatenate([canon[:, 1], canon[:, 0]])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        degrees = np.bincount(src, minlength=n_nodes).astype(np.int64)
        if np.any(degrees == 0):
            raise InvalidGraphError(
                "isolated nodes are not allowed (first: %d)" % int(np.argmin(degrees))
            )
        indptr = np.zeros(n_nodes + 1, dtype=np.int64)
        np.cumsum(degrees, out=indptr[1:])

        for arr in (canon, indptr, dst, degrees):
            arr.flags.writeable = False
        self.n_nodes = n_nodes
        self._edges = canon
        self.indptr = indptr
        self.indices = dst
        self.degrees = degrees
        self.max_degree = int(degrees.max())

    @property
    def n_edges(self):
        return len(self._edges)

    @property
    def edges(self):
        """Edges as an ``(n_edges, 2)`` array with ``u < v``, sorted."""
        return self._edges

    def neighbors(self, v):
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def has_edge(self, u, v):
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    def relabel(self, permutation):
        """Return a copy with node ``v`` renamed to ``permutation[v]``."""
        perm = np.asarray(permutation, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(self.n_nodes)):
            raise InvalidGraphError("relabeling must be a permutation of the nodes")
        return Graph(self.n_nodes, perm[self._edges])

    def disjoint_union(self, other):
        shifted = np.asarray(other.edges) + self.n_nodes
        return Graph(self.n_nodes + other.n_nodes, np.vstack([self._edges, shifted]))

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n_nodes == other.n_nodes and np.array_equal(self._edges, other._edges)

    def __hash__(self):
        return hash((self.n_nodes, self._edges.tobytes()))

    def __repr__(self):
        return "Graph(n_nodes=%d, n_edges=%d, max_degree=%d)" % (
            self.n_nodes, self.n_edges, self.max_degree)


def star_graph(n_leaves):
    """Star ``K_{1,n}`` with the hub at node 0."""
    return Graph(n_leaves + 1, [(0, i) for i in range(1, n_leaves + 1)])


def cycle_graph(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def circulant_graph(n, k):
    """``k``-regular ring lattice (``k`` even) joining each node to ``k/2`` on each side."""
    if k % 2 or not 0 < k < n:
        raise InvalidGraphError("circulant graph needs even 0 < k < n")
    edges = [(i, (i + j) % n) for i in range(n) for j in range(1, k // 2 + 1)]
    return Graph(n, edges)
