"""Degree and joint-degree statistics, sampling-distribution laws, and stochastic dominance."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidArgumentError, UndefinedAssortativityError

SAMPLERS = ("X", "Y", "Z")


@dataclass(frozen=True)
class DegreeDistribution:
    """Degree distribution over the degree classes present in a graph.

    ``degrees[i]`` is the i-th present class ``k``; ``probs[i] = P(k)`` and
    ``counts[i] = M(k)``. Classes with ``M(k) = 0`` are left out.
    """

    degrees: np.ndarray
    probs: np.ndarray
    counts: np.ndarray = None

    @classmethod
    def from_graph(cls, g):
        ks, counts = np.unique(g.degrees, return_counts=True)
        return cls(ks.astype(np.int64), counts / g.n_nodes, counts.astype(np.int64))

    @classmethod
    def from_probs(cls, degrees, probs):
        ks = np.asarray(degrees, dtype=np.int64)
        p = np.asarray(probs, dtype=float)
        if ks.shape != p.shape or np.any(p < 0) or np.any(ks < 1):
            raise InvalidArgumentError("bad degree distribution")
        keep = p > 0
        ks, p = ks[keep], p[keep]
        order = np.argsort(ks)
        return cls(ks[order], p[order] / p.sum())

    @property
    def max_degree(self):
        return int(self.degrees[-1])

    def mean(self):
        return float(np.dot(self.degrees, self.probs))


@dataclass(frozen=True)
class JointDegreeStats:
    """Edge-end degree statistics of an undirected graph.

    Attributes
    ----------
    degrees : ndarray (K,)
        Present degree classes, ascending.
    degree_dist : DegreeDistribution
    e : ndarray (K, K)
        ``e[i, j]`` is the fraction of ordered edge-end pairs joining a
        degree ``degrees[i]`` node to a degree ``degrees[j]`` node. Symmetric.
    q : ndarray (K,)
        Marginal of ``e``; the degree law of a random edge end.
    cond : ndarray (K, K)
        ``cond[i, j] = P(degrees[i] | degrees[j]) = e[i, j] / q[j]``, the chance
        that a random neighbor of a degree ``degrees[j]`` node has degree
        ``degrees[i]``. Each column sums to one.
    """

    degrees: np.ndarray
    degree_dist: DegreeDistribution
    e: np.ndarray
    q: np.ndarray
    cond: np.ndarray = field(repr=False)

    @property
    def max_degree(self):
        return int(self.degrees[-1])

    @property
    def sigma_q(self):
        k = self.degrees.astype(float)
        mean = np.dot(k, self.q)
        return float(np.sqrt(max(np.dot(k * k, self.q) - mean * mean, 0.0)))

    def z_law(self):
        """``Pr[d(Z) = k]`` for a uniform neighbor of a uniform node."""
        return self.cond @ self.degree_dist.probs

    def with_conditionals(self, cond):
        """Copy sharing ``P(k)`` but with a different neighbor-degree conditional."""
        return JointDegreeStats(self.degrees, self.degree_dist, self.e, self.q, np.asarray(cond))


def joint_degree_stats(g):
    """Compute :class:`JointDegreeStats` for graph ``g``.

    Each undirected edge contributes both of its ordered endpoint pairs.
    """
    dist = DegreeDistribution.from_graph(g)
    ks = dist.degrees
    cls_of = np.searchsorted(ks, g.degrees)
    u, v = g.edges[:, 0], g.edges[:, 1]
    K = len(ks)
    e = np.zeros((K, K))
    np.add.at(e, (cls_of[u], cls_of[v]), 1.0)
    e = e + e.T
    e /= e.sum()
    q = e.sum(axis=1)
    cond = e / q[None, :]
    return JointDegreeStats(ks, dist, e, q, cond)


def assortativity(stats):
    """Degree assortativity ``r = sum_kk' k k' (e(k,k') - q(k) q(k')) / sigma_q**2``.

    Raises
    ------
    UndefinedAssortativityError
        If ``sigma_q`` is zero (all edge ends share one degree).
    """
    k = stats.degrees.astype(float)
    var = stats.sigma_q ** 2
    if var <= 1e-14 * max(1.0, float(np.dot(k * k, stats.q))):
        raise UndefinedAssortativityError("sigma_q = 0: assortativity undefined for this graph")
    cov = k @ stats.e @ k - np.dot(k, stats.q) ** 2
    return float(np.clip(cov / var, -1.0, 1.0))


def degree_law(stats, sampler):
    """Exact law of the degree of a sampled node, indexed like ``stats.degrees``.

    ``"X"``: uniform node, ``P(k)``. ``"Y"``: uniform end of a uniform edge,
    ``q(k) = k P(k) / kbar``. ``"Z"``: uniform neighbor of a uniform node,
    ``sum_k' P(k') P(k|k')``.
    """
    if sampler == "X":
        return stats.degree_dist.probs.copy()
    if sampler == "Y":
        return stats.q.copy()
    if sampler == "Z":
        return stats.z_law()
    raise InvalidArgumentError("sampler must be one of %s" % (SAMPLERS,))


def expected_degree(stats, law):
    return float(np.dot(stats.degrees, law))


def fosd_check(law_a, law_b, support_a=None, support_b=None, atol=1e-12):
    """True if ``law_a`` first-order stochastically dominates ``law_b``.

    That is, ``CDF_a(k) <= CDF_b(k)`` at every ``k``. If supports are given
    the laws are aligned on their union first; otherwise they must already
    share a support (shorter vectors are zero-padded at the top).
    """
    a = np.asarray(law_a, dtype=float)
    b = np.asarray(law_b, dtype=float)
    if support_a is not None or support_b is not None:
        sa = np.arange(len(a)) if support_a is None else np.asarray(support_a)
        sb = np.arange(len(b)) if support_b is None else np.asarray(support_b)
        grid = np.union1d(sa, sb)
        pa, pb = np.zeros(len(grid)), np.zeros(len(grid))
        pa[np.searchsorted(grid, sa)] = a
        pb[np.searchsorted(grid, sb)] = b
        a, b = pa, pb
    else:
        n = max(len(a), len(b))
        a = np.pad(a, (0, n - len(a)))
        b = np.pad(b, (0, n - len(b)))
    return bool(np.all(np.cumsum(a) <= np.cumsum(b) + atol))


def uncorrelated_stats(dist):
    """Joint statistics of a neutral network with degree distribution ``dist``.

    Neighbor degrees follow ``q(k) = k P(k) / kbar`` whatever the degree of
    the node, so ``e(k, k') = q(k) q(k')``.
    """
    k = dist.degrees.astype(float)
    q = k * dist.probs / np.dot(k, dist.probs)
    e = np.outer(q, q)
    cond = np.tile(q[:, None], (1, len(q)))
    return JointDegreeStats(dist.degrees, dist, e, q, cond)
