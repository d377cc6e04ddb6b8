"""Degree sequences and configuration-model graphs."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import ConstructionFailureError, InvalidArgumentError
from .core import Graph


@dataclass(frozen=True)
class PowerLaw:
    """Truncated discrete power law ``P(k) ~ k**-alpha`` on ``[k_min, k_max]``."""

    alpha: float
    k_min: int
    k_max: int

    def support(self):
        return np.arange(self.k_min, self.k_max + 1)

    def pmf(self):
        k = self.support().astype(float)
        w = k ** -self.alpha
        return w / w.sum()

    def mean(self):
        return float(np.dot(self.support(), self.pmf()))


def _check_rng(rng):
    if rng is None or isinstance(rng, (int, np.integer)):
        return np.random.default_rng(rng)
    return rng


def sample_degree_sequence(dist, n=None, rng=None):
    """Draw a degree sequence with an even sum.

    Parameters
    ----------
    dist : PowerLaw or sequence of int
        Either a power law to sample ``n`` i.i.d. degrees from, or an
        explicit sequence that is passed through (apart from parity repair).
    n : int, optional
        Sequence length. Required for a power law; checked against the
        length of an explicit sequence when given.
    rng : numpy.random.Generator or int, optional

    Returns
    -------
    numpy.ndarray of int64
        If the drawn sum is odd, one uniformly chosen entry is incremented
        (or decremented when it already sits at ``k_max``).
    """
    rng = _check_rng(rng)
    if isinstance(dist, PowerLaw):
        if n is None or n < 2:
            raise InvalidArgumentError("need n >= 2")
        if dist.alpha <= 1:
            raise InvalidArgumentError("power-law exponent must exceed 1")
        if dist.k_min > dist.k_max:
            raise InvalidArgumentError("k_min > k_max")
        if dist.k_min < 1 or dist.k_max >= n:
            raise InvalidArgumentError("need 1 <= k_min <= k_max < n")
        seq = rng.choice(dist.support(), size=n, p=dist.pmf()).astype(np.int64)
        k_min, k_max = dist.k_min, dist.k_max
    else:
        seq = np.array(list(dist), dtype=np.int64)
        if n is not None and len(seq) != n:
            raise InvalidArgumentError("explicit sequence has %d entries, expected %d" % (len(seq), n))
        if len(seq) < 2:
            raise InvalidArgumentError("need at least two degrees")
        k_min, k_max = int(seq.min()), int(seq.max())
        if k_min < 1:
            raise InvalidArgumentError("degrees must be >= 1")

    if seq.sum() % 2:
        i = int(rng.integers(len(seq)))
        if seq[i] < k_max:
            seq[i] += 1
        elif seq[i] > k_min:
            seq[i] -= 1
        else:
            raise InvalidArgumentError("cannot repair parity when k_min == k_max with odd total")
    return seq


def degree_sequence_from_distribution(support, probs, n):
    """Deterministic sequence whose class counts follow ``probs`` as closely as rounding allows.

    Largest-remainder rounding; the parity fix bumps the most populous
    class that has room upward. Used when several graph sizes must share one
    degree distribution.
    """
    support = np.asarray(support, dtype=np.int64)
    probs = np.asarray(probs, dtype=float)
    probs = probs / probs.sum()
    raw = probs * n
    counts = np.floor(raw).astype(np.int64)
    short = n - counts.sum()
    counts[np.argsort(-(raw - counts), kind="stable")[:short]] += 1
    seq = np.repeat(support, counts)
    if seq.sum() % 2:
        # move one node from an odd class to its neighbouring class
        odd = np.flatnonzero((support % 2 == 1) & (counts > 0))
        j = odd[np.argmax(counts[odd])]
        idx = np.flatnonzero(seq == support[j])[0]
        seq[idx] += 1 if support[j] < support.max() else -1
        seq.sort()
    return seq


def build_configuration_model(degrees, rng=None, retry_budget=100, max_erased_fraction=0.01,
                              return_report=False, repair_passes=20):
    """Simple graph realizing ``degrees`` by random stub matching.

    Stubs are paired uniformly at random. Self-loops and repeated edges are
    then re-matched by swapping each offending pair against a uniformly
    chosen pair, for up to ``repair_passes`` passes. If collisions remain,
    the matching restarts from a fresh permutation, up to ``retry_budget``
    restarts. Only after that are the remaining offending pairs of the best
    attempt erased.

    Parameters
    ----------
    degrees : sequence of int
        Requested degrees; the sum must be even and every entry in ``[1, n-1]``.
    rng : numpy.random.Generator or int, optional
    retry_budget : int
        Number of restarts before falling back to erasure.
    max_erased_fraction : float
        Erasing more than this fraction of stubs raises.
    return_report : bool
        Also return a dict with ``erased_stubs``, ``restarts`` and
        ``max_degree_deviation``.
    repair_passes : int
        Swap-repair passes per attempt.

    Raises
    ------
    ConstructionFailureError
        When erasure removes more than ``max_erased_fraction`` of the stubs
        or leaves an isolated node.
    """
    rng = _check_rng(rng)
    deg = np.asarray(degrees, dtype=np.int64)
    n = len(deg)
    if deg.sum() % 2:
        raise InvalidArgumentError("degree sum must be even")
    if n < 2 or deg.min() < 1 or deg.max() >= n:
        raise InvalidArgumentError("degrees must lie in [1, n-1]")

    best = None
    for restarts in range(retry_budget + 1):
        pairs, bad = _match_stubs(deg, rng, repair_passes)
        if best is None or len(bad) < len(best[1]):
            best = (pairs, bad)
        if not bad:
            break
    pairs, bad = best

    erased = 0
    if bad:
        keep = []
        seen = set()
        for a, b in pairs:
            key = (a, b) if a < b else (b, a)
            if a == b or key in seen:
                erased += 2
                continue
            seen.add(key)
            keep.append(key)
        edges = np.array(keep, dtype=np.int64).reshape(-1, 2)
        realized = np.bincount(edges.ravel(), minlength=n)
        isolated = int(np.sum(realized == 0))
        total = int(deg.sum())
        if erased > max_erased_fraction * total or isolated:
            raise ConstructionFailureError(
                "configuration model erased %d of %d stubs (%d isolated nodes)"
                % (erased, total, isolated),
                erased_stubs=erased, total_stubs=total, isolated_nodes=isolated)
        warnings.warn("configuration model erased %d of %d stubs" % (erased, total),
                      RuntimeWarning, stacklevel=2)
    else:
        edges = np.array(pairs, dtype=np.int64).reshape(-1, 2)

    g = Graph(n, edges)
    if return_report:
        report = {
            "erased_stubs": erased,
            "restarts": restarts,
            "max_degree_deviation": int(np.max(np.abs(g.degrees - deg))),
        }
        return g, report
    return g


def _match_stubs(deg, rng, repair_passes):
    """One random stub matching plus swap repair; returns pairs and offending indices."""
    n = len(deg)
    stubs = rng.permutation(np.repeat(np.arange(n, dtype=np.int64), deg))
    pairs = stubs.reshape(-1, 2).tolist()
    counts = {}
    for a, b in pairs:
        key = (a, b) if a < b else (b, a)
        counts[key] = counts.get(key, 0) + 1

    def is_bad(i):
        a, b = pairs[i]
        return a == b or counts[(a, b) if a < b else (b, a)] > 1

    def drop(a, b):
        key = (a, b) if a < b else (b, a)
        counts[key] -= 1
        if not counts[key]:
            del counts[key]

    def add(a, b):
        key = (a, b) if a < b else (b, a)
        counts[key] = counts.get(key, 0) + 1

    bad = [i for i in range(len(pairs)) if is_bad(i)]
    n_pairs = len(pairs)
    for _ in range(repair_passes):
        if not bad:
            break
        for i in bad:
            if not is_bad(i):
                continue
            a, b = pairs[i]
            j = int(rng.integers(n_pairs))
            if j == i:
                continue
            c, d = pairs[j]
            if rng.random() < 0.5:
                c, d = d, c
            if a == c or b == d:
                continue
            k1 = (a, c) if a < c else (c, a)
            k2 = (b, d) if b < d else (d, b)
            if k1 == k2 or k1 in counts or k2 in counts:
                continue
            drop(a, b)
            drop(c, d)
            add(a, c)
            add(b, d)
            pairs[i] = [a, c]
            pairs[j] = [b, d]
        bad = [i for i in range(n_pairs) if is_bad(i)]
    return pairs, bad
