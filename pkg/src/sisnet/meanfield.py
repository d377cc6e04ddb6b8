"""Deterministic mean-field recursions, epidemic thresholds and stationary prevalence.

State vectors are indexed by the degree classes present in the graph
(``stats.degrees``), never by raw degree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvalidArgumentError, NonConvergenceError
from .params import MONOPHILIC, check_rule, check_sampler


@dataclass(frozen=True)
class MeanFieldState:
    x: np.ndarray
    theta_X: float
    theta_Z: float

    @property
    def rho(self):
        """Infected fraction ``sum_k P(k) x(k)``; the same number as ``theta_X``."""
        return self.theta_X

    @classmethod
    def from_x(cls, x, stats):
        x = np.asarray(x, dtype=float)
        return cls(x, float(np.dot(stats.degree_dist.probs, x)), float(np.dot(stats.z_law(), x)))


@dataclass(frozen=True)
class Trajectory:
    steps: np.ndarray
    x: np.ndarray
    rho: np.ndarray

    @property
    def final(self):
        return self.x[-1]


@dataclass(frozen=True)
class StationaryPoint:
    lam: float
    theta: float
    x: np.ndarray
    rho: float
    iterations: int


def theta_weights(stats, rule):
    """Weights turning ``x`` into the probability that an observed agent is infected."""
    check_rule(rule)
    if rule == MONOPHILIC:
        return stats.z_law()
    return stats.degree_dist.probs.copy()


def step1_weights(stats, sampler, printed_z_form=False):
    """Per-class drift multipliers for the node picked in Step 1.

    ``X`` gives ones and ``Y`` gives ``k / kbar``. ``Z`` gives
    ``Pr[d(Z) = k] / P(k)``, the selection rate of a class relative to
    uniform picking; with ``printed_z_form=True`` it instead returns
    ``sum_k' P(k) / P(k') * P(k|k')``, kept only for side-by-side comparison
    (it does not collapse to the ``Y`` weights on uncorrelated graphs).
    """
    check_sampler(sampler)
    p = stats.degree_dist.probs
    if sampler == "X":
        return np.ones_like(p)
    if sampler == "Y":
        k = stats.degrees.astype(float)
        return k / np.dot(k, p)
    if printed_z_form:
        return (stats.cond * (p[:, None] / p[None, :])).sum(axis=1)
    return stats.z_law() / p


def drift(x, stats, params, rule):
    """Per-class drift ``(1 - x(k)) nu k theta / D - x(k) delta``.

    ``theta`` is ``theta^X = sum P(k) x(k)`` for the non-monophilic rule and
    ``theta^Z = sum Pr[d(Z)=k] x(k)`` for the monophilic rule.
    """
    x = np.asarray(x, dtype=float)
    theta = float(np.dot(theta_weights(stats, rule), x))
    k = stats.degrees.astype(float)
    return (1.0 - x) * (params.nu * k * theta / params.max_degree) - x * params.delta


def _record_steps(n_steps, record_every):
    if n_steps < 1 or record_every < 1:
        raise InvalidArgumentError("need n_steps >= 1 and record_every >= 1")
    steps = np.arange(0, n_steps + 1, record_every, dtype=np.int64)
    if steps[-1] != n_steps:
        steps = np.append(steps, n_steps)
    return steps


def iterate(x0, stats, params, rule, weights="X", n_nodes=10_000, n_steps=1, record_every=1):
    """Run ``x_{n+1} = x_n + w * drift(x_n) / M``.

    Parameters
    ----------
    x0 : array-like (K,)
        Initial state in ``[0, 1]`` per present degree class.
    stats : JointDegreeStats
    params : SisParams
    rule : {"non-monophilic", "monophilic"}
    weights : {"X", "Y", "Z"} or array-like
        Step-1 sampler whose weights to use, or explicit weights.
    n_nodes : int
        ``M``; the step size is ``1 / M``.
    n_steps, record_every : int

    Returns
    -------
    Trajectory
        Recorded every ``record_every`` steps plus the initial and final step.
    """
    x = np.array(x0, dtype=float)
    if x.shape != stats.degrees.shape or np.any(x < 0) or np.any(x > 1):
        raise InvalidArgumentError("x0 must be a vector in [0, 1] over the degree classes")
    w = step1_weights(stats, weights) if isinstance(weights, str) else np.asarray(weights, float)
    steps = _record_steps(int(n_steps), int(record_every))
    out = np.empty((len(steps), len(x)))
    _kernels.meanfield_run(x, stats.degrees.astype(float), theta_weights(stats, rule), w,
                           float(params.nu), float(params.delta), float(params.max_degree),
                           1.0 / n_nodes, int(n_steps), steps, out)
    lo, hi = out.min(), out.max()
    if lo < -1e-12 or hi > 1 + 1e-12:
        raise RuntimeError("mean-field state left [0, 1] (min %g, max %g)" % (lo, hi))
    np.clip(out, 0.0, 1.0, out=out)
    return Trajectory(steps, out, out @ stats.degree_dist.probs)


def expected_observed_degree(stats, rule):
    return float(np.dot(stats.degrees, theta_weights(stats, rule)))


def critical_threshold(stats, rule, max_degree=None):
    """``D / E[d(X)]`` for the non-monophilic rule, ``D / E[d(Z)]`` for the monophilic one."""
    D = stats.max_degree if max_degree is None else max_degree
    return D / expected_observed_degree(stats, rule)


def stationary_map(theta, lam, stats, rule, max_degree=None):
    """``H(theta) = sum_k w(k) lam k theta / (lam k theta + D)``.

    ``w`` is ``P(k)`` (non-monophilic) or the law of ``d(Z)`` (monophilic).
    Vectorized over ``theta``.
    """
    D = stats.max_degree if max_degree is None else max_degree
    w = theta_weights(stats, rule)
    k = stats.degrees.astype(float)
    t = np.asarray(theta, dtype=float)[..., None]
    lkt = lam * k * t
    with np.errstate(invalid="ignore", divide="ignore"):
        frac = np.where(lkt > 0, lkt / (lkt + D), 0.0)
    return (frac * w).sum(axis=-1)


def stationary_solve(lam, stats, rule, max_degree=None, tol=1e-10, max_iters=1_000_000,
                     theta0=0.5):
    """Stationary point of the mean-field dynamics at rate ``lam``.

    Iterates ``theta <- H(theta)`` from ``theta0`` until
    ``|H(theta) - theta| <= tol``. ``H`` is increasing and concave with
    ``H(0) = 0``, so a positive root exists exactly when
    ``H'(0) = lam * E[d] / D > 1``; otherwise zero is returned directly.

    Returns
    -------
    StationaryPoint
        ``theta``, per-class ``x(k) = lam k theta / (lam k theta + D)`` and
        ``rho = sum_k P(k) x(k)``.

    Raises
    ------
    NonConvergenceError
        If ``max_iters`` passes without meeting ``tol``.
    """
    if lam <= 0 or tol <= 0:
        raise InvalidArgumentError("need lam > 0 and tol > 0")
    check_rule(rule)
    D = stats.max_degree if max_degree is None else max_degree
    k = stats.degrees.astype(float)
    slope = lam * expected_observed_degree(stats, rule) / D
    K = len(k)
    if slope <= 1.0 + 1e-9:
        return StationaryPoint(lam, 0.0, np.zeros(K), 0.0, 0)

    w = theta_weights(stats, rule)
    theta = float(theta0)
    for it in range(1, max_iters + 1):
        lkt = lam * k * theta
        new = float(np.dot(w, lkt / (lkt + D)))
        if abs(new - theta) <= tol:
            theta = new
            break
        theta = new
    else:
        raise NonConvergenceError("fixed-point iteration did not reach tol=%g" % tol,
                                  last_iterate=theta, iterations=max_iters)
    lkt = lam * k * theta
    x = lkt / (lkt + D)
    return StationaryPoint(lam, theta, x, float(np.dot(stats.degree_dist.probs, x)), it)


def rho_lambda_curve(stats, rule, lambdas, max_degree=None, tol=1e-10, max_iters=1_000_000):
    """Stationary infected fraction for each ``lam`` in an increasing grid."""
    lambdas = np.asarray(lambdas, dtype=float)
    if np.any(np.diff(lambdas) <= 0):
        raise InvalidArgumentError("lambda grid must be strictly increasing")
    return np.array([stationary_solve(l, stats, rule, max_degree, tol, max_iters).rho
                     for l in lambdas])


def onset(lambdas, rho, cut=0.0):
    """Smallest grid value with ``rho > cut``; ``nan`` if none."""
    idx = np.flatnonzero(np.asarray(rho) > cut)
    return float(np.asarray(lambdas)[idx[0]]) if len(idx) else float("nan")
