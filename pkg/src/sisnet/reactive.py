"""SIS dynamics on a reactive network: a finite family of graphs visited by a
Markov chain whose transition matrix depends on the population state.

The coupled process is approximated by the ODE ``dx/dt = sum_i pi_x(i) H(x, G_i)``
where ``pi_x`` solves ``P_x' pi_x = pi_x``. One chain step is ``1 / M`` units of
ODE time.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels, meanfield
from .errors import InvalidArgumentError, ReducibilityError
from .graph.core import Graph
from .graph.stats import JointDegreeStats, joint_degree_stats
from .params import MONOPHILIC
from .sim import NodeStates, _advance, _rng, _seed, init_population

MAX_MEMBERS = 16


class GraphFamily:
    """Graphs sharing one degree distribution but differing in neighbor-degree conditionals.

    Parameters
    ----------
    members : sequence of Graph or JointDegreeStats
        At least one member. Graphs are needed for :func:`simulate_coupled`.

    Raises
    ------
    InvalidArgumentError
        If two members disagree on ``P(k)`` by more than 1e-12 or there are
        more than ``MAX_MEMBERS`` of them.
    """

    def __init__(self, members):
        members = list(members)
        if not members:
            raise InvalidArgumentError("family needs at least one member")
        if len(members) > MAX_MEMBERS:
            raise InvalidArgumentError("at most %d members supported" % MAX_MEMBERS)
        self.graphs = [m if isinstance(m, Graph) else None for m in members]
        self.stats = [joint_degree_stats(m) if isinstance(m, Graph) else m for m in members]
        if not all(isinstance(s, JointDegreeStats) for s in self.stats):
            raise InvalidArgumentError("members must be Graph or JointDegreeStats")
        ref = self.stats[0].degree_dist
        for i, s in enumerate(self.stats[1:], 1):
            d = s.degree_dist
            if (not np.array_equal(d.degrees, ref.degrees)
                    or np.max(np.abs(d.probs - ref.probs)) > 1e-12):
                raise InvalidArgumentError("member %d has a different degree distribution" % i)

    def __len__(self):
        return len(self.stats)

    @property
    def degree_dist(self):
        return self.stats[0].degree_dist

    @property
    def degrees(self):
        return self.stats[0].degrees

    @property
    def max_degree(self):
        return self.stats[0].max_degree


class TransitionKernel:
    """State-dependent transition matrix over family members.

    Subclasses implement :meth:`matrix`; ``matrix(x)[i, j]`` is the chance
    of moving from member ``i`` to member ``j`` when the population state is
    ``x``. Kernels must be smooth in ``x``.
    """

    n_members = None

    def matrix(self, x):
        raise NotImplementedError

    def row(self, x, current):
        return self.matrix(x)[current]

    def validate(self, n_classes, n_samples=32, rng=0):
        """Check stochasticity and irreducibility on random states plus the corners.

        Raises
        ------
        ReducibilityError
            If some sampled ``P_x`` is not irreducible.
        """
        rng = np.random.default_rng(rng)
        xs = [np.zeros(n_classes), np.ones(n_classes)]
        xs += list(rng.random((n_samples, n_classes)))
        for x in xs:
            P = np.asarray(self.matrix(x), dtype=float)
            N = P.shape[0]
            if P.shape != (N, N) or np.any(P < 0):
                raise InvalidArgumentError("kernel must return a nonnegative square matrix")
            if np.max(np.abs(P.sum(axis=1) - 1.0)) > 1e-12:
                raise InvalidArgumentError("kernel rows must sum to 1")
            reach = np.linalg.matrix_power(np.eye(N) + (P > 0), max(N - 1, 1))
            if np.any(reach == 0):
                raise ReducibilityError("kernel is reducible at a sampled state", x=x)
        return self


class ConstantKernel(TransitionKernel):
    """Kernel that ignores the population state."""

    def __init__(self, matrix):
        self._P = np.asarray(matrix, dtype=float)
        self.n_members = self._P.shape[0]

    def matrix(self, x):
        return self._P


class LogisticSwitchKernel(TransitionKernel):
    """Two-member kernel that drifts toward ``target_member`` as prevalence rises.

    With ``s = 1 / (1 + exp(-beta * (rho(x) - rho0)))`` and
    ``rho(x) = sum_k P(k) x(k)``, the chain moves to the target member with
    probability ``s`` and to the other member otherwise, whatever the
    current member. A positive ``inertia`` mixes in a holding step: every row
    becomes ``(1 - inertia) * [1 - s, s] + inertia * e_current`` (for
    ``target_member=1``). The stationary law is ``[1 - s, s]`` for any
    inertia below one.
    """

    n_members = 2

    def __init__(self, degree_probs, beta=10.0, rho0=0.2, inertia=0.0, target_member=1):
        if not 0.0 <= inertia < 1.0:
            raise InvalidArgumentError("inertia must lie in [0, 1)")
        if target_member not in (0, 1):
            raise InvalidArgumentError("target_member must be 0 or 1")
        self.probs = np.asarray(degree_probs, dtype=float)
        self.beta = float(beta)
        self.rho0 = float(rho0)
        self.inertia = float(inertia)
        self.target_member = int(target_member)

    def switch_probability(self, x):
        rho = float(np.dot(self.probs, x))
        return 1.0 / (1.0 + np.exp(-self.beta * (rho - self.rho0)))

    def stationary(self, x):
        s = self.switch_probability(x)
        return np.array([1.0 - s, s]) if self.target_member == 1 else np.array([s, 1.0 - s])

    def matrix(self, x):
        pi = self.stationary(x)
        return (1.0 - self.inertia) * np.tile(pi, (2, 1)) + self.inertia * np.eye(2)

    def row(self, x, current):
        r = (1.0 - self.inertia) * self.stationary(x)
        r[current] += self.inertia
        return r


class CallableKernel(TransitionKernel):
    """Wrap ``fn(x) -> (N, N) matrix``."""

    def __init__(self, fn, n_members):
        self.fn = fn
        self.n_members = int(n_members)

    def matrix(self, x):
        return np.asarray(self.fn(x), dtype=float)


def stationary_distribution(P, null_tol=1e-8):
    """Unique ``pi`` with ``P' pi = pi``, ``pi >= 0``, ``sum(pi) = 1``.

    Solves ``(P' - I) pi = 0`` with one equation swapped for the
    normalization, then polishes with power iteration if the residual is
    above 1e-12.

    Raises
    ------
    ReducibilityError
        If ``P' - I`` has more than one singular value below ``null_tol``.
    """
    P = np.asarray(P, dtype=float)
    N = P.shape[0]
    A = P.T - np.eye(N)
    if N > 1:
        s = np.linalg.svd(A, compute_uv=False)
        if np.sum(s <= null_tol * max(1.0, s[0])) > 1:
            raise ReducibilityError("stationary distribution is not unique")
    A[-1, :] = 1.0
    b = np.zeros(N)
    b[-1] = 1.0
    try:
        pi = np.linalg.solve(A, b)
    except np.linalg.LinAlgError:
        pi = np.full(N, 1.0 / N)
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()
    for _ in range(10_000):
        if np.max(np.abs(P.T @ pi - pi)) <= 1e-12:
            break
        pi = P.T @ pi
        pi /= pi.sum()
    return pi


def constraint_residual(P, pi):
    return float(np.max(np.abs(np.asarray(P).T @ pi - pi)))


def drift_H(x, member, family, params):
    """Monophilic mean-field drift evaluated with ``family.stats[member]``."""
    return meanfield.drift(x, family.stats[member], params, MONOPHILIC)


def averaged_drift(x, family, kernel, params, return_pi=False):
    """``sum_i pi_x(i) drift_H(x, i)``."""
    P = kernel.matrix(x)
    if P.shape != (len(family), len(family)):
        raise InvalidArgumentError("kernel size does not match the family")
    pi = stationary_distribution(P)
    h = pi[0] * drift_H(x, 0, family, params)
    for i in range(1, len(family)):
        h = h + pi[i] * drift_H(x, i, family, params)
    if return_pi:
        return h, pi, P
    return h


@dataclass(frozen=True)
class ConstrainedTrajectory:
    t: np.ndarray
    x: np.ndarray
    pi: np.ndarray
    residual: np.ndarray


def integrate_constrained_ode(x0, family, kernel, params, step_size, horizon, record_every=1):
    """Explicit Euler for ``dx/dt = averaged_drift(x)`` on ``[0, horizon]``.

    Records ``(t, x, pi_x)`` and the constraint residual every
    ``record_every`` Euler steps and at the end.
    """
    if step_size <= 0 or horizon <= 0:
        raise InvalidArgumentError("need positive step size and horizon")
    x = np.array(x0, dtype=float)
    if x.shape != family.degrees.shape or np.any(x < 0) or np.any(x > 1):
        raise InvalidArgumentError("x0 must be a vector in [0, 1] over the degree classes")
    n_steps = int(round(horizon / step_size))
    ts, xs, pis, res = [], [], [], []
    for n in range(n_steps + 1):
        try:
            h, pi, P = averaged_drift(x, family, kernel, params, return_pi=True)
        except ReducibilityError as exc:
            raise ReducibilityError(str(exc), x=x.copy(), t=n * step_size) from exc
        if n % record_every == 0 or n == n_steps:
            ts.append(n * step_size)
            xs.append(x.copy())
            pis.append(pi)
            res.append(constraint_residual(P, pi))
        if n == n_steps:
            break
        x = x + step_size * h
        if x.min() < -1e-9 or x.max() > 1 + 1e-9:
            raise RuntimeError("ODE state left [0, 1] at t=%g" % ((n + 1) * step_size))
        np.clip(x, 0.0, 1.0, out=x)
    return ConstrainedTrajectory(np.array(ts), np.array(xs), np.array(pis), np.array(res))


@dataclass(frozen=True)
class CoupledTrajectory:
    steps: np.ndarray
    members: np.ndarray
    x: np.ndarray
    n_nodes: int


def simulate_coupled(family, kernel, params, init, n_steps, rng=None, record_every=1,
                     initial_member=0, transition_first=True, fast=True):
    """Joint Monte Carlo of the graph chain and the monophilic SIS chain (Step-1 sampler X).

    With ``transition_first`` (the default) each step first draws
    ``G_{n+1} ~ P_{x_n}(G_n, .)`` and then applies one SIS step on
    ``G_{n+1}``; otherwise the SIS step runs on ``G_n`` and the graph moves
    afterwards using the updated state.

    ``init`` is an initial infected fraction or a :class:`NodeStates`. For
    :class:`LogisticSwitchKernel` the loop runs compiled (``fast=True``); it
    draws the same random numbers as the generic loop and gives the same path.
    """
    graphs = family.graphs
    if any(g is None for g in graphs):
        raise InvalidArgumentError("coupled simulation needs concrete member graphs")
    base = graphs[0]
    for g in graphs[1:]:
        if g.n_nodes != base.n_nodes or not np.array_equal(g.degrees, base.degrees):
            raise InvalidArgumentError("members must share node count and degree sequence")
    if params.max_degree < base.max_degree:
        raise InvalidArgumentError("params.max_degree is below the largest degree")
    rng = _rng(rng)
    states = init.copy() if isinstance(init, NodeStates) else init_population(base, init, rng)
    sizes = states.class_sizes.astype(float)
    N = len(family)
    member = int(initial_member)
    no_rec = np.zeros(0, dtype=np.int64)

    rec_steps = list(range(0, n_steps + 1, record_every))
    if rec_steps[-1] != n_steps:
        rec_steps.append(n_steps)
    rec_steps = np.array(rec_steps, dtype=np.int64)
    out_x = np.empty((len(rec_steps), len(sizes)))
    out_m = np.empty(len(rec_steps), dtype=np.int64)
    out_x[0] = states.infected / sizes
    out_m[0] = member
    uniforms = rng.random(n_steps)
    seed = _seed(rng)

    if fast and type(kernel) is LogisticSwitchKernel:
        member_indices = np.stack([g.indices for g in graphs])
        _kernels.coupled_logistic_run(
            base.indptr, member_indices, base.degrees, states.class_of, sizes,
            np.asarray(kernel.probs, dtype=float), states.state, states.infected,
            float(params.nu), float(params.delta), float(params.max_degree), kernel.beta,
            kernel.rho0, kernel.inertia, kernel.target_member, member, bool(transition_first),
            uniforms, rec_steps, out_x, out_m, seed)
        return CoupledTrajectory(rec_steps, out_m, out_x, base.n_nodes)

    def move(current, u):
        row = kernel.row(states.infected / sizes, current)
        return min(int(np.searchsorted(np.cumsum(row), u, side="right")), N - 1)

    _kernels.seed_stream(seed)
    r = 1
    for n in range(1, n_steps + 1):
        if transition_first:
            member = move(member, uniforms[n - 1])
        _advance(states, graphs[member], params, MONOPHILIC, "X", 1, no_rec, -1)
        if not transition_first:
            member = move(member, uniforms[n - 1])
        if r < len(rec_steps) and rec_steps[r] == n:
            out_x[r] = states.infected / sizes
            out_m[r] = member
            r += 1
    return CoupledTrajectory(rec_steps, out_m, out_x, base.n_nodes)


def max_deviation(mc_steps, mc_x, ref_t, ref_x, n_nodes):
    """``max_t ||xbar(t) - x(t)||_inf`` with ``xbar`` held piecewise constant.

    Monte Carlo records at chain step ``n`` are placed at time ``n / M``.
    """
    mc_t = np.asarray(mc_steps, dtype=float) / n_nodes
    ref_t = np.asarray(ref_t, dtype=float)
    slack = 1e-9 * max(1.0, ref_t[-1])
    if abs(mc_t[0] - ref_t[0]) > slack or abs(mc_t[-1] - ref_t[-1]) > slack + 1.0 / n_nodes:
        raise InvalidArgumentError(
            "time windows differ: [%g, %g] vs [%g, %g]" % (mc_t[0], mc_t[-1], ref_t[0], ref_t[-1]))
    idx = np.searchsorted(mc_t, ref_t + slack, side="right") - 1
    return float(np.max(np.abs(np.asarray(mc_x)[idx] - np.asarray(ref_x))))


def deviation_report(coupled, ode):
    return max_deviation(coupled.steps, coupled.x, ode.t, ode.x, coupled.n_nodes)


def occupancy_standard_errors(P, n_steps):
    """Asymptotic standard error of each member's occupancy fraction over ``n_steps``.

    Uses the fundamental matrix ``Z = (I - P + 1 pi')^-1``; the long-run
    variance of the indicator of state ``i`` is ``pi_i (2 Z_ii - 1 - pi_i)``.
    """
    P = np.asarray(P, dtype=float)
    pi = stationary_distribution(P)
    N = len(pi)
    Z = np.linalg.inv(np.eye(N) - P + np.outer(np.ones(N), pi))
    var = pi * (2.0 * np.diag(Z) - 1.0 - pi)
    return pi, np.sqrt(np.maximum(var, 0.0) / n_steps)


def lipschitz_estimate(family, kernel, params, n_pairs=10_000, rng=0, scales=(1.0, 1e-2, 1e-4)):
    """Largest observed ``||h(x) - h(y)|| / ||x - y||`` for the averaged drift.

    Pairs are drawn at several separations; if the ratio keeps growing as
    the separation shrinks (by more than 10x from the widest to the
    narrowest scale) a ``RuntimeWarning`` flags a non-Lipschitz kernel.
    """
    rng = np.random.default_rng(rng)
    K = len(family.degrees)
    per_scale = []
    n_each = max(1, n_pairs // len(scales))
    for scale in scales:
        best = 0.0
        for _ in range(n_each):
            x = rng.random(K)
            y = np.clip(x + scale * rng.uniform(-1, 1, K), 0.0, 1.0)
            dist = np.max(np.abs(x - y))
            if dist == 0:
                continue
            hx = averaged_drift(x, family, kernel, params)
            hy = averaged_drift(y, family, kernel, params)
            best = max(best, np.max(np.abs(hx - hy)) / dist)
        per_scale.append(best)
    if per_scale[-1] > 10.0 * max(per_scale[0], 1e-300):
        warnings.warn("averaged drift looks non-Lipschitz: ratios %s" % per_scale,
                      RuntimeWarning, stacklevel=2)
    return float(max(per_scale))
