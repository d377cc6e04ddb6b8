"""Monte Carlo simulation of the discrete-time SIS chain on unbiased-degree networks.

Each step picks one node ``m`` (uniformly, by edge end, or as a random
neighbor of a random node). An infected ``m`` recovers with probability
``delta``. A susceptible ``m`` draws ``d(m)`` agents uniformly with
replacement; it counts how many of them are infected (non-monophilic rule)
or, for each drawn agent, looks at one uniform neighbor of that agent
instead (monophilic rule). It is then infected with probability
``nu * a / D``.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvalidArgumentError
from .params import MONOPHILIC, SisParams, check_rule, check_sampler


@dataclass
class NodeStates:
    """Per-node 0/1 states plus the per-class infected counts ``M^1(k)``."""

    state: np.ndarray
    class_of: np.ndarray
    class_sizes: np.ndarray
    infected: np.ndarray

    @classmethod
    def from_states(cls, g, state):
        state = np.asarray(state, dtype=np.int8).copy()
        if state.shape != (g.n_nodes,) or not np.isin(state, (0, 1)).all():
            raise InvalidArgumentError("state must be a 0/1 vector over the nodes")
        ks, sizes = np.unique(g.degrees, return_counts=True)
        class_of = np.searchsorted(ks, g.degrees).astype(np.int64)
        infected = np.bincount(class_of, weights=state, minlength=len(ks)).astype(np.int64)
        return cls(state, class_of, sizes.astype(np.int64), infected)

    def copy(self):
        return NodeStates(self.state.copy(), self.class_of, self.class_sizes, self.infected.copy())

    @property
    def x(self):
        """Population state ``M^1(k) / M(k)``."""
        return self.infected / self.class_sizes

    @property
    def n_infected(self):
        return int(self.infected.sum())


def _rng(rng):
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def _seed(rng):
    return int(rng.integers(0, 2**32))


def init_population(g, initial_infected_fraction, rng=None):
    """Infect ``round(fraction * M)`` nodes chosen uniformly without replacement."""
    f = float(initial_infected_fraction)
    if not 0.0 <= f <= 1.0:
        raise InvalidArgumentError("initial infected fraction must lie in [0, 1]")
    rng = _rng(rng)
    state = np.zeros(g.n_nodes, dtype=np.int8)
    state[rng.choice(g.n_nodes, size=int(round(f * g.n_nodes)), replace=False)] = 1
    return NodeStates.from_states(g, state)


def _advance(states, g, params, rule, sampler, n_steps, record_steps, seed):
    out = np.empty((len(record_steps), len(states.infected)), dtype=np.int64)
    _kernels.sis_run(g.indptr, g.indices, g.degrees, states.class_of, states.state,
                     states.infected, float(params.nu), float(params.delta),
                     float(params.max_degree), rule == MONOPHILIC,
                     _kernels.SAMPLER_CODES[sampler], int(n_steps), record_steps, out, seed)
    return out


def _check_params(g, params):
    if params.max_degree < g.max_degree:
        raise InvalidArgumentError("params.max_degree is below the graph's largest degree")


def sis_step(states, g, params, rule, sampler="X", rng=None):
    """One transition of the chain; returns a new :class:`NodeStates`."""
    check_rule(rule)
    check_sampler(sampler)
    _check_params(g, params)
    new = states.copy()
    _advance(new, g, params, rule, sampler, 1, np.zeros(0, dtype=np.int64), _seed(_rng(rng)))
    return new


@dataclass(frozen=True)
class SimTrajectory:
    """Recorded steps, per-class infected fractions and the infected fraction ``rho``."""

    steps: np.ndarray
    x: np.ndarray
    rho: np.ndarray
    final_states: NodeStates = None


def run_trajectory(g, params, rule, sampler, init, n_steps, record_every=1, rng=None):
    """Simulate ``n_steps`` steps, recording every ``record_every`` steps and at the end.

    ``init`` is either an initial infected fraction or a :class:`NodeStates`.
    """
    check_rule(rule)
    check_sampler(sampler)
    _check_params(g, params)
    if n_steps < 1 or record_every < 1:
        raise InvalidArgumentError("need n_steps >= 1 and record_every >= 1")
    rng = _rng(rng)
    states = init.copy() if isinstance(init, NodeStates) else init_population(g, init, rng)
    steps = np.arange(0, n_steps + 1, record_every, dtype=np.int64)
    if steps[-1] != n_steps:
        steps = np.append(steps, n_steps)
    counts = _advance(states, g, params, rule, sampler, n_steps, steps, _seed(rng))
    x = counts / states.class_sizes
    return SimTrajectory(steps, x, counts.sum(axis=1) / g.n_nodes, states)


def terminal_rho(traj, tail_fraction=0.1):
    """Mean infected fraction over the last ``tail_fraction`` of the records."""
    n = max(1, int(np.ceil(tail_fraction * len(traj.rho))))
    return float(traj.rho[-n:].mean())


@dataclass(frozen=True)
class SweepConfig:
    nu: float = 1.0
    init_fraction: float = 0.1
    sweeps: int = 200
    record_every: int = 0
    tail_fraction: float = 0.1
    rho_cut: float = 0.01


def _sweep_cell(args):
    g, rule, sampler, lam, seed, cfg = args
    params = SisParams.from_lambda(lam, g.max_degree, nu=cfg.nu)
    n_steps = cfg.sweeps * g.n_nodes
    record_every = cfg.record_every or g.n_nodes
    traj = run_trajectory(g, params, rule, sampler, cfg.init_fraction, n_steps, record_every,
                          np.random.default_rng(seed))
    return lam, seed, terminal_rho(traj, cfg.tail_fraction)


@dataclass(frozen=True)
class ThresholdEstimate:
    lambdas: np.ndarray
    seeds: tuple
    rho: np.ndarray
    lambda_star: float

    @property
    def mean(self):
        return self.rho.mean(axis=1)

    @property
    def std(self):
        return self.rho.std(axis=1)


def estimate_threshold(g, rule, sampler, lambdas, seeds=(0,), config=SweepConfig(), workers=1):
    """Monte Carlo terminal prevalence over a ``lambda`` grid.

    Each ``(lambda, seed)`` cell runs ``config.sweeps * M`` steps from
    ``config.init_fraction`` infected and averages ``rho`` over the last
    ``config.tail_fraction`` of the records. The threshold estimate is the
    smallest ``lambda`` whose seed-averaged terminal ``rho`` exceeds
    ``config.rho_cut``.
    """
    check_rule(rule)
    check_sampler(sampler)
    lambdas = np.asarray(lambdas, dtype=float)
    if np.any(np.diff(lambdas) <= 0):
        raise InvalidArgumentError("lambda grid must be strictly increasing")
    seeds = tuple(int(s) for s in seeds)
    if not seeds:
        raise InvalidArgumentError("need at least one seed")
    cells = [(g, rule, sampler, float(l), s, config) for l in lambdas for s in seeds]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_sweep_cell, cells))
    else:
        results = [_sweep_cell(c) for c in cells]
    table = {(lam, seed): rho for lam, seed, rho in results}
    rho = np.array([[table[(float(l), s)] for s in seeds] for l in lambdas])
    above = np.flatnonzero(rho.mean(axis=1) > config.rho_cut)
    star = float(lambdas[above[0]]) if len(above) else float("nan")
    return ThresholdEstimate(lambdas, seeds, rho, star)
