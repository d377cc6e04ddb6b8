"""Experiment pipelines behind the command-line runner.

Every pipeline takes a validated :class:`~sisnet.config.ExperimentConfig`,
writes CSV files into the output directory and returns their names.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import yaml

from . import meanfield, reactive, sim
from .config import ConfigError
from .graph import (
    DegreeDistribution,
    PowerLaw,
    assortativity,
    build_configuration_model,
    degree_law,
    degree_sequence_from_distribution,
    expected_degree,
    fosd_check,
    joint_degree_stats,
    read_edge_list,
    rewire_to_assortativity,
    sample_degree_sequence,
    write_degree_sequence,
    write_edge_list,
)
from .graph.stats import uncorrelated_stats
from .params import MONOPHILIC, NON_MONOPHILIC, RULES, SisParams


def fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.10g" % v
    return str(v)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def lambda_grid(spec):
    """A list of values, or ``{start, stop, step}`` with ``stop`` included."""
    if isinstance(spec, dict):
        start, stop, step = float(spec["start"]), float(spec["stop"]), float(spec["step"])
        if step <= 0:
            raise ValueError("step must be positive")
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 10) for i in range(n)]
    return [float(v) for v in spec]


def r_label(r):
    return "0" if r == 0 else "%+g" % r


def _map(fn, items, workers):
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(fn, items))
    return [fn(i) for i in items]


def degree_sequence_from_spec(spec, rng):
    """Build a degree sequence from a ``params.degrees`` block.

    Accepted forms: ``{power_law: {alpha, k_min, k_max}, n}``,
    ``{explicit: [...]}``, ``{distribution: {k: [...], p: [...]}, n}`` (deterministic
    rounding) and ``{file: path}``.
    """
    if "power_law" in spec:
        pl = spec["power_law"]
        return sample_degree_sequence(PowerLaw(float(pl["alpha"]), int(pl["k_min"]),
                                               int(pl["k_max"])), int(spec["n"]), rng)
    if "explicit" in spec:
        return sample_degree_sequence(spec["explicit"], None, rng)
    if "distribution" in spec:
        d = spec["distribution"]
        return degree_sequence_from_distribution(d["k"], d["p"], int(spec["n"]))
    raise ConfigError("params.degrees needs one of power_law, explicit, distribution")


def read_distribution_csv(path):
    """Read a ``k,P_k`` CSV into a :class:`DegreeDistribution`."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return DegreeDistribution.from_probs(data[:, 0].astype(np.int64), data[:, 1])


def _load_stats(cfg):
    if "graph" in cfg.inputs:
        g = read_edge_list(cfg.resolve(cfg.inputs["graph"]))
        return joint_degree_stats(g), g
    return uncorrelated_stats(read_distribution_csv(cfg.resolve(cfg.inputs["distribution"]))), None


def _rules(p):
    return list(p.get("rules", [p["rule"]] if "rule" in p else RULES))


def run_generate(cfg, out, workers):
    rng = np.random.default_rng(cfg.seeds[0])
    seq = degree_sequence_from_spec(cfg.params["degrees"], rng)
    g, report = build_configuration_model(seq, rng, return_report=True)
    write_edge_list(g, os.path.join(out, "edges.txt"))
    write_degree_sequence(g.degrees, os.path.join(out, "degrees.txt"))
    write_csv(os.path.join(out, "generate.csv"), ["metric", "value"],
              [("n_nodes", g.n_nodes), ("n_edges", g.n_edges),
               ("erased_stubs", report["erased_stubs"]),
               ("max_degree_deviation", report["max_degree_deviation"])])
    return ["edges.txt", "degrees.txt", "generate.csv"]


def run_rewire(cfg, out, workers):
    p = cfg.params
    g = read_edge_list(cfg.resolve(cfg.inputs["graph"]))
    res = rewire_to_assortativity(g, float(p["target_r"]), p.get("max_swaps"),
                                  float(p.get("tolerance", 0.01)),
                                  np.random.default_rng(cfg.seeds[0]))
    write_edge_list(res.graph, os.path.join(out, "edges_rewired.txt"))
    write_csv(os.path.join(out, "rewire.csv"),
              ["target", "assortativity", "converged", "accepted_swaps", "attempts"],
              [(float(p["target_r"]), res.assortativity, res.converged, res.accepted_swaps,
                res.attempts)])
    return ["edges_rewired.txt", "rewire.csv"]


def run_stats(cfg, out, workers):
    g = read_edge_list(cfg.resolve(cfg.inputs["graph"]))
    st = joint_degree_stats(g)
    laws = {s: degree_law(st, s) for s in "XYZ"}
    write_csv(os.path.join(out, "degree_laws.csv"), ["k", "P_X", "P_Y", "P_Z"],
              zip(st.degrees, laws["X"], laws["Y"], laws["Z"]))
    try:
        r = assortativity(st)
    except ArithmeticError:
        r = float("nan")
    rows = [("n_nodes", g.n_nodes), ("n_edges", g.n_edges), ("max_degree", g.max_degree),
            ("assortativity", r)]
    rows += [("expected_degree_%s" % s, expected_degree(st, laws[s])) for s in "XYZ"]
    rows.append(("fosd_Z_over_X", fosd_check(laws["Z"], laws["X"])))
    write_csv(os.path.join(out, "stats.csv"), ["metric", "value"], rows)
    return ["degree_laws.csv", "stats.csv"]


def _sis_params(p, max_degree):
    if "delta" in p:
        return SisParams(float(p.get("nu", 1.0)), float(p["delta"]), max_degree)
    return SisParams.from_lambda(float(p.get("lambda", 2.0)), max_degree, float(p.get("nu", 1.0)))


def _n_steps(p, n_nodes, default_sweeps=200):
    if "steps" in p:
        return int(p["steps"])
    return int(p.get("sweeps", default_sweeps)) * n_nodes


def run_simulate(cfg, out, workers):
    p = cfg.params
    g = read_edge_list(cfg.resolve(cfg.inputs["graph"]))
    params = _sis_params(p, g.max_degree)
    n_steps = _n_steps(p, g.n_nodes)
    every = int(p.get("record_every", g.n_nodes))
    ks = np.unique(g.degrees)
    files = []
    for seed in cfg.seeds:
        traj = sim.run_trajectory(g, params, p.get("rule", MONOPHILIC), p.get("sampler", "X"),
                                  float(p.get("init_fraction", 0.1)), n_steps, every,
                                  np.random.default_rng(seed))
        name = "trajectory_seed%d.csv" % seed
        write_csv(os.path.join(out, name), ["step", "k", "x_k"],
                  ((s, k, v) for s, row in zip(traj.steps, traj.x) for k, v in zip(ks, row)))
        rname = "rho_seed%d.csv" % seed
        write_csv(os.path.join(out, rname), ["step", "rho"], zip(traj.steps, traj.rho))
        files += [name, rname]
    return files


def run_meanfield(cfg, out, workers):
    p = cfg.params
    st, _ = _load_stats(cfg)
    grid = lambda_grid(p["lambdas"])
    try:
        r = assortativity(st)
    except ArithmeticError:
        r = float("nan")
    tol = float(p.get("tol", 1e-10))
    rows = []
    for rule in _rules(p):
        rho = meanfield.rho_lambda_curve(st, rule, grid, tol=tol)
        rows += [(l, v, rule, r) for l, v in zip(grid, rho)]
    write_csv(os.path.join(out, "curve.csv"), ["lambda", "rho", "rule", "assortativity"], rows)
    return ["curve.csv"]


def run_thresholds(cfg, out, workers):
    st, _ = _load_stats(cfg)
    rows = [(rule, meanfield.critical_threshold(st, rule),
             meanfield.expected_observed_degree(st, rule)) for rule in _rules(cfg.params)]
    write_csv(os.path.join(out, "thresholds.csv"), ["rule", "lambda_star", "expected_degree"],
              rows)
    return ["thresholds.csv"]


def run_sweep(cfg, out, workers):
    p = cfg.params
    g = read_edge_list(cfg.resolve(cfg.inputs["graph"]))
    sweep_cfg = sim.SweepConfig(nu=float(p.get("nu", 1.0)),
                                init_fraction=float(p.get("init_fraction", 0.1)),
                                sweeps=int(p.get("sweeps", 200)),
                                record_every=int(p.get("record_every", 0)),
                                tail_fraction=float(p.get("tail_fraction", 0.1)),
                                rho_cut=float(p.get("rho_cut", 0.01)))
    grid = lambda_grid(p["lambdas"])
    files, summary = [], []
    for rule in _rules(p):
        est = sim.estimate_threshold(g, rule, p.get("sampler", "X"), grid, cfg.seeds, sweep_cfg,
                                     workers)
        name = "sweep_%s.csv" % rule
        write_csv(os.path.join(out, name), ["lambda", "seed", "rho_terminal"],
                  ((l, s, est.rho[i, j]) for i, l in enumerate(grid)
                   for j, s in enumerate(est.seeds)))
        files.append(name)
        summary.append((rule, est.lambda_star, meanfield.critical_threshold(
            joint_degree_stats(g), rule)))
    write_csv(os.path.join(out, "sweep_summary.csv"),
              ["rule", "lambda_star_estimate", "lambda_star_meanfield"], summary)
    return files + ["sweep_summary.csv"]


def load_family(path):
    """Read a family manifest: member edge lists plus a kernel block.

    Example::

        members: [assortative.txt, disassortative.txt]
        kernel: {name: logistic, beta: 10, rho0: 0.2}

    ``name: constant`` takes a ``matrix`` instead.
    """
    with open(path) as fh:
        data = yaml.safe_load(fh)
    base = os.path.dirname(os.path.abspath(path))
    graphs = [read_edge_list(m if os.path.isabs(m) else os.path.join(base, m))
              for m in data["members"]]
    family = reactive.GraphFamily(graphs)
    spec = dict(data.get("kernel", {"name": "logistic"}))
    name = spec.pop("name", "logistic")
    if name == "logistic":
        kernel = reactive.LogisticSwitchKernel(family.degree_dist.probs, **spec)
    elif name == "constant":
        kernel = reactive.ConstantKernel(spec["matrix"])
    else:
        raise ConfigError("unknown kernel %r" % name)
    kernel.validate(len(family.degrees))
    return family, kernel


def _reactive_cell(args):
    family, kernel, params, init_fraction, n_steps, every, h, seed = args
    M = family.graphs[0].n_nodes
    coupled = reactive.simulate_coupled(family, kernel, params, init_fraction, n_steps,
                                        np.random.default_rng(seed), record_every=every)
    ode = reactive.integrate_constrained_ode(coupled.x[0], family, kernel, params, h, n_steps / M)
    return seed, coupled, ode, reactive.deviation_report(coupled, ode)


def run_reactive(cfg, out, workers):
    p = cfg.params
    family, kernel = load_family(cfg.resolve(cfg.inputs["family"]))
    M = family.graphs[0].n_nodes
    params = _sis_params(p, family.max_degree)
    n_steps = _n_steps(p, M, default_sweeps=50)
    h = float(p.get("step_size", 0.01))
    every = int(p.get("record_every", max(1, int(round(h * M)))))
    ks = family.degrees
    N = len(family)
    cells = [(family, kernel, params, float(p.get("init_fraction", 0.1)), n_steps, every, h, s)
             for s in cfg.seeds]
    files, dev_rows = [], []
    for seed, coupled, ode, dev in _map(_reactive_cell, cells, workers):
        name = "ode_seed%d.csv" % seed
        write_csv(os.path.join(out, name), ["t", "k", "x_k"] + ["pi_%d" % (i + 1) for i in range(N)],
                  ((t, k, v, *pi) for t, row, pi in zip(ode.t, ode.x, ode.pi)
                   for k, v in zip(ks, row)))
        cname = "coupled_seed%d.csv" % seed
        write_csv(os.path.join(out, cname), ["n", "member", "k", "x_k"],
                  ((n, m + 1, k, v) for n, m, row in zip(coupled.steps, coupled.members, coupled.x)
                   for k, v in zip(ks, row)))
        dev_rows.append((seed, dev, float(ode.residual.max())))
        files += [name, cname]
    write_csv(os.path.join(out, "deviation.csv"), ["seed", "max_deviation", "max_residual"],
              dev_rows)
    return files + ["deviation.csv"]


def _compare_cell(args):
    g, st, params, rule, sampler, init_fraction, n_steps, every, seed = args
    traj = sim.run_trajectory(g, params, rule, sampler, init_fraction, n_steps, every,
                              np.random.default_rng(seed))
    mf = meanfield.iterate(traj.x[0], st, params, rule, sampler, g.n_nodes, n_steps, every)
    dev = float(np.max(np.abs(traj.x - mf.x)))
    return seed, dev, sim.terminal_rho(traj), float(mf.rho[-1])


def run_compare(cfg, out, workers):
    """Monte Carlo against the mean-field recursion and the stationary solution."""
    p = cfg.params
    g = read_edge_list(cfg.resolve(cfg.inputs["graph"]))
    st = joint_degree_stats(g)
    params = _sis_params(p, g.max_degree)
    rule = p.get("rule", MONOPHILIC)
    n_steps = _n_steps(p, g.n_nodes, default_sweeps=50)
    every = int(p.get("record_every", 1))
    cells = [(g, st, params, rule, p.get("sampler", "X"), float(p.get("init_fraction", 0.1)),
              n_steps, every, s) for s in cfg.seeds]
    stationary = meanfield.stationary_solve(params.lam, st, rule).rho
    rows = [(seed, dev, rho_mc, rho_mf, stationary)
            for seed, dev, rho_mc, rho_mf in _map(_compare_cell, cells, workers)]
    write_csv(os.path.join(out, "compare.csv"),
              ["seed", "max_deviation", "rho_terminal_mc", "rho_final_meanfield",
               "rho_stationary"], rows)
    return ["compare.csv"]


def figure1_data(g, r_targets, lambdas, tolerance, rng, tol=1e-10):
    """Rewire ``g`` to each target and compute d(Z) CDFs and rho-lambda curves.

    Returns a dict with keys ``degrees``, ``cdfs`` (one row per target),
    ``achieved``, ``converged``, ``curves`` (rows of lambda, rho, rule, r)
    and ``thresholds`` (rows of r, rule, lambda_star, onset).
    """
    base = joint_degree_stats(g)
    ks = base.degrees
    cdfs, achieved, converged, curves, thresholds = [], [], [], [], []
    for r in r_targets:
        res = rewire_to_assortativity(g, float(r), None, tolerance, rng)
        st = joint_degree_stats(res.graph)
        if not np.array_equal(st.degrees, ks):
            raise RuntimeError("rewiring changed the degree classes")
        cdfs.append(np.cumsum(st.z_law()))
        achieved.append(res.assortativity)
        converged.append(res.converged)
        for rule in (NON_MONOPHILIC, MONOPHILIC):
            rho = meanfield.rho_lambda_curve(st, rule, lambdas, tol=tol)
            curves += [(l, v, rule, r) for l, v in zip(lambdas, rho)]
            thresholds.append((r, rule, meanfield.critical_threshold(st, rule),
                               meanfield.onset(lambdas, rho)))
    return {"degrees": ks, "cdfs": np.array(cdfs), "achieved": achieved,
            "converged": converged, "curves": curves, "thresholds": thresholds}


def run_figure1(cfg, out, workers):
    p = cfg.params
    rng = np.random.default_rng(cfg.seeds[0])
    spec = p.get("degrees", {"power_law": {"alpha": 2.5, "k_min": 2, "k_max": 50}, "n": 10_000})
    g = build_configuration_model(degree_sequence_from_spec(spec, rng), rng)
    targets = [float(r) for r in p.get("r_targets", [-0.3, 0.0, 0.3])]
    data = figure1_data(g, targets, lambda_grid(p["lambdas"]), float(p.get("tolerance", 0.005)),
                        rng, tol=float(p.get("tol", 1e-10)))
    write_csv(os.path.join(out, "fig1a_cdf.csv"), ["k"] + ["cdf_r%s" % r_label(r) for r in targets],
              ((k, *col) for k, col in zip(data["degrees"], data["cdfs"].T)))
    write_csv(os.path.join(out, "fig1b_curves.csv"), ["lambda", "rho", "rule", "r"], data["curves"])
    write_csv(os.path.join(out, "fig1_graphs.csv"), ["r_target", "r_achieved", "converged"],
              zip(targets, data["achieved"], data["converged"]))
    write_csv(os.path.join(out, "fig1b_onsets.csv"), ["r", "rule", "lambda_star", "onset"],
              data["thresholds"])
    return ["fig1a_cdf.csv", "fig1b_curves.csv", "fig1_graphs.csv", "fig1b_onsets.csv"]


PIPELINES = {
    "generate": run_generate,
    "rewire": run_rewire,
    "stats": run_stats,
    "simulate": run_simulate,
    "meanfield": run_meanfield,
    "thresholds": run_thresholds,
    "sweep": run_sweep,
    "reactive": run_reactive,
    "compare": run_compare,
    "figure1": run_figure1,
}
