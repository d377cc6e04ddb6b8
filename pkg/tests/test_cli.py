import csv
import json

import pytest
import yaml
from hypothesis import given, settings
from hypothesis import strategies as st

from sisnet.cli import main
from sisnet.config import KINDS, ConfigError, ExperimentConfig
from sisnet.graph import circulant_graph, star_graph, write_edge_list
from sisnet.pipelines import lambda_grid


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def write_config(path, data):
    path.write_text(yaml.safe_dump(data))
    return str(path)


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.delenv("SISNET_OUTPUT_DIR", raising=False)
    monkeypatch.delenv("SISNET_WORKERS", raising=False)
    write_edge_list(star_graph(4), tmp_path / "star.txt")
    write_edge_list(circulant_graph(60, 4), tmp_path / "ring.txt")
    return tmp_path


# --- config ------------------------------------------------------------------------

scalars = st.one_of(st.integers(-5, 5), st.floats(-10, 10, allow_nan=False), st.text(max_size=5),
                    st.booleans())


@settings(max_examples=60, deadline=None)
@given(kind=st.sampled_from(KINDS), seeds=st.lists(st.integers(0, 10**6), min_size=1, max_size=4),
       params=st.dictionaries(st.text(min_size=1, max_size=6), scalars, max_size=4),
       inputs=st.dictionaries(st.sampled_from(["graph", "family"]), st.text(max_size=8)))
def test_config_round_trip(kind, seeds, params, inputs):
    cfg = ExperimentConfig(kind=kind, seeds=seeds, inputs=inputs, params=params)
    back = ExperimentConfig.loads(cfg.dumps())
    assert back == cfg
    assert back.digest() == cfg.digest()


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"kind": "stats", "colour": 1})


def test_config_validation_collects_problems(workdir):
    cfg = ExperimentConfig(kind="sweep", seeds=[-1], inputs={"graph": "missing.txt"},
                           params={"nu": 2, "rule": "x"}, base_dir=str(workdir))
    with pytest.raises(ConfigError) as info:
        cfg.validate()
    msg = str(info.value)
    for needle in ("seeds", "missing.txt", "params.nu", "params.rule", "params.lambdas"):
        assert needle in msg


def test_lambda_grid():
    assert lambda_grid({"start": 1.0, "stop": 1.2, "step": 0.05}) == [1.0, 1.05, 1.1, 1.15, 1.2]
    assert lambda_grid([2, 3]) == [2.0, 3.0]


# --- runner --------------------------------------------------------------------------


def test_thresholds_on_star(workdir, capsys):
    cfg = write_config(workdir / "c.yaml", {"kind": "thresholds", "inputs": {"graph": "star.txt"},
                                            "output_dir": "out"})
    assert main([cfg]) == 0
    rows = {r["rule"]: r for r in read_csv(workdir / "out" / "thresholds.csv")}
    assert float(rows["non-monophilic"]["lambda_star"]) == pytest.approx(2.5, abs=1e-9)
    assert float(rows["monophilic"]["lambda_star"]) == pytest.approx(20 / 17, abs=1e-9)
    manifest = json.loads((workdir / "out" / "manifest.json").read_text())
    assert set(manifest["outputs"]) == {"thresholds.csv"}
    assert manifest["seeds"] == [0]


def test_simulate_zero_init(workdir):
    cfg = write_config(workdir / "c.yaml", {
        "kind": "simulate", "inputs": {"graph": "ring.txt"}, "seeds": [1, 2],
        "params": {"init_fraction": 0.0, "lambda": 3.0, "sweeps": 5}, "output_dir": "o"})
    assert main([cfg]) == 0
    for s in (1, 2):
        rows = read_csv(workdir / "o" / ("rho_seed%d.csv" % s))
        assert len(rows) == 6
        assert all(float(r["rho"]) == 0 for r in rows)


def test_byte_identical_reruns(workdir):
    cfg = write_config(workdir / "c.yaml", {
        "kind": "sweep", "inputs": {"graph": "ring.txt"}, "seeds": [0, 1],
        "params": {"lambdas": [0.5, 2.0], "sweeps": 5}, "output_dir": "o"})
    outputs = []
    for _ in range(2):
        assert main([cfg]) == 0
        outputs.append({f: (workdir / "o" / f).read_bytes() for f in (
            "sweep_non-monophilic.csv", "sweep_monophilic.csv", "sweep_summary.csv")})
    assert outputs[0] == outputs[1]


def test_seed_override_and_env(workdir, monkeypatch):
    cfg = write_config(workdir / "c.yaml", {
        "kind": "simulate", "inputs": {"graph": "ring.txt"}, "seeds": [0],
        "params": {"lambda": 3.0, "sweeps": 2}, "output_dir": "o"})
    monkeypatch.setenv("SISNET_OUTPUT_DIR", str(workdir / "elsewhere"))
    assert main([cfg, "--seed", "5"]) == 0
    assert (workdir / "elsewhere" / "rho_seed5.csv").exists()
    assert not (workdir / "o").exists()
    monkeypatch.setenv("SISNET_WORKERS", "zero")
    assert main([cfg]) == 2


def test_validate_only(workdir, capsys):
    cfg = write_config(workdir / "c.yaml", {"kind": "stats", "inputs": {"graph": "star.txt"}})
    assert main([cfg, "--validate-only"]) == 0
    assert json.loads(capsys.readouterr().out)["status"] == "valid"
    assert not (workdir / "out").exists()


def test_validation_exit_code(workdir, capsys):
    cfg = write_config(workdir / "c.yaml", {"kind": "rewire", "inputs": {"graph": "nope.txt"}})
    assert main([cfg]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["kind"] == "validation" and "nope.txt" in err["message"]
    (workdir / "bad.yaml").write_text("kind: [unclosed")
    assert main([str(workdir / "bad.yaml")]) == 2
    assert main([str(workdir / "absent.yaml")]) == 2


def test_runtime_exit_code(workdir, capsys):
    # a regular graph has no defined assortativity, so rewiring fails at run time
    cfg = write_config(workdir / "c.yaml", {"kind": "rewire", "inputs": {"graph": "ring.txt"},
                                            "params": {"target_r": 0.1}})
    assert main([cfg]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["kind"] == "runtime"
    assert err["error_type"] == "UndefinedAssortativityError"
    assert err["module"] == "sisnet.errors"


def test_generate_then_stats(workdir):
    gen = write_config(workdir / "g.yaml", {
        "kind": "generate", "seeds": [4], "output_dir": "g",
        "params": {"degrees": {"power_law": {"alpha": 2.5, "k_min": 2, "k_max": 20}, "n": 500}}})
    assert main([gen]) == 0
    stats = write_config(workdir / "s.yaml", {"kind": "stats", "inputs": {"graph": "g/edges.txt"},
                                              "output_dir": "s"})
    assert main([stats]) == 0
    laws = read_csv(workdir / "s" / "degree_laws.csv")
    for col in ("P_X", "P_Y", "P_Z"):
        assert sum(float(r[col]) for r in laws) == pytest.approx(1.0, abs=1e-8)
    summary = {r["metric"]: r["value"] for r in read_csv(workdir / "s" / "stats.csv")}
    assert summary["fosd_Z_over_X"] == "true"
    assert float(summary["expected_degree_Y"]) >= float(summary["expected_degree_X"])


def test_meanfield_from_distribution(workdir):
    (workdir / "dist.csv").write_text("k,P_k\n1,0.5\n2,0.3\n3,0.2\n")
    cfg = write_config(workdir / "c.yaml", {
        "kind": "meanfield", "inputs": {"distribution": "dist.csv"}, "output_dir": "o",
        "params": {"lambdas": {"start": 1.0, "stop": 3.0, "step": 0.5}}})
    assert main([cfg]) == 0
    rows = read_csv(workdir / "o" / "curve.csv")
    assert {r["rule"] for r in rows} == {"non-monophilic", "monophilic"}
    # uncorrelated input: Case 1 threshold 3 / 1.7, so rho is zero at 1.5 and positive at 2
    c1 = {float(r["lambda"]): float(r["rho"]) for r in rows if r["rule"] == "non-monophilic"}
    assert c1[1.5] == 0 and c1[2.0] > 0


def test_compare_and_reactive(workdir):
    ring = circulant_graph(60, 4)
    cfg = write_config(workdir / "c.yaml", {
        "kind": "compare", "inputs": {"graph": "ring.txt"}, "seeds": [0],
        "params": {"nu": 1.0, "delta": 0.5, "sweeps": 5, "rule": "non-monophilic"},
        "output_dir": "cmp"})
    assert main([cfg]) == 0
    row = read_csv(workdir / "cmp" / "compare.csv")[0]
    assert float(row["rho_stationary"]) == pytest.approx(0.5, abs=1e-8)
    assert 0 <= float(row["max_deviation"]) <= 1

    (workdir / "fam.yaml").write_text(yaml.safe_dump({
        "members": ["ring.txt", "ring.txt"],
        "kernel": {"name": "constant", "matrix": [[0.5, 0.5], [0.5, 0.5]]}}))
    cfg = write_config(workdir / "r.yaml", {
        "kind": "reactive", "inputs": {"family": "fam.yaml"}, "seeds": [3],
        "params": {"nu": 1.0, "delta": 0.5, "sweeps": 2}, "output_dir": "rx"})
    assert main([cfg]) == 0
    ode = read_csv(workdir / "rx" / "ode_seed3.csv")
    assert set(ode[0]) == {"t", "k", "x_k", "pi_1", "pi_2"}
    coupled = read_csv(workdir / "rx" / "coupled_seed3.csv")
    assert {r["member"] for r in coupled} <= {"1", "2"}
    assert ring.n_nodes == 60


def test_figure1_pipeline(workdir):
    cfg = write_config(workdir / "f.yaml", {
        "kind": "figure1", "seeds": [0], "output_dir": "fig",
        "params": {"degrees": {"power_law": {"alpha": 2.5, "k_min": 2, "k_max": 30}, "n": 2000},
                   "lambdas": {"start": 0.5, "stop": 20, "step": 0.5}, "tolerance": 0.02}})
    assert main([cfg]) == 0
    cdf = read_csv(workdir / "fig" / "fig1a_cdf.csv")
    assert list(cdf[0]) == ["k", "cdf_r-0.3", "cdf_r0", "cdf_r+0.3"]
    for r in cdf:
        a, b, c = (float(r[h]) for h in ("cdf_r-0.3", "cdf_r0", "cdf_r+0.3"))
        assert a <= b + 1e-9 and b <= c + 1e-9
    curves = read_csv(workdir / "fig" / "fig1b_curves.csv")
    assert list(curves[0]) == ["lambda", "rho", "rule", "r"]
    case1 = {}
    for r in curves:
        if r["rule"] == "non-monophilic":
            case1.setdefault(r["lambda"], set()).add(r["rho"])
    assert all(len(v) == 1 for v in case1.values())
