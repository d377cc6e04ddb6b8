"""Experiment configuration files (YAML)."""

from __future__ import annotations

import copy
import hashlib
import json
import os
from dataclasses import dataclass, field

import yaml

from .errors import SisnetError

KINDS = ("generate", "rewire", "stats", "simulate", "meanfield", "thresholds", "sweep",
         "reactive", "compare", "figure1")

# inputs each kind needs; "graph|distribution" means either key
REQUIRED_INPUTS = {
    "generate": (),
    "rewire": ("graph",),
    "stats": ("graph",),
    "simulate": ("graph",),
    "meanfield": ("graph|distribution",),
    "thresholds": ("graph|distribution",),
    "sweep": ("graph",),
    "reactive": ("family",),
    "compare": ("graph",),
    "figure1": (),
}


class ConfigError(SisnetError, ValueError):
    pass


@dataclass
class ExperimentConfig:
    """One experiment: what to run, on which inputs, with which parameters and seeds.

    Relative input paths are resolved against ``base_dir`` (the directory of
    the config file) when the experiment runs.
    """

    kind: str
    seeds: list = field(default_factory=lambda: [0])
    inputs: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    output_dir: str = "out"
    base_dir: str = field(default=".", compare=False, repr=False)

    @classmethod
    def from_dict(cls, data, base_dir="."):
        if not isinstance(data, dict):
            raise ConfigError("config must be a mapping")
        unknown = set(data) - {"kind", "seeds", "inputs", "params", "output_dir"}
        if unknown:
            raise ConfigError("unknown config keys: %s" % sorted(unknown))
        if "kind" not in data:
            raise ConfigError("config needs a 'kind'")
        return cls(kind=data["kind"], seeds=list(data.get("seeds", [0])),
                   inputs=dict(data.get("inputs") or {}), params=dict(data.get("params") or {}),
                   output_dir=str(data.get("output_dir", "out")), base_dir=base_dir)

    def to_dict(self):
        return {"kind": self.kind, "seeds": list(self.seeds), "inputs": copy.deepcopy(self.inputs),
                "params": copy.deepcopy(self.params), "output_dir": self.output_dir}

    def dumps(self):
        return yaml.safe_dump(self.to_dict(), sort_keys=True)

    @classmethod
    def loads(cls, text, base_dir="."):
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError("config is not valid YAML: %s" % exc) from None
        return cls.from_dict(data, base_dir)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.loads(fh.read(), base_dir=os.path.dirname(os.path.abspath(path)))

    def digest(self):
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def resolve(self, path):
        return path if os.path.isabs(path) else os.path.join(self.base_dir, path)

    def validate(self):
        """Raise :class:`ConfigError` listing every problem found."""
        problems = []
        if self.kind not in KINDS:
            problems.append("kind must be one of %s, got %r" % (KINDS, self.kind))
        if not self.seeds:
            problems.append("seeds must be a nonempty list")
        elif not all(isinstance(s, int) and not isinstance(s, bool) and s >= 0
                     for s in self.seeds):
            problems.append("seeds must be nonnegative integers")
        for need in REQUIRED_INPUTS.get(self.kind, ()):
            options = need.split("|")
            if not any(o in self.inputs for o in options):
                problems.append("inputs.%s is required for kind %r" % (" or inputs.".join(options),
                                                                        self.kind))
        for key, path in self.inputs.items():
            if not isinstance(path, str) or not os.path.exists(self.resolve(path)):
                problems.append("inputs.%s: path %r does not exist" % (key, path))
        problems.extend(_check_params(self.kind, self.params))
        if problems:
            raise ConfigError("; ".join(problems))
        return self


def _check_params(kind, p):
    out = []

    def num(name, lo=None, hi=None, lo_open=False):
        if name not in p:
            return
        v = p[name]
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            out.append("params.%s must be a number" % name)
            return
        if lo is not None and (v <= lo if lo_open else v < lo):
            out.append("params.%s must be %s %g" % (name, ">" if lo_open else ">=", lo))
        if hi is not None and v > hi:
            out.append("params.%s must be <= %g" % (name, hi))

    num("nu", 0, 1)
    num("delta", 0, 1)
    num("init_fraction", 0, 1)
    num("steps", 1)
    num("sweeps", 1)
    num("record_every", 1)
    num("tolerance", 0, lo_open=True)
    num("tol", 0, lo_open=True)
    num("target_r", -1, 1)
    num("step_size", 0, lo_open=True)
    num("horizon", 0, lo_open=True)
    if "rule" in p and p["rule"] not in ("non-monophilic", "monophilic"):
        out.append("params.rule must be 'non-monophilic' or 'monophilic'")
    if "rules" in p and not set(p["rules"]) <= {"non-monophilic", "monophilic"}:
        out.append("params.rules may only contain 'non-monophilic' and 'monophilic'")
    if "sampler" in p and p["sampler"] not in ("X", "Y", "Z"):
        out.append("params.sampler must be X, Y or Z")
    if "lambdas" in p:
        lam = p["lambdas"]
        try:
            from .pipelines import lambda_grid
            grid = lambda_grid(lam)
            if len(grid) == 0 or min(grid) <= 0 or any(b <= a for a, b in zip(grid, grid[1:])):
                out.append("params.lambdas must be a positive increasing grid")
        except (TypeError, ValueError, KeyError):
            out.append("params.lambdas must be a list or {start, stop, step}")
    if kind in ("sweep", "meanfield", "figure1") and "lambdas" not in p:
        out.append("params.lambdas is required for kind %r" % kind)
    if kind == "rewire" and "target_r" not in p:
        out.append("params.target_r is required for kind 'rewire'")
    if kind == "generate" and "degrees" not in p:
        out.append("params.degrees is required for kind 'generate'")
    return out
