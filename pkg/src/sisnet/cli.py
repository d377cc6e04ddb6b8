"""Command-line runner: ``sisnet CONFIG [--seed N] [--validate-only]``.

Exit status is 0 on success, 2 when the config fails validation and 1 when
a pipeline raises. Errors are reported on stderr as one JSON object.

Environment overrides: ``SISNET_WORKERS`` (worker pool size, default 1) and
``SISNET_OUTPUT_DIR`` (replaces ``output_dir`` from the config).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from .config import ConfigError, ExperimentConfig

EXIT_OK, EXIT_RUNTIME, EXIT_INVALID = 0, 1, 2


def sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _workers():
    raw = os.environ.get("SISNET_WORKERS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError("SISNET_WORKERS must be an integer, got %r" % raw) from None
    if n < 1:
        raise ConfigError("SISNET_WORKERS must be >= 1")
    return n


def output_dir(cfg):
    out = os.environ.get("SISNET_OUTPUT_DIR") or cfg.output_dir
    return cfg.resolve(out)


def run(cfg, workers=1):
    """Run a validated config and return its manifest dict.

    CSV outputs and ``manifest.json`` go to the output directory. Stage
    timings are the only part of the manifest that varies between reruns.
    """
    from .pipelines import PIPELINES

    out = output_dir(cfg)
    os.makedirs(out, exist_ok=True)
    t0 = time.perf_counter()
    files = PIPELINES[cfg.kind](cfg, out, workers)
    elapsed = time.perf_counter() - t0
    manifest = {
        "config_hash": cfg.digest(),
        "kind": cfg.kind,
        "seeds": list(cfg.seeds),
        "version": __version__,
        "outputs": {f: sha256_file(os.path.join(out, f)) for f in sorted(files)},
        "stage_seconds": {cfg.kind: round(elapsed, 6)},
    }
    with open(os.path.join(out, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def _report(kind, exc):
    err = {"status": "error", "kind": kind, "error_type": type(exc).__name__,
           "module": type(exc).__module__, "message": str(exc)}
    print(json.dumps(err, sort_keys=True), file=sys.stderr)


def build_parser():
    ap = argparse.ArgumentParser(prog="sisnet", description="Run an SIS network experiment.")
    ap.add_argument("config", help="YAML experiment config")
    ap.add_argument("--seed", type=int, help="replace the config's seed list with this seed")
    ap.add_argument("--validate-only", action="store_true", help="check the config and exit")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = ExperimentConfig.load(args.config)
        if args.seed is not None:
            cfg.seeds = [args.seed]
        cfg.validate()
        workers = _workers()
    except (ConfigError, OSError) as exc:
        _report("validation", exc)
        return EXIT_INVALID
    if args.validate_only:
        print(json.dumps({"status": "valid", "kind": cfg.kind, "config_hash": cfg.digest()}))
        return EXIT_OK
    try:
        manifest = run(cfg, workers)
    except Exception as exc:  # surfaced to the caller as a structured report
        _report("runtime", exc)
        return EXIT_RUNTIME
    print(json.dumps({"status": "ok", "output_dir": output_dir(cfg),
                      "outputs": sorted(manifest["outputs"])}))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
