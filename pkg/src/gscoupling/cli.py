"""Command-line entry points. Results go to stdout (or --output) as JSON
validated against the bundled schema; logs go to stderr. Exit codes: 0 on
success, 1 on computation errors, 2 on usage errors."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import experiments, io
from .coupling import ParamPoint, SignalSet, evaluate_coupling, pairwise_thresholds, star_family, tau_roundtrip
from .graphs import Graph, is_connected
from .smoothness import smoothness
from .spectral import (
    FilterSpec,
    band_pass,
    basis_smoothness_values,
    eig_sym,
    laplacian,
)


@dataclass(frozen=True)
class Command:
    subcommand: str
    options: dict

    def __getitem__(self, key):
        return self.options[key]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gscoupling",
        description="Graph-signal coupling, signal smoothness, and smoothness-ordered filters.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed override")
    common.add_argument("--threads", type=int, default=1, help="worker cap for parallel sections")
    common.add_argument("--output", type=str, default=None, help="write the JSON result here (stdout otherwise)")
    common.add_argument("--tolerance", type=float, default=1e-10, help="numeric tolerance for checks")

    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("smoothness", parents=[common], help="smoothness of one signal on a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--signal", required=True)

    p = sub.add_parser("basis-smoothness", parents=[common],
                       help="smoothness of every Laplacian eigenvector")
    p.add_argument("--graph", required=True)
    p.add_argument("--m", type=int, default=None, help="band size for the reported index set")

    p = sub.add_parser("filter", parents=[common], help="apply a band-pass filter to a signal")
    p.add_argument("--graph", required=True)
    p.add_argument("--signal", required=True)
    p.add_argument("--indices", type=str, default=None, help="comma-separated 1-based eigen indices")
    p.add_argument("--m", type=int, default=None, help="band size when --indices is not given")
    p.add_argument("--ordering", choices=["frequency", "smoothness"], default="frequency")
    p.add_argument("--alpha", type=str, default="1,0", help="band,identity coefficients")

    p = sub.add_parser("denoise", parents=[common], help="lattice denoising benchmark")
    p.add_argument("--config", type=str, default=None, help="JSON config file")

    p = sub.add_parser("spectrum", parents=[common], help="coupling spectrum experiment")
    p.add_argument("--config", type=str, default=None, help="JSON config file")
    p.add_argument("--points", type=str, default=None, help="CSV point cloud (one point per row)")
    p.add_argument("--signals", type=str, default=None, help="CSV signals (one signal per row)")

    p = sub.add_parser("helix", parents=[common], help="helix example instance")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("roundtrip-check", parents=[common],
                       help="verify the conversion round trip and coupling recovery on a graph")
    p.add_argument("--graph", required=True)

    return parser


_FILE_OPTIONS = ("graph", "signal", "config", "points", "signals")


def parse_args(argv) -> Command:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    opts = vars(ns)
    if opts.get("threads") is not None and opts["threads"] < 1:
        parser.error("--threads must be >= 1")
    for key in _FILE_OPTIONS:
        value = opts.get(key)
        if value is not None and not Path(value).is_file():
            parser.error(f"--{key}: file not found: {value}")
    return Command(opts.pop("subcommand"), opts)


def _load_schema() -> dict:
    with resources.files("gscoupling.schemas").joinpath("report.schema.json").open() as fh:
        return json.load(fh)


def _emit(cmd: Command, payload: dict) -> None:
    jsonschema.validate(payload, _load_schema())
    text = io.to_json(payload)
    if cmd["output"]:
        Path(cmd["output"]).write_text(text + "\n")
        out_dir = Path(cmd["output"]).parent
        stem = Path(cmd["output"]).stem
        if payload.get("series"):
            io.write_series_csv(out_dir, stem, payload["series"])
        print(f"wrote {cmd['output']}", file=sys.stderr)
    else:
        print(text)


def _envelope(kind: str, seed, config: dict, results: dict, series: dict | None = None) -> dict:
    payload = {
        "schema_version": experiments.SCHEMA_VERSION,
        "kind": kind,
        "seed": seed,
        "config": config,
        "results": results,
    }
    if series:
        payload["series"] = series
    return payload


def _single_signal(path) -> np.ndarray:
    sig = io.read_signals_csv(path)
    return sig[0]


def _graph_dict(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges]}


def _run_smoothness(cmd: Command) -> dict:
    g = io.read_graph_file(cmd["graph"])
    f = _single_signal(cmd["signal"])
    rep = smoothness(g, f)
    blocks = [[r.start, r.stop - 1] if len(r) else [] for r in rep.partition.blocks()]
    return _envelope(
        "smoothness", cmd["seed"],
        {"graph": cmd["graph"], "signal": cmd["signal"]},
        {
            "epsilon": rep.epsilon,
            "degenerate": rep.degenerate,
            "partition_blocks": blocks,
            "partition": rep.partition.describe(),
            "per_pair_eps": list(rep.per_pair_eps),
            "normalizer": rep.normalizer,
            "breakdown": [
                {"edges": [list(e) for e in t.graph.edges],
                 "measure": t.measure,
                 "hamming": t.hamming}
                for t in rep.breakdown
            ],
        },
    )


def _run_basis_smoothness(cmd: Command) -> dict:
    g = io.read_graph_file(cmd["graph"])
    basis = eig_sym(laplacian(g))
    eps = basis_smoothness_values(g, basis)
    sigma = [int(i) + 1 for i in np.argsort(np.array(eps), kind="stable")]
    m = cmd["m"] if cmd["m"] is not None else max(1, round(0.2 * g.n))
    if not (1 <= m <= g.n):
        raise ValueError(f"--m must be in 1..{g.n}")
    return _envelope(
        "basis-smoothness", cmd["seed"],
        {"graph": cmd["graph"], "m": m},
        {
            "eigenvalues": list(basis.eigenvalues),
            "smoothness": list(eps),
            "sigma": sigma,
            "band_smoothness": sorted(sigma[:m]),
            "band_frequency": list(range(1, m + 1)),
        },
    )


def _run_filter(cmd: Command) -> dict:
    g = io.read_graph_file(cmd["graph"])
    f = _single_signal(cmd["signal"])
    basis = eig_sym(laplacian(g))
    alpha = tuple(float(a) for a in cmd["alpha"].split(","))
    if len(alpha) != 2:
        raise ValueError("--alpha needs exactly two comma-separated numbers")
    if cmd["indices"] is not None:
        indices = tuple(int(i) for i in cmd["indices"].split(","))
    else:
        m = cmd["m"]
        if m is None:
            raise ValueError("give either --indices or --m")
        if cmd["ordering"] == "frequency":
            indices = tuple(range(1, m + 1))
        else:
            eps = basis_smoothness_values(g, basis)
            sigma = [int(i) + 1 for i in np.argsort(np.array(eps), kind="stable")]
            indices = tuple(sorted(sigma[:m]))
    out = band_pass(f, basis, FilterSpec(indices, alpha))
    return _envelope(
        "filter", cmd["seed"],
        {"graph": cmd["graph"], "signal": cmd["signal"],
         "indices": list(indices), "alpha": list(alpha), "ordering": cmd["ordering"]},
        {"filtered": list(out)},
    )


def _run_denoise(cmd: Command) -> dict:
    kwargs = io.load_json(cmd["config"]) if cmd["config"] else {}
    if "alpha_grid" in kwargs:
        kwargs["alpha_grid"] = tuple(kwargs["alpha_grid"])
    if cmd["seed"] is not None:
        kwargs["seed"] = cmd["seed"]
    cfg = experiments.DenoiseConfig(**kwargs)
    rep = experiments.denoise_experiment(cfg, threads=cmd["threads"])
    return rep.to_json_dict()


def _run_spectrum(cmd: Command) -> dict:
    kwargs = io.load_json(cmd["config"]) if cmd["config"] else {}
    if cmd["seed"] is not None:
        kwargs["seed"] = cmd["seed"]
    cfg = experiments.SpectrumConfig(**kwargs)
    points = io.read_signals_csv(cmd["points"]) if cmd["points"] else None
    signals = io.read_signals_csv(cmd["signals"]) if cmd["signals"] else None
    rep = experiments.coupling_spectrum_experiment(cfg, points=points, signals=signals,
                                                   threads=cmd["threads"])
    return rep.to_json_dict()


def _run_helix(cmd: Command) -> dict:
    g, f = experiments.helix_instance(cmd["n"])
    rep = smoothness(g, f)
    return _envelope(
        "helix", cmd["seed"], {"n": cmd["n"]},
        {
            "graph": _graph_dict(g),
            "signal": list(f),
            "epsilon": rep.epsilon,
        },
    )


def _run_roundtrip(cmd: Command) -> dict:
    g = io.read_graph_file(cmd["graph"])
    if not is_connected(g):
        raise ValueError("round-trip check requires a connected graph")
    seed = cmd["seed"] if cmd["seed"] is not None else 0
    rng = np.random.default_rng([seed])
    rt_ok = tau_roundtrip(g) == g
    fs = SignalSet(g, rng.standard_normal((3, g.n)))
    recover_ok = evaluate_coupling(g, fs, ParamPoint(1.0, (0.0, 0.0, 0.0))) == g
    f = rng.standard_normal(g.n)
    fam = star_family(f)
    diffs = np.abs(f[:, None] - f[None, :])
    thresholds_ok = bool(np.allclose(pairwise_thresholds(fam), diffs, rtol=0, atol=0))
    ok = rt_ok and recover_ok and thresholds_ok
    payload = _envelope(
        "roundtrip-check", seed, {"graph": cmd["graph"]},
        {
            "roundtrip_identity": rt_ok,
            "base_recovered": recover_ok,
            "signal_differences_recovered": thresholds_ok,
            "ok": ok,
        },
    )
    if not ok:
        raise RuntimeError("round-trip verification failed: " + io.to_json(payload["results"]))
    return payload


_RUNNERS = {
    "smoothness": _run_smoothness,
    "basis-smoothness": _run_basis_smoothness,
    "filter": _run_filter,
    "denoise": _run_denoise,
    "spectrum": _run_spectrum,
    "helix": _run_helix,
    "roundtrip-check": _run_roundtrip,
}


def run(cmd: Command) -> int:
    try:
        payload = _RUNNERS[cmd.subcommand](cmd)
        _emit(cmd, payload)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    cmd = parse_args(sys.argv[1:] if argv is None else argv)
    return run(cmd)


if __name__ == "__main__":
    sys.exit(main())
