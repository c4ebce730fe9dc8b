"""Command line entry point.

Subcommands cover the full pipeline: synthesize datasets, report ordering
bandwidth and savings, train band or baseline models, sample graphs,
evaluate samples against a held-out set, random-search hyperparameters,
visualize one reordering, and correlate savings with likelihood gains
across runs.  Every run resolves a flat configuration (defaults <- TOML
file <- --set overrides), echoes it into its outputs, and stamps them
with a hash of the resolved values.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import datasets, metrics, model
from .errors import BandgenError, FormatError, InputError
from .graph import (
    apply_ordering,
    bandwidth_of_ordering,
    identity_ordering,
    savings_factor,
)
from .metrics import KernelConfig, spearman_r
from .ordering import OrderingConfig, TieBreak, cuthill_mckee, make_ordering
from .graph import OrderingFamily
from .rng import derive_seed

CONFIG_DEFAULTS: dict = {
    "seed": 0,
    "mode": "bwr",
    "tie_break": "random",
    "hidden": 128,
    "gru_layers": 4,
    "mlp_hidden": 128,
    "lr": 1e-3,
    "weight_decay": 0.0,
    "epochs": 100,
    "batches_per_epoch": 30,
    "val_batches": 9,
    "batch_size": 32,
    "temperature": 1.0,
    "max_nodes": 500,
    "val_frac": 0.2,
    "width_samples": 100000,
    "k_neighbors": 5,
    "degree_sigma": 1.0,
    "cluster_sigma": 1.0,
    "spectra_sigma": 1.0,
    "orbit_sigma": 30.0,
    "cluster_bins": 100,
    "spectrum_bins": 200,
    "embed_bins": 32,
    "workers": 1,
}


def resolve_config(config_path: str | None, sets: list[str] | None) -> dict:
    """Layer defaults, the environment seed, a TOML file, and --set pairs."""
    resolved = dict(CONFIG_DEFAULTS)
    env_seed = os.environ.get("BANDGEN_SEED")
    if env_seed is not None:
        try:
            resolved["seed"] = int(env_seed)
        except ValueError as exc:
            raise InputError(f"BANDGEN_SEED must be an integer, got {env_seed!r}") from exc
    if config_path:
        with open(config_path, "rb") as fh:
            try:
                loaded = tomllib.load(fh)
            except tomllib.TOMLDecodeError as exc:
                raise FormatError(f"config is not valid TOML: {exc}") from exc
        _merge(resolved, loaded, source=config_path)
    for pair in sets or []:
        if "=" not in pair:
            raise InputError(f"--set expects key=value, got {pair!r}")
        key, raw = pair.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        _merge(resolved, {key: value}, source="--set")
    return resolved


def _merge(resolved: dict, updates: dict, source: str) -> None:
    for key, value in updates.items():
        if key not in resolved:
            raise FormatError(f"unknown config key {key!r} (from {source})")
        default = CONFIG_DEFAULTS[key]
        if isinstance(default, int) and not isinstance(default, bool):
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise FormatError(f"config key {key!r} must be a number (from {source})")
            value = int(value)
        elif isinstance(default, float):
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise FormatError(f"config key {key!r} must be a number (from {source})")
            value = float(value)
        elif isinstance(default, str) and not isinstance(value, str):
            raise FormatError(f"config key {key!r} must be a string (from {source})")
        resolved[key] = value


def config_hash(resolved: dict) -> str:
    canon = json.dumps(resolved, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def _kernel_config(cfg: dict) -> KernelConfig:
    return KernelConfig(
        degree_sigma=cfg["degree_sigma"],
        cluster_sigma=cfg["cluster_sigma"],
        spectra_sigma=cfg["spectra_sigma"],
        orbit_sigma=cfg["orbit_sigma"],
        cluster_bins=cfg["cluster_bins"],
        spectrum_bins=cfg["spectrum_bins"],
        embed_bins=cfg["embed_bins"],
        k_neighbors=cfg["k_neighbors"],
    )


def _ordering_config(cfg: dict, mode: str) -> OrderingConfig:
    family = OrderingFamily.CM if mode == "bwr" else OrderingFamily.BFS
    return OrderingConfig(
        family=family, seed=cfg["seed"], tie_break=TieBreak(cfg["tie_break"])
    )


def _model_config(cfg: dict, row_width: int) -> model.ModelConfig:
    return model.ModelConfig(
        row_width=row_width,
        hidden=cfg["hidden"],
        gru_layers=cfg["gru_layers"],
        mlp_hidden=cfg["mlp_hidden"],
        lr=cfg["lr"],
        weight_decay=cfg["weight_decay"],
        epochs=cfg["epochs"],
        batches_per_epoch=cfg["batches_per_epoch"],
        val_batches=cfg["val_batches"],
        batch_size=cfg["batch_size"],
        temperature=cfg["temperature"],
        max_nodes=cfg["max_nodes"],
        seed=cfg["seed"],
    )


# --- subcommands -------------------------------------------------------------


def cmd_dataset(args) -> int:
    cfg = resolve_config(args.config, args.set)
    seed = args.seed if args.seed is not None else cfg["seed"]
    count = args.replicas if args.kind == "grid2d" else args.count
    graphs = datasets.DatasetSpec(kind=args.kind, count=count, seed=seed).realize()
    if args.connected_only:
        graphs = datasets.filter_connected(graphs)
    if args.min_nodes is not None or args.max_nodes is not None:
        lo = args.min_nodes if args.min_nodes is not None else 1
        hi = args.max_nodes if args.max_nodes is not None else max(g.n for g in graphs)
        graphs = datasets.filter_size(graphs, lo, hi)
    if not graphs:
        raise InputError("all graphs were filtered out")
    datasets.save_jsonl(args.out, graphs)
    print(f"wrote {len(graphs)} graphs to {args.out}")
    return 0


def cmd_report(args) -> int:
    cfg = resolve_config(args.config, args.set)
    graphs = datasets.load_jsonl(args.infile)
    ordering_cfg = _ordering_config(cfg, "bwr")
    report = datasets.bandwidth_report(graphs, ordering_cfg, workers=cfg["workers"])
    name = args.name or Path(args.infile).stem
    columns = [
        "dataset",
        "n_mean",
        "n_std",
        "bw_mean",
        "bw_std",
        "savings_mean",
        "savings_std",
        "bw_max",
    ]
    rep = report.as_dict()
    row = [name] + [_fmt(rep[c]) for c in columns[1:]]
    lines = [
        f"# config_hash={config_hash(cfg)}",
        "\t".join(columns),
        "\t".join(row),
    ]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _fmt(x) -> str:
    if isinstance(x, int):
        return str(x)
    return f"{x:.6f}"


def cmd_train(args) -> int:
    cfg = resolve_config(args.config, args.set)
    cfg["mode"] = args.mode
    graphs = datasets.load_jsonl(args.data)
    if args.val:
        train_graphs = graphs
        val_graphs = datasets.load_jsonl(args.val)
    else:
        vf = cfg["val_frac"]
        if not 0.0 < vf < 1.0:
            raise InputError(f"val_frac must be in (0, 1), got {vf}")
        train_graphs, val_graphs = datasets.split(graphs, (1.0 - vf, vf), cfg["seed"])
        if not train_graphs or not val_graphs:
            raise InputError(
                f"{len(graphs)} graphs cannot be split with val_frac={vf}"
            )
    ordering_cfg = _ordering_config(cfg, args.mode)
    d = model.estimate_row_width(
        train_graphs, args.mode, ordering_cfg, samples=cfg["width_samples"]
    )
    mcfg = _model_config(cfg, d)
    params = model.init_params(mcfg)
    best, history = model.train(params, mcfg, train_graphs, val_graphs, ordering_cfg)
    extra = {
        "mode": args.mode,
        "config_echo": cfg,
        "config_hash": config_hash(cfg),
    }
    model.save_checkpoint(args.out, best, mcfg, ordering_cfg, history, extra)
    best_val = min(h["val_bce"] for h in history)
    print(f"row_width={d} best_val_bce={best_val:.6f} checkpoint={args.out}")
    return 0


def cmd_sample(args) -> int:
    params, mcfg, _ordering, _history, _extra = model.load_checkpoint(args.ckpt)
    overrides = {}
    if args.temperature is not None:
        overrides["temperature"] = args.temperature
    if args.max_nodes is not None:
        overrides["max_nodes"] = args.max_nodes
    if overrides:
        from dataclasses import replace

        mcfg = replace(mcfg, **overrides)
    graphs = model.sample(params, mcfg, args.count, seed=args.seed)
    datasets.save_jsonl(args.out, graphs)
    print(f"wrote {len(graphs)} sampled graphs to {args.out}")
    return 0


def cmd_eval(args) -> int:
    cfg = resolve_config(args.config, args.set)
    params, mcfg, ordering_cfg, _history, extra = model.load_checkpoint(args.ckpt)
    test_graphs = datasets.load_jsonl(args.test)
    count = args.samples or len(test_graphs)
    generated = model.sample(params, mcfg, count, seed=derive_seed(cfg["seed"], 9))
    kcfg = _kernel_config(cfg)
    workers = cfg["workers"]
    gen_stats = metrics.stats_many(generated, kcfg, workers)
    ref_stats = metrics.stats_many(test_graphs, kcfg, workers)
    mmd = metrics.mmd_suite(
        generated,
        test_graphs,
        kcfg,
        generated_stats=gen_stats,
        reference_stats=ref_stats,
    )
    pr = metrics.f1_pr(
        generated,
        test_graphs,
        kcfg,
        generated_stats=gen_stats,
        reference_stats=ref_stats,
    )
    lls = [
        model.log_likelihood(
            params, mcfg, g, ordering_cfg.reseeded(derive_seed(cfg["seed"], 10, i))
        )
        for i, g in enumerate(test_graphs)
    ]
    auprc = model.reconstruction_auprc(params, mcfg, test_graphs, ordering_cfg)
    doc = {
        "mmd": mmd.as_dict(),
        "f1_pr": pr.as_dict(),
        "auprc": auprc,
        "mean_ll": float(np.mean(lls)),
        "mode": extra.get("mode"),
        "config_echo": cfg,
        "config_hash": config_hash(cfg),
    }
    payload = json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return 0


def cmd_hyperopt(args) -> int:
    cfg = resolve_config(args.config, args.set)
    graphs = datasets.load_jsonl(args.data)
    vf = cfg["val_frac"]
    train_graphs, val_graphs = datasets.split(graphs, (1.0 - vf, vf), cfg["seed"])
    if not train_graphs or not val_graphs:
        raise InputError(f"{len(graphs)} graphs cannot be split with val_frac={vf}")
    ordering_cfg = _ordering_config(cfg, args.mode)
    d = model.estimate_row_width(
        train_graphs, args.mode, ordering_cfg, samples=cfg["width_samples"]
    )
    kcfg = _kernel_config(cfg)

    def objective(draw: dict) -> float:
        trial_cfg = dict(cfg)
        trial_cfg.update(draw)
        mcfg = _model_config(trial_cfg, d)
        params = model.init_params(mcfg)
        best, _hist = model.train(params, mcfg, train_graphs, val_graphs, ordering_cfg)
        generated = model.sample(
            best, mcfg, len(val_graphs), seed=derive_seed(cfg["seed"], 11)
        )
        score = metrics.mmd_suite(generated, val_graphs, kcfg).mean
        if args.objective == "mmd_minus_auprc":
            score -= model.reconstruction_auprc(best, mcfg, val_graphs, ordering_cfg)
        return score

    space = {"lr": (1e-5, 1e-2), "weight_decay": (1e-12, 1e-2)}
    best_draw, log = model.random_search(
        space, args.trials, objective, seed=cfg["seed"]
    )

    temperature = cfg["temperature"]
    temp_scores = []
    if args.temp_grid:
        taus = [float(x) for x in args.temp_grid.split(",") if x.strip()]
        if not taus or any(t <= 0 for t in taus):
            raise InputError(f"--temp-grid needs positive floats, got {args.temp_grid!r}")
        tuned = dict(cfg)
        tuned.update(best_draw)
        mcfg = _model_config(tuned, d)
        params = model.init_params(mcfg)
        best, _hist = model.train(params, mcfg, train_graphs, val_graphs, ordering_cfg)
        from dataclasses import replace

        for tau in taus:
            generated = model.sample(
                best, replace(mcfg, temperature=tau), len(val_graphs),
                seed=derive_seed(cfg["seed"], 12),
            )
            temp_scores.append(
                {"temperature": tau, "mmd_mean": metrics.mmd_suite(generated, val_graphs, kcfg).mean}
            )
        temperature = min(temp_scores, key=lambda r: r["mmd_mean"])["temperature"]

    doc = {
        "best": {**best_draw, "temperature": temperature},
        "trials": log,
        "temperature_grid": temp_scores,
        "row_width": d,
        "config_echo": cfg,
        "config_hash": config_hash(cfg),
    }
    payload = json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return 0


def cmd_reorder(args) -> int:
    cfg = resolve_config(args.config, args.set)
    graphs = datasets.load_jsonl(args.infile)
    if not 0 <= args.index < len(graphs):
        raise InputError(f"graph index {args.index} out of range (file has {len(graphs)})")
    g = graphs[args.index]
    seed = args.seed if args.seed is not None else cfg["seed"]
    before_cfg = OrderingConfig(
        family=OrderingFamily(args.before), seed=seed, tie_break=TieBreak(cfg["tie_break"])
    )
    before = make_ordering(g, before_cfg)
    after = cuthill_mckee(
        g, OrderingConfig(seed=seed, tie_break=TieBreak(cfg["tie_break"]))
    )
    bw_before = bandwidth_of_ordering(g, before)
    bw_after = bandwidth_of_ordering(g, after)
    print(f"bandwidth: {bw_before} -> {bw_after}")
    if args.out_prefix:
        tag = config_hash(cfg)
        _write_pgm(f"{args.out_prefix}_before.pgm", g, before, tag)
        _write_pgm(f"{args.out_prefix}_cm.pgm", g, after, tag)
    return 0


def _write_pgm(path: str, g, ordering, tag: str) -> None:
    """ASCII graymap of the permuted adjacency matrix (edges black)."""
    rg = apply_ordering(g, ordering)
    n = rg.n
    rows = []
    for u in range(n):
        cells = ["255"] * n
        for v in rg.adj[u]:
            cells[v] = "0"
        rows.append(" ".join(cells))
    Path(path).write_text(
        f"P2\n# config_hash={tag}\n{n} {n}\n255\n" + "\n".join(rows) + "\n",
        encoding="utf-8",
    )


def cmd_correlate(args) -> int:
    cfg = resolve_config(args.config, args.set)
    if len(args.run) < 3:
        raise InputError(f"correlation needs at least 3 runs, got {len(args.run)}")
    rows = []
    for spec_str in args.run:
        parts = spec_str.split(":")
        if len(parts) != 4:
            raise InputError(
                f"--run expects NAME:BAND_EVAL:BASELINE_EVAL:REPORT_TSV, got {spec_str!r}"
            )
        name, band_path, base_path, tsv_path = parts
        band = _read_eval(band_path)
        base = _read_eval(base_path)
        savings = _read_report_savings(tsv_path)
        rows.append(
            {
                "name": name,
                "savings_mean": savings,
                "delta_ll": band["mean_ll"] - base["mean_ll"],
            }
        )
    r = spearman_r([x["savings_mean"] for x in rows], [x["delta_ll"] for x in rows])
    doc = {
        "runs": rows,
        "spearman_savings_vs_delta_ll": r,
        "config_echo": cfg,
        "config_hash": config_hash(cfg),
    }
    payload = json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return 0


def _read_eval(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: not valid JSON ({exc.msg})") from exc
    if not isinstance(doc, dict) or "mean_ll" not in doc:
        raise FormatError(f"{path}: missing 'mean_ll'")
    return doc


def _read_report_savings(path: str) -> float:
    lines = [
        ln
        for ln in Path(path).read_text(encoding="utf-8").splitlines()
        if ln and not ln.startswith("#")
    ]
    if len(lines) < 2:
        raise FormatError(f"{path}: expected a header and at least one row")
    header = lines[0].split("\t")
    if "savings_mean" not in header:
        raise FormatError(f"{path}: no savings_mean column")
    col = header.index("savings_mean")
    try:
        return float(lines[1].split("\t")[col])
    except (IndexError, ValueError) as exc:
        raise FormatError(f"{path}: malformed savings_mean value") from exc


# --- wiring -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bandgen",
        description="Bandwidth-restricted graph generation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="TOML configuration file")
        p.add_argument(
            "--set",
            action="append",
            metavar="KEY=VALUE",
            help="override one config key (repeatable)",
        )

    p = sub.add_parser("dataset", help="synthesize a graph corpus")
    common(p)
    p.add_argument("--kind", required=True, choices=["community2", "planar", "grid2d"])
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--replicas", type=int, default=1, help="grid2d corpus replicas")
    p.add_argument("--seed", type=int)
    p.add_argument("--min-nodes", type=int)
    p.add_argument("--max-nodes", type=int)
    p.add_argument("--connected-only", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dataset)

    p = sub.add_parser("report", help="bandwidth and savings statistics")
    common(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--name", help="dataset label (defaults to the file stem)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("train", help="train a band or baseline model")
    common(p)
    p.add_argument("--data", required=True)
    p.add_argument("--val", help="validation JSONL (otherwise split from --data)")
    p.add_argument("--mode", required=True, choices=["bwr", "baseline"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("sample", help="draw graphs from a checkpoint")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--temperature", type=float)
    p.add_argument("--max-nodes", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("eval", help="score samples against a held-out set")
    common(p)
    p.add_argument("--ckpt", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--samples", type=int, help="sample count (defaults to test size)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("hyperopt", help="random-search lr and weight decay")
    common(p)
    p.add_argument("--data", required=True)
    p.add_argument("--mode", required=True, choices=["bwr", "baseline"])
    p.add_argument("--trials", type=int, required=True)
    p.add_argument(
        "--objective", choices=["mmd", "mmd_minus_auprc"], default="mmd"
    )
    p.add_argument("--temp-grid", help="comma-separated temperatures to screen")
    p.add_argument("--out")
    p.set_defaults(func=cmd_hyperopt)

    p = sub.add_parser("reorder", help="show the bandwidth gain on one graph")
    common(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--before", choices=["identity", "bfs", "dfs"], default="bfs")
    p.add_argument("--seed", type=int)
    p.add_argument("--out-prefix", help="write PREFIX_before.pgm and PREFIX_cm.pgm")
    p.set_defaults(func=cmd_reorder)

    p = sub.add_parser("correlate", help="savings vs likelihood gain across runs")
    common(p)
    p.add_argument(
        "--run",
        action="append",
        required=True,
        metavar="NAME:BAND_EVAL:BASELINE_EVAL:REPORT_TSV",
    )
    p.add_argument("--out")
    p.set_defaults(func=cmd_correlate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BandgenError as exc:
        print(f"error:{exc.category}: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error:input: missing file {exc.filename}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
