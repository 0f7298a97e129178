"""Command-line entry point.

Subcommands: ingest, cascades, infer, cox, metrics, precompute, serve,
export. Machine-readable output goes to --out paths, progress to stderr.
Exit codes: 0 success, 1 user error (bad flags, missing files), 2
computational failure. Outputs are deterministic by default; pass
--no-deterministic to stamp them with a generation time.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .cascade import build_cascades
from .constants import DEFAULT_FACTORS, DEFAULT_YEAR_RANGE, TOPIC_ALL
from .errors import PolicyDiffError
from .ingest import (
    impute_covariates,
    parse_adoption_data,
    parse_covariate_panel,
    save_adoption_table,
    save_panel,
)
from .netinf import InferenceParams, infer_network
from .server import AnalysisService, ViewConfig, canonical_json, load_bundle

EXIT_OK = 0
EXIT_USER = 1
EXIT_COMPUTE = 2


def _data_dir(args) -> Path:
    return Path(args.data_dir or os.environ.get("DATA_DIR", "./data"))


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _write_json(path: str, payload, deterministic: bool) -> None:
    if not deterministic:
        payload = dict(payload)
        payload["generated_at"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    Path(path).write_bytes(canonical_json(payload) + b"\n")


def _load_service(args) -> AnalysisService:
    data_dir = _data_dir(args)
    try:
        bundle = load_bundle(data_dir)
    except FileNotFoundError as exc:
        raise SystemExit(_user_error(str(exc)))
    return AnalysisService(bundle, data_dir)


def _user_error(msg: str) -> int:
    _log(f"error: {msg}")
    return EXIT_USER


def cmd_ingest(args) -> int:
    data_dir = _data_dir(args)
    data_dir.mkdir(parents=True, exist_ok=True)
    try:
        with open(args.events, "rb") as ev, open(args.meta, "rb") as me:
            table = parse_adoption_data(ev, me)
    except FileNotFoundError as exc:
        return _user_error(str(exc))
    except PolicyDiffError as exc:
        return _user_error(f"adoption data: {exc}")
    save_adoption_table(table, data_dir / "adoption_table.jsonl")
    _log(f"adoptions: {len(table.records)} records, {len(table.policies)} policies, "
         f"{len(table.topics)} topics ({table.duplicate_count} duplicate rows collapsed)")

    if args.covariates:
        factors = args.factors.split(",") if args.factors else list(DEFAULT_FACTORS)
        try:
            with open(args.covariates, "rb") as fh:
                panel = parse_covariate_panel(fh, factors)
        except FileNotFoundError as exc:
            return _user_error(str(exc))
        except PolicyDiffError as exc:
            return _user_error(f"covariate panel: {exc}")
        save_panel(panel, data_dir / "covariate_panel.json")
        _log(f"panel: {len(panel.states)} states x {len(panel.years)} years x "
             f"{len(panel.factors)} factors")
    return EXIT_OK


def cmd_cascades(args) -> int:
    if args.action != "export":
        return _user_error(f"unknown cascades action {args.action!r}")
    if args.format != "jsonl":
        return _user_error(f"unsupported format {args.format!r}")
    service = _load_service(args)
    topic = None if args.topic == TOPIC_ALL else args.topic
    try:
        scoped = service.scoped_table(topic, (args.year_from, args.year_to))
    except PolicyDiffError as exc:
        return _user_error(str(exc))
    cascades = build_cascades(scoped)
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for c in cascades.cascades:
            out.write(json.dumps(
                {"policy_id": c.policy_id, "events": [[s, t] for s, t in c.events]},
                sort_keys=True) + "\n")
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def _params_from_args(args) -> InferenceParams:
    return InferenceParams(
        transmission_model=args.model,
        lam=getattr(args, "lambda"),
        p_cutoff=args.cutoff,
        max_edges=args.max_edges,
    )


def cmd_infer(args) -> int:
    service = _load_service(args)
    topic = None if args.topic == TOPIC_ALL else args.topic
    try:
        params = _params_from_args(args)
        scoped = service.scoped_table(topic, (args.year_from, args.year_to))
        cascades = build_cascades(scoped)
        net = infer_network(cascades, params)
    except ValueError as exc:
        return _user_error(str(exc))
    except PolicyDiffError as exc:
        _log(f"inference failed: {exc}")
        return EXIT_COMPUTE
    payload = json.loads(net.to_json())
    _write_json(args.out, payload, args.deterministic)
    _log(f"inferred {len(net.edges)} edges -> {args.out}")
    return EXIT_OK


def cmd_cox(args) -> int:
    if not args.policy and not args.all:
        return _user_error("pass --policy ID or --all")
    service = _load_service(args)
    if service.bundle.panel is None:
        return _user_error("no covariate panel ingested; cox fits need one")
    pids = sorted(service.bundle.table.policies) if args.all else [args.policy]
    unknown = [p for p in pids if p not in service.bundle.table.policies]
    if unknown:
        return _user_error(f"unknown policy {unknown[0]!r}")
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    failures = 0
    try:
        for pid in pids:
            payload = service.cox_payload(pid)
            if "error" in payload:
                failures += 1
            out.write(canonical_json(payload).decode() + "\n")
    finally:
        if args.out:
            out.close()
    if failures:
        _log(f"{failures}/{len(pids)} fits reported problems")
    return EXIT_OK


def cmd_metrics(args) -> int:
    service = _load_service(args)
    name_map = {
        "degree": ("NetworkCentrality", "Degree"),
        "in-degree": ("NetworkCentrality", "In-Degree"),
        "out-degree": ("NetworkCentrality", "Out-Degree"),
        "closeness": ("NetworkCentrality", "Closeness"),
        "pagerank": ("NetworkCentrality", "PageRank"),
        "innovativeness": ("StaticInnovativeness", "Static State Innovativeness"),
    }
    key = args.measurement.lower()
    if key in name_map:
        method, measurement = name_map[key]
    else:
        method, measurement = "ContextualFactor", args.measurement
    config = ViewConfig(topic=args.topic, year_range=(args.year_from, args.year_to),
                        method=method, measurement=measurement,
                        basis=args.basis, basis_year=args.basis_year)
    try:
        if measurement == "Closeness" and args.closeness_direction == "out":
            from policydiff.constants import STATE_CODES
            from policydiff.metrics import closeness_centrality, quartile_bins
            topic = None if args.topic == TOPIC_ALL else args.topic
            net = service.network(topic, (args.year_from, args.year_to))
            vec = closeness_centrality(net, STATE_CODES, direction="out")
            payload = {"measurement": vec.measurement, "values": vec.values,
                       "bins": quartile_bins(vec), "order": sorted(vec.values)}
        else:
            payload = service.map_view(config)
    except PolicyDiffError as exc:
        return _user_error(str(exc))
    _write_json(args.out, payload, args.deterministic)
    _log(f"{measurement} -> {args.out}")
    return EXIT_OK


def cmd_precompute(args) -> int:
    service = _load_service(args)
    built = service.precompute_all(topics=True, cox=args.all)
    _log(f"precomputed {built['networks']} networks, {built['cox_fits']} cox fits")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .server import serve
    data_dir = _data_dir(args)
    if not (data_dir / "adoption_table.jsonl").exists():
        return _user_error(
            f"no ingested data under {data_dir} (set DATA_DIR or pass --data-dir, run ingest first)")
    serve(data_dir, port=args.port, ui_dir=args.ui_dir)
    return EXIT_OK


def cmd_export(args) -> int:
    """Single static bundle (networks + metrics + stats) for serverless use."""
    service = _load_service(args)
    table = service.bundle.table
    year_range = (args.year_from, args.year_to)
    topics = list(table.topics)

    networks = {TOPIC_ALL: json.loads(service.network(None, year_range).to_json())}
    for t in topics:
        networks[t] = json.loads(service.network(t, year_range).to_json())

    map_vectors = {}
    for measurement in ("Degree", "In-Degree", "Out-Degree", "Closeness", "PageRank"):
        config = ViewConfig(year_range=year_range, measurement=measurement)
        map_vectors[measurement] = service.map_view(config)
    config = ViewConfig(year_range=year_range, method="StaticInnovativeness",
                        measurement="Static State Innovativeness")
    map_vectors["Static State Innovativeness"] = service.map_view(config)

    base = ViewConfig(year_range=year_range)
    matrices = {TOPIC_ALL: service.matrix(base)}
    for t in topics:
        matrices[t] = service.matrix(ViewConfig(topic=t, year_range=year_range))
    payload = {
        "options": service.config_options(),
        "networks": networks,
        "metrics": map_vectors,
        "matrix": matrices[TOPIC_ALL],
        "matrices": matrices,
        "adoptions": {
            "year": service.adoption_view(base, "year", None),
            "state": service.adoption_view(base, "state", None),
            "topic": service.adoption_view(base, "topic", None),
        },
    }
    _write_json(args.out, payload, args.deterministic)
    _log(f"bundle -> {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="policydiff",
                                     description="Policy diffusion analytics pipeline")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--data-dir", default=None, help="data directory (default $DATA_DIR or ./data)")
        p.add_argument("--deterministic", dest="deterministic", action="store_true", default=True)
        p.add_argument("--no-deterministic", dest="deterministic", action="store_false",
                       help="stamp outputs with a generation time")

    def year_window(p):
        p.add_argument("--topic", default=TOPIC_ALL)
        p.add_argument("--from", dest="year_from", type=int, default=DEFAULT_YEAR_RANGE[0])
        p.add_argument("--to", dest="year_to", type=int, default=DEFAULT_YEAR_RANGE[1])

    p = sub.add_parser("ingest", help="parse and normalize the input CSVs")
    p.add_argument("--events", required=True)
    p.add_argument("--meta", required=True)
    p.add_argument("--covariates")
    p.add_argument("--factors", help="comma-separated factor columns (default: built-in list)")
    common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("cascades", help="export per-policy cascades")
    p.add_argument("action", choices=["export"])
    p.add_argument("--format", default="jsonl")
    p.add_argument("--out")
    year_window(p)
    common(p)
    p.set_defaults(func=cmd_cascades)

    p = sub.add_parser("infer", help="infer the diffusion network")
    year_window(p)
    p.add_argument("--cutoff", type=float, default=0.05)
    p.add_argument("--model", choices=["exponential", "rayleigh"], default="exponential")
    p.add_argument("--lambda", type=float, default=1.0)
    p.add_argument("--max-edges", type=int, default=None)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("cox", help="fit adoption-hazard models")
    p.add_argument("--policy")
    p.add_argument("--all", action="store_true")
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_cox)

    p = sub.add_parser("metrics", help="compute a per-state measurement")
    p.add_argument("--measurement", required=True,
                   help="degree|in-degree|out-degree|closeness|pagerank|innovativeness|<factor name>")
    year_window(p)
    p.add_argument("--basis", default="years-range", choices=["all-range", "years-range", "one-year"])
    p.add_argument("--basis-year", type=int, default=None)
    p.add_argument("--closeness-direction", choices=["in", "out"], default="in",
                   help="read closeness on inbound (default) or outbound paths")
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("precompute", help="eagerly build caches")
    p.add_argument("--all", action="store_true", help="also fit every policy's hazard model")
    common(p)
    p.set_defaults(func=cmd_precompute)

    p = sub.add_parser("serve", help="start the JSON API")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--ui-dir", default=None, help="static UI bundle to mount at /")
    common(p)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("export", help="emit a static bundle for serverless browsing")
    year_window(p)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help/--version and 2 for bad flags; bad
        # flags are a user error here
        return 0 if exc.code in (0, None) else EXIT_USER
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USER
    except PolicyDiffError as exc:
        _log(f"error: {exc}")
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
