"""Command-line front end: corpus generation, both engines, and reports.

Subcommands run the core in-process and communicate only through files, so
identical inputs and seeds always give byte-identical outputs. Exit codes:
0 success, 1 detections found under --strict, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .analytics import dtw_distance
from .config import EngineConfig, load_config
from .flow_model import ingest_captures, read_conversations
from .network import run_network, write_network_outputs
from .standalone import (
    read_event_log,
    read_triggers,
    run_standalone,
    write_reports,
    write_triggers,
)
from .synth import SCENARIOS, generate, write_corpus


def _config_from(args: argparse.Namespace) -> EngineConfig:
    return load_config(args.config) if args.config else EngineConfig()


def cmd_synth(args: argparse.Namespace) -> int:
    options = {}
    if args.n_agents is not None:
        options["n_agents"] = args.n_agents
    corpus = generate(args.scenario, seed=args.seed, **options)
    paths = write_corpus(corpus, args.out)
    for key in sorted(paths):
        print(paths[key])
    return 0


def cmd_standalone(args: argparse.Namespace) -> int:
    captures = ingest_captures(args.flows)
    conversations = read_conversations(args.conversations)
    events = read_event_log(args.events) if args.events else {}
    reports, triggers = run_standalone(captures, conversations, events, _config_from(args))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_reports(reports, out / "reports.jsonl")
    write_triggers(triggers, out / "triggers.jsonl")
    print(f"scored {len(reports)} processes on {len(captures)} hosts; {len(triggers)} triggers")
    if args.strict and triggers:
        return 1
    return 0


def cmd_netanalyze(args: argparse.Namespace) -> int:
    if args.triggers is None and not args.force:
        print(
            "error: netanalyze runs on standalone triggers; pass --triggers FILE, "
            "or --force to analyze without any",
            file=sys.stderr,
        )
        return 2
    captures = ingest_captures(args.flows)
    conversations = read_conversations(args.conversations)
    triggers = read_triggers(args.triggers) if args.triggers else ()
    result = run_network(
        captures,
        conversations,
        triggers,
        _config_from(args),
        interval=args.interval,
        jobs=args.jobs,
    )
    write_network_outputs(result, args.out)
    print(f"{len(result.alerts)} alerts; outputs in {args.out}")
    if args.strict and result.alerts:
        return 1
    return 0


def _read_series(path: str) -> tuple[float, ...]:
    text = Path(path).read_text(encoding="utf-8")
    try:
        values = json.loads(text)
    except json.JSONDecodeError:
        values = text.split()
    series = tuple(float(v) for v in values)
    if not series:
        raise ValueError(f"{path}: no numeric values")
    return series


def cmd_dtw(args: argparse.Namespace) -> int:
    result = dtw_distance(_read_series(args.file_a), _read_series(args.file_b))
    print(f"accumulated {result.accumulated}")
    print(f"normalized {result.distance}")
    if args.path:
        for i, j in result.path:
            print(f"{i} {j}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    directory = Path(args.dir)
    if not directory.is_dir():
        raise ValueError(f"{directory}: not a directory")
    reports_path = directory / "reports.jsonl"
    if reports_path.exists():
        rows = [json.loads(line) for line in reports_path.read_text().splitlines()]
        flagged = [r for r in rows if r.get("quarantined")]
        print(f"{len(rows)} processes scored, {len(flagged)} quarantined")
        for row in flagged:
            print(f"  {row['host']} pid={row['process_id']} "
                  f"suspicion={row['suspicion_value']:.3f} category={row['category']}")
    triggers_path = directory / "triggers.jsonl"
    if triggers_path.exists():
        rows = [json.loads(line) for line in triggers_path.read_text().splitlines()]
        print(f"{len(rows)} triggers")
    alerts_path = directory / "alerts.json"
    if alerts_path.exists():
        alerts = json.loads(alerts_path.read_text())["alerts"]
        print(f"{len(alerts)} alerts")
        for alert in alerts:
            print(f"  attack_type={alert['attack_type']}")
            for host, role in sorted(alert["roles"].items()):
                print(f"    {host} {role}")
    blacklist_path = directory / "blacklist.json"
    if blacklist_path.exists():
        blacklist = json.loads(blacklist_path.read_text())
        if blacklist["ips"]:
            print("blacklist: " + ", ".join(blacklist["ips"]))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(_config_from(args)), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="botflow", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a labeled synthetic corpus")
    p.add_argument("--scenario", required=True, help=", ".join(sorted(SCENARIOS)))
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--n-agents", type=int, default=None, help="udp_flood only")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("standalone", help="score hosts and emit triggers")
    p.add_argument("--flows", required=True, help="flow-record JSONL")
    p.add_argument("--conversations", required=True, help="conversation JSONL")
    p.add_argument("--events", default=None, help="process event-log JSONL")
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--strict", action="store_true", help="exit 1 when triggers are emitted")
    p.set_defaults(func=cmd_standalone)

    p = sub.add_parser("netanalyze", help="correlate triggers across the network")
    p.add_argument("--flows", required=True)
    p.add_argument("--conversations", required=True)
    p.add_argument("--triggers", default=None, help="standalone trigger JSONL")
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--interval", type=int, default=None, help="graph interval override")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--force", action="store_true", help="run without a triggers file")
    p.add_argument("--strict", action="store_true", help="exit 1 when alerts are issued")
    p.set_defaults(func=cmd_netanalyze)

    p = sub.add_parser("dtw", help="warped distance between two numeric series files")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--path", action="store_true", help="print the alignment path")
    p.set_defaults(func=cmd_dtw)

    p = sub.add_parser("report", help="summarize pipeline outputs in a directory")
    p.add_argument("--dir", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
