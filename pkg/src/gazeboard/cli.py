"""Command-line entry point.

Subcommands: serve (live session server), simulate (Monte-Carlo typing
experiment), replay (verify a session log), report (metrics tables from
logs), validate-layout. Exit codes: 0 success, 1 verification or validation
failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from gazeboard.core import (
    DEFAULT_TASK_SENTENCE,
    EngineConfig,
    default_layout,
    load_layout,
    validate_layout,
)
from gazeboard.metrics import SessionLog, SessionReport, session_report
from gazeboard.simulate import ExperimentConfig, run_experiment, verify_replay


def _engine_from_args(args) -> EngineConfig:
    return EngineConfig(
        mode=args.mode,
        dwell_frames=args.dwell_frames,
        trial_frames=args.trial_frames,
        alpha=args.alpha,
        frame_rate=args.frame_rate,
    )


def _layout_from_args(args):
    if args.layout is None:
        return default_layout()
    return load_layout(args.layout)


def cmd_serve(args) -> int:
    from gazeboard.server import ServerConfig, run_server

    try:
        layout = _layout_from_args(args)
    except (OSError, ValueError, KeyError) as e:
        print(f"error: cannot load layout: {e}", file=sys.stderr)
        return 2
    violations = validate_layout(layout, args.sentence)
    if violations:
        print("error: layout rejected:", file=sys.stderr)
        for v in violations:
            print(f"  - {v}", file=sys.stderr)
        return 2
    host, _, port = args.listen.rpartition(":")
    if not host or not port.isdigit():
        print(f"error: --listen must be host:port, got {args.listen!r}", file=sys.stderr)
        return 2
    config = ServerConfig(
        host=host,
        port=int(port),
        tcp_port=args.tcp_port,
        engine=_engine_from_args(args),
        layout=layout,
        sentence=args.sentence,
        log_dir=Path(args.log_dir),
        ui_dir=Path(args.ui_dir) if args.ui_dir else None,
    )
    try:
        run_server(config)
    except OSError as e:
        print(f"error: cannot listen on {args.listen}: {e}", file=sys.stderr)
        return 2
    return 0


def cmd_simulate(args) -> int:
    try:
        cfg = ExperimentConfig.from_file(args.config)
    except FileNotFoundError:
        print(f"error: config file not found: {args.config}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, TypeError) as e:
        print(f"error: bad experiment config: {e}", file=sys.stderr)
        return 2
    if args.seed is not None:
        cfg.seed = args.seed
    result = run_experiment(cfg, keep_logs=args.keep_logs)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    result.write_csv(out_dir / "sessions.csv")
    table = result.summary_table()
    (out_dir / "summary.txt").write_text(table + "\n", encoding="utf-8")
    if args.keep_logs:
        for i, session_log in enumerate(result.logs):
            session_log.write(out_dir / f"session-{i:03d}.jsonl")
    print(table)
    print(f"wrote {out_dir / 'sessions.csv'}")
    return 0


def cmd_replay(args) -> int:
    try:
        log = SessionLog.read(args.log)
    except FileNotFoundError:
        print(f"error: log not found: {args.log}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as e:
        print(f"error: cannot parse log: {e}", file=sys.stderr)
        return 2
    result = verify_replay(log)
    if result.ok:
        replayed_bytes = result.replayed.to_jsonl()
        if replayed_bytes != log.to_jsonl():
            print("replay diverged: serialized forms differ")
            return 1
        print(f"replay OK: {len(log.events)} events reproduced byte-identically")
        return 0
    where = f" at event {result.divergence_index}" if result.divergence_index is not None else ""
    print(f"replay diverged{where}: {result.message}")
    return 1


def cmd_report(args) -> int:
    rows: list[tuple[str, SessionReport]] = []
    skipped: list[str] = []
    for path in args.logs:
        try:
            log = SessionLog.read(path)
            rep = session_report(log)
        except (OSError, ValueError, KeyError) as e:
            print(f"error: {path}: {e}", file=sys.stderr)
            return 2
        if rep.complete:
            rows.append((path, rep))
        else:
            skipped.append(path)

    header = (
        f"{'log':<32} {'speed':>8} {'ITR_letter':>11} {'ITR_com':>9} "
        f"{'P_com':>7} {'P_let':>7} {'cmds':>5} {'min':>7}"
    )
    print(header)
    print("-" * len(header))
    for path, rep in rows:
        name = Path(path).name
        print(
            f"{name:<32} {rep.speed:>8.2f} {rep.itr_letter:>11.2f} {rep.itr_com:>9.2f} "
            f"{rep.command_accuracy:>7.4f} {rep.letter_accuracy:>7.4f} "
            f"{rep.commands_issued:>5d} {rep.duration_min:>7.3f}"
        )
    if rows:
        def stats(field):
            vals = np.array([getattr(r, field) for _, r in rows])
            ddof = 1 if len(vals) > 1 else 0
            return vals.mean(), vals.std(ddof=ddof)

        s = stats("speed")
        l = stats("itr_letter")
        c = stats("itr_com")
        print("-" * len(header))
        print(
            f"{'mean +/- std':<32} {s[0]:>8.2f} {l[0]:>11.2f} {c[0]:>9.2f}"
            f"   (std {s[1]:.2f} / {l[1]:.2f} / {c[1]:.2f})"
        )
    for path in skipped:
        print(f"incomplete (excluded): {path}")
    return 0


def cmd_validate_layout(args) -> int:
    try:
        layout = load_layout(args.layout) if args.layout else default_layout()
    except (OSError, ValueError, KeyError) as e:
        print(f"error: cannot load layout: {e}", file=sys.stderr)
        return 2
    violations = validate_layout(layout, args.sentence)
    if not violations:
        print(f"layout OK: version {layout.version}, 56 characters, sentence typeable")
        return 0
    print("layout INVALID:")
    for v in violations:
        print(f"  - {v}")
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gazeboard",
        description="Gaze-driven nine-command virtual keyboard toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="run the live session server")
    p_serve.add_argument("--listen", default="127.0.0.1:8765", help="host:port for WebSocket + HTTP")
    p_serve.add_argument("--tcp-port", type=int, default=None, help="optional raw TCP listener port")
    p_serve.add_argument("--mode", choices=["async", "sync"], default="async")
    p_serve.add_argument("--dwell-frames", type=int, default=30)
    p_serve.add_argument("--trial-frames", type=int, default=60)
    p_serve.add_argument("--alpha", type=float, default=6.0)
    p_serve.add_argument("--frame-rate", type=float, default=30.0)
    p_serve.add_argument("--layout", default=None, help="layout JSON path (default: shipped layout)")
    p_serve.add_argument("--sentence", default=DEFAULT_TASK_SENTENCE)
    p_serve.add_argument("--log-dir", default="logs")
    p_serve.add_argument("--ui-dir", default=None, help="serve this directory as the web UI")
    p_serve.add_argument("--seed", type=int, default=None, help="unused; kept for config parity")
    p_serve.set_defaults(func=cmd_serve)

    p_sim = sub.add_parser("simulate", help="run a simulated typing experiment")
    p_sim.add_argument("config", help="experiment config JSON")
    p_sim.add_argument("--out", default="results", help="output directory")
    p_sim.add_argument("--seed", type=int, default=None, help="override config seed")
    p_sim.add_argument("--keep-logs", action="store_true", help="also write per-session logs")
    p_sim.set_defaults(func=cmd_simulate)

    p_replay = sub.add_parser("replay", help="verify a session log replays identically")
    p_replay.add_argument("log")
    p_replay.set_defaults(func=cmd_replay)

    p_report = sub.add_parser("report", help="metrics table from session logs")
    p_report.add_argument("logs", nargs="*")
    p_report.set_defaults(func=cmd_report)

    p_val = sub.add_parser("validate-layout", help="check a layout file")
    p_val.add_argument("--layout", default=None)
    p_val.add_argument("--sentence", default=DEFAULT_TASK_SENTENCE)
    p_val.set_defaults(func=cmd_validate_layout)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
