"""Command-line entry points.

Verbs: ``frame gen|check``, ``bounds``, ``crlb``, ``recon``, ``sweep``,
``report``.  Exit codes: 0 success, 2 config error, 3 component failure,
4 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import BudgetExceeded, ConfigError, FramePRError
from .frames import load_frame, random_frame, save_frame
from .harness import (
    Report,
    compute_aggregates,
    load_report,
    run_experiment,
    write_csv,
)
from .injectivity import certify_retrievable_complex, check_retrievable_real
from .frames import is_full_spark

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPONENT = 3
EXIT_BUDGET = 4


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="framepr", description=__doc__)
    sub = p.add_subparsers(dest="verb", required=True)

    frame = sub.add_parser("frame", help="generate or check measurement frames")
    frame_sub = frame.add_subparsers(dest="frame_verb", required=True)

    gen = frame_sub.add_parser("gen", help="draw a seeded random frame")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--ensemble", default="gaussian",
                     choices=["gaussian", "uniform_sphere", "real_gaussian"])
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)

    check = frame_sub.add_parser("check", help="validate and certify a frame file")
    check.add_argument("path")
    check.add_argument("--full-spark", action="store_true")
    check.add_argument("--certify", action="store_true",
                       help="run the retrievability decision procedure")
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--budget", type=int, default=4_000_000)
    check.add_argument("--out", default=None, help="write the certificate JSON here")

    bounds = sub.add_parser("bounds", help="stability bounds for a frame")
    bounds.add_argument("path")
    bounds.add_argument("--samples", type=int, default=2000)
    bounds.add_argument("--starts", type=int, default=64)
    bounds.add_argument("--seed", type=int, default=0)
    bounds.add_argument("--out", default=None)

    for verb, help_text in (
        ("crlb", "trace-CRLB reference curve against estimator MSE"),
        ("recon", "reconstruction benchmark over seeded trials"),
        ("sweep", "reconstruction benchmark over a noise grid"),
    ):
        q = sub.add_parser(verb, help=help_text)
        q.add_argument("--config", required=True)
        q.add_argument("--trials", type=int, default=None)
        q.add_argument("--seed", type=int, default=None)
        q.add_argument("--out", default=None)
        q.add_argument("--csv", default=None)

    rep = sub.add_parser("report", help="recompute, verify, and export a report")
    rep.add_argument("path")
    rep.add_argument("--csv", default=None)
    rep.add_argument("--digest", action="store_true")
    return p


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=1, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_frame(args) -> int:
    if args.frame_verb == "gen":
        frame = random_frame(args.n, args.m, args.ensemble, args.seed)
        save_frame(frame, args.out)
        print(f"wrote {args.ensemble} frame n={args.n} m={args.m} seed={args.seed} to {args.out}")
        return EXIT_OK
    frame = load_frame(args.path)
    payload = {"n": frame.n, "m": frame.m, "field": frame.field, "valid": True}
    if args.full_spark:
        payload["full_spark"] = is_full_spark(frame)
    if args.certify:
        if frame.is_real:
            cert = check_retrievable_real(frame)
        else:
            cert = certify_retrievable_complex(frame, seed=args.seed, budget=args.budget)
        payload["certificate"] = cert.to_dict()
    _emit(payload, args.out)
    return EXIT_OK


def _cmd_bounds(args) -> int:
    config = {
        "task": "bounds",
        "frame": {"file": args.path},
        "seed": args.seed,
        "options": {"samples": args.samples, "n_starts": args.starts},
    }
    report = run_experiment(config)
    _emit(report.to_dict(), args.out)
    return EXIT_OK


def _cmd_task(args, task: str) -> int:
    with open(args.config) as fh:
        config = json.load(fh)
    config["task"] = task
    if args.trials is not None:
        config["trials"] = args.trials
    if args.seed is not None:
        config["seed"] = args.seed
    report = run_experiment(config)
    if args.out:
        report.save(args.out)
        print(f"report written to {args.out}")
    else:
        print(report.to_json())
    if args.csv:
        rows = report.tables or _aggregate_rows(report)
        write_csv(rows, args.csv)
        print(f"table written to {args.csv}")
    return EXIT_OK


def _aggregate_rows(report: Report) -> list:
    rows = []
    for key, entry in sorted(report.aggregates.items()):
        rows.append({"group": key, **entry})
    return rows


def _cmd_report(args) -> int:
    report = load_report(args.path)
    if report.records:
        threshold = report.config.get("success_threshold", 1e-5)
        recomputed = compute_aggregates(report.records, threshold)
        if recomputed != report.aggregates:
            print("aggregates do not match their records", file=sys.stderr)
            return EXIT_COMPONENT
        print(f"aggregates verified over {len(report.records)} records")
    if args.digest:
        print(report.deterministic_digest())
    if args.csv:
        rows = report.tables or _aggregate_rows(report)
        write_csv(rows, args.csv)
        print(f"table written to {args.csv}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.verb == "frame":
            return _cmd_frame(args)
        if args.verb == "bounds":
            return _cmd_bounds(args)
        if args.verb in ("crlb", "recon", "sweep"):
            return _cmd_task(args, "reconstruct" if args.verb == "recon" else args.verb)
        if args.verb == "report":
            return _cmd_report(args)
        raise ConfigError(f"unknown verb {args.verb!r}")  # pragma: no cover
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except FramePRError as exc:
        print(f"component failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPONENT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
