"""Command-line entry point: ``triadic {simulate,analyze,check,preset,sweep}``."""
from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import io, pipeline
from .config import build, load, with_overrides
from .errors import ConfigError, NonFiniteError
from .presets import PRESETS, get_preset

log = logging.getLogger("triadic")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits: {text}")
    return value


def _add_analysis_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--delta", type=float, help="closure threshold")
    p.add_argument("--flavor", choices=["unoriented", "oriented", "semisimplicial"])
    p.add_argument("--epsilon-rel", type=float, dest="epsilon_rel", help="regime threshold")
    p.add_argument("--window", type=float, help="trailing window as a fraction of the run")


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=_u64)
    p.add_argument("--dt", type=float, help="RK4 step size")
    _add_analysis_flags(p)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="triadic", description="Adaptive triadic network experiments")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate a YAML config and write all reports")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="output directory (default: config output.dir or out/<name>)")
    _add_run_flags(p)

    p = sub.add_parser("analyze", help="recompute reports from a stored trajectory")
    p.add_argument("trajectory")
    p.add_argument("--out", required=True)
    _add_analysis_flags(p)

    p = sub.add_parser("check", help="closure retention scan of a stored trajectory")
    p.add_argument("trajectory")
    p.add_argument("--delta", type=float)
    p.add_argument("--flavor", choices=["unoriented", "oriented", "semisimplicial"])
    p.add_argument("--out", help="directory for retention.json (default: print to stdout)")

    p = sub.add_parser("preset", help="run one of the built-in experiments")
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--out", help="output directory (default: out/<name>)")
    _add_run_flags(p)

    p = sub.add_parser("sweep", help="run several configs concurrently")
    p.add_argument("--config", action="append", required=True, help="repeatable")
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=None)
    _add_run_flags(p)
    return ap


def _run_overrides(args) -> dict:
    return {
        "seed": getattr(args, "seed", None),
        "dt": getattr(args, "dt", None),
        "delta": args.delta,
        "flavor": args.flavor,
        "epsilon_rel": getattr(args, "epsilon_rel", None),
        "window": getattr(args, "window", None),
    }


def _summarize(name: str, out: Path, result: dict) -> None:
    verdict = result["verdict"]
    print(f"{name}: regime {verdict.regime.value}; outputs in {out}")


def _simulate_raw(raw: dict, out: Path | None) -> tuple:
    rc = build(raw)
    out = Path(out or rc.out_dir or Path("out") / rc.name)
    return out, pipeline.run(rc, out)


def _sweep_job(raw: dict, out: str):
    out_path, result = _simulate_raw(raw, Path(out))
    return str(out_path), result["verdict"].regime.value


def cmd_simulate(args) -> int:
    raw = with_overrides(load(args.config), **_run_overrides(args))
    out, result = _simulate_raw(raw, args.out)
    _summarize(raw.get("name", "run"), out, result)
    return EXIT_OK


def cmd_preset(args) -> int:
    raw = with_overrides(get_preset(args.name), **_run_overrides(args))
    out, result = _simulate_raw(raw, args.out or Path("out") / args.name)
    _summarize(args.name, out, result)
    return EXIT_OK


def cmd_analyze(args) -> int:
    overrides = {"delta": args.delta, "flavor": args.flavor,
                 "epsilon_rel": args.epsilon_rel, "window": args.window}
    rc, traj = pipeline.load_run(args.trajectory, overrides)
    result = pipeline.write_reports(rc, traj, args.out)
    _summarize(rc.name, Path(args.out), result)
    return EXIT_OK


def cmd_check(args) -> int:
    rc, traj = pipeline.load_run(args.trajectory, {"delta": args.delta, "flavor": args.flavor})
    payload = pipeline.retention_payload(rc, traj)
    payload = {"delta": rc.delta, "flavor": rc.flavor, **payload}
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        io.write_json(out / "retention.json", payload)
    else:
        print(io.dumps(payload))
    return EXIT_OK


def cmd_sweep(args) -> int:
    overrides = _run_overrides(args)
    raws = [with_overrides(load(path), **overrides) for path in args.config]
    for raw in raws:
        build(raw)  # reject bad configs before starting any work
    root = Path(args.out)
    jobs = []
    for pos, (path, raw) in enumerate(zip(args.config, raws)):
        jobs.append((raw, str(root / f"{pos:03d}_{Path(path).stem}")))
    with ProcessPoolExecutor(max_workers=args.workers) as pool:
        futures = [pool.submit(_sweep_job, raw, out) for raw, out in jobs]
        for fut in futures:
            out, regime = fut.result()
            print(f"{out}: regime {regime}")
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "analyze": cmd_analyze,
    "check": cmd_check,
    "preset": cmd_preset,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonFiniteError as exc:
        when = f" at t={exc.time:.6g}" if exc.time is not None else ""
        print(f"numerical failure{when}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, ValueError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
