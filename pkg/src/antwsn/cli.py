"""Command-line front end.

Subcommands: `run` simulates one scenario, `sweep` executes a plan file of
seeded replicate grids, `dump-table` prints a node's routing table after a
run. Exit codes: 0 success, 1 configuration problem, 2 simulation failure.
"""

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .config import ConfigError, SimConfig, load_config
from .harness import CSV_COLUMNS, load_plan, run_experiment
from .scenario import TopologyError
from .simulation import Simulation


def _add_scenario_flags(p):
    p.add_argument("--config", help="key = value scenario config file")
    p.add_argument("--protocol", help="babr | sc | ff | fp | eeabr | ieeabr")
    p.add_argument("--nodes", type=int)
    p.add_argument("--scenario", help="static | dynamic")
    p.add_argument("--layout", help="grid | random-square")
    p.add_argument("--seed", type=int)
    p.add_argument("--duration", type=float, help="seconds of virtual time")


def _build_config(args) -> SimConfig:
    cfg = load_config(args.config) if args.config else SimConfig()
    overrides = {k: getattr(args, k) for k in
                 ("protocol", "nodes", "scenario", "layout", "seed", "duration")
                 if getattr(args, k, None) is not None}
    return cfg.replace(**overrides) if overrides else cfg


def _cmd_run(args) -> int:
    cfg = _build_config(args)
    result = Simulation(cfg).run()
    if args.json:
        print(json.dumps(dataclasses.asdict(result), indent=2))
    else:
        latency = "n/a" if result.latency_s is None else f"{result.latency_s:.4f} s"
        print(f"protocol={result.protocol} nodes={result.nodes} "
              f"scenario={result.scenario} seed={result.seed}")
        print(f"generated={result.generated} delivered={result.delivered} "
              f"success_rate={result.success_rate_pct:.2f}%")
        print(f"latency={latency} energy={result.energy_j:.4f} J "
              f"efficiency={result.efficiency_kbit_per_j:.4f} kbit/J")
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        row = [f"{result.protocol}-{result.nodes}-{result.scenario}-r1",
               result.protocol, result.nodes, result.scenario, 1,
               "" if result.latency_s is None else repr(result.latency_s),
               repr(result.success_rate_pct), repr(result.energy_j),
               repr(result.efficiency_kbit_per_j)]
        lines = [",".join(CSV_COLUMNS), ",".join(str(v) for v in row)]
        path = outdir / "run.csv"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"wrote {path}")
    return 0


def _cmd_sweep(args) -> int:
    plan = load_plan(args.plan)
    table = run_experiment(plan, parallel=args.parallel)
    written = table.write(args.out)
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_dump_table(args) -> int:
    cfg = _build_config(args)
    sim = Simulation(cfg)
    if not (0 <= args.node < sim.topology.n):
        raise ConfigError(f"node {args.node} outside 0..{sim.topology.n - 1}")
    sim.run()
    table = sim.protocol.tables.get(args.node)
    print("neighbor,destination,value")
    if table is not None:
        for neighbor, dest, value in table.rows():
            print(f"{neighbor},{dest},{value!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="antwsn",
        description="Ant-colony routing simulator for wireless sensor networks")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one scenario")
    _add_scenario_flags(p_run)
    p_run.add_argument("--out", help="directory for run.csv")
    p_run.add_argument("--json", action="store_true",
                       help="print the full result as JSON")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="execute an experiment plan file")
    p_sweep.add_argument("--plan", required=True, help="plan file (key = value)")
    p_sweep.add_argument("--out", required=True, help="output directory")
    p_sweep.add_argument("--parallel", type=int, default=0,
                         help="worker processes (>1 enables the pool)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_dump = sub.add_parser("dump-table",
                            help="print one node's routing table after a run")
    _add_scenario_flags(p_dump)
    p_dump.add_argument("--node", type=int, required=True)
    p_dump.set_defaults(func=_cmd_dump_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; that is a config problem here.
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (TopologyError, OSError) as exc:
        print(f"simulation failure: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # anything else is a failed run, not a crash report
        print(f"simulation failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
