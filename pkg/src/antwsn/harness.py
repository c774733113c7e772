"""Experiment orchestration: seeded replicate grids over protocols, node
counts, and scenario kinds, with CSV/JSON/plot-data export.

Every cell's seed is derived from the base seed by hashing the cell key, so
a plan is reproducible run-to-run and identical whether cells execute
serially or in a process pool.
"""

import csv
import hashlib
import io
import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .config import (ConfigError, PROTOCOL_NAMES, SCENARIOS, SimConfig,
                     _convert, config_from_mapping, parse_kv_text)
from .simulation import RunResult, Simulation

CSV_COLUMNS = ("run_id", "protocol", "nodes", "scenario", "replicate",
               "latency_s", "success_rate_pct", "energy_J",
               "efficiency_kbit_per_J")

METRIC_KEYS = ("latency_s", "success_rate_pct", "energy_J", "efficiency_kbit_per_J")

# Short panel names used in plot-data file names.
_PANELS = {"latency_s": "latency", "success_rate_pct": "success",
           "energy_J": "energy", "efficiency_kbit_per_J": "efficiency"}


@dataclass
class ExperimentPlan:
    protocols: tuple = PROTOCOL_NAMES
    node_counts: tuple = (9, 16, 36, 49, 64, 100)
    scenarios: tuple = ("static",)
    replicates: int = 10
    base_seed: int = 1
    overrides: dict = field(default_factory=dict)  # extra SimConfig knobs

    def __post_init__(self):
        self.protocols = tuple(p.lower() for p in self.protocols)
        self.scenarios = tuple(s.lower() for s in self.scenarios)
        for p in self.protocols:
            if p not in PROTOCOL_NAMES:
                raise ConfigError(f"unknown protocol {p!r}")
        for s in self.scenarios:
            if s not in SCENARIOS:
                raise ConfigError(f"unknown scenario {s!r}")
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1")
        reserved = {"protocol", "nodes", "scenario", "seed"}
        bad = reserved & set(self.overrides)
        if bad:
            raise ConfigError(f"plan overrides may not set {sorted(bad)}; "
                              "use the plan fields instead")

    def cells(self) -> list:
        """(protocol, nodes, scenario, replicate) tuples in output order."""
        return [(p, n, s, r)
                for p in sorted(self.protocols)
                for n in sorted(self.node_counts)
                for s in sorted(self.scenarios)
                for r in range(1, self.replicates + 1)]

    def cell_config(self, protocol: str, nodes: int, scenario: str,
                    replicate: int) -> SimConfig:
        seed = cell_seed(self.base_seed, protocol, nodes, scenario, replicate)
        return SimConfig(protocol=protocol, nodes=nodes, scenario=scenario,
                         seed=seed, **self.overrides)


def cell_seed(base_seed: int, protocol: str, nodes: int, scenario: str,
              replicate: int) -> int:
    key = f"{base_seed}:{protocol}:{nodes}:{scenario}:{replicate}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big")


def _run_cell(args) -> RunResult:
    plan_fields, cell = args
    plan = ExperimentPlan(**plan_fields)
    return Simulation(plan.cell_config(*cell)).run()


def _plan_fields(plan: ExperimentPlan) -> dict:
    return {"protocols": plan.protocols, "node_counts": plan.node_counts,
            "scenarios": plan.scenarios, "replicates": plan.replicates,
            "base_seed": plan.base_seed, "overrides": plan.overrides}


class ResultTable:
    """Replicate rows plus one aggregate row per cell, in deterministic order."""

    def __init__(self, plan: ExperimentPlan, results: dict):
        self.plan = plan
        self.results = results          # cell tuple -> RunResult
        self.rows = []
        for cell in plan.cells():
            protocol, nodes, scenario, replicate = cell
            res = results[cell]
            self.rows.append({
                "run_id": f"{protocol}-{nodes}-{scenario}-r{replicate}",
                "protocol": protocol,
                "nodes": nodes,
                "scenario": scenario,
                "replicate": replicate,
                "latency_s": res.latency_s,
                "success_rate_pct": res.success_rate_pct,
                "energy_J": res.energy_j,
                "efficiency_kbit_per_J": res.efficiency_kbit_per_j,
            })
        self.aggregates = self._aggregate()

    def _cell_groups(self):
        groups = {}
        for row in self.rows:
            key = (row["protocol"], row["nodes"], row["scenario"])
            groups.setdefault(key, []).append(row)
        return groups

    def _aggregate(self) -> list:
        out = []
        for (protocol, nodes, scenario), rows in sorted(self._cell_groups().items()):
            agg = {
                "run_id": f"{protocol}-{nodes}-{scenario}-agg",
                "protocol": protocol,
                "nodes": nodes,
                "scenario": scenario,
                "replicate": "agg",
            }
            for key in METRIC_KEYS:
                values = [r[key] for r in rows if r[key] is not None]
                if not values:
                    agg[key] = None
                else:
                    mean = statistics.fmean(values)
                    spread = statistics.stdev(values) if len(values) > 1 else 0.0
                    agg[key] = f"{mean:.6g}±{spread:.6g}"
            out.append(agg)
        return out

    def cell_mean(self, protocol: str, nodes: int, scenario: str, key: str):
        """Mean of one metric over a cell's replicates (None-aware)."""
        rows = [r for r in self.rows
                if (r["protocol"], r["nodes"], r["scenario"]) == (protocol, nodes, scenario)]
        values = [r[key] for r in rows if r[key] is not None]
        return statistics.fmean(values) if values else None

    # -- export --------------------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.rows + self.aggregates:
            writer.writerow([_csv_value(row[c]) for c in CSV_COLUMNS])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(self.rows + self.aggregates, indent=2) + "\n"

    def write(self, outdir) -> list:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        written = []
        for name, text in (("results.csv", self.to_csv()),
                           ("results.json", self.to_json())):
            path = outdir / name
            path.write_text(text, encoding="utf-8")
            written.append(path)
        written.extend(self.write_plotdata(outdir / "plotdata"))
        return written

    def write_plotdata(self, outdir) -> list:
        """Two-column (nodes, metric mean) series, one file per panel per
        protocol, for external plotting."""
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        written = []
        for scenario in sorted(self.plan.scenarios):
            for key, panel in _PANELS.items():
                for protocol in sorted(self.plan.protocols):
                    lines = []
                    for nodes in sorted(self.plan.node_counts):
                        mean = self.cell_mean(protocol, nodes, scenario, key)
                        if mean is not None:
                            lines.append(f"{nodes} {mean:.6g}\n")
                    if not lines:
                        continue
                    path = outdir / f"{scenario}-{panel}_{protocol}.dat"
                    path.write_text("".join(lines), encoding="utf-8")
                    written.append(path)
        return written


def _csv_value(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value


def run_experiment(plan: ExperimentPlan, parallel: int = 0) -> ResultTable:
    """Execute every cell of the plan; `parallel` > 1 uses a process pool.

    Output is byte-identical regardless of worker count: cells are keyed and
    re-assembled in plan order after completion.
    """
    cells = plan.cells()
    results = {}
    if parallel and parallel > 1:
        fields = _plan_fields(plan)
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            for cell, res in zip(cells, pool.map(_run_cell,
                                                 [(fields, c) for c in cells])):
                results[cell] = res
    else:
        for cell in cells:
            results[cell] = Simulation(plan.cell_config(*cell)).run()
    return ResultTable(plan, results)


_PLAN_LIST_KEYS = {"protocols", "nodes", "scenarios"}
_PLAN_INT_KEYS = {"replicates", "seed"}


def parse_plan_text(text: str) -> ExperimentPlan:
    """Plan files are flat key = value, like scenario configs.

    Recognized keys: protocols, nodes, scenarios (comma lists), replicates,
    seed. Every other key is passed through as a SimConfig override and
    validated there.
    """
    mapping = parse_kv_text(text)
    kwargs = {}
    overrides = {}
    for key, raw in mapping.items():
        if key == "protocols":
            kwargs["protocols"] = tuple(x.strip() for x in raw.split(",") if x.strip())
        elif key == "nodes":
            try:
                kwargs["node_counts"] = tuple(int(x) for x in raw.split(","))
            except ValueError:
                raise ConfigError(f"nodes expects integers, got {raw!r}") from None
        elif key == "scenarios":
            kwargs["scenarios"] = tuple(x.strip() for x in raw.split(",") if x.strip())
        elif key in _PLAN_INT_KEYS:
            try:
                kwargs["base_seed" if key == "seed" else key] = int(raw)
            except ValueError:
                raise ConfigError(f"{key} expects an integer, got {raw!r}") from None
        else:
            overrides[key] = raw
    if overrides:
        # Probe-build once so bad override keys or values fail at parse time.
        config_from_mapping(dict(overrides))
        kwargs["overrides"] = {k: _convert(k, raw) for k, raw in overrides.items()}
    return ExperimentPlan(**kwargs)


def load_plan(path) -> ExperimentPlan:
    with open(path, encoding="utf-8") as fh:
        return parse_plan_text(fh.read())
