"""One complete simulation run: wires the event kernel, radio medium,
topology, traffic, sink placement (fixed or orbiting), and the selected
protocol together, then reports metrics and diagnostics.
"""

import hashlib
import itertools
from collections import Counter
from dataclasses import dataclass, field

from . import kernel
from .config import SimConfig
from .kernel import RandomStreams, Simulator
from .metrics import RunMetrics
from .protocols import make_protocol
from .radio import EnergyLedger, EnergyParams, Frame, MacParams, Medium, RadioParams
from .scenario import (Topology, make_grid, make_random_square, make_trajectory,
                       traffic_schedule)


class _Streams:
    """The named draw sequences of one run, created in a fixed order."""

    def __init__(self, seed: int, overrides: dict):
        factory = RandomStreams(seed, overrides)
        self.topology = factory.stream("topology")
        self.traffic = factory.stream("traffic")
        self.mobility = factory.stream("mobility")
        self.radio = factory.stream("radio")
        self.mac = factory.stream("mac")
        self.protocol = factory.stream("protocol")


@dataclass
class RunResult:
    protocol: str
    nodes: int
    scenario: str
    seed: int
    duration: float
    generated: int
    delivered: int
    latency_s: float | None
    success_rate_pct: float
    energy_j: float
    efficiency_kbit_per_j: float
    conservation_rel_gap: float
    max_live_forward_ants: int | None
    counters: dict = field(default_factory=dict)
    residuals: list = field(default_factory=list)
    trace_sha256: str = ""
    dispatched_events: int = 0


class Simulation:
    """Deterministic single run; construct, then call run() exactly once."""

    def __init__(self, cfg: SimConfig, topology: Topology | None = None):
        self.cfg = cfg
        self.kernel = Simulator()
        self._trace = hashlib.sha256()
        self.kernel.trace = self._trace
        self.rng = _Streams(cfg.seed, cfg.stream_overrides())
        self.counters = Counter()
        self.metrics = RunMetrics()
        self._ant_uids = itertools.count(1)
        self._packet_uids = itertools.count(1)

        self.topology = topology if topology is not None else self._build_topology()
        self._bind_sink()

        self.ledger = EnergyLedger(self.topology.n, cfg.energy_budget)
        self.medium = Medium(
            self.kernel, self.topology.positions,
            RadioParams(p_transmit=cfg.p_transmit, gamma=cfg.gamma,
                        sigma_alpha=cfg.sigma_alpha, sigma_beta=cfg.sigma_beta,
                        tx_radius=cfg.tx_radius, rx_threshold=cfg.rx_threshold),
            MacParams(bitrate=cfg.bitrate, cw_init=cfg.cw_init,
                      max_retries=cfg.max_retries),
            self.ledger,
            EnergyParams(initial=cfg.energy_budget, e_tx_per_bit=cfg.e_tx_per_bit,
                         e_rx_per_bit=cfg.e_rx_per_bit, e_idle_per_s=cfg.e_idle_per_s),
            self.rng.radio, self.rng.mac,
            deliver=self._deliver,
            on_undelivered=self._undelivered,
            on_mac_drop=self._mac_drop,
        )

        self.protocol = make_protocol(cfg.protocol, self)

        self.kernel.on(kernel.ANT_LAUNCH, self._handle_ant_launch)
        self.kernel.on(kernel.DATA_GENERATION, self._handle_data_generation)
        self.kernel.on(kernel.SINK_MOVE, self._handle_sink_move)
        self.kernel.on(kernel.PROTO_TIMER, self._handle_proto_timer)

        self._schedule_traffic()
        self._schedule_ant_launches()
        if self.trajectory is not None:
            self.kernel.schedule(cfg.sink_update_period, kernel.SINK_MOVE)

    # -- construction helpers ------------------------------------------------

    def _build_topology(self) -> Topology:
        cfg = self.cfg
        if cfg.layout == "grid":
            return make_grid(cfg.nodes, cfg.grid_spacing, cfg.tx_radius)
        return make_random_square(cfg.nodes, self.rng.topology, cfg.tx_radius,
                                  cfg.max_topology_retries)

    def _bind_sink(self):
        cfg = self.cfg
        side = self.topology.side
        if cfg.scenario == "dynamic":
            self.trajectory = make_trajectory(side, cfg.duration, self.rng.mobility,
                                              cfg.sink_radius_frac,
                                              cfg.sink_update_period)
            start = self.trajectory.position(0.0)
        else:
            self.trajectory = None
            # The collection point is placed at random; the nearest node hosts it.
            start = (self.rng.mobility.uniform() * side,
                     self.rng.mobility.uniform() * side)
        self.sink_node = self.topology.nearest_node(start)
        self.topology.sink_id = self.sink_node

    def _schedule_traffic(self):
        cfg = self.cfg
        for t, node in traffic_schedule(self.topology.n, self.sink_node,
                                        cfg.traffic_rate, cfg.duration,
                                        self.rng.traffic):
            self.kernel.schedule(t, kernel.DATA_GENERATION, node)

    def _schedule_ant_launches(self):
        if not self.protocol.launches_ants:
            return
        interval = self.cfg.ant_interval
        for node in range(self.topology.n):
            offset = self.rng.protocol.uniform() * interval
            self.kernel.schedule(offset, kernel.ANT_LAUNCH, node)

    # -- event handlers ----------------------------------------------------

    def _handle_ant_launch(self, ev):
        node = ev.payload
        if self.ledger.alive(node):
            self.protocol.launch_ant(node)
            self.kernel.schedule(ev.time + self.cfg.ant_interval,
                                 kernel.ANT_LAUNCH, node)

    def _handle_data_generation(self, ev):
        node = ev.payload
        if not self.ledger.alive(node):
            self.count("data_source_dead")
            return
        self.metrics.record_generated()
        self.protocol.on_data_generated(node)

    def _handle_sink_move(self, ev):
        alive = self.ledger.alive_mask()
        if alive.any():
            pos = self.trajectory.position(ev.time)
            new = self.topology.nearest_node(pos, alive)
            if new != self.sink_node:
                old = self.sink_node
                self.sink_node = new
                self.topology.sink_id = new
                self.count("sink_rebinds")
                self.protocol.on_sink_changed(old, new)
        self.kernel.schedule(ev.time + self.cfg.sink_update_period, kernel.SINK_MOVE)

    def _handle_proto_timer(self, ev):
        node, tag, data = ev.payload
        if self.ledger.alive(node):
            self.protocol.on_timer(node, tag, data)

    # -- medium callbacks ---------------------------------------------------

    def _deliver(self, node: int, frame: Frame):
        self.protocol.on_frame_received(node, frame)

    def _undelivered(self, frame: Frame, dst_dead: bool):
        self.count("frames_undelivered")
        self.protocol.on_frame_lost(frame, "undelivered", dst_dead)

    def _mac_drop(self, frame: Frame, reason: str):
        self.count(f"mac_drop_{reason}")
        self.protocol.on_frame_lost(frame, reason, False)

    # -- surface used by protocols --------------------------------------------

    @property
    def now(self) -> float:
        return self.kernel.now()

    def residual(self, node: int) -> float:
        return float(self.ledger.residual[node])

    @property
    def energy_budget(self) -> float:
        return self.cfg.energy_budget

    def send_frame(self, src: int, dst: int, kind: str, size_bits: int, payload):
        self.medium.send(Frame(src=src, dst=dst, kind=kind,
                               size_bits=size_bits, payload=payload))

    def schedule_timer(self, time: float, node: int, tag: str, data=None):
        return self.kernel.schedule(time, kernel.PROTO_TIMER, (node, tag, data))

    def cancel_event(self, event):
        self.kernel.cancel(event)

    def new_ant_uid(self) -> int:
        return next(self._ant_uids)

    def new_packet_uid(self) -> int:
        return next(self._packet_uids)

    def count(self, name: str, amount: int = 1):
        self.counters[name] += amount

    def record_delivered(self, created_at: float, now: float):
        self.metrics.record_delivered(created_at, now, self.cfg.data_bits)

    # -- running ---------------------------------------------------------------

    def run(self) -> RunResult:
        cfg = self.cfg
        self.protocol.start()
        self.kernel.run_until(cfg.duration)
        self.medium.settle_all_idle()

        energy = self.ledger.total_consumed()
        rel_gap = self.ledger.conservation_gap()
        quota = getattr(self.protocol, "quota", None)

        self.counters["frames_sent"] = self.medium.frames_sent
        self.counters["frames_delivered"] = self.medium.frames_delivered
        self.counters["collisions"] = self.medium.collisions
        self.counters["mac_dropped_busy"] = self.medium.dropped_busy

        return RunResult(
            protocol=cfg.protocol,
            nodes=self.topology.n,
            scenario=cfg.scenario,
            seed=cfg.seed,
            duration=cfg.duration,
            generated=self.metrics.generated,
            delivered=self.metrics.delivered,
            latency_s=self.metrics.latency_mean,
            success_rate_pct=self.metrics.success_rate_pct,
            energy_j=energy,
            efficiency_kbit_per_j=self.metrics.efficiency_kbit_per_j(energy),
            conservation_rel_gap=rel_gap,
            max_live_forward_ants=quota.max_live if quota is not None else None,
            counters=dict(self.counters),
            residuals=[float(r) for r in self.ledger.residual],
            trace_sha256=self._trace.hexdigest(),
            dispatched_events=self.kernel.dispatched,
        )


def run_single(cfg: SimConfig, topology: Topology | None = None) -> RunResult:
    return Simulation(cfg, topology).run()
