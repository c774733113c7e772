"""Energy-aware pheromone routing. Forward ants remember only their last two
visited nodes; per-node caches catch loops and let backward ants retrace the
path without carrying it. Trail deposits blend path length with the minimum
and average residual energy the ant saw.
"""

from ..kernel import weighted_pick
from ..radio import BACKWARD_ANT, FORWARD_ANT
from ..routing import Ant, AntCache, PHEROMONE, RoutingError
from .base import SINK, Protocol

VISIBILITY_FLOOR = 1e-3   # fraction of the budget the 1/(C - e) denominator keeps
DENOM_TINY = 1e-9


def visibility(residual: float, budget: float) -> float:
    """Energy desirability of a node: scarce remaining capacity headroom
    (node nearly full) scores high; the denominator is floored so a
    completely fresh node stays finite."""
    return 1.0 / max(budget - residual, VISIBILITY_FLOOR * budget)


def selection_weights(taus, residuals, alpha: float, beta: float, budget: float) -> list:
    return [(t ** alpha) * (visibility(e, budget) ** beta)
            for t, e in zip(taus, residuals)]


def trail_deposit(budget: float, e_min: float, e_avg: float, hops: int,
                  dtau_max: float) -> float:
    """Pheromone amount computed at the sink from forward-ant statistics.

    Shorter paths and better energy profiles yield more pheromone; degenerate
    denominators clamp to dtau_max.
    """
    if hops < 1:
        raise ValueError("hops must be >= 1")
    inner = e_avg - hops
    if inner <= DENOM_TINY:
        return dtau_max
    denom = budget - (e_min - hops) / inner
    if denom <= DENOM_TINY:
        return dtau_max
    return min(1.0 / denom, dtau_max)


def evaporate_deposit(tau: float, dtau: float, bd: int, rho: float, phi: float) -> float:
    """Trail update applied as a backward ant passes: decay plus a deposit
    shrinking with the distance already traveled back from the sink."""
    if bd < 1:
        raise ValueError("backward travel distance must be >= 1")
    return (1.0 - rho) * tau + dtau / (phi * bd)


class EEABR(Protocol):
    name = "eeabr"
    table_mode = PHEROMONE

    def __init__(self, sim):
        super().__init__(sim)
        self.caches = {node: AntCache(self.cfg.cache_timeout) for node in self.tables}

    # -- forward ants ------------------------------------------------------

    def launch_ant(self, node: int):
        sim = self.sim
        if node == sim.sink_node or node not in self.tables:
            return
        ant = Ant(uid=sim.new_ant_uid(), kind="forward", source=node,
                  launched_at=sim.now)
        if not self._admit(ant):
            sim.count("fwd_ants_deferred")
            return
        ant.visit(node, sim.now)
        ant.record_energy(sim.residual(node))
        nxt = self._pick_next(node, ant)
        if nxt is None:
            sim.count("fwd_ants_dead_end")
            self._ant_died(ant)
            return
        sim.count("fwd_ants_launched")
        self.caches[node].remember(ant.uid, previous=-1, forward=nxt, now=sim.now)
        sim.send_frame(node, nxt, FORWARD_ANT, self.cfg.ant_bits, {"ant": ant})

    def _candidate_residual(self, node: int) -> float:
        """Residual as visibility sees it. The node currently acting as sink
        is scored at full headroom: visibility exists to spare depleted
        relays, and the destination is collecting, not relaying. Its ledger
        still drains normally."""
        sim = self.sim
        if node == sim.sink_node:
            return sim.energy_budget
        return sim.residual(node)

    def _pick_next(self, node: int, ant: Ant):
        """Stochastic choice over neighbors outside the ant's short memory,
        weighted by trail strength and the candidate's energy visibility."""
        sim = self.sim
        table = self.tables[node]
        candidates = [n for n in table.neighbors if n not in ant.memory]
        if not candidates:
            return None
        taus = [table.get(n, SINK) for n in candidates]
        residuals = [self._candidate_residual(n) for n in candidates]
        weights = selection_weights(taus, residuals, self.cfg.alpha,
                                    self.cfg.beta, sim.energy_budget)
        if not any(w > 0 for w in weights):
            weights = [1.0] * len(candidates)
        return candidates[weighted_pick(weights, sim.rng.protocol.uniform())]

    def on_control_frame(self, node: int, frame):
        if frame.dst != node:
            return
        if frame.kind == FORWARD_ANT:
            self._on_forward_ant(node, frame)
        elif frame.kind == BACKWARD_ANT:
            self._on_backward_ant(node, frame)

    def _on_forward_ant(self, node: int, frame):
        sim = self.sim
        ant = frame.payload["ant"]
        cache = self.caches.get(node)
        if cache is None:
            self._ant_died(ant)
            return
        cache.expire(sim.now)
        if cache.seen(ant.uid, sim.now):
            sim.count("fwd_ants_looped")
            self._ant_died(ant)
            return
        ant.visit(node, sim.now)
        ant.record_energy(sim.residual(node))
        if node == sim.sink_node:
            sim.count("fwd_ants_arrived")
            self._ant_died(ant)
            dtau = trail_deposit(sim.energy_budget, ant.e_min, ant.e_avg,
                                 ant.hops, self.cfg.dtau_max)
            sim.send_frame(node, frame.src, BACKWARD_ANT, self.cfg.ant_bits,
                           {"uid": ant.uid, "dtau": dtau, "bd": 1})
            return
        nxt = self._pick_next(node, ant)
        if nxt is None:
            sim.count("fwd_ants_dead_end")
            self._ant_died(ant)
            return
        cache.remember(ant.uid, previous=frame.src, forward=nxt, now=sim.now)
        sim.send_frame(node, nxt, FORWARD_ANT, self.cfg.ant_bits, {"ant": ant})

    # -- backward ants -------------------------------------------------------

    def _on_backward_ant(self, node: int, frame):
        sim = self.sim
        uid = frame.payload["uid"]
        cache = self.caches.get(node)
        rec = cache.lookup(uid, sim.now) if cache is not None else None
        if rec is None:
            sim.count("bwd_ants_stale")
            return
        table = self.tables[node]
        if frame.src in table._index:
            tau = table.get(frame.src, SINK)
            table.set(frame.src, SINK,
                      evaporate_deposit(tau, frame.payload["dtau"],
                                        frame.payload["bd"],
                                        self.cfg.rho, self.cfg.phi))
        cache.forget(uid)
        if rec.previous < 0:
            sim.count("bwd_ants_completed")
            return
        sim.send_frame(node, rec.previous, BACKWARD_ANT, self.cfg.ant_bits,
                       {"uid": uid, "dtau": frame.payload["dtau"],
                        "bd": frame.payload["bd"] + 1})

    # -- data --------------------------------------------------------------

    def data_next_hop(self, node: int, arrived_from):
        sim = self.sim
        table = self.tables.get(node)
        if table is None:
            return None
        candidates = [n for n in table.neighbors if n != arrived_from]
        if not candidates:
            candidates = list(table.neighbors)
        if not candidates:
            return None
        taus = [table.get(n, SINK) for n in candidates]
        residuals = [self._candidate_residual(n) for n in candidates]
        weights = selection_weights(taus, residuals, self.cfg.alpha,
                                    self.cfg.beta, sim.energy_budget)
        if not any(w > 0 for w in weights):
            weights = [1.0] * len(candidates)
        return candidates[weighted_pick(weights, sim.rng.protocol.uniform())]

    # -- loss bookkeeping ----------------------------------------------------

    def on_frame_lost(self, frame, reason: str, dst_dead: bool):
        if frame.kind == FORWARD_ANT:
            self.sim.count("fwd_ants_lost")
            self._ant_died(frame.payload["ant"])

    # -- hooks ----------------------------------------------------------------

    def _admit(self, ant: Ant) -> bool:
        return True

    def _ant_died(self, ant: Ant):
        pass
