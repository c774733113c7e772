"""Flooded forward ants: instead of walking, forward ants are broadcast and
every copy records its own path. Nodes with established routing opinions
suppress the flood; backward ants retrace each arriving copy exactly as in
the basic protocol.
"""

from ..radio import BACKWARD_ANT, BROADCAST, FORWARD_ANT
from ..routing import Ant
from .babr import PathReinforceProtocol
from .base import SINK

REBROADCAST = "flood-rebroadcast"


def should_broadcast(p_sender: float, n_neighbors: int) -> bool:
    """Flood-control rule: rebroadcast only while the sender looks like a
    poor route (its selection probability is strictly below uniform)."""
    if n_neighbors < 1:
        raise ValueError("need at least one neighbor")
    return p_sender < 1.0 / n_neighbors


class FF(PathReinforceProtocol):
    name = "ff"

    def __init__(self, sim):
        super().__init__(sim)
        self._seen = [set() for _ in range(sim.topology.n)]
        self._pending = {}          # (node, ant uid) -> scheduled rebroadcast
        self._reinforced = set()    # nodes whose sink column has real opinions

    def launch_ant(self, node: int):
        sim = self.sim
        if node == sim.sink_node or node not in self.tables:
            return
        ant = Ant(uid=sim.new_ant_uid(), kind="forward", source=node,
                  launched_at=sim.now)
        ant.visit(node, sim.now)
        self._seen[node].add(ant.uid)
        sim.count("fwd_ants_launched")
        sim.send_frame(node, BROADCAST, FORWARD_ANT, self.cfg.ant_bits, {"ant": ant})

    def on_control_frame(self, node: int, frame):
        if frame.kind == FORWARD_ANT:
            self._on_flood_frame(node, frame)
        elif frame.kind == BACKWARD_ANT and frame.dst == node:
            self._on_backward_ant(node, frame)

    # -- flood machinery (shared with the data-ant protocol) ----------------

    def _on_flood_frame(self, node: int, frame):
        sim = self.sim
        ant = frame.payload["ant"]
        if node == sim.sink_node:
            self._flood_at_sink(node, frame)
            return
        if ant.uid in self._seen[node]:
            pending = self._pending.pop((node, ant.uid), None)
            if pending is not None:
                sim.cancel_event(pending)  # someone beat us to it
            return
        self._seen[node].add(ant.uid)
        mine = ant.fork()
        mine.visit(node, sim.now)
        if self._flood_overflow(mine):
            sim.count("flood_overflow")
            return
        if not self._want_rebroadcast(node, frame.src):
            return
        delay = sim.rng.protocol.uniform() * self.cfg.ff_delay_max
        payload = self._flood_payload(mine, frame)
        ev = sim.schedule_timer(sim.now + delay, node, REBROADCAST,
                                (frame.kind, mine.uid, payload))
        self._pending[(node, mine.uid)] = ev

    def _flood_at_sink(self, node: int, frame):
        # Every copy reaching the sink earns its own backward ant.
        self.sim.count("fwd_ants_arrived")
        arrived = frame.payload["ant"].fork()
        arrived.visit(node, self.sim.now)
        self._start_backward(node, arrived)

    def _flood_payload(self, ant: Ant, frame) -> dict:
        return {"ant": ant}

    def _flood_overflow(self, ant: Ant) -> bool:
        return False

    def _want_rebroadcast(self, node: int, sender: int) -> bool:
        table = self.tables.get(node)
        if table is None:
            return False
        if node not in self._reinforced:
            return True  # no routing opinion yet: flood once regardless
        p = table.get(sender, SINK) if sender in table._index else 0.0
        return should_broadcast(p, len(table.neighbors))

    def _flood_bits(self, kind: str) -> int:
        # A flooded data ant hauls the payload plus the visited-node list.
        if kind == FORWARD_ANT:
            return self.cfg.ant_bits
        return self.cfg.data_bits + self.cfg.ant_bits

    def on_timer(self, node: int, tag: str, data):
        if tag != REBROADCAST:
            return
        kind, uid, payload = data
        self._pending.pop((node, uid), None)
        self.sim.send_frame(node, BROADCAST, kind, self._flood_bits(kind), payload)

    def _apply_reinforcement(self, node: int, came_from: int, trip: float):
        super()._apply_reinforcement(node, came_from, trip)
        self._reinforced.add(node)
