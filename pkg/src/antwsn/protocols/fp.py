"""Flooded-data variant: there are no separate forward ants. Each data
packet rides a flooded data ant that accumulates the visited-node list; the
flood obeys the same two suppression rules, and every copy reaching the sink
spawns a path-retracing backward ant. Delivery is counted once per packet.
"""

from ..radio import BACKWARD_ANT, BROADCAST, DATA_ANT
from ..routing import Ant
from .base import DataPacket
from .ff import FF


class FP(FF):
    name = "fp"
    launches_ants = False

    def __init__(self, sim):
        super().__init__(sim)
        self._delivered = set()     # packet uids already counted at the sink

    def launch_ant(self, node: int):
        pass

    def on_data_generated(self, node: int):
        sim = self.sim
        if node == sim.sink_node:
            sim.record_delivered(sim.now, sim.now)
            return
        if node not in self.tables:
            sim.count("data_no_route")
            return
        packet = DataPacket(uid=sim.new_packet_uid(), origin=node,
                            created_at=sim.now,
                            ttl=int(self.cfg.data_ttl_factor * sim.topology.n))
        ant = Ant(uid=sim.new_ant_uid(), kind="data", source=node,
                  launched_at=sim.now)
        ant.visit(node, sim.now)
        self._seen[node].add(ant.uid)
        sim.send_frame(node, BROADCAST, DATA_ANT, self._flood_bits(DATA_ANT),
                       {"packet": packet, "ant": ant})

    def on_control_frame(self, node: int, frame):
        if frame.kind == DATA_ANT:
            self._on_flood_frame(node, frame)
        elif frame.kind == BACKWARD_ANT and frame.dst == node:
            self._on_backward_ant(node, frame)

    def _flood_at_sink(self, node: int, frame):
        sim = self.sim
        packet = frame.payload["packet"]
        if packet.uid not in self._delivered:
            self._delivered.add(packet.uid)
            sim.record_delivered(packet.created_at, sim.now)
        super()._flood_at_sink(node, frame)

    def _flood_payload(self, ant: Ant, frame) -> dict:
        return {"packet": frame.payload["packet"], "ant": ant}

    def _flood_overflow(self, ant: Ant) -> bool:
        # A visited list longer than the network has looped somehow.
        return len(ant.path) > self.sim.topology.n
