"""Shared protocol scaffolding.

A protocol instance owns the routing state of every node in one run and
reacts to three stimuli: data generated at a node, a frame delivered by the
radio, and its own timers. Concrete subclasses define table semantics and
the ant lifecycle; data-packet plumbing lives here.
"""

from dataclasses import dataclass

from ..radio import BROADCAST, DATA, Frame
from ..routing import RoutingError, RoutingTable

SINK = "sink"   # logical destination key; survives sink re-binding


@dataclass
class DataPacket:
    uid: int
    origin: int
    created_at: float
    ttl: int        # remaining hop budget


class Protocol:
    name = ""
    table_mode = "probability"
    launches_ants = True

    def __init__(self, sim):
        self.sim = sim
        self.cfg = sim.cfg
        topo = sim.topology
        # Pheromone tables start each entry at the configured prior mass
        # (1/n unless overridden) so early deposits actually shift the odds;
        # probability tables fix their own uniform start.
        fresh = None
        if self.table_mode == "pheromone":
            fresh = self.cfg.tau0 if self.cfg.tau0 is not None else 1.0 / topo.n
        self.tables = {}
        for node in range(topo.n):
            if topo.neighbors[node]:
                self.tables[node] = RoutingTable(
                    topo.neighbors[node], self.table_mode, fresh_mass=fresh)

    # -- lifecycle hooks (simulation calls these) -------------------------

    def start(self):
        """Called once at t=0 after the network is wired."""

    def launch_ant(self, node: int):
        """Periodic ant-launch tick for `node`; no-op for antless protocols."""

    def on_sink_changed(self, old_node: int, new_node: int):
        pass

    def on_timer(self, node: int, tag: str, data):
        pass

    def on_frame_lost(self, frame: Frame, reason: str, dst_dead: bool):
        """A frame died in the MAC or was never received by its addressee."""

    # -- frame dispatch ----------------------------------------------------

    def on_frame_received(self, node: int, frame: Frame):
        if frame.kind == DATA:
            self.on_data_frame(node, frame)
        else:
            self.on_control_frame(node, frame)

    def on_control_frame(self, node: int, frame: Frame):
        raise NotImplementedError

    # -- data pipeline -------------------------------------------------------

    def on_data_generated(self, node: int):
        sim = self.sim
        if node == sim.sink_node:
            # The sink sensing an event needs no transport.
            sim.record_delivered(sim.now, sim.now)
            return
        packet = DataPacket(uid=sim.new_packet_uid(), origin=node,
                            created_at=sim.now,
                            ttl=int(self.cfg.data_ttl_factor * sim.topology.n))
        self.forward_data(node, packet, arrived_from=None)

    def on_data_frame(self, node: int, frame: Frame):
        if frame.dst != node:
            return  # overheard unicast; rx energy already paid
        packet = frame.payload["packet"]
        if node == self.sim.sink_node:
            self.sim.record_delivered(packet.created_at, self.sim.now)
            return
        self.forward_data(node, packet, arrived_from=frame.src)

    def forward_data(self, node: int, packet: DataPacket, arrived_from):
        sim = self.sim
        if packet.ttl <= 0:
            sim.count("data_ttl_expired")
            return
        packet.ttl -= 1
        nxt = self.data_next_hop(node, arrived_from)
        if nxt is None:
            sim.count("data_no_route")
            return
        sim.send_frame(node, nxt, DATA, self.cfg.data_bits, {"packet": packet})

    def data_next_hop(self, node: int, arrived_from):
        """Pick the next relay toward the sink; None when the node is stuck."""
        table = self.tables.get(node)
        if table is None:
            return None
        exclude = () if arrived_from is None else (arrived_from,)
        try:
            return table.sample(SINK, self.sim.rng.protocol.uniform(), exclude=exclude)
        except RoutingError:
            return None
