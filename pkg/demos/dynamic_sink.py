"""The mobile-collector scenario: the sink role hops between nodes as a
target orbits the field. Compares how the two pheromone protocols cope."""

from antwsn.config import SimConfig
from antwsn.simulation import Simulation


def run(protocol):
    cfg = SimConfig(protocol=protocol, nodes=25, layout="grid",
                    scenario="dynamic", duration=60.0, traffic_rate=0.5,
                    ant_interval=0.25, seed=14)
    sim = Simulation(cfg)
    first = sim.sink_node
    result = sim.run()
    return first, result


def main():
    print("25-node grid, orbiting collection target, 60 s\n")
    for protocol in ("eeabr", "ieeabr"):
        first, r = run(protocol)
        rebinds = r.counters.get("sink_rebinds", 0)
        latency = "-" if r.latency_s is None else f"{r.latency_s:.4f} s"
        print(f"{protocol}: sink starts at node {first}, "
              f"rebinds {rebinds} times while orbiting")
        print(f"  delivered {r.delivered}/{r.generated} "
              f"({r.success_rate_pct:.1f}%), latency {latency}")
        print(f"  energy {r.energy_j:.3f} J, "
              f"efficiency {r.efficiency_kbit_per_j:.2f} kbit/J\n")
    print("every rebind re-aims the trails: the improved variant re-seeds")
    print("the new sink's neighbor columns instead of waiting for ants to")
    print("rediscover it, and that head start shows up as better delivery")
    print("and efficiency at the same energy spend")


if __name__ == "__main__":
    main()
