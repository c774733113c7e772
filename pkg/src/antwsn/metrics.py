"""Per-run measurement: raw accumulators and the four summary figures
(latency, success rate, energy, energy efficiency)."""

from dataclasses import dataclass, field


@dataclass
class RunMetrics:
    generated: int = 0
    delivered: int = 0
    latency_sum: float = 0.0
    latencies: list = field(default_factory=list)
    delivered_bits: int = 0

    def record_generated(self):
        self.generated += 1

    def record_delivered(self, created_at: float, now: float, bits: int):
        if now < created_at:
            raise ValueError("delivery before creation")
        self.delivered += 1
        self.latency_sum += now - created_at
        self.latencies.append(now - created_at)
        self.delivered_bits += bits

    @property
    def latency_mean(self):
        """Mean seconds from generation to sink arrival; None when nothing
        was delivered (an absent value, not a zero)."""
        if self.delivered == 0:
            return None
        return self.latency_sum / self.delivered

    @property
    def success_rate_pct(self) -> float:
        if self.generated == 0:
            return 0.0
        return 100.0 * self.delivered / self.generated

    def efficiency_kbit_per_j(self, energy_total: float) -> float:
        """Delivered kilobits per Joule consumed network-wide."""
        if self.delivered == 0 or energy_total <= 0:
            return 0.0
        return (self.delivered_bits / 1000.0) / energy_total
