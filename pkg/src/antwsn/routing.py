"""Per-node routing state shared by every protocol: the neighbor/destination
table, ant bookkeeping, and the adaptive trip-time model.

Tables come in two flavours. Probability tables keep each destination column
normalized to 1 (checked to 1e-9); pheromone tables only require nonnegative
entries and are normalized on the fly when sampling.
"""

import math
from collections import deque
from dataclasses import dataclass, field

from .kernel import weighted_pick

PROBABILITY = "probability"
PHEROMONE = "pheromone"

NORM_TOL = 1e-9


class RoutingError(Exception):
    pass


class RoutingTable:
    """Maps (neighbor, destination) to a weight.

    Destination columns are created lazily; a fresh column is uniform in
    probability mode and all-ones in pheromone mode. Destinations are logical
    keys (usually the string "sink"), not node ids, so a moving sink keeps a
    single column.
    """

    def __init__(self, neighbors, mode=PROBABILITY, fresh_mass=None):
        if mode not in (PROBABILITY, PHEROMONE):
            raise RoutingError(f"unknown table mode {mode!r}")
        if fresh_mass is not None and fresh_mass <= 0:
            raise RoutingError("fresh_mass must be > 0")
        if fresh_mass is not None and mode == PROBABILITY:
            raise RoutingError("probability columns fix their own fresh value")
        self.neighbors = list(neighbors)
        self.mode = mode
        self.fresh_mass = fresh_mass
        self._index = {n: i for i, n in enumerate(self.neighbors)}
        self._columns: dict = {}

    def has_column(self, dest) -> bool:
        return dest in self._columns

    def column(self, dest) -> list:
        col = self._columns.get(dest)
        if col is None:
            if not self.neighbors:
                raise RoutingError("node has no neighbors")
            # Equal entries in both modes, so a fresh column samples uniformly.
            # Probability columns must sum to 1; pheromone columns may instead
            # pin the per-entry mass so deposits register against the prior.
            if self.fresh_mass is not None:
                col = [float(self.fresh_mass)] * len(self.neighbors)
            else:
                col = [1.0 / len(self.neighbors)] * len(self.neighbors)
            self._columns[dest] = col
        return col

    def get(self, neighbor, dest) -> float:
        return self.column(dest)[self._index[neighbor]]

    def set(self, neighbor, dest, value: float):
        if value < 0:
            raise RoutingError("table entries must be >= 0")
        self.column(dest)[self._index[neighbor]] = value

    def set_column(self, dest, values):
        if len(values) != len(self.neighbors):
            raise RoutingError("column length does not match neighbor count")
        if any(v < 0 for v in values):
            raise RoutingError("table entries must be >= 0")
        self._columns[dest] = [float(v) for v in values]
        if self.mode == PROBABILITY:
            self.normalize_check(dest)

    def drop_column(self, dest):
        self._columns.pop(dest, None)

    def normalize_check(self, dest):
        """Probability columns must sum to 1 within NORM_TOL."""
        if self.mode != PROBABILITY:
            return
        s = math.fsum(self._columns[dest])
        if abs(s - 1.0) > NORM_TOL:
            raise RoutingError(f"column {dest!r} sums to {s!r}, expected 1")

    def sample(self, dest, u: float, exclude=(), strict=False) -> int:
        """Draw a neighbor for `dest` proportionally to the column weights.

        `u` is a uniform [0,1) variate supplied by the caller so table logic
        stays deterministic and RNG-free. Excluded neighbors get weight zero.
        When exclusion empties the column, strict mode raises (forward ants
        must die at dead ends); lax mode ignores the exclusion (data packets
        may bounce back to their sender rather than vanish).
        """
        col = self.column(dest)
        weights = list(col)
        if exclude:
            masked = list(weights)
            for n in exclude:
                i = self._index.get(n)
                if i is not None:
                    masked[i] = 0.0
            if any(w > 0 for w in masked):
                weights = masked
            elif strict:
                raise RoutingError(f"every candidate toward {dest!r} is excluded")
        if not any(w > 0 for w in weights):
            raise RoutingError(f"no positive weight toward {dest!r}")
        return self.neighbors[weighted_pick(weights, u)]

    def best(self, dest) -> int:
        col = self.column(dest)
        i = max(range(len(col)), key=lambda k: (col[k], -self.neighbors[k]))
        return self.neighbors[i]

    def rows(self):
        """Yield (neighbor, dest, value) for dumping; deterministic order."""
        for dest in self._columns:
            col = self._columns[dest]
            for n, v in zip(self.neighbors, col):
                yield n, dest, v


@dataclass
class Ant:
    """A forward or backward agent riding inside frames.

    `path` records (node, time) hops for full-path protocols. `memory` is the
    bounded two-slot visited window used by the pheromone family; it always
    contains the most recent nodes including the current one.
    """
    uid: int
    kind: str                       # "forward" or "backward"
    source: int
    launched_at: float
    path: list = field(default_factory=list)
    memory: deque = field(default_factory=lambda: deque(maxlen=2))
    hops: int = 0
    e_min: float = math.inf
    e_sum: float = 0.0
    e_count: int = 0
    trip_time: float = 0.0
    reward: float = 0.0

    def visit(self, node: int, time: float):
        self.path.append((node, time))
        self.memory.append(node)
        self.hops += 1

    def fork(self) -> "Ant":
        """Independent copy; flooded ants diverge per receiver."""
        twin = Ant(uid=self.uid, kind=self.kind, source=self.source,
                   launched_at=self.launched_at)
        twin.path = list(self.path)
        twin.memory = deque(self.memory, maxlen=self.memory.maxlen)
        twin.hops = self.hops
        twin.e_min = self.e_min
        twin.e_sum = self.e_sum
        twin.e_count = self.e_count
        twin.trip_time = self.trip_time
        twin.reward = self.reward
        return twin

    def record_energy(self, residual: float):
        if residual < self.e_min:
            self.e_min = residual
        self.e_sum += residual
        self.e_count += 1

    @property
    def e_avg(self) -> float:
        if self.e_count == 0:
            return 0.0
        return self.e_sum / self.e_count

    def path_nodes(self) -> list:
        return [n for n, _ in self.path]


@dataclass
class AntCacheRecord:
    ant_uid: int
    previous: int            # node the ant arrived from (-1 at the source)
    forward: int             # node the ant was sent to
    created_at: float
    expires_at: float


class AntCache:
    """Per-node memory of forward ants that passed through.

    Serves two duties: an ant seen twice before its record expires is looping
    and must die, and a backward ant consults the record to retrace the
    forward path one hop upstream.
    """

    def __init__(self, timeout: float):
        if timeout <= 0:
            raise RoutingError("cache timeout must be > 0")
        self.timeout = timeout
        self._records: dict = {}

    def expire(self, now: float):
        dead = [uid for uid, rec in self._records.items() if rec.expires_at <= now]
        for uid in dead:
            del self._records[uid]

    def seen(self, ant_uid: int, now: float) -> bool:
        rec = self._records.get(ant_uid)
        return rec is not None and rec.expires_at > now

    def remember(self, ant_uid: int, previous: int, forward: int, now: float):
        self._records[ant_uid] = AntCacheRecord(
            ant_uid=ant_uid, previous=previous, forward=forward,
            created_at=now, expires_at=now + self.timeout)

    def lookup(self, ant_uid: int, now: float):
        rec = self._records.get(ant_uid)
        if rec is None or rec.expires_at <= now:
            return None
        return rec

    def forget(self, ant_uid: int):
        self._records.pop(ant_uid, None)

    def __len__(self):
        return len(self._records)


class TripModel:
    """Running estimate of trip time to the sink through recent samples.

    Keeps an exponentially adapted mean/variance pair plus a sliding window
    of the last few raw observations; the window minimum is the best trip
    seen recently and anchors the lower confidence bound.
    """

    def __init__(self, eta: float, window: int, conf_gamma: float):
        if not (0 < eta < 1):
            raise RoutingError("eta must lie in (0, 1)")
        if window < 1:
            raise RoutingError("window must be >= 1")
        if not (0 < conf_gamma < 1):
            raise RoutingError("conf_gamma must lie in (0, 1)")
        self.eta = eta
        self.conf_gamma = conf_gamma
        self.z = 1.0 / math.sqrt(1.0 - conf_gamma)
        self.window: deque = deque(maxlen=window)
        self.mu = None
        self.var = 0.0

    def observe(self, trip: float):
        if trip < 0:
            raise RoutingError("trip time must be >= 0")
        if self.mu is None:
            # first sample seeds the estimate directly
            self.mu = trip
            self.var = 0.0
        else:
            old_mu = self.mu
            self.mu += self.eta * (trip - self.mu)
            self.var += self.eta * ((trip - old_mu) ** 2 - self.var)
        self.window.append(trip)

    @property
    def w_best(self) -> float:
        if not self.window:
            raise RoutingError("no observations yet")
        return min(self.window)

    def confidence_bounds(self) -> tuple:
        """(lower, upper) trip-time interval from the current window."""
        if self.mu is None:
            raise RoutingError("no observations yet")
        lo = self.w_best
        hi = self.mu + self.z * math.sqrt(max(self.var, 0.0)) / math.sqrt(len(self.window))
        return lo, hi
