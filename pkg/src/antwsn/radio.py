"""Radio propagation, CSMA medium access, collisions, and per-node energy accounting.

The reception model is the classic probabilistic-simulator one: an ideal
received power p_tx / (1 + d^gamma), perturbed per link by a multiplicative
(1 + alpha) factor and an additive beta term, both zero-mean normal draws.
A frame is audible at a node when its perturbed power reaches the reception
threshold; two audible frames that overlap in time at one receiver destroy
each other there.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernel

BROADCAST = -1

# Frame payload kinds.
FORWARD_ANT = "forward-ant"
BACKWARD_ANT = "backward-ant"
DATA_ANT = "data-ant"
DATA = "data"


def ideal_reception(p_tx: float, d: float, gamma: float) -> float:
    """Received power at distance d under the 1/(1+d^gamma) decay law."""
    if d < 0:
        raise ValueError("distance must be >= 0")
    if p_tx <= 0:
        raise ValueError("transmit power must be > 0")
    return p_tx / (1.0 + d**gamma)


def perturbed_reception(ideal: float, alpha_draw: float, beta_draw: float) -> float:
    """Apply the multiplicative then additive disturbance, clamped at zero."""
    if ideal < 0:
        raise ValueError("ideal power must be >= 0")
    return max(0.0, ideal * (1.0 + alpha_draw) + beta_draw)


@dataclass
class RadioParams:
    p_transmit: float = 1.0
    gamma: float = 2.0
    sigma_alpha: float = 0.05
    sigma_beta: float = 2e-4
    tx_radius: float = 35.0
    rx_threshold: float | None = None  # None: derived so the zero-noise audible set is the tx_radius disk

    def __post_init__(self):
        if not (2.0 <= self.gamma <= 4.0):
            raise ValueError(f"gamma must lie in [2, 4], got {self.gamma}")
        if self.sigma_alpha < 0 or self.sigma_beta < 0:
            raise ValueError("disturbance sigmas must be >= 0")
        if self.tx_radius <= 0:
            raise ValueError("tx_radius must be > 0")
        if self.rx_threshold is None:
            self.rx_threshold = ideal_reception(self.p_transmit, self.tx_radius, self.gamma)
        if self.rx_threshold <= 0:
            raise ValueError("rx_threshold must be > 0")


@dataclass
class MacParams:
    bitrate: float = 40_000.0  # bit/s
    cw_init: int = 32          # initial contention window, in slots of one frame airtime
    max_retries: int = 5

    def __post_init__(self):
        if self.bitrate <= 0:
            raise ValueError("bitrate must be > 0")
        if self.cw_init < 1 or self.max_retries < 0:
            raise ValueError("bad MAC parameters")


@dataclass
class EnergyParams:
    initial: float = 30.0        # J per node
    e_tx_per_bit: float = 1e-6   # J/bit
    e_rx_per_bit: float = 5e-7   # J/bit
    e_idle_per_s: float = 0.0    # J/s

    def __post_init__(self):
        if self.initial <= 0:
            raise ValueError("initial energy must be > 0")
        if min(self.e_tx_per_bit, self.e_rx_per_bit, self.e_idle_per_s) < 0:
            raise ValueError("energy rates must be >= 0")


class EnergyLedger:
    """Per-node residual energy plus cumulative tx/rx/idle spend.

    Residual never goes below zero; a charge that would overdraw debits only
    what is left, so sum(initial - residual) == sum(spent_*) holds exactly.
    A node with residual 0 is dead and stays dead.
    """

    CATEGORIES = ("tx", "rx", "idle")

    def __init__(self, n: int, initial: float):
        self.n = n
        self.initial = float(initial)
        self.residual = np.full(n, float(initial))
        self.spent = {k: np.zeros(n) for k in self.CATEGORIES}

    def charge(self, node: int, kind: str, amount: float) -> float:
        """Debit up to `amount` from `node`; returns the amount actually debited."""
        if amount < 0:
            raise ValueError("charge amount must be >= 0")
        left = self.residual[node]
        debit = amount if amount <= left else left
        self.residual[node] = left - debit
        self.spent[kind][node] += debit
        return float(debit)

    def alive(self, node: int) -> bool:
        return self.residual[node] > 0.0

    def alive_mask(self) -> np.ndarray:
        return self.residual > 0.0

    def total_spent(self) -> float:
        return float(sum(arr.sum() for arr in self.spent.values()))

    def total_consumed(self) -> float:
        return float(self.initial * self.n - self.residual.sum())

    def conservation_gap(self) -> float:
        """Relative difference between consumed energy and the category sums."""
        consumed = self.total_consumed()
        spent = self.total_spent()
        scale = max(abs(consumed), abs(spent), 1e-30)
        return abs(consumed - spent) / scale


_frame_seq = 0


@dataclass
class Frame:
    src: int
    dst: int  # BROADCAST or a node id
    kind: str
    size_bits: int
    payload: object = None
    uid: int = field(default=-1)

    def __post_init__(self):
        global _frame_seq
        if self.size_bits <= 0:
            raise ValueError("frame size must be > 0 bits")
        if self.uid < 0:
            self.uid = _frame_seq
            _frame_seq += 1


class _Transmission:
    __slots__ = ("frame", "src", "t0", "t1", "candidates", "lost")

    def __init__(self, frame, t0, t1, candidates):
        self.frame = frame
        self.src = frame.src
        self.t0 = t0
        self.t1 = t1
        self.candidates = candidates  # bool vector: audible, alive, not busy at t0
        self.lost = np.zeros(len(candidates), dtype=bool)


class _MacState:
    __slots__ = ("queue", "busy", "attempts", "tx_end")

    def __init__(self):
        self.queue = []
        self.busy = False
        self.attempts = 0
        self.tx_end = -1.0  # end time of this node's own transmission in progress


class Medium:
    """Shared radio channel: one instance per simulation run.

    Responsibilities: carrier-sense MAC with bounded exponential backoff,
    energy debits for transmitters and every audible receiver, collision
    resolution, and delivery of surviving frames to the network layer.

    Callbacks:
      deliver(node, frame)            -- frame survived at `node`
      on_undelivered(frame, dst_dead) -- unicast frame whose addressee got nothing
      on_mac_drop(frame, reason)      -- frame never aired ('busy', 'energy', 'dead')
    """

    def __init__(self, sim, positions, radio: RadioParams, mac: MacParams,
                 ledger: EnergyLedger, energy: EnergyParams,
                 rng_radio, rng_mac, deliver,
                 on_undelivered=None, on_mac_drop=None):
        self.sim = sim
        self.radio = radio
        self.mac = mac
        self.ledger = ledger
        self.energy = energy
        self.rng_radio = rng_radio
        self.rng_mac = rng_mac
        self.deliver = deliver
        self.on_undelivered = on_undelivered
        self.on_mac_drop = on_mac_drop

        pos = np.asarray(positions, dtype=float)
        self.n = len(pos)
        diff = pos[:, None, :] - pos[None, :, :]
        self.dist = np.sqrt((diff**2).sum(axis=2))
        self.ideal = radio.p_transmit / (1.0 + self.dist**radio.gamma)
        # Geometric disk used for carrier sensing (deterministic by design).
        self.in_range = self.dist <= radio.tx_radius
        np.fill_diagonal(self.in_range, False)

        self._mac = [_MacState() for _ in range(self.n)]
        self._inflight = []
        self._last_idle = np.zeros(self.n)
        self.dropped_busy = 0
        self.dropped_energy = 0
        self.collisions = 0
        self.frames_sent = 0
        self.frames_delivered = 0

        sim.on(kernel.TX_START, self._handle_tx_start)
        sim.on(kernel.TX_END, self._handle_tx_end)
        sim.on(kernel.MAC_RETRY, self._handle_retry)

    # -- energy ---------------------------------------------------------

    def settle_idle(self, node: int):
        """Debit idle draw accrued since the last settlement for `node`."""
        rate = self.energy.e_idle_per_s
        now = self.sim.now()
        if rate > 0.0 and self.ledger.alive(node):
            dt = now - self._last_idle[node]
            if dt > 0:
                self.ledger.charge(node, "idle", rate * dt)
        self._last_idle[node] = now

    def settle_all_idle(self):
        for node in range(self.n):
            self.settle_idle(node)

    def airtime(self, frame: Frame) -> float:
        return frame.size_bits / self.mac.bitrate

    # -- MAC ------------------------------------------------------------

    def send(self, frame: Frame):
        """Queue a frame at its source; the MAC airs queued frames in order."""
        st = self._mac[frame.src]
        if not self.ledger.alive(frame.src):
            self._drop(frame, "dead")
            return
        st.queue.append(frame)
        if not st.busy:
            st.busy = True
            st.attempts = 0
            self._attempt(frame.src)

    def _drop(self, frame, reason):
        if reason == "busy":
            self.dropped_busy += 1
        elif reason == "energy":
            self.dropped_energy += 1
        if self.on_mac_drop is not None:
            self.on_mac_drop(frame, reason)

    def _flush_dead(self, node):
        st = self._mac[node]
        for frame in st.queue:
            self._drop(frame, "dead")
        st.queue.clear()
        st.busy = False

    def _channel_busy(self, node) -> bool:
        now = self.sim.now()
        for tr in self._inflight:
            if tr.t1 > now and (self.in_range[tr.src, node] or tr.src == node):
                return True
        return False

    def _attempt(self, node):
        st = self._mac[node]
        if not self.ledger.alive(node):
            self._flush_dead(node)
            return
        if not st.queue:
            st.busy = False
            return
        frame = st.queue[0]
        if self._channel_busy(node):
            st.attempts += 1
            if st.attempts > self.mac.max_retries:
                st.queue.pop(0)
                self._drop(frame, "busy")
                st.attempts = 0
                self._attempt(node)
                return
            window = self.mac.cw_init * (2 ** (st.attempts - 1))
            slots = self.rng_mac.randint(1, window)
            delay = slots * self.airtime(frame)
            self.sim.schedule(self.sim.now() + delay, kernel.MAC_RETRY, node)
            return
        self.sim.schedule(self.sim.now(), kernel.TX_START, node)

    def _handle_retry(self, ev):
        self._attempt(ev.payload)

    def _handle_tx_start(self, ev):
        node = ev.payload
        st = self._mac[node]
        if not st.queue:
            st.busy = False
            return
        frame = st.queue[0]
        self.settle_idle(node)
        cost = self.energy.e_tx_per_bit * frame.size_bits
        debited = self.ledger.charge(node, "tx", cost)
        if debited < cost:
            # Ran out of juice mid-charge: node is now dead, frame never airs.
            st.queue.pop(0)
            self._drop(frame, "energy")
            self._flush_dead(node)
            return
        now = self.sim.now()
        t1 = now + self.airtime(frame)
        st.tx_end = t1
        tr = _Transmission(frame, now, t1, self._audible(node))
        self._mark_collisions(tr)
        self._inflight.append(tr)
        self.frames_sent += 1
        self.sim.schedule(t1, kernel.TX_END, tr)

    def _audible(self, src) -> np.ndarray:
        """Who can hear this transmission: perturbed power over threshold, alive,
        not the sender, and not currently transmitting themselves."""
        r = self.radio
        ideal = self.ideal[src]
        if r.sigma_alpha > 0.0:
            power = ideal * (1.0 + self.rng_radio.normals(r.sigma_alpha, self.n))
        else:
            power = ideal.copy()
        if r.sigma_beta > 0.0:
            power += self.rng_radio.normals(r.sigma_beta, self.n)
        np.maximum(power, 0.0, out=power)
        cand = (power >= r.rx_threshold) & self.ledger.alive_mask()
        cand[src] = False
        now = self.sim.now()
        for i in range(self.n):
            if cand[i] and self._mac[i].tx_end > now:
                cand[i] = False
        return cand

    def _mark_collisions(self, new: _Transmission):
        now = new.t0
        for tr in self._inflight:
            if tr.t1 <= now:
                continue
            both = new.candidates & tr.candidates
            if both.any():
                self.collisions += int(both.sum())
                tr.lost |= both
                new.lost |= both
            # The new sender cannot keep listening to an ongoing frame.
            if tr.candidates[new.src]:
                tr.lost[new.src] = True

    def _handle_tx_end(self, ev):
        tr = ev.payload
        self._inflight.remove(tr)
        receivers = tr.candidates & ~tr.lost
        delivered = []
        rx_cost = self.energy.e_rx_per_bit * tr.frame.size_bits
        for node in np.flatnonzero(receivers):
            node = int(node)
            if not self.ledger.alive(node):
                continue
            self.settle_idle(node)
            debited = self.ledger.charge(node, "rx", rx_cost)
            if debited < rx_cost:
                continue  # died mid-reception
            delivered.append(node)
        # Unicast bookkeeping before the handlers run, so the network sees
        # failures in channel order.
        frame = tr.frame
        if frame.dst != BROADCAST and frame.dst not in delivered:
            if self.on_undelivered is not None:
                self.on_undelivered(frame, not self.ledger.alive(frame.dst))
        for node in delivered:
            self.frames_delivered += 1
            self.deliver(node, frame)
        # Sender moves on to its next queued frame.
        st = self._mac[frame.src]
        st.tx_end = -1.0
        if st.queue and st.queue[0] is frame:
            st.queue.pop(0)
        st.attempts = 0
        self._attempt(frame.src)
