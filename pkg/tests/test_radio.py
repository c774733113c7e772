"""Propagation math, the energy ledger, and MAC behavior on tiny hand-built
networks with the disturbance turned off (deterministic radio)."""

import pytest

from antwsn.kernel import RandomStream, Simulator
from antwsn.radio import (BROADCAST, EnergyLedger, EnergyParams, Frame,
                          MacParams, Medium, RadioParams, ideal_reception,
                          perturbed_reception)


class TestPropagation:
    def test_ideal_decay(self):
        assert ideal_reception(1.0, 0.0, 2.0) == 1.0
        assert ideal_reception(1.0, 1.0, 2.0) == 0.5
        assert ideal_reception(2.0, 3.0, 2.0) == 2.0 / 10.0

    def test_ideal_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            ideal_reception(1.0, -1.0, 2.0)
        with pytest.raises(ValueError):
            ideal_reception(0.0, 1.0, 2.0)

    def test_perturbation(self):
        assert perturbed_reception(0.5, 0.1, 0.01) == pytest.approx(0.56)
        assert perturbed_reception(0.5, 0.0, 0.0) == 0.5

    def test_perturbation_clamps_at_zero(self):
        assert perturbed_reception(0.1, -2.0, 0.0) == 0.0

    def test_threshold_derived_from_radius(self):
        r = RadioParams(p_transmit=1.0, gamma=2.0, tx_radius=35.0)
        assert r.rx_threshold == ideal_reception(1.0, 35.0, 2.0)

    def test_param_validation(self):
        with pytest.raises(ValueError):
            RadioParams(gamma=1.5)
        with pytest.raises(ValueError):
            RadioParams(sigma_alpha=-0.1)
        with pytest.raises(ValueError):
            MacParams(bitrate=0)
        with pytest.raises(ValueError):
            EnergyParams(initial=0)


class TestEnergyLedger:
    def test_charge_and_totals(self):
        led = EnergyLedger(2, 10.0)
        assert led.charge(0, "tx", 3.0) == 3.0
        assert led.charge(1, "rx", 1.5) == 1.5
        assert led.residual[0] == 7.0
        assert led.total_spent() == 4.5
        assert led.total_consumed() == 4.5
        assert led.conservation_gap() == 0.0

    def test_overdraw_clamps_to_residual(self):
        led = EnergyLedger(1, 2.0)
        assert led.charge(0, "tx", 5.0) == 2.0
        assert led.residual[0] == 0.0
        assert not led.alive(0)
        # dead node pays nothing more
        assert led.charge(0, "rx", 1.0) == 0.0
        assert led.conservation_gap() == 0.0

    def test_negative_charge_rejected(self):
        led = EnergyLedger(1, 2.0)
        with pytest.raises(ValueError):
            led.charge(0, "tx", -1.0)

    def test_alive_mask(self):
        led = EnergyLedger(3, 1.0)
        led.charge(1, "tx", 1.0)
        assert list(led.alive_mask()) == [True, False, True]


class TestFrame:
    def test_uids_are_unique(self):
        a = Frame(src=0, dst=1, kind="data", size_bits=8)
        b = Frame(src=0, dst=1, kind="data", size_bits=8)
        assert a.uid != b.uid

    def test_zero_size_rejected(self):
        with pytest.raises(ValueError):
            Frame(src=0, dst=1, kind="data", size_bits=0)


def build_medium(positions, initial=30.0, max_retries=5, seed=1):
    """Quiet-channel fixture: zero disturbance, logging callbacks."""
    sim = Simulator()
    ledger = EnergyLedger(len(positions), initial)
    log = {"delivered": [], "undelivered": [], "dropped": []}
    medium = Medium(
        sim, positions,
        RadioParams(sigma_alpha=0.0, sigma_beta=0.0),
        MacParams(max_retries=max_retries),
        ledger,
        EnergyParams(initial=initial),
        RandomStream(seed, "radio"), RandomStream(seed, "mac"),
        deliver=lambda node, frame: log["delivered"].append((node, frame)),
        on_undelivered=lambda frame, dead: log["undelivered"].append((frame, dead)),
        on_mac_drop=lambda frame, reason: log["dropped"].append((frame, reason)),
    )
    return sim, medium, ledger, log


class TestMedium:
    def test_airtime(self):
        sim, medium, _, _ = build_medium([(0, 0), (20, 0)])
        f = Frame(src=0, dst=1, kind="data", size_bits=400)
        assert medium.airtime(f) == pytest.approx(0.01)

    def test_unicast_delivery_and_energy(self):
        sim, medium, ledger, log = build_medium([(0, 0), (20, 0)])
        f = Frame(src=0, dst=1, kind="data", size_bits=1000)
        medium.send(f)
        sim.run_until(1.0)
        assert [(n, fr.uid) for n, fr in log["delivered"]] == [(1, f.uid)]
        assert ledger.spent["tx"][0] == pytest.approx(1e-3)
        assert ledger.spent["rx"][1] == pytest.approx(5e-4)
        # idle drain between events rounds in the last bits; the books must
        # still balance far inside the advertised 1e-9 envelope
        assert ledger.conservation_gap() <= 1e-12
        assert medium.frames_sent == 1 and medium.frames_delivered == 1

    def test_out_of_range_unicast_reported(self):
        sim, medium, _, log = build_medium([(0, 0), (50, 0)])
        f = Frame(src=0, dst=1, kind="data", size_bits=400)
        medium.send(f)
        sim.run_until(1.0)
        assert log["delivered"] == []
        assert log["undelivered"] == [(f, False)]

    def test_broadcast_reaches_all_audible(self):
        sim, medium, ledger, log = build_medium([(0, 0), (20, 0), (0, 20)])
        medium.send(Frame(src=0, dst=BROADCAST, kind="data", size_bits=400))
        sim.run_until(1.0)
        assert sorted(n for n, _ in log["delivered"]) == [1, 2]
        # every audible node pays reception, the sender pays transmission
        assert ledger.spent["rx"][1] > 0 and ledger.spent["rx"][2] > 0
        assert ledger.spent["rx"][0] == 0.0

    def test_hidden_terminals_collide(self):
        # 0 and 2 cannot hear each other; both reach 1 at the same instant.
        sim, medium, ledger, log = build_medium([(0, 0), (20, 0), (40, 0)])
        fa = Frame(src=0, dst=1, kind="data", size_bits=400)
        fc = Frame(src=2, dst=1, kind="data", size_bits=400)
        medium.send(fa)
        medium.send(fc)
        sim.run_until(1.0)
        assert log["delivered"] == []
        assert {f.uid for f, _ in log["undelivered"]} == {fa.uid, fc.uid}
        assert medium.collisions == 1
        # the collided receiver decoded nothing and is not charged for it
        assert ledger.spent["rx"][1] == 0.0

    def test_carrier_sense_defers(self):
        sim, medium, _, log = build_medium([(0, 0), (20, 0)])
        long = Frame(src=0, dst=1, kind="data", size_bits=4000)   # 0.1 s on air
        short = Frame(src=1, dst=0, kind="data", size_bits=400)
        medium.send(long)
        sim.on("poke", lambda ev: medium.send(short))
        sim.schedule(0.05, "poke")
        sim.run_until(2.0)
        delivered = {fr.uid for _, fr in log["delivered"]}
        assert delivered == {long.uid, short.uid}
        assert medium.dropped_busy == 0

    def test_busy_drop_when_retries_exhausted(self):
        sim, medium, _, log = build_medium([(0, 0), (20, 0)], max_retries=0)
        long = Frame(src=0, dst=1, kind="data", size_bits=40000)  # 1 s on air
        short = Frame(src=1, dst=0, kind="data", size_bits=400)
        medium.send(long)
        sim.on("poke", lambda ev: medium.send(short))
        sim.schedule(0.5, "poke")
        sim.run_until(3.0)
        assert (short, "busy") in log["dropped"]
        assert medium.dropped_busy == 1

    def test_dead_source_sends_nothing(self):
        sim, medium, ledger, log = build_medium([(0, 0), (20, 0)])
        ledger.charge(0, "tx", 30.0)
        f = Frame(src=0, dst=1, kind="data", size_bits=400)
        medium.send(f)
        sim.run_until(1.0)
        assert log["delivered"] == []
        assert (f, "dead") in log["dropped"]

    def test_death_mid_charge_kills_frame(self):
        sim, medium, ledger, log = build_medium([(0, 0), (20, 0)])
        cost = 1e-6 * 1000
        ledger.charge(0, "idle", 30.0 - cost / 2)  # leaves half the tx cost
        medium.send(Frame(src=0, dst=1, kind="data", size_bits=1000))
        sim.run_until(1.0)
        assert log["delivered"] == []
        assert medium.dropped_energy == 1
        assert ledger.residual[0] == 0.0
        assert ledger.conservation_gap() == 0.0

    def test_queue_keeps_order(self):
        sim, medium, _, log = build_medium([(0, 0), (20, 0)])
        f1 = Frame(src=0, dst=1, kind="data", size_bits=400)
        f2 = Frame(src=0, dst=1, kind="data", size_bits=400)
        medium.send(f1)
        medium.send(f2)
        sim.run_until(1.0)
        assert [fr.uid for _, fr in log["delivered"]] == [f1.uid, f2.uid]

    def test_idle_draw_settles(self):
        sim, medium, ledger, _ = build_medium([(0, 0), (20, 0)])
        medium.energy.e_idle_per_s = 0.1
        sim.run_until(10.0)
        medium.settle_all_idle()
        assert ledger.spent["idle"][0] == pytest.approx(1.0)
        assert ledger.spent["idle"][1] == pytest.approx(1.0)
