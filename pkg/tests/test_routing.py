"""Routing tables in both modes, ant bookkeeping, and the trip-time model."""

import math

import numpy as np
import pytest

from antwsn.routing import (Ant, AntCache, PHEROMONE, PROBABILITY,
                            RoutingError, RoutingTable, TripModel)


class TestRoutingTable:
    def test_fresh_probability_column_is_uniform(self):
        t = RoutingTable([3, 7, 9])
        assert t.column("sink") == [pytest.approx(1 / 3)] * 3
        t.normalize_check("sink")

    def test_fresh_pheromone_column_defaults_to_uniform_mass(self):
        t = RoutingTable([1, 2], mode=PHEROMONE)
        assert t.column("sink") == [0.5, 0.5]

    def test_fresh_mass_pins_pheromone_scale(self):
        t = RoutingTable([1, 2, 3], mode=PHEROMONE, fresh_mass=0.02)
        assert t.column("sink") == [0.02, 0.02, 0.02]

    def test_fresh_mass_rejected_in_probability_mode(self):
        with pytest.raises(RoutingError):
            RoutingTable([1, 2], mode=PROBABILITY, fresh_mass=0.1)

    def test_fresh_mass_must_be_positive(self):
        with pytest.raises(RoutingError):
            RoutingTable([1, 2], mode=PHEROMONE, fresh_mass=0.0)

    def test_unknown_mode_rejected(self):
        with pytest.raises(RoutingError):
            RoutingTable([1], mode="fuzzy")

    def test_get_set(self):
        t = RoutingTable([4, 5], mode=PHEROMONE)
        t.set(5, "sink", 2.5)
        assert t.get(5, "sink") == 2.5
        assert t.get(4, "sink") == 0.5
        with pytest.raises(RoutingError):
            t.set(4, "sink", -1.0)

    def test_set_column_validation(self):
        t = RoutingTable([1, 2])
        with pytest.raises(RoutingError):
            t.set_column("sink", [0.5])            # wrong length
        with pytest.raises(RoutingError):
            t.set_column("sink", [-0.1, 1.1])      # negative entry
        with pytest.raises(RoutingError):
            t.set_column("sink", [0.6, 0.6])       # does not sum to 1

    def test_pheromone_columns_need_not_normalize(self):
        t = RoutingTable([1, 2], mode=PHEROMONE)
        t.set_column("sink", [3.0, 9.0])
        assert t.column("sink") == [3.0, 9.0]

    def test_drop_column_resets_to_fresh(self):
        t = RoutingTable([1, 2])
        t.set_column("sink", [0.9, 0.1])
        t.drop_column("sink")
        assert t.column("sink") == [0.5, 0.5]

    def test_no_neighbors_rejected_lazily(self):
        t = RoutingTable([])
        with pytest.raises(RoutingError):
            t.column("sink")

    def test_sample_proportional(self):
        t = RoutingTable([10, 20], mode=PHEROMONE)
        t.set_column("sink", [1.0, 3.0])
        rng = np.random.default_rng(0)
        picks = [t.sample("sink", float(u)) for u in rng.random(8000)]
        assert abs(picks.count(20) / 8000 - 0.75) < 0.02

    def test_sample_exclusion(self):
        t = RoutingTable([10, 20])
        assert t.sample("sink", 0.99, exclude=(20,)) == 10

    def test_strict_sample_raises_when_everything_excluded(self):
        t = RoutingTable([10, 20])
        with pytest.raises(RoutingError):
            t.sample("sink", 0.5, exclude=(10, 20), strict=True)

    def test_lax_sample_ignores_total_exclusion(self):
        t = RoutingTable([10, 20])
        assert t.sample("sink", 0.0, exclude=(10, 20)) == 10

    def test_sample_needs_positive_mass(self):
        t = RoutingTable([10, 20], mode=PHEROMONE)
        t.set_column("sink", [0.0, 0.0])
        with pytest.raises(RoutingError):
            t.sample("sink", 0.5)

    def test_best_breaks_ties_toward_lowest_id(self):
        t = RoutingTable([7, 3, 5], mode=PHEROMONE)
        t.set_column("sink", [1.0, 1.0, 0.5])
        assert t.best("sink") == 3

    def test_rows_dump(self):
        t = RoutingTable([1, 2])
        t.column("sink")
        rows = list(t.rows())
        assert rows == [(1, "sink", 0.5), (2, "sink", 0.5)]


class TestAnt:
    def test_visit_tracks_path_and_memory(self):
        ant = Ant(uid=1, kind="forward", source=0, launched_at=0.0)
        for node, t in ((0, 0.0), (3, 0.1), (5, 0.2)):
            ant.visit(node, t)
        assert ant.path_nodes() == [0, 3, 5]
        assert list(ant.memory) == [3, 5]   # only the last two survive
        assert ant.hops == 3

    def test_energy_statistics(self):
        ant = Ant(uid=1, kind="forward", source=0, launched_at=0.0)
        ant.record_energy(10.0)
        ant.record_energy(4.0)
        ant.record_energy(7.0)
        assert ant.e_min == 4.0
        assert ant.e_avg == pytest.approx(7.0)

    def test_e_avg_defined_before_any_sample(self):
        ant = Ant(uid=1, kind="forward", source=0, launched_at=0.0)
        assert ant.e_avg == 0.0

    def test_fork_is_independent(self):
        ant = Ant(uid=1, kind="forward", source=0, launched_at=0.0)
        ant.visit(0, 0.0)
        twin = ant.fork()
        twin.visit(9, 1.0)
        assert ant.path_nodes() == [0]
        assert twin.path_nodes() == [0, 9]
        assert twin.uid == ant.uid


class TestAntCache:
    def test_remember_seen_lookup(self):
        cache = AntCache(timeout=3.0)
        cache.remember(42, previous=1, forward=2, now=0.0)
        assert cache.seen(42, 1.0)
        rec = cache.lookup(42, 1.0)
        assert (rec.previous, rec.forward) == (1, 2)

    def test_timeout_expires_records(self):
        cache = AntCache(timeout=3.0)
        cache.remember(42, previous=1, forward=2, now=0.0)
        assert not cache.seen(42, 3.0)
        assert cache.lookup(42, 3.5) is None
        cache.expire(3.0)
        assert len(cache) == 0

    def test_forget(self):
        cache = AntCache(timeout=3.0)
        cache.remember(7, previous=-1, forward=1, now=0.0)
        cache.forget(7)
        assert not cache.seen(7, 0.1)

    def test_bad_timeout(self):
        with pytest.raises(RoutingError):
            AntCache(timeout=0.0)


class TestTripModel:
    def test_first_sample_seeds_mean(self):
        m = TripModel(eta=0.2, window=5, conf_gamma=0.75)
        m.observe(2.0)
        assert m.mu == 2.0 and m.var == 0.0
        assert m.w_best == 2.0

    def test_adaptive_mean(self):
        m = TripModel(eta=0.5, window=5, conf_gamma=0.75)
        m.observe(2.0)
        m.observe(4.0)
        assert m.mu == pytest.approx(3.0)
        assert m.var == pytest.approx(2.0)  # 0.5 * (4-2)^2

    def test_window_bounds_best(self):
        m = TripModel(eta=0.2, window=2, conf_gamma=0.75)
        for t in (1.0, 5.0, 6.0):
            m.observe(t)
        assert m.w_best == 5.0  # the 1.0 sample rolled out

    def test_confidence_bounds(self):
        m = TripModel(eta=0.2, window=4, conf_gamma=0.75)
        for t in (2.0, 3.0, 4.0):
            m.observe(t)
        lo, hi = m.confidence_bounds()
        assert lo == 2.0
        assert hi >= m.mu
        expected = m.mu + (1 / math.sqrt(0.25)) * math.sqrt(m.var) / math.sqrt(3)
        assert hi == pytest.approx(expected)

    def test_empty_model_raises(self):
        m = TripModel(eta=0.2, window=4, conf_gamma=0.75)
        with pytest.raises(RoutingError):
            m.w_best
        with pytest.raises(RoutingError):
            m.confidence_bounds()

    def test_parameter_validation(self):
        with pytest.raises(RoutingError):
            TripModel(eta=1.0, window=4, conf_gamma=0.75)
        with pytest.raises(RoutingError):
            TripModel(eta=0.2, window=0, conf_gamma=0.75)
        with pytest.raises(RoutingError):
            TripModel(eta=0.2, window=4, conf_gamma=1.0)

    def test_negative_trip_rejected(self):
        m = TripModel(eta=0.2, window=4, conf_gamma=0.75)
        with pytest.raises(RoutingError):
            m.observe(-1.0)
