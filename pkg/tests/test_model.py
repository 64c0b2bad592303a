"""Network model: validation, lengths, shortest paths."""

import random

import pytest

from gritter.model import (
    GritterError,
    Method,
    Road,
    RoadNetwork,
    effective_length_m,
    maintainable_by,
    shortest_path,
    validate_network,
)

from conftest import BOTH, make_net
from oracles import brute_shortest, rand_net


class TestValidate:
    def test_minimal_path_network_is_valid(self):
        net = make_net(
            [("v0", 0, 0, BOTH), ("v1", 1, 0), ("v2", 2, 0)],
            [
                ("e0", ("v0", "v1"), 1000, "chemical"),
                ("e1", ("v1", "v2"), 1000, "chemical"),
            ],
        )
        assert validate_network(net) == []

    def test_disconnected_network_reported(self):
        net = make_net(
            [("a", 0, 0, BOTH), ("b", 1, 0), ("c", 5, 0), ("d", 6, 0)],
            [
                ("e0", ("a", "b"), 1000, "chemical"),
                ("e1", ("c", "d"), 1000, "chemical"),
            ],
        )
        report = validate_network(net)
        assert any("disconnected" in v for v in report)

    def test_missing_inert_depot_reported(self):
        net = make_net(
            [("a", 0, 0, {Method.CHEMICAL}), ("b", 1, 0)],
            [("e0", ("a", "b"), 1000, "inert")],
        )
        report = validate_network(net)
        assert any("no inert depot" in v for v in report)
        # cross-check: no vertex stores inert material anywhere
        assert all(Method.INERT not in c.storage for c in net.crossroads)

    def test_nonpositive_length_reported(self):
        net = make_net(
            [("a", 0, 0, BOTH), ("b", 1, 0)],
            [("e0", ("a", "b"), 0, "chemical")],
        )
        assert any("nonpositive" in v for v in validate_network(net))

    def test_dangling_endpoint_rejected_at_construction(self):
        with pytest.raises(GritterError, match="unknown crossroad"):
            make_net(
                [("a", 0, 0, BOTH)],
                [("e0", ("a", "ghost"), 1000, "chemical")],
            )

    def test_duplicate_ids_rejected(self):
        with pytest.raises(GritterError, match="duplicate"):
            make_net(
                [("a", 0, 0, BOTH), ("a", 1, 0)],
                [],
            )

    def test_loops_and_parallels_are_allowed(self):
        net = make_net(
            [("a", 0, 0, BOTH), ("b", 1, 0)],
            [
                ("e0", ("a", "b"), 1000, "chemical"),
                ("e1", ("a", "b"), 2000, "chemical"),
                ("e2", ("a", "a"), 500, "chemical"),
            ],
        )
        assert validate_network(net) == []
        assert len(net.roads) == 3


class TestEffectiveLength:
    def test_multiplied(self):
        r = Road("e", ("a", "b"), 10000, Method.CHEMICAL, 1, 3)
        assert effective_length_m(r) == 30000

    def test_priority_one_block_total(self):
        # 890 km of priority-1 road at multiplicity 3 loads as 2670 km
        roads = [
            Road(f"e{i}", ("a", "b"), 89_000, Method.CHEMICAL, 1, 3)
            for i in range(10)
        ]
        assert sum(effective_length_m(r) for r in roads) == 2_670_000

    def test_multiplicity_one_is_identity(self):
        roads = [
            Road(f"e{i}", ("a", "b"), 276_500, Method.SNOWPLOW, 3, 1)
            for i in range(10)
        ]
        assert sum(effective_length_m(r) for r in roads) == 2_765_000

    def test_never_below_raw_length(self):
        rng = random.Random(5)
        for _ in range(50):
            r = Road(
                "e",
                ("a", "b"),
                rng.randrange(1, 10000),
                Method.INERT,
                1,
                rng.randrange(1, 4),
            )
            assert effective_length_m(r) >= r.length_m
            assert (effective_length_m(r) == r.length_m) == (r.multiplicity == 1)


class TestShortestPath:
    def test_identity(self, star3):
        assert shortest_path(star3, "hub", "hub") == ([], 0)

    def test_triangle_avoids_long_edge(self):
        net = make_net(
            [("a", 0, 0, BOTH), ("b", 1, 0), ("c", 1, 1)],
            [
                ("ab", ("a", "b"), 1000, "chemical"),
                ("bc", ("b", "c"), 1000, "chemical"),
                ("ac", ("a", "c"), 3000, "chemical"),
            ],
        )
        path, total = shortest_path(net, "a", "c")
        assert path == ["ab", "bc"]
        assert total == 2000

    def test_matches_brute_force_on_random_networks(self):
        rng = random.Random(11)
        for _ in range(25):
            net = rand_net(rng, n_vertices=8, n_roads=14)
            verts = [c.id for c in net.crossroads]
            frm, to = rng.sample(verts, 2)
            want, _ = brute_shortest(net, frm, to)
            path, got = shortest_path(net, frm, to)
            assert got == want
            assert sum(net.road(r).length_m for r in path) == got

    def test_symmetric_lengths(self):
        rng = random.Random(12)
        for _ in range(10):
            net = rand_net(rng, n_vertices=7, n_roads=11)
            verts = [c.id for c in net.crossroads]
            frm, to = rng.sample(verts, 2)
            _, d1 = shortest_path(net, frm, to)
            _, d2 = shortest_path(net, to, frm)
            assert d1 == d2

    def test_respects_cost_override(self, fixture_a):
        cost = fixture_a.base_costs()
        cost[fixture_a.road_index("e01")] = -1  # blocked
        from gritter.model import UnreachableError

        with pytest.raises(UnreachableError):
            shortest_path(fixture_a, "v0", "v3", cost=cost)


class TestCompatibility:
    def test_matrix(self):
        assert maintainable_by(Method.CHEMICAL, Method.CHEMICAL)
        assert not maintainable_by(Method.CHEMICAL, Method.INERT)
        assert not maintainable_by(Method.INERT, Method.CHEMICAL)
        assert maintainable_by(Method.INERT, Method.INERT)
        assert maintainable_by(Method.SNOWPLOW, Method.CHEMICAL)
        assert maintainable_by(Method.SNOWPLOW, Method.INERT)


class TestNetworkIndexing:
    def test_sorted_by_id(self):
        net = make_net(
            [("z", 0, 0, BOTH), ("a", 1, 0)],
            [("e1", ("z", "a"), 1000, "chemical")],
        )
        assert [c.id for c in net.crossroads] == ["a", "z"]

    def test_endpoints_by_index_or_id(self, fixture_a):
        by_idx = fixture_a.endpoints_idx(fixture_a.road_index("e12"))
        by_id = fixture_a.endpoints_idx("e12")
        assert by_idx == by_id

    def test_depot_lookup(self, fixture_a):
        chem = fixture_a.depots(Method.CHEMICAL)
        assert [fixture_a.crossroads[i].id for i in chem] == ["v0"]
