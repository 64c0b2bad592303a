"""Shared fixtures and small network builders."""

import json
import pathlib

import pytest

from gritter.model import Crossroad, Method, Road, RoadNetwork

CORPORA = pathlib.Path(__file__).parent / "corpora"

BOTH = frozenset({Method.CHEMICAL, Method.INERT})


STORAGE_NAMES = {
    "both": BOTH,
    "chemical": frozenset({Method.CHEMICAL}),
    "inert": frozenset({Method.INERT}),
}


def make_net(crossroads, roads):
    """Build a network from terse tuples.

    crossroads: (id, x, y) with storage optionally tacked on as a method
    iterable or one of the names "both", "chemical", "inert".
    roads: (id, (u, v), length_m, method) with optional priority and
    multiplicity tacked on the end.
    """
    cs = []
    for entry in crossroads:
        cid, x, y = entry[:3]
        storage = frozenset()
        if len(entry) > 3:
            spec = entry[3]
            storage = STORAGE_NAMES[spec] if isinstance(spec, str) else frozenset(spec)
        cs.append(Crossroad(id=cid, x=x, y=y, storage=storage))
    rs = []
    for entry in roads:
        rid, ends, length, method = entry[:4]
        priority = entry[4] if len(entry) > 4 else 1
        mult = entry[5] if len(entry) > 5 else 1
        rs.append(
            Road(
                id=rid,
                endpoints=tuple(ends),
                length_m=length,
                method=Method(method),
                priority=priority,
                multiplicity=mult,
            )
        )
    return RoadNetwork(crossroads=cs, roads=rs)


@pytest.fixture
def fixture_a():
    """Chain with a depot at one end and an inert road at the other.

    v0(depot, both) --e01 chem-- v1 --e12 chem-- v2 --e23 inert-- v3,
    10 km each. Reaching e23 with an inert car costs both chem roads.
    """
    return make_net(
        [
            ("v0", 0.0, 0.0, BOTH),
            ("v1", 10.0, 0.0),
            ("v2", 20.0, 0.0),
            ("v3", 30.0, 0.0),
        ],
        [
            ("e01", ("v0", "v1"), 10000, "chemical", 1, 1),
            ("e12", ("v1", "v2"), 10000, "chemical", 2, 1),
            ("e23", ("v2", "v3"), 10000, "inert", 3, 1),
        ],
    )


@pytest.fixture
def star3():
    """Three chemical roads meeting at a both-storage depot."""
    return make_net(
        [
            ("hub", 0.0, 0.0, BOTH),
            ("a", 10.0, 0.0),
            ("b", 0.0, 10.0),
            ("c", -10.0, 0.0),
        ],
        [
            ("ra", ("hub", "a"), 10000, "chemical"),
            ("rb", ("hub", "b"), 10000, "chemical"),
            ("rc", ("hub", "c"), 10000, "chemical"),
        ],
    )


@pytest.fixture
def snow_bridge():
    """Depot cut off from both pendant roads by a snowplow road.

    Whichever method the snowplow road is maintained for, the other
    car type must deadhead over it.
    """
    return make_net(
        [
            ("v0", 0.0, 0.0, BOTH),
            ("v1", 7.0, 0.0),
            ("v2", 11.0, 0.0),
            ("v3", 7.0, 4.0),
        ],
        [
            ("s01", ("v0", "v1"), 7000, "snowplow", 1, 1),
            ("c12", ("v1", "v2"), 4000, "chemical", 1, 1),
            ("i13", ("v1", "v3"), 3000, "inert", 1, 1),
        ],
    )


def load_corpus(name):
    with open(CORPORA / name, "r", encoding="utf-8") as fh:
        return json.load(fh)
