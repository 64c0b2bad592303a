"""Road network model: crossroads, roads, validation, and graph queries.

Lengths are stored as integer meters so that objective comparisons stay
exact; kilometers appear only at I/O boundaries. Networks are immutable
after construction and safe for concurrent reads.
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass, field
from enum import Enum

from gritter.kernels import INF, dijkstra


class Method(str, Enum):
    CHEMICAL = "chemical"
    INERT = "inert"
    SNOWPLOW = "snowplow"


#: Methods a car may base its plan on (snowplow is a road method only).
CAR_METHODS = (Method.CHEMICAL, Method.INERT)


def maintainable_by(road_method: Method, car_method: Method) -> bool:
    """Both car types carry a plow blade, so snowplow roads suit either."""
    return road_method is car_method or road_method is Method.SNOWPLOW


class GritterError(Exception):
    """Base class for errors raised by this package."""


class UnknownRoadError(GritterError):
    pass


class UnknownCrossroadError(GritterError):
    pass


class UnreachableError(GritterError):
    pass


@dataclass(frozen=True)
class Crossroad:
    id: str
    x: float
    y: float
    storage: frozenset = frozenset()  # subset of {CHEMICAL, INERT}; empty = no depot

    def is_depot(self) -> bool:
        return bool(self.storage)


@dataclass(frozen=True)
class Road:
    id: str
    endpoints: tuple  # unordered pair of crossroad ids; loops allowed
    length_m: int
    method: Method
    priority: int = 1  # 1 = most important
    multiplicity: int = 1


def effective_length_m(road: Road) -> int:
    """Maintenance load of a road in meters: raw length times multiplicity."""
    return road.length_m * road.multiplicity


def effective_length_km(road: Road) -> float:
    return effective_length_m(road) / 1000.0


class RoadNetwork:
    """Immutable road network with dense indices and a CSR adjacency.

    Crossroads and roads are ordered by id (lexicographic); all deterministic
    tie-breaking in the package leans on that ordering.
    """

    __slots__ = (
        "crossroads",
        "roads",
        "_vidx",
        "_eidx",
        "_indptr",
        "_adj_vertex",
        "_adj_edge",
        "_cost",
        "_incident",
    )

    def __init__(self, crossroads, roads):
        self.crossroads = tuple(sorted(crossroads, key=lambda c: c.id))
        self.roads = tuple(sorted(roads, key=lambda r: r.id))
        self._vidx = {c.id: i for i, c in enumerate(self.crossroads)}
        self._eidx = {r.id: i for i, r in enumerate(self.roads)}
        if len(self._vidx) != len(self.crossroads):
            raise GritterError("duplicate crossroad id")
        if len(self._eidx) != len(self.roads):
            raise GritterError("duplicate road id")
        n = len(self.crossroads)
        incident = [[] for _ in range(n)]
        for ei, r in enumerate(self.roads):
            a, b = r.endpoints
            if a not in self._vidx or b not in self._vidx:
                raise GritterError(f"road {r.id} references unknown crossroad")
            u, v = self._vidx[a], self._vidx[b]
            incident[u].append((ei, v))
            if v != u:
                incident[v].append((ei, u))
        indptr = array("q", [0]) * (n + 1)
        adj_vertex = array("q")
        adj_edge = array("q")
        pos = 0
        for vi in range(n):
            incident[vi].sort()
            for ei, w in incident[vi]:
                adj_edge.append(ei)
                adj_vertex.append(w)
                pos += 1
            indptr[vi + 1] = pos
        self._indptr = indptr
        self._adj_vertex = adj_vertex
        self._adj_edge = adj_edge
        self._cost = array("q", (r.length_m for r in self.roads))
        self._incident = tuple(tuple(lst) for lst in incident)

    # -- index helpers -------------------------------------------------

    def vertex_index(self, crossroad_id: str) -> int:
        try:
            return self._vidx[crossroad_id]
        except KeyError:
            raise UnknownCrossroadError(crossroad_id) from None

    def road_index(self, road_id: str) -> int:
        try:
            return self._eidx[road_id]
        except KeyError:
            raise UnknownRoadError(road_id) from None

    def road(self, road_id: str) -> Road:
        return self.roads[self.road_index(road_id)]

    def crossroad(self, crossroad_id: str) -> Crossroad:
        return self.crossroads[self.vertex_index(crossroad_id)]

    def has_road(self, road_id: str) -> bool:
        return road_id in self._eidx

    def incident(self, vertex_index: int):
        """(road index, other endpoint index) pairs, ordered by road index.

        Loops appear once with the vertex itself as the other endpoint.
        """
        return self._incident[vertex_index]

    def endpoints_idx(self, road):
        """Endpoint vertex indices; takes a road index or a road id."""
        if isinstance(road, str):
            road = self.road_index(road)
        a, b = self.roads[road].endpoints
        return self._vidx[a], self._vidx[b]

    def depots(self, car_method: Method):
        """Vertex indices of crossroads storing material for car_method."""
        return tuple(
            i for i, c in enumerate(self.crossroads) if car_method in c.storage
        )

    def base_costs(self) -> array:
        """Copy of the per-road raw length array, for custom searches."""
        return array("q", self._cost)

    def run_dijkstra(self, sources, ranks=None, cost=None, target=-1):
        """Raw kernel access; sources are vertex indices."""
        if ranks is None:
            ranks = array("q", range(len(sources)))
        if cost is None:
            cost = self._cost
        return dijkstra(
            len(self.crossroads),
            self._indptr,
            self._adj_vertex,
            self._adj_edge,
            cost,
            array("q", sources),
            array("q", ranks),
            target,
        )


def validate_network(net: RoadNetwork) -> list:
    """Check the modelling assumptions; returns a list of violations.

    An empty list means the network is usable by the solver: connected,
    positive lengths, sane priorities/multiplicities, and a depot with the
    right storage for every maintenance method present.
    """
    violations = []
    for c in net.crossroads:
        if not (math.isfinite(c.x) and math.isfinite(c.y)):
            violations.append(f"crossroad {c.id}: non-finite coordinates")
        for s in c.storage:
            if s not in CAR_METHODS:
                violations.append(f"crossroad {c.id}: invalid storage {s}")
    methods_present = set()
    for r in net.roads:
        methods_present.add(r.method)
        if r.length_m <= 0:
            violations.append(f"road {r.id}: nonpositive length")
        if r.priority < 1:
            violations.append(f"road {r.id}: priority below 1")
        if r.multiplicity < 1:
            violations.append(f"road {r.id}: multiplicity below 1")
    # Storage coverage: chemical and inert roads need a matching depot;
    # snowplow roads can be served from either kind.
    if Method.CHEMICAL in methods_present and not net.depots(Method.CHEMICAL):
        violations.append("no chemical depot for chemical roads")
    if Method.INERT in methods_present and not net.depots(Method.INERT):
        violations.append("no inert depot for inert roads")
    if methods_present and not (net.depots(Method.CHEMICAL) or net.depots(Method.INERT)):
        violations.append("no depot at all")
    if len(net.crossroads) > 1:
        seen = [False] * len(net.crossroads)
        stack = [0]
        seen[0] = True
        while stack:
            v = stack.pop()
            for _, w in net.incident(v):
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        if not all(seen):
            bad = [net.crossroads[i].id for i, s in enumerate(seen) if not s]
            violations.append(f"disconnected network ({len(bad)} unreachable crossroads)")
    return violations


def shortest_path(net: RoadNetwork, frm: str, to: str, cost=None):
    """Shortest path between two crossroads.

    Returns (road id list, total length in meters). Ties between
    equal-length paths break deterministically through the id-ordered
    adjacency. cost may override the per-road metric (indexed array,
    meters, negative = unusable).
    """
    s = net.vertex_index(frm)
    t = net.vertex_index(to)
    if s == t:
        return [], 0
    dist, _, parent = net.run_dijkstra([s], cost=cost, target=t)
    if dist[t] >= INF:
        raise UnreachableError(f"{to} not reachable from {frm}")
    path = []
    v = t
    while v != s:
        e = parent[v]
        path.append(net.roads[e].id)
        a, b = net.endpoints_idx(e)
        v = b if v == a else a
    path.reverse()
    return path, dist[t]
