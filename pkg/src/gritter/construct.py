"""Greedy construction of a first feasible solution.

Every road belongs to the territory of the depot family that reaches it
cheapest. Cars open at their depot and grow outward, swallowing adjacent
territory roads; when the frontier runs dry they thread a deadhead hop
to the nearest unserved territory road and continue, so a car keeps
working until its load limit is spent.
"""

from __future__ import annotations

import math
from array import array

from gritter.kernels import INF
from gritter.model import (
    CAR_METHODS,
    GritterError,
    Method,
    RoadNetwork,
    effective_length_m,
    maintainable_by,
)
from gritter.plans import MaintenancePlan, Solution, walk_levels


class NoFeasibleSolutionError(GritterError):
    pass


class _Field:
    """Distance field of one depot family (multi-source shortest paths).

    Source ranks follow depot id order, so equidistant ties resolve to
    the lexicographically first depot.
    """

    __slots__ = ("sources", "dist", "rank", "parent")

    def __init__(self, net: RoadNetwork, method: Method):
        self.sources = net.depots(method)
        if self.sources:
            self.dist, self.rank, self.parent = net.run_dijkstra(self.sources)
        else:
            n = len(net.crossroads)
            self.dist = [INF] * n
            self.rank = [0] * n
            self.parent = [-1] * n

    def path_to(self, net: RoadNetwork, v: int):
        """Road ids from the chosen depot out to vertex v, plus the depot."""
        rids = []
        while self.parent[v] != -1:
            e = self.parent[v]
            rids.append(net.roads[e].id)
            a, b = net.endpoints_idx(e)
            v = b if v == a else a
        rids.reverse()
        return rids, net.crossroads[v].id


def depot_field(net: RoadNetwork, method: Method) -> _Field:
    """Distance field of one method's depot family, for callers that
    re-anchor plans to the nearest suitable depot."""
    return _Field(net, method)


class _Build:
    """Mutable plan under construction."""

    __slots__ = ("car", "method", "depot", "maintained", "deadhead", "load", "levels")

    def __init__(self, car, method, depot, maintained, deadhead, load):
        self.car = car
        self.method = method
        self.depot = depot
        self.maintained = maintained
        self.deadhead = deadhead
        self.load = load
        self.levels = {}

    def refresh_levels(self, net):
        self.levels = walk_levels(net, self.depot, self.maintained, self.deadhead)

    def freeze(self) -> MaintenancePlan:
        return MaintenancePlan(
            car=self.car,
            method=self.method,
            depot=self.depot,
            maintained=frozenset(self.maintained),
            deadhead=frozenset(self.deadhead),
        )


def _candidate_methods(road_method: Method):
    if road_method is Method.SNOWPLOW:
        return CAR_METHODS
    return (road_method,)


def _remoteness(net, field, rid):
    ui, vi = net.endpoints_idx(rid)
    return min(field.dist[ui], field.dist[vi])


def _nearest_depot(net, fields, road):
    """(method, entry vertex index) of the closest compatible depot, or
    None when no depot family can reach the road. Ties: shorter distance,
    chemical before inert, depot id, entry vertex."""
    ui, vi = net.endpoints_idx(road.id)
    pick = None
    for m in _candidate_methods(road.method):
        f = fields[m]
        for wi in dict.fromkeys((ui, vi)):
            d = f.dist[wi]
            if d < INF:
                key = (d, CAR_METHODS.index(m), f.rank[wi], wi)
                if pick is None or key < pick[0]:
                    pick = (key, m, wi)
    if pick is None:
        return None
    return pick[1], pick[2]


def _covered(net, maintained, levels) -> bool:
    for rid in maintained:
        r = net.road(rid)
        u, v = r.endpoints
        if min(levels.get(u, INF), levels.get(v, INF)) > r.priority:
            return False
    return True


def _extend_step(net, b, limit_m, owned, allowed=None, dist=None) -> bool:
    """Add the single best adjacent unowned road the car can take, or
    report False. Adjacent roads need no extra deadhead, so priority
    decides, then distance from the depot family (when given), then id."""
    cands = {}
    for vid, lvl in b.levels.items():
        vi = net.vertex_index(vid)
        for ei, _ in net.incident(vi):
            r = net.roads[ei]
            if r.id in owned:
                continue
            if allowed is not None and r.id not in allowed:
                continue
            if not maintainable_by(r.method, b.method):
                continue
            if lvl > r.priority:
                continue
            extra = effective_length_m(r)
            if r.id in b.deadhead:
                extra -= r.length_m  # raw length already on the clock
            if b.load + extra > limit_m:
                continue
            near = 0
            if dist is not None:
                ui, wi = net.endpoints_idx(r.id)
                near = min(dist[ui], dist[wi])
            cands[r.id] = (r.priority, near, r.id, r, extra)
    for _, _, _, r, extra in sorted(cands.values(), key=lambda c: c[:3]):
        if r.id in b.deadhead:
            # promoting a deadhead takes away free passage over it,
            # which can strand roads that entered through it
            m2 = set(b.maintained) | {r.id}
            d2 = set(b.deadhead) - {r.id}
            if not _covered(net, m2, walk_levels(net, b.depot, m2, d2)):
                continue
        b.maintained.add(r.id)
        b.deadhead.discard(r.id)
        b.load += extra
        owned.add(r.id)
        b.refresh_levels(net)
        return True
    return False


def _extend(net, b, limit_m, owned, allowed=None, dist=None):
    while _extend_step(net, b, limit_m, owned, allowed=allowed, dist=dist):
        pass


def _hop(net, b, todo, owned, limit_m):
    """Thread new deadhead from the car's current walk to the nearest
    unserved territory road, and maintain that road. Maintained roads
    block the path (crossing them would commit the walk to their
    priority); deadheads already on the clock are free. Returns False
    when no target fits the remaining budget.
    """
    remaining = [
        rid
        for rid in sorted(todo)
        if rid not in owned and maintainable_by(net.road(rid).method, b.method)
    ]
    if not remaining:
        return False
    cost = array("q", net.base_costs())
    for rid in b.maintained:
        cost[net.road_index(rid)] = -1
    for rid in b.deadhead:
        cost[net.road_index(rid)] = 0
    best = None
    runs = {}
    for lam in sorted(set(b.levels.values())):
        srcs = sorted(
            net.vertex_index(v) for v, lvl in b.levels.items() if lvl <= lam
        )
        if not srcs:
            continue
        runs[lam] = net.run_dijkstra(srcs, cost=cost)
        dist = runs[lam][0]
        for rid in remaining:
            r = net.road(rid)
            if r.priority < lam:
                continue
            ui, vi = net.endpoints_idx(rid)
            for wi in dict.fromkeys((ui, vi)):
                d = dist[wi]
                if d >= INF:
                    continue
                if b.load + d + effective_length_m(r) > limit_m:
                    continue
                key = (d, r.priority, rid, wi)
                if best is None or key < best[0]:
                    best = (key, lam)
    if best is None:
        return False
    (d, _, rid, wi), lam = best
    parent = runs[lam][2]
    v = wi
    while parent[v] != -1:
        e = parent[v]
        hop_rid = net.roads[e].id
        if hop_rid not in b.deadhead:
            b.deadhead.add(hop_rid)
            b.load += net.roads[e].length_m
        a, c = net.endpoints_idx(e)
        v = c if v == a else a
    road = net.road(rid)
    b.maintained.add(rid)
    if rid in b.deadhead:
        # the path threaded over the target to its far endpoint
        b.deadhead.discard(rid)
        b.load += effective_length_m(road) - road.length_m
    else:
        b.load += effective_length_m(road)
    owned.add(rid)
    b.refresh_levels(net)
    return True


def _bearing_order(net, depot_vi, rids):
    """Road ids sorted by angular position around the depot, starting
    right after the widest angular gap so sectors never straddle a
    natural hole in the territory."""
    x0 = net.crossroads[depot_vi].x
    y0 = net.crossroads[depot_vi].y
    ang = []
    for rid in sorted(rids):
        ui, vi = net.endpoints_idx(rid)
        mx = (net.crossroads[ui].x + net.crossroads[vi].x) / 2 - x0
        my = (net.crossroads[ui].y + net.crossroads[vi].y) / 2 - y0
        ang.append((math.atan2(my, mx), rid))
    ang.sort()
    if len(ang) > 1:
        gaps = [
            ((ang[(i + 1) % len(ang)][0] - a) % (2 * math.pi), i)
            for i, (a, _) in enumerate(ang)
        ]
        start = (max(gaps)[1] + 1) % len(ang)
        ang = ang[start:] + ang[:start]
    return [rid for _, rid in ang]


def _arc_split(net, order, n):
    """Cut an angular ordering into n consecutive sectors of roughly
    equal effective length."""
    total = sum(effective_length_m(net.road(rid)) for rid in order)
    arcs = [set() for _ in range(n)]
    acc = 0
    k = 0
    for rid in order:
        arcs[k].add(rid)
        acc += effective_length_m(net.road(rid))
        if k < n - 1 and acc * n >= total * (k + 1):
            k += 1
    return arcs


def _car_allocation(eff_by_depot, cap):
    """Fleet sizing before any car drives: the smallest count that can
    hold the total workload at cap, shared out to depots by largest
    remainder. Depots too light to earn a car lose their roads to
    neighbours' spare capacity instead of fielding a near-empty car."""
    total = sum(eff_by_depot.values())
    if total == 0:
        return {}
    n_cars = -(-total // cap)
    quota = {d: eff_by_depot[d] * n_cars / total for d in eff_by_depot}
    alloc = {d: int(quota[d]) for d in eff_by_depot}
    spare = n_cars - sum(alloc.values())
    order = sorted(
        eff_by_depot,
        key=lambda d: (alloc[d] - quota[d], -eff_by_depot[d], d),
    )
    for d in order[:spare]:
        alloc[d] += 1
    return alloc


def _grow(net, b, limit_m, owned, allowed, dist):
    """Alternate adjacency growth and deadhead hops until the allowed
    set is exhausted or nothing more fits the budget."""
    while True:
        _extend(net, b, limit_m, owned, allowed=allowed, dist=dist)
        if not (allowed - owned):
            break
        if not _hop(net, b, allowed, owned, limit_m):
            break


def _rest_depot(net, field, rest, fallback):
    """Depot id of the family depot closest to the leftover roads."""
    if field is None or not field.sources:
        return fallback
    rid0 = min(rest, key=lambda r: (_remoteness(net, field, r), r))
    ui, vi = net.endpoints_idx(rid0)
    wi = ui if (field.dist[ui], ui) <= (field.dist[vi], vi) else vi
    if field.dist[wi] >= INF:
        return fallback
    return net.crossroads[field.sources[field.rank[wi]]].id


def _repack_once(net, union, method, lead, rest_car, rest_depot, limit_m, field):
    dist = net.run_dijkstra([net.vertex_index(lead.depot)])[0]
    owned = set()
    b1 = _Build(
        car=lead.car,
        method=method,
        depot=lead.depot,
        maintained=set(),
        deadhead=set(),
        load=0,
    )
    b1.levels = {lead.depot: 0}
    _grow(net, b1, limit_m, owned, union, dist)
    rest = union - owned
    if not rest:
        return b1.freeze(), None
    b2 = _Build(
        car=rest_car,
        method=method,
        depot=_rest_depot(net, field, rest, rest_depot),
        maintained=set(),
        deadhead=set(),
        load=0,
    )
    b2.levels = {b2.depot: 0}
    _grow(net, b2, limit_m, owned, union, None)
    if union - owned:
        return None
    return b1.freeze(), b2.freeze()


def repack_pair(net: RoadNetwork, p1, p2, limit_m: int, field=None):
    """Rebuild two same-method plans from scratch over the union of
    their maintained roads: a lead car grabs as much as fits, a second
    keeps whatever is left, re-anchored at whichever family depot sits
    closest (field gives the family's depot distances). Far stronger
    than moving branches between the existing trees, because both
    shapes are thrown away. Both lead choices are tried.

    Returns (plan1, plan2) where plan2 is None when one car swallowed
    everything, or None when the leftovers cannot all live in one car
    or nothing changed.
    """
    if p1.method is not p2.method or p1.car == p2.car:
        return None
    union = set(p1.maintained) | set(p2.maintained)
    best = None
    for lead, rest_car in ((p1, p2.car), (p2, p1.car)):
        res = _repack_once(
            net, union, p1.method, lead, rest_car, p1.depot, limit_m, field
        )
        if res is None:
            continue
        r1, r2 = res
        if r2 is None:
            return res  # one car swallowed everything; nothing beats that
        if {frozenset(r1.maintained), frozenset(r2.maintained)} == {
            frozenset(p1.maintained),
            frozenset(p2.maintained),
        }:
            continue
        dh = sum(net.road(rid).length_m for rid in r1.deadhead) + sum(
            net.road(rid).length_m for rid in r2.deadhead
        )
        if best is None or dh < best[0]:
            best = (dh, res)
    return None if best is None else best[1]


def initial_solution(net: RoadNetwork, limit_m: int) -> Solution:
    """Build a feasible solution covering every road, or raise
    NoFeasibleSolutionError naming the first road no single car can serve.

    Roads split into one workload per car method; snowplow roads join the
    family that reaches them cheapest. The fleet is sized up front from
    the total workload, each depot gets cars in proportion to its share,
    and every car grows an angular sector anchored at its depot, so
    almost no car pays an approach drive. Whatever the sectors miss is
    spilled into cars with spare budget, and only then do extra cars
    open at the unserved frontier.
    """
    fields = {m: _Field(net, m) for m in CAR_METHODS}
    owned = set()
    builds = []
    work = {m: set() for m in CAR_METHODS}
    terr = {}
    for road in net.roads:
        found = _nearest_depot(net, fields, road)
        if found is None:
            raise NoFeasibleSolutionError(
                f"road {road.id}: no depot with suitable storage can reach it"
            )
        m, wi = found
        work[m].add(road.id)
        terr.setdefault((m, fields[m].sources[fields[m].rank[wi]]), set()).add(
            road.id
        )

    # sectors sized a little under the limit leave room for connector
    # deadhead, so a sector rarely overflows into a second car
    cap = max(1, limit_m - limit_m // 25)
    cars = []
    car_dist = []
    for method in CAR_METHODS:
        f = fields[method]
        eff_by_depot = {
            dvi: sum(effective_length_m(net.road(rid)) for rid in rids)
            for (m, dvi), rids in terr.items()
            if m is method
        }
        alloc = _car_allocation(eff_by_depot, cap)
        for dvi in sorted(alloc):
            if not alloc[dvi]:
                continue
            depot_id = net.crossroads[dvi].id
            order = _bearing_order(net, dvi, terr[(method, dvi)])
            for arc in _arc_split(net, order, alloc[dvi]):
                b = _Build(
                    car="",
                    method=method,
                    depot=depot_id,
                    maintained=set(),
                    deadhead=set(),
                    load=0,
                )
                b.levels = {depot_id: 0}
                free = arc - owned
                if free:
                    # one claimed road per sector spreads the depot's cars
                    # apart before the land grab starts
                    seed = min(free, key=lambda r: (_remoteness(net, f, r), r))
                    _hop(net, b, {seed}, owned, limit_m)
                cars.append(b)
                car_dist.append(f.dist)
    # competitive growth: the lightest car moves first, one road at a
    # time, so loads stay level and petals carve the map by occupation.
    # Both fleets share one arena, so shared-method roads go to whoever
    # reaches them instead of the family they were pre-assigned to.
    all_todo = set().union(*work.values())
    active = list(range(len(cars)))
    while active:
        active.sort(key=lambda i: (cars[i].load, i))
        still = []
        for i in active:
            b = cars[i]
            if _extend_step(net, b, limit_m, owned, allowed=all_todo, dist=car_dist[i]):
                still.append(i)
            elif (all_todo - owned) and _hop(net, b, all_todo, owned, limit_m):
                still.append(i)
        active = still
    builds.extend(b for b in cars if b.maintained)
    for method in CAR_METHODS:
        todo = work[method]
        f = fields[method]
        while todo - owned:
            rid0 = min(todo - owned, key=lambda r: (_remoteness(net, f, r), r))
            ui, vi = net.endpoints_idx(rid0)
            wi = ui if (f.dist[ui], ui) <= (f.dist[vi], vi) else vi
            depot_id = net.crossroads[f.sources[f.rank[wi]]].id
            b = _Build(
                car="",
                method=method,
                depot=depot_id,
                maintained=set(),
                deadhead=set(),
                load=0,
            )
            b.levels = {depot_id: 0}
            _grow(net, b, limit_m, owned, todo, f.dist)
            if not b.maintained:
                # even an empty car cannot reach the nearest leftover:
                # no single car can ever serve it
                road = net.road(rid0)
                need = _remoteness(net, f, rid0) + effective_length_m(road)
                raise NoFeasibleSolutionError(
                    f"road {rid0}: nearest depot approach needs {need} m, "
                    f"over the {limit_m} m limit"
                )
            builds.append(b)
    for i, b in enumerate(builds):
        b.car = f"car-{i + 1:04d}"
    return Solution(plans=tuple(b.freeze() for b in builds))


def naive_solution(net: RoadNetwork, limit_m: int) -> Solution:
    """One car per road: drive out, maintain it, done. The baseline the
    greedy construction must never lose to."""
    fields = {m: _Field(net, m) for m in CAR_METHODS}
    plans = []
    for road in sorted(net.roads, key=lambda r: r.id):
        found = _nearest_depot(net, fields, road)
        if found is None:
            raise NoFeasibleSolutionError(
                f"road {road.id}: no depot with suitable storage can reach it"
            )
        m, wi = found
        path, depot_id = fields[m].path_to(net, wi)
        deadhead = frozenset(path) - {road.id}
        load = effective_length_m(road) + sum(
            net.road(rid).length_m for rid in deadhead
        )
        if load > limit_m:
            raise NoFeasibleSolutionError(
                f"road {road.id}: nearest depot approach needs {load} m, "
                f"over the {limit_m} m limit"
            )
        plans.append(
            MaintenancePlan(
                car=f"car-{len(plans) + 1:04d}",
                method=m,
                depot=depot_id,
                maintained=frozenset({road.id}),
                deadhead=deadhead,
            )
        )
    return Solution(plans=tuple(plans))
