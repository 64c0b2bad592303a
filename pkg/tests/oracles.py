"""Brute-force reference implementations used only by the tests.

Everything here trades speed for obviousness: plain exhaustive search,
no data structures shared with the package beyond the model types.
Keep these dumb; they are the arbiters the fast code is judged against.
"""

import itertools
import random

from gritter.model import (
    Crossroad,
    Method,
    Road,
    RoadNetwork,
    effective_length_m,
    maintainable_by,
)

INF = float("inf")


# ---------------------------------------------------------------- paths


def brute_shortest(net, frm, to):
    """Min length over all vertex-simple paths, by full DFS enumeration.

    Returns (length_m, road id tuple) or (None, None) when unreachable.
    Parallel roads are tried individually.
    """
    if frm == to:
        return 0, ()
    adj = {}
    for r in net.roads:
        u, v = r.endpoints
        adj.setdefault(u, []).append((r.id, v, r.length_m))
        if v != u:
            adj.setdefault(v, []).append((r.id, u, r.length_m))
    best = [None, None]

    def walk(at, seen, total, trail):
        if best[0] is not None and total >= best[0]:
            return
        if at == to:
            best[0] = total
            best[1] = tuple(trail)
            return
        for rid, nxt, w in adj.get(at, ()):
            if nxt in seen:
                continue
            seen.add(nxt)
            trail.append(rid)
            walk(nxt, seen, total + w, trail)
            trail.pop()
            seen.discard(nxt)

    walk(frm, {frm}, 0, [])
    return best[0], best[1]


# ----------------------------------------------------- monotone coverage


def reach_levels_brute(net, depot, maintained, deadhead, start_level=0):
    """Min walk level per vertex by enumerating vertex-simple paths.

    A maintained road of priority p can be traversed only from level
    <= p and raises the level to p; deadheads keep the level. Loops
    contribute to their endpoint's road check but never extend a path.
    """
    plan_roads = set(maintained) | set(deadhead)
    adj = {}
    for rid in plan_roads:
        r = net.road(rid)
        u, v = r.endpoints
        if u == v:
            continue
        adj.setdefault(u, []).append((rid, v))
        adj.setdefault(v, []).append((rid, u))
    best = {depot: start_level}

    def walk(at, level, seen):
        for rid, nxt in adj.get(at, ()):
            if nxt in seen:
                continue
            r = net.road(rid)
            if rid in maintained:
                if r.priority < level:
                    continue
                nl = r.priority
            else:
                nl = level
            if nl < best.get(nxt, INF):
                best[nxt] = nl
            walk(nxt, nl, seen | {nxt})

    walk(depot, start_level, {depot})
    return best


def monotone_ok_brute(net, depot, maintained, deadhead):
    """Every maintained road reachable at a level not above its priority."""
    levels = reach_levels_brute(net, depot, maintained, deadhead)
    for rid in maintained:
        r = net.road(rid)
        u, v = r.endpoints
        if min(levels.get(u, INF), levels.get(v, INF)) > r.priority:
            return False
    return True


def plan_feasible_brute(net, method, depot, maintained, deadhead, limit_m):
    """Full feasibility for a single would-be plan, from first principles."""
    if method not in net.crossroad(depot).storage:
        return False
    for rid in maintained:
        if not maintainable_by(net.road(rid).method, method):
            return False
    load = sum(effective_length_m(net.road(rid)) for rid in maintained)
    load += sum(net.road(rid).length_m for rid in deadhead)
    if load > limit_m:
        return False
    verts = {depot}
    roads = set(maintained) | set(deadhead)
    grown = True
    while grown:
        grown = False
        for rid in roads:
            u, v = net.road(rid).endpoints
            if (u in verts) != (v in verts):
                verts |= {u, v}
                grown = True
    for rid in roads:
        u, v = net.road(rid).endpoints
        if u not in verts or v not in verts:
            return False
    return monotone_ok_brute(net, depot, maintained, deadhead)


# ----------------------------------------------------- binary cover min


def cover_min_brute(costs, clauses):
    """Min-cost assignment over all 2^n, or None if nothing satisfies.

    Clauses are iterables of (var, polarity); polarity True wants the
    variable at 1. At least one literal per clause must hold.
    """
    names = sorted(costs)
    best = None
    for bits in itertools.product((0, 1), repeat=len(names)):
        asgn = dict(zip(names, bits))
        ok = True
        for cl in clauses:
            if not any(
                (asgn[v] == 1) if pol else (asgn[v] == 0) for v, pol in cl
            ):
                ok = False
                break
        if not ok:
            continue
        total = sum(costs[v] for v, b in asgn.items() if b)
        if best is None or total < best:
            best = total
    return best


# ----------------------------------------------------------- cut bounds


def _cover_components(roads_by_id, allowed):
    """Component vertex sets of the subgraph spanned by the allowed roads."""
    adj = {}
    for rid in allowed:
        u, v = roads_by_id[rid]
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    seen = set()
    comps = []
    for s in sorted(adj):
        if s in seen:
            continue
        comp = {s}
        seen.add(s)
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def components_violating(net, selected, target):
    """Independent re-derivation of the violated component list."""
    target = Method(target)
    allowed = set(selected)
    for r in net.roads:
        if r.method is target or r.method is Method.SNOWPLOW:
            allowed.add(r.id)
    ends = {r.id: r.endpoints for r in net.roads}
    comps = _cover_components(ends, allowed)
    depots = {
        c.id for c in net.crossroads if target in c.storage
    }
    out = []
    for comp in comps:
        has_target = any(
            net.road(rid).method is target
            and set(net.road(rid).endpoints) <= comp
            for rid in allowed
        )
        if has_target and not (comp & depots):
            out.append(frozenset(comp))
    return sorted(out, key=sorted)


def connectivity_min_brute(net, target):
    """Exhaustive subset search for the one-sided deadhead bound.

    Tries every subset of opposite-method roads and keeps the cheapest
    one whose addition leaves no violated component. None if even the
    full set fails.
    """
    target = Method(target)
    opposite = (
        Method.INERT if target is Method.CHEMICAL else Method.CHEMICAL
    )
    cands = sorted(r.id for r in net.roads if r.method is opposite)
    best = None
    for k in range(len(cands) + 1):
        if best is not None:
            break
        for pick in itertools.combinations(cands, k):
            if components_violating(net, set(pick), target):
                continue
            total = sum(net.road(rid).length_m for rid in pick)
            if best is None or total < best:
                best = total
    # combinations are not cost-ordered, so sweep every size once more
    if best is not None:
        for k in range(len(cands) + 1):
            for pick in itertools.combinations(cands, k):
                total = sum(net.road(rid).length_m for rid in pick)
                if total >= best:
                    continue
                if not components_violating(net, set(pick), target):
                    best = total
    return best


def steiner_min_brute(g):
    """Exhaustive optimum for a reduced graph: cheapest edge subset whose
    union puts all terminals in one component. 0 for <= 1 terminal."""
    terms = sorted(g.terminals)
    if len(terms) <= 1:
        return 0
    eids = sorted(g.edges)
    best = None
    for bits in itertools.product((0, 1), repeat=len(eids)):
        chosen = [eid for eid, b in zip(eids, bits) if b]
        total = sum(g.edges[eid][2] for eid in chosen)
        if best is not None and total >= best:
            continue
        parent = {}

        def find(x):
            while parent.get(x, x) != x:
                parent[x] = parent.get(parent[x], parent[x])
                x = parent[x]
            return x

        for eid in chosen:
            u, v = g.edges[eid][0], g.edges[eid][1]
            parent[find(u)] = find(v)
        if len({find(t) for t in terms}) == 1:
            best = total
    return best


def joint_min_brute(net):
    """Exhaustive optimum of the combined two-method model.

    Enumerates the per-road deadhead choice and the per-snowplow-road
    method choice; feasible when, for each method, every same-method
    road's component (in method roads + deadheads + snowplow roads
    assigned to that method) contains a depot of that method.
    """
    rids = sorted(r.id for r in net.roads)
    snow = [rid for rid in rids if net.road(rid).method is Method.SNOWPLOW]
    best = None
    for xbits in itertools.product((0, 1), repeat=len(rids)):
        x = dict(zip(rids, xbits))
        total = sum(net.road(rid).length_m for rid in rids if x[rid])
        if best is not None and total >= best:
            continue
        for mbits in itertools.product((0, 1), repeat=len(snow)):
            xm = dict(zip(snow, mbits))
            ok = True
            for target in (Method.CHEMICAL, Method.INERT):
                allowed = set()
                for rid in rids:
                    r = net.road(rid)
                    if r.method is target or x[rid]:
                        allowed.add(rid)
                    elif r.method is Method.SNOWPLOW:
                        side = xm[rid] == 1
                        if (target is Method.CHEMICAL) == side:
                            allowed.add(rid)
                ends = {r.id: r.endpoints for r in net.roads}
                comps = _cover_components(ends, allowed)
                depots = {
                    c.id for c in net.crossroads if target in c.storage
                }
                for comp in comps:
                    has = any(
                        net.road(rid).method is target
                        and set(net.road(rid).endpoints) <= comp
                        for rid in allowed
                    )
                    if has and not (comp & depots):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                best = total
                break
    return best


def multicar_min_brute(net, n_chem, n_inert, limit_m):
    """Minimum total traversal over every per-car road assignment.

    No symmetry breaking here on purpose: this is the ground truth the
    symmetry-broken search is compared against. Returns None when no
    assignment is feasible.
    """
    methods = [Method.CHEMICAL] * n_chem + [Method.INERT] * n_inert
    n_cars = len(methods)
    roads = list(net.roads)
    if not roads:
        return 0
    if n_cars == 0:
        return None
    depots = {
        m: {c.id for c in net.crossroads if m in c.storage}
        for m in (Method.CHEMICAL, Method.INERT)
    }
    masks = []
    for r in roads:
        compat = 0
        for c, m in enumerate(methods):
            if maintainable_by(r.method, m):
                compat |= 1 << c
        if compat == 0:
            return None
        masks.append(
            [m for m in range(1, 1 << n_cars) if m & compat]
        )
    best = None
    for combo in itertools.product(*masks):
        total = 0
        loads = [0] * n_cars
        ok = True
        for j, m in enumerate(combo):
            w = roads[j].length_m
            total += w * bin(m).count("1")
            for c in range(n_cars):
                if m >> c & 1:
                    loads[c] += w
                    if loads[c] > limit_m:
                        ok = False
            if not ok:
                break
        if not ok or (best is not None and total >= best):
            continue
        for c in range(n_cars):
            mine = [roads[j] for j in range(len(roads)) if combo[j] >> c & 1]
            if not _touches_depot(net, mine, depots[methods[c]]):
                ok = False
                break
        if ok:
            best = total
    return best


def _touches_depot(net, mine, depot_ids):
    if not mine:
        return True
    adj = {}
    for r in mine:
        u, v = r.endpoints
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    for comp in _cover_components({r.id: r.endpoints for r in mine}, [r.id for r in mine]):
        if not (comp & depot_ids):
            return False
    return True


# ------------------------------------------------------------- exchange


def apply_exchange(sets1, sets2, chosen):
    """(maintained, deadhead) pairs of both plans after moving the
    chosen branches."""
    m1, d1 = set(sets1[0]), set(sets1[1])
    m2, d2 = set(sets2[0]), set(sets2[1])
    for c in chosen:
        if c.direction == "1to2":
            m1 -= c.maintained
            d1 -= c.deadhead
            m2 |= c.maintained
            d2 |= c.deadhead
        else:
            m2 -= c.maintained
            d2 -= c.deadhead
            m1 |= c.maintained
            d1 |= c.deadhead
    d1 -= m1
    d2 -= m2
    return (m1, d1), (m2, d2)


def exchange_best_load_brute(net, p1, p2, limit_m, cands, working1, working2):
    """Min feasible load of the second plan over all branch-disjoint
    candidate subsets, judged by the from-first-principles checker.

    working1/working2 are the deadhead sets the exchange actually starts
    from (tree extraction may drop redundant deadheads first). Returns
    the best achievable load in meters, or None if no nonempty subset is
    feasible.
    """
    base1 = (p1.maintained, frozenset(working1))
    base2 = (p2.maintained, frozenset(working2))
    best = None
    for k in range(1, len(cands) + 1):
        for subset in itertools.combinations(cands, k):
            used = set()
            clash = False
            for c in subset:
                if used & c.roads:
                    clash = True
                    break
                used |= c.roads
            if clash:
                continue
            (m1, d1), (m2, d2) = apply_exchange(base1, base2, subset)
            if not plan_feasible_brute(net, p1.method, p1.depot, m1, d1, limit_m):
                continue
            if not plan_feasible_brute(net, p2.method, p2.depot, m2, d2, limit_m):
                continue
            load2 = sum(effective_length_m(net.road(r)) for r in m2)
            load2 += sum(net.road(r).length_m for r in d2)
            if best is None or load2 < best:
                best = load2
    return best


# -------------------------------------------------- random tiny networks


METHOD_WHEEL = [
    Method.CHEMICAL,
    Method.CHEMICAL,
    Method.CHEMICAL,
    Method.CHEMICAL,
    Method.INERT,
    Method.SNOWPLOW,
]


def rand_net(
    rng: random.Random,
    n_vertices=6,
    n_roads=8,
    methods=None,
    priorities=(1, 2, 3),
    mults=(1, 1, 2),
    depot_count=1,
    both_storages=True,
    max_len_m=9000,
):
    """Small random connected multigraph for property tests.

    Spanning tree first, then extra edges (parallels and loops allowed).
    Depots get both storages unless told otherwise; the first depot is
    always vertex 0.
    """
    methods = list(methods) if methods else METHOD_WHEEL
    names = [f"v{i}" for i in range(n_vertices)]
    coords = {v: (rng.uniform(0, 10), rng.uniform(0, 10)) for v in names}
    roads = []
    for i in range(1, n_vertices):
        j = rng.randrange(i)
        roads.append((names[i], names[j]))
    while len(roads) < n_roads:
        a = rng.randrange(n_vertices)
        b = rng.randrange(n_vertices)
        roads.append((names[a], names[b]))
    rng.shuffle(roads)
    road_objs = []
    for k, (u, v) in enumerate(roads):
        road_objs.append(
            Road(
                id=f"e{k:02d}",
                endpoints=(u, v),
                length_m=rng.randrange(500, max_len_m),
                method=rng.choice(methods),
                priority=rng.choice(priorities),
                multiplicity=rng.choice(mults),
            )
        )
    depot_ids = rng.sample(range(n_vertices), min(depot_count, n_vertices))
    if 0 not in depot_ids:
        depot_ids[0] = 0
    storage_map = {}
    for i in depot_ids:
        if both_storages:
            storage_map[i] = frozenset({Method.CHEMICAL, Method.INERT})
        else:
            storage_map[i] = frozenset({rng.choice([Method.CHEMICAL, Method.INERT])})
    crosses = [
        Crossroad(
            id=v,
            x=round(coords[v][0], 3),
            y=round(coords[v][1], 3),
            storage=storage_map.get(i, frozenset()),
        )
        for i, v in enumerate(names)
    ]
    return RoadNetwork(crossroads=crosses, roads=road_objs)
