"""Feasibility-preserving improvement moves on plans.

Three move families: per-car deadhead reduction (a small edge-Steiner
reconnection), two-car merge, and the bin-packing branch exchange over
rooted plan trees. Every move keeps each road maintained by exactly one
car and never breaks the priority walk order.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, replace

from gritter.kernels import INF
from gritter.model import RoadNetwork, effective_length_m
from gritter.plans import (
    DisconnectedPlanError,
    MaintenancePlan,
    plan_deadhead_m,
    plan_load_m,
    walk_levels,
)

EXACT_REDUCE_MAX_ROADS = 12  # below this, deadhead reduction enumerates subsets


def _satisfied(net, maintained, levels) -> bool:
    for rid in maintained:
        r = net.road(rid)
        u, v = r.endpoints
        if min(levels.get(u, INF), levels.get(v, INF)) > r.priority:
            return False
    return True


def _connected(net, depot, rids) -> bool:
    if not rids:
        return True
    adj = {}
    for rid in rids:
        u, v = net.road(rid).endpoints
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if depot not in adj:
        return False
    seen = {depot}
    stack = [depot]
    while stack:
        x = stack.pop()
        for w in adj[x]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(adj)


def _verify_sets(net, depot, maintained, deadhead, limit_m):
    """(feasible, load m, deadhead m) for a would-be plan."""
    load = 0
    dh = 0
    for rid in maintained:
        load += effective_length_m(net.road(rid))
    for rid in deadhead:
        l = net.road(rid).length_m
        load += l
        dh += l
    if load > limit_m:
        return False, load, dh
    if not _connected(net, depot, set(maintained) | set(deadhead)):
        return False, load, dh
    levels = walk_levels(net, depot, maintained, deadhead)
    return _satisfied(net, maintained, levels), load, dh


def _components(net, rids, anchor=None):
    """Connected components of a road set as (vertex set, road set) pairs.

    When anchor is given it is forced into the listing (alone if it
    touches no road) and its component comes first.
    """
    adj = {}
    for rid in rids:
        u, v = net.road(rid).endpoints
        adj.setdefault(u, []).append((rid, v))
        if v != u:
            adj.setdefault(v, []).append((rid, u))
    comps = []
    seen = set()
    starts = []
    if anchor is not None:
        starts.append(anchor)
    starts.extend(sorted(adj))
    for s in starts:
        if s in seen or (s not in adj and s != anchor):
            continue
        verts = {s}
        roads = set()
        stack = [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            for rid, w in adj.get(x, ()):
                roads.add(rid)
                if w not in seen:
                    seen.add(w)
                    verts.add(w)
                    stack.append(w)
        comps.append((verts, roads))
    return comps


def _lam_values(net, maintained):
    return sorted({0} | {net.road(rid).priority for rid in maintained})


def _entry_ok(net, comp_m, comp_d, vertex, level) -> bool:
    """Can a car standing at vertex with the given walk level still cover
    all maintained roads of this road set?"""
    levels = walk_levels(net, vertex, comp_m, comp_d, seed={vertex: level})
    return _satisfied(net, comp_m, levels)


def _lam_max(net, comp_m, comp_d, vertex, candidates):
    """Highest entry level at vertex that keeps the set coverable, or None."""
    for lvl in reversed(candidates):
        if _entry_ok(net, comp_m, comp_d, vertex, lvl):
            return lvl
    return None


def _reconnect(net, depot, maintained, deadhead):
    """Grow the deadhead set until every component of the plan subgraph
    hangs off the depot by a priority-safe walk. Repeatedly attaches the
    nearest detached component over the shortest usable path. Returns the
    new deadhead set, or None when some component cannot be attached.
    """
    dead = set(deadhead)
    comps = _components(net, set(maintained) | dead, anchor=depot)
    detached = [
        (verts, roads) for verts, roads in comps[1:]
    ]  # comps[0] holds the anchor
    lam_cands = _lam_values(net, maintained)
    lam_cache = {}
    base = net.base_costs()
    while detached:
        levels = walk_levels(net, depot, maintained, dead)
        cost = array("q", base)
        for rid in maintained:
            cost[net.road_index(rid)] = -1
        for rid in dead:
            cost[net.road_index(rid)] = 0
        best = None
        runs = {}
        for lam in lam_cands:
            srcs = sorted(
                net.vertex_index(vid) for vid, lvl in levels.items() if lvl <= lam
            )
            if not srcs:
                continue
            runs[lam] = net.run_dijkstra(srcs, cost=cost)
            dist = runs[lam][0]
            for ci, (verts, roads) in enumerate(detached):
                comp_m = [rid for rid in roads if rid in maintained]
                comp_d = [rid for rid in roads if rid in dead]
                for vid in sorted(verts):
                    vi = net.vertex_index(vid)
                    if dist[vi] >= INF:
                        continue
                    key = (ci, vid)
                    if key not in lam_cache:
                        lam_cache[key] = _lam_max(net, comp_m, comp_d, vid, lam_cands)
                    lm = lam_cache[key]
                    if lm is None or lm < lam:
                        continue
                    cand = (dist[vi], lam, ci, vi)
                    if best is None or cand < best:
                        best = cand
        if best is None:
            return None
        _, lam, ci, vi = best
        parent = runs[lam][2]
        v = vi
        while parent[v] != -1:
            e = parent[v]
            rid = net.roads[e].id
            if rid not in dead:
                dead.add(rid)
            a, b = net.endpoints_idx(e)
            v = b if v == a else a
        detached.pop(ci)
        lam_cache = {
            (c - 1 if c > ci else c, vid): lm
            for (c, vid), lm in lam_cache.items()
            if c != ci
        }
    final = walk_levels(net, depot, maintained, dead)
    if not _satisfied(net, maintained, final):
        return None
    if not _connected(net, depot, set(maintained) | dead):
        return None
    return dead


def _trim(net, depot, maintained, dead, pinned):
    """Drop deadheads one by one, longest first, while the plan stays
    connected and priority-coverable."""
    for rid in sorted(dead - pinned, key=lambda r: (-net.road(r).length_m, r)):
        trial = dead - {rid}
        if not _connected(net, depot, set(maintained) | trial):
            continue
        levels = walk_levels(net, depot, maintained, trial)
        if _satisfied(net, maintained, levels):
            dead = trial
    return dead


def _exact_min_deadhead(net, plan, pinned):
    """Exhaustive subset search over all candidate deadhead roads; only
    viable on tiny networks. Returns the cheapest feasible set or None."""
    cands = sorted(
        r.id
        for r in net.roads
        if r.id not in plan.maintained and r.id not in pinned
    )
    best = None
    for mask in range(1 << len(cands)):
        chosen = {cands[i] for i in range(len(cands)) if mask >> i & 1}
        total = sum(net.road(rid).length_m for rid in chosen | pinned)
        ids = tuple(sorted(chosen | pinned))
        if best is not None and (total, ids) >= best[0]:
            continue
        dead = chosen | pinned
        if not _connected(net, plan.depot, set(plan.maintained) | dead):
            continue
        levels = walk_levels(net, plan.depot, plan.maintained, dead)
        if _satisfied(net, plan.maintained, levels):
            best = ((total, ids), dead)
    return best[1] if best else None


def steiner_reduce_deadhead(
    net: RoadNetwork, plan: MaintenancePlan, owned_only=frozenset()
) -> MaintenancePlan:
    """Rebuild the plan's deadhead set from scratch: keep the maintained
    roads (and any deadheads listed in owned_only), drop the rest, and
    reconnect what fell apart over shortest priority-safe paths. Returns
    the input plan unless this strictly shortens the deadhead total.
    """
    pinned = frozenset(plan.deadhead & owned_only)
    if len(net.roads) <= EXACT_REDUCE_MAX_ROADS:
        dead = _exact_min_deadhead(net, plan, pinned)
    else:
        dead = _reconnect(net, plan.depot, plan.maintained, pinned)
        if dead is not None:
            dead = _trim(net, plan.depot, plan.maintained, dead, pinned)
    if dead is None:
        return plan
    if sum(net.road(rid).length_m for rid in dead) < plan_deadhead_m(net, plan):
        return replace(plan, deadhead=frozenset(dead))
    return plan


def try_merge(net: RoadNetwork, p1: MaintenancePlan, p2: MaintenancePlan, limit_m: int):
    """One car instead of two: union the plans, bridge any gap with a
    shortest connecting path, and keep the result if it fits the limit
    and stays priority-coverable from either depot (p1's tried first).
    Returns the merged plan (p1's car id) or None.
    """
    if p1.method != p2.method:
        return None
    maintained = p1.maintained | p2.maintained
    eff = sum(effective_length_m(net.road(rid)) for rid in maintained)
    if eff > limit_m:
        return None
    dead0 = (p1.deadhead | p2.deadhead) - maintained
    for depot in dict.fromkeys((p1.depot, p2.depot)):
        dead = _reconnect(net, depot, maintained, dead0)
        if dead is None:
            continue
        ok, load, _ = _verify_sets(net, depot, maintained, dead, limit_m)
        if ok:
            return MaintenancePlan(
                car=p1.car,
                method=p1.method,
                depot=depot,
                maintained=frozenset(maintained),
                deadhead=frozenset(dead),
            )
    return None


@dataclass
class RootedPlanTree:
    """Spanning tree of a plan's subgraph rooted at the depot, built by
    depth-first search that prefers important roads. Maintained roads
    that did not make the tree ride along as extras; deadheads that did
    not make it are dropped from the working set."""

    plan: MaintenancePlan
    root: str
    parent_edge: dict  # vertex -> road id toward root
    parent_vertex: dict
    children: dict  # vertex -> [(child vertex, road id)] in DFS order
    order: list  # preorder vertex list; tin[v] indexes into it
    tin: dict
    tout: dict
    tree_roads: frozenset
    extras: frozenset
    dropped: frozenset

    @property
    def working_deadhead(self) -> frozenset:
        return self.plan.deadhead - self.dropped

    def subtree_vertices(self, v):
        return self.order[self.tin[v] : self.tout[v]]


def build_plan_tree(net: RoadNetwork, plan: MaintenancePlan) -> RootedPlanTree:
    adj = {}
    for rid in sorted(plan.roads()):
        r = net.road(rid)
        u, v = r.endpoints
        if u == v:
            continue  # loops can never be tree edges
        adj.setdefault(u, []).append((r.priority, rid, v))
        adj.setdefault(v, []).append((r.priority, rid, u))
    for lst in adj.values():
        lst.sort()
    root = plan.depot
    parent_edge = {}
    parent_vertex = {}
    children = {}
    visited = {root}
    order = [root]
    stack = [(root, iter(adj.get(root, ())))]
    while stack:
        v, it = stack[-1]
        for _, rid, w in it:
            if w not in visited:
                visited.add(w)
                parent_edge[w] = rid
                parent_vertex[w] = v
                children.setdefault(v, []).append((w, rid))
                order.append(w)
                stack.append((w, iter(adj.get(w, ()))))
                break
        else:
            stack.pop()
    if not set(adj) <= visited:
        missing = sorted(set(adj) - visited)
        raise DisconnectedPlanError(
            f"car {plan.car}: cannot root the plan, {missing[0]} unreachable"
        )
    tin = {}
    tout = {}
    t = 0
    walk = [(root, False)]
    while walk:
        v, done = walk.pop()
        if done:
            tout[v] = t
            continue
        tin[v] = t
        t += 1
        walk.append((v, True))
        for w, _ in reversed(children.get(v, ())):
            walk.append((w, False))
    tree_roads = frozenset(parent_edge.values())
    dropped = plan.deadhead - tree_roads
    if dropped:
        # a cycle-closing deadhead can still be the only low-level
        # pathway to some maintained road; drop only when coverage holds
        kept = plan.deadhead - dropped
        if not _satisfied(
            net, plan.maintained, walk_levels(net, root, plan.maintained, kept)
        ):
            dropped = frozenset()
    return RootedPlanTree(
        plan=plan,
        root=root,
        parent_edge=parent_edge,
        parent_vertex=parent_vertex,
        children=children,
        order=order,
        tin=tin,
        tout=tout,
        tree_roads=tree_roads,
        extras=plan.maintained - tree_roads,
        dropped=dropped,
    )


@dataclass(frozen=True)
class ExchangeCandidate:
    cid: int
    pivot: str
    direction: str  # "1to2" moves a branch of t1 into t2; "2to1" the reverse
    maintained: frozenset
    deadhead: frozenset
    load_delta: int  # meters leaving the donor
    ratio: float  # moved load per meter of deadhead added to the receiver

    @property
    def roads(self) -> frozenset:
        return self.maintained | self.deadhead


def _branch_roads(net, tree, pivot, child):
    """Road set of the branch hanging below pivot via child, or None when
    an extra road straddles the branch boundary (the branch cannot move
    without stranding it)."""
    verts = set(tree.subtree_vertices(child))
    roads = {tree.parent_edge[x] for x in verts}
    for rid in sorted(tree.extras):
        x, y = net.road(rid).endpoints
        inx, iny = x in verts, y in verts
        if inx and iny:
            roads.add(rid)
        elif inx or iny:
            other = y if inx else x
            if other == pivot:
                roads.add(rid)
            else:
                return None
    return roads


def enumerate_exchanges(net: RoadNetwork, t1: RootedPlanTree, t2: RootedPlanTree):
    """All movable branches rooted at vertices the two plans share.

    Movable means: the donor plan stays connected and priority-coverable
    without the branch, and the branch itself is coverable entering at
    the pivot with the receiving plan's walk level there.
    """
    shared = sorted(set(t1.tin) & set(t2.tin))
    out = []
    if not shared:
        return out
    lev = {
        "1to2": walk_levels(net, t2.root, t2.plan.maintained, t2.working_deadhead),
        "2to1": walk_levels(net, t1.root, t1.plan.maintained, t1.working_deadhead),
    }
    recv_roads = {
        "1to2": t2.plan.maintained | t2.working_deadhead,
        "2to1": t1.plan.maintained | t1.working_deadhead,
    }
    for u in shared:
        for tree, direction in ((t1, "1to2"), (t2, "2to1")):
            for child, _ in tree.children.get(u, ()):
                roads = _branch_roads(net, tree, u, child)
                if roads is None:
                    continue
                bm = frozenset(roads & tree.plan.maintained)
                bd = frozenset(roads & tree.plan.deadhead)
                rest_m = tree.plan.maintained - bm
                rest_d = tree.working_deadhead - bd
                if rest_m or rest_d:
                    if not _connected(net, tree.root, set(rest_m) | set(rest_d)):
                        continue
                    rl = walk_levels(net, tree.root, rest_m, rest_d)
                    if not _satisfied(net, rest_m, rl):
                        continue
                entry = lev[direction].get(u)
                if entry is None or not _entry_ok(net, bm, bd, u, entry):
                    continue
                load_delta = sum(
                    effective_length_m(net.road(rid)) for rid in bm
                ) + sum(net.road(rid).length_m for rid in bd)
                added_dh = sum(
                    net.road(rid).length_m
                    for rid in bd
                    if rid not in recv_roads[direction]
                )
                out.append(
                    ExchangeCandidate(
                        cid=len(out),
                        pivot=u,
                        direction=direction,
                        maintained=bm,
                        deadhead=bd,
                        load_delta=load_delta,
                        ratio=load_delta / (1.0 + added_dh),
                    )
                )
    return out


def branch_exchange(
    net: RoadNetwork,
    p1: MaintenancePlan,
    p2: MaintenancePlan,
    limit_m: int,
    combo_cap=1000,
):
    """Bin-packing move between two same-method plans: enumerate subsets
    of compatible branch moves (both directions, all pivots jointly) and
    apply the feasible one that minimizes p2's resulting load; ties go to
    lower combined deadhead, then candidate id order. Subsets evaluated
    are capped at combo_cap (None = exhaustive), visiting high moved-load
    per added-deadhead candidates first. Returns (p1', p2') or None when
    nothing strictly undercuts p2's current load.
    """
    if p1.method != p2.method or p1.car == p2.car:
        return None
    t1 = build_plan_tree(net, p1)
    t2 = build_plan_tree(net, p2)
    cands = enumerate_exchanges(net, t1, t2)
    if not cands:
        return None
    w1m, w1d = p1.maintained, t1.working_deadhead
    w2m, w2d = p2.maintained, t2.working_deadhead
    base = plan_load_m(net, p2)
    ranked = sorted(cands, key=lambda c: (-c.ratio, c.cid))
    n = len(ranked)
    state = {"budget": -1 if combo_cap is None else combo_cap, "best": None}

    def consider(chosen):
        m1, d1 = set(w1m), set(w1d)
        m2, d2 = set(w2m), set(w2d)
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
        d1 -= m1  # a moved road the receiver maintains stops being deadhead
        d2 -= m2
        ok1, _, dh1 = _verify_sets(net, p1.depot, m1, d1, limit_m)
        if not ok1:
            return
        ok2, l2, dh2 = _verify_sets(net, p2.depot, m2, d2, limit_m)
        if not ok2:
            return
        key = (l2, dh1 + dh2, tuple(c.cid for c in chosen))
        if state["best"] is None or key < state["best"][0]:
            state["best"] = (key, (m1, d1, m2, d2))

    def rec(i, chosen, used):
        if state["budget"] == 0:
            return
        if i == n:
            if chosen:
                if state["budget"] > 0:
                    state["budget"] -= 1
                consider(chosen)
            return
        c = ranked[i]
        if not (c.roads & used):
            rec(i + 1, chosen + (c,), used | c.roads)
        rec(i + 1, chosen, used)

    rec(0, (), frozenset())
    if state["best"] is None:
        return None
    (l2, _, _), (m1, d1, m2, d2) = state["best"]
    if l2 >= base:
        return None
    return (
        replace(p1, maintained=frozenset(m1), deadhead=frozenset(d1)),
        replace(p2, maintained=frozenset(m2), deadhead=frozenset(d2)),
    )
