"""Certified lower bounds on fleet size and deadhead length.

The deadhead bounds select a minimum-length set of opposite-method
roads whose addition makes every target road depot-reachable. They are
solved as covering models over connectivity cuts, separated lazily and
minimized exactly by a small branch-and-bound, after shrinking the
problem to an edge-Steiner instance and simplifying it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from heapq import heappop, heappush

from gritter.model import (
    GritterError,
    Method,
    RoadNetwork,
    effective_length_m,
    maintainable_by,
)


class UnreachableTargetError(GritterError):
    pass


def trivial_car_bound(net: RoadNetwork, limit_m: int, extra_deadhead_m: int = 0) -> int:
    """Fleet can't be smaller than total work over per-car capacity.
    Any known unavoidable deadhead stacks on top of the maintained load."""
    total = sum(effective_length_m(r) for r in net.roads) + extra_deadhead_m
    return -(-total // limit_m)


# ---------------------------------------------------------------- cut models


@dataclass
class CutModel:
    """Binary minimization: choose variables (roads) at cost, subject to
    cover clauses. A clause is a tuple of (variable, polarity) literals
    and is satisfied when some positive literal is set or some negative
    literal is clear."""

    costs: list
    names: list
    clauses: list = field(default_factory=list)
    _seen: set = field(default_factory=set)

    def add_clause(self, lits) -> bool:
        key = frozenset(lits)
        if not key or key in self._seen:
            return False
        self._seen.add(key)
        self.clauses.append(tuple(lits))
        return True


def _clause_sat(cl, asgn) -> bool:
    """Satisfied under the assignment completed with zeros."""
    for v, pol in cl:
        if pol:
            if asgn.get(v) == 1:
                return True
        elif asgn.get(v) != 1:
            return True
    return False


def _greedy_cover(costs, clauses):
    """Feasible assignment by ratio-greedy covering; the starting
    incumbent for branch-and-bound. Setting a variable can break a clause
    that leaned on its negative literal, so keep covering until every
    clause checks out; give up (no incumbent) if that never settles."""
    asgn = {}
    for _ in range(len(costs) + 1):
        todo = [cl for cl in clauses if not _clause_sat(cl, asgn)]
        if not todo:
            value = sum(costs[v] for v, b in asgn.items() if b == 1)
            return value, asgn
        freq = {}
        for cl in todo:
            for v, pol in cl:
                if pol:
                    freq[v] = freq.get(v, 0) + 1
        if not freq:
            return None, None
        v = min(freq, key=lambda u: (costs[u] / freq[u], u))
        asgn[v] = 1
    return None, None


def _bnb(costs, clauses, node_cap):
    """Exact minimum of a CutModel instance by depth-first branch and
    bound with unit forcing and a disjoint-clause packing bound. Returns
    (assignment, value, status); on a blown node budget the value is the
    best proven lower bound, still safe to report."""
    if not clauses:
        return {}, 0, "optimal"
    best_val, best_asgn = _greedy_cover(costs, clauses)
    stack = [(0, {}, 0)]  # (lower bound, partial assignment, cost)
    nodes = 0
    while stack:
        lb, val, cost = stack.pop()
        if best_val is not None and lb >= best_val:
            continue
        nodes += 1
        if nodes > node_cap:
            open_lb = [lb] + [s[0] for s in stack]
            if best_val is not None:
                open_lb.append(best_val)
            return best_asgn, min(open_lb), "cap_reached"
        val = dict(val)
        conflict = False
        while True:
            forced = None
            must_pay = []
            for cl in clauses:
                sat = False
                un_pos = []
                un_neg = False
                for v, pol in cl:
                    a = val.get(v)
                    if a is None:
                        if pol:
                            un_pos.append(v)
                        else:
                            un_neg = True
                    elif (a == 1) == pol:
                        sat = True
                        break
                if sat or un_neg:
                    continue
                if not un_pos:
                    conflict = True
                    break
                if len(un_pos) == 1:
                    forced = un_pos[0]
                    break
                must_pay.append(un_pos)
            if conflict:
                break
            if forced is not None:
                val[forced] = 1
                cost += costs[forced]
                continue
            break
        if conflict:
            continue
        if not must_pay:
            if best_val is None or cost < best_val:
                best_val, best_asgn = cost, val
            continue
        lb2 = cost
        used = set()
        for un_pos in must_pay:
            if all(v not in used for v in un_pos):
                lb2 += min(costs[v] for v in un_pos)
                used.update(un_pos)
        if best_val is not None and lb2 >= best_val:
            continue
        freq = {}
        for un_pos in must_pay:
            for v in un_pos:
                freq[v] = freq.get(v, 0) + 1
        bv = min(freq, key=lambda v: (-freq[v], v))
        v0 = dict(val)
        v0[bv] = 0
        v1 = dict(val)
        v1[bv] = 1
        stack.append((lb2, v0, cost))
        stack.append((lb2, v1, cost + costs[bv]))  # popped first
    if best_val is None:
        raise GritterError("cut model is unsatisfiable")
    return best_asgn, best_val, "optimal"


def solve_binary_min(model: CutModel, separation=None, node_cap=500000, clause_cap=2000):
    """Lazy loop: minimize over the current clause pool exactly, ask the
    separation callback for cuts the incumbent violates, repeat until it
    returns none. Caps turn the result into status "cap_reached"; the
    value stays a valid lower bound."""
    while True:
        asgn, value, status = _bnb(model.costs, model.clauses, node_cap)
        if status == "cap_reached":
            return asgn, value, status
        if separation is None:
            return asgn, value, "optimal"
        added = 0
        for lits in separation(asgn):
            if model.add_clause(lits):
                added += 1
        if not added:
            return asgn, value, "optimal"
        if len(model.clauses) > clause_cap:
            return asgn, value, "cap_reached"


# ------------------------------------------------------- component separation


def separate_components(net: RoadNetwork, selected, target, snow_roads=None):
    """Vertex sets proving a reachability gap: components of the subgraph
    usable by target-method cars (their own roads, snowplow roads, plus
    the selected opposite-method roads) that contain a target road but no
    target depot. Empty list = every target road is depot-reachable.

    snow_roads narrows which snowplow roads count as usable (the joint
    model assigns each to one method); default is all of them.
    """
    target = Method(target)
    selected = set(selected)
    roads = []
    for r in net.roads:
        if r.method is target or r.id in selected:
            roads.append(r)
        elif r.method is Method.SNOWPLOW and (
            snow_roads is None or r.id in snow_roads
        ):
            roads.append(r)
    adj = {}
    for r in roads:
        u, v = r.endpoints
        adj.setdefault(u, []).append((r, v))
        if v != u:
            adj.setdefault(v, []).append((r, u))
    depot_ids = {net.crossroads[i].id for i in net.depots(target)}
    violated = []
    seen = set()
    for start in sorted(adj):
        if start in seen:
            continue
        verts = {start}
        seen.add(start)
        stack = [start]
        has_target = False
        has_depot = start in depot_ids
        while stack:
            x = stack.pop()
            for r, w in adj[x]:
                if r.method is target:
                    has_target = True
                if w not in seen:
                    seen.add(w)
                    verts.add(w)
                    if w in depot_ids:
                        has_depot = True
                    stack.append(w)
        if has_target and not has_depot:
            violated.append(frozenset(verts))
    violated.sort(key=lambda s: sorted(s))
    return violated


# --------------------------------------------------------- Steiner reduction


@dataclass
class SteinerGraph:
    """Edge-weighted reduction target: connect all terminals at minimum
    edge cost. Each edge remembers the original road ids it stands for."""

    vertices: set  # int labels
    edges: dict  # edge id -> (u, v, weight_m, frozenset of road ids)
    terminals: frozenset
    fixed_m: int = 0


def reduce_to_steiner(net: RoadNetwork, target):
    """Contract everything target cars traverse for free (target-method
    and snowplow roads), merge the target depots into one terminal, drop
    loops, keep the shortest of parallel edges. The remaining edges are
    exactly the opposite-method roads a bound may buy."""
    target = Method(target)
    opposite = Method.INERT if target is Method.CHEMICAL else Method.CHEMICAL
    n = len(net.crossroads)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for r in net.roads:
        if r.method is target or r.method is Method.SNOWPLOW:
            u, v = net.endpoints_idx(r.id)
            union(u, v)
    depots = net.depots(target)
    for d in depots[1:]:
        union(depots[0], d)
    # dense labels ordered by smallest member vertex
    roots = sorted({find(i) for i in range(n)})
    label = {root: k for k, root in enumerate(roots)}
    terminals = set()
    for r in net.roads:
        if r.method is target:
            u, v = net.endpoints_idx(r.id)
            terminals.add(label[find(u)])
            terminals.add(label[find(v)])
    if depots:
        terminals.add(label[find(depots[0])])
    best = {}
    for r in net.roads:
        if r.method is not opposite:
            continue
        u, v = net.endpoints_idx(r.id)
        lu, lv = label[find(u)], label[find(v)]
        if lu == lv:
            continue
        key = (min(lu, lv), max(lu, lv))
        if key not in best or (r.length_m, r.id) < (
            best[key].length_m,
            best[key].id,
        ):
            best[key] = r
    edges = {}
    for k, key in enumerate(sorted(best)):
        r = best[key]
        edges[k] = (key[0], key[1], r.length_m, frozenset({r.id}))
    g = SteinerGraph(
        vertices=set(range(len(roots))),
        edges=edges,
        terminals=frozenset(terminals),
        fixed_m=0,
    )
    return g, g.terminals, 0


def _adjacency(g: SteinerGraph):
    adj = {v: [] for v in g.vertices}
    for eid, (u, v, w, _) in g.edges.items():
        adj[u].append((eid, v, w))
        adj[v].append((eid, u, w))
    return adj


def _alt_path_shorter(g, adj, eid):
    """Is there a strictly shorter path between the edge's endpoints that
    avoids the edge itself? Classic long-edge elimination test."""
    u, v, w, _ = g.edges[eid]
    dist = {u: 0}
    heap = [(0, u)]
    while heap:
        d, x = heappop(heap)
        if d != dist.get(x):
            continue
        if x == v:
            return True  # push guard admits strictly shorter paths only
        for fid, y, fw in adj[x]:
            if fid == eid:
                continue
            nd = d + fw
            if nd < w and nd < dist.get(y, nd + 1):
                dist[y] = nd
                heappush(heap, (nd, y))
    return False


def simplify_steiner(g: SteinerGraph, terminals):
    """Shrink a Steiner instance without moving its optimum: strip dead
    ends (forced pendant edges feed the fixed cost), splice through
    degree-2 non-terminals, and drop any edge with a strictly shorter
    bypass. Runs to fixpoint. Returns (graph, terminals, fixed cost)."""
    verts = set(g.vertices)
    edges = dict(g.edges)
    terms = set(terminals)
    fixed = g.fixed_m
    next_eid = max(edges, default=-1) + 1
    changed = True
    while changed:
        changed = False
        deg = {v: 0 for v in verts}
        inc = {v: [] for v in verts}
        for eid, (u, v, w, rids) in edges.items():
            deg[u] += 1
            deg[v] += 1
            inc[u].append(eid)
            inc[v].append(eid)
        # rule 1: degree-1 vertices; a pendant terminal forces its edge,
        # unless it is the only terminal left and needs no connection
        for v in sorted(verts):
            if deg.get(v) != 1:
                continue
            if v in terms and len(terms) < 2:
                continue
            eid = inc[v][0]
            u1, u2, w, rids = edges[eid]
            other = u2 if v == u1 else u1
            if v in terms:
                fixed += w
                terms.discard(v)
                terms.add(other)
            del edges[eid]
            verts.discard(v)
            changed = True
            break
        if changed:
            continue
        # rule 2: splice degree-2 non-terminals
        for v in sorted(verts):
            if deg.get(v) != 2 or v in terms:
                continue
            e1, e2 = inc[v]
            a1, b1, w1, r1 = edges[e1]
            a2, b2, w2, r2 = edges[e2]
            x = b1 if v == a1 else a1
            y = b2 if v == a2 else a2
            del edges[e1]
            del edges[e2]
            verts.discard(v)
            if x != y:  # a cycle through v collapses to nothing useful
                edges[next_eid] = (min(x, y), max(x, y), w1 + w2, r1 | r2)
                next_eid += 1
            changed = True
            break
        if changed:
            continue
        # drop the longer of any parallel pair
        by_pair = {}
        for eid in sorted(edges):
            u, v, w, _ = edges[eid]
            key = (min(u, v), max(u, v))
            if key in by_pair:
                keep = by_pair[key]
                ku, kv, kw, _ = edges[keep]
                if (w, eid) < (kw, keep):
                    del edges[keep]
                    by_pair[key] = eid
                else:
                    del edges[eid]
                changed = True
            else:
                by_pair[key] = eid
        if changed:
            continue
        # rule 3: strictly longer cycle edges
        adj = {v: [] for v in verts}
        for eid, (u, v, w, _) in edges.items():
            adj[u].append((eid, v, w))
            adj[v].append((eid, u, w))
        gsnap = SteinerGraph(verts, edges, frozenset(terms), fixed)
        for eid in sorted(edges):
            if _alt_path_shorter(gsnap, adj, eid):
                del edges[eid]
                changed = True
                break
    # prune isolated non-terminals
    touched = set()
    for u, v, _, _ in edges.values():
        touched.add(u)
        touched.add(v)
    verts = {v for v in verts if v in touched or v in terms}
    out = SteinerGraph(verts, edges, frozenset(terms), fixed)
    return out, out.terminals, fixed


# ----------------------------------------------------------------- reports


@dataclass
class BoundReport:
    kind: str  # trivial | separate | joint | multicar
    bound_m: int
    status: str  # optimal | cap_reached | infeasible
    cuts: list = field(default_factory=list)
    seconds: float = 0.0
    target: str = ""
    detail: dict = field(default_factory=dict)

    @property
    def bound_km(self) -> float:
        return self.bound_m / 1000.0


def _steiner_components(g: SteinerGraph, selected_eids):
    adj = {}
    for eid in selected_eids:
        u, v, _, _ = g.edges[eid]
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    comps = []
    seen = set()
    for start in sorted(g.vertices):
        if start in seen:
            continue
        seen.add(start)
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def connectivity_cut_bound(net: RoadNetwork, target) -> BoundReport:
    """Least total length of opposite-method roads that target cars must
    drive so every target road reaches a depot. Proven exactly via lazy
    connectivity cuts on the reduced Steiner instance."""
    t0 = time.perf_counter()
    target = Method(target)
    g0, _, _ = reduce_to_steiner(net, target)
    stats = {
        "reduced_vertices": len(g0.vertices),
        "reduced_edges": len(g0.edges),
    }
    if not any(r.method is target for r in net.roads):
        return BoundReport(
            kind="separate",
            bound_m=0,
            status="optimal",
            seconds=time.perf_counter() - t0,
            target=target.value,
            detail=stats,
        )
    if not net.depots(target):
        raise UnreachableTargetError(
            f"unreachable target road: no {target.value} depot exists"
        )
    if len(g0.terminals) <= 1:
        return BoundReport(
            kind="separate",
            bound_m=0,
            status="optimal",
            seconds=time.perf_counter() - t0,
            target=target.value,
            detail=stats,
        )
    g, terms, fixed = simplify_steiner(g0, g0.terminals)
    stats["simplified_vertices"] = len(g.vertices)
    stats["simplified_edges"] = len(g.edges)
    stats["fixed_m"] = fixed
    if len(terms) <= 1:
        return BoundReport(
            kind="separate",
            bound_m=fixed,
            status="optimal",
            seconds=time.perf_counter() - t0,
            target=target.value,
            detail=stats,
        )
    # feasibility: all terminals must lie in one component using all edges
    comps = _steiner_components(g, list(g.edges))
    for comp in comps:
        hit = terms & comp
        if hit and terms - comp:
            raise UnreachableTargetError(
                f"unreachable target road: {target.value} roads cut off from "
                "every depot"
            )
    eids = sorted(g.edges)
    model = CutModel(
        costs=[g.edges[e][2] for e in eids],
        names=[",".join(sorted(g.edges[e][3])) for e in eids],
    )

    def separation(asgn):
        chosen = [eids[i] for i in range(len(eids)) if asgn.get(i) == 1]
        clauses = []
        for comp in _steiner_components(g, chosen):
            hit = terms & comp
            if hit and terms - comp:
                cut = [
                    i
                    for i, e in enumerate(eids)
                    if (g.edges[e][0] in comp) != (g.edges[e][1] in comp)
                ]
                clauses.append(tuple((i, True) for i in sorted(cut)))
        return clauses

    asgn, value, status = solve_binary_min(model, separation)
    cuts = [
        {"roads": sorted(set().union(*(g.edges[eids[i]][3] for i, _ in cl)))}
        for cl in model.clauses
    ]
    return BoundReport(
        kind="separate",
        bound_m=fixed + value,
        status=status,
        cuts=cuts,
        seconds=time.perf_counter() - t0,
        target=target.value,
        detail=stats,
    )


def joint_cut_bound(net: RoadNetwork) -> BoundReport:
    """Both fleets bounded at once. Every road gets a deadhead variable
    at its length; every snowplow road additionally gets a zero-cost
    method choice, so it serves as free passage for one car type only.
    The other type must then pay a deadhead somewhere, which is exactly
    what the two separate bounds cannot see. Never below their sum."""
    t0 = time.perf_counter()
    for target in (Method.CHEMICAL, Method.INERT):
        if any(r.method is target for r in net.roads):
            if not net.depots(target):
                raise UnreachableTargetError(
                    f"unreachable target road: no {target.value} depot exists"
                )
            bad = separate_components(
                net,
                [r.id for r in net.roads],
                target,
            )
            if bad:
                raise UnreachableTargetError(
                    f"unreachable target road: {target.value} roads cut off "
                    "from every depot"
                )
    names = []
    costs = []
    var = {}
    for r in net.roads:
        var[r.id] = len(names)
        names.append(r.id)
        costs.append(r.length_m)
    snow_var = {}
    for r in net.roads:
        if r.method is Method.SNOWPLOW:
            snow_var[r.id] = len(names)
            names.append(r.id + "#m")
            costs.append(0)
    model = CutModel(costs=costs, names=names)
    snow_ids = sorted(snow_var)

    def crossing(verts, rid):
        u, v = net.road(rid).endpoints
        return (u in verts) != (v in verts)

    def separation(asgn):
        # a road carrying any deadhead is passable by both car types
        selected = {r.id for r in net.roads if asgn.get(var[r.id]) == 1}
        clauses = []
        for target in (Method.CHEMICAL, Method.INERT):
            if target is Method.CHEMICAL:
                snow = {rid for rid in snow_ids if asgn.get(snow_var[rid]) == 1}
            else:
                snow = {rid for rid in snow_ids if asgn.get(snow_var[rid]) != 1}
            for verts in separate_components(net, selected, target, snow):
                lits = []
                for r in net.roads:
                    if not crossing(verts, r.id):
                        continue
                    lits.append((var[r.id], True))
                    if r.method is Method.SNOWPLOW:
                        lits.append((snow_var[r.id], target is Method.CHEMICAL))
                clauses.append(tuple(sorted(lits)))
        return clauses

    asgn, value, status = solve_binary_min(model, separation)
    cuts = []
    for cl in model.clauses:
        roads = []
        snow_chem = []
        snow_inert = []
        for vi, pol in cl:
            name = names[vi]
            if name.endswith("#m"):
                (snow_chem if pol else snow_inert).append(name[:-2])
            else:
                roads.append(name)
        cuts.append(
            {
                "roads": sorted(roads),
                "snow_chemical": sorted(snow_chem),
                "snow_inert": sorted(snow_inert),
            }
        )
    return BoundReport(
        kind="joint",
        bound_m=value,
        status=status,
        cuts=cuts,
        seconds=time.perf_counter() - t0,
        detail={"variables": len(names)},
    )


def multi_car_bound(
    net: RoadNetwork,
    n_chem: int,
    n_inert: int,
    limit_m: int,
    var_cap: int = 5000,
    node_cap: int = 2000000,
):
    """Exact fleet-wide traversal minimum for a fixed tiny fleet; the gap
    over the mandatory maintained length is a certified deadhead bound.
    Only viable at toy scale; returns None above the variable cap."""
    t0 = time.perf_counter()
    methods = [Method.CHEMICAL] * n_chem + [Method.INERT] * n_inert
    n_cars = len(methods)
    roads = list(net.roads)
    if n_cars * len(roads) > var_cap:
        return None
    raw_total = sum(r.length_m for r in roads)

    def report(status, traversal=None):
        bound = 0 if traversal is None else traversal - raw_total
        return BoundReport(
            kind="multicar",
            bound_m=bound,
            status=status,
            seconds=time.perf_counter() - t0,
            detail={
                "traversal_m": traversal if traversal is not None else 0,
                "fleet": {"chemical": n_chem, "inert": n_inert},
            },
        )

    if not roads or n_cars == 0:
        if roads:
            return report("infeasible")
        return report("optimal", 0)
    compat_mask = []
    for r in roads:
        mask = 0
        for c, m in enumerate(methods):
            if maintainable_by(r.method, m):
                mask |= 1 << c
        if mask == 0:
            return report("infeasible")
        compat_mask.append(mask)
    depot_vs = {
        m: {net.crossroads[i].id for i in net.depots(m)}
        for m in (Method.CHEMICAL, Method.INERT)
    }
    for m in methods:
        if not depot_vs[m]:
            return report("infeasible")
    lengths = [r.length_m for r in roads]
    suffix = [0] * (len(roads) + 1)
    for j in range(len(roads) - 1, -1, -1):
        suffix[j] = suffix[j + 1] + lengths[j]
    # symmetry rows: car i of a method uses one of the first i same-method
    # roads, or road i of that method is used by one of the first i cars
    sym_rows = []
    for m in (Method.CHEMICAL, Method.INERT):
        cars_m = [c for c, cm in enumerate(methods) if cm is m]
        roads_m = [j for j, r in enumerate(roads) if r.method is m]
        for i in range(min(len(cars_m), len(roads_m))):
            row = [(cars_m[i], roads_m[k]) for k in range(i + 1)]
            row += [(cars_m[k], roads_m[i]) for k in range(i + 1)]
            sym_rows.append(frozenset(row))
    all_masks = {}

    def masks_for(j):
        if j not in all_masks:
            ms = [
                m
                for m in range(1, 1 << n_cars)
                if m & compat_mask[j]
            ]
            ms.sort(key=lambda m: (bin(m).count("1"), m))
            all_masks[j] = ms
        return all_masks[j]

    best = None  # (traversal, chosen tuple)
    stack = [(suffix[0], 0, (), tuple([0] * n_cars))]
    nodes = 0
    status = "optimal"
    while stack:
        lb, cost, chosen, loads = stack.pop()
        if best is not None and lb >= best[0]:
            continue
        nodes += 1
        if nodes > node_cap:
            lbs = [s[0] for s in stack] + [lb]
            if best is not None:
                lbs.append(best[0])
            return report("cap_reached", min(lbs))
        j = len(chosen)
        if j == len(roads):
            ok = True
            for row in sym_rows:
                if not any(chosen[rj] >> c & 1 for c, rj in row):
                    ok = False
                    break
            if ok:
                for c in range(n_cars):
                    mine = [roads[k] for k in range(len(roads)) if chosen[k] >> c & 1]
                    if not _car_connected(net, mine, depot_vs[methods[c]]):
                        ok = False
                        break
            if ok and (best is None or cost < best[0]):
                best = (cost, chosen)
            continue
        children = []
        for m in masks_for(j):
            nl = list(loads)
            over = False
            for c in range(n_cars):
                if m >> c & 1:
                    nl[c] += lengths[j]
                    if nl[c] > limit_m:
                        over = True
                        break
            if over:
                continue
            ncost = cost + lengths[j] * bin(m).count("1")
            nlb = ncost + suffix[j + 1]
            if best is not None and nlb >= best[0]:
                continue
            children.append((nlb, ncost, chosen + (m,), tuple(nl)))
        for child in reversed(children):  # cheapest mask explored first
            stack.append(child)
    if best is None:
        return report("infeasible")
    return report("optimal", best[0])


def _car_connected(net, mine, depot_ids) -> bool:
    """Every component of a car's traversed roads must touch a depot the
    car can load at (the relaxed reachability the bound enforces)."""
    if not mine:
        return True
    adj = {}
    for r in mine:
        u, v = r.endpoints
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    seen = set()
    for start in sorted(adj):
        if start in seen:
            continue
        comp = {start}
        seen.add(start)
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        if not (comp & depot_ids):
            return False
    return True
