"""Maintenance plans, feasibility rules, and the solution objective.

A plan is one car's workload: the roads it maintains plus the roads it
only drives over (deadheads) to get around. Feasibility is set-based;
the closed driving tour is derived on demand and never affects cost.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import NamedTuple, Optional

from gritter.kernels import INF
from gritter.model import (
    CAR_METHODS,
    GritterError,
    Method,
    RoadNetwork,
    effective_length_m,
    maintainable_by,
)


class DisconnectedPlanError(GritterError):
    pass


@dataclass(frozen=True)
class MaintenancePlan:
    car: str
    method: Method
    depot: str  # crossroad id; must store material for method
    maintained: frozenset  # road ids, each counted at effective length
    deadhead: frozenset  # road ids driven without maintaining, raw length

    def roads(self) -> frozenset:
        return self.maintained | self.deadhead


@dataclass(frozen=True)
class Solution:
    plans: tuple  # MaintenancePlan, unique car ids


def plan_load_m(net: RoadNetwork, plan: MaintenancePlan) -> int:
    load = 0
    for rid in plan.maintained:
        load += effective_length_m(net.road(rid))
    for rid in plan.deadhead:
        load += net.road(rid).length_m
    return load


def plan_deadhead_m(net: RoadNetwork, plan: MaintenancePlan) -> int:
    return sum(net.road(rid).length_m for rid in plan.deadhead)


def solution_objective(net: RoadNetwork, sol: Solution):
    """(car count, total deadhead meters); deadheads count once per plan
    that lists them, so a road shared by two plans is paid twice."""
    return len(sol.plans), sum(plan_deadhead_m(net, p) for p in sol.plans)


def compare_solutions(net: RoadNetwork, a: Solution, b: Solution) -> int:
    """Lexicographic: fewer cars wins, then less total deadhead.

    Returns -1 if a is better, 1 if b is better, 0 on a tie.
    """
    oa, ob = solution_objective(net, a), solution_objective(net, b)
    if oa < ob:
        return -1
    if oa > ob:
        return 1
    return 0


def walk_levels(net: RoadNetwork, depot: str, maintained, deadhead, seed=None) -> dict:
    """Least spreading level at which each vertex can be reached.

    Walking out from the depot, a car may always drive deadhead roads,
    but once it has maintained a road of priority p it may only maintain
    priorities >= p afterwards. The level of a vertex is the smallest
    last-maintained priority over all such walks (0 at the depot).
    Vertices not touched by the given road sets are absent.

    seed overrides the start labels: a {vertex id: entry level} mapping
    (depot is ignored then), for walks that begin mid-network.
    """
    adj = {}
    for rid in maintained:
        r = net.road(rid)
        u, v = r.endpoints
        adj.setdefault(u, []).append((r.priority, v))
        if v != u:
            adj.setdefault(v, []).append((r.priority, u))
    for rid in deadhead:
        u, v = net.road(rid).endpoints
        adj.setdefault(u, []).append((0, v))
        if v != u:
            adj.setdefault(v, []).append((0, u))
    if seed is None:
        seed = {depot: 0}
    levels = dict(seed)
    heap = [(lvl, u) for u, lvl in levels.items()]
    heapq.heapify(heap)
    while heap:
        lvl, u = heapq.heappop(heap)
        if lvl > levels.get(u, INF):
            continue
        for pri, w in adj.get(u, ()):
            if pri == 0:  # deadhead, keeps the level
                cand = lvl
            elif pri >= lvl:
                cand = pri
            else:
                continue
            if cand < levels.get(w, INF):
                levels[w] = cand
                heapq.heappush(heap, (cand, w))
    return levels


def monotone_levels(net: RoadNetwork, plan: MaintenancePlan) -> dict:
    return walk_levels(net, plan.depot, plan.maintained, plan.deadhead)


def check_monotonic(net: RoadNetwork, plan: MaintenancePlan):
    """Verify every maintained road is reachable by a priority-respecting
    walk from the depot. Returns (ok, witness) where the witness is the
    most important road (lowest priority value, then id) left unreachable.
    """
    levels = monotone_levels(net, plan)
    witness = None
    witness_key = None
    for rid in plan.maintained:
        r = net.road(rid)
        u, v = r.endpoints
        best = min(levels.get(u, INF), levels.get(v, INF))
        if best > r.priority:
            key = (r.priority, rid)
            if witness_key is None or key < witness_key:
                witness_key = key
                witness = rid
    return witness is None, witness


def _plan_connected(net: RoadNetwork, plan: MaintenancePlan) -> bool:
    roads = plan.roads()
    if not roads:
        return True
    adj = {}
    for rid in roads:
        u, v = net.road(rid).endpoints
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if plan.depot not in adj:
        return False
    seen = {plan.depot}
    stack = [plan.depot]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return all(u in seen for u in adj)


def check_plan(net: RoadNetwork, plan: MaintenancePlan, limit_m: int) -> list:
    """All feasibility violations of one plan, as human-readable strings."""
    violations = []
    if plan.method not in CAR_METHODS:
        violations.append(f"car {plan.car}: invalid method {plan.method}")
        return violations
    try:
        depot = net.crossroad(plan.depot)
    except GritterError:
        violations.append(f"car {plan.car}: unknown depot {plan.depot}")
        return violations
    if plan.method not in depot.storage:
        violations.append(
            f"car {plan.car}: depot {plan.depot} has no {plan.method.value} storage"
        )
    for rid in sorted(plan.roads()):
        if not net.has_road(rid):
            violations.append(f"car {plan.car}: unknown road {rid}")
            return violations
    overlap = plan.maintained & plan.deadhead
    if overlap:
        violations.append(
            f"car {plan.car}: roads both maintained and deadheaded: "
            + ", ".join(sorted(overlap))
        )
    for rid in sorted(plan.maintained):
        r = net.road(rid)
        if not maintainable_by(r.method, plan.method):
            violations.append(
                f"car {plan.car}: {r.method.value} road {rid} needs a different car"
            )
    if not _plan_connected(net, plan):
        violations.append(f"car {plan.car}: plan is disconnected from its depot")
    else:
        ok, witness = check_monotonic(net, plan)
        if not ok:
            violations.append(
                f"car {plan.car}: road {witness} breaks priority order "
                "(no importance-respecting route from the depot)"
            )
    load = plan_load_m(net, plan)
    if load > limit_m:
        violations.append(
            f"car {plan.car}: load {load} m exceeds limit {limit_m} m"
        )
    return violations


def plan_ok(net: RoadNetwork, plan: MaintenancePlan, limit_m: int) -> bool:
    """Fast feasibility check used in search loops; assumes known road ids
    and a method-compatible maintained set."""
    if plan_load_m(net, plan) > limit_m:
        return False
    if not _plan_connected(net, plan):
        return False
    ok, _ = check_monotonic(net, plan)
    return ok


def check_feasible(net: RoadNetwork, sol: Solution, limit_m: int) -> list:
    """Whole-solution check: per-plan feasibility, unique cars, and full
    coverage with each road maintained by exactly one car."""
    violations = []
    seen_cars = set()
    for p in sol.plans:
        if p.car in seen_cars:
            violations.append(f"duplicate car id {p.car}")
        seen_cars.add(p.car)
        violations.extend(check_plan(net, p, limit_m))
    owner = {}
    for p in sol.plans:
        for rid in p.maintained:
            if rid in owner:
                violations.append(
                    f"road {rid} maintained by both {owner[rid]} and {p.car}"
                )
            else:
                owner[rid] = p.car
    for r in net.roads:
        if r.id not in owner:
            violations.append(f"road {r.id} is not maintained by any car")
    return violations


class TourStep(NamedTuple):
    road: str
    frm: str
    to: str
    action: str  # "maintain" or "deadhead"


def plan_to_tour(net: RoadNetwork, plan: MaintenancePlan) -> list:
    """Closed driving tour for one car: starts and ends at the depot and
    drives every plan road once in each direction, which always closes up
    on a connected plan. Road choice at each crossroad prefers important
    work first (priority, then id); the first pass over a maintained road
    is the spreading pass.
    """
    roads = sorted(
        plan.roads(), key=lambda rid: (net.road(rid).priority, rid)
    )
    if not roads:
        return []
    arcs = []  # (frm, to, road id)
    out = {}
    for rid in roads:
        u, v = net.road(rid).endpoints
        for frm, to in ((u, v), (v, u)):
            out.setdefault(frm, []).append(len(arcs))
            arcs.append((frm, to, rid))
    if plan.depot not in out:
        raise DisconnectedPlanError(
            f"car {plan.car}: depot {plan.depot} touches no plan road"
        )
    used = bytearray(len(arcs))
    ptr = dict.fromkeys(out, 0)
    stack_v = [plan.depot]
    stack_a = [-1]
    order = []
    while stack_v:
        v = stack_v[-1]
        lst = out.get(v, ())
        i = ptr.get(v, 0)
        while i < len(lst) and used[lst[i]]:
            i += 1
        ptr[v] = i
        if i < len(lst):
            a = lst[i]
            used[a] = 1
            stack_v.append(arcs[a][1])
            stack_a.append(a)
        else:
            stack_v.pop()
            a = stack_a.pop()
            if a >= 0:
                order.append(a)
    if len(order) != len(arcs):
        raise DisconnectedPlanError(
            f"car {plan.car}: plan roads are not all reachable from the depot"
        )
    order.reverse()
    steps = []
    sprayed = set()
    for a in order:
        frm, to, rid = arcs[a]
        if rid in plan.maintained and rid not in sprayed:
            sprayed.add(rid)
            action = "maintain"
        else:
            action = "deadhead"
        steps.append(TourStep(rid, frm, to, action))
    return steps
