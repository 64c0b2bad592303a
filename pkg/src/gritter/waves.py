"""Wave scheduler: the full solve pipeline.

A wave sweeps the plans in a spatial order (directional or circular)
and lets each front plan absorb work from the plans behind it, first by
merging whole cars away, then by branch exchanges that drain the rear
plan. Waves repeat until the objective stops improving.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from gritter.construct import depot_field, initial_solution, repack_pair
from gritter.localsearch import branch_exchange, steiner_reduce_deadhead, try_merge
from gritter.model import RoadNetwork
from gritter.plans import (
    Solution,
    plan_deadhead_m,
    plan_load_m,
    solution_objective,
)

DIRECTIONS = {
    "N": (0.0, 1.0),
    "S": (0.0, -1.0),
    "E": (1.0, 0.0),
    "W": (-1.0, 0.0),
}

AUTO_SCHEDULE = ("N", "S", "E", "W", "circular")


@dataclass(frozen=True)
class WaveSpec:
    kind: str  # "directional" or "circular"
    direction: tuple = None  # unit vector, directional only
    center: str = None  # car id of the center plan, circular only


@dataclass
class SolverConfig:
    limit_m: int
    combo_cap: int = 1000  # None lifts the cap (exhaustive exchanges)
    schedule: object = "auto"  # "auto", or a list of WaveSpec / direction names
    stall_limit: int = 4
    seed: int = 0  # accepted for interface stability; the solver is deterministic


@dataclass
class SolveStats:
    waves: int = 0
    moves: int = 0
    objective: tuple = (0, 0)
    history: list = field(default_factory=list)
    wall_time: float = 0.0


def plan_centroid(net: RoadNetwork, plan):
    """Length-weighted mean of road midpoints; depot location for a plan
    with no roads."""
    sx = sy = w = 0.0
    for rid in plan.roads():
        r = net.road(rid)
        a = net.crossroad(r.endpoints[0])
        b = net.crossroad(r.endpoints[1])
        sx += (a.x + b.x) / 2 * r.length_m
        sy += (a.y + b.y) / 2 * r.length_m
        w += r.length_m
    if w == 0:
        d = net.crossroad(plan.depot)
        return d.x, d.y
    return sx / w, sy / w


class _DepotCache:
    """Single-source distance fields from depots, filled on demand."""

    def __init__(self, net):
        self.net = net
        self.fields = {}
        self.families = {}

    def dist_from(self, depot_id):
        if depot_id not in self.fields:
            vi = self.net.vertex_index(depot_id)
            self.fields[depot_id] = self.net.run_dijkstra([vi])[0]
        return self.fields[depot_id]

    def family(self, method):
        if method not in self.families:
            self.families[method] = depot_field(self.net, method)
        return self.families[method]


def _plan_vertices(net, plan):
    vs = {plan.depot}
    for rid in plan.roads():
        u, v = net.road(rid).endpoints
        vs.add(u)
        vs.add(v)
    return vs


def _depots_near(net, cache, p1, p2, limit_m) -> bool:
    """Merge candidates even without touching: the gap between depots must
    fit in the capacity left over by both loads."""
    slack = limit_m - plan_load_m(net, p1) - plan_load_m(net, p2)
    if slack < 0:
        return False
    d = cache.dist_from(p1.depot)[net.vertex_index(p2.depot)]
    return d <= slack


def _run_wave(net, sol, spec, cfg, cache):
    plans = {p.car: p for p in sol.plans}
    if len(plans) < 2:
        return sol, 0
    cents = {car: plan_centroid(net, p) for car, p in plans.items()}
    if spec.kind == "circular":
        if spec.center not in cents:
            return sol, 0
        cx, cy = cents[spec.center]

        def key(car):
            x, y = cents[car]
            return -((x - cx) ** 2 + (y - cy) ** 2)

    else:
        dx, dy = spec.direction

        def key(car):
            x, y = cents[car]
            return x * dx + y * dy

    order = sorted(plans, key=lambda car: (-key(car), car))
    verts = {}

    def vertices(car):
        p = plans[car]
        hit = verts.get(car)
        if hit is not None and hit[0] is p:
            return hit[1]
        vs = _plan_vertices(net, p)
        verts[car] = (p, vs)
        return vs

    moves = 0
    for pos, car1 in enumerate(order):
        for car2 in order[pos + 1 :]:
            if car1 not in plans:
                break
            if car2 not in plans:
                continue
            p1 = plans[car1]
            p2 = plans[car2]
            shared = bool(vertices(car1) & vertices(car2))
            if not shared and not _depots_near(net, cache, p1, p2, cfg.limit_m):
                continue
            merged = try_merge(net, p1, p2, cfg.limit_m)
            if merged is not None:
                plans[car1] = steiner_reduce_deadhead(net, merged)
                del plans[car2]
                moves += 1
                continue
            if not shared:
                continue

            def accept(res):
                # a rebuilt pair may not worsen total deadhead unless it
                # frees a whole car
                if res is None:
                    return False
                r1 = steiner_reduce_deadhead(net, res[0])
                r2 = None if res[1] is None else steiner_reduce_deadhead(net, res[1])
                keep1 = bool(r1.maintained)
                keep2 = r2 is not None and bool(r2.maintained)
                dh_before = plan_deadhead_m(net, p1) + plan_deadhead_m(net, p2)
                dh_after = (plan_deadhead_m(net, r1) if keep1 else 0) + (
                    plan_deadhead_m(net, r2) if keep2 else 0
                )
                if keep1 + keep2 == 2 and dh_after > dh_before:
                    return False
                if keep1:
                    plans[car1] = r1
                else:
                    del plans[car1]
                if keep2:
                    plans[car2] = r2
                elif car2 in plans:
                    del plans[car2]
                return True

            if accept(
                repack_pair(net, p1, p2, cfg.limit_m, field=cache.family(p1.method))
            ) or accept(
                branch_exchange(net, p1, p2, cfg.limit_m, cfg.combo_cap)
            ):
                moves += 1
    ordered = tuple(plans[car] for car in sorted(plans))
    return Solution(plans=ordered), moves


def run_wave(net: RoadNetwork, sol: Solution, spec: WaveSpec, cfg: SolverConfig) -> Solution:
    out, _ = _run_wave(net, sol, spec, cfg, _DepotCache(net))
    return out


def _auto_center(net, sol):
    """Car id at the heart of the densest cluster of small plans: the
    below-average-load plan touching the most other small plans."""
    plans = sol.plans
    if len(plans) < 2:
        return None
    loads = {p.car: plan_load_m(net, p) for p in plans}
    mean = sum(loads.values()) / len(plans)
    small = [p for p in plans if loads[p.car] < mean] or list(plans)
    vsets = {p.car: _plan_vertices(net, p) for p in small}
    best = None
    for p in small:
        count = sum(
            1
            for q in small
            if q.car != p.car and vsets[p.car] & vsets[q.car]
        )
        k = (-count, p.car)
        if best is None or k < best[0]:
            best = (k, p.car)
    return best[1]


def _resolve_spec(entry, net, sol):
    if isinstance(entry, WaveSpec):
        return entry
    if entry in DIRECTIONS:
        return WaveSpec(kind="directional", direction=DIRECTIONS[entry])
    if entry == "circular":
        center = _auto_center(net, sol)
        if center is None:
            return None
        return WaveSpec(kind="circular", center=center)
    raise ValueError(f"unknown wave spec {entry!r}")


def solve(net: RoadNetwork, cfg: SolverConfig, progress=None):
    """Full pipeline: construct, sweep waves until the objective stalls,
    then a final deadhead reduction pass. Returns (Solution, SolveStats).
    """
    t0 = time.perf_counter()
    sol = initial_solution(net, cfg.limit_m)
    sol = Solution(
        plans=tuple(steiner_reduce_deadhead(net, p) for p in sol.plans)
    )
    stats = SolveStats()
    obj = solution_objective(net, sol)
    stats.history.append(obj)
    if progress:
        progress(0, None, obj)
    if len(sol.plans) > 1:
        cache = _DepotCache(net)
        entries = AUTO_SCHEDULE if cfg.schedule == "auto" else list(cfg.schedule)
        stall = 0
        for entry in itertools.cycle(entries):
            if stall >= cfg.stall_limit:
                break
            spec = _resolve_spec(entry, net, sol)
            if spec is None:
                stall += 1
                continue
            sol2, mv = _run_wave(net, sol, spec, cfg, cache)
            stats.waves += 1
            stats.moves += mv
            obj2 = solution_objective(net, sol2)
            stats.history.append(obj2)
            if progress:
                progress(stats.waves, spec, obj2)
            stall = 0 if obj2 < obj else stall + 1
            sol, obj = sol2, obj2
    final = tuple(
        steiner_reduce_deadhead(net, p)
        for p in sorted(sol.plans, key=lambda p: p.car)
        if p.maintained
    )
    sol = Solution(plans=final)
    stats.objective = solution_objective(net, sol)
    stats.wall_time = time.perf_counter() - t0
    return sol, stats
