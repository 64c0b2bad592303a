"""Exhaustive reference optimum for toy instances.

Enumerates every way to split the roads into per-car maintained sets,
every depot and car type for each set, and every reconnecting deadhead
subset, then assembles the lexicographically best cover by dynamic
programming over road bitmasks. Exponential on purpose; capped at 9
roads by default. Serves as the ground truth the heuristic pipeline is
measured against.
"""

from __future__ import annotations

from gritter.model import (
    CAR_METHODS,
    GritterError,
    RoadNetwork,
    effective_length_m,
    maintainable_by,
)
from gritter.construct import NoFeasibleSolutionError
from gritter.plans import MaintenancePlan, Solution, walk_levels

INF = float("inf")


class CapExceededError(GritterError):
    pass


def brute_force_optimum(net: RoadNetwork, limit_m: int, max_roads: int = 9) -> Solution:
    roads = net.roads
    n = len(roads)
    if n > max_roads:
        raise CapExceededError(
            f"brute force capped at {max_roads} roads, instance has {n}"
        )
    if n == 0:
        return Solution(plans=())
    full = (1 << n) - 1
    ids = [r.id for r in roads]
    ends = [r.endpoints for r in roads]
    pri = [r.priority for r in roads]
    raw = [r.length_m for r in roads]
    eff = [effective_length_m(r) for r in roads]
    rawsum = [0] * (1 << n)
    effsum = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        rawsum[mask] = rawsum[mask ^ (1 << low)] + raw[low]
        effsum[mask] = effsum[mask ^ (1 << low)] + eff[low]

    stations = []  # (method, depot id), chemical depots first
    for m in CAR_METHODS:
        for vi in net.depots(m):
            stations.append((m, net.crossroads[vi].id))

    def mask_ids(mask):
        return frozenset(ids[i] for i in range(n) if mask >> i & 1)

    def connected(mask, depot):
        adj = {}
        for i in range(n):
            if mask >> i & 1:
                u, v = ends[i]
                adj.setdefault(u, set()).add(v)
                adj.setdefault(v, set()).add(u)
        seen = {depot}
        stack = [depot]
        while stack:
            x = stack.pop()
            for y in adj.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        for i in range(n):
            if mask >> i & 1:
                u, v = ends[i]
                if u not in seen or v not in seen:
                    return False
        return True

    def monotone(m_mask, d_mask, depot):
        levels = walk_levels(net, depot, mask_ids(m_mask), mask_ids(d_mask))
        for i in range(n):
            if m_mask >> i & 1:
                u, v = ends[i]
                if min(levels.get(u, INF), levels.get(v, INF)) > pri[i]:
                    return False
        return True

    # cheapest feasible deadhead completion for each maintained set
    best = {}  # m_mask -> (deadhead_m, method, depot, d_mask)
    for m_mask in range(1, 1 << n):
        usable = [
            (meth, depot)
            for meth, depot in stations
            if all(
                maintainable_by(roads[i].method, meth)
                for i in range(n)
                if m_mask >> i & 1
            )
        ]
        if not usable:
            continue
        comp = full ^ m_mask
        subs = []
        s = comp
        while True:
            subs.append(s)
            if s == 0:
                break
            s = (s - 1) & comp
        subs.sort(key=lambda d: (rawsum[d], d))
        found = None
        for d_mask in subs:
            if effsum[m_mask] + rawsum[d_mask] > limit_m:
                break  # subsets come in raw-length order
            for meth, depot in usable:
                if connected(m_mask | d_mask, depot) and monotone(
                    m_mask, d_mask, depot
                ):
                    found = (rawsum[d_mask], meth, depot, d_mask)
                    break
            if found:
                break
        if found:
            best[m_mask] = found

    # lexicographic (cars, deadhead) partition over road bitmasks
    dp = [(INF, INF)] * (1 << n)
    parent = [0] * (1 << n)
    dp[0] = (0, 0)
    for mask in range(1, 1 << n):
        low_bit = mask & -mask
        s = mask
        while True:
            if s & low_bit and s in best:
                rest = dp[mask ^ s]
                cand = (rest[0] + 1, rest[1] + best[s][0])
                if cand < dp[mask] or (cand == dp[mask] and s < parent[mask]):
                    dp[mask] = cand
                    parent[mask] = s
            if s == 0:
                break
            s = (s - 1) & mask
    if dp[full][0] == INF:
        raise NoFeasibleSolutionError("no feasible cover for any fleet")

    pieces = []
    mask = full
    while mask:
        s = parent[mask]
        pieces.append(s)
        mask ^= s
    pieces.sort(key=lambda s: (s & -s).bit_length())
    plans = []
    for k, s in enumerate(pieces):
        dh, meth, depot, d_mask = best[s]
        plans.append(
            MaintenancePlan(
                car=f"car-{k + 1:04d}",
                method=meth,
                depot=depot,
                maintained=mask_ids(s),
                deadhead=mask_ids(d_mask),
            )
        )
    return Solution(plans=tuple(plans))
