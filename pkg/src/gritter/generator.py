"""Synthetic road network generator.

Networks come out of a random geometric construction: scattered
crossroads, short connecting roads, a spanning tree to guarantee
connectivity. Priorities grow structurally (a connected priority-1
backbone with lower priorities attaching outward), inert maintenance is
clustered regionally, and snowplowed roads prefer dead ends. The
case-study preset reproduces the published mix of a real district at
the same scale.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass, field

from gritter.model import (
    CAR_METHODS,
    Crossroad,
    GritterError,
    Method,
    Road,
    RoadNetwork,
)


class InfeasibleParamsError(GritterError):
    pass


# relative affinity of each method for each priority level; inert and
# snowplow lengths concentrate in the lowest priority, like real districts
_SKEW = {
    Method.CHEMICAL: (1.0, 1.0, 1.0),
    Method.INERT: (0.25, 0.30, 1.0),
    Method.SNOWPLOW: (0.04, 0.08, 1.0),
}

DEFAULT_MULTIPLICITY = {1: 3, 2: 2, 3: 1}


@dataclass(frozen=True)
class GeneratorParams:
    vertices: int = 100
    edges: int = 150
    method_mix: tuple = (0.70, 0.14, 0.16)  # chemical, inert, snowplow
    priority_mix: tuple = (0.19, 0.24, 0.57)  # priority 1, 2, 3
    inert_clustering: float = 0.8
    depots: int = 4
    depot_mix: tuple = (0.12, 0.18, 0.70)  # chem-only, inert-only, both
    total_km: float = 0.0  # 0 = scale to ~2.1 km per road
    multiplicity_by_priority: dict = field(
        default_factory=lambda: dict(DEFAULT_MULTIPLICITY)
    )
    seed: int = 0

    def validate(self):
        if self.vertices < 2:
            raise InfeasibleParamsError("infeasible params: need >= 2 vertices")
        if self.edges < self.vertices - 1:
            raise InfeasibleParamsError(
                "infeasible params: too few edges for a connected network"
            )
        if self.edges > self.vertices * (self.vertices - 1) // 2:
            raise InfeasibleParamsError(
                "infeasible params: more edges than distinct pairs"
            )
        if self.depots < 1 or self.depots > self.vertices:
            raise InfeasibleParamsError("infeasible params: bad depot count")
        for mix, name in ((self.method_mix, "method"), (self.priority_mix, "priority"), (self.depot_mix, "depot")):
            if len(mix) != 3 or any(f < 0 for f in mix) or abs(sum(mix) - 1.0) > 1e-6:
                raise InfeasibleParamsError(
                    f"infeasible params: {name} mix must be 3 fractions summing to 1"
                )
        if not 0.0 <= self.inert_clustering <= 1.0:
            raise InfeasibleParamsError(
                "infeasible params: clustering must be in [0, 1]"
            )


def case_study_params(seed: int = 0) -> GeneratorParams:
    """Shape and mix of the published district: ~1700 crossroads, ~2300
    roads, 4815 km total split 3392/676/747 km by method and
    890/1160/2765 km by priority, 34 depots (4 chem-only, 6 inert-only,
    24 both)."""
    total = 4815.0
    return GeneratorParams(
        vertices=1719,
        edges=2280,
        method_mix=(3392 / total, 676 / total, 747 / total),
        priority_mix=(890 / total, 1160 / total, 2765 / total),
        inert_clustering=0.8,
        depots=34,
        depot_mix=(4 / 34, 6 / 34, 24 / 34),
        total_km=total,
        seed=seed,
    )


def _grid_key(x, y, cell):
    return (int(x / cell), int(y / cell))


def _knn_candidates(pts, k, rng):
    """Short candidate roads: each point paired with its k nearest, found
    through a uniform grid so big instances stay cheap."""
    n = len(pts)
    cell = 1.0 / max(1, int(math.sqrt(n)))
    grid = {}
    for i, (x, y) in enumerate(pts):
        grid.setdefault(_grid_key(x, y, cell), []).append(i)
    pairs = set()
    for i, (x, y) in enumerate(pts):
        cx, cy = _grid_key(x, y, cell)
        ring = 1
        found = []
        while len(found) < k and ring < 2 / cell + 2:
            found = []
            for gx in range(cx - ring, cx + ring + 1):
                for gy in range(cy - ring, cy + ring + 1):
                    for j in grid.get((gx, gy), ()):
                        if j != i:
                            found.append(j)
            ring += 1
        found.sort(key=lambda j: (pts[j][0] - x) ** 2 + (pts[j][1] - y) ** 2)
        for j in found[:k]:
            pairs.add((min(i, j), max(i, j)))
    return sorted(pairs)


def _mst_edges(pts):
    """Dense Prim over all pairs; the tree seeds connectivity."""
    n = len(pts)
    in_tree = [False] * n
    dist = [math.inf] * n
    link = [-1] * n
    dist[0] = 0.0
    edges = []
    for _ in range(n):
        u = -1
        bd = math.inf
        for v in range(n):
            if not in_tree[v] and dist[v] < bd:
                bd = dist[v]
                u = v
        in_tree[u] = True
        if link[u] >= 0:
            edges.append((min(u, link[u]), max(u, link[u])))
        ux, uy = pts[u]
        for v in range(n):
            if not in_tree[v]:
                d = (pts[v][0] - ux) ** 2 + (pts[v][1] - uy) ** 2
                if d < dist[v]:
                    dist[v] = d
                    link[v] = u
    return edges


def _euclid(pts, e):
    (x1, y1), (x2, y2) = pts[e[0]], pts[e[1]]
    return math.hypot(x1 - x2, y1 - y2)


def _ipf_budgets(method_targets, priority_totals):
    """Iterative proportional fitting of the method x priority length
    matrix: row sums follow the method mix, column sums follow what the
    structural priority growth produced, interior skewed by _SKEW."""
    methods = list(_SKEW)
    m = {
        meth: [
            max(method_targets[meth], 1e-9)
            * max(priority_totals[p], 1e-9)
            * _SKEW[meth][p]
            for p in range(3)
        ]
        for meth in methods
    }
    for _ in range(60):
        for meth in methods:
            s = sum(m[meth])
            f = method_targets[meth] / s if s > 0 else 0.0
            m[meth] = [v * f for v in m[meth]]
        for p in range(3):
            s = sum(m[meth][p] for meth in methods)
            f = priority_totals[p] / s if s > 0 else 0.0
            for meth in methods:
                m[meth][p] *= f
    return m


def generate_instance(params: GeneratorParams) -> RoadNetwork:
    params.validate()
    rng = random.Random(params.seed)
    n = params.vertices

    # crossroads sit on a jittered grid with holes; road candidates are
    # grid neighbours, so travel detours stay road-like instead of the
    # long tendrils a bare spanning tree would give
    side = math.ceil(math.sqrt(n))
    cells = rng.sample([(i, j) for j in range(side) for i in range(side)], n)
    pts = []
    for i, j in cells:
        jx = (rng.random() - 0.5) * 0.7
        jy = (rng.random() - 0.5) * 0.7
        pts.append(((i + 0.5 + jx) / side, (j + 0.5 + jy) / side))
    cell_at = {c: k for k, c in enumerate(cells)}
    near_cands = []
    for (i, j), k in sorted(cell_at.items()):
        for di, dj in ((1, 0), (0, 1), (1, 1), (1, -1)):
            nb = cell_at.get((i + di, j + dj))
            if nb is not None:
                near_cands.append((min(k, nb), max(k, nb)))

    chosen = set(_mst_edges(pts))
    rng.shuffle(near_cands)
    for e in near_cands:
        if len(chosen) >= params.edges:
            break
        chosen.add(e)
    extras = [e for e in _knn_candidates(pts, 5, rng) if e not in chosen]
    extras.sort(key=lambda e: (_euclid(pts, e), e))
    for e in extras:
        if len(chosen) >= params.edges:
            break
        chosen.add(e)
    # kNN may not offer enough distinct pairs; widen with random pairs
    while len(chosen) < params.edges:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v:
            chosen.add((min(u, v), max(u, v)))
    edges = sorted(chosen)

    raw_total = sum(_euclid(pts, e) for e in edges)
    target_km = params.total_km if params.total_km > 0 else 2.1 * len(edges)
    scale = target_km / raw_total  # km per unit
    length_m = {
        e: max(1, round(_euclid(pts, e) * scale * 1000)) for e in edges
    }
    total_m = sum(length_m.values())

    adj = {}
    for e in edges:
        adj.setdefault(e[0], []).append(e)
        adj.setdefault(e[1], []).append(e)

    # --- priorities: grow a connected priority-1 backbone from the middle,
    # then let priority 2 attach to it, leaving the fringe at priority 3
    cx = sum(x for x, _ in pts) / n
    cy = sum(y for _, y in pts) / n
    center = min(range(n), key=lambda i: ((pts[i][0] - cx) ** 2 + (pts[i][1] - cy) ** 2, i))
    budgets = [f * total_m for f in params.priority_mix]
    priority = {}
    backbone_vs = {center}
    spent = 0
    while spent < budgets[0]:
        frontier = sorted(
            e
            for v in backbone_vs
            for e in adj[v]
            if e not in priority
        )
        if not frontier:
            break
        e = min(frontier, key=lambda e: (length_m[e], e))
        priority[e] = 1
        spent += length_m[e]
        backbone_vs.update(e)
    p2_vs = set(backbone_vs)
    spent = 0
    while spent < budgets[1]:
        frontier = sorted(
            e for v in p2_vs for e in adj[v] if e not in priority
        )
        if not frontier:
            break
        e = min(frontier, key=lambda e: (length_m[e], e))
        priority[e] = 2
        spent += length_m[e]
        p2_vs.update(e)
    for e in edges:
        priority.setdefault(e, 3)

    # --- methods: fill per-stratum length budgets; inert gravitates to
    # cluster centers, snowplow to dead ends, chemical takes the rest
    priority_totals = [
        sum(length_m[e] for e in edges if priority[e] == p) for p in (1, 2, 3)
    ]
    method_targets = {
        Method.CHEMICAL: params.method_mix[0] * total_m,
        Method.INERT: params.method_mix[1] * total_m,
        Method.SNOWPLOW: params.method_mix[2] * total_m,
    }
    joint = _ipf_budgets(method_targets, priority_totals)
    n_clusters = max(1, round(1 + 4 * params.inert_clustering))
    centers = [
        pts[rng.randrange(n)] for _ in range(n_clusters)
    ]
    degree = {v: len(adj[v]) for v in adj}

    def inert_rank(e):
        mx = (pts[e[0]][0] + pts[e[1]][0]) / 2
        my = (pts[e[0]][1] + pts[e[1]][1]) / 2
        d = min(math.hypot(mx - qx, my - qy) for qx, qy in centers)
        if params.inert_clustering < 1.0:
            d = params.inert_clustering * d + (1 - params.inert_clustering) * rng.random()
        return (d, e)

    def snow_rank(e):
        leaf = 0 if min(degree[e[0]], degree[e[1]]) == 1 else 1
        return (leaf, rng.random(), e)

    method = {}
    for p in (3, 2, 1):  # fill fringe first so clusters look regional
        stratum = [e for e in edges if priority[e] == p]
        want_snow = joint[Method.SNOWPLOW][p - 1]
        want_inert = joint[Method.INERT][p - 1]
        got = 0
        for e in sorted(stratum, key=snow_rank):
            if got >= want_snow:
                break
            method[e] = Method.SNOWPLOW
            got += length_m[e]
        got = 0
        for e in sorted((e for e in stratum if e not in method), key=inert_rank):
            if got >= want_inert:
                break
            method[e] = Method.INERT
            got += length_m[e]
        for e in stratum:
            method.setdefault(e, Method.CHEMICAL)

    # --- depots: k-center greedy under the road metric; each new depot
    # lands on the crossroad farthest from the existing ones, so the
    # depots placed first are the most spread out. They get both storage
    # types and the later (gap-filling, more redundant) ones go single
    inf = float("inf")
    nbrs = {}
    for e in edges:
        w = length_m[e]
        nbrs.setdefault(e[0], []).append((e[1], w))
        nbrs.setdefault(e[1], []).append((e[0], w))

    def relax(src, mindist):
        # only explores where this source improves the depot distance map
        dist = {src: 0}
        heap = [(0, src)]
        while heap:
            d, v = heapq.heappop(heap)
            if d > dist.get(v, inf):
                continue
            if d < mindist[v]:
                mindist[v] = d
            for w, l in nbrs.get(v, ()):
                nd = d + l
                if nd < dist.get(w, inf) and nd < mindist[w]:
                    dist[w] = nd
                    heapq.heappush(heap, (nd, w))

    mindist = [inf] * n
    depot_vs = [center]
    relax(center, mindist)
    while len(depot_vs) < min(params.depots, n):
        v = max(range(n), key=lambda v: (mindist[v], -v))
        if mindist[v] == 0:
            break
        depot_vs.append(v)
        relax(v, mindist)
    n_dep = len(depot_vs)
    n_chem_only = round(params.depot_mix[0] * n_dep)
    n_inert_only = round(params.depot_mix[1] * n_dep)
    if n_chem_only + n_inert_only > n_dep:
        n_inert_only = n_dep - n_chem_only
    n_both = n_dep - n_chem_only - n_inert_only
    tail = depot_vs[n_both:]
    rng.shuffle(tail)
    storage = {}
    for i, v in enumerate(depot_vs[:n_both]):
        storage[v] = frozenset({Method.CHEMICAL.value, Method.INERT.value})
    for i, v in enumerate(tail):
        if i < n_chem_only:
            storage[v] = frozenset({Method.CHEMICAL.value})
        else:
            storage[v] = frozenset({Method.INERT.value})
    # every car type needs at least one loading point
    have = set().union(*storage.values()) if storage else set()
    for m in CAR_METHODS:
        if m.value not in have:
            storage[depot_vs[0]] = frozenset(
                {Method.CHEMICAL.value, Method.INERT.value}
            )

    width = max(4, len(str(n)))
    vid = [f"v{i:0{width}d}" for i in range(n)]
    crossroads = [
        Crossroad(
            id=vid[i],
            x=round(pts[i][0] * scale, 4),
            y=round(pts[i][1] * scale, 4),
            storage=storage.get(i, frozenset()),
        )
        for i in range(n)
    ]
    ewidth = max(4, len(str(len(edges))))
    mult = params.multiplicity_by_priority
    roads = [
        Road(
            id=f"e{k:0{ewidth}d}",
            endpoints=(vid[e[0]], vid[e[1]]),
            length_m=length_m[e],
            method=method[e],
            priority=priority[e],
            multiplicity=int(mult.get(priority[e], 1)),
        )
        for k, e in enumerate(edges)
    ]
    return RoadNetwork(crossroads=crossroads, roads=roads)
