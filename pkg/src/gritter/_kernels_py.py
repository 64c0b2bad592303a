"""Pure-Python graph kernels.

Mirrors the compiled extension in `_kernels.pyx` exactly: identical labels,
identical tie-breaking, identical results. Kept in sync by the parity tests.
"""

from array import array
from heapq import heappop, heappush

INF = 1 << 62

IMPL = "python"


def dijkstra(n, indptr, adj_vertex, adj_edge, cost, sources, ranks, target=-1):
    """Multi-source Dijkstra over a CSR adjacency structure.

    cost is per-edge in integer meters; a negative cost marks the edge as
    unusable. Vertex labels are (distance, source rank) compared
    lexicographically, so ties between equally distant sources resolve to
    the lowest rank deterministically. Returns (dist, rank, parent_edge)
    arrays; unreached vertices carry dist INF and parent -1. If target is a
    vertex index the search stops once that vertex is settled.
    """
    dist = array("q", [INF]) * n
    rank = array("q", [INF]) * n
    parent = array("q", [-1]) * n
    heap = []
    for i in range(len(sources)):
        s = sources[i]
        r = ranks[i]
        if r < rank[s]:
            dist[s] = 0
            rank[s] = r
            heappush(heap, (0, r, s))
    while heap:
        d, r, v = heappop(heap)
        if d > dist[v] or (d == dist[v] and r > rank[v]):
            continue
        if v == target:
            break
        for k in range(indptr[v], indptr[v + 1]):
            c = cost[adj_edge[k]]
            if c < 0:
                continue
            w = adj_vertex[k]
            nd = d + c
            if nd < dist[w] or (nd == dist[w] and r < rank[w]):
                dist[w] = nd
                rank[w] = r
                parent[w] = adj_edge[k]
                heappush(heap, (nd, r, w))
    return dist, rank, parent
