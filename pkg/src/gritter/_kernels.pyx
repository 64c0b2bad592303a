# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled graph kernels.

Mirrors `_kernels_py.py` exactly: identical labels, identical
tie-breaking, identical results. Kept in sync by the parity tests.
"""

from array import array

from cpython.mem cimport PyMem_Free, PyMem_Realloc

INF = 1 << 62

IMPL = "compiled"

cdef long long C_INF = <long long> 1 << 62


cdef struct HeapItem:
    long long d
    long long r
    long long v


cdef inline bint _less(HeapItem a, HeapItem b):
    if a.d != b.d:
        return a.d < b.d
    if a.r != b.r:
        return a.r < b.r
    return a.v < b.v


cdef struct Heap:
    HeapItem* items
    Py_ssize_t size
    Py_ssize_t cap


cdef int _heap_push(Heap* h, long long d, long long r, long long v) except -1:
    cdef Py_ssize_t i, p
    cdef HeapItem it
    if h.size == h.cap:
        h.cap = h.cap * 2 if h.cap else 64
        h.items = <HeapItem*> PyMem_Realloc(h.items, h.cap * sizeof(HeapItem))
        if h.items == NULL:
            raise MemoryError()
    it.d = d
    it.r = r
    it.v = v
    i = h.size
    h.size += 1
    while i > 0:
        p = (i - 1) >> 1
        if _less(it, h.items[p]):
            h.items[i] = h.items[p]
            i = p
        else:
            break
    h.items[i] = it
    return 0


cdef HeapItem _heap_pop(Heap* h):
    cdef HeapItem top = h.items[0]
    cdef HeapItem last
    cdef Py_ssize_t i = 0, c
    h.size -= 1
    if h.size:
        last = h.items[h.size]
        while True:
            c = 2 * i + 1
            if c >= h.size:
                break
            if c + 1 < h.size and _less(h.items[c + 1], h.items[c]):
                c += 1
            if _less(h.items[c], last):
                h.items[i] = h.items[c]
                i = c
            else:
                break
        h.items[i] = last
    return top


def dijkstra(Py_ssize_t n, indptr, adj_vertex, adj_edge, cost, sources, ranks,
             long long target=-1):
    """Multi-source Dijkstra over a CSR adjacency structure.

    cost is per-edge in integer meters; a negative cost marks the edge as
    unusable. Vertex labels are (distance, source rank) compared
    lexicographically, so ties between equally distant sources resolve to
    the lowest rank deterministically. Returns (dist, rank, parent_edge)
    arrays; unreached vertices carry dist INF and parent -1. If target is a
    vertex index the search stops once that vertex is settled.
    """
    dist_a = array("q", [C_INF]) * n
    rank_a = array("q", [C_INF]) * n
    parent_a = array("q", [-1]) * n
    if n == 0:
        return dist_a, rank_a, parent_a
    if not isinstance(sources, array):
        sources = array("q", sources)
    if not isinstance(ranks, array):
        ranks = array("q", ranks)
    cdef long long[:] dist = dist_a
    cdef long long[:] rank = rank_a
    cdef long long[:] parent = parent_a
    cdef long long[:] indptr_v = indptr
    cdef long long[:] adj_vertex_v = adj_vertex
    cdef long long[:] adj_edge_v = adj_edge
    cdef long long[:] cost_v = cost
    cdef long long[:] sources_v = sources
    cdef long long[:] ranks_v = ranks

    cdef Heap heap
    heap.items = NULL
    heap.size = 0
    heap.cap = 0

    cdef Py_ssize_t i, k
    cdef long long s, r, d, v, w, c, nd, e
    cdef HeapItem top
    try:
        for i in range(sources_v.shape[0]):
            s = sources_v[i]
            r = ranks_v[i]
            if r < rank[s]:
                dist[s] = 0
                rank[s] = r
                _heap_push(&heap, 0, r, s)
        while heap.size:
            top = _heap_pop(&heap)
            d = top.d
            r = top.r
            v = top.v
            if d > dist[v] or (d == dist[v] and r > rank[v]):
                continue
            if v == target:
                break
            for k in range(indptr_v[v], indptr_v[v + 1]):
                e = adj_edge_v[k]
                c = cost_v[e]
                if c < 0:
                    continue
                w = adj_vertex_v[k]
                nd = d + c
                if nd < dist[w] or (nd == dist[w] and r < rank[w]):
                    dist[w] = nd
                    rank[w] = r
                    parent[w] = e
                    _heap_push(&heap, nd, r, w)
    finally:
        PyMem_Free(heap.items)
    return dist_a, rank_a, parent_a
