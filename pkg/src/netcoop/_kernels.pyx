# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Semantics mirror ``netcoop._pykernels`` exactly."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64
ctypedef cnp.uint8_t u8


def accumulate_payoffs(const i64[::1] indptr, const i64[::1] indices,
                       const u8[::1] strategies, const double[:, ::1] table,
                       double[::1] payoffs):
    cdef Py_ssize_t n = strategies.shape[0]
    cdef Py_ssize_t i, k
    cdef i64 n_coop, deg
    cdef u8 s
    for i in range(n):
        n_coop = 0
        for k in range(indptr[i], indptr[i + 1]):
            n_coop += strategies[indices[k]]
        deg = indptr[i + 1] - indptr[i]
        s = strategies[i]
        payoffs[i] = <double>n_coop * table[s, 1] + <double>(deg - n_coop) * table[s, 0]


def imitate(const i64[::1] indptr, const i64[::1] indices,
            const u8[::1] strategies, const double[::1] payoffs, double b,
            const double[:, ::1] draws, u8[::1] out):
    cdef Py_ssize_t n = strategies.shape[0]
    cdef Py_ssize_t i, j
    cdef i64 di, dj, pos, dmax
    cdef double p, max_p = 0.0
    cdef long clamped = 0
    for i in range(n):
        out[i] = strategies[i]
        di = indptr[i + 1] - indptr[i]
        if di == 0:
            continue
        pos = <i64>(draws[i, 0] * <double>di)
        if pos >= di:
            pos = di - 1
        j = indices[indptr[i] + pos]
        if payoffs[j] > payoffs[i]:
            dj = indptr[j + 1] - indptr[j]
            dmax = di if di > dj else dj
            p = (payoffs[j] - payoffs[i]) / (b * <double>dmax)
            if p > max_p:
                max_p = p
            if p > 1.0:
                p = 1.0
                clamped += 1
            if draws[i, 1] < p:
                out[i] = strategies[j]
    return clamped, max_p


def brandes(const i64[::1] indptr, const i64[::1] indices):
    """Ordered-pair betweenness: sum over sources s of Brandes dependencies."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef double[::1] bc = np.zeros(n)
    cdef double[::1] sigma = np.zeros(n)
    cdef double[::1] delta = np.zeros(n)
    cdef i64[::1] dist = np.empty(n, dtype=np.int64)
    cdef i64[::1] order = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t s, v, w, k, head, tail, idx
    cdef double coeff
    for s in range(n):
        for v in range(n):
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = order[head]
            head += 1
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
        # predecessors of w are the in-neighbours one level closer; with
        # out-adjacency we push dependencies from w back along v -> w edges
        for idx in range(tail - 1, -1, -1):
            v = order[idx]
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[w] == dist[v] + 1:
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if v != s:
                bc[v] += delta[v]
    return np.asarray(bc)


def distance_sums(const i64[::1] indptr, const i64[::1] indices):
    """Per source: total hop distance to reachable nodes and reachable count (incl. self)."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef i64[::1] totals = np.zeros(n, dtype=np.int64)
    cdef i64[::1] reach = np.zeros(n, dtype=np.int64)
    cdef i64[::1] dist = np.empty(n, dtype=np.int64)
    cdef i64[::1] queue = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t s, v, w, k, head, tail
    cdef i64 acc
    for s in range(n):
        for v in range(n):
            dist[v] = -1
        dist[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        acc = 0
        while head < tail:
            v = queue[head]
            head += 1
            acc += dist[v]
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue[tail] = w
                    tail += 1
        totals[s] = acc
        reach[s] = tail
    return np.asarray(totals), np.asarray(reach)
