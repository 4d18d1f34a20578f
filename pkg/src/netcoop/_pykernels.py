"""Pure-Python/numpy versions of the compiled kernels in ``_kernels.pyx``.

Both modules must agree bit-for-bit on the game kernels: payoffs and switch
probabilities are evaluated with the same floating-point expressions.
"""

import numpy as np


def accumulate_payoffs(indptr, indices, strategies, table, payoffs):
    n = strategies.shape[0]
    deg = np.diff(indptr)
    rows = np.repeat(np.arange(n), deg)
    n_coop = np.bincount(rows, weights=strategies[indices], minlength=n).astype(np.int64)
    s = strategies.astype(np.intp)
    payoffs[:] = n_coop.astype(float) * table[s, 1] + (deg - n_coop).astype(float) * table[s, 0]


def imitate(indptr, indices, strategies, payoffs, b, draws, out):
    out[:] = strategies
    deg = np.diff(indptr)
    active = np.flatnonzero(deg > 0)
    if active.size == 0:
        return 0, 0.0
    di = deg[active]
    pos = (draws[active, 0] * di.astype(float)).astype(np.int64)
    pos = np.minimum(pos, di - 1)
    j = indices[indptr[active] + pos]
    richer = payoffs[j] > payoffs[active]
    if not richer.any():
        return 0, 0.0
    i, j, di = active[richer], j[richer], di[richer]
    dmax = np.maximum(di, deg[j])
    p = (payoffs[j] - payoffs[i]) / (b * dmax.astype(float))
    max_p = float(p.max())
    clamped = int(np.count_nonzero(p > 1.0))
    p = np.minimum(p, 1.0)
    switch = draws[i, 1] < p
    out[i[switch]] = strategies[j[switch]]
    return clamped, max_p


def brandes(indptr, indices):
    n = len(indptr) - 1
    adj = [indices[indptr[v]:indptr[v + 1]].tolist() for v in range(n)]
    bc = [0.0] * n
    for s in range(n):
        dist = [-1] * n
        sigma = [0.0] * n
        delta = [0.0] * n
        dist[s] = 0
        sigma[s] = 1.0
        order = [s]
        head = 0
        while head < len(order):
            v = order[head]
            head += 1
            dn = dist[v] + 1
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dn
                    order.append(w)
                if dist[w] == dn:
                    sigma[w] += sigma[v]
        for v in reversed(order):
            dn = dist[v] + 1
            acc = delta[v]
            for w in adj[v]:
                if dist[w] == dn:
                    acc += sigma[v] / sigma[w] * (1.0 + delta[w])
            delta[v] = acc
            if v != s:
                bc[v] += acc
    return np.array(bc)


def distance_sums(indptr, indices):
    n = len(indptr) - 1
    adj = [indices[indptr[v]:indptr[v + 1]].tolist() for v in range(n)]
    totals = np.zeros(n, dtype=np.int64)
    reach = np.zeros(n, dtype=np.int64)
    for s in range(n):
        dist = [-1] * n
        dist[s] = 0
        queue = [s]
        head = 0
        acc = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            acc += dist[v]
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        totals[s] = acc
        reach[s] = len(queue)
    return totals, reach
