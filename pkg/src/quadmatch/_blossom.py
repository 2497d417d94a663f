"""Dense maximum-weight perfect matching kernel (Edmonds' blossom algorithm).

Array-based primal-dual implementation for complete graphs with positive
integer weights, compiled with numba.  All arithmetic is int64; weights are
doubled inside the slack computation so every dual variable stays integral,
which makes the optimum exact (no floating-point drift).

The kernel maximizes total weight over perfect matchings.  Callers that
want a minimum-weight perfect matching apply the usual affine transform
``w' = w_max - w + 1`` first (all perfect matchings have n/2 edges, so the
argmin is preserved and every transformed weight is >= 1, which the kernel
uses as its "edge exists" marker).

Vertex ids are 1-based inside the kernel; ids n+1..2n are blossom slots.
"""

import numpy as np
from numba import njit

__all__ = ["max_weight_perfect_matching"]


@njit(cache=True)
def max_weight_perfect_matching(w):
    """Solve maximum-weight perfect matching on a complete graph.

    Parameters
    ----------
    w : int64[:, :]
        Square symmetric weight matrix, 1-based (row/column 0 unused),
        with w[u, v] >= 1 for all u != v in 1..n.

    Returns
    -------
    (match, ok) : (int32[:], bool)
        match[u] is the partner of u for u in 1..n.  ok is False when no
        perfect matching exists (cannot happen for complete even graphs).
    """
    n = w.shape[0] - 1
    N = 2 * n
    INF = np.int64(1) << np.int64(62)

    gu = np.zeros((N + 1, N + 1), dtype=np.int32)
    gv = np.zeros((N + 1, N + 1), dtype=np.int32)
    gw = np.zeros((N + 1, N + 1), dtype=np.int64)
    lab = np.zeros(N + 1, dtype=np.int64)
    match = np.zeros(N + 1, dtype=np.int32)
    slack = np.zeros(N + 1, dtype=np.int32)
    st = np.zeros(N + 1, dtype=np.int32)
    pa = np.zeros(N + 1, dtype=np.int32)
    S = np.full(N + 1, -1, dtype=np.int8)
    vis = np.zeros(N + 1, dtype=np.int32)
    flower = np.zeros((N + 1, n + 2), dtype=np.int32)
    flower_len = np.zeros(N + 1, dtype=np.int32)
    flower_from = np.zeros((N + 1, n + 1), dtype=np.int32)
    q = np.zeros(4 * N + 4, dtype=np.int32)
    stack = np.zeros(2 * N + 2, dtype=np.int32)
    mstk_u = np.zeros(4 * N + 4, dtype=np.int32)
    mstk_v = np.zeros(4 * N + 4, dtype=np.int32)
    rot = np.zeros(n + 2, dtype=np.int32)
    # boxed mutable scalars (closures cannot rebind captured ints)
    qptr = np.zeros(2, dtype=np.int64)   # head, tail
    nx = np.zeros(1, dtype=np.int64)     # number of node slots in use
    tbox = np.zeros(1, dtype=np.int32)   # lca timestamp

    def ed(x, y):
        # slack of the edge cached in slot (x, y), via its real endpoints
        eu = gu[x, y]
        ev = gv[x, y]
        return lab[eu] + lab[ev] - gw[eu, ev] * 2

    def update_slack(u, x):
        if slack[x] == 0 or ed(u, x) < ed(slack[x], x):
            slack[x] = u

    def set_slack(x):
        slack[x] = 0
        for u in range(1, n + 1):
            if gw[u, x] > 0 and st[u] != x and S[st[u]] == 0:
                update_slack(u, x)

    def q_push(x):
        top = 0
        stack[top] = x
        top += 1
        while top > 0:
            top -= 1
            y = stack[top]
            if y <= n:
                q[qptr[1]] = y
                qptr[1] += 1
            else:
                # reversed so members are visited in child order
                for i in range(flower_len[y] - 1, -1, -1):
                    stack[top] = flower[y, i]
                    top += 1

    def set_st(x, b):
        top = 0
        stack[top] = x
        top += 1
        while top > 0:
            top -= 1
            y = stack[top]
            st[y] = b
            if y > n:
                for i in range(flower_len[y]):
                    stack[top] = flower[y, i]
                    top += 1

    def get_pr(b, xr):
        pr = 0
        for i in range(flower_len[b]):
            if flower[b, i] == xr:
                pr = i
                break
        if pr % 2 == 1:
            lo = 1
            hi = flower_len[b] - 1
            while lo < hi:
                tmp = flower[b, lo]
                flower[b, lo] = flower[b, hi]
                flower[b, hi] = tmp
                lo += 1
                hi -= 1
            return flower_len[b] - pr
        return pr

    def set_match(u0, v0):
        top = 0
        mstk_u[top] = u0
        mstk_v[top] = v0
        top += 1
        while top > 0:
            top -= 1
            u = mstk_u[top]
            v = mstk_v[top]
            match[u] = gv[u, v]
            if u > n:
                eu = gu[u, v]
                xr = flower_from[u, eu]
                pr = get_pr(u, xr)
                for i in range(pr):
                    mstk_u[top] = flower[u, i]
                    mstk_v[top] = flower[u, i ^ 1]
                    top += 1
                mstk_u[top] = xr
                mstk_v[top] = v
                top += 1
                # rotate flower[u] left by pr so xr becomes the base
                if pr > 0:
                    ln = flower_len[u]
                    for i in range(ln):
                        rot[i] = flower[u, (i + pr) % ln]
                    for i in range(ln):
                        flower[u, i] = rot[i]

    def augment(u0, v0):
        u = u0
        v = v0
        while True:
            xnv = st[match[u]]
            set_match(u, v)
            if xnv == 0:
                return
            set_match(xnv, st[pa[xnv]])
            u = st[pa[xnv]]
            v = xnv

    def get_lca(u0, v0):
        tbox[0] += 1
        t = tbox[0]
        u = u0
        v = v0
        while u != 0 or v != 0:
            if u != 0:
                if vis[u] == t:
                    return u
                vis[u] = t
                u = st[match[u]]
                if u != 0:
                    u = st[pa[u]]
            tmp = u
            u = v
            v = tmp
        return 0

    def add_blossom(u, lca, v):
        b = n + 1
        while b <= nx[0] and st[b] != 0:
            b += 1
        if b > nx[0]:
            nx[0] += 1
        lab[b] = 0
        S[b] = 0
        match[b] = match[lca]
        flower[b, 0] = lca
        flower_len[b] = 1
        x = u
        while x != lca:
            flower[b, flower_len[b]] = x
            flower_len[b] += 1
            y = st[match[x]]
            flower[b, flower_len[b]] = y
            flower_len[b] += 1
            q_push(y)
            x = st[pa[y]]
        lo = 1
        hi = flower_len[b] - 1
        while lo < hi:
            tmp = flower[b, lo]
            flower[b, lo] = flower[b, hi]
            flower[b, hi] = tmp
            lo += 1
            hi -= 1
        x = v
        while x != lca:
            flower[b, flower_len[b]] = x
            flower_len[b] += 1
            y = st[match[x]]
            flower[b, flower_len[b]] = y
            flower_len[b] += 1
            q_push(y)
            x = st[pa[y]]
        set_st(b, b)
        for x2 in range(1, nx[0] + 1):
            gw[b, x2] = 0
            gw[x2, b] = 0
        for x2 in range(1, n + 1):
            flower_from[b, x2] = 0
        for i in range(flower_len[b]):
            xs = flower[b, i]
            for x2 in range(1, nx[0] + 1):
                if gw[xs, x2] > 0 and (gw[b, x2] == 0 or ed(xs, x2) < ed(b, x2)):
                    gu[b, x2] = gu[xs, x2]
                    gv[b, x2] = gv[xs, x2]
                    gw[b, x2] = gw[xs, x2]
                    gu[x2, b] = gu[x2, xs]
                    gv[x2, b] = gv[x2, xs]
                    gw[x2, b] = gw[x2, xs]
            for x2 in range(1, n + 1):
                if flower_from[xs, x2] != 0:
                    flower_from[b, x2] = xs
        set_slack(b)

    def expand_blossom(b):
        for i in range(flower_len[b]):
            set_st(flower[b, i], flower[b, i])
        xr = flower_from[b, gu[b, pa[b]]]
        pr = get_pr(b, xr)
        i = 0
        while i < pr:
            xs = flower[b, i]
            xns = flower[b, i + 1]
            pa[xs] = gu[xns, xs]
            S[xs] = 1
            S[xns] = 0
            slack[xs] = 0
            set_slack(xns)
            q_push(xns)
            i += 2
        S[xr] = 1
        pa[xr] = pa[b]
        for i in range(pr + 1, flower_len[b]):
            xs = flower[b, i]
            S[xs] = -1
            set_slack(xs)
        st[b] = 0

    def on_found_edge(sx, sy):
        # slot coordinates; the cached edge's real endpoints drive the logic
        eu = gu[sx, sy]
        ev = gv[sx, sy]
        u = st[eu]
        v = st[ev]
        if S[v] == -1:
            pa[v] = eu
            S[v] = 1
            nu = st[match[v]]
            slack[v] = 0
            slack[nu] = 0
            S[nu] = 0
            q_push(nu)
        elif S[v] == 0:
            lca = get_lca(u, v)
            if lca == 0:
                augment(u, v)
                augment(v, u)
                return True
            add_blossom(u, lca, v)
        return False

    def matching_phase():
        for i in range(N + 1):
            S[i] = -1
            slack[i] = 0
        qptr[0] = 0
        qptr[1] = 0
        for x in range(1, nx[0] + 1):
            if st[x] == x and match[x] == 0:
                pa[x] = 0
                S[x] = 0
                q_push(x)
        if qptr[1] == 0:
            return False
        while True:
            while qptr[0] < qptr[1]:
                u = q[qptr[0]]
                qptr[0] += 1
                if S[st[u]] == 1:
                    continue
                for v in range(1, n + 1):
                    if gw[u, v] > 0 and st[u] != st[v]:
                        if ed(u, v) == 0:
                            if on_found_edge(u, v):
                                return True
                        else:
                            update_slack(u, st[v])
            d = INF
            for b in range(n + 1, nx[0] + 1):
                if st[b] == b and S[b] == 1:
                    dd = lab[b] // 2
                    if dd < d:
                        d = dd
            for x in range(1, nx[0] + 1):
                if st[x] == x and slack[x] != 0:
                    sl = ed(slack[x], x)
                    if S[x] == -1:
                        if sl < d:
                            d = sl
                    elif S[x] == 0:
                        dd = sl // 2
                        if dd < d:
                            d = dd
            for u in range(1, n + 1):
                if S[st[u]] == 0:
                    if lab[u] <= d:
                        return False  # maximum matching reached, not perfect
                    lab[u] -= d
                elif S[st[u]] == 1:
                    lab[u] += d
            for b in range(n + 1, nx[0] + 1):
                if st[b] == b:
                    if S[b] == 0:
                        lab[b] += 2 * d
                    elif S[b] == 1:
                        lab[b] -= 2 * d
            for x in range(1, nx[0] + 1):
                if (st[x] == x and slack[x] != 0 and st[slack[x]] != x
                        and ed(slack[x], x) == 0):
                    if on_found_edge(slack[x], x):
                        return True
            for b in range(n + 1, nx[0] + 1):
                if st[b] == b and S[b] == 1 and lab[b] == 0:
                    expand_blossom(b)

    # --- driver ---
    nx[0] = n
    wmax = np.int64(0)
    for u in range(1, n + 1):
        st[u] = u
        for v in range(1, n + 1):
            flower_from[u, v] = u if u == v else 0
            if u != v:
                gu[u, v] = u
                gv[u, v] = v
                gw[u, v] = w[u, v]
                if w[u, v] > wmax:
                    wmax = w[u, v]
    for u in range(n + 1, N + 1):
        st[u] = u
    for u in range(1, n + 1):
        lab[u] = wmax

    while matching_phase():
        pass

    ok = True
    for u in range(1, n + 1):
        if match[u] == 0:
            ok = False
    return match[: n + 1], ok
