"""Numba kernels for the hot loops.

Everything here works on flat int64/float64 arrays; the public modules
own all conversions. Kernels receive np.random.Generator instances so the
streams match plain numpy draws bit for bit.
"""
from __future__ import annotations

import numpy as np
from numba import njit


# ---------------------------------------------------------------------------
# triangle census (sorted CSR)

@njit(cache=True)
def tri_stats(indptr, indices):
    """Per-node triangle counts for a sorted CSR adjacency.

    Returns (closed_wedges, tri) where closed_wedges = 3 * n_triangles and
    tri[v] counts triangles containing v.
    """
    n = len(indptr) - 1
    tri = np.zeros(n, dtype=np.int64)
    closed = 0
    for u in range(n):
        for iu in range(indptr[u], indptr[u + 1]):
            v = indices[iu]
            if v <= u:
                continue
            # common neighbors w > v close the triangle u < v < w exactly once
            a = indptr[u]
            b = indptr[v]
            ua = indptr[u + 1]
            vb = indptr[v + 1]
            while a < ua and b < vb:
                x = indices[a]
                y = indices[b]
                if x < y:
                    a += 1
                elif y < x:
                    b += 1
                else:
                    if x > v:
                        tri[u] += 1
                        tri[v] += 1
                        tri[x] += 1
                        closed += 3
                    a += 1
                    b += 1
    return closed, tri


# ---------------------------------------------------------------------------
# open-addressing hash set over canonical edge keys (u < v -> u * n + v)

@njit(cache=True, inline="always")
def _edge_key(u, v, n):
    if u < v:
        return u * n + v
    return v * n + u


@njit(cache=True, inline="always")
def _table_insert(table, mask, key):
    h = (key * np.int64(0x9E3779B97F4A7C15)) & mask
    while table[h] != -1:
        h = (h + 1) & mask
    table[h] = key


@njit(cache=True, inline="always")
def _table_contains(table, mask, key):
    h = (key * np.int64(0x9E3779B97F4A7C15)) & mask
    while True:
        cur = table[h]
        if cur == -1:
            return False
        if cur == key:
            return True
        h = (h + 1) & mask


@njit(cache=True)
def stub_match(stubs, n, local_retries, rng):
    """Pair shuffled stubs into simple edges; local re-draw on violations.

    Returns (eu, ev, ok). ok=False means a pair could not be fixed within
    the retry budget and the caller should reshuffle and restart.
    """
    m = len(stubs) // 2
    eu = np.empty(m, dtype=np.int64)
    ev = np.empty(m, dtype=np.int64)
    size = 1
    while size < 4 * m:
        size <<= 1
    table = np.full(size, -1, dtype=np.int64)
    mask = np.int64(size - 1)
    for e in range(m):
        i = 2 * e
        u = stubs[i]
        ok = False
        for _ in range(local_retries):
            v = stubs[i + 1]
            if u != v and not _table_contains(table, mask, _edge_key(u, v, n)):
                ok = True
                break
            # swap the partner stub with a random later stub and retry
            if i + 2 >= len(stubs):
                break
            j = i + 1 + 1 + rng.integers(0, len(stubs) - i - 2)
            tmp = stubs[i + 1]
            stubs[i + 1] = stubs[j]
            stubs[j] = tmp
        if not ok:
            return eu, ev, False
        v = stubs[i + 1]
        _table_insert(table, mask, _edge_key(u, v, n))
        eu[e] = u
        ev[e] = v
    return eu, ev, True


@njit(cache=True)
def triple_match(corners, n, table, mask, local_retries, rng):
    """Group shuffled triangle corners into triples, three edges each.

    `table` carries edges already placed (single-link phase); new edges are
    inserted as they are accepted. Returns (eu, ev, ok).
    """
    t = len(corners) // 3
    eu = np.empty(3 * t, dtype=np.int64)
    ev = np.empty(3 * t, dtype=np.int64)
    for e in range(t):
        i = 3 * e
        ok = False
        for _ in range(local_retries):
            a = corners[i]
            b = corners[i + 1]
            c = corners[i + 2]
            if (a != b and b != c and a != c
                    and not _table_contains(table, mask, _edge_key(a, b, n))
                    and not _table_contains(table, mask, _edge_key(b, c, n))
                    and not _table_contains(table, mask, _edge_key(a, c, n))):
                ok = True
                break
            if i + 3 >= len(corners):
                break
            # reshuffle the two partner corners with random later corners
            for off in range(1, 3):
                j = i + 3 + rng.integers(0, len(corners) - i - 3)
                tmp = corners[i + off]
                corners[i + off] = corners[j]
                corners[j] = tmp
        if not ok:
            return eu, ev, False
        a = corners[i]
        b = corners[i + 1]
        c = corners[i + 2]
        _table_insert(table, mask, _edge_key(a, b, n))
        _table_insert(table, mask, _edge_key(b, c, n))
        _table_insert(table, mask, _edge_key(a, c, n))
        eu[3 * e] = a
        ev[3 * e] = b
        eu[3 * e + 1] = b
        ev[3 * e + 1] = c
        eu[3 * e + 2] = a
        ev[3 * e + 2] = c
    return eu, ev, True


@njit(cache=True)
def fill_edge_table(eu, ev, n, size):
    table = np.full(size, -1, dtype=np.int64)
    mask = np.int64(size - 1)
    for e in range(len(eu)):
        _table_insert(table, mask, _edge_key(eu[e], ev[e], n))
    return table, mask


# ---------------------------------------------------------------------------
# mixing rewiring: apply a batch of proposed swap pairs

@njit(cache=True, inline="always")
def _row_has(indptr, adj, u, w):
    for i in range(indptr[u], indptr[u + 1]):
        if adj[i] == w:
            return True
    return False


@njit(cache=True, inline="always")
def _row_replace(indptr, adj, u, old, new):
    for i in range(indptr[u], indptr[u + 1]):
        if adj[i] == old:
            adj[i] = new
            return


@njit(cache=True)
def apply_swap_pairs(indptr, adj, eu, ev, comm, ext, text,
                     a_edge, a_node, b_edge, b_node, coins, sideways_p):
    """Run proposed double edge swaps, accepting deficit-reducing moves.

    Each proposal designates endpoint u on edge a and endpoint x on edge b;
    the candidate replacement is {u,x}, {v,y}. A move is applied when it
    strictly reduces sum_i |ext_i - text_i|, or leaves it unchanged and its
    pre-drawn coin falls below sideways_p. Returns (accepted, delta_sum).
    """
    accepted = 0
    delta_sum = 0
    for p in range(len(a_edge)):
        ia = a_edge[p]
        ib = b_edge[p]
        if ia == ib:
            continue
        u = a_node[p]
        x = b_node[p]
        if eu[ia] == u:
            v = ev[ia]
        elif ev[ia] == u:
            v = eu[ia]
        else:
            continue  # edge rewritten by an earlier accepted move
        if eu[ib] == x:
            y = ev[ib]
        elif ev[ib] == x:
            y = eu[ib]
        else:
            continue
        if u == x or u == y or v == x or v == y or u == v or x == y:
            continue
        if _row_has(indptr, adj, u, x) or _row_has(indptr, adj, v, y):
            continue
        cu = comm[u]
        cv = comm[v]
        cx = comm[x]
        cy = comm[y]
        # external counts after replacing (u,v),(x,y) with (u,x),(v,y)
        du = (1 if cu != cx else 0) - (1 if cu != cv else 0)
        dv = (1 if cv != cy else 0) - (1 if cv != cu else 0)
        dx = (1 if cx != cu else 0) - (1 if cx != cy else 0)
        dy = (1 if cy != cv else 0) - (1 if cy != cx else 0)
        delta = (abs(ext[u] + du - text[u]) - abs(ext[u] - text[u])
                 + abs(ext[v] + dv - text[v]) - abs(ext[v] - text[v])
                 + abs(ext[x] + dx - text[x]) - abs(ext[x] - text[x])
                 + abs(ext[y] + dy - text[y]) - abs(ext[y] - text[y]))
        if delta > 0 or (delta == 0 and coins[p] >= sideways_p):
            continue
        ext[u] += du
        ext[v] += dv
        ext[x] += dx
        ext[y] += dy
        _row_replace(indptr, adj, u, v, x)
        _row_replace(indptr, adj, v, u, y)
        _row_replace(indptr, adj, x, y, u)
        _row_replace(indptr, adj, y, x, v)
        eu[ia] = u
        ev[ia] = x
        eu[ib] = v
        ev[ib] = y
        accepted += 1
        delta_sum += delta
    return accepted, delta_sum


# ---------------------------------------------------------------------------
# Fenwick tree helpers (unweighted arrays of int64 counts)

@njit(cache=True, inline="always")
def _fen_add(tree, i, delta):
    i += 1
    while i < len(tree):
        tree[i] += delta
        i += i & (-i)


@njit(cache=True, inline="always")
def _fen_search(tree, target):
    """Smallest index i with prefix(i) > target (target is 0-based mass)."""
    pos = 0
    rem = target
    log = 1
    while (log << 1) < len(tree):
        log <<= 1
    step = log
    while step > 0:
        nxt = pos + step
        if nxt < len(tree) and tree[nxt] <= rem:
            pos = nxt
            rem -= tree[nxt]
        step >>= 1
    return pos  # 0-based index


@njit(cache=True)
def ht_fill(indptr, adj, deg, targets, ring_n, p_closure, rng):
    """Add edges over a ring until residual stub budgets are exhausted.

    `adj` rows are preallocated to each node's target degree; `deg` holds
    current fill (ring edges already in place). Residual budget of node v
    is targets[v] - deg[v]. Picks u weighted by residual budget; with
    probability p_closure it closes a two-hop path (walking through a
    random neighbor, so partners with more shared neighbors are favored),
    otherwise it links a uniformly random budgeted non-neighbor.
    Returns total unplaced stub count.
    """
    n = ring_n
    res = np.zeros(n, dtype=np.int64)
    alive_tree = np.zeros(n + 1, dtype=np.int64)
    weight_tree = np.zeros(n + 1, dtype=np.int64)
    alive = 0
    total = 0
    for v in range(n):
        res[v] = targets[v] - deg[v]
        if res[v] > 0:
            _fen_add(alive_tree, v, 1)
            _fen_add(weight_tree, v, res[v])
            alive += 1
            total += res[v]
    stamp = np.zeros(n, dtype=np.int64)
    cand = np.empty(n, dtype=np.int64)
    cur_stamp = 0
    shortfall = 0

    while alive >= 2 and total >= 2:
        pick = rng.integers(0, total)
        u = _fen_search(weight_tree, pick)
        v = np.int64(-1)
        use_closure = rng.random() < p_closure
        for attempt in range(2):
            want_closure = use_closure if attempt == 0 else not use_closure
            if want_closure:
                # two-hop walks; rejection keeps only valid budgeted partners
                for _ in range(48):
                    du = deg[u]
                    w = adj[indptr[u] + np.int64(rng.random() * du)]
                    z = adj[indptr[w] + np.int64(rng.random() * deg[w])]
                    if (z != u and res[z] > 0
                            and not _ht_adjacent(indptr, adj, deg, u, z)):
                        v = z
                        break
                if v == -1:
                    # sparse fallback: enumerate the two-hop ball once
                    cur_stamp += 1
                    ncand = 0
                    for i in range(indptr[u], indptr[u] + deg[u]):
                        w = adj[i]
                        for j in range(indptr[w], indptr[w] + deg[w]):
                            z = adj[j]
                            if z == u or stamp[z] == cur_stamp:
                                continue
                            stamp[z] = cur_stamp
                            if res[z] > 0 and not _ht_adjacent(indptr, adj, deg, u, z):
                                cand[ncand] = z
                                ncand += 1
                    if ncand > 0:
                        v = cand[np.int64(rng.random() * ncand)]
                if v != -1:
                    break
            else:
                # uniform choice among budgeted valid nodes
                found = np.int64(-1)
                for _ in range(64):
                    k = rng.integers(0, alive)
                    z = _fen_search(alive_tree, k)
                    if z != u and not _ht_adjacent(indptr, adj, deg, u, z):
                        found = z
                        break
                if found == -1:
                    # exhaustive fallback over budgeted nodes
                    ncand = 0
                    for z in range(n):
                        if res[z] > 0 and z != u and not _ht_adjacent(indptr, adj, deg, u, z):
                            cand[ncand] = z
                            ncand += 1
                    if ncand > 0:
                        found = cand[rng.integers(0, ncand)]
                if found != -1:
                    v = found
                    break
        if v == -1:
            # no valid partner on either branch: retire u
            shortfall += res[u]
            total -= res[u]
            _fen_add(weight_tree, u, -res[u])
            _fen_add(alive_tree, u, -1)
            res[u] = 0
            alive -= 1
            continue
        adj[indptr[u] + deg[u]] = v
        deg[u] += 1
        adj[indptr[v] + deg[v]] = u
        deg[v] += 1
        res[u] -= 1
        res[v] -= 1
        total -= 2
        _fen_add(weight_tree, u, -1)
        _fen_add(weight_tree, v, -1)
        if res[u] == 0:
            _fen_add(alive_tree, u, -1)
            alive -= 1
        if res[v] == 0:
            _fen_add(alive_tree, v, -1)
            alive -= 1
    shortfall += total
    return shortfall


@njit(cache=True, inline="always")
def _ht_adjacent(indptr, adj, deg, u, z):
    for i in range(indptr[u], indptr[u] + deg[u]):
        if adj[i] == z:
            return True
    return False


# ---------------------------------------------------------------------------
# evolutionary preferential attachment growth

@njit(cache=True)
def ba_growth(n, m, rng):
    """Clique seed on m+1 nodes, degree-proportional attachment after.

    Targets are drawn from the stub pool, duplicates discarded. Returns
    (eu, ev) edge arrays.
    """
    m0 = m + 1
    m_edges = m0 * (m0 - 1) // 2 + m * (n - m0)
    eu = np.empty(m_edges, dtype=np.int64)
    ev = np.empty(m_edges, dtype=np.int64)
    pool = np.empty(2 * m_edges, dtype=np.int64)
    chosen = np.empty(m, dtype=np.int64)
    e = 0
    p = 0
    for u in range(m0):
        for v in range(u + 1, m0):
            eu[e] = u
            ev[e] = v
            pool[p] = u
            pool[p + 1] = v
            e += 1
            p += 2
    for t in range(m0, n):
        picked = 0
        while picked < m:
            cand = pool[rng.integers(0, p)]
            dup = False
            for q in range(picked):
                if chosen[q] == cand:
                    dup = True
                    break
            if dup:
                continue
            chosen[picked] = cand
            picked += 1
        for q in range(m):
            eu[e] = chosen[q]
            ev[e] = t
            pool[p] = chosen[q]
            pool[p + 1] = t
            e += 1
            p += 2
    return eu, ev


# EV adjacency: a CSR snapshot rebuilt every EV_REBUILD arrivals plus a
# linked-list overflow holding the edges added since, so a uniform random
# neighbor costs O(1) plus a short chain walk.
EV_REBUILD = 256


@njit(cache=True, inline="always")
def _ev_neighbor(v, idx, snap_deg, snap_ptr, snap_dat, ovf_head, ovf_nxt, ovf_dst):
    if idx < snap_deg[v]:
        return snap_dat[snap_ptr[v] + idx]
    steps = idx - snap_deg[v]
    it = ovf_head[v]
    for _ in range(steps):
        it = ovf_nxt[it]
    return ovf_dst[it]


@njit(cache=True)
def ev_growth(n, m, epsilon, temptation, rounds_per_step, coop_fraction, rng):
    """Grow a network by payoff-biased attachment over a dilemma game.

    Seed clique on m+1 nodes; each arrival attaches m edges to distinct
    nodes drawn with probability (1-eps)/N + eps * f_i / sum(f), where f_i
    is the payoff accumulated over `rounds_per_step` game rounds since the
    previous arrival. Cooperator pairs score 1 each, a defector scores
    `temptation` off a cooperator, other pairings score 0; after each round
    a node inspects one uniformly random neighbor and adopts its strategy
    with probability (payoff gap) / (temptation * max degree).
    Returns (eu, ev) edge arrays.
    """
    m0 = m + 1
    m_edges = m0 * (m0 - 1) // 2 + m * (n - m0)
    eu = np.empty(m_edges, dtype=np.int64)
    ev = np.empty(m_edges, dtype=np.int64)
    coop = np.zeros(n, dtype=np.int8)
    ncoop = np.zeros(n, dtype=np.int64)  # cooperating-neighbor counts
    degv = np.zeros(n, dtype=np.int64)
    f = np.zeros(n, dtype=np.float64)
    fr = np.zeros(n, dtype=np.float64)
    new_coop = np.zeros(n, dtype=np.int8)
    changed_buf = np.empty(n, dtype=np.int64)
    cum = np.empty(n, dtype=np.float64)
    chosen = np.empty(m, dtype=np.int64)
    # adjacency snapshot + overflow
    snap_ptr = np.zeros(n + 1, dtype=np.int64)
    snap_dat = np.empty(2 * m_edges, dtype=np.int64)
    snap_deg = np.zeros(n, dtype=np.int64)
    ovf_cap = 2 * m * (EV_REBUILD + m0 + 1)
    ovf_head = np.full(n, -1, dtype=np.int64)
    ovf_nxt = np.empty(ovf_cap, dtype=np.int64)
    ovf_dst = np.empty(ovf_cap, dtype=np.int64)
    ovf_top = 0
    e = 0

    for v in range(m0):
        coop[v] = 1 if rng.random() < coop_fraction else 0
    for u in range(m0):
        for v in range(u + 1, m0):
            eu[e] = u
            ev[e] = v
            e += 1
            ovf_nxt[ovf_top] = ovf_head[u]
            ovf_dst[ovf_top] = v
            ovf_head[u] = ovf_top
            ovf_top += 1
            ovf_nxt[ovf_top] = ovf_head[v]
            ovf_dst[ovf_top] = u
            ovf_head[v] = ovf_top
            ovf_top += 1
            degv[u] += 1
            degv[v] += 1
            if coop[v]:
                ncoop[u] += 1
            if coop[u]:
                ncoop[v] += 1

    since_rebuild = 0
    for t in range(m0, n):
        since_rebuild += 1
        if since_rebuild >= EV_REBUILD:
            # fold overflow into a fresh CSR snapshot of the first e edges
            snap_ptr[0] = 0
            for v in range(n):
                snap_deg[v] = degv[v]
                snap_ptr[v + 1] = snap_ptr[v] + degv[v]
            fill = snap_ptr[:n].copy()
            for i in range(e):
                a = eu[i]
                b = ev[i]
                snap_dat[fill[a]] = b
                fill[a] += 1
                snap_dat[fill[b]] = a
                fill[b] += 1
            for v in range(n):
                ovf_head[v] = -1
            ovf_top = 0
            since_rebuild = 0
        # game rounds between arrivals: payoffs from cooperating neighbors,
        # then stochastic imitation of one random neighbor per node
        first_round = True
        for _ in range(rounds_per_step):
            for v in range(t):
                pay = ncoop[v] * (1.0 if coop[v] else temptation)
                fr[v] = pay
                if first_round:
                    f[v] = pay
                else:
                    f[v] += pay
            first_round = False
            nchanged = 0
            for v in range(t):
                kv = degv[v]
                if kv == 0:
                    continue
                idx = np.int64(rng.random() * kv)  # cheaper than integers()
                if idx >= kv:
                    idx = kv - 1
                w = _ev_neighbor(v, idx, snap_deg, snap_ptr,
                                 snap_dat, ovf_head, ovf_nxt, ovf_dst)
                if fr[w] > fr[v] and coop[w] != coop[v]:
                    kw = degv[w]
                    kmax = kv if kv > kw else kw
                    prob = (fr[w] - fr[v]) / (temptation * kmax)
                    if rng.random() < prob:
                        new_coop[v] = coop[w]
                        changed_buf[nchanged] = v
                        nchanged += 1
            for ci in range(nchanged):
                v = changed_buf[ci]
                coop[v] = new_coop[v]
                d = 1 if new_coop[v] else -1
                for i in range(snap_deg[v]):
                    ncoop[snap_dat[snap_ptr[v] + i]] += d
                it = ovf_head[v]
                while it != -1:
                    ncoop[ovf_dst[it]] += d
                    it = ovf_nxt[it]
        # attachment distribution over accumulated payoffs
        fsum = 0.0
        for v in range(t):
            fsum += f[v]
        acc = 0.0
        if fsum > 0.0:
            base = (1.0 - epsilon) / t
            scale = epsilon / fsum
            for v in range(t):
                acc += base + f[v] * scale
                cum[v] = acc
        else:
            step = 1.0 / t
            for v in range(t):
                acc += step
                cum[v] = acc
        picked = 0
        attempts = 0
        while picked < m:
            attempts += 1
            if attempts > 200 * m:
                z = rng.integers(0, t)  # uniform fallback, duplicates rejected
            else:
                r = rng.random() * acc
                z = np.searchsorted(cum[:t], r)
                if z >= t:
                    z = t - 1
            dup = False
            for q in range(picked):
                if chosen[q] == z:
                    dup = True
                    break
            if dup:
                continue
            chosen[picked] = z
            picked += 1
        coop[t] = 1 if rng.random() < coop_fraction else 0
        for q in range(m):
            z = chosen[q]
            eu[e] = z
            ev[e] = t
            e += 1
            ovf_nxt[ovf_top] = ovf_head[z]
            ovf_dst[ovf_top] = t
            ovf_head[z] = ovf_top
            ovf_top += 1
            ovf_nxt[ovf_top] = ovf_head[t]
            ovf_dst[ovf_top] = z
            ovf_head[t] = ovf_top
            ovf_top += 1
            degv[z] += 1
            degv[t] += 1
            if coop[t]:
                ncoop[z] += 1
            if coop[z]:
                ncoop[t] += 1
    return eu, ev


# ---------------------------------------------------------------------------
# detection local-move kernels (weighted CSR with separate self-loop array)

@njit(cache=True)
def louvain_local_moves(indptr, indices, weights, selfw, comm, order,
                        two_m, epsilon):
    """Repeated greedy modularity moves until a full pass makes none.

    `comm` is modified in place. Returns (gain_trace, n_moves, passes);
    gain_trace holds the modularity gain of every accepted move in order.
    A node moves only on a strictly positive gain; among equal gains the
    lowest community id wins.
    """
    n = len(indptr) - 1
    kw = np.empty(n, dtype=np.float64)
    for v in range(n):
        s = 2.0 * selfw[v]
        for i in range(indptr[v], indptr[v + 1]):
            s += weights[i]
        kw[v] = s
    ncomm = 0
    for v in range(n):
        if comm[v] + 1 > ncomm:
            ncomm = comm[v] + 1
    tot = np.zeros(ncomm, dtype=np.float64)
    for v in range(n):
        tot[comm[v]] += kw[v]
    w2c = np.zeros(ncomm, dtype=np.float64)
    touched = np.empty(n + 1, dtype=np.int64)
    cap = 4096
    trace = np.empty(cap, dtype=np.float64)
    mv_node = np.empty(cap, dtype=np.int64)
    mv_comm = np.empty(cap, dtype=np.int64)
    nmoves = 0
    passes = 0
    m = two_m / 2.0
    moved = True
    while moved:
        moved = False
        passes += 1
        for oi in range(n):
            v = order[oi]
            c0 = comm[v]
            ntouch = 0
            # weights from v to each neighboring community (v excluded)
            for i in range(indptr[v], indptr[v + 1]):
                w = indices[i]
                if w == v:
                    continue
                c = comm[w]
                if w2c[c] == 0.0:
                    touched[ntouch] = c
                    ntouch += 1
                w2c[c] += weights[i]
            if w2c[c0] == 0.0:
                touched[ntouch] = c0
                ntouch += 1
            tot[c0] -= kw[v]
            # score(c) = w_vc / m - kw_v * tot_c / (2 m^2); staying wins ties
            score0 = w2c[c0] / m - kw[v] * tot[c0] / (2.0 * m * m)
            best_c = c0
            best_score = score0
            for ti in range(ntouch):
                c = touched[ti]
                if c == c0:
                    continue
                score = w2c[c] / m - kw[v] * tot[c] / (2.0 * m * m)
                if score > best_score + epsilon:
                    best_score = score
                    best_c = c
                elif best_c != c0 and score > best_score - epsilon and c < best_c:
                    best_c = c
            if best_c != c0 and best_score - score0 > epsilon:
                comm[v] = best_c
                tot[best_c] += kw[v]
                if nmoves == cap:
                    cap *= 2
                    bigger = np.empty(cap, dtype=np.float64)
                    bigger[:nmoves] = trace
                    trace = bigger
                    bigger_n = np.empty(cap, dtype=np.int64)
                    bigger_n[:nmoves] = mv_node
                    mv_node = bigger_n
                    bigger_c = np.empty(cap, dtype=np.int64)
                    bigger_c[:nmoves] = mv_comm
                    mv_comm = bigger_c
                trace[nmoves] = best_score - score0
                mv_node[nmoves] = v
                mv_comm[nmoves] = best_c
                nmoves += 1
                moved = True
            else:
                tot[c0] += kw[v]
            for ti in range(ntouch):
                w2c[touched[ti]] = 0.0
    return trace[:nmoves], mv_node[:nmoves], mv_comm[:nmoves], nmoves, passes


@njit(cache=True, inline="always")
def _plogp(x):
    if x <= 0.0:
        return 0.0
    return x * np.log2(x)


@njit(cache=True)
def infomap_local_moves(indptr, indices, weights, selfw, pvis, comm, order,
                        two_m, epsilon):
    """Greedy map-equation moves until a full pass improves nothing.

    `pvis` carries node visit rates (sums of original k/2m masses).
    Returns (delta_trace, n_moves, passes); deltas are description-length
    drops (positive numbers, bits).
    """
    n = len(indptr) - 1
    ncomm = 0
    for v in range(n):
        if comm[v] + 1 > ncomm:
            ncomm = comm[v] + 1
    cut = np.zeros(ncomm, dtype=np.float64)     # exit probability q_i
    pmod = np.zeros(ncomm, dtype=np.float64)    # visit mass P_i
    for v in range(n):
        pmod[comm[v]] += pvis[v]
    for v in range(n):
        cv = comm[v]
        for i in range(indptr[v], indptr[v + 1]):
            w = indices[i]
            if comm[w] != cv:
                cut[cv] += weights[i]
    for c in range(ncomm):
        cut[c] /= two_m
    q = 0.0
    for c in range(ncomm):
        q += cut[c]
    w2c = np.zeros(ncomm, dtype=np.float64)
    touched = np.empty(n + 1, dtype=np.int64)
    cap = 4096
    trace = np.empty(cap, dtype=np.float64)
    nmoves = 0
    passes = 0
    moved = True
    while moved:
        moved = False
        passes += 1
        for oi in range(n):
            v = order[oi]
            c0 = comm[v]
            ntouch = 0
            ks = 2.0 * selfw[v]
            for i in range(indptr[v], indptr[v + 1]):
                w = indices[i]
                if w == v:
                    continue
                ks += weights[i]
                c = comm[w]
                if w2c[c] == 0.0:
                    touched[ntouch] = c
                    ntouch += 1
                w2c[c] += weights[i]
            if w2c[c0] == 0.0:
                touched[ntouch] = c0
                ntouch += 1
            kext = ks - 2.0 * selfw[v]  # total link weight to other nodes
            pv = pvis[v]
            # state with v removed from c0
            cut0_removed = cut[c0] - (kext - w2c[c0]) / two_m + w2c[c0] / two_m
            p0_removed = pmod[c0] - pv
            best_c = c0
            best_delta = 0.0
            for ti in range(ntouch):
                c = touched[ti]
                if c == c0:
                    continue
                newcut_c = cut[c] + (kext - w2c[c]) / two_m - w2c[c] / two_m
                newq = q + (cut0_removed - cut[c0]) + (newcut_c - cut[c])
                delta = (_plogp(newq) - _plogp(q)
                         - 2.0 * (_plogp(cut0_removed) - _plogp(cut[c0]))
                         - 2.0 * (_plogp(newcut_c) - _plogp(cut[c]))
                         + _plogp(cut0_removed + p0_removed)
                         - _plogp(cut[c0] + pmod[c0])
                         + _plogp(newcut_c + pmod[c] + pv)
                         - _plogp(cut[c] + pmod[c]))
                if delta < best_delta - epsilon:
                    best_delta = delta
                    best_c = c
                elif best_c != c0 and delta < best_delta + epsilon and c < best_c:
                    best_delta = min(best_delta, delta)
                    best_c = c
            if best_c != c0 and best_delta < -epsilon:
                c = best_c
                newcut_c = cut[c] + (kext - w2c[c]) / two_m - w2c[c] / two_m
                q = q + (cut0_removed - cut[c0]) + (newcut_c - cut[c])
                cut[c0] = cut0_removed
                pmod[c0] = p0_removed
                cut[c] = newcut_c
                pmod[c] += pv
                comm[v] = c
                if nmoves == cap:
                    cap *= 2
                    bigger = np.empty(cap, dtype=np.float64)
                    bigger[:nmoves] = trace
                    trace = bigger
                trace[nmoves] = -best_delta
                nmoves += 1
                moved = True
            for ti in range(ntouch):
                w2c[touched[ti]] = 0.0
    return trace[:nmoves], nmoves, passes
