"""Numba kernels behind the hot paths: MRB frame reduction, BCJR
recursions, and the priority-first tree search. Pure array-in/array-out
functions; all public contracts live in the owning modules.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

NEG_INF = -1.0e308
LOG_FLOOR = -700.0


# ---------------------------------------------------------------------------
# GF(2): greedy most-reliable-basis selection + systematic reduction


@njit(cache=True)
def mrb_systematize(g, order):
    """Scan columns of g in the given order, greedily keep the first k
    linearly independent ones, and return (perm, gsys, ok) where perm lists
    original column indices (selected first, rest following, both preserving
    scan order) and gsys is row-reduced with an identity in the first k
    columns.
    """
    k, n = g.shape
    w = np.empty((k, n), dtype=np.uint8)
    for j in range(n):
        oj = order[j]
        for i in range(k):
            w[i, j] = g[i, oj]

    piv_cols = np.empty(k, dtype=np.int64)
    npiv = 0
    for c in range(n):
        if npiv == k:
            break
        piv = -1
        for r in range(npiv, k):
            if w[r, c]:
                piv = r
                break
        if piv < 0:
            continue
        if piv != npiv:
            for j in range(n):
                tmp = w[npiv, j]
                w[npiv, j] = w[piv, j]
                w[piv, j] = tmp
        for r in range(k):
            if r != npiv and w[r, c]:
                for j in range(n):
                    w[r, j] ^= w[npiv, j]
        piv_cols[npiv] = c
        npiv += 1

    perm = np.empty(n, dtype=np.int64)
    gsys = np.empty((k, n), dtype=np.uint8)
    if npiv < k:
        return perm, gsys, False

    selected = np.zeros(n, dtype=np.uint8)
    for i in range(k):
        selected[piv_cols[i]] = 1
    colmap = np.empty(n, dtype=np.int64)
    for i in range(k):
        colmap[i] = piv_cols[i]
    pos = k
    for c in range(n):
        if not selected[c]:
            colmap[pos] = c
            pos += 1
    for j in range(n):
        src = colmap[j]
        perm[j] = order[src]
        for i in range(k):
            gsys[i, j] = w[i, src]
    return perm, gsys, True


# ---------------------------------------------------------------------------
# BCJR (log domain, exact log-sum-exp)


@njit(inline="always")
def _lae(a, b):
    # log(e^a + e^b) with underflow floor; exact within double precision
    if a < b:
        a, b = b, a
    d = b - a
    if d < LOG_FLOOR:
        return a
    return a + math.log1p(math.exp(d))


@njit(cache=True)
def bcjr_llrs(r, sigma_sq, ns_table, obit_table):
    """Per-coded-bit posterior LLRs of an unterminated rate-1/2 trellis.

    r has 2 samples per section; forward starts in state 0, backward starts
    uniform. obit_table[s, u, b] gives output bit b of the (state, input)
    transition; ns_table[s, u] the successor state.
    """
    nsec = r.size // 2
    S = ns_table.shape[0]
    scale = 1.0 / sigma_sq

    gamma = np.empty((nsec, S, 2))
    for t in range(nsec):
        r0 = r[2 * t]
        r1 = r[2 * t + 1]
        for s in range(S):
            for u in range(2):
                s0 = 1.0 - 2.0 * obit_table[s, u, 0]
                s1 = 1.0 - 2.0 * obit_table[s, u, 1]
                gamma[t, s, u] = (r0 * s0 + r1 * s1) * scale

    alpha = np.full((nsec + 1, S), NEG_INF)
    alpha[0, 0] = 0.0
    for t in range(nsec):
        for s in range(S):
            a = alpha[t, s]
            if a <= NEG_INF:
                continue
            for u in range(2):
                ns = ns_table[s, u]
                v = a + gamma[t, s, u]
                if alpha[t + 1, ns] <= NEG_INF:
                    alpha[t + 1, ns] = v
                else:
                    alpha[t + 1, ns] = _lae(alpha[t + 1, ns], v)
        mx = NEG_INF
        for s in range(S):
            if alpha[t + 1, s] > mx:
                mx = alpha[t + 1, s]
        for s in range(S):
            if alpha[t + 1, s] > NEG_INF:
                alpha[t + 1, s] -= mx

    beta = np.zeros((nsec + 1, S))
    for t in range(nsec - 1, -1, -1):
        for s in range(S):
            acc = NEG_INF
            for u in range(2):
                v = gamma[t, s, u] + beta[t + 1, ns_table[s, u]]
                acc = v if acc <= NEG_INF else _lae(acc, v)
            beta[t, s] = acc
        mx = NEG_INF
        for s in range(S):
            if beta[t, s] > mx:
                mx = beta[t, s]
        for s in range(S):
            beta[t, s] -= mx

    llr = np.empty(r.size)
    for t in range(nsec):
        num0 = NEG_INF
        den0 = NEG_INF
        num1 = NEG_INF
        den1 = NEG_INF
        for s in range(S):
            a = alpha[t, s]
            if a <= NEG_INF:
                continue
            for u in range(2):
                v = a + gamma[t, s, u] + beta[t + 1, ns_table[s, u]]
                if obit_table[s, u, 0] == 0:
                    num0 = v if num0 <= NEG_INF else _lae(num0, v)
                else:
                    den0 = v if den0 <= NEG_INF else _lae(den0, v)
                if obit_table[s, u, 1] == 0:
                    num1 = v if num1 <= NEG_INF else _lae(num1, v)
                else:
                    den1 = v if den1 <= NEG_INF else _lae(den1, v)
        llr[2 * t] = num0 - den0
        llr[2 * t + 1] = num1 - den1
    return llr


# ---------------------------------------------------------------------------
# Priority-first search over the systematic code tree
#
# Nodes carry their message-flip lists directly (deviation budgets are
# small), so a goal's parity needs no parent walk: it is the packed
# hard-decision disagreement pattern XORed with the parity rows of the
# flipped positions. The hard-decision-agreeing child of every extension
# is walked inline: it would be placed on top of the stack and popped
# straight back, so only deviating children ever occupy stack slots. Edge
# and comparison counters still reflect the paper's per-child accounting.

POLICY_ORDERED = 0
POLICY_APPEND_BOTTOM = 1
CONSTRAINT_NONE = 0
CONSTRAINT_PC = 1
CONSTRAINT_PC_OUT = 2
STOP_NONE = 0
STOP_CODEWORD = 1
STOP_ALPHA = 2

_ONE = np.uint64(1)
_ZERO = np.uint64(0)


@njit(inline="always")
def _bit_index(b):
    # b is a single set bit in a uint64; powers of two convert exactly
    return int(math.log2(float(b)))


@njit(cache=True)
def _stop_check(stopping, d_min, alpha_thr, best_metric, best_flips, nbest,
                qbase, prow, wsort, w, k, nw, xw, agree):
    """Early-termination test for the current best codeword."""
    if stopping == STOP_ALPHA:
        return best_metric <= alpha_thr
    # codeword threshold: q = d_min - d_H(c, z); threshold sums the q
    # smallest weights over agreement positions
    n = w.size
    for j in range(n):
        agree[j] = 1
    for i in range(nbest):
        agree[best_flips[i]] = 0
    for t in range(nw):
        xw[t] = qbase[t]
    for i in range(nbest):
        fpos = best_flips[i]
        for t in range(nw):
            xw[t] ^= prow[fpos, t]
    dh = nbest
    for t in range(nw):
        x = xw[t]
        base = t << 6
        while x:
            b = x & (_ZERO - x)
            dh += 1
            agree[k + base + _bit_index(b)] = 0
            x ^= b
    q = d_min - dh
    if q <= 0:
        return best_metric <= 0.0
    thr = 0.0
    taken = 0
    for si in range(n):
        pos = wsort[si]
        if agree[pos]:
            thr += w[pos]
            taken += 1
            if taken == q:
                break
    return best_metric <= thr


@njit(cache=True)
def astar_search(
    w, z, pmat, wsort,
    policy, constraint, lam, capacity,
    stopping, d_min, alpha, disable_best_prune,
    record_goals, goal_devs, goal_lastflip,
    ametric, adepth, adev, aflips,
    s_metric, s_node, dq,
):
    """Core search over the permuted systematic code tree.

    w: per-position weights |r_hat|; z: hard decisions; pmat: parity part
    of the systematic generator (k rows, n-k columns). Returns
    (best_flips, nbest, best_metric, certified, edges, comparisons,
    dropped, ngoals, ok)."""
    n = w.size
    k = pmat.shape[0]
    nk = n - k
    nw = (nk + 63) >> 6
    max_nodes = ametric.shape[0]
    fw = aflips.shape[1]
    max_goals = goal_devs.size

    # pack parity rows; qbase = parity disagreement of the all-z message
    prow = np.zeros((k, nw), dtype=np.uint64)
    for i in range(k):
        for j in range(nk):
            if pmat[i, j]:
                prow[i, j >> 6] |= _ONE << np.uint64(j & 63)
    qbase = np.zeros(nw, dtype=np.uint64)
    for j in range(nk):
        if z[k + j]:
            qbase[j >> 6] |= _ONE << np.uint64(j & 63)
    for i in range(k):
        if z[i]:
            for t in range(nw):
                qbase[t] ^= prow[i, t]

    wsum = 0.0
    for j in range(n):
        wsum += w[j]
    alpha_thr = alpha * wsum

    best_metric = np.inf
    best_flips = np.full(fw, -1, dtype=np.int16)
    nbest = 0
    certified = False
    edges = 0
    comparisons = 0
    dropped = 0
    ngoals = 0

    xw = np.empty(nw, dtype=np.uint64)
    agree = np.empty(n, dtype=np.uint8)
    chain_flips = np.empty(fw, dtype=np.int16)

    buflen = s_metric.size
    head = 0
    tail = 0
    dq_cap = dq.size
    dq_head = 0
    dq_size = 0

    # PC-out with budget 0 degenerates to re-encoding the hard decision
    if constraint == CONSTRAINT_PC_OUT and lam == 0:
        met = 0.0
        for t in range(nw):
            x = qbase[t]
            base = t << 6
            while x:
                b = x & (_ZERO - x)
                met += w[k + base + _bit_index(b)]
                x ^= b
        if record_goals and max_goals > 0:
            goal_devs[0] = 0
            goal_lastflip[0] = 0
        return best_flips, 0, met, False, 1, 0, 0, 1, True

    nnodes = 0
    have_chain = True
    chain_metric = 0.0
    chain_depth = 0
    chain_dev = 0
    chain_nflips = 0
    stop_now = False

    while not stop_now:
        if not have_chain:
            if policy == POLICY_ORDERED:
                if head >= tail:
                    break
                nid = s_node[head]
                head += 1
            else:
                if dq_size == 0:
                    break
                nid = dq[dq_head]
                dq_head = (dq_head + 1) % dq_cap
                dq_size -= 1
                # lazy emulation of "delete stack nodes once the incumbent
                # overtakes them"; not a counted comparison (the counter
                # follows the per-child accounting of the two stack designs)
                if not disable_best_prune and ametric[nid] >= best_metric:
                    continue
            chain_metric = ametric[nid]
            chain_depth = adepth[nid]
            chain_dev = adev[nid]
            chain_nflips = chain_dev  # one flip per deviation, by construction
            for i in range(chain_nflips):
                chain_flips[i] = aflips[nid, i]
            have_chain = True

        # walk the hard-decision path from chain_depth, spawning the
        # deviating sibling at each level
        m = chain_metric
        dev = chain_dev
        depth = chain_depth
        while True:
            if depth == k - 1:
                for gi in range(2):
                    if gi == 1 and constraint == CONSTRAINT_PC and dev + 1 > lam:
                        continue
                    edges += 1
                    gm = m if gi == 0 else m + w[k - 1]
                    gdev = dev if gi == 0 else dev + 1
                    if record_goals and ngoals < max_goals:
                        goal_devs[ngoals] = gdev
                        goal_lastflip[ngoals] = gi
                    ngoals += 1
                    for t in range(nw):
                        xw[t] = qbase[t]
                    for i in range(chain_nflips):
                        fpos = chain_flips[i]
                        for t in range(nw):
                            xw[t] ^= prow[fpos, t]
                    if gi == 1:
                        for t in range(nw):
                            xw[t] ^= prow[k - 1, t]
                    met = gm
                    beaten = False
                    for t in range(nw):
                        x = xw[t]
                        base = t << 6
                        while x:
                            b = x & (_ZERO - x)
                            met += w[k + base + _bit_index(b)]
                            x ^= b
                            if met >= best_metric and not disable_best_prune:
                                beaten = True
                                break
                        if beaten:
                            break
                    comparisons += 1
                    if not beaten and met < best_metric:
                        best_metric = met
                        nbest = chain_nflips
                        for i in range(chain_nflips):
                            best_flips[i] = chain_flips[i]
                        if gi == 1:
                            best_flips[nbest] = k - 1
                            nbest += 1
                        if policy == POLICY_ORDERED and not disable_best_prune:
                            lo = head
                            hi = tail
                            while lo < hi:
                                mid = (lo + hi) // 2
                                comparisons += 1
                                if s_metric[mid] > best_metric:
                                    hi = mid
                                else:
                                    lo = mid + 1
                            tail = lo
                        if stopping != STOP_NONE and _stop_check(
                                stopping, d_min, alpha_thr, best_metric,
                                best_flips, nbest, qbase, prow, wsort,
                                w, k, nw, xw, agree):
                            certified = True
                            stop_now = True
                            break
                have_chain = False
                break

            cm = m + w[depth]
            cdev = dev + 1
            allowed = not (constraint != CONSTRAINT_NONE and cdev > lam)

            if allowed and constraint == CONSTRAINT_PC_OUT and cdev == lam:
                # complete immediately with hard-decision fill
                edges += 1
                comparisons += 1
                if disable_best_prune or cm < best_metric:
                    if record_goals and ngoals < max_goals:
                        goal_devs[ngoals] = cdev
                        goal_lastflip[ngoals] = 0
                    ngoals += 1
                    for t in range(nw):
                        xw[t] = qbase[t]
                    for i in range(chain_nflips):
                        fpos = chain_flips[i]
                        for t in range(nw):
                            xw[t] ^= prow[fpos, t]
                    for t in range(nw):
                        xw[t] ^= prow[depth, t]
                    met = cm
                    beaten = False
                    for t in range(nw):
                        x = xw[t]
                        base = t << 6
                        while x:
                            b = x & (_ZERO - x)
                            met += w[k + base + _bit_index(b)]
                            x ^= b
                            if met >= best_metric and not disable_best_prune:
                                beaten = True
                                break
                        if beaten:
                            break
                    comparisons += 1
                    if not beaten and met < best_metric:
                        best_metric = met
                        nbest = chain_nflips
                        for i in range(chain_nflips):
                            best_flips[i] = chain_flips[i]
                        best_flips[nbest] = depth
                        nbest += 1
                        if policy == POLICY_ORDERED and not disable_best_prune:
                            lo = head
                            hi = tail
                            while lo < hi:
                                mid = (lo + hi) // 2
                                comparisons += 1
                                if s_metric[mid] > best_metric:
                                    hi = mid
                                else:
                                    lo = mid + 1
                            tail = lo
                        if stopping != STOP_NONE and _stop_check(
                                stopping, d_min, alpha_thr, best_metric,
                                best_flips, nbest, qbase, prow, wsort,
                                w, k, nw, xw, agree):
                            certified = True
                            stop_now = True
                            break
            elif allowed:
                edges += 1
                keep = True
                if not disable_best_prune:
                    comparisons += 1
                    if cm >= best_metric:
                        keep = False
                if keep:
                    if nnodes >= max_nodes:
                        dropped += 1
                    else:
                        cid = nnodes
                        ametric[cid] = cm
                        adepth[cid] = depth + 1
                        adev[cid] = cdev
                        for i in range(chain_nflips):
                            aflips[cid, i] = chain_flips[i]
                        aflips[cid, chain_nflips] = depth
                        nnodes += 1
                        if policy == POLICY_ORDERED:
                            lo = head
                            hi = tail
                            while lo < hi:
                                mid = (lo + hi) // 2
                                comparisons += 1
                                if s_metric[mid] <= cm:
                                    lo = mid + 1
                                else:
                                    hi = mid
                            left = lo - head
                            right = tail - lo
                            if head > 0 and (left <= right or tail >= buflen):
                                for idx in range(head, lo):
                                    s_metric[idx - 1] = s_metric[idx]
                                    s_node[idx - 1] = s_node[idx]
                                head -= 1
                                s_metric[lo - 1] = cm
                                s_node[lo - 1] = cid
                            else:
                                for idx in range(tail, lo, -1):
                                    s_metric[idx] = s_metric[idx - 1]
                                    s_node[idx] = s_node[idx - 1]
                                s_metric[lo] = cm
                                s_node[lo] = cid
                                tail += 1
                            if tail - head > capacity:
                                tail -= 1
                                dropped += 1
                        else:
                            if dq_size >= capacity:
                                dropped += 1
                            else:
                                dq[(dq_head + dq_size) % dq_cap] = cid
                                dq_size += 1

            # descend the hard-decision edge; drop the walk once the
            # incumbent overtakes it (the stack-resident equivalent would be
            # pruned/truncated at this metric; uncounted, like the prunes)
            edges += 1
            depth += 1
            if not disable_best_prune:
                if policy == POLICY_APPEND_BOTTOM:
                    if m >= best_metric:
                        have_chain = False
                        break
                elif m > best_metric:
                    have_chain = False
                    break

    ok = best_metric < np.inf
    return best_flips, nbest, best_metric, certified, edges, comparisons, dropped, ngoals, ok
