"""Jitted numerical cores for encoding, log-MAP decoding, and block trials.

Everything here is nopython numba.  The log-MAP recursions use the exact
pairwise max* operator; the correction term is skipped only when it is
below double-precision resolution of the running sums, so posteriors agree
with direct probability-domain marginalization to well under 1e-9.
"""

import math
import warnings

import numpy as np

# harmless environment probe; TBB just falls back to another threading layer
warnings.filterwarnings("ignore", message="The TBB threading layer requires TBB version")

from numba import njit, prange

NEG = -1.0e30  # finite stand-in for log(0); exp(NEG - x) underflows to exactly 0
_REACHABLE = -1.0e29
_MAXSTAR_SKIP = 40.0  # log1p(exp(-40)) ~ 4e-18, invisible next to unit-scale metrics


@njit(cache=True, inline="always")
def _log2_int(v):
    out = 0
    while v > 1:
        v >>= 1
        out += 1
    return out


@njit(cache=True, inline="always")
def _maxstar(x, y):
    if x >= y:
        m, d = x, x - y
    else:
        m, d = y, y - x
    if d > _MAXSTAR_SKIP:
        return m
    return m + math.log1p(math.exp(-d))


@njit(cache=True, nogil=True)
def _spoke_girth_one(n, entries, cap, dist, parent, queue):
    """Girth of the ring-plus-spoke-chords graph via truncated BFS.

    Index shift by the vector size is an automorphism, so roots 0..s-1
    cover every cycle.  Matches the generic BFS girth routine exactly.
    """
    s = entries.shape[0]
    best = cap
    for root in range(s):
        for v in range(n):
            dist[v] = -1
        dist[root] = 0
        parent[root] = -1
        head = 0
        queue[0] = root
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u]
            if 2 * du >= best:
                break
            for which in range(3):
                if which == 0:
                    w = u + 1 if u + 1 < n else 0
                elif which == 1:
                    w = u - 1 if u > 0 else n - 1
                else:
                    w = (u + entries[u % s]) % n
                if dist[w] < 0:
                    dist[w] = du + 1
                    parent[w] = u
                    queue[tail] = w
                    tail += 1
                elif w != parent[u]:
                    cand = du + dist[w] + 1
                    if cand < best:
                        best = cand
    return best


@njit(cache=True, parallel=True)
def spoke_girth_batch(n, entries_mat):
    """Girths of many spoke-vector graphs; row-parallel and thread-count invariant."""
    rows = entries_mat.shape[0]
    out = np.empty(rows, np.int64)
    for r in prange(rows):
        dist = np.empty(n, np.int64)
        parent = np.empty(n, np.int64)
        queue = np.empty(n, np.int64)
        out[r] = _spoke_girth_one(n, entries_mat[r], n, dist, parent, queue)
    return out


@njit(cache=True, nogil=True)
def _spoke_dsum_one(n, entries, dist, parent, queue):
    """Exact summary distance of a spoke-vector interleaver.

    Contracting the zero-weight crossing edges of the interleaver graph
    (a perfect matching, and the permutation is an involution) leaves a
    4-regular multigraph on n vertices whose girth is the minimum solid
    count: vertex i has ring neighbors i+-1 and, through the lower chain,
    pi(pi(i)+-1).  Parallel neighbor slots are a 2-solid-edge cycle.
    """
    s = entries.shape[0]
    best = n  # some pair of crossings always closes with fewer solid edges
    nb = np.empty(4, np.int64)
    for root in range(s):
        if best == 2:
            break
        for v in range(n):
            dist[v] = -1
        dist[root] = 0
        parent[root] = -1
        head = 0
        queue[0] = root
        tail = 1
        while head < tail and best > 2:
            u = queue[head]
            head += 1
            du = dist[u]
            if 2 * du >= best:
                break
            pu = (u + entries[u % s]) % n
            nb[0] = u + 1 if u + 1 < n else 0
            nb[1] = u - 1 if u > 0 else n - 1
            lo = pu + 1 if pu + 1 < n else 0
            hi = pu - 1 if pu > 0 else n - 1
            nb[2] = (lo + entries[lo % s]) % n
            nb[3] = (hi + entries[hi % s]) % n
            for a in range(4):
                w = nb[a]
                dup = False
                for b in range(a):
                    if nb[b] == w:
                        dup = True
                        break
                if dup:
                    # parallel pair of solid runs between u and w: a 2-cycle
                    best = 2
                    break
                if dist[w] < 0:
                    dist[w] = du + 1
                    parent[w] = u
                    queue[tail] = w
                    tail += 1
                elif w != parent[u]:
                    cand = du + dist[w] + 1
                    if cand < best:
                        best = cand
    return best


@njit(cache=True, parallel=True)
def spoke_dsum_batch(n, entries_mat):
    """Summary distances of many spoke-vector interleavers, row-parallel."""
    rows = entries_mat.shape[0]
    out = np.empty(rows, np.int64)
    for r in prange(rows):
        dist = np.empty(n, np.int64)
        parent = np.empty(n, np.int64)
        queue = np.empty(n, np.int64)
        out[r] = _spoke_dsum_one(n, entries_mat[r], dist, parent, queue)
    return out


@njit(cache=True, nogil=True)
def rsc_scan(bits, next_state, parity, term_in, terminate):
    """Run the recursive systematic encoder; returns parity, tail pair, final state."""
    n = bits.shape[0]
    memory = _log2_int(term_in.shape[0])
    par = np.empty(n, np.int8)
    state = 0
    for t in range(n):
        u = int(bits[t])
        par[t] = parity[u, state]
        state = next_state[u, state]
    n_tail = memory if terminate else 0
    tail_u = np.empty(n_tail, np.int8)
    tail_p = np.empty(n_tail, np.int8)
    for t in range(n_tail):
        u = int(term_in[state])
        tail_u[t] = u
        tail_p[t] = parity[u, state]
        state = next_state[u, state]
    return par, tail_u, tail_p, state


@njit(cache=True, nogil=True)
def pccc_core(bits, pi, next_state, parity, term_in):
    """Rate-1/3 parallel concatenation: per-bit triples, then encoder-1 tail pairs."""
    n = bits.shape[0]
    memory = _log2_int(term_in.shape[0])
    par1, tail_u, tail_p, _ = rsc_scan(bits, next_state, parity, term_in, True)
    bits2 = np.empty(n, np.int8)
    for t in range(n):
        bits2[t] = bits[pi[t]]
    par2, _, _, _ = rsc_scan(bits2, next_state, parity, term_in, False)
    cw = np.empty(3 * n + 2 * memory, np.int8)
    for t in range(n):
        cw[3 * t] = bits[t]
        cw[3 * t + 1] = par1[t]
        cw[3 * t + 2] = par2[t]
    for t in range(memory):
        cw[3 * n + 2 * t] = tail_u[t]
        cw[3 * n + 2 * t + 1] = tail_p[t]
    return cw


@njit(cache=True, nogil=True)
def bcjr_core(sys_llr, par_llr, prior, next_state, parity, term_in, n_info, terminated):
    """Exact log-domain forward/backward pass; returns posterior LLRs per info bit.

    sys_llr and par_llr cover n_info steps plus, when terminated, one tail
    step per memory element with the input pinned to the terminating bit.
    Positive LLRs favor bit 0.  State metrics are renormalized in place at
    fixed intervals; the shift cancels in the posterior differences.
    """
    T = sys_llr.shape[0]
    S = next_state.shape[1]
    alpha = np.empty((T + 1, S))
    for s in range(S):
        alpha[0, s] = NEG
    alpha[0, 0] = 0.0

    for t in range(T):
        ls = sys_llr[t] + (prior[t] if t < n_info else 0.0)
        lp = par_llr[t]
        tail = terminated and t >= n_info
        for s in range(S):
            alpha[t + 1, s] = NEG
        for s in range(S):
            a = alpha[t, s]
            if a < _REACHABLE:
                continue
            if tail:
                u = int(term_in[s])
                p = parity[u, s]
                ns = next_state[u, s]
                g = 0.5 * ((1.0 - 2.0 * u) * ls + (1.0 - 2.0 * p) * lp)
                alpha[t + 1, ns] = _maxstar(alpha[t + 1, ns], a + g)
            else:
                for u in range(2):
                    p = parity[u, s]
                    ns = next_state[u, s]
                    g = 0.5 * ((1.0 - 2.0 * u) * ls + (1.0 - 2.0 * p) * lp)
                    alpha[t + 1, ns] = _maxstar(alpha[t + 1, ns], a + g)
        if t & 31 == 31:
            mx = alpha[t + 1, 0]
            for s in range(1, S):
                if alpha[t + 1, s] > mx:
                    mx = alpha[t + 1, s]
            for s in range(S):
                alpha[t + 1, s] -= mx

    beta = np.empty(S)
    beta_new = np.empty(S)
    if terminated:
        for s in range(S):
            beta[s] = NEG
        beta[0] = 0.0
    else:
        for s in range(S):
            beta[s] = 0.0

    post = np.empty(n_info)
    for t in range(T - 1, -1, -1):
        ls = sys_llr[t] + (prior[t] if t < n_info else 0.0)
        lp = par_llr[t]
        tail = terminated and t >= n_info
        num = NEG
        den = NEG
        for s in range(S):
            if tail:
                u = int(term_in[s])
                p = parity[u, s]
                ns = next_state[u, s]
                g = 0.5 * ((1.0 - 2.0 * u) * ls + (1.0 - 2.0 * p) * lp)
                beta_new[s] = g + beta[ns]  # single admissible branch
            else:
                p0 = parity[0, s]
                ns0 = next_state[0, s]
                g0 = 0.5 * (ls + (1.0 - 2.0 * p0) * lp)
                p1 = parity[1, s]
                ns1 = next_state[1, s]
                g1 = 0.5 * (-ls + (1.0 - 2.0 * p1) * lp)
                v0 = g0 + beta[ns0]
                v1 = g1 + beta[ns1]
                beta_new[s] = _maxstar(v0, v1)
                a = alpha[t, s]
                if a >= _REACHABLE:
                    num = _maxstar(num, a + v0)
                    den = _maxstar(den, a + v1)
        if not tail:
            post[t] = num - den
        for s in range(S):
            beta[s] = beta_new[s]
        if t & 31 == 0:
            mx = beta[0]
            for s in range(1, S):
                if beta[s] > mx:
                    mx = beta[s]
            for s in range(S):
                beta[s] -= mx
    return post


@njit(cache=True, nogil=True)
def turbo_core(sys_full, par1_full, par2, pi, iterations, next_state, parity, term_in):
    """Iterative extrinsic exchange; hard decisions from decoder 2's posteriors.

    Decoder 1 sees the terminated trellis (tail LLRs appended to sys/par1);
    decoder 2 runs open.  The same index table interleaves extrinsics going
    in and scatters them coming back, so arbitrary permutations work and
    involutions need no second table.
    """
    n = pi.shape[0]
    sys2 = np.empty(n)
    for t in range(n):
        sys2[t] = sys_full[pi[t]]
    ext2_deint = np.zeros(n)
    prior2 = np.empty(n)
    post2 = np.zeros(n)
    for _ in range(iterations):
        post1 = bcjr_core(
            sys_full, par1_full, ext2_deint, next_state, parity, term_in, n, True
        )
        for t in range(n):
            j = pi[t]
            prior2[t] = post1[j] - ext2_deint[j] - sys_full[j]
        post2 = bcjr_core(sys2, par2, prior2, next_state, parity, term_in, n, False)
        for t in range(n):
            ext2_deint[pi[t]] = post2[t] - prior2[t] - sys2[t]
    decoded = np.empty(n, np.int8)
    for t in range(n):
        decoded[pi[t]] = 0 if post2[t] >= 0.0 else 1
    return decoded


@njit(cache=True, parallel=True)
def simulate_chunk(
    bits_mat, z_mat, sigma, llr_scale, pi, iterations, next_state, parity, term_in
):
    """Encode, corrupt, and decode a batch of blocks; per-block error counts.

    Blocks are fully independent and write disjoint outputs, so results do
    not depend on the number of threads.
    """
    B = bits_mat.shape[0]
    n = pi.shape[0]
    memory = _log2_int(term_in.shape[0])
    cw_len = 3 * n + 2 * memory
    bit_err = np.zeros(B, np.int64)
    frame_err = np.zeros(B, np.int64)
    for b in prange(B):
        bits = bits_mat[b]
        cw = pccc_core(bits, pi, next_state, parity, term_in)
        llr = np.empty(cw_len)
        for t in range(cw_len):
            x = 1.0 - 2.0 * cw[t]
            llr[t] = llr_scale * (x + sigma * z_mat[b, t])
        sys_full = np.empty(n + memory)
        par1_full = np.empty(n + memory)
        par2 = np.empty(n)
        for t in range(n):
            sys_full[t] = llr[3 * t]
            par1_full[t] = llr[3 * t + 1]
            par2[t] = llr[3 * t + 2]
        for t in range(memory):
            sys_full[n + t] = llr[3 * n + 2 * t]
            par1_full[n + t] = llr[3 * n + 2 * t + 1]
        decoded = turbo_core(
            sys_full, par1_full, par2, pi, iterations, next_state, parity, term_in
        )
        errs = 0
        for t in range(n):
            if decoded[t] != bits[t]:
                errs += 1
        bit_err[b] = errs
        frame_err[b] = 1 if errs > 0 else 0
    return bit_err, frame_err
