"""Compiled inner loops for refinement and Version II initial colors.

All hashes are pairs of 64-bit values.  A multiset of substitution codes is
hashed as the wrapping sum of a strong mix of each code, which is order
independent; the count-free variant deduplicates first.  Hash pairs are only
used to group equal signatures, never as color names.
"""

import numpy as np
from numba import njit

M1 = np.uint64(0xBF58476D1CE4E5B9)
M2 = np.uint64(0x94D049BB133111EB)
SALT_A = np.uint64(0x9E3779B97F4A7C15)
SALT_B = np.uint64(0xD6E8FEB86659FD93)
SALT_C = np.uint64(0xA0761D6478BD642F)
POLY_A = np.uint64(0x100000001B3)
POLY_B = np.uint64(0xC2B2AE3D27D4EB4F)
M3 = np.uint64(0xFF51AFD7ED558CCD)


@njit(cache=True, inline="always")
def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * M1
    z = (z ^ (z >> np.uint64(27))) * M2
    return z ^ (z >> np.uint64(31))


@njit(cache=True, inline="always")
def _second(h):
    return (h ^ (h >> np.uint64(32))) * M3


@njit(cache=True)
def refine_tuples(colors, moved, n, k, n_classes, counting, exact):
    """Signature hashes of every k-tuple for one refinement round.

    ``colors`` is the flattened (n,)*k id array.  ``moved[i]`` is the same
    array with axis i moved last, so every substitution run
    t(i/x), x = 0..n-1, is a contiguous slice.  For tuple t and each x the
    substitution code packs the ids of t(i/x) for i < k in tuple order,
    ``bits`` bits each when ``exact``.  The second hash of a code is one more
    xorshift-multiply of its first, which keeps the inner loop at three
    multiplies.
    """
    total = colors.shape[0]
    out1 = np.empty(total, dtype=np.uint64)
    out2 = np.empty(total, dtype=np.uint64)
    digits = np.empty(k, dtype=np.int64)
    offsets = np.empty(k, dtype=np.int64)
    buf = np.empty(n, dtype=np.uint64)
    width = 1
    while (1 << width) < n_classes:
        width += 1
    bits = np.uint64(width)
    bits2 = np.uint64(2 * width)
    size = 4
    while size < 2 * n:
        size *= 2
    seen = np.zeros(size, dtype=np.uint64)
    used = np.zeros(size, dtype=np.bool_)
    slots = np.empty(n, dtype=np.int64)
    mask = np.uint64(size - 1)
    imask = np.int64(size - 1)
    for t in range(total):
        rem = t
        for i in range(k - 1, -1, -1):
            digits[i] = rem % n
            rem //= n
        for i in range(k):
            off = 0
            for j in range(k):
                if j != i:
                    off = off * n + digits[j]
            offsets[i] = off * n
        if k == 3 and exact:
            r0 = moved[0, offsets[0] : offsets[0] + n]
            r1 = moved[1, offsets[1] : offsets[1] + n]
            r2 = moved[2, offsets[2] : offsets[2] + n]
            for x in range(n):
                buf[x] = (np.uint64(r0[x]) << bits2) | (np.uint64(r1[x]) << bits) | np.uint64(r2[x])
        else:
            for x in range(n):
                code = np.uint64(0)
                for i in range(k):
                    c = np.uint64(moved[i, offsets[i] + x])
                    if exact:
                        code = (code << bits) | c
                    else:
                        code = _mix(code ^ (c + SALT_C))
                buf[x] = code
        s1 = np.uint64(0)
        s2 = np.uint64(0)
        if counting:
            for x in range(n):
                h = _mix(buf[x] + SALT_A)
                s1 += h
                s2 += _second(h)
        else:
            # set semantics: open-addressing dedup, slots cleared afterwards
            filled = 0
            for x in range(n):
                code = buf[x]
                hv = _mix(code + SALT_A)
                slot = np.int64(hv & mask)
                while used[slot] and seen[slot] != code:
                    slot = (slot + 1) & imask
                if not used[slot]:
                    used[slot] = True
                    seen[slot] = code
                    slots[filled] = slot
                    filled += 1
                    s1 += hv
                    s2 += _second(hv)
            for i in range(filled):
                used[slots[i]] = False
        old = np.uint64(colors[t])
        out1[t] = _mix(s1 ^ _mix(old + SALT_B))
        out2[t] = _mix(s2 + _mix(old ^ SALT_A))
    return out1, out2


@njit(cache=True)
def marked_types(table, k):
    """Hash of the canonical enumeration of <g_1..g_k> for every k-tuple.

    Breadth-first over right multiplication by g_1..g_k in order, numbering
    elements by discovery.  The sequence of discovered numbers fixes the
    edge-labeled Cayley graph, hence the marked isomorphism type.
    """
    n = table.shape[0]
    total = n**k
    out1 = np.empty(total, dtype=np.uint64)
    out2 = np.empty(total, dtype=np.uint64)
    local = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    gens = np.empty(k, dtype=np.int64)
    for t in range(total):
        rem = t
        for i in range(k - 1, -1, -1):
            gens[i] = rem % n
            rem //= n
        local[0] = 0
        queue[0] = 0
        m = 1
        head = 0
        h1 = np.uint64(k)
        h2 = np.uint64(k)
        while head < m:
            e = queue[head]
            head += 1
            for j in range(k):
                f = table[e, gens[j]]
                if local[f] < 0:
                    local[f] = m
                    queue[m] = f
                    m += 1
                v = np.uint64(local[f] + 1)
                h1 = h1 * POLY_A + v
                h2 = h2 * POLY_B + v
        out1[t] = _mix(h1 ^ np.uint64(m))
        out2[t] = _mix(h2 + np.uint64(m) * SALT_C)
        for i in range(m):
            local[queue[i]] = -1
    return out1, out2


@njit(cache=True)
def neighbor_refine(colors, indptr, indices, counting):
    """One round of classical color refinement over adjacency lists."""
    nv = colors.shape[0]
    out1 = np.empty(nv, dtype=np.uint64)
    out2 = np.empty(nv, dtype=np.uint64)
    for v in range(nv):
        lo, hi = indptr[v], indptr[v + 1]
        s1 = np.uint64(0)
        s2 = np.uint64(0)
        if counting:
            for p in range(lo, hi):
                c = np.uint64(colors[indices[p]])
                s1 += _mix(c + SALT_A)
                s2 += _mix(c ^ SALT_B)
        else:
            srt = np.sort(colors[indices[lo:hi]])
            for p in range(srt.shape[0]):
                if p == 0 or srt[p] != srt[p - 1]:
                    c = np.uint64(srt[p])
                    s1 += _mix(c + SALT_A)
                    s2 += _mix(c ^ SALT_B)
        old = np.uint64(colors[v])
        out1[v] = _mix(s1 ^ _mix(old + SALT_B))
        out2[v] = _mix(s2 + _mix(old ^ SALT_A))
    return out1, out2


@njit(cache=True)
def hash_rows(rows):
    """Position-dependent hash pair of each row of a 2-D int64 array."""
    r, c = rows.shape
    out1 = np.empty(r, dtype=np.uint64)
    out2 = np.empty(r, dtype=np.uint64)
    for i in range(r):
        h1 = np.uint64(c)
        h2 = np.uint64(c) ^ SALT_C
        for j in range(c):
            v = np.uint64(rows[i, j])
            h1 = _mix(h1 * POLY_A + v + SALT_A)
            h2 = h2 * POLY_B + _mix(v ^ SALT_B)
        out1[i] = h1
        out2[i] = _mix(h2)
    return out1, out2


@njit(cache=True)
def dedupe_pairs(h1, h2):
    """Group equal h1 values with an open-addressing table.

    Returns (first index per distinct value, group per entry, ok); ok is False
    when one h1 value occurs with two different h2 values.
    """
    m = h1.size
    size = 1
    while size < 2 * m + 2:
        size <<= 1
    mask = np.uint64(size - 1)
    slots = np.full(size, -1, dtype=np.int64)
    group = np.empty(m, dtype=np.int64)
    first = np.empty(m, dtype=np.int64)
    n_groups = 0
    for i in range(m):
        j = _mix(h1[i]) & mask
        while True:
            s = slots[j]
            if s < 0:
                slots[j] = n_groups
                first[n_groups] = i
                group[i] = n_groups
                n_groups += 1
                break
            f = first[s]
            if h1[f] == h1[i]:
                if h2[f] != h2[i]:
                    return first[:0], group, False
                group[i] = s
                break
            j = (j + np.uint64(1)) & mask
    return first[:n_groups], group, True


@njit(cache=True)
def preserves_products(G, H, phi):
    """phi[G[a, b]] == H[phi[a], phi[b]] for all a, b; stops at the first failure."""
    n = G.shape[0]
    for a in range(n):
        row = H[phi[a]]
        for b in range(n):
            if phi[G[a, b]] != row[phi[b]]:
                return False
    return True
