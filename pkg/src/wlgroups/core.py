"""Cayley-table groups and the elementary primitives built on them.

A group of order n is an n x n int32 array ``table`` with ``table[i, j]`` the
index of the product of elements i and j.  The identity is always index 0.
Tables are immutable once wrapped in :class:`CayleyTable`, so derived data
(inverses, orders, ...) is cached on the instance.
"""

from collections import deque

import numpy as np

from . import _kernels
from .errors import (
    EntryOutOfRange,
    IdentityMoved,
    InvalidAction,
    NoIdentityAtZero,
    NotAPermutation,
    NotAssociative,
    NotLatinSquare,
    OrderCapExceeded,
)

ORDER_CAP = 5040


def _frozen(arr, dtype=np.int32):
    out = np.array(arr, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


class CayleyTable:
    """A validated finite group. Build through :func:`validate_group` or a constructor."""

    __slots__ = ("table", "label", "_cache")

    def __init__(self, table, label=""):
        self.table = _frozen(table)
        self.label = label
        self._cache = {}

    @property
    def n(self):
        return self.table.shape[0]

    def __len__(self):
        return self.n

    def __eq__(self, other):
        return isinstance(other, CayleyTable) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        tag = f" {self.label!r}" if self.label else ""
        return f"<CayleyTable n={self.n}{tag}>"

    def mul(self, a, b):
        return int(self.table[a, b])

    def cached(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @property
    def inverses(self):
        return self.cached("inv", lambda: _frozen(np.argmin(self.table, axis=1)))

    @property
    def orders(self):
        return self.cached("orders", lambda: _frozen(_element_orders(self.table)))

    def is_abelian(self):
        return self.cached("abelian", lambda: bool(np.array_equal(self.table, self.table.T)))


class ElementSet:
    """Subset of a group's elements, stored as a boolean mask."""

    __slots__ = ("mask", "subgroup")

    def __init__(self, mask, subgroup=False):
        self.mask = _frozen(mask, dtype=bool)
        self.subgroup = subgroup

    @classmethod
    def of(cls, n, elements=(), subgroup=False):
        mask = np.zeros(n, dtype=bool)
        mask[np.asarray(list(elements) if not isinstance(elements, np.ndarray) else elements,
                        dtype=np.int64)] = True
        return cls(mask, subgroup)

    @classmethod
    def full(cls, n):
        return cls(np.ones(n, dtype=bool), True)

    @property
    def n(self):
        return self.mask.shape[0]

    @property
    def elements(self):
        return np.flatnonzero(self.mask)

    def __len__(self):
        return int(self.mask.sum())

    def __contains__(self, g):
        return bool(self.mask[g])

    def __iter__(self):
        return iter(int(g) for g in self.elements)

    def __eq__(self, other):
        return isinstance(other, ElementSet) and np.array_equal(self.mask, other.mask)

    def __hash__(self):
        return hash(np.packbits(self.mask).tobytes())

    def __le__(self, other):
        return bool(np.all(other.mask[self.mask]))

    def __repr__(self):
        kind = "subgroup" if self.subgroup else "set"
        return f"<ElementSet {kind} {len(self)}/{self.n}>"

    def image(self, perm):
        mask = np.zeros(self.n, dtype=bool)
        mask[np.asarray(perm)[self.mask]] = True
        return ElementSet(mask, self.subgroup)


class Action:
    """A homomorphism H -> Aut(N), stored as one permutation of N per element of H.

    ``images[a][images[b]] == images[a*b]``, which is the composition rule that
    makes the semidirect product below associative.
    """

    __slots__ = ("H", "N", "images")

    def __init__(self, H, N, images):
        images = np.asarray(images, dtype=np.int64)
        if images.shape != (H.n, N.n):
            raise InvalidAction(f"expected {H.n} permutations of length {N.n}")
        _check_action(H, N, images)
        self.H, self.N = H, N
        self.images = _frozen(images)

    @classmethod
    def trivial(cls, H, N):
        return cls(H, N, np.tile(np.arange(N.n), (H.n, 1)))

    @classmethod
    def from_generators(cls, H, N, gens, gen_images):
        """Extend generator images (permutations of N) to all of H."""
        gens = [int(g) for g in gens]
        perms = [np.asarray(p, dtype=np.int64) for p in gen_images]
        if len(gens) != len(perms):
            raise InvalidAction("one permutation per generator required")
        for p in perms:
            if p.shape != (N.n,) or not _is_permutation(p):
                raise InvalidAction("generator image is not a permutation of N")
        images = np.full((H.n, N.n), -1, dtype=np.int64)
        images[0] = np.arange(N.n)
        tree = word_tree(H, gens)
        for nodes, parents, which in tree.levels:
            for node, parent, w in zip(nodes, parents, which):
                images[node] = images[parent][perms[w]]
        if (images < 0).any():
            raise InvalidAction("generators do not generate H")
        return cls(H, N, images)


def _is_permutation(p):
    n = len(p)
    if n == 0:
        return True
    if p.min() < 0 or p.max() >= n:
        return False
    return np.unique(p).size == n


def _check_action(H, N, images):
    TN, TH = N.table, H.table
    for h, perm in enumerate(images):
        if not _is_permutation(perm):
            raise InvalidAction(f"image of {h} is not a permutation")
        if not np.array_equal(perm[TN], TN[np.ix_(perm, perm)]):
            raise InvalidAction(f"image of {h} is not an automorphism of N")
    if not np.array_equal(images[0], np.arange(N.n)):
        raise InvalidAction("identity of H must act trivially")
    # images[a*b] == images[a] o images[b]
    composed = np.take_along_axis(
        np.broadcast_to(images[:, None, :], (H.n, H.n, N.n)),
        np.broadcast_to(images[None, :, :], (H.n, H.n, N.n)),
        axis=2,
    )
    if not np.array_equal(images[TH], composed):
        raise InvalidAction("map is not a homomorphism H -> Aut(N)")


# ---------------------------------------------------------------- validation


def _magma_generators(T):
    """Small set A whose closure under the (not yet known associative) product is everything."""
    n = T.shape[0]
    inside = np.zeros(n, dtype=bool)
    inside[0] = True
    gens = []
    while not inside.all():
        g = int(np.argmin(inside))
        gens.append(g)
        inside[g] = True
        while True:
            members = np.flatnonzero(inside)
            prods = T[np.ix_(members, members)].ravel()
            fresh = ~inside[prods]
            if not fresh.any():
                break
            inside[prods[fresh]] = True
    return gens


def validate_group(raw, label=""):
    """Check every group axiom on a raw table; return a :class:`CayleyTable`.

    Associativity uses Light's test: elements ``a`` with ``(x a) y == x (a y)``
    for all x, y form a submagma, so checking a magma generating set suffices.
    """
    T = np.asarray(raw)
    if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] == 0:
        raise NotLatinSquare("table must be a non-empty square matrix")
    if not np.issubdtype(T.dtype, np.integer):
        raise EntryOutOfRange("entries must be integers")
    n = T.shape[0]
    if T.min() < 0 or T.max() >= n:
        bad = np.argwhere((T < 0) | (T >= n))[0]
        raise EntryOutOfRange(f"entry at {tuple(int(v) for v in bad)} outside [0, {n})")
    T = T.astype(np.int64)
    ref = np.arange(n)
    rows_ok = (np.sort(T, axis=1) == ref).all(axis=1)
    cols_ok = (np.sort(T, axis=0) == ref[:, None]).all(axis=0)
    if not rows_ok.all():
        raise NotLatinSquare(f"row {int(np.argmin(rows_ok))} repeats an entry")
    if not cols_ok.all():
        raise NotLatinSquare(f"column {int(np.argmin(cols_ok))} repeats an entry")
    if not (np.array_equal(T[0], ref) and np.array_equal(T[:, 0], ref)):
        ids = [e for e in range(n) if np.array_equal(T[e], ref) and np.array_equal(T[:, e], ref)]
        if ids:
            raise NoIdentityAtZero(ids[0])
        raise NotLatinSquare("no two-sided identity element")
    for a in _magma_generators(T):
        left = T[T[:, a], :]
        right = T[:, T[a, :]]
        if not np.array_equal(left, right):
            x, y = np.argwhere(left != right)[0]
            raise NotAssociative(int(x), int(a), int(y))
    inv = np.argmin(T, axis=1)
    if not ((T[ref, inv] == 0).all() and (T[inv, ref] == 0).all()):
        raise NotLatinSquare("some element lacks a two-sided inverse")
    return CayleyTable(T, label)


def _element_orders(T):
    n = T.shape[0]
    idx = np.arange(n)
    orders = np.zeros(n, dtype=np.int64)
    power = idx.copy()
    m = 1
    pending = np.ones(n, dtype=bool)
    while pending.any():
        done = pending & (power == 0)
        orders[done] = m
        pending &= ~done
        power = T[power, idx]
        m += 1
    return orders


def element_order(G, g):
    return int(G.orders[g])


# -------------------------------------------------------------- constructors


def _check_cap(n, cap):
    cap = ORDER_CAP if cap is None else cap
    if n > cap:
        raise OrderCapExceeded(f"order {n} exceeds cap {cap}")


def make_cyclic(m, cap=None):
    if m < 1:
        raise ValueError("m must be >= 1")
    _check_cap(m, cap)
    idx = np.arange(m)
    return validate_group((idx[:, None] + idx[None, :]) % m, f"cyclic:{m}")


def make_abelian(factors, cap=None):
    """Direct product of cyclic groups, mixed radix with the first factor most significant."""
    factors = [int(f) for f in factors]
    if any(f < 2 for f in factors):
        raise ValueError("invariant factors must be >= 2")
    n = int(np.prod(factors)) if factors else 1
    _check_cap(n, cap)
    digits = np.array(np.unravel_index(np.arange(n), factors or [1])).T
    summed = (digits[:, None, :] + digits[None, :, :]) % np.array(factors or [1])
    table = np.ravel_multi_index(tuple(np.moveaxis(summed, -1, 0)), factors or [1])
    label = "abelian:" + ",".join(map(str, factors)) if factors else "cyclic:1"
    return validate_group(table, label)


def make_dihedral(m, cap=None):
    """Symmetries of the m-gon. Element e*m + i is r^i s^e, order 2m."""
    if m < 1:
        raise ValueError("m must be >= 1")
    _check_cap(2 * m, cap)
    idx = np.arange(2 * m)
    e, i = np.divmod(idx, m)
    e1, i1 = e[:, None], i[:, None]
    e2, i2 = e[None, :], i[None, :]
    # r^i1 s^e1 r^i2 s^e2 = r^(i1 + (-1)^e1 i2) s^(e1+e2)
    sign = np.where(e1 == 1, -1, 1)
    table = ((e1 + e2) % 2) * m + (i1 + sign * i2) % m
    return validate_group(table, f"dihedral:{m}")


def _permutation_group(perms, label):
    """Group of permutations listed in lexicographic order; (p q)(x) = p(q(x))."""
    perms = np.asarray(perms, dtype=np.int64)
    n, degree = perms.shape
    radix = degree ** np.arange(degree)[::-1]
    keys = perms @ radix
    table = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        table[i] = np.searchsorted(keys, perms[i][perms] @ radix)
    return validate_group(table, label)


def _lex_permutations(m):
    from itertools import permutations

    return np.array(list(permutations(range(m))), dtype=np.int64).reshape(-1, m)


def _parity(perms):
    m = perms.shape[1]
    inv = np.zeros(perms.shape[0], dtype=np.int64)
    for a in range(m):
        for b in range(a + 1, m):
            inv += perms[:, a] > perms[:, b]
    return inv % 2


def make_symmetric(m, cap=None):
    from math import factorial

    if m < 1:
        raise ValueError("m must be >= 1")
    _check_cap(factorial(m), cap)
    return _permutation_group(_lex_permutations(m), f"sym:{m}")


def make_alternating(m, cap=None):
    from math import factorial

    if m < 1:
        raise ValueError("m must be >= 1")
    _check_cap(max(1, factorial(m) // 2), cap)
    perms = _lex_permutations(m)
    return _permutation_group(perms[_parity(perms) == 0], f"alt:{m}")


QUATERNION_TABLE = [
    # 0=1 1=-1 2=i 3=-i 4=j 5=-j 6=k 7=-k
    [0, 1, 2, 3, 4, 5, 6, 7],
    [1, 0, 3, 2, 5, 4, 7, 6],
    [2, 3, 1, 0, 6, 7, 5, 4],
    [3, 2, 0, 1, 7, 6, 4, 5],
    [4, 5, 7, 6, 1, 0, 2, 3],
    [5, 4, 6, 7, 0, 1, 3, 2],
    [6, 7, 4, 5, 3, 2, 1, 0],
    [7, 6, 5, 4, 2, 3, 0, 1],
]


def make_quaternion():
    return validate_group(QUATERNION_TABLE, "quaternion")


def direct_product(G, H, cap=None):
    """Pair (i, j) is encoded as i*|H| + j."""
    n = G.n * H.n
    _check_cap(n, cap)
    TG = G.table.astype(np.int64)
    TH = H.table.astype(np.int64)
    table = TG[:, None, :, None] * H.n + TH[None, :, None, :]
    label = f"dp:{G.label}x{H.label}" if G.label and H.label else ""
    return validate_group(table.reshape(n, n), label)


def semidirect_product(H, N, action, cap=None, label=""):
    """(h1, x1)(h2, x2) = (h1 h2, act_{h2^-1}(x1) x2), with (h, x) encoded as h*|N| + x."""
    if action.H != H or action.N != N:
        raise InvalidAction("action is defined for different groups")
    n = H.n * N.n
    _check_cap(n, cap)
    idx = np.arange(n)
    h, x = np.divmod(idx, N.n)
    h1, x1 = h[:, None], x[:, None]
    h2, x2 = h[None, :], x[None, :]
    twisted = action.images[H.inverses[h2], x1]
    table = H.table[h1, h2].astype(np.int64) * N.n + N.table[twisted, x2]
    return validate_group(table, label)


def relabel(G, perm, label=None):
    """Return the isomorphic copy in which element i is renamed perm[i]."""
    perm = np.asarray(perm, dtype=np.int64)
    if perm.shape != (G.n,) or not _is_permutation(perm):
        raise NotAPermutation("relabeling must be a permutation of [0, n)")
    if perm[0] != 0:
        raise IdentityMoved("relabeling must fix the identity")
    table = np.empty((G.n, G.n), dtype=np.int64)
    table[np.ix_(perm, perm)] = perm[G.table]
    return CayleyTable(table, G.label if label is None else label)


def random_relabeling(n, rng):
    perm = np.zeros(n, dtype=np.int64)
    perm[1:] = rng.permutation(np.arange(1, n))
    return perm


# ------------------------------------------------------------- substructures


def _as_indices(S):
    if isinstance(S, ElementSet):
        return S.elements
    return np.unique(np.asarray(list(S) if not isinstance(S, np.ndarray) else S, dtype=np.int64))


def closure_mask(T, gens):
    """Mask of the subgroup generated by ``gens`` (frontier search by right multiplication)."""
    n = T.shape[0]
    gens = np.asarray(gens, dtype=np.int64)
    mask = np.zeros(n, dtype=bool)
    mask[0] = True
    if gens.size == 0:
        return mask
    frontier = np.zeros(1, dtype=np.int64)
    while frontier.size:
        cand = T[np.ix_(frontier, gens)].ravel()
        cand = np.unique(cand[~mask[cand]])
        mask[cand] = True
        frontier = cand
    return mask


def subgroup_closure(G, S):
    return ElementSet(closure_mask(G.table, _as_indices(S)), subgroup=True)


def conjugates(G, S):
    """Unique elements g s g^-1 for s in S, g in G."""
    s = _as_indices(S)
    T = G.table
    if s.size == 0:
        return s
    return np.unique(T[T[:, s], G.inverses[:, None]])


def normal_closure(G, S):
    return ElementSet(closure_mask(G.table, conjugates(G, S)), subgroup=True)


def center(G):
    return G.cached("center", lambda: ElementSet((G.table == G.table.T).all(axis=1), True))


def commutator_set(G):
    """Sorted distinct commutators a^-1 b^-1 a b."""

    def build():
        T, inv = G.table, G.inverses
        vals = T[T[inv[:, None], inv[None, :]], T]
        return _frozen(np.unique(vals), np.int64)

    return G.cached("commutators", build)


def commutator_subgroup(G):
    return G.cached(
        "derived", lambda: ElementSet(closure_mask(G.table, commutator_set(G)), True)
    )


def centralizer(G, g):
    return ElementSet(G.table[g, :] == G.table[:, g], True)


def centralizer_orders(G):
    return G.cached(
        "centralizer_orders",
        lambda: _frozen((G.table == G.table.T).sum(axis=1), np.int64),
    )


def is_normal(G, S):
    s = _as_indices(S)
    mask = np.zeros(G.n, dtype=bool)
    mask[s] = True
    return bool(mask[conjugates(G, s)].all())


def subgroup_table(G, S):
    """Cayley table of a subgroup on its own indices (sorted, so identity stays 0).

    Returns (table, elements) where ``elements[i]`` is the G-index of local i.
    """
    elems = _as_indices(S)
    local = np.full(G.n, -1, dtype=np.int64)
    local[elems] = np.arange(elems.size)
    sub = local[G.table[np.ix_(elems, elems)]]
    if (sub < 0).any():
        raise ValueError("set is not closed under multiplication")
    return CayleyTable(sub, G.label and f"sub({G.label})"), elems


# --------------------------------------------------------- marked isomorphism


def marked_isomorphism(G, gs, H, hs):
    """True iff g_i -> h_i extends to an isomorphism <g_1..g_k> -> <h_1..h_k>.

    Both subgroups are grown by the same right-multiplication schedule; the
    visited pairs form the subgroup generated by the (g_i, h_i) in G x H, which
    is the graph of an isomorphism exactly when no conflict appears.
    """
    gs, hs = [int(g) for g in gs], [int(h) for h in hs]
    if len(gs) != len(hs):
        raise ValueError("tuples must have equal length")
    TG, TH = G.table, H.table
    fwd, bwd = {0: 0}, {0: 0}
    queue = deque([(0, 0)])
    while queue:
        x, y = queue.popleft()
        for g, h in zip(gs, hs):
            a, b = int(TG[x, g]), int(TH[y, h])
            seen_a, seen_b = fwd.get(a), bwd.get(b)
            if seen_a is None and seen_b is None:
                fwd[a], bwd[b] = b, a
                queue.append((a, b))
            elif seen_a != b or seen_b != a:
                return False
    return True


class WordTree:
    """Breadth-first spanning tree of <gens> in the right Cayley graph.

    ``levels`` is a list of (nodes, parents, generator positions); node =
    parent * gens[position].
    """

    __slots__ = ("gens", "levels", "members")

    def __init__(self, gens, levels, members):
        self.gens, self.levels, self.members = gens, levels, members


def word_tree(G, gens):
    T = G.table
    gens = np.asarray(gens, dtype=np.int64)
    mask = np.zeros(G.n, dtype=bool)
    mask[0] = True
    levels = []
    frontier = np.zeros(1, dtype=np.int64)
    while frontier.size and gens.size:
        cand = T[np.ix_(frontier, gens)]
        flat = cand.ravel()
        parents = np.repeat(frontier, gens.size)
        which = np.tile(np.arange(gens.size), frontier.size)
        new = ~mask[flat]
        flat, parents, which = flat[new], parents[new], which[new]
        flat, first = np.unique(flat, return_index=True)
        parents, which = parents[first], which[first]
        mask[flat] = True
        if flat.size:
            levels.append((flat, parents, which))
        frontier = flat
    return WordTree(gens, levels, np.flatnonzero(mask))


def map_along_tree(tree, H, images):
    """Extend gens[i] -> images[i] along the word tree; -1 outside <gens>."""
    TH = H.table
    images = np.asarray(images, dtype=np.int64)
    phi = np.full(int(tree.members.max()) + 1 if tree.members.size else 1, -1, dtype=np.int64)
    phi[0] = 0
    for nodes, parents, which in tree.levels:
        phi[nodes] = TH[phi[parents], images[which]]
    return phi


def extends_to_isomorphism(G, tree, H, images, target_order=None):
    """Vectorized marked-isomorphism test using a precomputed word tree of G.

    Returns the map (array over G's indices, -1 off the subgroup) or None.
    Edge consistency on every generator proves the map is a homomorphism.
    """
    phi = map_along_tree(tree, H, images)
    members = tree.members
    vals = phi[members]
    if np.unique(vals).size != members.size:
        return None
    images = np.asarray(images, dtype=np.int64)
    TG, TH = G.table, H.table
    for g, h in zip(tree.gens, images):
        if not np.array_equal(phi[TG[members, g]], TH[vals, h]):
            return None
    if target_order is not None and members.size != target_order:
        return None
    return phi


def is_isomorphism(G, H, phi):
    """Full check of phi over all n^2 products."""
    phi = np.asarray(phi, dtype=np.int64)
    if G.n != H.n or phi.shape != (G.n,) or not _is_permutation(phi):
        return False
    return bool(_kernels.preserves_products(G.table, H.table, phi))
