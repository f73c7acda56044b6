"""Structural subroutines: word rank, splitting, quotients, components, socle."""

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    CayleyTable,
    ElementSet,
    _as_indices,
    center,
    closure_mask,
    commutator_set,
    commutator_subgroup,
    centralizer_orders,
    is_normal,
    normal_closure,
    subgroup_table,
)
from .errors import AbelianInput, NotAbelian, NotCentral, NotNormal, NotSemisimple

INFINITY = math.inf


# ---------------------------------------------------------------------- rank


@dataclass
class RankTable:
    base: ElementSet
    ranks: np.ndarray  # -1 marks elements outside <C>
    symmetrized: bool

    def rank(self, g):
        r = int(self.ranks[g])
        return INFINITY if r < 0 else r

    @property
    def diameter(self):
        return int(self.ranks.max())

    def as_list(self):
        return [self.rank(g) for g in range(self.ranks.size)]


def rank_of(G, C):
    """Word length of every element over C (closed under inverses first)."""
    c = _as_indices(C)
    sym = np.union1d(c, G.inverses[c]).astype(np.int64)
    symmetrized = sym.size != c.size
    ranks = np.full(G.n, -1, dtype=np.int64)
    ranks[0] = 0
    frontier = np.zeros(1, dtype=np.int64)
    depth = 0
    while frontier.size and sym.size:
        depth += 1
        cand = np.unique(G.table[np.ix_(frontier, sym)])
        cand = cand[ranks[cand] < 0]
        ranks[cand] = depth
        frontier = cand
    return RankTable(ElementSet.of(G.n, sym), ranks, symmetrized)


def commutator_width(G, g):
    table = G.cached("commutator_rank", lambda: rank_of(G, commutator_set(G)))
    return table.rank(g)


# ------------------------------------------------------------------ splitting


def _require_abelian(A):
    if not A.is_abelian():
        raise NotAbelian(f"{A!r} is not Abelian")


def _prime_factors(m):
    out, p = [], 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def power(G, g, e):
    result, base = 0, int(g)
    while e:
        if e & 1:
            result = int(G.table[result, base])
        base = int(G.table[base, base])
        e >>= 1
    return result


def power_map(G, e):
    """Vector of g^e for all g."""
    idx = np.arange(G.n)
    result = np.zeros(G.n, dtype=np.int64)
    base = idx.copy()
    while e:
        if e & 1:
            result = G.table[result, base]
        base = G.table[base, base]
        e >>= 1
    return result


def sylow_component(G, x, p):
    """The p-part of x in <x>: x^e with e = 1 mod p^a and e = 0 mod the rest."""
    m = int(G.orders[x])
    pa = 1
    while m % (pa * p) == 0:
        pa *= p
    q = m // pa
    if pa == 1:
        return 0
    e = q * pow(q, -1, pa) if pa > 1 else 0
    return power(G, x, e % m)


def splits_from_abelian(A, x):
    """x splits (generates a direct factor) iff no p-component drops order under x y^p."""
    _require_abelian(A)
    orders = A.orders
    for p in _prime_factors(int(orders[x])):
        xp = sylow_component(A, x, p)
        sylow = np.flatnonzero(_is_p_power(orders, p))
        yp = power_map(A, p)[sylow]
        if (orders[A.table[xp, yp]] < orders[xp]).any():
            return False
    return True


def _is_p_power(values, p):
    v = np.asarray(values, dtype=np.int64).copy()
    while True:
        div = (v % p == 0) & (v > 1)
        if not div.any():
            break
        v[div] //= p
    return v == 1


def quotient(G, N):
    """G/N over cosets; each coset is named by its smallest element, sorted."""
    nel = _as_indices(N)
    if not is_normal(G, nel) or closure_mask(G.table, nel).sum() != nel.size:
        raise NotNormal("subset is not a normal subgroup")
    reps = G.table[:, nel].min(axis=1)
    uniq = np.unique(reps)
    index = np.full(G.n, -1, dtype=np.int64)
    index[uniq] = np.arange(uniq.size)
    coset_of = index[reps]
    table = coset_of[G.table[np.ix_(uniq, uniq)]]
    return CayleyTable(table, f"{G.label}/N" if G.label else ""), coset_of


def splits_from_group(G, z):
    """Central z splits iff z[G,G] splits from G/[G,G] and <z> meets [G,G] trivially.

    Requiring only z outside [G,G] is not enough: in the Pauli group the
    central element iI avoids [G,G] = {1, -1} but its square does not, and it
    has no complement.
    """
    if z not in center(G):
        raise NotCentral(f"element {z} is not central")
    derived = commutator_subgroup(G)
    if derived.mask[closure_mask(G.table, [z])].sum() > 1:
        return False
    Q, coset_of = quotient(G, derived)
    return splits_from_abelian(Q, int(coset_of[z]))


# ----------------------------------------------------- non-commuting structure


class NonCommutingGraph:
    def __init__(self, G):
        self.adjacency = G.table != G.table.T
        self.adjacency.setflags(write=False)

    def components(self, vertices):
        """Connected components of the induced subgraph, ordered by smallest vertex."""
        verts = _as_indices(vertices)
        sub = self.adjacency[np.ix_(verts, verts)]
        label = np.full(verts.size, -1, dtype=np.int64)
        comps = []
        for start in range(verts.size):
            if label[start] >= 0:
                continue
            label[start] = len(comps)
            frontier = np.array([start])
            while frontier.size:
                reach = np.flatnonzero(sub[frontier].any(axis=0) & (label < 0))
                label[reach] = len(comps)
                frontier = reach
            comps.append(verts[label == len(comps)])
        return comps


def non_commuting_graph(G):
    return NonCommutingGraph(G)


@dataclass
class ComponentDecomposition:
    M: ElementSet
    stages: list
    components: list
    generated: list = field(default_factory=list)

    def to_dict(self):
        return {
            "M": self.M.elements.tolist(),
            "stages": [s.elements.tolist() for s in self.stages],
            "components": [c.elements.tolist() for c in self.components],
            "generated": [len(g) for g in self.generated],
        }


def non_abelian_components(G):
    if G.is_abelian():
        raise AbelianInput("non-Abelian components need a non-Abelian group")
    cz = centralizer_orders(G)
    noncentral = cz < G.n
    mask = noncentral & (cz == cz[noncentral].max())
    stages = [ElementSet(mask)]
    while True:
        outside = ~closure_mask(G.table, np.flatnonzero(mask))
        if not outside.any():
            break
        mask = mask | (outside & (cz == cz[outside].max()))
        stages.append(ElementSet(mask))
    graph = NonCommutingGraph(G)
    comps = [ElementSet.of(G.n, c) for c in graph.components(np.flatnonzero(mask))]
    generated = [ElementSet(closure_mask(G.table, c.elements), True) for c in comps]
    union = np.flatnonzero(np.any([g.mask for g in generated], axis=0))
    z = center(G)
    if closure_mask(G.table, union).sum() != G.n:
        raise AssertionError("components do not generate G")
    for N in generated:
        if not z <= N:
            raise AssertionError("a component subgroup misses the center")
        sub, _ = subgroup_table(G, N)
        if sub.is_abelian():
            raise AssertionError("a component subgroup is Abelian")
    return ComponentDecomposition(ElementSet(mask), stages, comps, generated)


# ------------------------------------------------------ simplicity and socle


def conjugacy_classes(G):
    """Class label per element, labels numbered by smallest member."""

    def build():
        T, inv = G.table, G.inverses
        label = np.full(G.n, -1, dtype=np.int64)
        nxt = 0
        for g in range(G.n):
            if label[g] < 0:
                label[T[T[:, g], inv]] = nxt
                nxt += 1
        label.setflags(write=False)
        return label

    return G.cached("classes", build)


def class_representatives(G):
    label = conjugacy_classes(G)
    _, first = np.unique(label, return_index=True)
    return np.sort(first)


def _local(G, S):
    if S is None:
        return G, np.arange(G.n)
    return subgroup_table(G, S)


def is_simple(G, S=None):
    """True iff every nonidentity element has normal closure the whole (sub)group."""
    H, _ = _local(G, S)
    if H.n < 2:
        raise ValueError("simplicity needs at least two elements")
    for g in class_representatives(H):
        if g != 0 and len(normal_closure(H, [int(g)])) != H.n:
            return False
    return True


def is_semisimple(G):
    """No Abelian normal subgroup: every ncl(g), g != 1, is non-Abelian."""

    def build():
        for g in class_representatives(G):
            if g == 0:
                continue
            N = normal_closure(G, [int(g)])
            sub, _ = subgroup_table(G, N)
            if sub.is_abelian():
                return False
        return True

    return G.cached("semisimple", build)


@dataclass
class SocleData:
    factors: list
    socle: ElementSet
    iso_classes: list

    def to_dict(self):
        return {
            "factors": [f.elements.tolist() for f in self.factors],
            "socle_order": len(self.socle),
            "iso_classes": self.iso_classes,
        }


def _factor_key(es):
    return tuple(es.elements.tolist())


def _minimal_normal_subgroups(G):
    found = {}
    for g in class_representatives(G):
        if g:
            N = normal_closure(G, [int(g)])
            found.setdefault(hash(N), N)
    closures = sorted(found.values(), key=len)
    minimal = []
    for N in closures:
        if not any(M <= N and M != N for M in closures):
            minimal.append(N)
    return minimal


def _split_direct_power(G, K):
    """Simple factors of K (normal in some N, K a direct power of one simple group)."""
    factors = []
    while len(K) > 1:
        H, elems = subgroup_table(G, K)
        best = None
        for x in class_representatives(H):
            if x == 0:
                continue
            ncl = normal_closure(H, [int(x)])
            if best is None or len(ncl) < len(best):
                best = ncl
        factor = ElementSet.of(G.n, elems[best.elements], subgroup=True)
        factors.append(factor)
        fe = best.elements
        # centralizer in H of the factor
        commute = (H.table[:, fe] == H.table[fe, :].T).all(axis=1)
        rest = ElementSet.of(G.n, elems[np.flatnonzero(commute)], subgroup=True)
        if len(rest) * len(factor) != len(K):
            raise AssertionError("minimal normal subgroup did not split as a direct power")
        K = rest
    return factors


def _factors_accelerated(G):
    factors = []
    for N in _minimal_normal_subgroups(G):
        factors.extend(_split_direct_power(G, N))
    return factors


def _is_factor_by_conjugates(G, S):
    """Each conjugate of S is S itself or meets S trivially and commutes with it."""
    s = S.elements
    T, inv = G.table, G.inverses
    seen = set()
    for g in range(G.n):
        conj = np.unique(T[T[g, s], inv[g]])
        key = conj.tobytes()
        if key in seen:
            continue
        seen.add(key)
        if np.array_equal(conj, s):
            continue
        if np.intersect1d(conj, s).size != 1:
            return False
        if not (T[np.ix_(conj, s)] == T[np.ix_(s, conj)].T).all():
            return False
    return True


def _factors_reference(G):
    """Scan every 2-generated subgroup; keep the simple ones passing the conjugate test."""
    T = G.table
    candidates = {}
    for g1 in range(1, G.n):
        for g2 in range(g1 + 1, G.n):
            if T[g1, g2] == T[g2, g1]:
                continue  # <g1, g2> Abelian, never a non-Abelian simple factor
            mask = closure_mask(T, [g1, g2])
            key = np.packbits(mask).tobytes()
            if key not in candidates:
                candidates[key] = ElementSet(mask, True)
    factors = []
    for S in candidates.values():
        if is_simple(G, S) and _is_factor_by_conjugates(G, S):
            factors.append(S)
    return factors


def socle_factors(G, reference=False, with_iso_classes=True):
    if not is_semisimple(G):
        raise NotSemisimple(f"{G!r} has an Abelian normal subgroup")
    factors = _factors_reference(G) if reference else _factors_accelerated(G)
    factors.sort(key=_factor_key)
    union = np.flatnonzero(np.any([f.mask for f in factors], axis=0)) if factors else []
    socle = ElementSet(closure_mask(G.table, union), True)
    classes = _iso_classes(G, factors) if with_iso_classes else []
    return SocleData(factors, socle, classes)


def _iso_classes(G, factors):
    from .oracle import oracle_isomorphic

    tables = [subgroup_table(G, f)[0] for f in factors]
    classes = []
    for i, t in enumerate(tables):
        for cls in classes:
            if oracle_isomorphic(tables[cls[0]], t).status == "isomorphic":
                cls.append(i)
                break
        else:
            classes.append([i])
    return classes
