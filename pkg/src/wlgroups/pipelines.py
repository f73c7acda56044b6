"""End-to-end isomorphism deciders and canonization."""

import itertools
import math
import time
from dataclasses import dataclass

import numpy as np

from .analysis import _prime_factors, is_semisimple, power, socle_factors
from .core import (
    CayleyTable,
    closure_mask,
    extends_to_isomorphism,
    is_isomorphism,
    make_abelian,
    map_along_tree,
    subgroup_table,
    word_tree,
)
from .errors import (
    DimensionZero,
    MemoryBudget,
    NonCanonicalWarning,
    NotAbelian,
    NotSemisimple,
    OracleCapExceeded,
)
from .oracle import ORACLE_CAP, greedy_generators, oracle_isomorphic
from .results import ISOMORPHIC, NON_ISOMORPHIC, WL_INDISTINGUISHABLE, IsoList, IsoVerdict
from .wl import ColoredGroup, TupleColoring, check_budget, initial_coloring, refine_until, run_wl

# ------------------------------------------------------------------ Abelian


def _order_evidence(G, H):
    a = np.bincount(G.orders, minlength=G.n + 1)
    b = np.bincount(H.orders, minlength=H.n + 1)
    if np.array_equal(a, b):
        return None
    m = int(np.flatnonzero(a != b)[0])
    return f"element order {m}: {int(a[m])} vs {int(b[m])} elements"


def _order_mod(G, mask):
    """Smallest m >= 1 with y^m in the subgroup given by ``mask``, for every y."""
    idx = np.arange(G.n)
    cur = idx.copy()
    out = np.zeros(G.n, dtype=np.int64)
    m = 1
    while (out == 0).any():
        hit = (out == 0) & mask[cur]
        out[hit] = m
        cur = G.table[cur, idx]
        m += 1
    return out


def abelian_basis(G):
    """Independent generators with G the direct product of their cyclic groups.

    One p-group at a time: repeatedly take the element of largest order modulo
    the span so far, then correct it by an element of the span so that its
    order drops to that relative order.
    """
    if not G.is_abelian():
        raise NotAbelian(f"{G!r} is not Abelian")
    basis = []
    for p in _prime_factors(G.n):
        sylow = G.orders == p ** np.round(np.log(G.orders) / np.log(p)).astype(np.int64)
        span = closure_mask(G.table, [])
        while (sylow & ~span).any():
            rel = np.where(sylow & ~span, _order_mod(G, span), 0)
            y = int(np.argmax(rel))
            m = int(rel[y])
            target = power(G, y, m)
            members = np.flatnonzero(span)
            pw = members.copy()
            powered = np.zeros(members.size, dtype=np.int64)
            for _ in range(m):
                powered = G.table[powered, pw]
            s = members[np.flatnonzero(powered == target)[0]]
            x = int(G.table[y, G.inverses[s]])
            basis.append(x)
            span = closure_mask(G.table, basis)
    basis.sort(key=lambda x: (_prime_factors(int(G.orders[x]))[0], -int(G.orders[x]), x))
    return basis


def abelian_iso(G, H):
    start = time.perf_counter()
    for X in (G, H):
        if not X.is_abelian():
            raise NotAbelian(f"{X!r} is not Abelian")
    if G.n != H.n:
        return IsoVerdict(NON_ISOMORPHIC, "abelian", evidence=f"orders differ ({G.n} vs {H.n})",
                          elapsed=time.perf_counter() - start)
    evidence = _order_evidence(G, H)
    if evidence is not None:
        return IsoVerdict(NON_ISOMORPHIC, "abelian", evidence=evidence,
                          elapsed=time.perf_counter() - start)
    bg, bh = abelian_basis(G), abelian_basis(H)
    if [G.orders[x] for x in bg] != [H.orders[x] for x in bh]:
        raise AssertionError("equal order multisets gave different basis types")
    phi = extends_to_isomorphism(G, word_tree(G, bg), H, bh, G.n)
    if phi is None or not is_isomorphism(G, H, phi):
        raise AssertionError("basis matching did not yield an isomorphism")
    return IsoVerdict(ISOMORPHIC, "abelian", witness=phi,
                      evidence=f"basis orders {[int(G.orders[x]) for x in bg]}",
                      elapsed=time.perf_counter() - start)


def countfree_family(n, cap=None):
    """(Z/2)^n x (Z/4)^n and (Z/2)^(n-2) x (Z/4)^(n+1): same order, not isomorphic."""
    if n < 2:
        raise ValueError("n must be at least 2")
    G = make_abelian([2] * n + [4] * n, cap)
    H = make_abelian([2] * (n - 2) + [4] * (n + 1), cap)
    return G, H


# --------------------------------------------------------------- semisimple

WL_LIST_MAX_ORDER = 60
WL_LIST_DIMENSION = 3
WL_LIST_MIN_ROUNDS = 4


def _generating_pair(F):
    """A short generating tuple of a group, preferring elements of rare order."""
    counts = np.bincount(F.orders)
    order = np.lexsort((np.arange(F.n), counts[F.orders]))
    order = order[order != 0]
    for x in order:
        for y in order:
            if closure_mask(F.table, [x, y]).all():
                return [int(x), int(y)]
    raise AssertionError("simple factor is not 2-generated")


def _factor_images(FG, gens, FH):
    """Every image tuple of ``gens`` in FH that extends to an isomorphism."""
    tree = word_tree(FG, gens)
    pools = [np.flatnonzero(FH.orders == FG.orders[g]) for g in gens]
    out = []
    for images in itertools.product(*pools):
        if extends_to_isomorphism(FG, tree, FH, list(images), FG.n) is not None:
            out.append([int(h) for h in images])
    return out


def _coordinates(G, factors):
    """Socle elements and, per element, its component in each factor."""
    elems = np.zeros(1, dtype=np.int64)
    comps = np.zeros((1, len(factors)), dtype=np.int64)
    for i, f in enumerate(factors):
        x = f.elements
        elems_next = G.table[elems[:, None], x[None, :]].ravel()
        comps = np.repeat(comps, x.size, axis=0)
        comps[:, i] = np.tile(x, elems.size)
        elems = elems_next
    return elems, comps


def _matching_bijections(classes_g, classes_h, tables_g, tables_h):
    """Pair iso classes across the two socles; yield factor bijections as lists."""
    pairing = []
    used = set()
    for cg in classes_g:
        for j, ch in enumerate(classes_h):
            if j in used or len(ch) != len(cg):
                continue
            if oracle_isomorphic(tables_g[cg[0]], tables_h[ch[0]]).isomorphic:
                pairing.append((cg, ch))
                used.add(j)
                break
        else:
            return None
    if len(used) != len(classes_h):
        return None

    def gen():
        perms = [itertools.permutations(ch) for _, ch in pairing]
        for combo in itertools.product(*[list(p) for p in perms]):
            psi = {}
            for (cg, _), image in zip(pairing, combo):
                psi.update(zip(cg, image))
            yield [psi[i] for i in range(len(psi))]

    return gen()


class _SocleExtension:
    """Extend an isomorphism of socles to the whole group through conjugation."""

    def __init__(self, G, H, sg, sh, gens_g):
        self.G, self.H = G, H
        self.gens_g = np.asarray(gens_g, dtype=np.int64)
        TG, TH = G.table, H.table
        # conjugates g s g^-1 of the socle generators, for every g
        self.conj_g = TG[TG[:, self.gens_g], G.inverses[:, None]]
        self._th = TH

    def extend(self, phi_socle):
        """phi_socle: array over G with images on the socle; returns a full map or None."""
        if (phi_socle >= 0).all():
            return phi_socle
        TH = self._th
        tg = phi_socle[self.gens_g]
        conj_h = _row_keys(TH[TH[:, tg], self.H.inverses[:, None]])
        want = _row_keys(phi_socle[self.conj_g])
        order = np.argsort(conj_h)
        at = np.clip(np.searchsorted(conj_h, want, sorter=order), 0, self.H.n - 1)
        phi = order[at]
        if not np.array_equal(conj_h[phi], want):
            return None
        return phi


def _row_keys(rows):
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    return rows.view(np.dtype((np.void, rows.dtype.itemsize * rows.shape[1]))).ravel()


def _edge_consistent(G, H, phi, gens):
    members = np.arange(G.n)
    for g in gens:
        if not np.array_equal(phi[G.table[members, g]], H.table[phi[members], phi[g]]):
            return False
    return True


def _wl_extend(G, H, gens_g, gens_h):
    """Individualize matched generators, refine with counting WL II, read off the map."""
    tokens = [("individualized", i) for i in range(len(gens_g))]
    A = ColoredGroup(G).individualize(zip(gens_g, tokens))
    B = ColoredGroup(H).individualize(zip(gens_h, tokens))
    res = run_wl(A, B, k=WL_LIST_DIMENSION, version="II", counting=True)
    if res.distinguished:
        return None, res.rounds_used
    cg, ch = res.element_colors
    if np.unique(cg).size != G.n:
        return None, res.rounds_used
    og, oh = np.argsort(cg), np.argsort(ch)
    if not np.array_equal(cg[og], ch[oh]):
        return None, res.rounds_used
    phi = np.empty(G.n, dtype=np.int64)
    phi[og] = oh
    return phi, res.rounds_used


def semisimple_iso_list(G, H, mode="auto", verify_sample=1000, seed=0, first_only=False,
                        reference_socle=False):
    """Every isomorphism G -> H of a semisimple G, found through its socle.

    Generators are fixed in each socle factor of G; images range over factor
    bijections respecting isomorphism type and over generator images that
    extend on the factor.  In "wl" mode the candidate is decided by counting
    3-WL Version II after individualizing those generators on both sides; in
    "direct" mode the socle map is extended through the conjugation action.
    Every candidate is checked on the generator edges of G.  All returned maps
    are fully verified when there are at most ``verify_sample`` of them,
    otherwise a seeded sample of that size is.  ``reference_socle`` finds the
    socle factors with the slow pair scan instead of normal closures.
    """
    start = time.perf_counter()
    if not is_semisimple(G):
        raise NotSemisimple(f"{G!r} has an Abelian normal subgroup")
    if mode == "auto":
        mode = "wl" if G.n <= WL_LIST_MAX_ORDER else "direct"

    def empty(reason):
        return IsoList([], NON_ISOMORPHIC, f"semisimple/{mode}", elapsed=time.perf_counter() - start,
                       details={"evidence": reason})

    if G.n != H.n:
        return empty(f"orders differ ({G.n} vs {H.n})")
    if not is_semisimple(H):
        return empty("second group has an Abelian normal subgroup")
    sg = socle_factors(G, reference=reference_socle)
    sh = socle_factors(H, reference=reference_socle)
    if len(sg.factors) != len(sh.factors) or len(sg.socle) != len(sh.socle):
        return empty("socle factor counts differ")
    tables_g = [subgroup_table(G, f) for f in sg.factors]
    tables_h = [subgroup_table(H, f) for f in sh.factors]
    bijections = _matching_bijections(
        sg.iso_classes, sh.iso_classes, [t for t, _ in tables_g], [t for t, _ in tables_h]
    )
    if bijections is None:
        return empty("socle factor isomorphism types differ")

    local_gens = [_generating_pair(t) for t, _ in tables_g]
    factor_gens = [[int(elems[x]) for x in lg] for (_, elems), lg in zip(tables_g, local_gens)]
    gens_g = [g for fg in factor_gens for g in fg]
    direct = None
    if mode == "direct":
        trees = [word_tree(G, fg) for fg in factor_gens]
        direct = (trees, _coordinates(G, sg.factors), _SocleExtension(G, H, sg, sh, gens_g))
    edge_gens = greedy_generators(G)
    image_cache, found, seen, rounds = {}, [], set(), []
    for psi in bijections:
        choices = []
        for i, j in enumerate(psi):
            if (i, j) not in image_cache:
                (tg, _), (th, eh) = tables_g[i], tables_h[j]
                image_cache[(i, j)] = [[int(eh[y]) for y in imgs]
                                       for imgs in _factor_images(tg, local_gens[i], th)]
            choices.append(image_cache[(i, j)])
        for combo in itertools.product(*choices):
            gens_h = [h for imgs in combo for h in imgs]
            if mode == "wl":
                phi, r = _wl_extend(G, H, gens_g, gens_h)
                rounds.append(r)
            else:
                phi = _direct_extend(G, H, combo, *direct)
            if phi is None or not _edge_consistent(G, H, phi, edge_gens):
                continue
            key = phi.tobytes()
            if key in seen:
                continue
            seen.add(key)
            found.append(phi)
            if first_only:
                break
        if first_only and found:
            break
    if len(found) <= verify_sample:
        checked = found
    else:
        rng = np.random.default_rng(seed)
        checked = [found[i] for i in np.sort(rng.choice(len(found), verify_sample, replace=False))]
    for phi in checked:
        if not is_isomorphism(G, H, phi):
            raise AssertionError("listed map failed full verification")
    details = {"socle_factors": len(sg.factors)}
    if rounds:
        details["max_rounds_used"] = int(max(rounds))
        details["round_bound"] = WL_LIST_MIN_ROUNDS + math.log2(G.n)
    status = ISOMORPHIC if found else NON_ISOMORPHIC
    return IsoList(found, status, f"semisimple/{mode}", verified_full=len(checked),
                   elapsed=time.perf_counter() - start, details=details)


def _direct_extend(G, H, combo, trees, coordinates, extension):
    """Map the socle factor by factor, then extend to G by conjugation."""
    elems, comps = coordinates
    image = np.zeros(elems.size, dtype=np.int64)
    for i, (tree, images) in enumerate(zip(trees, combo)):
        fmap = map_along_tree(tree, H, images)
        image = H.table[image, fmap[comps[:, i]]]
    phi_socle = np.full(G.n, -1, dtype=np.int64)
    phi_socle[elems] = image
    return extension.extend(phi_socle)


# ------------------------------------------------------------- canonization


@dataclass
class CanonicalForm:
    """A canonical copy of a group.

    ``table`` is the relabeled Cayley table: element g of the input becomes
    ``position[g]``, with the identity first and the rest ordered by label.
    ``labels[i]`` is the label of canonical element i.
    """

    table: CayleyTable
    labels: np.ndarray
    position: np.ndarray
    generators: list
    iterations: int
    k: int
    version: str
    counting: bool

    def key(self):
        return self.table.table.tobytes() + b"|" + self.labels.tobytes()

    def __eq__(self, other):
        return isinstance(other, CanonicalForm) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def label_text(self):
        return " ".join(map(str, self.labels.tolist())) + "\n"

    def to_dict(self):
        return {
            "schema": "wlgroups.canon/1",
            "n": int(self.table.n),
            "labels": self.labels.tolist(),
            "generators": self.generators,
            "iterations": self.iterations,
            "k": self.k,
            "version": self.version,
            "counting": self.counting,
        }


class _Refiner:
    """Stable element colors of successive individualizations of one group.

    Without a round limit, each run starts from the previous stable coloring
    met with the new initial coloring.  That coloring lies between the new
    initial coloring and its stable refinement, so the stable partition is
    the same as from scratch, and fewer rounds are needed.
    """

    def __init__(self, k, r, version, counting):
        self.k, self.r, self.version, self.counting = k, r, version, counting
        self.warm = r is None and version in ("I", "II")
        self.coloring = None

    def colors(self, A, g=None):
        """Stable element colors of A; ``g`` is the element individualized since the last call."""
        if not self.warm:
            res = run_wl(A, k=self.k, version=self.version, max_rounds=self.r, counting=self.counting)
            return np.asarray(res.element_colors[0], dtype=np.int64)
        if self.coloring is None:
            start = initial_coloring(A, k=self.k, version=self.version)
        else:
            # the old stable coloring already refines the old initial one, so
            # meeting it with "which positions hold g" gives the new start
            start = _mark_element(self.coloring, g)
        self.coloring, _, _, _ = refine_until(start, None, self.counting)
        return self.coloring.diagonal(0)


def _mark_element(coloring, g):
    """Refine a one-sided tuple coloring by the positions at which g occurs."""
    n, k = coloring.sizes[0], coloring.k
    hit = (np.arange(n) == g).astype(np.int64)
    bits = np.zeros((n,) * k, dtype=np.int64)
    for i in range(k):
        shape = [1] * k
        shape[i] = n
        bits += hit.reshape(shape) << i
    key = coloring.colors[0] * (1 << k) + bits.ravel()
    present = np.zeros(coloring.n_classes << k, dtype=bool)
    present[key] = True
    rank = np.cumsum(present) - 1
    return TupleColoring(k, [rank[key]], coloring.sizes, coloring.round, int(rank[-1]) + 1)


def canonical_form(G, k=2, r=None, version="II", counting=True):
    """Canonical labeling by individualize and refine.

    While the chosen elements do not generate G: refine with (k+1)-WL, pick
    the smallest-colored element outside the generated subgroup (within
    non-singleton classes when any remain, smallest index on ties) and give it
    a fresh color.  A last refinement must leave every element alone in its
    class; the labels are those final colors.
    """
    if k < 1:
        raise DimensionZero("k must be at least 1")
    bound = int(math.floor(math.log2(G.n))) + 1 if G.n > 1 else 0
    refiner = _Refiner(k + 1, r, version, counting)
    A = ColoredGroup(G)
    gens = []
    span = closure_mask(G.table, gens)
    while not span.all():
        if len(gens) >= bound:
            raise NonCanonicalWarning(f"more than {bound} individualizations needed")
        colors = refiner.colors(A, gens[-1] if gens else None)
        outside = np.flatnonzero(~span)
        sizes = np.bincount(colors)[colors[outside]]
        pool = outside[sizes > 1] if (sizes > 1).any() else outside
        g = int(pool[np.lexsort((pool, colors[pool]))[0]])
        A = A.individualize([(g, ("individualized", len(gens)))])
        gens.append(g)
        span = closure_mask(G.table, gens)
    colors = refiner.colors(A, gens[-1] if gens else None)
    if np.unique(colors).size != G.n:
        raise NonCanonicalWarning(
            f"{np.unique(colors).size} color classes for {G.n} elements after individualization"
        )
    rest = np.flatnonzero(np.arange(G.n) != 0)
    order = np.concatenate([[0], rest[np.argsort(colors[rest])]])
    position = np.empty(G.n, dtype=np.int64)
    position[order] = np.arange(G.n)
    table = position[G.table[np.ix_(order, order)]]
    return CanonicalForm(CayleyTable(table, G.label), colors[order], position, gens, len(gens),
                         k, version, counting)


# ------------------------------------------------------------------ dispatch


def _canon_or_none(G):
    try:
        check_budget([G.n], 3)
        return canonical_form(G, k=2, version="II", counting=True)
    except (MemoryBudget, NonCanonicalWarning):
        return None


def auto_pipeline(G, H, oracle_cap=ORACLE_CAP):
    """Decide G vs H with the cheapest applicable method.

    Order check, Abelian test, semisimple lister, counting 3-WL Version II,
    canonical forms, then the oracle.  WL and unequal canonical forms never
    prove isomorphism; only a verified map does.
    """
    start = time.perf_counter()

    def done(v):
        v.elapsed = time.perf_counter() - start
        return v

    if G.n != H.n:
        return done(IsoVerdict(NON_ISOMORPHIC, "order", evidence=f"orders differ ({G.n} vs {H.n})"))
    ga, ha = G.is_abelian(), H.is_abelian()
    if ga and ha:
        return done(abelian_iso(G, H))
    if ga != ha:
        return done(IsoVerdict(NON_ISOMORPHIC, "abelian", evidence="exactly one group is Abelian"))
    if is_semisimple(G):
        found = semisimple_iso_list(G, H, first_only=True)
        if found.isomorphisms:
            return done(IsoVerdict(ISOMORPHIC, found.method, witness=found.isomorphisms[0],
                                   evidence="socle generators extend"))
        return done(IsoVerdict(NON_ISOMORPHIC, found.method,
                               evidence=found.details.get("evidence", "no socle map extends")))
    tried = []
    try:
        res = run_wl(G, H, k=3, version="II", counting=True)
        tried.append("wl")
        if res.distinguished:
            return done(IsoVerdict(NON_ISOMORPHIC, "wl", evidence="counting 3-WL Version II",
                                   k=3, rounds=res.rounds_used, version="II"))
        rounds = res.rounds_used
    except MemoryBudget:
        rounds = None
    cg, ch = _canon_or_none(G), _canon_or_none(H)
    if cg is not None and ch is not None:
        tried.append("canon")
        if cg == ch:
            # G -> canonical copy -> H
            inverse_h = np.argsort(ch.position)
            phi = inverse_h[cg.position]
            if is_isomorphism(G, H, phi):
                return done(IsoVerdict(ISOMORPHIC, "canon", witness=phi,
                                       evidence="equal canonical forms"))
    try:
        return done(oracle_isomorphic(G, H, cap=oracle_cap))
    except OracleCapExceeded:
        pass
    return done(IsoVerdict(WL_INDISTINGUISHABLE, "+".join(tried) or "none",
                           evidence="no decisive method within caps", k=3, rounds=rounds,
                           version="II"))
