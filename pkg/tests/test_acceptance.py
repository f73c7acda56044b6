"""Acceptance criteria 1-10, each at its stated tolerance.

Every criterion reports one line per sub-claim through ``conftest.report``;
the terminal summary folds them into one PASS/FAIL line per criterion.
Run just this file with ``pytest tests/test_acceptance.py -s`` to see the
lines as they are produced.
"""

import collections
import itertools

import numpy as np
import pytest

import reference as R
from conftest import report
from wlgroups import (
    abelian_iso,
    canonical_form,
    countfree_family,
    make_cyclic,
    oracle_isomorphic,
    oracle_isomorphism_count,
    random_relabeling,
    relabel,
    run_wl,
    semisimple_iso_list,
)
from wlgroups.analysis import is_semisimple, non_abelian_components, socle_factors, splits_from_abelian
from wlgroups.core import center, direct_product
from wlgroups.corpus import abelian_specs, constructor_corpus, random_twins
from wlgroups.errors import NonCanonicalWarning
from wlgroups.gadget import build_gadget_graph, run_wl_graph, version3_group_test
from wlgroups.groupspec import action_catalog, build_group

pytestmark = pytest.mark.acceptance

_groups = {}


def group(spec):
    if spec not in _groups:
        _groups[spec] = build_group(spec)
    return _groups[spec]


def twin(G, rng):
    return relabel(G, random_relabeling(G.n, rng))


def _invariant_key(G):
    return G.n, tuple(sorted(G.orders.tolist())), len(center(G)), G.is_abelian()


# ---------------------------------------------------------------- criterion 1


def test_criterion_1_soundness_sweep():
    specs = constructor_corpus(64)
    pairs = [(t.spec, t.name, group(t.spec), t.build()) for t in random_twins(specs, 100, seed=0)]
    buckets = collections.defaultdict(list)
    for s in specs:
        buckets[_invariant_key(group(s))].append(s)
    for members in buckets.values():
        for a, b in itertools.combinations(members, 2):
            if oracle_isomorphic(group(a), group(b)).isomorphic:
                pairs.append((a, b, group(a), group(b)))
    configs = [(k, v, c) for k in (1, 2, 3) for v in ("I", "II") for c in (True, False)]
    violations, runs = [], 0
    for a, b, G, H in pairs:
        assert oracle_isomorphic(G, H).isomorphic, (a, b)
        for k, version, counting in configs:
            runs += 1
            if run_wl(G, H, k=k, version=version, counting=counting).distinguished:
                violations.append((a, b, k, version, counting))
    ok = not violations
    report(1, ok, f"{len(pairs)} oracle-isomorphic pairs, {runs} WL runs, {len(violations)} violations")
    assert ok, violations[:5]


# ---------------------------------------------------------------- criterion 2


def test_criterion_2_abelian_completeness():
    misses, wl_pairs = [], 0
    for n in range(1, 129):
        specs = abelian_specs(n, alternates=True)
        for a, b in itertools.combinations(specs, 2):
            A, B = group(a), group(b)
            if oracle_isomorphic(A, B).isomorphic:
                continue
            wl_pairs += 1
            if not run_wl(A, B, k=2, version="II", counting=True).distinguished:
                misses.append((a, b))
    report(2, not misses, f"2-WL on {wl_pairs} non-isomorphic Abelian pairs <= 128: {len(misses)} missed")

    mismatches, iso_pairs = [], 0
    for n in range(1, 257):
        specs = abelian_specs(n, alternates=True)
        for a, b in itertools.combinations(specs, 2):
            A, B = group(a), group(b)
            iso_pairs += 1
            if abelian_iso(A, B).status != oracle_isomorphic(A, B).status:
                mismatches.append((a, b))
    report(2, not mismatches, f"abelian_iso vs oracle on {iso_pairs} Abelian pairs <= 256: "
                              f"{len(mismatches)} mismatches")
    assert not misses and not mismatches, (misses[:5], mismatches[:5])


# ---------------------------------------------------------------- criterion 3


def test_criterion_3_count_free_surrogate():
    G, H = countfree_family(2)
    assert (G.n, H.n) == (64, 64)
    free1 = run_wl(G, H, k=1, version="II", counting=False)
    free2 = run_wl(G, H, k=2, version="II", counting=False)
    counting1 = run_wl(G, H, k=1, version="II", counting=True)
    involutions = (int((G.orders == 2).sum()), int((H.orders == 2).sum()))
    ok = (not free1.distinguished and counting1.distinguished and counting1.rounds_used == 1
          and involutions == (15, 7) and not oracle_isomorphic(G, H).isomorphic)
    verdict = lambda r: f"distinguished at round {r.rounds_used}" if r.distinguished else (
        f"indistinguishable (stable at round {r.rounds_used})")
    report(3, ok, f"count-free 1-WL: {verdict(free1)}; count-free 2-WL: {verdict(free2)}; "
                  f"counting 1-WL: {verdict(counting1)}; involutions {involutions[0]} vs {involutions[1]}")
    assert ok


# ---------------------------------------------------------------- criterion 4


def test_criterion_4_version_one_implies_two():
    specs = constructor_corpus(32)
    by_order = collections.defaultdict(list)
    for s in specs:
        by_order[group(s).n].append(s)
    violations, checked = [], 0
    for members in by_order.values():
        for a, b in itertools.combinations(members, 2):
            A, B = group(a), group(b)
            for k in (1, 2):
                first = run_wl(A, B, k=k, version="I")
                if not first.distinguished:
                    continue
                checked += 1
                # distinguishing persists in later rounds, so the first round suffices
                if not run_wl(A, B, k=k, version="II", max_rounds=first.rounds_used).distinguished:
                    violations.append((a, b, k, first.rounds_used))
    report(4, not violations, f"{checked} Version I separations on the order <= 32 corpus, "
                              f"{len(violations)} missed by Version II")
    assert not violations, violations[:5]


# ---------------------------------------------------------------- criterion 5


def test_criterion_5_gadget_counts():
    bad = []
    specs = constructor_corpus(64)
    for s in specs:
        G = group(s)
        g = build_gadget_graph(G)
        n = G.n
        if (g.n_vertices, g.n_edges) != (n + 4 * n * n, 5 * n * n):
            bad.append(s)
    report(5, not bad, f"|V| = n + 4n^2 and |E| = 5n^2 on {len(specs)} corpus groups: {len(bad)} wrong")
    assert not bad


@pytest.mark.xfail(strict=True, reason="the literal gadget graph depends only on the order (see README)")
def test_criterion_5_version3_distinguishes():
    pairs = [("cyclic:4", "abelian:2,2"), ("cyclic:6", "sym:3")]
    literal = [version3_group_test(group(a), group(b), k=2).distinguished for a, b in pairs]
    linked = [version3_group_test(group(a), group(b), k=2, linked=True).distinguished for a, b in pairs]
    report(5, all(literal), "Version III counting 2-WL, Z4 vs V4 and Z6 vs S3: literal gadget "
                            f"{literal}, linked gadget {linked}")
    assert all(linked)
    assert all(literal)


# ---------------------------------------------------------------- criterion 6


def _orders_separated(orders, colors):
    """Different element orders never share a color."""
    seen = {}
    for o, c in zip(orders.tolist(), np.asarray(colors).tolist()):
        if seen.setdefault(c, o) != o:
            return False
    return True


@pytest.mark.xfail(strict=True, reason="the literal gadget graph depends only on the order (see README)")
def test_criterion_6_gadget_order_finding():
    literal, linked = [], []
    for n in range(1, 9):
        G = make_cyclic(n)
        for flag, out in ((False, literal), (True, linked)):
            res = run_wl_graph(build_gadget_graph(G, linked=flag), k=2, counting=False)
            out.append(_orders_separated(G.orders, res.element_colors[0]))
    report(6, all(literal), f"count-free 2-WL on the gadget graph of Z1..Z8 separates orders: literal "
                            f"{sum(literal)}/8, linked {sum(linked)}/8")
    assert all(linked)
    assert all(literal)


def test_criterion_6_counting_order_finding():
    specs = constructor_corpus(128)
    bad = []
    for s in specs:
        G = group(s)
        res = run_wl(G, k=1, version="II", max_rounds=1)
        if not _orders_separated(G.orders, res.element_colors[0]):
            bad.append(s)
    report(6, not bad, f"counting 1-WL Version II separates orders at round 1 on {len(specs)} "
                       f"corpus groups <= 128: {len(bad)} failures")
    assert not bad


# ---------------------------------------------------------------- criterion 7


def _is_iso(G, H, phi):
    phi = np.asarray(phi)
    return (np.array_equal(np.sort(phi), np.arange(G.n))
            and np.array_equal(phi[G.table], H.table[np.ix_(phi, phi)]))


def test_criterion_7_semisimple_listing():
    rng = np.random.default_rng(7)
    A5 = group("alt:5")
    found = semisimple_iso_list(A5, A5, mode="wl")
    oracle_a5 = oracle_isomorphism_count(A5, A5)
    ok_a5 = (found.count == oracle_a5 == 120 and found.verified_full == 120
             and len({tuple(p) for p in map(tuple, found.isomorphisms)}) == 120
             and all(_is_iso(A5, A5, p) for p in found.isomorphisms))
    report(7, ok_a5, f"A5 -> A5 ({found.method}): {found.count} maps, oracle {oracle_a5}, "
                     f"{found.verified_full} fully verified")

    empty = semisimple_iso_list(A5, make_cyclic(60))
    ok_z60 = empty.count == 0 and not empty.isomorphisms
    report(7, ok_z60, f"A5 -> Z60: {empty.count} maps")

    G = group("dp:alt:5xalt:5")
    H = twin(G, rng)
    big = semisimple_iso_list(G, H, verify_sample=1000, seed=0)
    oracle_big = oracle_isomorphism_count(G, H)
    picks = rng.choice(big.count, size=min(1000, big.count), replace=False) if big.count else []
    rechecked = sum(_is_iso(G, H, big.isomorphisms[i]) for i in picks)
    ok_big = (big.count == oracle_big == 28800 and big.verified_full >= 1000
              and rechecked == len(picks) >= 1000)
    report(7, ok_big, f"A5xA5 twin ({big.method}): {big.count} maps, oracle {oracle_big}, "
                      f"{big.verified_full} verified by the lister, {rechecked} rechecked here")
    assert ok_a5 and ok_z60 and ok_big


# ---------------------------------------------------------------- criterion 8


def test_criterion_8_canonization():
    rng = np.random.default_rng(8)
    abelian = [s for n in range(1, 65) for s in abelian_specs(n)]
    suite = abelian + ["dihedral:4", "quaternion", "dihedral:3", "dihedral:6"]
    forms, unstable, warnings = {}, [], []
    for s in suite:
        G = group(s)
        try:
            form = canonical_form(G, k=2)
            keys = {canonical_form(twin(G, rng), k=2).key() for _ in range(100)}
        except NonCanonicalWarning as err:
            warnings.append((s, str(err)))
            continue
        forms[s] = form.key()
        if keys != {form.key()}:
            unstable.append(s)
    clashes = []
    for a, b in itertools.combinations(forms, 2):
        if forms[a] == forms[b] and not oracle_isomorphic(group(a), group(b)).isomorphic:
            clashes.append((a, b))
    abelian_warnings = [w for w in warnings if w[0] in abelian]
    ok = not unstable and not clashes and not warnings
    report(8, ok, f"{len(suite)} groups x 100 relabelings: {len(unstable)} unstable, {len(clashes)} "
                  f"equal forms for non-isomorphic pairs, {len(warnings)} NonCanonicalWarning "
                  f"({len(abelian_warnings)} Abelian)")
    assert ok, (unstable, clashes, warnings)


# ---------------------------------------------------------------- criterion 9


def test_criterion_9_structural_cross_checks():
    disagreements, elements = [], 0
    for n in range(1, 65):
        for s in abelian_specs(n):
            A = group(s)
            T = R.rows(A)
            subgroups = R.abelian_subgroups(T)
            for x in range(A.n):
                elements += 1
                if splits_from_abelian(A, x) != R.has_complement(T, x, subgroups):
                    disagreements.append((s, x))
    report(9, not disagreements, f"splits_from_abelian vs complement search on {elements} elements of "
                                 f"the Abelian groups <= 64: {len(disagreements)} disagreements")

    S3 = group("sym:3")
    S3S3 = direct_product(S3, S3)
    want = {frozenset(i * 6 for i in range(6)), frozenset(range(6))}
    got = {frozenset(c.elements.tolist()) for c in non_abelian_components(S3S3).generated}
    A5Z2 = direct_product(group("alt:5"), make_cyclic(2))
    got_a5 = {frozenset(c.elements.tolist()) for c in non_abelian_components(A5Z2).generated}
    ok_components = got == want and got_a5 == {frozenset(range(120))}
    report(9, ok_components, f"components: S3xS3 gives {sorted(len(c) for c in got)}, "
                             f"A5xZ2 gives {sorted(len(c) for c in got_a5)}")

    semisimple = []
    for s in constructor_corpus(360):
        G = group(s)
        if (G.n == 1 or not G.is_abelian()) and is_semisimple(G):
            semisimple.append(s)
    socle_bad = []
    for s in semisimple:
        fast = socle_factors(group(s), with_iso_classes=False)
        slow = socle_factors(group(s), reference=True, with_iso_classes=False)
        if set(fast.factors) != set(slow.factors) or fast.socle != slow.socle:
            socle_bad.append(s)
    report(9, not socle_bad, f"socle accelerated vs reference on {semisimple}: {len(socle_bad)} differ")
    assert not disagreements and ok_components and not socle_bad and "alt:6" in semisimple


# --------------------------------------------------------------- criterion 10


def test_criterion_10_semidirect_pairs():
    by_factors = collections.defaultdict(list)
    for name, entry in sorted(action_catalog().items()):
        by_factors[(entry["H"], entry["N"])].append(name)
    pairs = []
    for (h, n), names in sorted(by_factors.items()):
        for a, b in itertools.combinations(names, 2):
            pairs.append((f"sdp:{h}:{n}:{a}", f"sdp:{h}:{n}:{b}"))
    contradictions, undecided, agreed = [], [], 0
    for a, b in pairs:
        A, B = group(a), group(b)
        iso = oracle_isomorphic(A, B).isomorphic
        dist = run_wl(A, B, k=3, version="II", counting=True).distinguished
        if dist and iso:
            contradictions.append((a, b))
        elif not dist and not iso:
            undecided.append((a, b))
        else:
            agreed += 1
    ok = len(pairs) >= 5 and not contradictions
    report(10, ok, f"{len(pairs)} coprime semidirect pairs: {agreed} verdicts match the oracle, "
                   f"{len(contradictions)} contradictions, {len(undecided)} not distinguished "
                   f"{[x[0].rsplit(':', 1)[1] + '/' + x[1].rsplit(':', 1)[1] for x in undecided]}")
    assert ok, contradictions
