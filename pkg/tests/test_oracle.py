import numpy as np
import pytest

import reference as R
from wlgroups import (
    make_abelian,
    make_alternating,
    make_cyclic,
    oracle_isomorphic,
    oracle_isomorphism_count,
    random_relabeling,
    relabel,
)
from wlgroups.core import is_isomorphism
from wlgroups.errors import OracleCapExceeded
from wlgroups.groupspec import build_group
from wlgroups.oracle import greedy_generators, iter_isomorphisms

# automorphism counts from the reference enumerator in tests/reference.py
AUT_COUNTS = {
    "abelian:2,2": 6,
    "cyclic:12": 4,
    "sym:3": 6,
    "dihedral:4": 8,
    "quaternion": 24,
    "abelian:2,2,2": 168,
    "dihedral:6": 12,
    "alt:4": 24,
    "alt:5": 120,
}


@pytest.mark.parametrize("spec,count", sorted(AUT_COUNTS.items()))
def test_automorphism_counts(spec, count):
    G = build_group(spec)
    assert oracle_isomorphism_count(G, G) == count


@pytest.mark.parametrize("spec", ["abelian:2,2", "sym:3", "quaternion", "cyclic:8"])
def test_counts_match_permutation_search(spec):
    G = build_group(spec)
    assert oracle_isomorphism_count(G, G) == len(R.isomorphisms_by_permutation(G, G))


def test_listed_maps_match_reference():
    G = build_group("dihedral:6")
    H = relabel(G, random_relabeling(12, np.random.default_rng(4)))
    ours = sorted(tuple(int(v) for v in phi) for phi in iter_isomorphisms(G, H))
    theirs = sorted(tuple(phi) for phi in R.isomorphisms(G, H))
    assert ours == theirs


def test_relabeled_copy_is_isomorphic():
    G = build_group("dp:sym:3xcyclic:4")
    H = relabel(G, random_relabeling(G.n, np.random.default_rng(9)))
    v = oracle_isomorphic(G, H)
    assert v.isomorphic and is_isomorphism(G, H, v.witness)


def test_non_isomorphic_examples():
    assert not oracle_isomorphic(make_cyclic(4), make_abelian([2, 2])).isomorphic
    v = oracle_isomorphic(build_group("dihedral:4"), build_group("quaternion"))
    assert v.status == "non_isomorphic" and v.method == "oracle"
    assert not oracle_isomorphic(make_cyclic(4), make_cyclic(5)).isomorphic


def test_cap():
    A5 = make_alternating(5)
    with pytest.raises(OracleCapExceeded):
        oracle_isomorphic(A5, A5, cap=50)
    with pytest.raises(OracleCapExceeded):
        oracle_isomorphism_count(make_cyclic(300), make_cyclic(300))


def test_greedy_generators_generate():
    for spec in ["abelian:2,4,4", "alt:5", "quaternion", "dp:sym:3xsym:3"]:
        G = build_group(spec)
        gens = greedy_generators(G)
        assert len(R.closure(R.rows(G), gens)) == G.n
