import numpy as np
import pytest

import reference as R
from wlgroups import (
    abelian_iso,
    auto_pipeline,
    canonical_form,
    countfree_family,
    make_abelian,
    make_alternating,
    make_cyclic,
    make_symmetric,
    random_relabeling,
    relabel,
    semisimple_iso_list,
)
from wlgroups.core import is_isomorphism
from wlgroups.errors import DimensionZero, NonCanonicalWarning, NotAbelian, NotSemisimple
from wlgroups.groupspec import build_group
from wlgroups.pipelines import abelian_basis


def _twin(G, seed=0):
    return relabel(G, random_relabeling(G.n, np.random.default_rng(seed)))


# ------------------------------------------------------------------ Abelian


def test_abelian_iso_crt_witness():
    G, H = make_cyclic(6), make_abelian([2, 3])
    v = abelian_iso(G, H)
    assert v.isomorphic and is_isomorphism(G, H, v.witness)


def test_abelian_iso_family_evidence():
    G, H = countfree_family(2)
    v = abelian_iso(G, H)
    assert v.status == "non_isomorphic"
    assert "order 2: 15 vs 7" in v.evidence


def test_abelian_iso_twins_and_errors():
    G = make_abelian([4, 6, 2])
    v = abelian_iso(G, _twin(G))
    assert v.isomorphic
    with pytest.raises(NotAbelian):
        abelian_iso(G, make_symmetric(3))


@pytest.mark.parametrize("spec", ["abelian:2,4,8", "abelian:3,9,2", "cyclic:60", "abelian:4,4,4", "abelian:6,6"])
def test_abelian_basis_is_independent(spec):
    G = build_group(spec)
    basis = abelian_basis(G)
    orders = [R.order(R.rows(G), x) for x in basis]
    assert int(np.prod(orders)) == G.n
    assert len(R.closure(R.rows(G), basis)) == G.n
    assert all(R.order(R.rows(G), x) > 1 for x in basis)


def test_countfree_family():
    G, H = countfree_family(2)
    assert (G.n, H.n) == (64, 64)
    og, oh = R.orders(R.rows(G)), R.orders(R.rows(H))
    assert (og.count(2), oh.count(2)) == (15, 7)
    assert set(og) == set(oh) == {1, 2, 4}
    with pytest.raises(ValueError):
        countfree_family(1)


# --------------------------------------------------------------- semisimple


def test_a5_listing_direct_matches_reference(a5):
    found = semisimple_iso_list(a5, a5, mode="direct")
    assert found.count == 120 and found.verified_full == 120
    ours = sorted(tuple(int(v) for v in phi) for phi in found.isomorphisms)
    assert ours == sorted(tuple(phi) for phi in R.isomorphisms(a5, a5))


def test_a5_listing_wl_mode_first_map(a5):
    H = _twin(a5, 3)
    found = semisimple_iso_list(a5, H, mode="wl", first_only=True)
    assert found.count == 1 and is_isomorphism(a5, H, found.isomorphisms[0])
    assert found.details["max_rounds_used"] <= found.details["round_bound"]


def test_s5_listing():
    S5 = make_symmetric(5)
    found = semisimple_iso_list(S5, _twin(S5, 1))
    assert found.count == 120 and found.method == "semisimple/direct"


def test_a5_against_z60_is_empty(a5):
    found = semisimple_iso_list(a5, make_cyclic(60))
    assert found.count == 0 and found.status == "non_isomorphic"


def test_listing_reference_socle_agrees(a5):
    found = semisimple_iso_list(a5, a5, mode="direct", reference_socle=True)
    assert found.count == 120


def test_listing_needs_semisimple_first_group():
    with pytest.raises(NotSemisimple):
        semisimple_iso_list(make_symmetric(4), make_symmetric(4))


def test_listing_sample_verification(a5):
    found = semisimple_iso_list(a5, a5, mode="direct", verify_sample=10, seed=3)
    assert found.count == 120 and found.verified_full == 10
    assert found.to_dict()["schema"] == "wlgroups.isolist/1"


# ------------------------------------------------------------- canonical form


def test_canon_trivial_group():
    form = canonical_form(make_cyclic(1))
    assert form.table.n == 1 and form.iterations == 0


def test_canon_z6_equals_z2_z3():
    a, b = canonical_form(make_cyclic(6)), canonical_form(make_abelian([2, 3]))
    assert a == b and a.key() == b.key()


def test_canon_z4_differs_from_v4():
    assert canonical_form(make_cyclic(4)) != canonical_form(make_abelian([2, 2]))


@pytest.mark.parametrize("spec", ["dihedral:4", "quaternion", "sym:3", "dihedral:6", "abelian:2,4,2", "alt:4"])
def test_canon_is_relabel_invariant(spec):
    G = build_group(spec)
    form = canonical_form(G)
    for seed in range(5):
        assert canonical_form(_twin(G, seed)) == form


def test_canon_position_is_isomorphism_to_canonical_copy():
    G = build_group("dp:sym:3xcyclic:2")
    form = canonical_form(G)
    assert is_isomorphism(G, form.table, form.position)
    assert form.position[0] == 0
    assert len(set(form.labels.tolist())) == G.n
    d = form.to_dict()
    assert d["schema"] == "wlgroups.canon/1" and d["n"] == 12


def test_canon_generator_bound():
    G = make_abelian([2, 2, 2, 2])
    form = canonical_form(G)
    assert form.iterations <= 5
    assert len(R.closure(R.rows(G), form.generators)) == G.n


def test_canon_round_limited_warns():
    with pytest.raises(NonCanonicalWarning):
        canonical_form(build_group("dihedral:4"), k=1, r=1, version="I")
    with pytest.raises(DimensionZero):
        canonical_form(make_cyclic(3), k=0)


# ----------------------------------------------------------------- dispatch


def test_auto_abelian_path():
    v = auto_pipeline(make_cyclic(8), make_cyclic(8))
    assert v.isomorphic and v.method == "abelian"


def test_auto_semisimple_path():
    G = build_group("sym:5")
    v = auto_pipeline(G, _twin(G, 2))
    assert v.isomorphic and v.method.startswith("semisimple")
    assert is_isomorphism(G, _twin(G, 2), v.witness)


def test_auto_order_and_mixed_paths():
    assert auto_pipeline(make_cyclic(4), make_cyclic(6)).method == "order"
    v = auto_pipeline(make_cyclic(6), make_symmetric(3))
    assert v.status == "non_isomorphic" and v.method == "abelian"


def test_auto_wl_and_canon_paths():
    D4, Q8 = build_group("dihedral:4"), build_group("quaternion")
    v = auto_pipeline(D4, Q8)
    assert v.status == "non_isomorphic" and v.method == "wl"
    v = auto_pipeline(D4, _twin(D4, 7))
    assert v.isomorphic and v.method == "canon"
    assert is_isomorphism(D4, _twin(D4, 7), v.witness)


def test_auto_oracle_fallback(monkeypatch):
    import wlgroups.pipelines as P

    monkeypatch.setattr(P, "_canon_or_none", lambda G: None)
    D4 = build_group("dihedral:4")
    v = auto_pipeline(D4, _twin(D4, 1))
    assert v.isomorphic and v.method == "oracle"
    v = auto_pipeline(D4, _twin(D4, 1), oracle_cap=4)
    assert v.status == "wl_indistinguishable" and v.method == "wl"
