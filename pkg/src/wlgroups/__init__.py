"""Weisfeiler-Leman refinement and isomorphism testing for finite groups given by Cayley tables."""

from .core import (
    Action,
    CayleyTable,
    ElementSet,
    direct_product,
    make_abelian,
    make_alternating,
    make_cyclic,
    make_dihedral,
    make_quaternion,
    make_symmetric,
    random_relabeling,
    relabel,
    semidirect_product,
    validate_group,
)
from .oracle import oracle_isomorphic, oracle_isomorphism_count
from .pipelines import (
    abelian_iso,
    auto_pipeline,
    canonical_form,
    countfree_family,
    semisimple_iso_list,
)
from .wl import ColoredGroup, run_wl

__version__ = "0.1.0"
