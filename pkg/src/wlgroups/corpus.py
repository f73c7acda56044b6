"""Named group collections for experiments and sweeps.

Entries are spec strings (see ``groupspec``), so every corpus member can be
rebuilt from the command line.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .analysis import _prime_factors
from .core import random_relabeling, relabel
from .groupspec import action_catalog, build_group


def _partitions(m, largest=None):
    largest = m if largest is None else largest
    if m == 0:
        yield []
        return
    for first in range(min(m, largest), 0, -1):
        for rest in _partitions(m - first, first):
            yield [first] + rest


def _factorize(n):
    out = []
    for p in _prime_factors(n):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def abelian_types(n):
    """Primary decompositions of every Abelian group of order n, as prime-power lists."""
    per_prime = [[[p**a for a in part] for part in _partitions(e)] for p, e in _factorize(n)]
    return [sum(combo, []) for combo in itertools.product(*per_prime)]


def invariant_factors(primary):
    """Invariant factors d1 | d2 | ... of an Abelian group from its prime powers."""
    by_prime = {}
    for q in primary:
        p = _prime_factors(q)[0]
        by_prime.setdefault(p, []).append(q)
    length = max((len(v) for v in by_prime.values()), default=0)
    out = [1] * length
    for qs in by_prime.values():
        for i, q in enumerate(sorted(qs)):
            out[length - len(qs) + i] *= q
    return out


def abelian_specs(n, alternates=False):
    """One spec per isomorphism type; with ``alternates`` also a second presentation."""
    specs = []
    for primary in abelian_types(n):
        inv = invariant_factors(primary)
        if n == 1:
            specs.append("cyclic:1")
            continue
        if len(inv) == 1:
            specs.append(f"cyclic:{n}")
            if alternates and len(primary) > 1:
                specs.append("abelian:" + ",".join(map(str, primary)))
        else:
            specs.append("abelian:" + ",".join(map(str, primary)))
            if alternates and inv != sorted(primary):
                specs.append("abelian:" + ",".join(map(str, inv)))
    return specs


NON_ABELIAN_EXTRAS = [
    "quaternion",
    "dp:quaternionxcyclic:2",
    "dp:dihedral:4xcyclic:2",
    "dp:sym:3xcyclic:3",
    "dp:sym:3xcyclic:4",
    "dp:alt:4xcyclic:2",
    "dp:sym:3xsym:3",
    "dp:quaternionxcyclic:3",
    "dp:dihedral:4xcyclic:4",
    "dp:alt:4xcyclic:4",
    "dp:alt:5xcyclic:2",
    "dp:alt:5xalt:5",
]


SEMISIMPLE = ["alt:5", "sym:5", "alt:6", "sym:6", "dp:alt:5xalt:5"]


def semidirect_specs():
    return [f"sdp:{e['H']}:{e['N']}:{ident}" for ident, e in action_catalog().items()]


def constructor_corpus(max_order, min_order=1, alternates=True):
    """Specs of shipped constructors with order in [min_order, max_order]."""
    specs = []
    for n in range(max(min_order, 1), max_order + 1):
        specs.extend(abelian_specs(n, alternates))
    for m in range(3, max_order // 2 + 1):
        specs.append(f"dihedral:{m}")
    specs += [f"sym:{m}" for m, size in ((3, 6), (4, 24), (5, 120), (6, 720)) if size <= max_order]
    specs += [f"alt:{m}" for m, size in ((4, 12), (5, 60), (6, 360)) if size <= max_order]
    sized = []
    for spec in specs + NON_ABELIAN_EXTRAS + semidirect_specs():
        if spec in (s for s, _ in sized):
            continue
        order = _spec_order(spec)
        if min_order <= order <= max_order:
            sized.append((spec, order))
    sized.sort(key=lambda item: (item[1], item[0]))
    return [s for s, _ in sized]


def _spec_order(spec):
    from .groupspec import parse_spec

    def size(node):
        kind = node[0]
        if kind == "quaternion":
            return 8
        if kind == "cyclic":
            return node[1]
        if kind == "abelian":
            return int(np.prod(node[1]))
        if kind == "dihedral":
            return 2 * node[1]
        if kind in ("sym", "alt"):
            f = 1
            for i in range(2, node[1] + 1):
                f *= i
            return f if kind == "sym" else max(f // 2, 1)
        if kind == "dp":
            return size(node[1]) * size(node[2])
        if kind == "sdp":
            return size(node[1]) * size(node[2])
        raise ValueError(f"no static order for {kind}")

    return size(parse_spec(spec))


@dataclass
class Twin:
    spec: str
    seed: int
    perm: np.ndarray

    @property
    def name(self):
        return f"{self.spec}~{self.seed}"

    def build(self, G=None):
        G = build_group(self.spec) if G is None else G
        return relabel(G, self.perm, label=self.name)


def random_twins(specs, count, seed):
    """``count`` seeded relabelings of specs drawn uniformly (with repetition)."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        spec = specs[int(rng.integers(len(specs)))]
        n = _spec_order(spec)
        out.append(Twin(spec, i, random_relabeling(n, rng)))
    return out

