"""k-dimensional Weisfeiler-Leman refinement on groups (Versions I and II).

Both compared structures are refined together so that color ids are drawn
from one shared namespace.  Ids are assigned by sorting signature hashes, so
they depend only on signature content: runs on isomorphic inputs produce the
same ids for corresponding tuples.  The initial coloring is round 1.
"""

import os
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DimensionZero, MemoryBudget, TokenCollision

BUDGET_ENV = "WLGROUPS_TUPLE_BUDGET"
DEFAULT_TUPLE_BUDGET = 2**27


def tuple_budget():
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_TUPLE_BUDGET


def check_budget(sizes, k, budget=None):
    budget = tuple_budget() if budget is None else budget
    records = sum(int(n) ** k for n in sizes)
    if len(sizes) == 1:
        records *= 2
    if records > budget:
        raise MemoryBudget(f"{records} tuple records for k={k} exceed budget {budget}")
    return records


class ColoredGroup:
    """A group with one color token per element."""

    __slots__ = ("group", "colors")

    def __init__(self, group, colors=None):
        self.group = group
        if colors is None:
            colors = (0,) * group.n
        colors = tuple(colors)
        if len(colors) != group.n:
            raise ValueError("need one color per element")
        self.colors = colors

    def individualize(self, assignments):
        colors = list(self.colors)
        existing = set(colors)
        fresh = set()
        for element, token in assignments:
            if token in existing or token in fresh:
                raise TokenCollision(f"token {token!r} is already in use")
            fresh.add(token)
            colors[element] = token
        return ColoredGroup(self.group, colors)


def as_colored(X):
    return X if isinstance(X, ColoredGroup) else ColoredGroup(X)


def individualize(A, assignments):
    return as_colored(A).individualize(assignments)


def token_ids(color_lists):
    """Map color tokens of all sides to shared dense ints, sorted by (type, repr)."""
    tokens = sorted({t for cl in color_lists for t in cl}, key=lambda t: (type(t).__name__, repr(t)))
    lookup = {t: i for i, t in enumerate(tokens)}
    return [np.array([lookup[t] for t in cl], dtype=np.int64) for cl in color_lists]


@dataclass
class TupleColoring:
    k: int
    colors: list  # one flattened id array of length n_s**k per side
    sizes: list
    round: int
    n_classes: int

    def side(self, s):
        return self.colors[s].reshape((self.sizes[s],) * self.k)

    def diagonal(self, s):
        n = self.sizes[s]
        step = sum(n**i for i in range(self.k))
        return self.colors[s][:: step][:n] if n else self.colors[s][:0]


def rank_hashes(pairs):
    """Dense shared ids from per-side (h1, h2) hash arrays, ordered by hash."""
    h1 = np.concatenate([p[0] for p in pairs])
    h2 = np.concatenate([p[1] for p in pairs])
    first, group, ok = _kernels.dedupe_pairs(h1, h2)
    if ok:
        # h1 alone separates the distinct pairs, so its order is the pair order
        rank = np.empty(first.size, dtype=np.int64)
        rank[np.argsort(h1[first])] = np.arange(first.size)
        ids, count = rank[group], int(first.size)
    else:
        order = np.lexsort((h2, h1))
        s1, s2 = h1[order], h2[order]
        new = np.empty(order.size, dtype=bool)
        if order.size:
            new[0] = True
            new[1:] = (s1[1:] != s1[:-1]) | (s2[1:] != s2[:-1])
        ids = np.empty(order.size, dtype=np.int64)
        ids[order] = np.cumsum(new) - 1
        count = int(new.sum())
    out, start = [], 0
    for p in pairs:
        out.append(ids[start : start + p[0].size])
        start += p[0].size
    return out, count


def _mixed_radix_digits(n, k):
    idx = np.arange(n**k, dtype=np.int64)
    digits = []
    for i in range(k):
        digits.append((idx // n ** (k - 1 - i)) % n)
    return digits


def _tuple_colors(elem_colors, n, k):
    return [elem_colors[d] for d in _mixed_radix_digits(n, k)]


def _version1_rows(G, colors, k):
    n = G.n
    digits = _mixed_radix_digits(n, k)
    T = G.table
    cols = []
    bits = np.zeros(n**k, dtype=np.int64)
    pos = 0
    for i in range(k):
        for j in range(k):
            bits |= (digits[i] == digits[j]).astype(np.int64) << pos
            pos += 1
    cols.append(bits)
    bits = np.zeros(n**k, dtype=np.int64)
    pos = 0
    for i in range(k):
        for j in range(k):
            prod = T[digits[i], digits[j]]
            for l in range(k):
                if pos == 62:
                    cols.append(bits)
                    bits = np.zeros(n**k, dtype=np.int64)
                    pos = 0
                bits |= (prod == digits[l]).astype(np.int64) << pos
                pos += 1
    cols.append(bits)
    cols.extend(colors[d] for d in digits)
    return np.stack(cols, axis=1)


def marked_type_hashes(G, k):
    """Per-tuple hash of the marked subgroup type, cached on the table."""
    return G.cached(("marked", k), lambda: _kernels.marked_types(G.table, k))


def _version2_rows(G, colors, k):
    h1, h2 = marked_type_hashes(G, k)
    cols = [h1.view(np.int64), h2.view(np.int64)]
    cols.extend(_tuple_colors(colors, G.n, k))
    return np.stack(cols, axis=1)


def initial_coloring(A, B=None, k=2, version="II"):
    """Round-1 coloring of the k-tuples of one or two colored groups."""
    if k < 1:
        raise DimensionZero("k must be at least 1")
    sides = [as_colored(A)] + ([as_colored(B)] if B is not None else [])
    check_budget([s.group.n for s in sides], k)
    elem_colors = token_ids([s.colors for s in sides])
    build = {"I": _version1_rows, "II": _version2_rows}[version]
    pairs = []
    for side, colors in zip(sides, elem_colors):
        rows = build(side.group, colors, k)
        pairs.append(_kernels.hash_rows(np.ascontiguousarray(rows)))
    ids, count = rank_hashes(pairs)
    return TupleColoring(k, ids, [s.group.n for s in sides], 1, count)


def _moved_axes(colors, n, k):
    """Copies of the coloring with axis i moved last, one row per position."""
    cube = colors.reshape((n,) * k)
    moved = np.empty((k, n**k), dtype=np.int32)
    for i in range(k):
        moved[i] = np.moveaxis(cube, i, -1).ravel()
    return moved


def refine_round(coloring, counting=True):
    k, K = coloring.k, coloring.n_classes
    exact = k * max(1, (K - 1).bit_length()) <= 64
    pairs = [
        _kernels.refine_tuples(c, _moved_axes(c, n, k), n, k, K, counting, exact)
        for c, n in zip(coloring.colors, coloring.sizes)
    ]
    ids, count = rank_hashes(pairs)
    return TupleColoring(k, ids, coloring.sizes, coloring.round + 1, count)


def meet(a, b):
    """Common refinement of two colorings of the same tuples."""
    pairs = [_kernels.hash_rows(np.stack([x, y], axis=1)) for x, y in zip(a.colors, b.colors)]
    ids, count = rank_hashes(pairs)
    return TupleColoring(a.k, ids, a.sizes, a.round, count)


def side_signature(ids, n_classes, counting):
    counts = np.bincount(ids, minlength=n_classes)
    present = np.flatnonzero(counts)
    if counting:
        return [(int(c), int(counts[c])) for c in present]
    return [(int(c), 1) for c in present]


def _differs(coloring, counting):
    if len(coloring.colors) < 2:
        return False
    if coloring.sizes[0] != coloring.sizes[1]:
        return True
    a = np.bincount(coloring.colors[0], minlength=coloring.n_classes)
    b = np.bincount(coloring.colors[1], minlength=coloring.n_classes)
    if counting:
        return not np.array_equal(a, b)
    return not np.array_equal(a > 0, b > 0)


@dataclass
class RunResult:
    distinguished: bool
    rounds_used: int
    stabilized: bool
    k: int
    version: str
    counting: bool
    class_counts: list
    coloring: TupleColoring = field(repr=False)
    element_colors: list = field(repr=False)
    extra: dict = field(default_factory=dict, repr=False)

    @property
    def signatures(self):
        return [side_signature(c, self.coloring.n_classes, self.counting) for c in self.coloring.colors]

    def to_dict(self):
        return {
            "schema": "wlgroups.run/1",
            "distinguished": self.distinguished,
            "rounds_used": self.rounds_used,
            "stabilized": self.stabilized,
            "k": self.k,
            "version": self.version,
            "counting": self.counting,
            "class_counts": self.class_counts,
            "signatures": [[list(p) for p in sig] for sig in self.signatures],
            **self.extra,
        }


def refine_until(coloring, max_rounds, counting, stop_on_distinguish=True):
    """Refine until stable, distinguished, or ``max_rounds`` (None = unbounded).

    Returns (coloring, distinguished, stabilized, class_counts).
    """
    counts = [coloring.n_classes]
    distinguished = _differs(coloring, counting)
    stabilized = False
    while not (distinguished and stop_on_distinguish):
        if not distinguished and coloring.n_classes == max(coloring.sizes) ** coloring.k:
            # every side is discrete, nothing left to split
            stabilized = True
            break
        if max_rounds is not None and coloring.round >= max_rounds:
            break
        nxt = refine_round(coloring, counting)
        if nxt.n_classes == coloring.n_classes:
            # same partition: ids are a relabeling of the previous round
            stabilized = True
            break
        coloring = nxt
        counts.append(coloring.n_classes)
        distinguished = _differs(coloring, counting)
    return coloring, distinguished, stabilized, counts


def run_wl(A, B=None, k=2, version="II", max_rounds=None, counting=True, stop_on_distinguish=True):
    """Run (k, r)-WL on one or two (colored) groups.

    ``version`` "III" delegates to the gadget-graph reduction.  When the two
    groups differ in order they are reported distinguished at round 1 without
    refinement.
    """
    if version == "III":
        from .gadget import version3_group_test

        return version3_group_test(A, B, k, max_rounds, counting)
    if k < 1:
        raise DimensionZero("k must be at least 1")
    if max_rounds is not None and max_rounds < 1:
        raise ValueError("max_rounds must be at least 1")
    sides = [as_colored(A)] + ([as_colored(B)] if B is not None else [])
    sizes = [s.group.n for s in sides]
    if len(sizes) == 2 and sizes[0] != sizes[1]:
        check_budget(sizes, k)
        empty = TupleColoring(k, [np.zeros(0, np.int64)] * 2, [0, 0], 1, 0)
        return RunResult(True, 1, False, k, version, counting, [0], empty, [None, None],
                         {"reason": "orders differ"})
    coloring = initial_coloring(sides[0], sides[1] if len(sides) > 1 else None, k, version)
    coloring, distinguished, stabilized, counts = refine_until(
        coloring, max_rounds, counting, stop_on_distinguish
    )
    elem = [coloring.diagonal(s) for s in range(len(sides))]
    return RunResult(distinguished, coloring.round, stabilized, k, version, counting, counts,
                     coloring, elem)


def pullback_element_colors(result):
    return result.element_colors


def partition_of(colors):
    """Canonical partition (tuple of sorted blocks) of an element coloring."""
    blocks = {}
    for g, c in enumerate(np.asarray(colors).tolist()):
        blocks.setdefault(c, []).append(g)
    return sorted(tuple(b) for b in blocks.values())


__all__ = [
    "ColoredGroup",
    "TupleColoring",
    "RunResult",
    "initial_coloring",
    "refine_round",
    "run_wl",
    "individualize",
    "pullback_element_colors",
]
