"""Version III: WL on the multiplication-gadget graph of a group.

For every ordered pair (g, h) the graph gets four fresh vertices a, b, c, d
and the path g - a, h - b - c - d - gh.  Vertex numbering is dense: group
vertices [0, n), then the a, b, c, d blocks, each in pair-major order
(pair index g*n + h).

The five listed edges leave every ``a`` vertex as a pendant leaf, so the
resulting graph depends only on n.  ``linked=True`` adds the edge a - b,
which connects each gadget (six edges per pair) and makes the graph encode
the multiplication.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DimensionZero
from .wl import (
    ColoredGroup,
    RunResult,
    TupleColoring,
    as_colored,
    check_budget,
    rank_hashes,
    refine_until,
    token_ids,
)

KINDS = ("group", "a", "b", "c", "d")


class GadgetToken:
    """The one reserved color shared by all gadget vertices."""

    def __repr__(self):
        return "<gadget>"

    def __eq__(self, other):
        return isinstance(other, GadgetToken)

    def __hash__(self):
        return hash("<gadget>")


GADGET = GadgetToken()


@dataclass
class GadgetGraph:
    n: int
    n_vertices: int
    edges: np.ndarray  # (E, 2), u < v, sorted
    kinds: np.ndarray  # per vertex, index into KINDS
    origin: np.ndarray  # per vertex: (g, h) pair, or (g, -1) for group vertices
    colors: tuple
    indptr: np.ndarray
    indices: np.ndarray
    linked: bool = False

    @property
    def n_edges(self):
        return int(self.edges.shape[0])

    def neighbors(self, v):
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degree(self):
        return np.diff(self.indptr)

    def to_edge_list(self):
        lines = [f"{self.n_vertices} {self.n_edges}"]
        n, sq = self.n, self.n * self.n
        lines.append(f"# vertices 0..{n - 1}: group elements")
        for i, kind in enumerate(KINDS[1:]):
            lo = n + i * sq
            lines.append(f"# vertices {lo}..{lo + sq - 1}: gadget {kind}(g,h), index {lo} + g*{n} + h")
        lines.extend(f"{u} {v}" for u, v in self.edges.tolist())
        return "\n".join(lines) + "\n"


def build_gadget_graph(A, linked=False):
    A = as_colored(A)
    G = A.group
    n = G.n
    check_budget([n + 4 * n * n], 1)
    sq = n * n
    pairs = np.arange(sq, dtype=np.int64)
    g, h = np.divmod(pairs, n)
    gh = G.table[g, h].astype(np.int64)
    a, b, c, d = (n + i * sq + pairs for i in range(4))
    spec = [(g, a), (h, b), (b, c), (c, d), (gh, d)] + ([(a, b)] if linked else [])
    edges = np.concatenate([np.stack(e, axis=1) for e in spec])
    edges.sort(axis=1)
    edges = edges[np.lexsort((edges[:, 1], edges[:, 0]))]
    nv = n + 4 * sq
    both = np.concatenate([edges, edges[:, ::-1]])
    both = both[np.lexsort((both[:, 1], both[:, 0]))]
    indptr = np.zeros(nv + 1, dtype=np.int64)
    np.add.at(indptr, both[:, 0] + 1, 1)
    indptr = np.cumsum(indptr)
    kinds = np.concatenate([np.zeros(n, np.int8)] + [np.full(sq, i + 1, np.int8) for i in range(4)])
    origin = np.concatenate(
        [np.stack([np.arange(n), np.full(n, -1)], axis=1)] + [np.stack([g, h], axis=1)] * 4
    )
    colors = tuple(A.colors) + (GADGET,) * (4 * sq)
    return GadgetGraph(n, nv, edges, kinds, origin, colors, indptr, both[:, 1].copy(), linked)


def _graph_rows(graph, colors, k):
    N = graph.n_vertices
    idx = np.arange(N**k, dtype=np.int64)
    digits = [(idx // N ** (k - 1 - i)) % N for i in range(k)]
    keys = graph.edges[:, 0] * N + graph.edges[:, 1]
    cols = []
    bits = np.zeros(N**k, dtype=np.int64)
    pos = 0
    for i in range(k):
        for j in range(i + 1, k):
            lo = np.minimum(digits[i], digits[j])
            hi = np.maximum(digits[i], digits[j])
            probe = lo * N + hi
            at = np.clip(np.searchsorted(keys, probe), 0, max(keys.size - 1, 0))
            adj = keys[at] == probe if keys.size else np.zeros(N**k, bool)
            bits |= adj.astype(np.int64) << pos
            bits |= (digits[i] == digits[j]).astype(np.int64) << (pos + 1)
            pos += 2
    cols.append(bits)
    cols.extend(colors[d] for d in digits)
    return np.stack(cols, axis=1)


def run_wl_graph(graph1, graph2=None, k=2, max_rounds=None, counting=True, stop_on_distinguish=True):
    """k-WL on one or two gadget graphs with a shared color namespace.

    k = 1 is classical color refinement over neighborhoods; k >= 2 refines
    vertex k-tuples by substitution exactly as for groups.
    """
    if k < 1:
        raise DimensionZero("k must be at least 1")
    graphs = [graph1] + ([graph2] if graph2 is not None else [])
    sizes = [gr.n_vertices for gr in graphs]
    check_budget(sizes, k)
    colors = token_ids([gr.colors for gr in graphs])
    if k == 1:
        ids, count = rank_hashes([(c.astype(np.uint64), c.astype(np.uint64)) for c in colors])
        coloring = TupleColoring(1, ids, sizes, 1, count)
        coloring, distinguished, stabilized, counts = _refine_neighbors(
            coloring, graphs, max_rounds, counting, stop_on_distinguish
        )
    else:
        pairs = [_kernels.hash_rows(_graph_rows(gr, c, k)) for gr, c in zip(graphs, colors)]
        ids, count = rank_hashes(pairs)
        coloring = TupleColoring(k, ids, sizes, 1, count)
        coloring, distinguished, stabilized, counts = refine_until(
            coloring, max_rounds, counting, stop_on_distinguish
        )
    elem = [coloring.diagonal(s)[: gr.n] for s, gr in enumerate(graphs)]
    return RunResult(distinguished, coloring.round, stabilized, k, "III", counting, counts,
                     coloring, elem, {"vertices": sizes})


def _refine_neighbors(coloring, graphs, max_rounds, counting, stop_on_distinguish):
    from .wl import _differs

    counts = [coloring.n_classes]
    distinguished = _differs(coloring, counting)
    stabilized = False
    while not (distinguished and stop_on_distinguish):
        if max_rounds is not None and coloring.round >= max_rounds:
            break
        pairs = [
            _kernels.neighbor_refine(c, gr.indptr, gr.indices, counting)
            for c, gr in zip(coloring.colors, graphs)
        ]
        ids, count = rank_hashes(pairs)
        if count == coloring.n_classes:
            stabilized = True
            break
        coloring = TupleColoring(1, ids, coloring.sizes, coloring.round + 1, count)
        counts.append(count)
        distinguished = _differs(coloring, counting)
    return coloring, distinguished, stabilized, counts


def version3_group_test(A, B=None, k=2, max_rounds=None, counting=True, linked=False):
    g1 = build_gadget_graph(A, linked)
    g2 = build_gadget_graph(B, linked) if B is not None else None
    return run_wl_graph(g1, g2, k, max_rounds, counting)


__all__ = ["GadgetGraph", "build_gadget_graph", "run_wl_graph", "version3_group_test", "ColoredGroup"]
