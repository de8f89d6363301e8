"""Weighted digraphs of matrices: components, cycles, cyclicity, thresholds.

Nodes are 0-based integers. A matrix entry a[i][j] above the semiring zero
is the edge i -> j with that weight. This module only reads matrices through
their ``rows`` / ``semiring`` attributes, so it sits below the matrix layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import AcyclicNodeError, SizeLimitError
from .semiring import EXACT_TIMES, Semiring


@dataclass(frozen=True)
class Path:
    """A walk i1 -> ... -> ik given by its node sequence and total weight.

    ``length`` counts edges. A closed walk (first node == last node) is a
    cycle when all interior nodes are distinct.
    """

    nodes: tuple
    weight: object

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))

    @property
    def length(self):
        return len(self.nodes) - 1

    @property
    def is_cycle(self):
        return len(self.nodes) >= 2 and self.nodes[0] == self.nodes[-1]

    def gmean_pair(self):
        """(weight, length) pair of this walk, for geometric-mean compares."""
        return (self.weight, self.length)


class Digraph:
    """Immutable weighted digraph on nodes 0..n-1."""

    __slots__ = ("n", "edges", "semiring", "_succ")

    def __init__(self, n, edges, semiring=EXACT_TIMES):
        self.n = n
        self.semiring = semiring
        seen = {}
        for i, j, w in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) outside 0..{n - 1}")
            if semiring.is_zero(w):
                raise ValueError("edges must carry nonzero weight")
            seen[(i, j)] = w
        self.edges = tuple(sorted((i, j, w) for (i, j), w in seen.items()))
        succ = {i: [] for i in range(n)}
        for i, j, w in self.edges:
            succ[i].append((j, w))
        self._succ = succ

    def successors(self, i):
        return self._succ[i]

    def edge_set(self):
        return frozenset((i, j) for i, j, _ in self.edges)

    def weight(self, i, j):
        for k, w in self._succ[i]:
            if k == j:
                return w
        return self.semiring.zero

    def has_edge(self, i, j):
        return any(k == j for k, _ in self._succ[i])

    def subgraph(self, keep_edges):
        """Subgraph on the same node set keeping only the given (i, j) pairs."""
        keep = set(keep_edges)
        return Digraph(
            self.n,
            [(i, j, w) for i, j, w in self.edges if (i, j) in keep],
            self.semiring,
        )

    def path_weight(self, nodes):
        sr = self.semiring
        w = sr.one
        for u, v in zip(nodes, nodes[1:]):
            w = sr.mul(w, self.weight(u, v))
        return w

    def path(self, nodes):
        return Path(tuple(nodes), self.path_weight(nodes))

    def __eq__(self, other):
        return (
            isinstance(other, Digraph)
            and self.n == other.n
            and self.edges == other.edges
            and self.semiring == other.semiring
        )

    def __hash__(self):
        return hash((self.n, self.edges, self.semiring))

    def __repr__(self):
        return f"Digraph(n={self.n}, edges={[(i, j) for i, j, _ in self.edges]})"


def digraph_of(a):
    """The weighted digraph of a square matrix."""
    n = a.n
    sr = a.semiring
    edges = [
        (i, j, w)
        for i, row in enumerate(a.rows)
        for j, w in enumerate(row)
        if not sr.is_zero(w)
    ]
    return Digraph(n, edges, sr)


@dataclass(frozen=True)
class SccDecomposition:
    """Strongly connected components, each sorted, ordered by smallest node.

    A component is trivial when it is a single node without a loop; only
    nontrivial components contain cycles.
    """

    components: tuple
    trivial: tuple
    _index: dict = field(default=None, compare=False, repr=False)

    def component_of(self, node):
        if self._index is None:
            idx = {v: k for k, comp in enumerate(self.components) for v in comp}
            object.__setattr__(self, "_index", idx)
        return self._index[node]

    def nontrivial_nodes(self):
        return frozenset(
            v
            for comp, triv in zip(self.components, self.trivial)
            if not triv
            for v in comp
        )

    @property
    def is_single(self):
        return len(self.components) == 1


def scc(g):
    """Tarjan's strongly connected components, iteratively.

    Returns an SccDecomposition with components sorted by smallest node.
    """
    n = g.n
    index = [None] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    counter = 0
    components = []

    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, iter([j for j, _ in g.successors(root)]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] is None:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter([j for j, _ in g.successors(w)])))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                components.append(tuple(sorted(comp)))

    components.sort(key=lambda c: c[0])
    trivial = tuple(
        len(c) == 1 and not g.has_edge(c[0], c[0]) for c in components
    )
    return SccDecomposition(tuple(components), trivial)


def is_strongly_connected(g):
    return scc(g).is_single


def enumerate_cycles(g, max_len=None, node_limit=8):
    """All elementary cycles of length <= max_len, as closed Paths.

    Exhaustive by design and guarded by ``node_limit``: this is the oracle
    the faster spectral routines are tested against, intended for n <= 8.
    Cycles start at their smallest node and are sorted by (length, nodes).
    """
    if g.n > node_limit:
        raise SizeLimitError(
            f"cycle enumeration is exhaustive; {g.n} nodes exceeds the "
            f"guard of {node_limit}"
        )
    if max_len is None:
        max_len = g.n
    sr = g.semiring
    cycles = []

    def dfs(root, u, nodes, weight, visiting):
        for v, w in g.successors(u):
            if v == root:
                cycles.append(Path(nodes + (root,), sr.mul(weight, w)))
            elif v > root and v not in visiting and len(nodes) <= max_len - 1:
                visiting.add(v)
                dfs(root, v, nodes + (v,), sr.mul(weight, w), visiting)
                visiting.remove(v)

    for root in range(g.n):
        dfs(root, root, (root,), sr.one, {root})
    cycles.sort(key=lambda p: (p.length, p.nodes))
    return tuple(cycles)


def _component_gcd(g, comp):
    """gcd of all cycle lengths inside one strongly connected component."""
    comp_set = set(comp)
    root = comp[0]
    dist = {root: 0}
    queue = [root]
    while queue:
        u = queue.pop()
        for v, _ in g.successors(u):
            if v in comp_set and v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    # Tree distances make every edge value d[u] + 1 - d[v] a multiple of the
    # cyclicity, and tree edges contribute 0, so one sweep suffices.
    g_acc = 0
    for u in comp:
        for v, _ in g.successors(u):
            if v in comp_set:
                g_acc = math.gcd(g_acc, dist[u] + 1 - dist[v])
    return abs(g_acc)


def graph_cyclicity(g):
    """lcm over components of the gcd of that component's cycle lengths.

    Every node must lie on a cycle, i.e. in a nontrivial component.
    """
    dec = scc(g)
    for comp, triv in zip(dec.components, dec.trivial):
        if triv:
            raise AcyclicNodeError(
                f"node {comp[0]} lies on no cycle; cyclicity is undefined"
            )
    result = 1
    for comp in dec.components:
        result = math.lcm(result, _component_gcd(g, comp))
    return result


def threshold_digraph(a, theta):
    """Digraph keeping the entries at or above the positive threshold."""
    sr = a.semiring
    theta = sr.coerce(theta)
    if sr.is_zero(theta):
        raise ValueError("threshold must be above the semiring zero")
    edges = [
        (i, j, w)
        for i, row in enumerate(a.rows)
        for j, w in enumerate(row)
        if not sr.is_zero(w) and sr.ge(w, theta)
    ]
    return Digraph(a.n, edges, sr)


def threshold_spectrum(a):
    """Component structure of the threshold digraph at every entry level.

    Returns ((theta, SccDecomposition), ...) over the distinct nonzero
    entries of ``a`` in decreasing order, with runs of consecutive levels
    that share the same decomposition merged (the highest level is kept).
    """
    sr = a.semiring
    values = sorted(
        {w for row in a.rows for w in row if not sr.is_zero(w)}, reverse=True
    )
    out = []
    for theta in values:
        dec = scc(threshold_digraph(a, theta))
        if not out or out[-1][1] != dec:
            out.append((theta, dec))
    return tuple(out)
