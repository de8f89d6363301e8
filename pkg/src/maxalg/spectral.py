"""Maximum cycle geometric mean, critical graph, and eigenvectors.

The mean is computed per strongly connected component with Karp's
recurrence, kept as a (weight, length) pair so exact mode never touches an
irrational root. Critical edges are detected on the normalized matrix; when
the mean is irrational in exact max-times mode the normalization is carried
symbolically as pairs (q, m) meaning q * mean^(-m), compared by cross
powers, so the critical graph itself stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .digraph import Digraph, Path, digraph_of, graph_cyclicity, scc
from .errors import (
    AcyclicMatrixError,
    CertificationError,
    ExactnessError,
    NotIrreducibleError,
)
from .matrix import MaxMatrix, MaxVector, kleene_star, oplus, otimes
from .semiring import (
    TIMES,
    gmean_cmp,
    gmean_eq,
    gmean_float,
    gmean_value,
)


@dataclass(frozen=True)
class CycleMean:
    """The maximum cycle geometric mean as an exact (weight, length) pair.

    ``witness`` is a cycle attaining the mean, or None for acyclic input,
    in which case the pair is (zero, 1).
    """

    weight: object
    length: int
    witness: Path
    semiring: object

    def pair(self):
        return (self.weight, self.length)

    @property
    def is_zero(self):
        return self.semiring.is_zero(self.weight)

    def exact_value(self):
        """The mean as a scalar, or None when irrational in exact mode."""
        return gmean_value(self.semiring, self.pair())

    def float_value(self):
        return gmean_float(self.semiring, self.pair())

    def cmp_one(self):
        """-1, 0, or 1 against the semiring unit."""
        return gmean_cmp(self.semiring, self.pair(), (self.semiring.one, 1))

    def cmp(self, other):
        return gmean_cmp(self.semiring, self.pair(), other.pair())


@dataclass(frozen=True)
class CriticalGraph:
    """Nodes and edges lying on some cycle of maximum geometric mean.

    ``components`` are the strongly connected components of the critical
    subgraph (tuples of original node ids); ``cyclicity`` is the lcm over
    components of the gcd of their cycle lengths. ``graph`` keeps the
    original weights on the critical edges, on the full node set.
    """

    nodes: tuple
    edges: tuple
    components: tuple
    cyclicity: int
    graph: Digraph


def _karp_best_pair(a, comp):
    """Best cycle-mean pair inside one nontrivial component, via Karp."""
    sr = a.semiring
    m = len(comp)
    index = {v: t for t, v in enumerate(comp)}
    in_edges = [[] for _ in comp]
    for u in comp:
        for t, w in enumerate(a.rows[u]):
            if t in index and not sr.is_zero(w):
                in_edges[index[t]].append((index[u], w))
    zero = sr.zero
    d = [zero] * m
    d[0] = sr.one
    table = [d]
    for _ in range(m):
        prev = table[-1]
        nxt = []
        for v in range(m):
            acc = zero
            for u, w in in_edges[v]:
                if not sr.is_zero(prev[u]):
                    acc = sr.add(acc, sr.mul(prev[u], w))
            nxt.append(acc)
        table.append(nxt)
    best = None
    last = table[m]
    for v in range(m):
        if sr.is_zero(last[v]):
            continue
        inner = None
        for k in range(m):
            if sr.is_zero(table[k][v]):
                continue
            pair = (sr.div(last[v], table[k][v]), m - k)
            if inner is None or gmean_cmp(sr, pair, inner) < 0:
                inner = pair
        if inner is not None and (best is None or gmean_cmp(sr, inner, best) > 0):
            best = inner
    return best


def _closure_generic(rows, add, mul, is_zero):
    """Floyd-Warshall closure over arbitrary scalar callbacks."""
    d = [list(r) for r in rows]
    n = len(d)
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if is_zero(dik):
                continue
            di = d[i]
            for j in range(n):
                if not is_zero(dk[j]):
                    di[j] = add(di[j], mul(dik, dk[j]))
    return d


def _critical_edges(a, lam_pair):
    """Edges on cycles attaining the mean ``lam_pair``; exact in all modes.

    An edge is critical iff edge (x) best-path-back equals one in the
    normalized matrix. When the normalization constant is irrational in
    exact max-times mode the computation runs on symbolic pairs instead.
    """
    sr = a.semiring
    n = a.n
    lam = gmean_value(sr, lam_pair)
    if lam is not None:
        inv = sr.div(sr.one, lam)
        norm = [[sr.mul(inv, v) for v in row] for row in a.rows]
        closure = _closure_generic(norm, sr.add, sr.mul, sr.is_zero)
        one = sr.one
        crit = set()
        for i in range(n):
            for j in range(n):
                if sr.is_zero(norm[i][j]):
                    continue
                back = one if i == j else closure[j][i]
                if not sr.is_zero(back) and sr.eq(sr.mul(norm[i][j], back), one):
                    crit.add((i, j))
        return frozenset(crit)

    # Symbolic route: value (q, m) stands for q * lam^(-m), lam = w0^(1/l0).
    w0, l0 = lam_pair

    def le(x, y):
        return x[0] ** l0 * w0 ** y[1] <= y[0] ** l0 * w0 ** x[1]

    def add(x, y):
        return y if le(x, y) else x

    def mul(x, y):
        return (x[0] * y[0], x[1] + y[1])

    def is_zero(x):
        return x is None

    def mul_opt(x, y):
        return None if x is None or y is None else mul(x, y)

    def add_opt(x, y):
        if x is None:
            return y
        if y is None:
            return x
        return add(x, y)

    rows = [
        [None if sr.is_zero(v) else (v, 1) for v in row] for row in a.rows
    ]
    closure = _closure_generic(rows, add_opt, mul_opt, is_zero)
    one = (sr.one, 0)

    def is_one(x):
        return x is not None and x[0] ** l0 == w0 ** x[1]

    crit = set()
    for i in range(n):
        for j in range(n):
            if rows[i][j] is None:
                continue
            back = one if i == j else closure[j][i]
            if is_one(mul_opt(rows[i][j], back)):
                crit.add((i, j))
    return frozenset(crit)


def _cycle_in_edges(edges):
    """Some cycle in the edge set, by deterministic walk following."""
    succ = {}
    for i, j in sorted(edges):
        succ.setdefault(i, j)
    if not succ:
        return None
    start = min(succ)
    order = {start: 0}
    walk = [start]
    u = start
    while True:
        u = succ[u]
        if u in order:
            return tuple(walk[order[u]:]) + (u,)
        order[u] = len(walk)
        walk.append(u)


def _spectral_core(a):
    """(mean pair, critical edge set, witness cycle) of a square matrix."""
    sr = a.semiring
    g = digraph_of(a)
    dec = scc(g)
    best = None
    for comp, triv in zip(dec.components, dec.trivial):
        if triv:
            continue
        pair = _karp_best_pair(a, comp)
        if pair is not None and (best is None or gmean_cmp(sr, pair, best) > 0):
            best = pair
    if best is None:
        return (sr.zero, 1), frozenset(), None
    crit = _critical_edges(a, best)
    nodes = _cycle_in_edges(crit)
    if nodes is None:
        raise CertificationError("no cycle found in the critical edge set")
    witness = g.path(nodes)
    if not gmean_eq(sr, (witness.weight, witness.length), best):
        raise CertificationError(
            "witness cycle mean disagrees with the computed maximum"
        )
    return (witness.weight, witness.length), crit, witness


def max_cycle_gmean(a):
    """Maximum over cycles of the geometric mean of the cycle weight.

    Returns a CycleMean; acyclic input yields the zero mean with no
    witness. Exact mode keeps the mean as a (weight, length) pair.
    """
    sr = a.semiring
    pair, _, witness = _spectral_core(a)
    if witness is None:
        return CycleMean(sr.zero, 1, None, sr)
    return CycleMean(pair[0], pair[1], witness, sr)


def critical_graph(a):
    """Union of all cycles attaining the maximum cycle geometric mean."""
    sr = a.semiring
    pair, crit, witness = _spectral_core(a)
    if witness is None:
        raise AcyclicMatrixError(
            "the digraph has no cycle; the critical graph is undefined"
        )
    sub = Digraph(
        a.n,
        [(i, j, a.rows[i][j]) for (i, j) in sorted(crit)],
        sr,
    )
    dec = scc(sub)
    components = tuple(
        comp
        for comp, triv in zip(dec.components, dec.trivial)
        if not triv
    )
    nodes = tuple(sorted(v for comp in components for v in comp))
    renum = {v: t for t, v in enumerate(nodes)}
    induced = Digraph(
        len(nodes),
        [(renum[i], renum[j], sr.one) for (i, j) in crit],
        sr,
    )
    return CriticalGraph(
        nodes=nodes,
        edges=tuple(sorted(crit)),
        components=components,
        cyclicity=graph_cyclicity(induced),
        graph=sub,
    )


def is_irreducible(a):
    """True when the digraph of the square matrix is strongly connected."""
    return scc(digraph_of(a)).is_single


def _normalized(a):
    """(A divided by its mean, mean scalar, CycleMean); exactness enforced."""
    sr = a.semiring
    mean = max_cycle_gmean(a)
    if mean.is_zero:
        raise AcyclicMatrixError("cannot normalize an acyclic matrix")
    lam = mean.exact_value()
    if lam is None:
        raise ExactnessError(
            f"the maximum cycle mean {mean.weight}^(1/{mean.length}) is "
            "irrational; use float mode"
        )
    inv = sr.div(sr.one, lam)
    return a.scale(inv), lam, mean


def _critical_edges_normalized(tilde, star):
    """Critical edges of a matrix already normalized to unit mean."""
    sr = tilde.semiring
    one = sr.one
    crit = set()
    for i in range(tilde.n):
        for j in range(tilde.n):
            v = tilde.rows[i][j]
            if sr.is_zero(v):
                continue
            back = star[j, i]
            if not sr.is_zero(back) and sr.eq(sr.mul(v, back), one):
                crit.add((i, j))
    return crit


def eigenspace_basis(a):
    """One star column per critical component of the normalized matrix.

    The matrix must be irreducible with at least one cycle. Inside a
    critical component all star columns are proportional; this is verified
    and each component is represented by its smallest node's column.
    """
    sr = a.semiring
    if not is_irreducible(a):
        raise NotIrreducibleError("eigenvectors need an irreducible matrix")
    tilde, _, _ = _normalized(a)
    star = kleene_star(tilde)
    crit = _critical_edges_normalized(tilde, star)
    sub = Digraph(a.n, [(i, j, sr.one) for (i, j) in crit], sr)
    dec = scc(sub)
    components = [
        comp for comp, triv in zip(dec.components, dec.trivial) if not triv
    ]
    reps = []
    for comp in components:
        r = comp[0]
        reps.append(r)
        for v in comp[1:]:
            factor = star[r, v]
            for i in range(a.n):
                if not sr.eq(star[i, v], sr.mul(star[i, r], factor)):
                    raise CertificationError(
                        "star columns inside a critical component are not "
                        "proportional"
                    )
    return tuple(star.col(r) for r in sorted(reps))


def principal_eigenvector(a):
    """Semiring sum of the eigenspace basis; positive for irreducible input."""
    basis = eigenspace_basis(a)
    x = basis[0]
    for v in basis[1:]:
        x = oplus(x, v)
    if not x.is_positive():
        raise CertificationError(
            "principal eigenvector of an irreducible matrix must be positive"
        )
    return x


def is_eigenvector(a, x, lam):
    """Check A (x) x == lam (x) x with a nonzero x, under the mode's equality."""
    sr = a.semiring
    if isinstance(x, (list, tuple)):
        x = MaxVector(x, sr)
    if all(sr.is_zero(v) for v in x):
        return False
    lam = sr.coerce(lam)
    return otimes(a, x).allclose(x.scale(lam))
