"""Commuting matrices: common eigenvectors and saturation digraphs.

Two commuting irreducible matrices share a positive eigenvector. The
construction here is explicit: the eigenvector cone of the first matrix,
spanned by the critical columns of its star, is carried into itself by
the second matrix; the action on cone coordinates is a small positive
matrix whose own principal eigenvector lifts to the common one. Scaling
both matrices by that vector and keeping only the entries scaled exactly
to one gives a pair of Boolean digraphs that still commute, and each
contains a cycle running inside the strongly connected territory of the
other.
"""

from __future__ import annotations

from dataclasses import dataclass

from .digraph import Digraph, Path, scc
from .errors import (
    CertificationError,
    DimensionError,
    ModeError,
    NotCommutingError,
    NotIrreducibleError,
    PatternViolationError,
    WitnessNotFoundError,
)
from .matrix import (
    MaxMatrix,
    MaxVector,
    kleene_star,
    left_residual,
    otimes,
    semiring_convert,
)
from .scaling import saturation_graph
from .semiring import Semiring
from .spectral import (
    _critical_edges_normalized,
    _normalized,
    eigenspace_basis,
    is_irreducible,
    principal_eigenvector,
)


def commutes(a, b):
    """Do a and b satisfy a (x) b == b (x) a (mode equality)?"""
    if a.shape != b.shape:
        raise DimensionError("matrices must share a shape to commute")
    if a.semiring != b.semiring:
        raise ModeError("matrices must share a semiring to commute")
    return otimes(a, b).allclose(otimes(b, a))


@dataclass(frozen=True)
class CommonEigenvector:
    """A positive vector x with A (x) x = lam_a x and B (x) x = lam_b x."""

    x: MaxVector
    lam_a: object
    lam_b: object

    def __iter__(self):
        return iter((self.x, self.lam_a, self.lam_b))


def _basis_matrix(a):
    basis = eigenspace_basis(a)
    n = len(basis[0])
    rows = [[col[i] for col in basis] for i in range(n)]
    return MaxMatrix._raw(rows, a.semiring)


def _principal_direction(k):
    """A principal eigenvector of the positive square matrix k."""
    sr = k.semiring
    tilde, _lam, _mean = _normalized(k)
    star = kleene_star(tilde)
    crit = _critical_edges_normalized(tilde, star)
    c = min(i for i, _ in crit)
    return star.col(c)


def _common_core(a, b):
    sr = a.semiring
    ta, lam_a, _mean_a = _normalized(a)
    tb, lam_b, _mean_b = _normalized(b)
    v = _basis_matrix(a)
    w = otimes(tb, v)
    k = left_residual(v, w)
    if not otimes(v, k).allclose(w):
        raise CertificationError(
            "the eigenvector cone of the first matrix is not carried "
            "into itself by the second"
        )
    z = _principal_direction(k)
    x = otimes(v, z)
    if not x.is_positive():
        raise CertificationError("lifted common eigenvector is not positive")
    if not otimes(a, x).allclose(x.scale(lam_a)):
        raise CertificationError(
            "candidate vector fails the first eigen-equation"
        )
    if not otimes(b, x).allclose(x.scale(lam_b)):
        raise CertificationError(
            "candidate vector fails the second eigen-equation"
        )
    return CommonEigenvector(x=x, lam_a=lam_a, lam_b=lam_b)


def _is_unit_matrix(m):
    return m.allclose(MaxMatrix.identity(m.n, m.semiring))


def common_eigenvector(a, b):
    """A positive common eigenvector of commuting irreducible a and b.

    Returns (x, lam_a, lam_b), both eigen-equations verified before
    return. The semiring unit matrix is accepted on either side even
    though it is reducible: every positive vector suits it, so the
    other matrix's principal eigenvector is returned. Float runs that
    fail their verification restart in exact arithmetic and return the
    exact result.
    """
    if not commutes(a, b):
        raise NotCommutingError("the matrices do not commute")
    sr = a.semiring
    unit_a = _is_unit_matrix(a)
    unit_b = _is_unit_matrix(b)
    if unit_a and unit_b:
        return CommonEigenvector(
            x=MaxVector.ones(a.n, sr), lam_a=sr.one, lam_b=sr.one
        )
    if unit_a or unit_b:
        other = b if unit_a else a
        if not is_irreducible(other):
            raise NotIrreducibleError(
                "the non-unit matrix of the pair is not irreducible"
            )
        x = principal_eigenvector(other)
        lam = _normalized(other)[1]
        if not otimes(other, x).allclose(x.scale(lam)):
            raise CertificationError(
                "candidate vector fails its eigen-equation"
            )
        if unit_a:
            return CommonEigenvector(x=x, lam_a=sr.one, lam_b=lam)
        return CommonEigenvector(x=x, lam_a=lam, lam_b=sr.one)
    if not is_irreducible(a):
        raise NotIrreducibleError("the first matrix is not irreducible")
    if not is_irreducible(b):
        raise NotIrreducibleError("the second matrix is not irreducible")
    try:
        return _common_core(a, b)
    except CertificationError:
        if sr.exact:
            raise
        target = Semiring(sr.domain, exact=True)
        return _common_core(
            semiring_convert(a, target), semiring_convert(b, target)
        )


@dataclass(frozen=True)
class BooleanDigraphPair:
    """Two digraphs with unit weights on a shared node set.

    verified_commuting records that the Boolean matrix products of the
    two graphs were checked equal in both orders.
    """

    g1: Digraph
    g2: Digraph
    verified_commuting: bool = False

    def __post_init__(self):
        if self.g1.n != self.g2.n:
            raise DimensionError("paired digraphs must share node count")

    def boolean_matrices(self):
        return _bool_matrix(self.g1), _bool_matrix(self.g2)


def _bool_matrix(g):
    sr = g.semiring
    rows = [[sr.zero] * g.n for _ in range(g.n)]
    for i, j, _w in g.edges:
        rows[i][j] = sr.one
    return MaxMatrix._raw(rows, sr)


def boolean_saturation_pair(a, b, x):
    """Boolean graphs of the entries x scales exactly to one, as a pair.

    Both matrices are first divided by their top cycle geometric mean;
    the common eigenvector x then scales every entry to at most one, and
    the saturated entries form the two digraphs. Their Boolean matrices
    are checked to commute before the pair is tagged.
    """
    sr = a.semiring
    if not isinstance(x, MaxVector):
        x = MaxVector(x, sr)
    ta, _lam_a, _ = _normalized(a)
    tb, _lam_b, _ = _normalized(b)
    sat_a = saturation_graph(ta, x)
    sat_b = saturation_graph(tb, x)
    m1 = _bool_matrix(sat_a.graph)
    m2 = _bool_matrix(sat_b.graph)
    if not otimes(m1, m2).allclose(otimes(m2, m1)):
        raise NotCommutingError(
            "the Boolean saturation matrices do not commute; x is not a "
            "common eigenvector of a commuting pair"
        )
    return BooleanDigraphPair(
        g1=sat_a.graph, g2=sat_b.graph, verified_commuting=True
    )


def _cycle_within(g, allowed, label):
    sr = g.semiring
    edges = [
        (i, j, w) for i, j, w in g.edges if i in allowed and j in allowed
    ]
    sub = Digraph(g.n, edges, sr)
    dec = scc(sub)
    for comp, triv in zip(dec.components, dec.trivial):
        if triv:
            continue
        comp_set = set(comp)
        succ = {}
        for i, j, _w in edges:
            if i in comp_set and j in comp_set:
                succ.setdefault(i, j)
                if j < succ[i]:
                    succ[i] = j
        start = min(comp)
        order = [start]
        index = {start: 0}
        u = start
        while True:
            u = succ[u]
            if u in index:
                break
            index[u] = len(order)
            order.append(u)
        nodes = tuple(order[index[u] :]) + (u,)
        weight = sr.one
        for t in range(len(nodes) - 1):
            weight = sr.mul(weight, sub.weight(nodes[t], nodes[t + 1]))
        return Path(nodes=nodes, weight=weight)
    raise WitnessNotFoundError(
        f"no cycle of {label} stays inside the strongly connected "
        "territory of the other graph; a precondition must be violated"
    )


def commuting_cycle_witness(pair):
    """Cycles of each graph inside the other's nontrivial components.

    Requires every node of both graphs to have an outgoing edge and the
    pair to commute; then each graph owns a cycle whose nodes all belong
    to nontrivial strongly connected components of the other. Absence of
    such a cycle raises WitnessNotFoundError and signals a violated
    precondition.
    """
    g1, g2 = pair.g1, pair.g2
    for label, g in (("the first graph", g1), ("the second graph", g2)):
        for v in range(g.n):
            if not g.successors(v):
                raise PatternViolationError(
                    f"node {v} of {label} has no outgoing edge"
                )
    if not pair.verified_commuting:
        m1 = _bool_matrix(g1)
        m2 = _bool_matrix(g2)
        if not otimes(m1, m2).allclose(otimes(m2, m1)):
            raise NotCommutingError("the paired digraphs do not commute")
    n2 = set(scc(g2).nontrivial_nodes())
    n1 = set(scc(g1).nontrivial_nodes())
    cycle1 = _cycle_within(g1, n2, "the first graph")
    cycle2 = _cycle_within(g2, n1, "the second graph")
    return cycle1, cycle2
