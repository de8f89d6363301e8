"""Max-balancing by diagonal similarity.

A matrix is max-balanced when every nonzero entry b[i][j] closes into a
cycle whose edges all weigh at least b[i][j]; equivalently, across every
directed cut the two maximum crossing weights agree. max_balance finds the
similarity scaling producing such a matrix by repeatedly freezing the
heaviest cycles: find the top cycle geometric mean, saturate its critical
edges with an eigenvector scaling, collapse each critical component to a
point, and recurse on the strictly lighter remainder.

Exact max-times inputs whose level means are irrational roots cannot be
balanced in exact arithmetic; the run restarts in float mode and the
certificate records the downgrade.
"""

from __future__ import annotations

from dataclasses import dataclass

from .digraph import Digraph, digraph_of, scc
from .errors import (
    CertificationError,
    ExactnessError,
    NoScalingError,
    SizeLimitError,
)
from .matrix import MaxMatrix, MaxVector, kleene_star, semiring_convert
from .scaling import DiagonalScaling, apply_scaling
from .semiring import Semiring, gmean_cmp
from .spectral import _critical_edges_normalized, _normalized


@dataclass(frozen=True)
class BalancingCertificate:
    """The scaling, the balanced matrix, and what was verified about them.

    levels holds, per strongly connected component (ordered by smallest
    node), the sequence of frozen cycle means as (weight, length) pairs.
    exact_degraded flags a restart in float mode forced by an irrational
    level mean.
    """

    scaling: DiagonalScaling
    balanced: MaxMatrix
    checked_properties: tuple
    exact_degraded: bool
    levels: tuple


def is_max_balanced_cyclecover(b):
    """Every nonzero b[i][j] closes into a cycle of edges weighing >= it."""
    sr = b.semiring
    n = b.n
    for i in range(n):
        for j in range(n):
            w = b.rows[i][j]
            if sr.is_zero(w) or i == j:
                continue
            seen = {j}
            stack = [j]
            found = False
            while stack:
                u = stack.pop()
                if u == i:
                    found = True
                    break
                for v in range(n):
                    if v not in seen and sr.ge(b.rows[u][v], w):
                        seen.add(v)
                        stack.append(v)
            if not found:
                return False
    return True


def is_max_balanced_cut(b, size_limit=14):
    """Across every directed cut the two maximum crossing weights agree.

    Exhaustive over all 2^n - 2 cuts, so refuses matrices beyond
    size_limit nodes. An empty crossing set counts as the semiring zero.
    """
    sr = b.semiring
    n = b.n
    if n > size_limit:
        raise SizeLimitError(
            f"cut check enumerates 2^n subsets; {n} nodes exceeds the "
            f"limit of {size_limit}"
        )
    for mask in range(1, (1 << n) - 1):
        out_max = sr.zero
        in_max = sr.zero
        for i in range(n):
            i_in = mask >> i & 1
            for j in range(n):
                if i_in and not (mask >> j & 1):
                    out_max = sr.add(out_max, b.rows[i][j])
                elif not i_in and (mask >> j & 1):
                    in_max = sr.add(in_max, b.rows[i][j])
        if not sr.eq(out_max, in_max):
            return False
    return True


def _eigen_combination(star, crit_nodes, sr):
    cols = star.rows
    return [
        _fold_add(sr, [cols[i][v] for v in crit_nodes])
        for i in range(star.n)
    ]


def _fold_add(sr, values):
    acc = sr.zero
    for v in values:
        acc = sr.add(acc, v)
    return acc


def _balance_component(sub, sr):
    """Balance one strongly connected block; returns (local scaling, levels)."""
    m = sub.n
    members = [[k] for k in range(m)]
    cur = sub
    x_local = [sr.one] * m
    levels = []
    while cur.n > 1:
        tilde, _lam, mean = _normalized(cur)
        levels.append((mean.weight, mean.length))
        star = kleene_star(tilde)
        crit = _critical_edges_normalized(tilde, star)
        crit_nodes = sorted({i for i, _ in crit} | {j for _, j in crit})
        x_cur = _eigen_combination(star, crit_nodes, sr)
        for c, mult in enumerate(x_cur):
            for p in members[c]:
                x_local[p] = sr.mul(x_local[p], mult)
        scaled = [
            [
                sr.div(sr.mul(v, x_cur[j]), x_cur[i])
                for j, v in enumerate(row)
            ]
            for i, row in enumerate(cur.rows)
        ]
        crit_graph = Digraph(
            cur.n, [(i, j, sr.one) for i, j in crit], sr
        )
        dec = scc(crit_graph)
        merged = []
        for comp, triv in zip(dec.components, dec.trivial):
            if triv:
                merged.extend((k,) for k in comp)
            else:
                merged.append(comp)
        groups = sorted(merged, key=min)
        new_members = [
            sorted(p for c in g for p in members[c]) for g in groups
        ]
        new_rows = []
        for gi in groups:
            row = []
            for gj in groups:
                if gi is gj:
                    row.append(sr.zero)
                else:
                    row.append(
                        _fold_add(
                            sr,
                            [scaled[u][v] for u in gi for v in gj],
                        )
                    )
            new_rows.append(row)
        members = new_members
        cur = MaxMatrix._raw(new_rows, sr)
    return x_local, levels


def _max_balance_core(a, degraded):
    sr = a.semiring
    n = a.n
    g = digraph_of(a)
    dec = scc(g)
    for i, j, w in g.edges:
        if i != j and dec.component_of(i) != dec.component_of(j):
            raise NoScalingError(
                f"entry ({i}, {j}) joins different strongly connected "
                "components and lies on no cycle, so no scaling can "
                "balance it"
            )
    x_total = [sr.one] * n
    all_levels = []
    for comp in dec.components:
        if len(comp) == 1:
            continue
        sub = a.restrict(comp)
        x_local, levels = _balance_component(sub, sr)
        for k, node in enumerate(comp):
            x_total[node] = x_local[k]
        all_levels.append(tuple(levels))
    x = MaxVector._raw(x_total, sr)
    scaling = DiagonalScaling(x)
    balanced = scaling.apply(a)
    checked = []
    for seq in all_levels:
        for k in range(len(seq) - 1):
            if gmean_cmp(sr, seq[k + 1], seq[k]) >= 0:
                raise CertificationError(
                    "level means failed to decrease strictly"
                )
    checked.append("levels_strictly_decreasing")
    if not is_max_balanced_cyclecover(balanced):
        raise CertificationError(
            "scaled matrix failed the cycle cover check"
        )
    checked.append("cycle_cover")
    checked.append("scaling_positive")
    return BalancingCertificate(
        scaling=scaling,
        balanced=balanced,
        checked_properties=tuple(checked),
        exact_degraded=degraded,
        levels=tuple(all_levels),
    )


def max_balance(a):
    """Scale a to a max-balanced matrix and certify the result.

    Requires every nonzero off-diagonal entry to stay inside a strongly
    connected component; a bridging entry makes balancing impossible and
    raises NoScalingError. Exact max-times inputs fall back to float
    arithmetic when a level mean has no exact root; the certificate's
    exact_degraded flag records this.
    """
    try:
        return _max_balance_core(a, degraded=False)
    except ExactnessError:
        if not a.semiring.exact:
            raise
        target = Semiring(a.semiring.domain, exact=False)
        return _max_balance_core(semiring_convert(a, target), degraded=True)
