"""Asymptotics of matrix powers: periodicity, CSR form, expansions.

Powers of a matrix divided by its top cycle geometric mean eventually
repeat: A^(t+p) equals A^t entrywise once t passes a transient. The
eventual period is governed by the cyclicity of the critical graph, and
the repeating tail factors through the critical nodes as a product
C (x) S^t (x) R. Removing the critical nodes and repeating the
factorization yields a finite expansion of A^t as a max-combination of
such products with strictly decreasing coefficients, valid for all large
t; the gap between the top two coefficients bounds how large t must be.

Everything here certifies against directly computed powers before
returning, so the reported transients and validity onsets are observed
facts about the matrix, not just theory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    CertificationError,
    InapplicableError,
    IterationBudgetError,
    NotNormalizedError,
)
from .matrix import (
    MaxMatrix,
    kleene_star,
    mat_power,
    oplus,
    otimes,
    semiring_convert,
)
from .semiring import PLUS, Semiring
from .spectral import critical_graph, max_cycle_gmean, _normalized


@dataclass(frozen=True)
class PeriodicityProfile:
    """Observed eventual periodicity of normalized powers.

    transient is the least T >= 1 and period the least p with
    tilde^(T+p) == tilde^T; one such equality propagates to all later
    exponents. powers holds the witness window tilde^T .. tilde^(T+p).
    predicted_period is the critical graph's cyclicity.
    """

    transient: int
    period: int
    predicted_period: int
    lam: object
    powers: tuple
    budget: int


def _scan_periodicity(m, budget):
    """First repeat among the powers of m: (transient, period, powers).

    Scans exponents upward, comparing each power against all earlier
    ones; the first repeat pins down the minimal eventual period and the
    minimal transient for it, since one equality propagates forever by
    multiplicativity. Raises IterationBudgetError when no repeat shows up
    within the budget.
    """
    powers = [None, m]
    for t in range(2, budget + 1):
        powers.append(otimes(powers[-1], m))
        for p in range(1, t):
            if powers[t].allclose(powers[t - p]):
                return t - p, p, powers
    raise IterationBudgetError(
        f"no repetition among the first {budget} powers; raise the budget "
        "or check that the matrix really has ultimately periodic powers"
    )


def _transient_with_growth(m, budget):
    """Transient of the powers of m, growing the default budget on demand.

    An explicit budget is a hard cap. The default starts at the usual
    3n^2 + 2 gamma and doubles a few times, because that figure is only
    the conjectured magnitude of the transient, not a proven bound.
    """
    if budget is not None:
        return _scan_periodicity(m, budget)[0]
    b = 3 * m.n * m.n + 2 * critical_graph(m).cyclicity
    for _ in range(7):
        try:
            return _scan_periodicity(m, b)[0]
        except IterationBudgetError:
            b *= 2
    return _scan_periodicity(m, b)[0]


def transient_and_period(a, budget=None):
    """Transient and eventual period of the powers of a unit-mean matrix.

    The maximum cycle geometric mean must equal one, or no power can ever
    repeat; callers normalize first (normalize_to_unit). Irreducibility
    is not required, but only irreducible matrices are guaranteed to
    repeat at all: reducible ones with sub-unit classes shrink forever
    and exhaust the budget (default 3n^2 + 2 cyclicity).
    """
    mean = max_cycle_gmean(a)
    if mean.cmp_one() != 0:
        raise NotNormalizedError(
            "the power sequence repeats only at maximum cycle mean 1; "
            "divide by the mean first (normalize_to_unit)"
        )
    gamma = critical_graph(a).cyclicity
    if budget is None:
        budget = 3 * a.n * a.n + 2 * gamma
    transient, period, powers = _scan_periodicity(a, budget)
    return PeriodicityProfile(
        transient=transient,
        period=period,
        predicted_period=gamma,
        lam=mean,
        powers=tuple(powers[transient : transient + period + 1]),
        budget=budget,
    )


def critical_matrix(a):
    """The matrix keeping only entries on maximum-mean cycles of a."""
    sr = a.semiring
    cg = critical_graph(a)
    rows = [[sr.zero] * a.n for _ in range(a.n)]
    for i, j, w in cg.graph.edges:
        rows[i][j] = w
    return MaxMatrix._raw(rows, sr)


def normalize_to_unit(a):
    """Divide a by its top cycle geometric mean; returns (tilde, mean).

    Exact max-times matrices whose top mean is an irrational root raise
    ExactnessError; rerun in float mode for those. Acyclic matrices have
    mean zero and raise AcyclicMatrixError.
    """
    tilde, _lam, mean = _normalized(a)
    return tilde, mean


def _csr_parts(a):
    """Extract the C, S, R factors of a around its critical nodes."""
    sr = a.semiring
    tilde, lam_scalar, mean = _normalized(a)
    cg = critical_graph(a)
    gamma = cg.cyclicity
    crit = list(cg.nodes)
    tgam = mat_power(tilde, gamma)
    star = kleene_star(tgam)
    c = star.restrict(range(a.n), crit)
    r = star.restrict(crit, range(a.n))
    pos = {node: k for k, node in enumerate(crit)}
    k = len(crit)
    s_rows = [[sr.zero] * k for _ in range(k)]
    for i, j, _w in cg.graph.edges:
        s_rows[pos[i]][pos[j]] = tilde.rows[i][j]
    s = MaxMatrix._raw(s_rows, sr)
    return tilde, lam_scalar, mean, gamma, tuple(crit), c, s, r


def strong_path_table(a, t):
    """Best weights of length-t normalized walks through a critical node.

    Entry (i, j) is the maximum weight among walks from i to j of exactly
    t edges in the normalized matrix that visit at least one critical
    node (endpoints count); zero when no such walk exists. For large t
    this equals C (x) S^t (x) R entry by entry.
    """
    if t < 1:
        raise ValueError("walk length must be at least 1")
    sr = a.semiring
    n = a.n
    tilde, _lam, _mean = _normalized(a)
    crit = set(critical_graph(a).nodes)
    f = [
        [
            tilde.rows[i][j] if (i in crit or j in crit) else sr.zero
            for j in range(n)
        ]
        for i in range(n)
    ]
    power = tilde
    for _step in range(2, t + 1):
        power = otimes(power, tilde)
        f = otimes(tilde, MaxMatrix._raw(f, sr)).rows
        f = [
            list(power.rows[i]) if i in crit else list(f[i])
            for i in range(n)
        ]
    return MaxMatrix._raw([list(row) for row in f], sr)


def strong_path_weight(a, i, j, t):
    """Best weight of one length-t critical-node walk from i to j."""
    return strong_path_table(a, t).rows[i][j]


@dataclass(frozen=True)
class CsrTriple:
    """The certified factorization A^t == lam^t C (x) S^t (x) R.

    Holds for every t >= transient; certified_from marks where the
    periodicity of both sides makes the window check conclusive, and
    transient the observed onset found by scanning below it.
    """

    lam: object
    lam_pair: tuple
    c: MaxMatrix
    s: MaxMatrix
    r: MaxMatrix
    gamma: int
    transient: int
    certified_from: int
    critical_nodes: tuple


def csr_decompose(a, budget=None):
    """Factor the eventual powers of a through its critical nodes.

    C takes the critical columns of the star of tilde^gamma, R the
    critical rows, and S the critical submatrix of tilde restricted to
    critical edges. The window where both sides are provably periodic is
    checked exhaustively; failure raises CertificationError.
    """
    tilde, lam_scalar, mean, gamma, crit, c, s, r = _csr_parts(a)
    start = max(
        _transient_with_growth(tilde, budget),
        _transient_with_growth(s, budget),
    )
    lhs = mat_power(tilde, start)
    s_pow = mat_power(s, start)
    for t in range(start, start + gamma):
        rhs = otimes(otimes(c, s_pow), r)
        if not lhs.allclose(rhs):
            raise CertificationError(
                f"power {t} of the normalized matrix disagrees with its "
                "C S^t R factorization inside the certified window"
            )
        lhs = otimes(lhs, tilde)
        s_pow = otimes(s_pow, s)
    onset = start
    while onset > 1:
        t = onset - 1
        lhs = mat_power(tilde, t)
        rhs = otimes(otimes(c, mat_power(s, t)), r)
        if not lhs.allclose(rhs):
            break
        onset = t
    return CsrTriple(
        lam=lam_scalar,
        lam_pair=(mean.weight, mean.length),
        c=c,
        s=s,
        r=r,
        gamma=gamma,
        transient=onset,
        certified_from=start,
        critical_nodes=crit,
    )


def csr_power(triple, t):
    """Evaluate lam^t C (x) S^t (x) R; matches A^t for t >= transient."""
    sr = triple.c.semiring
    prod = otimes(otimes(triple.c, mat_power(triple.s, t)), triple.r)
    return prod.scale(sr.power(triple.lam, t))


@dataclass(frozen=True)
class CsrTerm:
    """One summand coefficient^t C (x) S^t (x) R of a power expansion."""

    coefficient: object
    pair: tuple
    c: MaxMatrix
    s: MaxMatrix
    r: MaxMatrix
    gamma: int
    critical_nodes: tuple


@dataclass(frozen=True)
class Expansion:
    """A^t as a max-combination of CSR terms, valid from validity_start.

    Coefficients decrease strictly; equality with directly computed
    powers was observed on [validity_start, horizon]. validity_start is
    None when no onset with a safe margin fit inside the horizon.
    """

    terms: tuple
    validity_start: int
    horizon: int
    n: int
    semiring: Semiring


def nachtigall_expansion(a, horizon=None):
    """Expand powers of a into CSR terms of successively lighter cycles.

    Each round factors the current submatrix around its critical nodes,
    embeds the factors back into full size, then deletes those nodes and
    repeats until no cycles remain. The validity onset is measured by
    comparing against directly computed powers up to the horizon, with a
    safety margin of twice the combined period. With no explicit horizon
    the default one is doubled a few times as needed; if the onset still
    cannot be certified the expansion is returned with validity_start
    None instead of raising.
    """
    sr = a.semiring
    n = a.n
    alive = list(range(n))
    terms = []
    while alive:
        sub = a.restrict(alive)
        if max_cycle_gmean(sub).is_zero:
            break
        _tilde, lam_scalar, mean, gamma, crit_local, c, s, r = _csr_parts(sub)
        crit_orig = tuple(alive[i] for i in crit_local)
        k = len(crit_local)
        c_rows = [[sr.zero] * k for _ in range(n)]
        r_rows = [[sr.zero] * n for _ in range(k)]
        for local, orig in enumerate(alive):
            for col in range(k):
                c_rows[orig][col] = c.rows[local][col]
            for row in range(k):
                r_rows[row][orig] = r.rows[row][local]
        terms.append(
            CsrTerm(
                coefficient=lam_scalar,
                pair=(mean.weight, mean.length),
                c=MaxMatrix._raw(c_rows, sr),
                s=s,
                r=MaxMatrix._raw(r_rows, sr),
                gamma=gamma,
                critical_nodes=crit_orig,
            )
        )
        dropped = set(crit_orig)
        alive = [v for v in alive if v not in dropped]
    combined = math.lcm(*(t.gamma for t in terms)) if terms else 1

    def measure(h):
        """Longest all-agreeing tail of the first h powers, as its onset."""
        power = a
        s_pows = [mat_power(t.s, 1) for t in terms]
        coeffs = [t.coefficient for t in terms]
        agree = [False]
        for t in range(1, h + 1):
            if t > 1:
                power = otimes(power, a)
                s_pows = [otimes(p, term.s)
                          for p, term in zip(s_pows, terms)]
                coeffs = [sr.mul(cf, term.coefficient)
                          for cf, term in zip(coeffs, terms)]
            rhs = MaxMatrix.zeros(n, n, semiring=sr)
            for term, sp, cf in zip(terms, s_pows, coeffs):
                rhs = oplus(rhs, otimes(otimes(term.c, sp), term.r).scale(cf))
            agree.append(power.allclose(rhs))
        v = h + 1
        while v > 1 and agree[v - 1]:
            v -= 1
        return v

    explicit = horizon is not None
    h = horizon if explicit else 3 * n * n + 2 * combined
    attempts = 1 if explicit else 8
    for _ in range(attempts):
        v = measure(h)
        # insist on a safety margin so a lucky coincidence right at the
        # horizon is never mistaken for the true onset
        if v <= h - 2 * combined:
            return Expansion(
                terms=tuple(terms),
                validity_start=v,
                horizon=h,
                n=n,
                semiring=sr,
            )
        if not explicit:
            h *= 2
    return Expansion(
        terms=tuple(terms),
        validity_start=None,
        horizon=h,
        n=n,
        semiring=sr,
    )


def expansion_power(expansion, t):
    """Evaluate the expansion at exponent t >= 1."""
    sr = expansion.semiring
    out = MaxMatrix.zeros(expansion.n, expansion.n, semiring=sr)
    for term in expansion.terms:
        prod = otimes(otimes(term.c, mat_power(term.s, t)), term.r)
        out = oplus(out, prod.scale(sr.power(term.coefficient, t)))
    return out


@dataclass(frozen=True)
class TransientBound:
    """A spectral-gap bound on the expansion onset, with the observed value.

    bound and the two leading coefficients are reported as floats in the
    matrix's own domain (multiplicative for max-times, additive for
    max-plus).
    """

    bound: float
    measured: int
    lam1: float
    lam2: float


def transient_bound(a):
    """Bound the expansion onset by the gap between the top two coefficients.

    The bound is 2 n^2 times the log-spread of the positive entries over
    the log-gap of the two leading expansion coefficients, evaluated in
    float arithmetic; the onset itself is measured in the matrix's own
    mode. Raises InapplicableError when the expansion has fewer than two
    terms, since then there is no gap to measure.
    """
    sr = a.semiring
    expansion = nachtigall_expansion(a)
    if len(expansion.terms) < 2:
        raise InapplicableError(
            "the expansion has fewer than two terms, so there is no "
            "spectral gap to bound the onset with"
        )
    if expansion.validity_start is None:
        raise IterationBudgetError(
            "the expansion onset could not be certified within the "
            "horizon, so there is no measured value to report"
        )
    if sr.exact:
        f = semiring_convert(a, Semiring(sr.domain, exact=False))
    else:
        f = a
    fsr = f.semiring
    lam1 = fsr.to_float(expansion.terms[0].coefficient)
    lam2 = fsr.to_float(expansion.terms[1].coefficient)
    if fsr.domain == PLUS:
        logs = [v for row in f.rows for v in row if not fsr.is_zero(v)]
        gap = lam1 - lam2
    else:
        logs = [
            math.log(v) for row in f.rows for v in row if not fsr.is_zero(v)
        ]
        gap = math.log(lam1) - math.log(lam2)
    spread = max(logs) - min(logs)
    n = f.n
    return TransientBound(
        bound=2.0 * n * n * spread / gap,
        measured=expansion.validity_start,
        lam1=lam1,
        lam2=lam2,
    )
