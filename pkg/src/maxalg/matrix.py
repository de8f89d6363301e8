"""Dense vectors and matrices over a max semiring, and their core operations.

Everything here is immutable and pure: operations return new objects. The
Kleene star is computed by Floyd-Warshall closure and reports divergence
with a witness cycle, so this layer never needs the spectral machinery.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .digraph import Path
from .errors import (
    DimensionError,
    DivergenceError,
    ExactnessError,
    ModeError,
    NoConstraintError,
    UndefinedDivisionError,
)
from .semiring import EXACT_TIMES, NEG_INF, PLUS, TIMES, Semiring


def _check_same_semiring(a, b):
    if a.semiring != b.semiring:
        raise ModeError(
            f"operands live in different modes: {a.semiring} vs {b.semiring}"
        )


class MaxVector:
    """A vector of semiring scalars."""

    __slots__ = ("semiring", "entries")

    def __init__(self, entries, semiring=EXACT_TIMES):
        self.semiring = semiring
        self.entries = tuple(semiring.coerce(v) for v in entries)

    @classmethod
    def _raw(cls, entries, semiring):
        v = object.__new__(cls)
        v.semiring = semiring
        v.entries = tuple(entries)
        return v

    @classmethod
    def ones(cls, n, semiring=EXACT_TIMES):
        return cls._raw([semiring.one] * n, semiring)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __eq__(self, other):
        return (
            isinstance(other, MaxVector)
            and self.semiring == other.semiring
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.semiring, self.entries))

    def __repr__(self):
        return f"MaxVector({list(self.entries)!r})"

    def __add__(self, other):
        return oplus(self, other)

    def is_positive(self):
        """True when no entry is the semiring zero."""
        sr = self.semiring
        return all(not sr.is_zero(v) for v in self.entries)

    def allclose(self, other):
        _check_same_semiring(self, other)
        if len(self) != len(other):
            return False
        sr = self.semiring
        return all(sr.eq(a, b) for a, b in zip(self.entries, other.entries))

    def scale(self, c):
        sr = self.semiring
        c = sr.coerce(c)
        return MaxVector._raw([sr.mul(c, v) for v in self.entries], sr)


class MaxMatrix:
    """A dense matrix of semiring scalars.

    Usually square; rectangular shapes appear as basis matrices and in
    residuals. Operations that need squareness access ``.n`` and fail on
    rectangular inputs.
    """

    __slots__ = ("semiring", "rows", "nrows", "ncols")

    def __init__(self, rows, semiring=EXACT_TIMES):
        self.semiring = semiring
        grid = tuple(tuple(semiring.coerce(v) for v in row) for row in rows)
        if not grid or not grid[0]:
            raise DimensionError("matrices must have at least one entry")
        widths = {len(r) for r in grid}
        if len(widths) != 1:
            raise DimensionError("rows have unequal lengths")
        self.rows = grid
        self.nrows = len(grid)
        self.ncols = len(grid[0])

    @classmethod
    def _raw(cls, rows, semiring):
        m = object.__new__(cls)
        m.semiring = semiring
        m.rows = tuple(tuple(r) for r in rows)
        m.nrows = len(m.rows)
        m.ncols = len(m.rows[0])
        return m

    @classmethod
    def identity(cls, n, semiring=EXACT_TIMES):
        one, zero = semiring.one, semiring.zero
        return cls._raw(
            [[one if i == j else zero for j in range(n)] for i in range(n)],
            semiring,
        )

    @classmethod
    def zeros(cls, nrows, ncols=None, semiring=EXACT_TIMES):
        zero = semiring.zero
        ncols = nrows if ncols is None else ncols
        return cls._raw([[zero] * ncols for _ in range(nrows)], semiring)

    @classmethod
    def diagonal(cls, vector):
        sr = vector.semiring
        zero = sr.zero
        n = len(vector)
        return cls._raw(
            [[vector[i] if i == j else zero for j in range(n)] for i in range(n)],
            sr,
        )

    @property
    def n(self):
        if self.nrows != self.ncols:
            raise DimensionError(
                f"operation needs a square matrix, got {self.nrows}x{self.ncols}"
            )
        return self.nrows

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, key):
        i, j = key
        return self.rows[i][j]

    def row(self, i):
        return MaxVector._raw(self.rows[i], self.semiring)

    def col(self, j):
        return MaxVector._raw([r[j] for r in self.rows], self.semiring)

    def diag(self):
        return MaxVector._raw(
            [self.rows[i][i] for i in range(self.n)], self.semiring
        )

    def transpose(self):
        return MaxMatrix._raw(zip(*self.rows), self.semiring)

    def restrict(self, row_idx, col_idx=None):
        """Submatrix on the given row and column index sequences."""
        col_idx = row_idx if col_idx is None else col_idx
        return MaxMatrix._raw(
            [[self.rows[i][j] for j in col_idx] for i in row_idx],
            self.semiring,
        )

    def scale(self, c):
        """Entrywise semiring product with the scalar c."""
        sr = self.semiring
        c = sr.coerce(c)
        return MaxMatrix._raw(
            [[sr.mul(c, v) for v in row] for row in self.rows], sr
        )

    def __eq__(self, other):
        return (
            isinstance(other, MaxMatrix)
            and self.semiring == other.semiring
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.semiring, self.rows))

    def __repr__(self):
        body = [list(r) for r in self.rows]
        return f"MaxMatrix({body!r})"

    def __add__(self, other):
        return oplus(self, other)

    def __matmul__(self, other):
        return otimes(self, other)

    def __pow__(self, t):
        return mat_power(self, t)

    def allclose(self, other):
        """Entrywise equality under the mode's tolerance."""
        _check_same_semiring(self, other)
        if self.shape != other.shape:
            return False
        sr = self.semiring
        return all(
            sr.eq(a, b)
            for ra, rb in zip(self.rows, other.rows)
            for a, b in zip(ra, rb)
        )

    def positive_entries(self):
        """Index pairs of the entries above the semiring zero."""
        sr = self.semiring
        return [
            (i, j)
            for i, row in enumerate(self.rows)
            for j, v in enumerate(row)
            if not sr.is_zero(v)
        ]


def oplus(a, b):
    """Entrywise semiring sum (max) of two matrices or two vectors."""
    _check_same_semiring(a, b)
    sr = a.semiring
    if isinstance(a, MaxVector) and isinstance(b, MaxVector):
        if len(a) != len(b):
            raise DimensionError("vector lengths differ")
        return MaxVector._raw(
            [sr.add(x, y) for x, y in zip(a.entries, b.entries)], sr
        )
    if a.shape != b.shape:
        raise DimensionError(f"shapes differ: {a.shape} vs {b.shape}")
    return MaxMatrix._raw(
        [
            [sr.add(x, y) for x, y in zip(ra, rb)]
            for ra, rb in zip(a.rows, b.rows)
        ],
        sr,
    )


def otimes(a, b):
    """Semiring matrix product; the right factor may be a vector."""
    _check_same_semiring(a, b)
    sr = a.semiring
    add, mul, zero = sr.add, sr.mul, sr.zero
    if isinstance(b, MaxVector):
        if a.ncols != len(b):
            raise DimensionError(
                f"cannot multiply {a.shape} by length-{len(b)} vector"
            )
        out = []
        for row in a.rows:
            acc = zero
            for x, y in zip(row, b.entries):
                acc = add(acc, mul(x, y))
            out.append(acc)
        return MaxVector._raw(out, sr)
    if a.ncols != b.nrows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    bcols = list(zip(*b.rows))
    out = []
    for row in a.rows:
        out_row = []
        for col in bcols:
            acc = zero
            for x, y in zip(row, col):
                acc = add(acc, mul(x, y))
            out_row.append(acc)
        out.append(out_row)
    return MaxMatrix._raw(out, sr)


def mat_power(a, t):
    """t-th semiring power by repeated squaring, with a^0 the identity."""
    n = a.n
    if t < 0 or t != int(t):
        raise ValueError("matrix powers need an integer exponent >= 0")
    t = int(t)
    result = MaxMatrix.identity(n, a.semiring)
    base = a
    while t:
        if t & 1:
            result = otimes(result, base)
        t >>= 1
        if t:
            base = otimes(base, base)
    return result


def _closure_rows(a):
    """Floyd-Warshall closure: best path weights, no identity added."""
    sr = a.semiring
    add, mul = sr.add, sr.mul
    d = [list(row) for row in a.rows]
    n = len(d)
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if sr.is_zero(dik):
                continue
            di = d[i]
            for j in range(n):
                di[j] = add(di[j], mul(dik, dk[j]))
    return d


def _divergence_witness(a):
    """A cycle of weight above one, found through the power sequence."""
    sr = a.semiring
    n = a.n
    powers = [MaxMatrix.identity(n, sr), a]
    hit = None
    for length in range(1, n + 1):
        if len(powers) <= length:
            powers.append(otimes(powers[-1], a))
        p = powers[length]
        for i in range(n):
            if sr.lt(sr.one, p[i, i]):
                hit = (length, i)
                break
        if hit:
            break
    if hit is None:
        return None
    length, start = hit
    # Reconstruct a closed walk achieving p[start, start], then take its
    # heaviest elementary cycle; at the minimal length the walk is one.
    nodes = [start]
    u = start
    for remaining in range(length, 0, -1):
        target = powers[remaining][u, start]
        nxt = None
        for v in range(n):
            cand = sr.mul(a[u, v], powers[remaining - 1][v, start])
            if cand == target or (not sr.exact and sr.eq(cand, target)):
                nxt = v
                break
        if nxt is None:  # float wobble: fall back to the best candidate
            nxt = max(
                range(n),
                key=lambda v: sr.to_float(
                    sr.mul(a[u, v], powers[remaining - 1][v, start])
                ),
            )
        nodes.append(nxt)
        u = nxt
    best = None
    stack = []
    pos = {}
    for v in nodes:
        if v in pos:
            p = pos[v]
            cyc = stack[p:] + [v]
            w = sr.one
            for x, y in zip(cyc, cyc[1:]):
                w = sr.mul(w, a[x, y])
            if best is None or sr.lt(best.weight, w):
                best = Path(tuple(cyc), w)
            for dropped in stack[p:]:
                del pos[dropped]
            del stack[p:]
        pos[v] = len(stack)
        stack.append(v)
    return best


def kleene_star(a):
    """I (+) A (+) ... (+) A^(n-1), or a divergence report.

    Converges exactly when every cycle weight is at most one; otherwise a
    DivergenceError carrying a witness cycle of weight above one is raised.
    """
    sr = a.semiring
    n = a.n
    closure = _closure_rows(a)
    for i in range(n):
        if sr.lt(sr.one, closure[i][i]):
            witness = _divergence_witness(a)
            raise DivergenceError(
                "the star diverges: a cycle has weight above one",
                witness=witness,
            )
    one = sr.one
    for i in range(n):
        closure[i][i] = sr.add(closure[i][i], one)
    return MaxMatrix._raw(closure, sr)


def entrywise_div(b, c):
    """Entrywise semiring quotient with the 0/0 = 0 convention.

    The zero pattern of b must be contained in that of c; a positive entry
    over a zero one raises UndefinedDivisionError.
    """
    _check_same_semiring(b, c)
    if b.shape != c.shape:
        raise DimensionError(f"shapes differ: {b.shape} vs {c.shape}")
    sr = b.semiring
    out = []
    for i, (rb, rc) in enumerate(zip(b.rows, c.rows)):
        out_row = []
        for j, (x, y) in enumerate(zip(rb, rc)):
            if sr.is_zero(y):
                if not sr.is_zero(x):
                    raise UndefinedDivisionError(
                        f"positive entry over zero at ({i}, {j})"
                    )
                out_row.append(sr.zero)
            else:
                out_row.append(sr.div(x, y))
        out.append(out_row)
    return MaxMatrix._raw(out, sr)


def left_residual(v, w):
    """Greatest X with V (x) X <= W, via column minima of quotients.

    X[i][j] = min over k with V[k][i] nonzero of W[k][j] / V[k][i]. A zero
    column of V leaves the corresponding row of X unconstrained and raises
    NoConstraintError.
    """
    _check_same_semiring(v, w)
    if v.nrows != w.nrows:
        raise DimensionError(
            f"row counts differ: {v.shape} vs {w.shape}"
        )
    sr = v.semiring
    out = []
    for i in range(v.ncols):
        support = [k for k in range(v.nrows) if not sr.is_zero(v.rows[k][i])]
        if not support:
            raise NoConstraintError(
                f"column {i} of the left factor is zero; the residual row "
                "is unbounded"
            )
        out.append(
            [
                min(sr.div(w.rows[k][j], v.rows[k][i]) for k in support)
                for j in range(w.ncols)
            ]
        )
    return MaxMatrix._raw(out, sr)


def _exact_power_exponent(value, base):
    """Integer e with base^e == value, or None. value > 0, base > 1."""
    if value == 1:
        return 0
    est = math.log(value) / math.log(base)
    for e in range(math.floor(est) - 1, math.floor(est) + 3):
        if base ** e == value:
            return e
    return None


def semiring_convert(a, target, base=None):
    """Move a matrix between domains or modes.

    Cross-domain conversion is entrywise log/exp with zero <-> -inf. In
    exact mode, entries must be integer powers of ``base`` (default 2) and
    the conversion is a bijection on those; in float mode the natural
    logarithm is used unless a base is given. Converting float values into
    an exact target across domains is refused as lossy.
    """
    src = a.semiring
    if not isinstance(target, Semiring):
        raise ModeError("target must be a Semiring")
    if src.domain == target.domain:
        if src.exact == target.exact:
            return a
        if target.exact:
            rows = [
                [v if v == NEG_INF else Fraction(v) for v in row]
                for row in a.rows
            ]
        else:
            rows = [[src.to_float(v) for v in row] for row in a.rows]
        return MaxMatrix._raw(rows, target)

    to_plus = target.domain == PLUS
    if target.exact:
        if not src.exact:
            raise ExactnessError(
                "cross-domain conversion from float into exact mode is lossy"
            )
        base = Fraction(2) if base is None else Fraction(base)
        if base <= 1:
            raise ValueError("base must exceed 1")
        rows = []
        for row in a.rows:
            out = []
            for v in row:
                if src.is_zero(v):
                    out.append(target.zero)
                    continue
                if to_plus:
                    e = _exact_power_exponent(v, base)
                    if e is None:
                        raise ExactnessError(
                            f"entry {v} is not an integer power of base "
                            f"{base}; use float mode"
                        )
                    out.append(Fraction(e))
                else:
                    if v != int(v):
                        raise ExactnessError(
                            f"exponent {v} is not an integer; the image "
                            "would be irrational"
                        )
                    out.append(base ** int(v))
            rows.append(out)
        return MaxMatrix._raw(rows, target)

    log_base = 1.0 if base is None else math.log(base)
    rows = []
    for row in a.rows:
        out = []
        for v in row:
            if src.is_zero(v):
                out.append(target.zero)
            elif to_plus:
                out.append(math.log(src.to_float(v)) / log_base)
            else:
                out.append(math.exp(src.to_float(v) * log_base))
        rows.append(out)
    return MaxMatrix._raw(rows, target)
