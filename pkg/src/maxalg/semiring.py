"""Scalar arithmetic for the two isomorphic max semirings.

Values live in one of four modes, the cross product of

* domain: max-times (nonnegative reals, plus = max, times = product) or
  max-plus (reals with -inf, plus = max, times = sum), and
* arithmetic: exact (Fraction) or float with relative tolerance.

Exact max-times is the reference mode. A ``Semiring`` instance bundles the
mode and provides every scalar operation the matrix layer needs, so the
algorithms above it never branch on the mode themselves.

Cycle geometric means are handled as (weight, length) pairs and compared by
cross powers, which stays exact even when the mean itself is irrational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ExactnessError, ModeError

TIMES = "max-times"
PLUS = "max-plus"

NEG_INF = float("-inf")


@dataclass(frozen=True)
class Semiring:
    """A max semiring in a fixed domain and arithmetic mode.

    ``tol`` is the relative tolerance for float comparisons: a and b are
    considered equal iff |a - b| <= tol * max(1, |a|, |b|).
    """

    domain: str = TIMES
    exact: bool = True
    tol: float = 1e-9

    def __post_init__(self):
        if self.domain not in (TIMES, PLUS):
            raise ValueError(f"unknown domain {self.domain!r}")

    # -- constants ---------------------------------------------------------

    @property
    def zero(self):
        if self.domain == TIMES:
            return Fraction(0) if self.exact else 0.0
        return NEG_INF

    @property
    def one(self):
        if self.domain == TIMES:
            return Fraction(1) if self.exact else 1.0
        return Fraction(0) if self.exact else 0.0

    @property
    def mode_name(self):
        return "exact" if self.exact else "float"

    # -- validation --------------------------------------------------------

    def coerce(self, v):
        """Validate and normalize a scalar into this mode's representation."""
        if isinstance(v, str):
            v = NEG_INF if v == "-inf" else Fraction(v)
        if isinstance(v, float) and math.isnan(v):
            raise ValueError("NaN is not a semiring value")
        if isinstance(v, float) and v == math.inf:
            raise ValueError("+inf is not a semiring value")
        if self.domain == TIMES:
            if isinstance(v, float) and v == NEG_INF:
                raise ValueError("-inf is not a max-times value")
            if self.exact:
                if isinstance(v, float):
                    raise ModeError(
                        "float value in exact mode; pass int, Fraction, or a "
                        "numeric string"
                    )
                v = Fraction(v)
            else:
                v = float(v)
            if v < 0:
                raise ValueError(f"negative value {v} in max-times domain")
            return v
        # max-plus
        if isinstance(v, float):
            if v == NEG_INF:
                return NEG_INF
            if self.exact:
                raise ModeError(
                    "finite float value in exact max-plus mode; pass int, "
                    "Fraction, or a numeric string"
                )
            return v
        return Fraction(v) if self.exact else float(v)

    def coerce_abs(self, v):
        """Coerce the modulus of a signed number (for moduli matrices)."""
        if isinstance(v, str):
            v = Fraction(v)
        if self.domain != TIMES:
            raise ModeError("moduli live in the max-times domain")
        return self.coerce(abs(v))

    # -- semiring operations -----------------------------------------------

    def is_zero(self, a):
        return a == self.zero

    def add(self, a, b):
        """Semiring addition, i.e. max."""
        return a if b < a else b

    def mul(self, a, b):
        if self.domain == TIMES:
            return a * b
        if a == NEG_INF or b == NEG_INF:
            return NEG_INF
        return a + b

    def div(self, a, b):
        """Semiring division a (x) b^-1; b must be nonzero."""
        if self.is_zero(b):
            raise ZeroDivisionError("division by the semiring zero")
        if self.domain == TIMES:
            return a / b
        if a == NEG_INF:
            return NEG_INF
        return a - b

    def power(self, a, k):
        """k-th semiring power of a, with a^0 = one for every a."""
        if k == 0:
            return self.one
        if k < 0:
            return self.div(self.one, self.power(a, -k))
        if self.domain == TIMES:
            return a ** k
        if a == NEG_INF:
            return NEG_INF
        return a * k

    # -- comparisons ---------------------------------------------------------

    def eq(self, a, b):
        if self.exact:
            return a == b
        if a == NEG_INF or b == NEG_INF:
            return a == b
        return abs(a - b) <= self.tol * max(1.0, abs(a), abs(b))

    def le(self, a, b):
        if self.exact:
            return a <= b
        return a <= b or self.eq(a, b)

    def lt(self, a, b):
        return not self.le(b, a)

    def ge(self, a, b):
        return self.le(b, a)

    def gt(self, a, b):
        return self.lt(b, a)

    # -- beyond the semiring -------------------------------------------------

    def ordinary_sum(self, values):
        """Ordinary (school) sum of the given values, in this domain.

        In max-times this is a plain sum. In max-plus it is log-sum-exp,
        which is irrational in exact mode and therefore refused there.
        """
        values = list(values)
        if self.domain == TIMES:
            return sum(values, self.zero)
        if self.exact:
            raise ExactnessError(
                "ordinary sums in the additive domain need float mode"
            )
        m = max(values, default=NEG_INF)
        if m == NEG_INF:
            return NEG_INF
        return m + math.log(math.fsum(math.exp(v - m) for v in values))

    def to_float(self, a):
        """Numeric value of a scalar, for display and for log-domain bounds."""
        if a == NEG_INF:
            return NEG_INF
        return float(a)


EXACT_TIMES = Semiring(TIMES, True)
FLOAT_TIMES = Semiring(TIMES, False)
EXACT_PLUS = Semiring(PLUS, True)
FLOAT_PLUS = Semiring(PLUS, False)


# -- geometric means of cycles ---------------------------------------------
#
# A cycle of weight w and length l has geometric mean w^(1/l) in max-times
# and w/l in max-plus. Pairs (w, l) compare by cross powers so that exact
# mode never materializes an irrational root.


def gmean_cmp(sr, pair_a, pair_b):
    """Three-way compare two (weight, length) geometric-mean pairs."""
    wa, la = pair_a
    wb, lb = pair_b
    za, zb = sr.is_zero(wa), sr.is_zero(wb)
    if za or zb:
        if za and zb:
            return 0
        return -1 if za else 1
    if sr.domain == TIMES:
        if sr.exact:
            x, y = wa ** lb, wb ** la
            return (x > y) - (x < y)
        ma = math.exp(math.log(wa) / la)
        mb = math.exp(math.log(wb) / lb)
    else:
        if sr.exact:
            x, y = wa * lb, wb * la
            return (x > y) - (x < y)
        ma, mb = wa / la, wb / lb
    if sr.eq(ma, mb):
        return 0
    return -1 if ma < mb else 1


def gmean_eq(sr, pair_a, pair_b):
    return gmean_cmp(sr, pair_a, pair_b) == 0


def gmean_le(sr, pair_a, pair_b):
    return gmean_cmp(sr, pair_a, pair_b) <= 0


def gmean_cmp_one(sr, pair):
    """Three-way compare a mean pair against the semiring unit."""
    return gmean_cmp(sr, pair, (sr.one, 1))


def _int_nthroot(x, n):
    """Exact n-th root of a nonnegative int, or None."""
    if x < 0:
        return None
    if x in (0, 1) or n == 1:
        return x
    lo, hi = 0, 1 << (x.bit_length() // n + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** n < x:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo ** n == x else None


def gmean_value(sr, pair):
    """Collapse a (weight, length) pair to a scalar, or None.

    None occurs only in exact max-times mode when the root is irrational.
    """
    w, l = pair
    if sr.is_zero(w):
        return sr.zero
    if sr.domain == TIMES:
        if not sr.exact:
            return math.exp(math.log(w) / l)
        if l == 1:
            return w
        p = _int_nthroot(w.numerator, l)
        q = _int_nthroot(w.denominator, l)
        if p is None or q is None:
            return None
        return Fraction(p, q)
    if sr.exact:
        return Fraction(w) / l
    return w / l


def gmean_float(sr, pair):
    """Float approximation of a mean pair, for reports."""
    w, l = pair
    if sr.is_zero(w):
        return sr.to_float(sr.zero)
    if sr.domain == TIMES:
        return math.exp(math.log(w) / l)
    return float(w) / l
