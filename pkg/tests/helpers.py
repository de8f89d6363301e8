"""Shared brute-force oracles and seeded corpus generators for the tests.

The oracles work straight from definitions (walk tables, elementary cycle
enumeration over plain Fractions) so the fast library routines have an
independent reference. Everything here is exact max-times unless stated.
"""

from fractions import Fraction

from maxalg import EXACT_TIMES, MaxMatrix, MaxVector


# ---------------------------------------------------------------------------
# plain-Fraction views


def grid_of(a):
    """Rows of a as Fractions with None marking the semiring zero."""
    sr = a.semiring
    return [
        [None if sr.is_zero(w) else Fraction(w) for w in row] for row in a.rows
    ]


def fmat(rows):
    return MaxMatrix(rows, EXACT_TIMES)


def fvec(entries):
    return MaxVector(entries, EXACT_TIMES)


# ---------------------------------------------------------------------------
# walk and star oracles


def walk_table_brute(a, t):
    """Best weight of an i->j walk with exactly t edges, as a None/Fraction
    grid. Plain cubic folding, t >= 1."""
    grid = grid_of(a)
    n = a.n
    cur = [row[:] for row in grid]
    for _ in range(t - 1):
        nxt = [[None] * n for _ in range(n)]
        for i in range(n):
            for k in range(n):
                step = grid[i][k]
                if step is None:
                    continue
                for j in range(n):
                    tail = cur[k][j]
                    if tail is None:
                        continue
                    w = step * tail
                    if nxt[i][j] is None or w > nxt[i][j]:
                        nxt[i][j] = w
        cur = nxt
    return cur


def star_brute(a):
    """I + best walks of every length up to n-1, as a None/Fraction grid.

    Equals the Kleene star whenever no cycle weighs more than 1 (longer
    walks then never beat their loop-erased versions).
    """
    n = a.n
    out = [[Fraction(1) if i == j else None for j in range(n)]
           for i in range(n)]
    for t in range(1, n):
        table = walk_table_brute(a, t)
        for i in range(n):
            for j in range(n):
                w = table[i][j]
                if w is not None and (out[i][j] is None or w > out[i][j]):
                    out[i][j] = w
    return out


def grids_equal(grid, b):
    """Compare a None/Fraction grid against a MaxMatrix, exactly."""
    sr = b.semiring
    for i, row in enumerate(grid):
        for j, w in enumerate(row):
            other = b.rows[i][j]
            if w is None:
                if not sr.is_zero(other):
                    return False
            elif sr.is_zero(other) or Fraction(other) != w:
                return False
    return True


# ---------------------------------------------------------------------------
# cycle oracles


def cycles_brute(a, max_len=None):
    """Every elementary cycle as (closed node tuple, Fraction weight).

    Depth-first from each root over the nonzero pattern, visiting only
    nodes above the root so each cycle is listed once, rooted at its
    smallest node.
    """
    grid = grid_of(a)
    n = a.n
    if max_len is None:
        max_len = n
    found = []

    def dfs(root, u, path, weight, onpath):
        for v in range(n):
            w = grid[u][v]
            if w is None:
                continue
            if v == root:
                found.append((path + (root,), weight * w))
            elif v > root and v not in onpath and len(path) <= max_len - 1:
                onpath.add(v)
                dfs(root, v, path + (v,), weight * w, onpath)
                onpath.remove(v)

    for root in range(n):
        dfs(root, root, (root,), Fraction(1), {root})
    return found


def has_cycle_above_one_brute(a):
    return any(w > 1 for _nodes, w in cycles_brute(a))


def best_gmean_pair_brute(a):
    """(weight, length) of the heaviest cycle geometric mean, or None.

    Pairs compare by cross powers: (w1, l1) beats (w2, l2) iff
    w1^l2 > w2^l1, which is exact on Fractions.
    """
    best = None
    for nodes, w in cycles_brute(a):
        length = len(nodes) - 1
        if best is None or w ** best[1] > best[0] ** length:
            best = (w, length)
    return best


def critical_edges_brute(a):
    """Set of directed edges lying on some cycle of maximum mean."""
    best = best_gmean_pair_brute(a)
    if best is None:
        return set()
    out = set()
    for nodes, w in cycles_brute(a):
        length = len(nodes) - 1
        if w ** best[1] == best[0] ** length:
            out.update(zip(nodes, nodes[1:]))
    return out


def hadamard_condition_one_brute(rows):
    """Check every cyclic index sequence against the diagonal moduli.

    Asks, over the elementary cycles of the full pattern on the moduli,
    whether the product of the off-diagonal moduli ever beats the product
    of the diagonal moduli at the visited nodes. Repetitions add nothing:
    any closed sequence splits into elementary cycles.
    """
    n = len(rows)
    mod = [[abs(Fraction(v)) for v in row] for row in rows]
    support = fmat(
        [[mod[i][j] if mod[i][j] != 0 else 0 for j in range(n)]
         for i in range(n)]
    )
    for nodes, w in cycles_brute(support):
        diag = Fraction(1)
        for u in nodes[:-1]:
            diag *= mod[u][u]
        if w > diag:
            return False
    return True


def is_balanced_cut_brute(b):
    """Exhaustive subset check of maximum in- vs out-weight, small n."""
    grid = grid_of(b)
    n = b.n
    for mask in range(1, (1 << n) - 1):
        inside = [i for i in range(n) if mask >> i & 1]
        outside = [i for i in range(n) if not mask >> i & 1]
        out_w = max(
            (grid[i][j] for i in inside for j in outside
             if grid[i][j] is not None),
            default=None,
        )
        in_w = max(
            (grid[j][i] for i in inside for j in outside
             if grid[j][i] is not None),
            default=None,
        )
        if out_w != in_w:
            return False
    return True


# ---------------------------------------------------------------------------
# corpus generators (all driven by a caller-owned random.Random)


def rand_positive(rng, den=8):
    return Fraction(rng.randint(1, den), rng.randint(1, den))


def random_matrix(rng, n, density=0.5, entry=rand_positive):
    rows = [
        [entry(rng) if rng.random() < density else 0 for _ in range(n)]
        for _ in range(n)
    ]
    return fmat(rows)


def random_irreducible(rng, n, density=0.3, entry=rand_positive):
    """Random matrix with a planted spanning cycle, hence one SCC."""
    rows = [
        [entry(rng) if rng.random() < density else 0 for _ in range(n)]
        for _ in range(n)
    ]
    order = list(range(n))
    rng.shuffle(order)
    for u, v in zip(order, order[1:] + order[:1]):
        rows[u][v] = entry(rng)
    return fmat(rows)


def sub_unit(rng):
    """A positive Fraction strictly below 1 with a power-of-two denominator."""
    return Fraction(rng.randint(1, 7), 8)


def unit_lambda_irreducible(rng, n, extra_cycles=None):
    """Irreducible matrix whose maximum cycle mean is exactly 1.

    Plants one or more node-subset cycles with every edge equal to 1 and
    fills the rest (including a spanning connectivity cycle) with entries
    strictly below 1, so cycles through any filler edge stay below mean 1
    and the critical graph is the union of the planted unit edges.
    """
    rows = [[0] * n for _ in range(n)]
    order = list(range(n))
    rng.shuffle(order)
    for u, v in zip(order, order[1:] + order[:1]):
        rows[u][v] = sub_unit(rng)
    if extra_cycles is None:
        extra_cycles = rng.randint(1, 2)
    for _ in range(extra_cycles):
        size = rng.randint(1, n)
        nodes = rng.sample(range(n), size)
        for u, v in zip(nodes, nodes[1:] + nodes[:1]):
            rows[u][v] = Fraction(1)
    for i in range(n):
        for j in range(n):
            if rows[i][j] == 0 and rng.random() < 0.25:
                rows[i][j] = sub_unit(rng)
    return fmat(rows)


def power_two_dominant(rng, n):
    """Distinct power-of-two loops that dominate every non-loop cycle.

    Off-diagonal exponents sit strictly below the smaller of the two loop
    exponents, so any cycle through k >= 2 nodes has mean below the
    largest visited loop; the expansion then peels loops in decreasing
    order and every stage mean is an exact power of two.
    """
    exps = rng.sample(range(-4, 6), n)
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = Fraction(2) ** exps[i]
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < 0.7:
                rows[i][j] = Fraction(2) ** (
                    min(exps[i], exps[j]) - rng.randint(1, 3)
                )
    return fmat(rows)


def two_level_planted(rng, n):
    """Two disjoint planted cycles with distinct rational means.

    Every other edge leaves or enters a planted node with weight at most
    half the smaller mean and the leftover nodes are wired acyclically,
    so the expansion peels exactly the two planted cycles and every stage
    mean stays rational.
    """
    lam1 = Fraction(rng.randint(5, 8), 4)
    lam2 = Fraction(rng.randint(1, 4), 4)
    size1 = rng.randint(1, max(1, n // 2))
    size2 = rng.randint(1, max(1, (n - size1) // 2)) if n - size1 else 0
    nodes = list(range(n))
    rng.shuffle(nodes)
    c1 = nodes[:size1]
    c2 = nodes[size1:size1 + size2]
    rest = nodes[size1 + size2:]
    rows = [[0] * n for _ in range(n)]
    for u, v in zip(c1, c1[1:] + c1[:1]):
        rows[u][v] = lam1
    for u, v in zip(c2, c2[1:] + c2[:1]):
        rows[u][v] = lam2
    cap = lam2 / 2
    planted = set(c1) | set(c2)
    pos = {v: k for k, v in enumerate(rest)}
    for i in range(n):
        for j in range(n):
            if rows[i][j] == 0 and rng.random() < 0.35:
                if i in planted or j in planted or pos[i] < pos[j]:
                    rows[i][j] = cap * Fraction(rng.randint(1, 4), 4)
    return fmat(rows), lam1, lam2


def max_polynomial(a, coeffs):
    """c_0 I + c_1 A + c_2 A^2 + ... in the max-times sense."""
    from maxalg import oplus, otimes

    sr = a.semiring
    out = MaxMatrix.zeros(a.n, a.n, semiring=sr)
    power = MaxMatrix.identity(a.n, sr)
    for k, c in enumerate(coeffs):
        if k:
            power = otimes(power, a)
        if c:
            out = oplus(out, power.scale(sr.coerce(c)))
    return out


def polynomial_pair(rng, n):
    """Two commuting matrices: max-polynomials of one unit-mean matrix.

    Coefficient 1 of each polynomial is forced positive so both values
    inherit the base pattern and stay irreducible; the top coefficient is
    the (rational) maximum cycle mean of the value.
    """
    base = unit_lambda_irreducible(rng, n)

    def draw():
        coeffs = [
            Fraction(rng.randint(0, 8), rng.randint(1, 4)) for _ in range(4)
        ]
        coeffs[1] = Fraction(rng.randint(1, 8), rng.randint(1, 4))
        return coeffs

    return max_polynomial(base, draw()), max_polynomial(base, draw()), base


def random_signed(rng, n, density=0.75):
    """Signed Fraction grid with nonzero diagonal, for the moduli test."""
    rows = [
        [
            Fraction(rng.choice([k for k in range(-8, 9) if k]), 4)
            if (i == j or rng.random() < density)
            else Fraction(0)
            for j in range(n)
        ]
        for i in range(n)
    ]
    return rows
