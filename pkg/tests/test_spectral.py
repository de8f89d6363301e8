"""Spectral layer: cycle means, critical graphs, eigenvectors."""

import math
import random
from fractions import Fraction

import pytest

from maxalg import (
    EXACT_TIMES,
    FLOAT_TIMES,
    ExactnessError,
    NotIrreducibleError,
    critical_graph,
    eigenspace_basis,
    gmean_cmp,
    is_eigenvector,
    is_irreducible,
    max_cycle_gmean,
    otimes,
    principal_eigenvector,
    semiring_convert,
)

from helpers import (
    best_gmean_pair_brute,
    critical_edges_brute,
    fmat,
    random_irreducible,
    random_matrix,
    unit_lambda_irreducible,
)


def test_max_cycle_gmean_hand_values():
    a = fmat([[0, 2], [Fraction(1, 2), 0]])
    mean = max_cycle_gmean(a)
    assert mean.pair() == (Fraction(1), 2)
    assert mean.exact_value() == Fraction(1)
    assert mean.cmp_one() == 0
    assert mean.witness.is_cycle
    acyclic = fmat([[0, 5], [0, 0]])
    zero = max_cycle_gmean(acyclic)
    assert zero.is_zero
    assert zero.witness is None
    irr = max_cycle_gmean(fmat([[0, 2], [3, 0]]))
    assert irr.pair() == (Fraction(6), 2)
    assert irr.exact_value() is None
    assert math.isclose(irr.float_value(), math.sqrt(6.0))


def test_max_cycle_gmean_matches_oracle():
    rng = random.Random(101)
    nonzero = 0
    for _ in range(400):
        n = rng.randint(1, 6)
        a = random_matrix(rng, n, density=rng.uniform(0.1, 0.7))
        mean = max_cycle_gmean(a)
        want = best_gmean_pair_brute(a)
        if want is None:
            assert mean.is_zero
        else:
            nonzero += 1
            assert gmean_cmp(a.semiring, mean.pair(), want) == 0
            # the witness cycle attains the mean
            pair = (mean.witness.weight, mean.witness.length)
            assert gmean_cmp(a.semiring, pair, want) == 0
    assert nonzero > 150


def test_critical_graph_matches_oracle():
    rng = random.Random(103)
    interesting = 0
    for _ in range(250):
        n = rng.randint(1, 6)
        a = random_matrix(rng, n, density=rng.uniform(0.15, 0.7))
        want = critical_edges_brute(a)
        if not want:
            continue
        cg = critical_graph(a)
        got = {(i, j) for i, j, _w in cg.graph.edges}
        assert got == want
        assert set(cg.nodes) == {u for u, _ in want} | {v for _, v in want}
        interesting += 1
        # critical edges keep their original weights
        for i, j, w in cg.graph.edges:
            assert w == a.rows[i][j]
    assert interesting > 100


def test_critical_graph_structure_fields():
    a = fmat([
        [0, 1, 0, 0],
        [1, 0, 0, 0],
        [0, 0, 0, Fraction(1, 2)],
        [0, 0, Fraction(1, 2), 0],
    ])
    cg = critical_graph(a)
    assert cg.components == ((0, 1),)
    assert cg.cyclicity == 2
    assert set(cg.nodes) == {0, 1}
    both = fmat([
        [0, 1, 0, 0, 0],
        [1, 0, 0, 0, 0],
        [0, 0, 0, 1, 0],
        [0, 0, 0, 0, 1],
        [0, 0, 1, 0, 0],
    ])
    cg = critical_graph(both)
    assert cg.components == ((0, 1), (2, 3, 4))
    assert cg.cyclicity == 6


def test_is_irreducible():
    assert is_irreducible(fmat([[0, 1], [1, 0]]))
    assert not is_irreducible(fmat([[0, 1], [0, 0]]))
    assert not is_irreducible(fmat([[1, 1], [0, 1]]))
    assert is_irreducible(fmat([[1]]))
    # single node without a loop still counts as one component
    assert is_irreducible(fmat([[0]]))


def test_principal_eigenvector_hand_value():
    a = fmat([[0, 2], [Fraction(1, 2), 0]])
    x = principal_eigenvector(a)
    lam = max_cycle_gmean(a).exact_value()
    assert lam == Fraction(1)
    assert is_eigenvector(a, x, lam)
    assert x.is_positive()
    got = otimes(a, x)
    assert got.entries == tuple(lam * e for e in x.entries)


def test_principal_eigenvector_random_irreducible():
    rng = random.Random(107)
    for _ in range(150):
        n = rng.randint(1, 6)
        a = unit_lambda_irreducible(rng, n)
        x = principal_eigenvector(a)
        assert x.is_positive()
        assert is_eigenvector(a, x, Fraction(1))
        assert otimes(a, x).entries == x.entries


def test_principal_eigenvector_scales_with_lambda():
    rng = random.Random(109)
    for _ in range(60):
        n = rng.randint(1, 5)
        a = unit_lambda_irreducible(rng, n)
        lam = Fraction(2) ** rng.randint(-2, 3)
        b = a.scale(lam)
        x = principal_eigenvector(b)
        assert is_eigenvector(b, x, lam)
        assert otimes(b, x).entries == tuple(lam * e for e in x.entries)


def test_eigenspace_basis_columns_are_eigenvectors():
    rng = random.Random(113)
    for _ in range(80):
        n = rng.randint(2, 6)
        a = unit_lambda_irreducible(rng, n)
        basis = eigenspace_basis(a)
        assert len(basis) >= 1
        for x in basis:
            assert x.is_positive()
            assert is_eigenvector(a, x, Fraction(1))
    # one basis vector per critical component: two unit 2-cycles bridged
    # by sub-unit edges in both directions
    a = fmat([
        [0, 1, 0, Fraction(1, 2)],
        [1, 0, 0, 0],
        [0, Fraction(1, 2), 0, 1],
        [0, 0, 1, 0],
    ])
    cg = critical_graph(a)
    assert cg.components == ((0, 1), (2, 3))
    assert len(eigenspace_basis(a)) == 2


def test_reducible_matrices_are_rejected_for_eigenvectors():
    with pytest.raises(NotIrreducibleError):
        principal_eigenvector(fmat([[1, 1], [0, 1]]))
    with pytest.raises(NotIrreducibleError):
        principal_eigenvector(fmat([[0, 1], [0, 0]]))


def test_irrational_mean_exact_mode_behavior():
    a = fmat([[0, 2], [3, 0]])
    # the pair itself is fine in exact mode
    mean = max_cycle_gmean(a)
    assert mean.exact_value() is None
    # materializing the eigenvector needs the root: exact mode refuses
    with pytest.raises(ExactnessError):
        principal_eigenvector(a)
    f = semiring_convert(a, FLOAT_TIMES)
    x = principal_eigenvector(f)
    lam = max_cycle_gmean(f).float_value()
    assert is_eigenvector(f, x, lam)
    assert math.isclose(lam, math.sqrt(6.0))


def test_is_eigenvector_rejects_wrong_pairs():
    a = fmat([[0, 2], [Fraction(1, 2), 0]])
    assert not is_eigenvector(a, principal_eigenvector(a), Fraction(2))
    from maxalg import MaxVector

    assert not is_eigenvector(a, MaxVector([1, 1], EXACT_TIMES), Fraction(1))


def test_float_mode_agrees_with_exact_on_rational_instances():
    rng = random.Random(127)
    for _ in range(100):
        n = rng.randint(1, 5)
        a = random_irreducible(rng, n, density=0.4)
        f = semiring_convert(a, FLOAT_TIMES)
        exact_pair = max_cycle_gmean(a).pair()
        got = max_cycle_gmean(f).float_value()
        want = math.exp(math.log(float(exact_pair[0])) / exact_pair[1])
        assert math.isclose(got, want, rel_tol=1e-9)
        xf = principal_eigenvector(f)
        assert is_eigenvector(f, xf, max_cycle_gmean(f).float_value())
