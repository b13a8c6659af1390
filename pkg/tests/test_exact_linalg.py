import random
from collections import Counter

import pytest
from flint import fmpz_poly, nmod_poly

from conftest import fraction_rank
from hypertel.errors import HypothesisViolation
from hypertel.exact_linalg import (IntMatrix, KernelBoundInput, PolyMatrix, kernel_bound,
                                   nullspace_int, nullspace_poly, nullspace_poly_pivots)


def P(*c):
    return fmpz_poly(list(c))


def rank_by_evaluation(A: PolyMatrix, rng: random.Random, trials: int = 5) -> int:
    votes = Counter()
    for _ in range(trials):
        x = rng.randint(-10 ** 6, 10 ** 6)
        votes[fraction_rank([[int(e(x)) for e in row] for row in A.rows])] += 1
    return votes.most_common(1)[0][0]


def test_cramer_example():
    (v,) = nullspace_poly(PolyMatrix([[P(0, 1), P(1, 1)]]))
    assert v == [P(1, 1), P(0, -1)]


def test_full_rank_empty():
    assert nullspace_poly(PolyMatrix([[1, 0], [0, 1]])) == []


def test_binomial_system():
    A = PolyMatrix([[P(1, 1), P(1, 1), P(-1, -1)], [-1, 0, 2]])
    basis, pivots = nullspace_poly_pivots(A)
    assert basis == [[P(2), P(-1), P(1)]] and pivots == (0, 1)
    (vm,) = nullspace_poly(A.reduce(7))
    assert [int(e.coeffs()[0]) for e in vm] == [1, 3, 4]
    assert isinstance(vm[0], nmod_poly)


def test_nullspace_int_examples():
    assert nullspace_int(IntMatrix([[1, 2]])) == [[2, -1]]
    assert sorted(nullspace_int(IntMatrix([[0, 0], [0, 0]]))) == [[0, 1], [1, 0]]


def test_nullspace_int_against_fraction_rank():
    rng = random.Random(8)
    for _ in range(100):
        m, n = rng.randint(1, 5), rng.randint(1, 7)
        A = IntMatrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)])
        basis = nullspace_int(A)
        assert len(basis) == n - fraction_rank(A.rows)
        assert all(A.annihilates(v) for v in basis)
        if basis:
            assert fraction_rank(basis) == len(basis)


def test_nullspace_poly_against_rank_oracle():
    rng = random.Random(9)
    for _ in range(80):
        m, n = rng.randint(1, 4), rng.randint(1, 6)
        rows = [[P(*[rng.randint(-4, 4) for _ in range(rng.randint(0, 3))]) for _ in range(n)]
                for _ in range(m)]
        if rng.random() < 0.3 and m > 1:
            rows[-1] = [a * 2 - b for a, b in zip(rows[0], rows[1 % m])]
        A = PolyMatrix(rows)
        basis = nullspace_poly(A)
        assert len(basis) == n - rank_by_evaluation(A, rng)
        for v in basis:
            assert A.annihilates(v)
            nz = [e for e in v if e != 0]
            g = nz[0]
            for e in nz[1:]:
                g = g.gcd(e)
            assert g == 1 and nz[0].leading_coefficient() > 0


def test_kernel_bound_examples():
    assert kernel_bound(KernelBoundInput(1, 1, 1, 1, 1, 0, 1)) == (1, 1)
    assert kernel_bound(KernelBoundInput(2, 1, 3, 2, 2, 0, 3)) == (5, 972)
    deg, h = kernel_bound(KernelBoundInput(3, 7, 2, 5, 2, 4, 2))
    assert deg == 3 + 7 and h == 2 * 8 * 2 * 5


def test_kernel_bound_preconditions():
    with pytest.raises(HypothesisViolation):
        kernel_bound(KernelBoundInput(1, 1, 1, 1, 3, 0, 2))
    with pytest.raises(HypothesisViolation):
        kernel_bound(KernelBoundInput(1, 1, 1, 1, 0, 2, 2))
    with pytest.raises(HypothesisViolation):
        KernelBoundInput(-1, 1, 1, 1, 1, 0, 1)


def test_mismatched_rows_rejected():
    with pytest.raises(ValueError):
        PolyMatrix([[1, 2], [3]])
    with pytest.raises(ValueError):
        PolyMatrix([[1, 2]]).apply([1])
