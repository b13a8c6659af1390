import random
from fractions import Fraction

import pytest
from flint import fmpz_poly

from hypertel.bipoly import BiPoly, KBasis, uni
from hypertel.term_model import (binomial_term, central_binomial_ratio_term, family_h_omega)

COEF = 10 ** 6


def rand_uni(rng: random.Random, max_deg: int = 6, bound: int = COEF) -> fmpz_poly:
    d = rng.randint(0, max_deg)
    return uni(rng.randint(-bound, bound) for _ in range(d + 1))


def rand_bipoly(rng: random.Random, max_deg_n: int = 6, max_deg_k: int = 6, bound: int = COEF,
                basis: KBasis = KBasis.STANDARD, nonzero: bool = True) -> BiPoly:
    while True:
        dk = rng.randint(0, max_deg_k)
        q = BiPoly([rand_uni(rng, max_deg_n, bound) for _ in range(dk + 1)], basis)
        if not nonzero or not q.is_zero():
            return q


def fraction_rank(rows) -> int:
    """Rank over Q by plain Gaussian elimination on Fractions."""
    m = [[Fraction(int(x)) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


@pytest.fixture
def rng():
    return random.Random(20261014)


@pytest.fixture
def binom():
    return binomial_term()


@pytest.fixture
def cbr():
    return central_binomial_ratio_term()


@pytest.fixture(params=[1, 2])
def h_small(request):
    return family_h_omega(request.param)
