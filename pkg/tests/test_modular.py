import itertools
import math
from fractions import Fraction

import pytest

from hypertel.errors import NonCoprimeModuli, ReconstructionFailed, UnluckyPrime
from hypertel.modular import (ModularPolicy, crt_combine, descending_primes, modular_telescoper,
                              rational_reconstruct, small_primes, solve_minimal_mod)
from hypertel.solver import solve_minimal, verify_relation
from hypertel.term_model import family_h_omega, normalize

# found by scanning small primes against a 31-bit consensus signature
UNLUCKY_H2 = (3, 5, 389)
UNLUCKY_CBR = (3, 5, 7, 17)


def test_crt_examples():
    assert crt_combine(2, 3, 3, 5) == (8, 15)
    assert crt_combine(4, 9, 0, 1) == (4, 9)
    assert crt_combine(0, 1, 4, 9) == (4, 9)
    with pytest.raises(NonCoprimeModuli):
        crt_combine(1, 4, 1, 6)


def test_crt_exhaustive():
    for m1, m2 in [(3, 5), (7, 4), (9, 10)]:
        for a1, a2 in itertools.product(range(m1), range(m2)):
            a, m = crt_combine(a1, m1, a2, m2)
            assert m == m1 * m2 and a % m1 == a1 and a % m2 == a2 and 0 <= a < m


def test_rational_reconstruct_examples():
    assert rational_reconstruct(6, 11) == Fraction(1, 2)
    assert rational_reconstruct(4, 101) == 4
    with pytest.raises(ReconstructionFailed):
        rational_reconstruct(7, 10)
    with pytest.raises(ReconstructionFailed):
        rational_reconstruct(4, 11)


def _brute(a, m):
    bound = math.isqrt(m // 2)
    hits = {Fraction(n, d) for d in range(1, bound + 1) for n in range(-bound, bound + 1)
            if math.gcd(n, d) == 1 and (d * a - n) % m == 0}
    return hits


def test_rational_reconstruct_against_enumeration():
    for m in (11, 29, 97, 210):
        for a in range(m):
            hits = _brute(a, m)
            try:
                got = rational_reconstruct(a, m)
            except ReconstructionFailed:
                assert not hits
            else:
                assert hits == {got}


def test_reconstruct_round_trip():
    m = 1000003 * 998244353
    for n, d in [(-7, 3), (12345, 678), (0, 1), (-1, 99991)]:
        a = n * pow(d, -1, m) % m
        assert rational_reconstruct(a, m) == Fraction(n, d)


def test_prime_streams():
    assert list(itertools.islice(descending_primes(5), 4)) == [31, 29, 23, 19]
    assert list(itertools.islice(small_primes(), 4)) == [3, 5, 7, 11]


def test_solve_mod_binomial(binom):
    m = solve_minimal_mod(binom, 10007)
    assert [int(e.coeffs()[0]) for e in m.ell_mod] == [10005, 1]
    assert [int(e.coeffs()[0]) for e in m.Y_mod] == [10006]


def test_solve_mod_h1_identity():
    t = family_h_omega(1)
    rel = solve_minimal(t)
    m = solve_minimal_mod(t, 10007)
    lc = int(rel.ell[-1].leading_coefficient())
    scaled = [(e * pow(lc, -1, 10007)) for e in rel.ell]
    assert [[int(c) % 10007 for c in e.coeffs()] for e in scaled] == \
        [[int(c) for c in e.coeffs()] for e in m.ell_mod]


def test_unlucky_signature():
    t = family_h_omega(2)
    good = solve_minimal_mod(t, 2 ** 31 - 1).signature
    for p in UNLUCKY_H2:
        with pytest.raises(UnluckyPrime):
            solve_minimal_mod(t, p, good)
    with pytest.raises(UnluckyPrime):
        solve_minimal_mod(t, 2)
    with pytest.raises(UnluckyPrime):
        solve_minimal_mod(t, 15)


def test_binomial_pipeline(binom):
    rel, count, rep = modular_telescoper(binom, ModularPolicy(prime_bits=30))
    assert rel.operator_str() == "S_n - 2" and count <= 3 and rep.within_budget


@pytest.mark.parametrize("front", [True, False])
def test_injected_unlucky_primes_h2(front):
    t = family_h_omega(2)
    exact = solve_minimal(t)
    big = list(itertools.islice(descending_primes(31), 3))
    sched = list(UNLUCKY_H2) + big if front else big[:1] + list(UNLUCKY_H2) + big[1:]
    rel, count, rep = modular_telescoper(t, ModularPolicy(primes=sched))
    assert rel.same_as(exact)
    assert set(UNLUCKY_H2) <= set(rep.unlucky)
    assert not set(UNLUCKY_H2) & set(rep.primes_used)


def test_tiny_primes_h2():
    t = family_h_omega(2)
    exact = solve_minimal(t)
    tiny = list(itertools.islice(small_primes(3), 300))
    rel, count, rep = modular_telescoper(t, ModularPolicy(primes=tiny, max_primes=300))
    default_rel, default_count, _ = modular_telescoper(t)
    assert rel.same_as(exact) and default_rel.same_as(exact)
    assert count > default_count
    assert rep.primes_used[0] not in UNLUCKY_H2


def test_report_json(binom):
    _, _, rep = modular_telescoper(binom)
    js = rep.to_json()
    assert js["prime_count"] == len(js["primes_used"]) and js["within_budget"] is True
    assert verify_relation(normalize(binom), modular_telescoper(binom)[0])


def test_exhausted_schedule(binom):
    with pytest.raises(ReconstructionFailed):
        modular_telescoper(family_h_omega(2), ModularPolicy(primes=[3, 5], max_primes=2))
