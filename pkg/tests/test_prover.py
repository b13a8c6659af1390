import math
import random
from fractions import Fraction

import pytest
from flint import fmpz_poly

from hypertel.errors import WindowViolation, ZeroPolynomial
from hypertel.prover import (AffineForm, SupportWindow, Verdict, exact_sum, integer_roots,
                             integer_roots_by_divisors, leading_root_bound, parse_affine, prove_identity)
from hypertel.term_model import ProperTerm, make_term

WINDOW = SupportWindow.parse("0", "n")


def P(*c):
    return fmpz_poly(list(c))


def mutated(term: ProperTerm, monomials) -> ProperTerm:
    return make_term(monomials, term.x, term.y, term.factors)


def test_integer_roots_examples():
    assert integer_roots(P(-3, 1) * P(2, 1)) == [3]
    assert integer_roots(P(0, 0, 1)) == [0]
    assert integer_roots(P(5)) == []
    with pytest.raises(ZeroPolynomial):
        integer_roots(P())


def test_integer_roots_against_divisor_search():
    rng = random.Random(11)
    for _ in range(200):
        p = P(rng.randint(1, 4))
        for _ in range(rng.randint(0, 4)):
            if rng.random() < 0.6:
                p *= P(-rng.randint(-5, 12), 1)
            else:
                p *= P(rng.randint(-9, 9), rng.randint(2, 3))
        assert integer_roots(p) == integer_roots_by_divisors(p)
        for n0 in integer_roots(p):
            assert n0 <= leading_root_bound(p) and p(n0) == 0


def test_lead_bound_examples():
    assert leading_root_bound(P(-3, 1)) == 3
    assert leading_root_bound(P(-7, 2)) == 7
    assert leading_root_bound(P(1)) == 1


def test_parse_affine():
    assert parse_affine("n") == AffineForm(1, 0)
    assert parse_affine("2*n-1") == AffineForm(2, -1)
    assert parse_affine("-n + 5") == AffineForm(-1, 5)
    assert parse_affine("3") == AffineForm(0, 3)
    assert str(AffineForm(2, -1)) == "2*n-1"
    for bad in ("", "n*2", "x", "2n*", "*n"):
        with pytest.raises(ValueError):
            parse_affine(bad)


def test_exact_sum_examples(cbr):
    assert exact_sum(cbr, 3, WINDOW) == 1
    assert exact_sum(cbr, 0, WINDOW) == 1
    with pytest.raises(WindowViolation):
        exact_sum(cbr, 3, SupportWindow.parse("0", "n-1"))


def test_brute_force_identity():
    for n in range(21):
        assert sum(Fraction(math.comb(n, k) ** 2, math.comb(2 * n, n)) for k in range(n + 1)) == 1


def test_prove_central_binomial(cbr):
    rep = prove_identity(cbr, WINDOW)
    assert rep.verdict is Verdict.PROVEN
    assert rep.points_checked >= max(rep.r + rep.d + 1, rep.r + rep.n0 + 1)
    assert rep.n0 <= rep.lead_bound
    # fresh points past the checked range agree with the verdict
    for n in range(rep.N + 1, rep.N + 11):
        assert exact_sum(cbr, n, WINDOW) == 1


def test_mutation_disproven(cbr):
    rep = prove_identity(mutated(cbr, [(1, 1, 0), (2, 0, 0)]), WINDOW)
    assert rep.verdict is Verdict.DISPROVEN and rep.n_fail == 0
    assert exact_sum(mutated(cbr, [(1, 1, 0), (2, 0, 0)]), 0, WINDOW) == 2
    assert rep.n0 <= rep.lead_bound


def test_binomial_sum_disproven(binom):
    rep = prove_identity(binom, WINDOW)
    assert rep.verdict is Verdict.DISPROVEN and rep.n_fail == 1


def test_factored_form_inapplicable(cbr):
    rep = prove_identity(cbr, WINDOW, form="factored")
    assert rep.verdict is Verdict.INAPPLICABLE and "singular" in rep.reason


def test_report_json(cbr):
    js = prove_identity(cbr, WINDOW).to_json()
    assert js["verdict"] == "proven" and "n_fail" not in js and js["n0"] == str(int(js["n0"]))
