"""Closed-form size bounds for telescopers and their ansatz systems."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import OmegaTooSmall, OrderTooSmall
from .term_model import ProperTerm, normalize, shape_params

THEOREM = "theorem"
DERIVATION = "derivation"


def order_bound(term: ProperTerm) -> int:
    return shape_params(normalize(term)).nu


def degree_threshold_for_order(term: ProperTerm, r: int) -> Fraction:
    """Every integer d strictly above this value admits a telescoper of order r and degree d."""
    sp = shape_params(normalize(term))
    nu = sp.nu
    if r < nu:
        raise OrderTooSmall(f"order r={r} is below nu={nu}")
    mu = abs(sp.mu)
    num = (sp.theta * nu - 1) * r + Fraction(nu * (2 * sp.delta + mu + 3 - (1 + mu) * nu), 2) - 1
    return num / (r - nu + 1)


def _height_factors(term: ProperTerm, variant: str):
    """(base, exponent, is_factorial) triples whose product is the bound."""
    if variant not in (THEOREM, DERIVATION):
        raise ValueError(f"unknown variant {variant!r}")
    term = normalize(term)
    sp = shape_params(term)
    nu, th, de, om = sp.nu, sp.theta, sp.delta, sp.omega
    x, y = abs(term.x), abs(term.y)
    N = de + th * nu + 1
    W = 2 * (nu + 2) * om - 2
    fact_exp = nu + 1 if variant == THEOREM else nu + 2
    return [
        (max(x ** nu, y + 1), 1, False),
        (term.p.norm(), nu + 1, False),
        (N, fact_exp, True),
        (nu + 1, de * (nu + 1), False),
        (y + 1, de + (th - 1) * nu + 1, False),
        (de, 2 * (nu + 1), True),
        (x, nu * nu, False),
        (N, de + (th + de + 2) * nu + (th - 1) * nu * nu, False),
        (W, (de + th + 1) * nu + (2 * th - 1) * nu * nu, False),
    ]


def minimal_height_bound(term: ProperTerm, variant: str = THEOREM) -> int:
    """Exact height bound for the order-nu telescoper.

    ``variant="derivation"`` uses the factorial exponent nu+2 from the last
    step of the proof instead of nu+1.
    """
    out = 1
    for base, e, fact in _height_factors(term, variant):
        if e < 0:
            raise ValueError("negative exponent in height bound")
        out *= (math.factorial(base) if fact else base) ** e
    return out


def minimal_height_ln(term: ProperTerm, variant: str = THEOREM) -> float:
    """ln of :func:`minimal_height_bound`, summed factor by factor."""
    total = 0.0
    for base, e, fact in _height_factors(term, variant):
        if e != 0:
            total += e * (math.lgamma(base + 1) if fact else math.log(base))
    return total


def leading_height_exponent(term: ProperTerm) -> float:
    """Leading term 64 (M Omega)^3 ln Omega; the O(Omega^3) part is not included."""
    term = normalize(term)
    om = shape_params(term).omega
    if om < 2:
        raise OmegaTooSmall(f"Omega={om} < 2 makes the leading term meaningless")
    return 64.0 * (term.M * om) ** 3 * math.log(om)


def nonminimal_size(term: ProperTerm) -> tuple[int, int]:
    """(unknowns, equation bound) of the nonminimal ansatz."""
    sp = shape_params(normalize(term))
    r = 2 * sp.nu
    d = 4 * sp.nu * sp.theta
    s = sp.delta + r * sp.theta - sp.nu
    unknowns = (r + 1) * (d + 1) + (s + d + 1) * (s + 1)
    eqs = (sp.delta + r * sp.theta + d + 1) * (sp.delta + r * sp.theta + 1)
    return unknowns, eqs


@dataclass(frozen=True)
class BoundReport:
    order_bound: int
    r: int
    degree_threshold: Fraction
    height_bound: int
    minimal_height_ln: float
    leading_height_exponent: float | None
    variant: str
    nonminimal_unknowns: int
    nonminimal_equations: int

    def to_json(self) -> dict:
        return {
            "order_bound": str(self.order_bound),
            "r": str(self.r),
            "degree_threshold": str(self.degree_threshold),
            "height_bound": str(self.height_bound),
            "minimal_height_ln": self.minimal_height_ln,
            "leading_height_exponent": self.leading_height_exponent,
            "variant": self.variant,
            "nonminimal_unknowns": str(self.nonminimal_unknowns),
            "nonminimal_equations": str(self.nonminimal_equations),
        }


def bound_report(term: ProperTerm, r: int | None = None, variant: str = THEOREM) -> BoundReport:
    term = normalize(term)
    nu = order_bound(term)
    r = nu if r is None else r
    try:
        rem = leading_height_exponent(term)
    except OmegaTooSmall:
        rem = None
    unk, eqs = nonminimal_size(term)
    return BoundReport(nu, r, degree_threshold_for_order(term, r), minimal_height_bound(term, variant),
                       minimal_height_ln(term, variant), rem, variant, unk, eqs)
