"""Proper hypergeometric terms.

A term is ``p(n,k) x^n y^k`` times a quotient of Gamma factors with
integer-linear arguments::

    prod_m Gamma(a n + a' k + a'') Gamma(b n - b' k + b'')
           / (Gamma(u n + u' k + u'') Gamma(v n - v' k + v''))

Factors are grouped by role: A and B in the numerator, U and V in the
denominator; A and U carry ``+k``, B and V carry ``-k``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .bipoly import BiPoly, KBasis, LinearForm
from .errors import InvalidOmega, NegativeCoefficient, NonpositiveBase, ZeroPolynomial


class Role(str, enum.Enum):
    A = "A"
    B = "B"
    U = "U"
    V = "V"

    @property
    def in_numerator(self) -> bool:
        return self in (Role.A, Role.B)

    @property
    def k_sign(self) -> int:
        return 1 if self in (Role.A, Role.U) else -1


ROLES = (Role.A, Role.B, Role.U, Role.V)


@dataclass(frozen=True)
class GammaFactor:
    role: Role
    n: int
    k: int
    c: int

    def __post_init__(self):
        object.__setattr__(self, "role", Role(self.role))
        for name in ("n", "k", "c"):
            value = getattr(self, name)
            if int(value) != value:
                raise NegativeCoefficient(f"coefficient {name}={value!r} is not an integer")
            if value < 0:
                raise NegativeCoefficient(
                    f"{self.role.value}-factor coefficient {name}={value} is negative")
            object.__setattr__(self, name, int(value))

    def argument(self) -> LinearForm:
        return LinearForm(self.n, self.role.k_sign * self.k, self.c)

    @property
    def is_padding(self) -> bool:
        return self.n == 0 and self.k == 0 and self.c == 1


def padding(role: Role) -> GammaFactor:
    return GammaFactor(role, 0, 0, 1)


@dataclass(frozen=True)
class ProperTerm:
    p: BiPoly
    x: int
    y: int
    factors: tuple[GammaFactor, ...] = field(default=())

    def __post_init__(self):
        p = self.p
        if p.basis is not KBasis.STANDARD:
            raise ValueError("the polynomial part must be given in the standard k-basis")
        if p.is_zero():
            raise ZeroPolynomial("the polynomial part p must be nonzero")
        if self.x < 1 or self.y < 1:
            raise NonpositiveBase(f"bases must be >= 1, got x={self.x}, y={self.y}")
        object.__setattr__(self, "factors", tuple(self.factors))

    def role(self, role: Role) -> tuple[GammaFactor, ...]:
        return tuple(f for f in self.factors if f.role is role)

    @property
    def M(self) -> int:
        return max((len(self.role(r)) for r in ROLES), default=0)

    @property
    def is_normalized(self) -> bool:
        return len({len(self.role(r)) for r in ROLES}) == 1

    def __str__(self):
        num = [f"G({f.argument()})" for f in self.factors if f.role.in_numerator and not f.is_padding]
        den = [f"G({f.argument()})" for f in self.factors
               if not f.role.in_numerator and not f.is_padding]
        head = f"({self.p})"
        if self.x != 1:
            head += f"*{self.x}^n"
        if self.y != 1:
            head += f"*{self.y}^k"
        out = head + ("*" + "*".join(num) if num else "")
        if den:
            out += "/(" + "*".join(den) + ")"
        return out


def make_term(p, x: int = 1, y: int = 1, factors: Iterable = ()) -> ProperTerm:
    """Validate and normalize raw term data.

    ``p`` may be a BiPoly (standard basis) or an iterable of ``(coef, i, j)``
    monomials; ``factors`` may hold GammaFactor objects or
    ``(role, n, k, c)`` tuples.
    """
    if not isinstance(p, BiPoly):
        p = BiPoly.from_monomials(p, KBasis.STANDARD)
    fs = [f if isinstance(f, GammaFactor) else GammaFactor(*f) for f in factors]
    return normalize(ProperTerm(p, int(x), int(y), tuple(fs)))


def normalize(term: ProperTerm) -> ProperTerm:
    """Pad every role with Gamma(0n+0k+1) up to a common length M.

    Factors are listed in role order A, B, U, V; order inside a role is kept.
    """
    if term.is_normalized:
        return term
    m = term.M
    ordered = []
    for r in ROLES:
        group = list(term.role(r))
        group += [padding(r)] * (m - len(group))
        ordered.extend(group)
    return ProperTerm(term.p, term.x, term.y, tuple(ordered))


@dataclass(frozen=True)
class ShapeParams:
    nu: int
    theta: int
    delta: int
    lam: int
    mu: int
    omega: int


def shape_params(term: ProperTerm) -> ShapeParams:
    def total(roles, attr):
        return sum(getattr(f, attr) for f in term.factors if f.role in roles)

    nu = max(total((Role.A, Role.V), "k"), total((Role.U, Role.B), "k"))
    ab = total((Role.A, Role.B), "n")
    uv = total((Role.U, Role.V), "n")
    omega = max((max(f.n, f.k, f.c) for f in term.factors), default=0)
    return ShapeParams(nu=nu, theta=max(ab, uv), delta=term.p.total_degree(),
                       lam=uv, mu=ab - uv, omega=omega)


class ValueKind(enum.Enum):
    RATIONAL = "rational"
    ZERO = "zero"
    UNDEFINED = "undefined"


@dataclass(frozen=True)
class TermValue:
    kind: ValueKind
    value: Fraction | None = None

    @property
    def is_undefined(self) -> bool:
        return self.kind is ValueKind.UNDEFINED

    def as_fraction(self) -> Fraction:
        """Numeric value; Zero maps to 0."""
        if self.kind is ValueKind.UNDEFINED:
            raise ValueError("undefined term value")
        return self.value if self.kind is ValueKind.RATIONAL else Fraction(0)


ZERO = TermValue(ValueKind.ZERO)
UNDEFINED = TermValue(ValueKind.UNDEFINED)


def gamma_quotient(numer: Iterable[int], denom: Iterable[int]) -> TermValue:
    """prod Gamma(numer) / prod Gamma(denom) at integer arguments.

    A pole in the numerator makes the value Undefined; otherwise a pole in
    the denominator makes it Zero (1/Gamma vanishes there).
    """
    numer = list(numer)
    denom = list(denom)
    if any(z <= 0 for z in numer):
        return UNDEFINED
    if any(z <= 0 for z in denom):
        return ZERO
    num = 1
    for z in numer:
        num *= math.factorial(z - 1)
    den = 1
    for z in denom:
        den *= math.factorial(z - 1)
    return TermValue(ValueKind.RATIONAL, Fraction(num, den))


def power(base: int, e: int) -> Fraction:
    return Fraction(base) ** e


def eval_term(term: ProperTerm, n: int, k: int) -> TermValue:
    """Exact value of h(n, k) with the Zero/Undefined pole conventions."""
    numer = [f.argument()(n, k) for f in term.factors if f.role.in_numerator]
    denom = [f.argument()(n, k) for f in term.factors if not f.role.in_numerator]
    g = gamma_quotient(numer, denom)
    if g.kind is not ValueKind.RATIONAL:
        return g
    value = g.value * term.p(n, k) * power(term.x, n) * power(term.y, k)
    return TermValue(ValueKind.RATIONAL, value)


def family_h_omega(omega: int) -> ProperTerm:
    """h_Omega = Gamma(Omega k) / Gamma(Omega n - k)."""
    if int(omega) != omega or omega < 1:
        raise InvalidOmega(f"Omega must be a positive integer, got {omega!r}")
    omega = int(omega)
    return make_term([(1, 0, 0)], 1, 1,
                     [GammaFactor(Role.A, 0, omega, 0), GammaFactor(Role.V, omega, 1, 0)])


def binomial_term() -> ProperTerm:
    """C(n, k) = Gamma(n+1) / (Gamma(k+1) Gamma(n-k+1))."""
    return make_term([(1, 0, 0)], 1, 1, [("A", 1, 0, 1), ("U", 0, 1, 1), ("V", 1, 1, 1)])


def central_binomial_ratio_term() -> ProperTerm:
    """C(n,k)^2 / C(2n,n) = Gamma(n+1)^4 / (Gamma(k+1)^2 Gamma(n-k+1)^2 Gamma(2n+1)).

    Summed over k this is identically 1.
    """
    return make_term([(1, 0, 0)], 1, 1,
                     [("A", 1, 0, 1)] * 4 + [("U", 0, 1, 1)] * 2 + [("U", 2, 0, 1)]
                     + [("V", 1, 1, 1)] * 2)
