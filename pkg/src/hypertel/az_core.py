"""Certificate polynomials P_i, Q, R and the certificate itself.

For an ansatz order r, a telescoper ``L = sum_i ell_i(n) S_n^i`` exists as
soon as some polynomial Y satisfies::

    ell_0 P_0 + ... + ell_r P_r = Q S_k(Y) - R Y

with P_i, Q and R products of rising factorials of the Gamma arguments.
Everything here is built in the binomial k-basis by repeated linear-factor
multiplication.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .bipoly import (BiPoly, FactorPower, LinearForm, mul_linear_binomial, shift_k_binomial,
                     shift_n, to_binomial)
from .term_model import (ProperTerm, Role, TermValue, ValueKind, eval_term, gamma_quotient, normalize,
                         power)


def rising_forms(form: LinearForm, m: int) -> list[LinearForm]:
    """The m linear factors of form^(rising m)."""
    return [form.shifted(t) for t in range(m)]


def apply_forms(forms: Iterable[LinearForm], q: BiPoly) -> BiPoly:
    for f in forms:
        q = mul_linear_binomial(f.a, f.b, f.c, q)
    return q


def p_forms(term: ProperTerm, r: int, i: int) -> list[LinearForm]:
    forms = []
    for f in term.factors:
        arg = f.argument()
        if f.role is Role.A or f.role is Role.B:
            forms += rising_forms(arg, i * f.n)
        else:
            forms += rising_forms(arg.shifted(i * f.n), (r - i) * f.n)
    return forms


def q_forms(term: ProperTerm, r: int) -> list[LinearForm]:
    forms = []
    for f in term.role(Role.A):
        forms += rising_forms(f.argument(), f.k)
    for f in term.role(Role.V):
        forms += rising_forms(f.argument().shifted(r * f.n - f.k), f.k)
    return forms


def r_forms(term: ProperTerm, r: int) -> list[LinearForm]:
    forms = []
    for f in term.role(Role.U):
        forms += rising_forms(f.argument().shifted(r * f.n - f.k), f.k)
    for f in term.role(Role.B):
        forms += rising_forms(f.argument(), f.k)
    return forms


def build_P(term: ProperTerm, r: int) -> list[BiPoly]:
    """P_0, ..., P_r in the binomial k-basis."""
    if r < 0:
        raise ValueError("order must be nonnegative")
    term = normalize(term)
    base = to_binomial(term.p)
    out = []
    for i in range(r + 1):
        q = shift_n(base, i).scale(term.x ** i)
        out.append(apply_forms(p_forms(term, r, i), q))
    return out


def build_QR(term: ProperTerm, r: int) -> tuple[BiPoly, BiPoly]:
    term = normalize(term)
    one = BiPoly.const(1)
    Q = apply_forms(q_forms(term, r), one).scale(term.y)
    R = apply_forms(r_forms(term, r), one)
    return Q, R


@dataclass(frozen=True, eq=False)
class AZPolys:
    P: tuple[BiPoly, ...]
    Q: BiPoly
    R: BiPoly
    r: int
    y: int
    q_factors: tuple[LinearForm, ...]
    r_factors: tuple[LinearForm, ...]

    def apply_Q(self, Y: BiPoly) -> BiPoly:
        """Q * S_k(Y)."""
        return apply_forms(self.q_factors, shift_k_binomial(Y)).scale(self.y)

    def apply_R(self, Y: BiPoly) -> BiPoly:
        return apply_forms(self.r_factors, Y)

    def certificate_part(self, Y: BiPoly) -> BiPoly:
        """Q S_k(Y) - R Y."""
        return self.apply_Q(Y) - self.apply_R(Y)


def build_az(term: ProperTerm, r: int) -> AZPolys:
    term = normalize(term)
    qf = tuple(q_forms(term, r))
    rf = tuple(r_forms(term, r))
    Q, R = build_QR(term, r)
    return AZPolys(tuple(build_P(term, r)), Q, R, r, term.y, qf, rf)


@dataclass(frozen=True, eq=False)
class Certificate:
    """C = (Y / p) * prod(numerator) / prod(denominator), kept factored."""

    Y: BiPoly
    p: BiPoly
    numerator: tuple[FactorPower, ...]
    denominator: tuple[FactorPower, ...]

    def __call__(self, n: int, k: int) -> Fraction | None:
        """Exact value, or None at a pole."""
        pv = self.p(n, k)
        if pv == 0:
            return None
        value = Fraction(self.Y(n, k), pv)
        for f in self.numerator:
            v = f.value(n, k)
            if v is None:
                return None
            value *= v
        for f in self.denominator:
            v = f.value(n, k)
            if v is None or v == 0:
                return None
            value /= v
        return value

    def __str__(self):
        num = [str(f) for f in self.numerator if f.exponent != 0]
        den = [str(f) for f in self.denominator if f.exponent != 0]
        out = f"({self.Y})"
        if self.p != BiPoly.const(1, self.p.basis):
            out += f"/({self.p})"
        if num:
            out += "*" + "*".join(num)
        if den:
            out += "/(" + "*".join(den) + ")"
        return out


def assemble_certificate(term: ProperTerm, r: int, Y: BiPoly) -> Certificate:
    term = normalize(term)
    num = tuple(FactorPower(f.argument(), f.k) for f in term.role(Role.B))
    den = tuple(FactorPower(f.argument(), r * f.n - f.k) for f in term.role(Role.U))
    den += tuple(FactorPower(f.argument(), r * f.n) for f in term.role(Role.V))
    return Certificate(Y, term.p, num, den)


def eval_certified_term(term: ProperTerm, r: int, Y: BiPoly, n: int, k: int) -> TermValue:
    """C*h as one Gamma quotient.

    ``Y x^n y^k prod G(A) G(B + b') / (G(U + r u - u') G(V + r v))``; unlike
    evaluating C and h separately this has no removable singularities.
    """
    numer, denom = [], []
    for f in term.factors:
        z = f.argument()(n, k)
        if f.role is Role.A:
            numer.append(z)
        elif f.role is Role.B:
            numer.append(z + f.k)
        elif f.role is Role.U:
            denom.append(z + r * f.n - f.k)
        else:
            denom.append(z + r * f.n)
    g = gamma_quotient(numer, denom)
    if g.kind is not ValueKind.RATIONAL:
        return g
    value = g.value * Y(n, k) * power(term.x, n) * power(term.y, k)
    return TermValue(ValueKind.RATIONAL, value)


class CheckStatus(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class PointCheck:
    n: int
    k: int
    status: CheckStatus
    lhs: Fraction | None = None
    rhs: Fraction | None = None


def telescoping_check(term: ProperTerm, relation, points: Sequence[tuple[int, int]],
                      form: str = "factored") -> list[PointCheck]:
    """Compare L(h) with (S_k - 1)(C h) at each point.

    ``form="factored"`` multiplies the factored certificate by h and skips
    points where either is singular.  ``form="gamma"`` evaluates C*h through
    :func:`eval_certified_term` and only skips numerator Gamma poles.
    """
    if form not in ("factored", "gamma"):
        raise ValueError(f"unknown certificate form {form!r}")
    term = normalize(term)
    out = []
    for n, k in points:
        lhs = Fraction(0)
        skipped = False
        for i, ell in enumerate(relation.ell):
            if ell == 0:
                continue
            hv = eval_term(term, n + i, k)
            if hv.is_undefined:
                skipped = True
                break
            lhs += int(ell(n)) * hv.as_fraction()
        rhs = None
        if not skipped:
            if form == "factored":
                vals = []
                for kk in (k + 1, k):
                    c = relation.certificate(n, kk)
                    hv = eval_term(term, n, kk)
                    if c is None or hv.is_undefined:
                        skipped = True
                        break
                    vals.append(c * hv.as_fraction())
                if not skipped:
                    rhs = vals[0] - vals[1]
            else:
                g1 = eval_certified_term(term, relation.r, relation.Y, n, k + 1)
                g0 = eval_certified_term(term, relation.r, relation.Y, n, k)
                if g1.is_undefined or g0.is_undefined:
                    skipped = True
                else:
                    rhs = g1.as_fraction() - g0.as_fraction()
        if skipped:
            out.append(PointCheck(n, k, CheckStatus.SKIPPED))
        else:
            status = CheckStatus.PASS if lhs == rhs else CheckStatus.FAIL
            out.append(PointCheck(n, k, status, lhs, rhs))
    return out
