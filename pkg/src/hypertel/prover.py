"""Two-line identity prover for sum_k h(n, k) = 1.

A telescoper L of order r and degree d with leading coefficient ell_r is
computed first.  If the sum equals 1 for n = 0..N with
N = max(r + d + 1, r + n0 + 1), where n0 is the largest nonnegative integer
root of ell_r, then it equals 1 for all n: L annihilates the constant 1
(a degree-d polynomial with d+1 roots vanishes), and past n0 the recurrence
determines every further value.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from flint import fmpz_poly

from .az_core import CheckStatus, eval_certified_term, telescoping_check
from .bipoly import height, uni_coeffs
from .bounds import minimal_height_ln
from .errors import SingularTerm, WindowViolation, ZeroPolynomial
from .solver import CTRelation, solve_minimal
from .term_model import ProperTerm, eval_term, normalize

EDGE = 3


def _check_nonzero(p: fmpz_poly) -> None:
    if p == 0:
        raise ZeroPolynomial("polynomial must be nonzero")


def integer_roots(p: fmpz_poly) -> list[int]:
    """Sorted nonnegative integer roots, read off the linear factors over Z."""
    _check_nonzero(p)
    roots = set()
    if p.degree() > 0:
        _, factors = p.factor()
        for f, _e in factors:
            if f.degree() != 1:
                continue
            b, a = (int(c) for c in f.coeffs())
            if b % a == 0 and -b // a >= 0:
                roots.add(-b // a)
    return sorted(roots)


def integer_roots_by_divisors(p: fmpz_poly) -> list[int]:
    """Rational-root-theorem search: strip n^e, then try divisors of the trailing coefficient."""
    _check_nonzero(p)
    coeffs = uni_coeffs(p)
    e = next(i for i, c in enumerate(coeffs) if c != 0)
    roots = {0} if e > 0 else set()
    q = fmpz_poly(coeffs[e:])
    q = q / q.content() if q.content() != 1 else q
    t = abs(int(q.coeffs()[0]))
    if q.degree() > 0:
        for dv in range(1, math.isqrt(t) + 1):
            if t % dv == 0:
                for c in (dv, t // dv):
                    if q(c) == 0:
                        roots.add(c)
    return sorted(roots)


def leading_root_bound(p: fmpz_poly) -> int:
    """|p|, which bounds the absolute value of every integer root."""
    _check_nonzero(p)
    return height(p)


@dataclass(frozen=True)
class AffineForm:
    """c*n + e."""

    c: int
    e: int

    def __call__(self, n: int) -> int:
        return self.c * n + self.e

    def __str__(self):
        if self.c == 0:
            return str(self.e)
        head = "n" if self.c == 1 else ("-n" if self.c == -1 else f"{self.c}*n")
        if self.e == 0:
            return head
        return f"{head}{'+' if self.e > 0 else '-'}{abs(self.e)}"


_TERM = re.compile(r"([+-]?)(\d*)(\*?n)?")


def parse_affine(text: str) -> AffineForm:
    """Parse expressions like ``n``, ``2*n-1``, ``-n+5`` or ``3``."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty affine form")
    c = e = 0
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
            raise ValueError(f"cannot parse affine form {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        if m.group(3):
            if m.group(3) == "*n" and not m.group(2):
                raise ValueError(f"cannot parse affine form {text!r}")
            c += sign * (int(m.group(2)) if m.group(2) else 1)
        else:
            e += sign * int(m.group(2))
        pos = m.end()
        if pos < len(s) and s[pos] not in "+-":
            raise ValueError(f"cannot parse affine form {text!r}")
    return AffineForm(c, e)


@dataclass(frozen=True)
class SupportWindow:
    k_lo: AffineForm
    k_hi: AffineForm

    @classmethod
    def parse(cls, lo: str, hi: str) -> SupportWindow:
        return cls(parse_affine(lo), parse_affine(hi))

    def bounds(self, n: int) -> tuple[int, int]:
        return self.k_lo(n), self.k_hi(n)


def _value(term, n, k):
    v = eval_term(term, n, k)
    if v.is_undefined:
        raise SingularTerm(n, k)
    return v.as_fraction()


def exact_sum(term: ProperTerm, n: int, window: SupportWindow, check_edges: bool = True) -> Fraction:
    """sum_{k=k_lo(n)}^{k_hi(n)} h(n, k), after checking that h vanishes just outside."""
    term = normalize(term)
    lo, hi = window.bounds(n)
    if check_edges:
        for k in list(range(lo - EDGE, lo)) + list(range(hi + 1, hi + 1 + EDGE)):
            v = eval_term(term, n, k)
            if v.is_undefined or v.as_fraction() != 0:
                raise WindowViolation(f"h({n},{k}) is nonzero outside the declared window [{lo},{hi}]")
    return sum((_value(term, n, k) for k in range(lo, hi + 1)), Fraction(0))


class Verdict(str, enum.Enum):
    PROVEN = "proven"
    DISPROVEN = "disproven"
    INAPPLICABLE = "inapplicable"


@dataclass
class ProofReport:
    verdict: Verdict
    r: int
    d: int
    n0: int
    points_checked: int
    N: int
    lead_bound: int
    H_bound_ln: float
    n_fail: int | None = None
    reason: str | None = None
    relation: CTRelation | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        out = {"verdict": self.verdict.value, "r": self.r, "d": self.d, "n0": str(self.n0),
               "points_checked": self.points_checked, "N": self.N,
               "lead_bound": str(self.lead_bound), "H_bound_ln": self.H_bound_ln}
        if self.n_fail is not None:
            out["n_fail"] = str(self.n_fail)
        if self.reason is not None:
            out["reason"] = self.reason
        return out


def effective_order(rel: CTRelation) -> int:
    return max(i for i, e in enumerate(rel.ell) if e != 0)


def _certificate_gate(term, rel, window, N, form) -> str | None:
    """Reason the telescoping argument fails on n = 0..N, or None."""
    for n in range(N + 1):
        los, his = zip(*(window.bounds(n + i) for i in range(rel.r + 1)))
        lo, hi = min(los), max(his)
        checks = telescoping_check(term, rel, [(n, k) for k in range(lo, hi + 1)], form=form)
        for c in checks:
            if c.status is CheckStatus.SKIPPED:
                return f"certificate or term singular at (n,k)=({c.n},{c.k})"
            if c.status is CheckStatus.FAIL:
                return f"telescoping relation fails at (n,k)=({c.n},{c.k})"
        for k in (lo, hi + 1):
            g = eval_certified_term(term, rel.r, rel.Y, n, k)
            if g.is_undefined:
                return f"certificate term undefined at boundary (n,k)=({n},{k})"
            if g.as_fraction() != 0:
                return f"certificate term nonzero at boundary (n,k)=({n},{k})"
    return None


def prove_identity(term: ProperTerm, window: SupportWindow, rhs_constant=1,
                   form: str = "gamma", relation: CTRelation | None = None) -> ProofReport:
    """Decide sum_k h(n,k) = rhs_constant for all n >= 0 by finitely many checks.

    ``form`` selects how C*h is evaluated in the certificate gate (see
    :func:`telescoping_check`).
    """
    term = normalize(term)
    rel = relation or solve_minimal(term)
    r = effective_order(rel)
    lead = rel.ell[r]
    d = rel.d
    n0 = max(integer_roots(lead), default=0)
    N = max(r + d + 1, r + n0 + 1)
    common = dict(r=r, d=d, n0=n0, N=N, lead_bound=leading_root_bound(lead),
                  H_bound_ln=minimal_height_ln(term), relation=rel)
    target = Fraction(rhs_constant)
    for n in range(N + 1):
        if exact_sum(term, n, window) != target:
            return ProofReport(Verdict.DISPROVEN, points_checked=n + 1, n_fail=n, **common)
    reason = _certificate_gate(term, rel, window, N, form)
    if reason is not None:
        return ProofReport(Verdict.INAPPLICABLE, points_checked=N + 1, reason=reason, **common)
    return ProofReport(Verdict.PROVEN, points_checked=N + 1, **common)
