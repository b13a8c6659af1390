"""Exact polynomials in n and k over the integers.

Univariate polynomials in ``n`` are flint ``fmpz_poly`` objects (aliased as
:data:`UniPoly`).  A :class:`BiPoly` stores one such polynomial per k-basis
element, either the monomials ``k**j`` or the binomials ``C(k, j)``::

    q = sum_j q_j(n) * k**j        (KBasis.STANDARD)
    q = sum_j q_j(n) * C(k, j)     (KBasis.BINOMIAL)

All the telescoping constructions happen in the binomial basis because the
k-shift does not increase its height.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from flint import fmpz_poly

from .errors import NegativeExponent, NonIntegralError

UniPoly = fmpz_poly


def uni(coeffs: Iterable[int] = ()) -> fmpz_poly:
    """Build a polynomial in n from ascending coefficients."""
    return fmpz_poly([int(c) for c in coeffs])


def uni_coeffs(p: fmpz_poly) -> list[int]:
    return [int(c) for c in p.coeffs()]


def height(p: fmpz_poly) -> int:
    """Standard height |p|_s: the largest absolute coefficient."""
    return max((abs(int(c)) for c in p.coeffs()), default=0)


def binomial_height(p: fmpz_poly) -> int:
    """Binomial height |p|_b of a univariate polynomial."""
    q = to_binomial(BiPoly([p], KBasis.STANDARD).transpose())
    return q.norm()


def shift_uni(p: fmpz_poly, r: int) -> fmpz_poly:
    """p(n + r)."""
    if r == 0 or p.degree() <= 0:
        return p
    return p(fmpz_poly([r, 1]))


def format_uni(p: fmpz_poly, var: str = "n") -> str:
    coeffs = uni_coeffs(p)
    if not coeffs:
        return "0"
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if i == 0:
            body = str(a)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


@lru_cache(maxsize=None)
def stirling2_row(m: int) -> tuple[int, ...]:
    """Stirling numbers of the second kind S(m, 0..m)."""
    if m == 0:
        return (1,)
    prev = stirling2_row(m - 1)
    row = [0] * (m + 1)
    for i in range(1, m + 1):
        row[i] = i * (prev[i] if i < m else 0) + prev[i - 1]
    return tuple(row)


@lru_cache(maxsize=None)
def stirling1_row(m: int) -> tuple[int, ...]:
    """Signed Stirling numbers of the first kind: k^(falling m) = sum s(m,i) k^i."""
    if m == 0:
        return (1,)
    prev = stirling1_row(m - 1)
    row = [0] * (m + 1)
    for i in range(1, m + 1):
        row[i] = prev[i - 1] - (m - 1) * (prev[i] if i < m else 0)
    return tuple(row)


def binom_value(k: int, j: int) -> int:
    """C(k, j) as a polynomial in k, evaluated at any integer k."""
    if k >= 0:
        return math.comb(k, j)
    num = 1
    for t in range(j):
        num *= k - t
    return num // math.factorial(j)


class KBasis(enum.Enum):
    STANDARD = "standard"
    BINOMIAL = "binomial"


def _trim(cols: list[fmpz_poly]) -> tuple[fmpz_poly, ...]:
    while cols and cols[-1] == 0:
        cols.pop()
    return tuple(cols)


class BiPoly:
    """Polynomial in n and k with a selectable k-basis.

    ``cols[j]`` is the coefficient polynomial (in n) of ``k**j`` or
    ``C(k, j)``.  Instances are immutable; equality includes the basis flag.
    """

    __slots__ = ("cols", "basis")
    __hash__ = None

    def __init__(self, cols: Sequence = (), basis: KBasis = KBasis.BINOMIAL):
        polys = [c if isinstance(c, fmpz_poly) else fmpz_poly(c if isinstance(c, list) else [c])
                 for c in cols]
        object.__setattr__(self, "cols", _trim(polys))
        object.__setattr__(self, "basis", KBasis(basis))

    def __setattr__(self, name, value):
        raise AttributeError("BiPoly is immutable")

    # -- construction -------------------------------------------------
    @classmethod
    def from_grid(cls, grid: Sequence[Sequence[int]], basis=KBasis.STANDARD) -> BiPoly:
        """Build from ``grid[i][j]``, the coefficient of n^i times the j-th k-basis element."""
        width = max((len(row) for row in grid), default=0)
        cols = [uni(row[j] if j < len(row) else 0 for row in grid) for j in range(width)]
        return cls(cols, basis)

    @classmethod
    def from_monomials(cls, terms: Iterable[tuple[int, int, int]], basis=KBasis.STANDARD) -> BiPoly:
        """Build from ``(coef, i, j)`` triples meaning coef * n^i * e_j(k)."""
        acc: dict[int, dict[int, int]] = {}
        for coef, i, j in terms:
            if i < 0 or j < 0:
                raise ValueError("monomial exponents must be nonnegative")
            col = acc.setdefault(int(j), {})
            col[int(i)] = col.get(int(i), 0) + int(coef)
        width = max(acc, default=-1) + 1
        cols = []
        for j in range(width):
            col = acc.get(j, {})
            deg = max(col, default=-1)
            cols.append(uni(col.get(i, 0) for i in range(deg + 1)))
        return cls(cols, basis)

    @classmethod
    def const(cls, c, basis=KBasis.BINOMIAL) -> BiPoly:
        return cls([c], basis)

    def monomials(self) -> list[tuple[int, int, int]]:
        out = []
        for j, col in enumerate(self.cols):
            for i, c in enumerate(uni_coeffs(col)):
                if c:
                    out.append((c, i, j))
        return out

    def grid(self) -> list[list[int]]:
        """Dense coefficient grid ``c[i][j]``."""
        rows = self.deg_n() + 1
        g = [[0] * len(self.cols) for _ in range(max(rows, 0))]
        for j, col in enumerate(self.cols):
            for i, c in enumerate(uni_coeffs(col)):
                g[i][j] = c
        return g

    def transpose(self) -> BiPoly:
        """Swap the roles of n and k (same basis flag); used for univariate helpers."""
        g = self.grid()
        if not g:
            return BiPoly([], self.basis)
        t = [[g[i][j] for i in range(len(g))] for j in range(len(g[0]))]
        return BiPoly.from_grid(t, self.basis)

    # -- queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.cols

    def deg_k(self) -> int:
        return len(self.cols) - 1

    def deg_n(self) -> int:
        return max((c.degree() for c in self.cols), default=-1)

    def total_degree(self) -> int:
        return max((c.degree() + j for j, c in enumerate(self.cols) if c != 0), default=-1)

    def coeff(self, j: int) -> fmpz_poly:
        return self.cols[j] if 0 <= j < len(self.cols) else fmpz_poly()

    def norm(self) -> int:
        return max((height(c) for c in self.cols), default=0)

    def __call__(self, n: int, k: int) -> int:
        total = 0
        for j, col in enumerate(self.cols):
            e = k ** j if self.basis is KBasis.STANDARD else binom_value(k, j)
            total += int(col(n)) * e
        return total

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: BiPoly) -> None:
        if self.basis is not other.basis:
            raise ValueError("cannot combine polynomials in different k-bases; convert first")

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.basis is other.basis and self.cols == other.cols

    def __add__(self, other: BiPoly) -> BiPoly:
        self._check(other)
        w = max(len(self.cols), len(other.cols))
        return BiPoly([self.coeff(j) + other.coeff(j) for j in range(w)], self.basis)

    def __sub__(self, other: BiPoly) -> BiPoly:
        self._check(other)
        w = max(len(self.cols), len(other.cols))
        return BiPoly([self.coeff(j) - other.coeff(j) for j in range(w)], self.basis)

    def __neg__(self) -> BiPoly:
        return BiPoly([-c for c in self.cols], self.basis)

    def scale(self, f) -> BiPoly:
        """Multiply by an integer or a polynomial in n alone."""
        return BiPoly([c * f for c in self.cols], self.basis)

    def __mul__(self, other):
        if isinstance(other, BiPoly):
            self._check(other)
            if self.basis is KBasis.STANDARD:
                return _mul_standard(self, other)
            return _mul_binomial(self, other)
        return self.scale(other)

    __rmul__ = scale

    def __repr__(self):
        return f"BiPoly({self!s}, basis={self.basis.value})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for j, col in enumerate(self.cols):
            if col == 0:
                continue
            cs = format_uni(col)
            if j == 0:
                parts.append(cs)
                continue
            elem = f"C(k,{j})" if self.basis is KBasis.BINOMIAL else ("k" if j == 1 else f"k^{j}")
            if cs == "1":
                parts.append(elem)
            elif cs == "-1":
                parts.append("-" + elem)
            elif " " in cs:
                parts.append(f"({cs})*{elem}")
            else:
                parts.append(f"{cs}*{elem}")
        return " + ".join(parts).replace("+ -", "- ")


def _mul_standard(a: BiPoly, b: BiPoly) -> BiPoly:
    if a.is_zero() or b.is_zero():
        return BiPoly([], KBasis.STANDARD)
    out = [fmpz_poly() for _ in range(len(a.cols) + len(b.cols) - 1)]
    for i, ca in enumerate(a.cols):
        if ca == 0:
            continue
        for j, cb in enumerate(b.cols):
            out[i + j] += ca * cb
    return BiPoly(out, KBasis.STANDARD)


def _mul_binomial(a: BiPoly, b: BiPoly) -> BiPoly:
    # C(k,i) C(k,j) = sum_{l=max(i,j)}^{i+j} C(l,i) C(i,l-j) C(k,l)
    if a.is_zero() or b.is_zero():
        return BiPoly([], KBasis.BINOMIAL)
    out = [fmpz_poly() for _ in range(len(a.cols) + len(b.cols) - 1)]
    for i, ca in enumerate(a.cols):
        if ca == 0:
            continue
        for j, cb in enumerate(b.cols):
            if cb == 0:
                continue
            prod = ca * cb
            for l in range(max(i, j), i + j + 1):
                out[l] += prod * (math.comb(l, i) * math.comb(i, l - j))
    return BiPoly(out, KBasis.BINOMIAL)


def norm(p) -> int:
    """Height of ``p`` in its own basis (|.|_s for UniPoly, ||.||_{s,s} or ||.||_{s,b})."""
    if isinstance(p, BiPoly):
        return p.norm()
    return height(p)


def to_binomial(p: BiPoly) -> BiPoly:
    """Rewrite a standard-basis polynomial with k^m = sum_i S(m,i) i! C(k,i)."""
    if p.basis is KBasis.BINOMIAL:
        raise ValueError("polynomial is already in the binomial basis")
    out = [fmpz_poly() for _ in p.cols]
    for m, col in enumerate(p.cols):
        if col == 0:
            continue
        row = stirling2_row(m)
        for i in range(m + 1):
            if row[i]:
                out[i] += col * (row[i] * math.factorial(i))
    return BiPoly(out, KBasis.BINOMIAL)


def to_standard(p: BiPoly) -> BiPoly:
    """Inverse of :func:`to_binomial`.

    Raises:
        NonIntegralError: the expansion has non-integer coefficients
            (e.g. a bare ``C(k, 2)``).
    """
    if p.basis is KBasis.STANDARD:
        raise ValueError("polynomial is already in the standard basis")
    if p.is_zero():
        return BiPoly([], KBasis.STANDARD)
    top = p.deg_k()
    big = math.factorial(top)
    grid = p.grid()
    out_grid = []
    for row in grid:
        new_row = []
        for m in range(top + 1):
            num = 0
            for j in range(m, top + 1):
                if row[j]:
                    num += row[j] * stirling1_row(j)[m] * (big // math.factorial(j))
            q, rem = divmod(num, big)
            if rem:
                raise NonIntegralError(f"{p} has no integer expansion in powers of k")
            new_row.append(q)
        out_grid.append(new_row)
    return BiPoly.from_grid(out_grid, KBasis.STANDARD)


def shift_n(q: BiPoly, r: int) -> BiPoly:
    """Substitute n -> n + r; the k-basis is kept."""
    if r < 0:
        raise ValueError("shift must be nonnegative")
    return BiPoly([shift_uni(c, r) for c in q.cols], q.basis)


def shift_k_binomial(q: BiPoly) -> BiPoly:
    """S_k(q) for q in the binomial basis, using C(k+1,j) = C(k,j) + C(k,j-1)."""
    if q.basis is not KBasis.BINOMIAL:
        raise ValueError("shift_k_binomial needs a binomial-basis polynomial")
    c = q.cols
    return BiPoly([c[j] + (c[j + 1] if j + 1 < len(c) else 0) for j in range(len(c))],
                  KBasis.BINOMIAL)


def mul_linear_binomial(a: int, b: int, c: int, q: BiPoly) -> BiPoly:
    """(a*n + b*k + c) * q in the binomial basis.

    Coefficient i of the product is ``(a n + b i + c) q_i + b i q_{i-1}``.
    """
    if q.basis is not KBasis.BINOMIAL:
        raise ValueError("mul_linear_binomial needs a binomial-basis polynomial")
    cols = q.cols
    if not cols:
        return q
    out = []
    for i in range(len(cols) + (1 if b else 0)):
        acc = fmpz_poly()
        if i < len(cols) and cols[i] != 0:
            acc = cols[i] * fmpz_poly([b * i + c, a])
        if b and i >= 1 and cols[i - 1] != 0:
            acc += cols[i - 1] * (b * i)
        out.append(acc)
    return BiPoly(out, KBasis.BINOMIAL)


@dataclass(frozen=True)
class LinearForm:
    """a*n + b*k + c."""

    a: int
    b: int
    c: int

    def __call__(self, n: int, k: int) -> int:
        return self.a * n + self.b * k + self.c

    def shifted(self, t: int) -> LinearForm:
        return LinearForm(self.a, self.b, self.c + t)

    @property
    def height(self) -> int:
        return max(abs(self.a), abs(self.b), abs(self.c))

    def __str__(self):
        parts = []
        for coef, var in ((self.a, "n"), (self.b, "k"), (self.c, "")):
            if coef == 0:
                continue
            mag = abs(coef)
            body = var if (mag == 1 and var) else (f"{mag}*{var}" if var else str(mag))
            parts.append(("-" if coef < 0 else "+", body))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, body in parts[1:]:
            out += f"{s}{body}"
        return out


@dataclass(frozen=True)
class FactorPower:
    """Symbolic rising factorial ``form^(rising m)``; m may be negative.

    For m < 0 this is ``1 / ((form - |m|) ... (form - 1))``.
    """

    form: LinearForm
    exponent: int

    def value(self, n: int, k: int) -> Fraction | None:
        """Exact value, or None where a negative power has a pole."""
        x = self.form(n, k)
        m = self.exponent
        if m >= 0:
            out = 1
            for t in range(m):
                out *= x + t
            return Fraction(out)
        den = 1
        for t in range(1, -m + 1):
            den *= x - t
        if den == 0:
            return None
        return Fraction(1, den)

    def __str__(self):
        return f"({self.form})^({self.exponent})"


def rising_factorial(a: int, b: int, c: int, m: int, *, symbolic: bool = False,
                     basis: KBasis = KBasis.BINOMIAL):
    """(a n + b k + c)(a n + b k + c + 1) ... (m factors).

    With ``symbolic=True`` a :class:`FactorPower` is returned (any sign of m);
    otherwise the expanded polynomial, built with :func:`mul_linear_binomial`.
    """
    if symbolic:
        return FactorPower(LinearForm(a, b, c), m)
    if m < 0:
        raise NegativeExponent(f"rising factorial exponent {m} < 0 has no polynomial form")
    q = BiPoly.const(1, KBasis.BINOMIAL)
    for t in range(m):
        q = mul_linear_binomial(a, b, c + t, q)
    if basis is KBasis.STANDARD:
        return to_standard(q)
    return q
