"""Exact kernels of integer and polynomial matrices.

The polynomial routine is a fraction-free Gauss-Jordan elimination: after
each pivot every other row is combined as ``(piv*row - a*pivot_row) / den``
where ``den`` is the previous pivot, so all entries stay minors of the input
and every division is exact.  Pivot columns are taken left to right; inside
a column the row of lowest degree (then lowest height) wins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Sequence

from flint import fmpz_mat, fmpz_poly, nmod_poly

from .bipoly import height
from .errors import HypothesisViolation


class _Matrix:
    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence]):
        rows = [list(r) for r in rows]
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("matrix rows have different lengths")
        self.rows = rows

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def apply(self, v: Sequence):
        """A*v as a list."""
        if len(v) != self.ncols:
            raise ValueError("vector length does not match column count")
        out = []
        for row in self.rows:
            acc = 0
            for a, x in zip(row, v):
                if a != 0 and x != 0:
                    acc = acc + a * x
            out.append(acc)
        return out

    def annihilates(self, v: Sequence) -> bool:
        return all(e == 0 for e in self.apply(v))


class PolyMatrix(_Matrix):
    """Matrix over Z[n] (fmpz_poly) or F_p[n] (nmod_poly) entries."""

    def __init__(self, rows, modulus: int | None = None):
        if modulus is None:
            conv = lambda e: e if isinstance(e, fmpz_poly) else fmpz_poly(e if isinstance(e, list) else [e])
        else:
            conv = lambda e: nmod_poly(_int_coeffs(e), modulus)
        super().__init__([[conv(e) for e in r] for r in rows])
        self.modulus = modulus

    def reduce(self, p: int) -> PolyMatrix:
        if self.modulus is not None:
            raise ValueError("matrix is already reduced")
        return PolyMatrix(self.rows, modulus=p)


class IntMatrix(_Matrix):
    def __init__(self, rows):
        super().__init__([[int(e) for e in r] for r in rows])


def _int_coeffs(e) -> list[int]:
    if isinstance(e, (fmpz_poly, nmod_poly)):
        return [int(c) for c in e.coeffs()]
    if isinstance(e, list):
        return [int(c) for c in e]
    return [int(e)]


def _poly_key(a):
    if isinstance(a, fmpz_poly):
        return a.degree(), height(a)
    return (a.degree(),)


def _exquo(a, b):
    if isinstance(a, int):
        q, r = divmod(a, b)
        if r != 0:
            raise ArithmeticError("inexact division in fraction-free elimination")
        return q
    return a / b


def fraction_free_rref(rows: list[list], key: Callable = _poly_key):
    """In-place fraction-free Gauss-Jordan.

    Returns ``(rows, pivots, den)``; every pivot entry ends up equal to
    ``den`` and all other entries of pivot columns are zero.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    den = 1
    pivots: list[int] = []
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        cand = [i for i in range(rank, nrows) if rows[i][c] != 0]
        if not cand:
            continue
        best = min(cand, key=lambda i: (key(rows[i][c]), i))
        rows[rank], rows[best] = rows[best], rows[rank]
        prow = rows[rank]
        piv = prow[c]
        for i in range(nrows):
            if i == rank:
                continue
            row = rows[i]
            a = row[c]
            if a == 0:
                if den != 1 or piv != 1:
                    for j in range(ncols):
                        if row[j] != 0:
                            row[j] = _exquo(piv * row[j], den)
                continue
            for j in range(ncols):
                v = piv * row[j]
                if prow[j] != 0:
                    v = v - a * prow[j]
                row[j] = _exquo(v, den) if den != 1 else v
        pivots.append(c)
        den = piv
        rank += 1
    return rows, pivots, den


def _kernel_from_rref(rows, pivots, den, ncols, zero):
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = den
        for t, pc in enumerate(pivots):
            v[pc] = -rows[t][f]
        basis.append(v)
    return basis


def _leading(e):
    return e.leading_coefficient() if hasattr(e, "leading_coefficient") else e


def primitive_poly_vector(v: list) -> list:
    """Divide by the gcd of all entries and make the first nonzero entry's lead positive.

    Over F_p[n] the first nonzero entry is made monic instead.
    """
    nz = [e for e in v if e != 0]
    if not nz:
        return v
    g = reduce(lambda a, b: a.gcd(b), nz)
    v = [e / g if e != 0 else e for e in v] if g != 1 else list(v)
    lead = _leading(next(e for e in v if e != 0))
    if isinstance(v[0], nmod_poly):
        if int(lead) != 1:
            inv = nmod_poly([pow(int(lead), -1, v[0].modulus())], v[0].modulus())
            v = [e * inv for e in v]
    elif lead < 0:
        v = [-e for e in v]
    return v


def nullspace_poly(A: PolyMatrix) -> list[list]:
    """Canonical kernel basis of A over the field of rational functions.

    One vector per non-pivot column; each is primitive over Z[n] and
    sign-normalized, so the result does not depend on elimination details
    beyond the pivot set.  Works unchanged over F_p[n].
    """
    return nullspace_poly_pivots(A)[0]


def nullspace_poly_pivots(A: PolyMatrix) -> tuple[list[list], tuple[int, ...]]:
    """Like :func:`nullspace_poly` but also returns the pivot columns."""
    if A.nrows == 0:
        raise ValueError("empty matrix")
    rows = [list(r) for r in A.rows]
    zero = fmpz_poly([]) if A.modulus is None else nmod_poly([], A.modulus)
    rows, pivots, den = fraction_free_rref(rows)
    if not isinstance(den, (fmpz_poly, nmod_poly)):
        den = zero + den
    basis = _kernel_from_rref(rows, pivots, den, A.ncols, zero)
    return [primitive_poly_vector(v) for v in basis], tuple(pivots)


def nullspace_int(A: IntMatrix) -> list[list[int]]:
    """Integer kernel basis, each vector with gcd 1 and positive first nonzero entry."""
    if A.nrows == 0 or A.ncols == 0:
        raise ValueError("empty matrix")
    R, den, rank = fmpz_mat(A.rows).rref()
    pivots = []
    for t in range(rank):
        pivots.append(next(c for c in range(A.ncols) if R[t, c] != 0))
    pset = set(pivots)
    basis = []
    for f in range(A.ncols):
        if f in pset:
            continue
        v = [0] * A.ncols
        v[f] = int(den)
        for t, pc in enumerate(pivots):
            v[pc] = -int(R[t, f])
        g = math.gcd(*v)
        v = [e // g for e in v]
        if next(e for e in v if e != 0) < 0:
            v = [-e for e in v]
        basis.append(v)
    return basis


@dataclass(frozen=True)
class KernelBoundInput:
    d0: int
    d1: int
    M0: int
    M1: int
    m0: int
    m1: int
    rho: int

    def __post_init__(self):
        for name in ("d0", "d1", "M0", "M1", "m0", "m1", "rho"):
            if getattr(self, name) < 0:
                raise HypothesisViolation(f"{name} must be nonnegative")


def kernel_bound(inp: KernelBoundInput) -> tuple[int, int]:
    """Degree and height bounds for a Cramer kernel vector."""
    if inp.rho < inp.m0:
        raise HypothesisViolation(f"rank bound rho={inp.rho} is below m0={inp.m0}")
    if inp.m0 < 1:
        raise HypothesisViolation("m0 must be at least 1")
    dmax = max(inp.d0, inp.d1)
    degree = (inp.m0 - 1) * inp.d0 + (inp.rho - inp.m0) * inp.d1 + dmax
    h = (math.factorial(inp.rho) * (dmax + 1) ** (inp.rho - 1) * inp.M0 ** (inp.m0 - 1)
         * inp.M1 ** (inp.rho - inp.m0) * max(inp.M0, inp.M1))
    return degree, h
