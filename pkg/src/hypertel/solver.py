"""Telescoper solvers.

Two encodings of the master identity ``sum_i ell_i P_i = Q S_k(Y) - R Y``:

* the minimal system (order r = nu) with polynomial unknowns ell_i(n) and
  y_j(n), one row per binomial C(k, i), solved over Z[n];
* the nonminimal ansatz with integer unknowns for every coefficient of
  n^i in ell_j and in Y, one row per monomial n^i C(k, j), solved over Z.

In both, the certificate columns are negated so a kernel vector reads off
(ell, Y) directly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from flint import fmpz_poly

from .az_core import AZPolys, Certificate, assemble_certificate, build_az
from .bipoly import BiPoly, KBasis, format_uni, height, uni
from .errors import DegenerateTerm, InternalInconsistency, ZeroOperator
from .exact_linalg import IntMatrix, PolyMatrix, nullspace_int, nullspace_poly
from .term_model import ProperTerm, normalize, shape_params

MAX_ESCALATIONS = 5


class RelationKind(str, enum.Enum):
    MINIMAL = "minimal"
    NONMINIMAL = "nonminimal"


@dataclass(frozen=True, eq=False)
class CTRelation:
    ell: tuple[fmpz_poly, ...]
    Y: BiPoly
    r: int
    kind: RelationKind
    certificate: Certificate
    s: int = 0
    ansatz_d: int | None = None
    escalations: int = 0
    fallback: bool = False

    @property
    def d(self) -> int:
        """Degree of the telescoper, max deg ell_i."""
        return max((e.degree() for e in self.ell), default=-1)

    @property
    def escalated(self) -> bool:
        return self.escalations > 0 or self.fallback

    def same_as(self, other: CTRelation) -> bool:
        return (self.r == other.r and list(self.ell) == list(other.ell) and self.Y == other.Y)

    def operator_str(self) -> str:
        parts = []
        for i, e in enumerate(self.ell):
            if e == 0:
                continue
            op = "" if i == 0 else ("S_n" if i == 1 else f"S_n^{i}")
            cs = format_uni(e)
            if not op:
                parts.append(cs)
            elif cs == "1":
                parts.append(op)
            elif cs == "-1":
                parts.append("-" + op)
            elif " " in cs:
                parts.append(f"({cs})*{op}")
            else:
                parts.append(f"{cs}*{op}")
        text = " + ".join(reversed(parts)).replace("+ -", "- ")
        return text or "0"


@dataclass
class HeightRecord:
    omega: int
    r: int
    d: int
    H: float
    ln_bound: float
    runtime_ms: int
    status: str = "ok"
    escalated: bool = False

    @property
    def H_over_omega3(self) -> float:
        return self.H / self.omega ** 3

    @property
    def H_over_omega5(self) -> float:
        return self.H / self.omega ** 5


def binomial_basis_element(j: int) -> BiPoly:
    return BiPoly([0] * j + [1], KBasis.BINOMIAL)


def minimal_dimensions(term: ProperTerm) -> tuple[int, int, int]:
    """(r, s, number of rows) of the minimal system."""
    sp = shape_params(term)
    r = sp.nu
    s = sp.delta + (sp.theta - 1) * sp.nu
    return r, s, sp.delta + sp.theta * sp.nu + 1


def _certificate_columns(az: AZPolys, s: int) -> list[BiPoly]:
    return [az.certificate_part(binomial_basis_element(j)) for j in range(s + 1)]


def minimal_system(term: ProperTerm, az: AZPolys | None = None) -> PolyMatrix:
    term = normalize(term)
    r, s, nrows = minimal_dimensions(term)
    az = az or build_az(term, r)
    cols = list(az.P) + [-c for c in _certificate_columns(az, s)]
    for c in cols:
        if c.deg_k() >= nrows:
            raise InternalInconsistency("system column exceeds the predicted k-degree")
    return PolyMatrix([[c.coeff(i) for c in cols] for i in range(nrows)])


def _ell_part(v, r):
    return v[: r + 1]


def _select(candidates, r):
    """Smallest (max ell-degree, ell-height, index)."""
    def key(item):
        idx, v = item
        ell = _ell_part(v, r)
        return (max(e.degree() for e in ell), max(height(e) for e in ell), idx)
    return min(candidates, key=key)[1]


def orient(ell: list, Y_cols: list) -> tuple[list, list]:
    """Flip sign so the last nonzero ell has a positive leading coefficient."""
    last = next(e for e in reversed(ell) if e != 0)
    if last.leading_coefficient() < 0:
        return [-e for e in ell], [-c for c in Y_cols]
    return list(ell), list(Y_cols)


def relation_from_vector(term: ProperTerm, v, r: int, s: int, kind: RelationKind, **extra) -> CTRelation:
    ell, ycols = orient(list(v[: r + 1]), list(v[r + 1:]))
    Y = BiPoly(ycols, KBasis.BINOMIAL)
    cert = assemble_certificate(term, r, Y)
    return CTRelation(tuple(ell), Y, r, kind, cert, s=s, **extra)


def choose_kernel_vector(basis, r: int):
    """Pick the canonical kernel vector; returns None when no ell part is nonzero."""
    cands = [(i, v) for i, v in enumerate(basis) if any(e != 0 for e in _ell_part(v, r))]
    if not cands:
        return None
    return _select(cands, r)


def solve_minimal(term: ProperTerm) -> CTRelation:
    """Telescoper of order nu from the minimal system."""
    term = normalize(term)
    r, s, _ = minimal_dimensions(term)
    az = build_az(term, r)
    A = minimal_system(term, az)
    basis = nullspace_poly(A)
    if not basis:
        raise InternalInconsistency("the minimal system has a trivial kernel")
    v = choose_kernel_vector(basis, r)
    if v is None:
        raise DegenerateTerm("every kernel vector has a zero telescoper part; the term may be rational")
    rel = relation_from_vector(term, v, r, s, RelationKind.MINIMAL)
    if not verify_relation(term, rel, az):
        raise InternalInconsistency("computed relation fails the master identity")
    return rel


@dataclass(frozen=True)
class AnsatzLayout:
    r: int
    d: int
    s: int
    ell_cols: int
    y_cols: int
    n_width: int
    k_width: int

    @property
    def unknowns(self) -> int:
        return self.ell_cols + self.y_cols

    def ell_index(self, i: int, j: int) -> int:
        return j * (self.d + 1) + i

    def y_index(self, i: int, j: int) -> int:
        return self.ell_cols + j * (self.s + self.d + 1) + i


def ansatz_layout(term: ProperTerm, r: int, d: int, s: int) -> AnsatzLayout:
    sp = shape_params(normalize(term))
    base = sp.delta + r * sp.theta
    ys = max(s, -1)
    return AnsatzLayout(r, d, s, (r + 1) * (d + 1), (ys + d + 1) * (ys + 1),
                        base + d + 1, base + 1)


def nonminimal_system(term: ProperTerm, r: int, d: int, s: int,
                      az: AZPolys | None = None) -> tuple[IntMatrix, AnsatzLayout]:
    """Integer system for the ansatz; returns the matrix (zero rows dropped) and its layout.

    Unknowns in column order are ell_{i,j} (coefficient of n^i in ell_j),
    j-major, then y_{i,j} (coefficient of n^i C(k,j) in Y), j-major with
    n-degree up to s+d and k-index up to s.
    """
    term = normalize(term)
    if d < 0:
        raise ValueError("degree d must be nonnegative")
    layout = ansatz_layout(term, r, d, s)
    az = az or build_az(term, r)
    width_n, width_k = layout.n_width, layout.k_width
    dense = [[0] * layout.unknowns for _ in range(width_n * width_k)]

    def put(col: int, q: BiPoly, shift: int, sign: int):
        for j, c in enumerate(q.cols):
            if j >= width_k:
                raise InternalInconsistency("ansatz column exceeds the predicted k-degree")
            for i, a in enumerate(c.coeffs()):
                if a != 0:
                    if i + shift >= width_n:
                        raise InternalInconsistency("ansatz column exceeds the predicted n-degree")
                    dense[j * width_n + i + shift][col] = sign * int(a)

    for j, P in enumerate(az.P):
        for i in range(d + 1):
            put(layout.ell_index(i, j), P, i, 1)
    for j, q in enumerate(_certificate_columns(az, s)):
        for i in range(s + d + 1):
            put(layout.y_index(i, j), q, i, -1)
    rows = [row for row in dense if any(row)]
    if not rows:
        rows = [[0] * layout.unknowns]
    return IntMatrix(rows), layout


def _vector_to_polys(v: list[int], layout: AnsatzLayout) -> list[fmpz_poly]:
    ell = [uni(v[layout.ell_index(i, j)] for i in range(layout.d + 1)) for j in range(layout.r + 1)]
    ys = [uni(v[layout.y_index(i, j)] for i in range(layout.s + layout.d + 1))
          for j in range(layout.s + 1)]
    return ell + ys


def nonminimal_parameters(term: ProperTerm) -> tuple[int, int, int]:
    """The ansatz (r, d, s) = (2 nu, 4 nu theta, delta + r theta - nu)."""
    sp = shape_params(normalize(term))
    r = 2 * sp.nu
    return r, 4 * sp.nu * sp.theta, sp.delta + r * sp.theta - sp.nu


def solve_nonminimal(term: ProperTerm, max_escalations: int = MAX_ESCALATIONS) -> CTRelation:
    """Telescoper from the nonminimal ansatz, escalating d when needed."""
    term = normalize(term)
    sp = shape_params(term)
    r, d, s = nonminimal_parameters(term)
    az = build_az(term, r)
    for round_ in range(max_escalations + 1):
        A, layout = nonminimal_system(term, r, d, s, az)
        basis = [_vector_to_polys(v, layout) for v in nullspace_int(A)]
        v = choose_kernel_vector(basis, r)
        if v is not None:
            rel = relation_from_vector(term, v, r, s, RelationKind.NONMINIMAL,
                                       ansatz_d=d, escalations=round_)
            if not verify_relation(term, rel, az):
                raise InternalInconsistency("computed relation fails the master identity")
            return rel
        d += sp.nu + 1
    rel = solve_minimal(term)
    return CTRelation(rel.ell, rel.Y, rel.r, rel.kind, rel.certificate, s=rel.s,
                      ansatz_d=d, escalations=max_escalations, fallback=True)


def verify_relation(term: ProperTerm, rel: CTRelation, az: AZPolys | None = None) -> bool:
    """Exact check of sum_i ell_i P_i == Q S_k(Y) - R Y in the binomial basis."""
    term = normalize(term)
    if len(rel.ell) != rel.r + 1 or rel.Y.basis is not KBasis.BINOMIAL:
        return False
    az = az if az is not None and az.r == rel.r else build_az(term, rel.r)
    lhs = BiPoly([], KBasis.BINOMIAL)
    for e, P in zip(rel.ell, az.P):
        if e != 0:
            lhs = lhs + P.scale(e)
    return lhs == az.certificate_part(rel.Y)


def max_coefficient(rel: CTRelation) -> int:
    return max((height(e) for e in rel.ell), default=0)


def height_of(rel: CTRelation) -> float:
    """Natural log of the largest absolute integer coefficient of the ell_i."""
    m = max_coefficient(rel)
    if m == 0:
        raise ZeroOperator("the telescoper is zero")
    return math.log(m)
