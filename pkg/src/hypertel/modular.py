"""Modular telescopers by Chinese remaindering and rational reconstruction.

Every prime yields the canonical (RREF, primitive) kernel basis of the
minimal system over F_p[n].  Each basis vector is scaled so that the leading
coefficient of its last nonzero telescoper entry is 1; the same scaling of
the integer basis is a vector of rationals, and that is what the residues
converge to.  A prime is lucky when its signature (the kernel shape plus
entry degrees) is the best seen so far.  Worse signatures are discarded and
a better one restarts the accumulation.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from flint import fmpz, fmpz_poly, nmod_poly

from .bipoly import uni
from .errors import (InternalInconsistency, NonCoprimeModuli, ReconstructionFailed, UnluckyPrime,
                     DegenerateTerm)
from .exact_linalg import PolyMatrix, nullspace_poly_pivots
from .solver import (CTRelation, RelationKind, choose_kernel_vector, height_of, minimal_dimensions,
                     minimal_system, relation_from_vector, verify_relation)
from .term_model import ProperTerm, normalize


# -- integer helpers -------------------------------------------------------

def crt_combine(a1: int, m1: int, a2: int, m2: int) -> tuple[int, int]:
    """The unique a in [0, m1*m2) with a = a1 mod m1 and a = a2 mod m2."""
    if math.gcd(m1, m2) != 1:
        raise NonCoprimeModuli(f"moduli {m1} and {m2} are not coprime")
    m = m1 * m2
    if m1 == 1:
        return a2 % m2, m
    t = ((a2 - a1) * pow(m1, -1, m2)) % m2
    return (a1 + m1 * t) % m, m


def rational_reconstruct(a: int, m: int) -> Fraction:
    """n/d with |n|, d <= isqrt(m/2) and d*a = n mod m, by half-extended Euclid."""
    if not 0 <= a < m:
        raise ValueError("residue must lie in [0, m)")
    bound = math.isqrt(m // 2)
    r0, r1 = m, a
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or math.gcd(r1, abs(t1)) != 1:
        raise ReconstructionFailed(f"no fraction with bound {bound} matches {a} mod {m}")
    if t1 < 0:
        r1, t1 = -r1, -t1
    return Fraction(r1, t1)


def descending_primes(bits: int) -> Iterator[int]:
    """Odd primes below 2**bits, largest first."""
    n = (1 << bits) - 1
    while n > 2:
        if fmpz(n).is_prime():
            yield n
        n -= 2 if n % 2 else 1


def small_primes(start: int = 3) -> Iterator[int]:
    n = max(3, start)
    while True:
        if fmpz(n).is_prime():
            yield n
        n += 1


# -- per-prime solve -------------------------------------------------------

class ModularRelation:
    """Result of the minimal pipeline over F_p."""

    def __init__(self, prime, basis, pivots, r, ell_mod, Y_mod):
        self.prime = prime
        self.basis = basis
        self.pivots = pivots
        self.r = r
        self.ell_mod = ell_mod
        self.Y_mod = Y_mod

    @property
    def signature(self) -> tuple:
        degs = tuple(tuple(-e.degree() for e in v) for v in self.basis)
        return (len(self.basis), self.pivots, degs)

    @property
    def shape(self) -> tuple:
        return self.r, tuple(e.degree() for e in self.ell_mod)


def _scale_mod(v: list, r: int, p: int) -> list:
    nz = [e for e in v[: r + 1] if e != 0] or [e for e in v if e != 0]
    ref = nz[-1] if any(e != 0 for e in v[: r + 1]) else nz[0]
    lead = int(ref.leading_coefficient())
    inv = nmod_poly([pow(lead, -1, p)], p)
    return [e * inv for e in v]


def solve_minimal_mod(term: ProperTerm, prime: int, consensus: tuple | None = None,
                      system: PolyMatrix | None = None) -> ModularRelation:
    """Minimal system solved over F_p[n].

    Raises UnluckyPrime if the prime is excluded (p <= 2, p | x or p | y) or
    its signature is worse than ``consensus``.
    """
    term = normalize(term)
    if prime <= 2 or not fmpz(prime).is_prime():
        raise UnluckyPrime(prime, f"{prime} is not an odd prime")
    if term.x % prime == 0 or term.y % prime == 0:
        raise UnluckyPrime(prime, f"{prime} divides a base of the term")
    r, s, _ = minimal_dimensions(term)
    A = system if system is not None else minimal_system(term)
    Ap = A.reduce(prime)
    basis, pivots = nullspace_poly_pivots(Ap)
    basis = [_scale_mod(v, r, prime) for v in basis]
    for v in basis:
        if not Ap.annihilates(v):
            raise InternalInconsistency("mod-p kernel vector fails the system")
    cands = [(i, v) for i, v in enumerate(basis) if any(e != 0 for e in v[: r + 1])]
    if cands:
        chosen = min(cands, key=lambda iv: (max(e.degree() for e in iv[1][: r + 1]), iv[0]))[1]
        ell, Y = chosen[: r + 1], chosen[r + 1:]
    else:
        ell, Y = [], []
    rel = ModularRelation(prime, basis, tuple(pivots), r, ell, Y)
    if consensus is not None and rel.signature > consensus:
        raise UnluckyPrime(prime, "kernel signature differs from the consensus")
    return rel


# -- accumulation ----------------------------------------------------------

@dataclass
class CRTState:
    modulus: int = 1
    residues: list[int] = field(default_factory=list)
    stable_rounds: int = 0
    signature: tuple | None = None
    primes: list[int] = field(default_factory=list)
    candidate: list | None = None

    def reset(self, signature):
        self.modulus = 1
        self.residues = []
        self.stable_rounds = 0
        self.signature = signature
        self.primes = []
        self.candidate = None


def _flatten(basis: Sequence[Sequence[nmod_poly]], signature) -> list[int]:
    out = []
    for v, degs in zip(basis, signature[2]):
        for e, nd in zip(v, degs):
            coeffs = [int(c) for c in e.coeffs()]
            out.extend(coeffs + [0] * (-nd + 1 - len(coeffs)))
    return out


def _unflatten(values: list, signature) -> list[list[list]]:
    out, pos = [], 0
    for degs in signature[2]:
        vec = []
        for nd in degs:
            width = -nd + 1
            vec.append(values[pos: pos + width])
            pos += width
        out.append(vec)
    return out


def _integer_basis(rational_basis) -> list[list[fmpz_poly]]:
    """Clear denominators and content, then fix the sign like the exact kernel."""
    out = []
    for vec in rational_basis:
        flat = [c for e in vec for c in e]
        lcm = 1
        for c in flat:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        ints = [[int(c * lcm) for c in e] for e in vec]
        g = math.gcd(*[c for e in ints for c in e])
        polys = [uni(c // g for c in e) for e in ints]
        lead = next(p for p in polys if p != 0).leading_coefficient()
        if lead < 0:
            polys = [-p for p in polys]
        out.append(polys)
    return out


@dataclass
class ModularPolicy:
    prime_bits: int = 31
    stability_rounds: int = 2
    primes: Sequence[int] | None = None
    max_primes: int = 400


@dataclass
class ModularReport:
    prime_count: int
    primes_used: list[int]
    unlucky: list[int]
    primes_tried: int
    p_min: int
    H: float
    predicted: int
    budget: int
    within_budget: bool
    lower_bound_ok: bool
    runtime_ms: int
    per_prime_ms: list[int]

    def to_json(self) -> dict:
        return {
            "prime_count": self.prime_count,
            "primes_used": [str(p) for p in self.primes_used],
            "unlucky": [str(p) for p in self.unlucky],
            "primes_tried": self.primes_tried,
            "p_min": str(self.p_min),
            "H": self.H,
            "predicted": self.predicted,
            "budget": self.budget,
            "within_budget": self.within_budget,
            "lower_bound_ok": self.lower_bound_ok,
            "runtime_ms": self.runtime_ms,
            "per_prime_ms": self.per_prime_ms,
        }


def _schedule(policy: ModularPolicy) -> Iterable[int]:
    if policy.primes is not None:
        yield from policy.primes
    yield from descending_primes(policy.prime_bits)


def _try_reconstruct(state: CRTState):
    try:
        values = [rational_reconstruct(a, state.modulus) for a in state.residues]
    except ReconstructionFailed:
        return None
    return _integer_basis(_unflatten(values, state.signature))


def modular_telescoper(term: ProperTerm, policy: ModularPolicy | None = None
                       ) -> tuple[CTRelation, int, ModularReport]:
    """Minimal telescoper by Chinese remaindering over a prime schedule."""
    policy = policy or ModularPolicy()
    term = normalize(term)
    t0 = time.perf_counter()
    r, s, _ = minimal_dimensions(term)
    A = minimal_system(term)
    state = CRTState()
    unlucky: list[int] = []
    per_prime: list[int] = []
    tried = 0
    for p in _schedule(policy):
        if tried >= policy.max_primes:
            break
        if p in state.primes:
            continue
        tried += 1
        tp = time.perf_counter()
        try:
            mrel = solve_minimal_mod(term, p, state.signature, A)
        except UnluckyPrime:
            unlucky.append(p)
            continue
        finally:
            per_prime.append(int((time.perf_counter() - tp) * 1000))
        if not mrel.basis:
            raise InternalInconsistency("the minimal system has a trivial kernel mod p")
        if state.signature is None or mrel.signature < state.signature:
            unlucky.extend(state.primes)
            state.reset(mrel.signature)
        flat = _flatten(mrel.basis, state.signature)
        if state.modulus == 1:
            state.residues = flat
            state.modulus = p
        else:
            combined = [crt_combine(a, state.modulus, b, p)[0] for a, b in zip(state.residues, flat)]
            state.residues = combined
            state.modulus *= p
        state.primes.append(p)
        cand = _try_reconstruct(state)
        if cand is None:
            state.stable_rounds = 0
            state.candidate = None
            continue
        if state.candidate is not None and cand == state.candidate:
            state.stable_rounds += 1
        else:
            state.stable_rounds = 0
        state.candidate = cand
        if state.stable_rounds < policy.stability_rounds:
            continue
        if not all(A.annihilates(v) for v in cand):
            state.stable_rounds = 0
            continue
        v = choose_kernel_vector(cand, r)
        if v is None:
            raise DegenerateTerm("every kernel vector has a zero telescoper part; the term may be rational")
        rel = relation_from_vector(term, v, r, s, RelationKind.MINIMAL)
        if not verify_relation(term, rel):
            state.stable_rounds = 0
            continue
        H = height_of(rel)
        p_min = min(state.primes)
        lnp = math.log(p_min)
        p_avg = sum(math.log(q) for q in state.primes) / len(state.primes)
        count = len(state.primes)
        budget = 2 * math.ceil(H / lnp) + policy.stability_rounds + 2
        report = ModularReport(
            prime_count=count, primes_used=list(state.primes), unlucky=unlucky, primes_tried=tried,
            p_min=p_min, H=H, predicted=math.ceil(H / p_avg), budget=budget,
            within_budget=count <= budget, lower_bound_ok=count * lnp >= H,
            runtime_ms=int((time.perf_counter() - t0) * 1000), per_prime_ms=per_prime)
        return rel, count, report
    raise ReconstructionFailed(f"no stable reconstruction after {tried} primes")
