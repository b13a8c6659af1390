"""JSON I/O for terms and relations; every integer travels as a decimal string."""

from __future__ import annotations

import json
from pathlib import Path

from flint import fmpz_poly

from .az_core import assemble_certificate
from .bipoly import BiPoly, KBasis, uni, uni_coeffs
from .errors import InvalidTerm
from .solver import CTRelation, RelationKind
from .term_model import GammaFactor, ProperTerm, make_term, normalize


def _int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise InvalidTerm(f"{what} must be an integer string, got {value!r}")
    try:
        return int(value)
    except ValueError:
        raise InvalidTerm(f"{what} is not a decimal integer: {value!r}") from None


def term_from_json(data: dict) -> ProperTerm:
    if not isinstance(data, dict):
        raise InvalidTerm("term must be a JSON object")
    for key in ("p", "x", "y", "factors"):
        if key not in data:
            raise InvalidTerm(f"term is missing the {key!r} field")
    try:
        mons = [(_int(c, "p coefficient"), _int(i, "p exponent"), _int(j, "p exponent"))
                for c, i, j in data["p"]]
    except (TypeError, ValueError) as exc:
        raise InvalidTerm(f"malformed polynomial: {exc}") from None
    factors = []
    for f in data["factors"]:
        if not isinstance(f, dict) or set(f) != {"role", "n", "k", "c"}:
            raise InvalidTerm(f"malformed factor {f!r}")
        if f["role"] not in ("A", "B", "U", "V"):
            raise InvalidTerm(f"unknown factor role {f['role']!r}")
        factors.append(GammaFactor(f["role"], _int(f["n"], "n"), _int(f["k"], "k"), _int(f["c"], "c")))
    return make_term(mons, _int(data["x"], "x"), _int(data["y"], "y"), factors)


def term_to_json(term: ProperTerm) -> dict:
    return {
        "p": [[str(c), str(i), str(j)] for c, i, j in term.p.monomials()],
        "x": str(term.x),
        "y": str(term.y),
        "factors": [{"role": f.role.value, "n": str(f.n), "k": str(f.k), "c": str(f.c)}
                    for f in term.factors],
    }


def load_term(path) -> ProperTerm:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidTerm(f"term file is not valid JSON: {exc}") from None
    return term_from_json(data)


def save_term(term: ProperTerm, path) -> None:
    Path(path).write_text(json.dumps(term_to_json(term), indent=2) + "\n", encoding="utf-8")


def _poly_json(p: fmpz_poly) -> list[str]:
    return [str(c) for c in uni_coeffs(p)]


def relation_to_json(rel: CTRelation) -> dict:
    return {
        "kind": rel.kind.value,
        "r": str(rel.r),
        "d": str(rel.d),
        "ell": [_poly_json(e) for e in rel.ell],
        "Y": {"basis": "binomial", "monomials": [[str(c), str(i), str(j)] for c, i, j in rel.Y.monomials()]},
        "s": str(rel.s),
        "ansatz_d": None if rel.ansatz_d is None else str(rel.ansatz_d),
        "escalations": rel.escalations,
        "fallback": rel.fallback,
        "operator": rel.operator_str(),
        "certificate": str(rel.certificate),
    }


def relation_from_json(term: ProperTerm, data: dict) -> CTRelation:
    term = normalize(term)
    try:
        r = _int(data["r"], "r")
        ell = tuple(uni(_int(c, "ell coefficient") for c in e) for e in data["ell"])
        ydata = data["Y"]
        if ydata.get("basis", "binomial") != "binomial":
            raise InvalidTerm("relation Y must be in the binomial basis")
        Y = BiPoly.from_monomials(((_int(c, "Y"), _int(i, "Y"), _int(j, "Y")) for c, i, j in ydata["monomials"]),
                                  KBasis.BINOMIAL)
        kind = RelationKind(data.get("kind", "minimal"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidTerm(f"malformed relation: {exc}") from None
    ad = data.get("ansatz_d")
    return CTRelation(ell, Y, r, kind, assemble_certificate(term, r, Y),
                      s=_int(data.get("s", "0"), "s"),
                      ansatz_d=None if ad is None else _int(ad, "ansatz_d"),
                      escalations=int(data.get("escalations", 0)), fallback=bool(data.get("fallback", False)))


def load_relation(term: ProperTerm, path) -> CTRelation:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidTerm(f"relation file is not valid JSON: {exc}") from None
    return relation_from_json(term, data)
