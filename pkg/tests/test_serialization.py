import json
from pathlib import Path

import pytest

from hypertel.errors import InvalidTerm
from hypertel.serialization import (load_relation, load_term, relation_from_json, relation_to_json,
                                    save_term, term_from_json, term_to_json)
from hypertel.solver import solve_minimal, solve_nonminimal, verify_relation
from hypertel.term_model import family_h_omega

TERMS = Path(__file__).resolve().parent.parent / "terms"


def test_term_round_trip(tmp_path, cbr):
    assert term_from_json(term_to_json(cbr)).factors == cbr.factors
    save_term(cbr, tmp_path / "t.json")
    back = load_term(tmp_path / "t.json")
    assert back.factors == cbr.factors and back.p == cbr.p


def test_shipped_terms_load(binom):
    assert load_term(TERMS / "binomial.json").factors == binom.factors
    for w in (1, 2, 3, 4):
        assert load_term(TERMS / f"h_omega_{w}.json").factors == family_h_omega(w).factors


def test_integers_are_strings(binom):
    js = term_to_json(binom)
    assert all(isinstance(v, str) for f in js["factors"] for k, v in f.items())
    assert all(isinstance(c, str) for m in js["p"] for c in m)


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("x"),
    lambda d: d.__setitem__("y", 1.5),
    lambda d: d.__setitem__("y", True),
    lambda d: d["factors"].append({"role": "Z", "n": "0", "k": "0", "c": "1"}),
    lambda d: d["factors"].append({"role": "A", "n": "0"}),
    lambda d: d.__setitem__("p", [["1", "x", "0"]]),
    lambda d: d.__setitem__("p", [["1", "0"]]),
])
def test_malformed_terms(binom, mutate):
    data = term_to_json(binom)
    mutate(data)
    with pytest.raises(InvalidTerm):
        term_from_json(data)


def test_not_json(tmp_path):
    (tmp_path / "bad.json").write_text("{nope")
    with pytest.raises(InvalidTerm):
        load_term(tmp_path / "bad.json")
    with pytest.raises(InvalidTerm):
        term_from_json([1, 2])


def test_relation_round_trip(tmp_path, h_small):
    for rel in (solve_minimal(h_small), solve_nonminimal(h_small)):
        js = relation_to_json(rel)
        (tmp_path / "r.json").write_text(json.dumps(js))
        back = load_relation(h_small, tmp_path / "r.json")
        assert back.same_as(rel) and back.kind is rel.kind and back.ansatz_d == rel.ansatz_d
        assert verify_relation(h_small, back)


def test_big_integers_survive(tmp_path):
    t = family_h_omega(3)
    rel = solve_minimal(t)
    back = relation_from_json(t, json.loads(json.dumps(relation_to_json(rel))))
    assert back.same_as(rel)


def test_malformed_relation(binom):
    js = relation_to_json(solve_minimal(binom))
    js["ell"] = [["1.5"]]
    with pytest.raises(InvalidTerm):
        relation_from_json(binom, js)
    with pytest.raises(InvalidTerm):
        relation_from_json(binom, {"ell": []})
