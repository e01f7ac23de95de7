import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geodesy import algebra as alg
from geodesy import catalog as cat
from geodesy import document as doc
from geodesy import linalg as la
from geodesy.errors import DocumentError

H3_TEXT = """{
  "name": "H3",
  "dim": 3,
  "labels": ["X1", "X2", "X3"],
  "brackets": [
    {"i": 1, "j": 2, "terms": [{"k": 3, "v": "1"}]}
  ]
}
"""


def parse_error(text):
    with pytest.raises(DocumentError) as info:
        doc.parse(text)
    return info.value


def test_parse_minimal():
    d = doc.parse(H3_TEXT)
    g = d.algebra
    assert g.dim == 3 and d.metric is None and d.basis is None and d.mode == "exact"
    assert list(alg.bracket(g, g.basis_vector(0), g.basis_vector(1))) == [0, 0, 1]


def test_render_is_canonical_for_hand_text():
    assert doc.render(doc.parse(H3_TEXT)) == H3_TEXT


@pytest.mark.parametrize("name", [e.name for e in cat.entries() if e.has_witness])
def test_exact_round_trip_with_witness(name):
    g = cat.instantiate(name)
    metric, basis = cat.witness(name)
    text = doc.render(doc.AlgebraDocument(g, metric, basis))
    back = doc.parse(text)
    assert doc.render(back) == text
    assert la.all_zero(back.algebra.c - g.c, 0.0)


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["M9", "g33", "clnn", "oscillator"]))
def test_float_round_trip_is_byte_exact(seed, name):
    rng = np.random.default_rng(seed)
    g = cat.instantiate(name).to_float()
    d = doc.AlgebraDocument(g, alg.random_metric(g.dim, rng), rng.standard_normal((g.dim, g.dim)))
    text = doc.render(d)
    back = doc.parse(text)
    assert back.mode == "float"
    assert doc.render(back) == text
    assert np.array_equal(back.metric.gram, d.metric.gram)
    assert np.array_equal(back.basis, d.basis)


def test_surd_entries_survive():
    g = cat.instantiate("g28")
    metric, basis = cat.witness("g28")
    text = doc.render(doc.AlgebraDocument(g, metric, basis))
    assert "sqrt(6)" in text
    assert all(a == b for a, b in zip(doc.parse(text).basis.flat, basis.flat))


def test_invalid_json_position():
    err = parse_error('{\n  "name": "x",\n  "dim": 3,,\n}')
    assert err.line == 3


def test_duplicate_key_rejected():
    err = parse_error('{"name": "a", "name": "b", "dim": 1, "labels": ["X"], "brackets": []}')
    assert "duplicate" in str(err)


def test_unknown_field_located():
    text = H3_TEXT.replace('"dim": 3,', '"dim": 3,\n  "extra": 1,')
    err = parse_error(text)
    assert "extra" in str(err) and err.line == 4 and err.column == 3


def test_missing_field():
    obj = json.loads(H3_TEXT)
    del obj["labels"]
    assert "labels" in str(parse_error(json.dumps(obj)))


@pytest.mark.parametrize("i,j", [(2, 1), (1, 1), (0, 2), (1, 4)])
def test_bracket_indices_checked(i, j):
    text = H3_TEXT.replace('"i": 1, "j": 2', f'"i": {i}, "j": {j}')
    assert "bracket indices" in str(parse_error(text))


def test_repeated_bracket_rejected():
    text = H3_TEXT.replace(
        '{"i": 1, "j": 2, "terms": [{"k": 3, "v": "1"}]}',
        '{"i": 1, "j": 2, "terms": []},\n    {"i": 1, "j": 2, "terms": []}',
    )
    assert "twice" in str(parse_error(text))


def test_bad_scalar_column_points_into_string():
    text = H3_TEXT.replace('"v": "1"', '"v": "1+x"')
    err = parse_error(text)
    line = text.splitlines()[err.line - 1]
    assert line[err.column - 1] == "x"


def test_float_mode_rejects_nan():
    text = H3_TEXT.replace('"dim": 3,', '"dim": 3,\n  "mode": "float",').replace('"v": "1"', '"v": "nan"')
    assert "non-finite" in str(parse_error(text))


def test_metric_must_be_positive_definite():
    obj = json.loads(H3_TEXT)
    obj["metric"] = [["1", "0", "0"], ["0", "-1", "0"], ["0", "0", "1"]]
    assert "metric" in str(parse_error(json.dumps(obj)))


def test_labels_must_be_distinct():
    text = H3_TEXT.replace('["X1", "X2", "X3"]', '["X1", "X1", "X3"]')
    assert "labels" in str(parse_error(text))


def test_load_reads_file(tmp_path):
    p = tmp_path / "h3.json"
    p.write_text(H3_TEXT)
    assert doc.load(str(p)).algebra.name == "H3"
