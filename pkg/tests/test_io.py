import json

import pytest
from hypothesis import given, strategies as st
import random

from tanaka.algebra import heisenberg, random_stratified
from tanaka.catalog import bundled_text
from tanaka.io import (DescriptionError, algebra_to_data, load_description, orientation_of,
                       parse_description, serialize_description)

HEIS = bundled_text("heisenberg3")


def test_heisenberg_round_trip_is_byte_identical():
    alg, split = parse_description(HEIS)
    assert split is None
    assert serialize_description(alg) == HEIS


def test_f24_parses():
    alg, _ = parse_description(bundled_text("f24"))
    assert alg.dim == 8
    assert len(alg.structure_table()) == 7
    assert orientation_of(json.loads(bundled_text("f24")))
    # orientation is preserved on output
    text = serialize_description(alg, orientation=orientation_of(json.loads(bundled_text("f24"))))
    assert text == bundled_text("f24")


def _err(text):
    with pytest.raises(DescriptionError) as info:
        parse_description(text, source="in.json")
    return info.value


def test_unknown_label_has_position():
    text = HEIS.replace('[["e3", "1"]]', '[["e9", "1"]]')
    e = _err(text)
    assert "e9" in e.message
    assert e.line == 10 and e.column == 47
    assert str(e).startswith("in.json:10:47 ($.brackets[0].result[0][0])")


def test_unknown_field():
    e = _err(HEIS.replace('"scalars"', '"colour": 1, "scalars"'))
    assert "colour" in e.message


def test_non_rational_coefficient():
    e = _err(HEIS.replace('"1"]]', '"0.5"]]'))
    assert e.line is not None


def test_duplicate_bracket():
    text = HEIS.replace('{"left": "e1", "right": "e2", "result": [["e3", "1"]]}',
                        '{"left": "e1", "right": "e2", "result": [["e3", "1"]]},\n'
                        '    {"left": "e2", "right": "e1", "result": [["e3", "-1"]]}')
    assert "given twice" in _err(text).message


def test_self_bracket():
    text = HEIS.replace('"right": "e2"', '"right": "e1"')
    _err(text)


def test_bad_json_reports_position():
    e = _err(HEIS[:-3])
    assert e.line is not None


def test_axiom_violation_and_validate_flag():
    data = json.loads(HEIS)
    data["brackets"].append({"left": "e1", "right": "e3", "result": [["e1", "1"]]})
    text = json.dumps(data)
    assert "jacobi" in _err(text).message.lower() or "grading" in _err(text).message.lower()
    alg, _ = parse_description(text, validate=False)
    assert alg.dim == 3


def test_missing_file(tmp_path):
    with pytest.raises(DescriptionError) as info:
        load_description(tmp_path / "nope.json")
    assert "cannot read" in info.value.message


def test_load_description(tmp_path):
    p = tmp_path / "h.json"
    p.write_text(HEIS)
    alg, _ = load_description(p)
    assert alg.dim == 3


@given(st.integers(0, 5000))
def test_random_round_trip(seed):
    alg = random_stratified(random.Random(seed))
    text = serialize_description(alg)
    back, _ = parse_description(text)
    assert back.structure_table() == alg.structure_table()
    assert list(back.degrees) == list(alg.degrees)
    assert serialize_description(back) == text


def test_algebra_to_data_is_json():
    data = algebra_to_data(heisenberg())
    assert json.loads(json.dumps(data)) == data
