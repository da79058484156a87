import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from period_lens.newforms import (Newform, NewformError, expected_fe_sign,
                                  generate_level_one, newform_from_dict, normalized,
                                  parse_newform, save_newform, serialize_newform,
                                  validate_newform)


def make_doc(**overrides):
    doc = {
        "label": "7.4.a.a",
        "level": 7,
        "weight": 4,
        "fricke_sign": 1,
        "fe_sign": 1,
        "coeff_kind": "rational",
        "an": ["1", "-1", "-2", "-7", "16", "2", "-7"],
    }
    doc.update(overrides)
    return doc


def test_round_trip(tmp_path, delta):
    path = tmp_path / "form.json"
    save_newform(delta, path)
    again = parse_newform(path)
    assert again == delta._replace_source() if hasattr(delta, "_replace_source") else True
    assert again.an == delta.an
    assert again.level == delta.level and again.weight == delta.weight
    assert again.fricke_sign == delta.fricke_sign
    # byte-stable serialization
    save_newform(again, tmp_path / "form2.json")
    assert (tmp_path / "form.json").read_bytes() == (tmp_path / "form2.json").read_bytes()


def test_parse_requires_normalized_a1():
    with pytest.raises(NewformError, match="a\\(1\\)"):
        newform_from_dict(make_doc(an=["2", "-1"]))


def test_deligne_violation_is_hard_error_on_exact_data():
    # bound at p = 2, k = 4 is 2 * 2^{3/2} ~ 5.66
    with pytest.raises(NewformError, match="Deligne"):
        newform_from_dict(make_doc(an=["1", "100"]))


def test_level4_positive_fricke_rejected():
    with pytest.raises(NewformError, match="level-4"):
        newform_from_dict(make_doc(level=4, weight=6, fricke_sign=1, fe_sign=-1,
                                   an=["1", "0", "0"]))


def test_inconsistent_sign_triple_rejected():
    # k = 4 => fe_sign must equal fricke_sign
    with pytest.raises(NewformError, match="inconsistent"):
        newform_from_dict(make_doc(fe_sign=-1))


def test_expected_fe_sign():
    assert expected_fe_sign(12, 1) == 1
    assert expected_fe_sign(4, 1) == 1
    assert expected_fe_sign(6, -1) == 1
    assert expected_fe_sign(10, 1) == -1


def test_embedded_requires_precision():
    with pytest.raises(NewformError, match="precision"):
        newform_from_dict(make_doc(coeff_kind="embedded", an=["1.0", "-1.0"]))


def test_embedded_deligne_is_warning_only():
    doc = make_doc(coeff_kind="embedded", an=["1.0", "100.0"],
                   precision_decimal_digits=10)
    with pytest.warns(UserWarning, match="Deligne"):
        nf = newform_from_dict(doc)
    assert nf.coeff_kind == "embedded"


def test_normalized_rescales_and_records():
    doc = make_doc(an=["1", "-1", "-2"])
    nf = newform_from_dict(doc)
    doubled = Newform(level=7, weight=4, fricke_sign=1, fe_sign=1,
                      coeff_kind="rational",
                      an=tuple(2 * a for a in nf.an), label="x", source="file")
    fixed = normalized(doubled)
    assert fixed.an[0] == 1
    assert fixed.metadata["rescaled_by"] == "2"


def test_generate_level_one_normalized_and_fricke():
    nf = generate_level_one(16, 50)
    assert nf.a(1) == 1
    assert nf.fricke_sign == 1
    assert nf.level == 1


def test_generate_level_one_unsupported_weight():
    with pytest.raises(ValueError):
        generate_level_one(14, 50)


@st.composite
def corrupt_docs(draw):
    doc = make_doc()
    field = draw(st.sampled_from(["level", "weight", "fricke_sign", "fe_sign", "an", "coeff_kind"]))
    if field == "level":
        doc["level"] = draw(st.integers(max_value=0))
    elif field == "weight":
        doc["weight"] = draw(st.one_of(st.integers(max_value=3),
                                       st.integers(min_value=5).filter(lambda k: k % 2)))
    elif field == "fricke_sign":
        doc["fricke_sign"] = draw(st.integers().filter(lambda s: s not in (1, -1)))
    elif field == "fe_sign":
        doc["fe_sign"] = -doc["fe_sign"]
    elif field == "an":
        doc["an"] = draw(st.sampled_from([[], ["0", "1"], ["2"], ["1", "not-a-number"]]))
    else:
        doc["coeff_kind"] = draw(st.sampled_from(["decimal", "exact", ""]))
    return doc


@given(corrupt_docs())
@settings(max_examples=60, deadline=None)
def test_corrupt_records_rejected(doc):
    with pytest.raises(NewformError):
        newform_from_dict(doc)


def test_malformed_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json", encoding="utf-8")
    with pytest.raises(NewformError, match="JSON"):
        parse_newform(bad)
