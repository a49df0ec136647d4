import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from chordal.io import (
    FormatError,
    load_plant,
    load_series,
    plant_document,
    plant_from_dict,
    series_from_dict,
    series_to_dict,
    write_plant,
    write_series,
)
from chordal.series import Series

coef = st.complex_numbers(min_magnitude=1e-10, max_magnitude=1e10, allow_nan=False, allow_infinity=False)
terms = st.dictionaries(st.tuples(st.integers(0, 6), st.integers(0, 6)), coef, max_size=8)


@given(terms)
def test_series_round_trip_bit_exact(tmp_path_factory, t):
    f = Series(2, t)
    path = tmp_path_factory.mktemp("io") / "f.json"
    write_series(path, f)
    g = load_series(path)
    assert g == f
    assert dict(g.terms) == dict(f.terms)


def test_plant_round_trip(tmp_path, p_alpha):
    p = p_alpha(0.1)
    write_plant(tmp_path / "p.json", p.num, p.den, p.witnesses)
    num, den, wit = load_plant(tmp_path / "p.json")
    assert (num, den) == (p.num, p.den)
    assert wit == p.witnesses
    assert plant_from_dict(plant_document(p)) == (p.num, p.den, p.witnesses)


def test_im_is_optional():
    f = series_from_dict({"nvars": 1, "terms": [{"exp": [2], "re": 3}]})
    assert f == Series(1, {(2,): 3})


def test_empty_terms():
    assert series_from_dict({"nvars": 2, "terms": []}).is_zero()


@pytest.mark.parametrize(
    "doc, where",
    [
        ({"nvars": 2, "terms": [{"exp": [1, -1], "re": 1}]}, "terms[0].exp[1]"),
        ({"nvars": 2, "terms": [{"exp": [1], "re": 1}]}, "terms[0].exp"),
        ({"nvars": 2, "terms": [{"exp": [0, 0], "re": "x"}]}, "terms[0].re"),
        ({"nvars": 2, "terms": [{"exp": [0, 0]}]}, "terms[0].re"),
        ({"nvars": 2, "terms": [{"exp": [0, 0], "re": 1}, {"exp": [0, 0], "re": 2}]}, "terms[1].exp"),
        ({"nvars": 0, "terms": []}, "nvars"),
        ({"version": 9, "nvars": 1, "terms": []}, "version"),
        ([], "series"),
    ],
)
def test_format_errors_name_location(doc, where):
    with pytest.raises(FormatError, match=where.replace("[", r"\[").replace("]", r"\]")):
        series_from_dict(doc)


def test_plant_errors():
    one = series_to_dict(Series.constant(1.0))
    with pytest.raises(FormatError, match="den"):
        plant_from_dict({"num": one})
    with pytest.raises(FormatError, match="variables"):
        plant_from_dict({"num": one, "den": series_to_dict(Series.constant(1.0, nvars=1))})
    with pytest.raises(FormatError, match="bezout"):
        plant_from_dict({"num": one, "den": one, "bezout": {"x": one}})


def test_file_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(FormatError, match="line 1"):
        load_series(bad)
    with pytest.raises(FormatError):
        load_series(tmp_path / "missing.json")
