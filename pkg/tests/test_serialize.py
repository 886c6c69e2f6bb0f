import json
import math

import pytest
from hypothesis import given, strategies as st

from tori.contfrac import ContinuedFraction, UnimodularMatrix, convergents, expand_surd
from tori.errors import InvalidInput
from tori.lattice import Lattice
from tori.serialize import (
    cf_from_json,
    cf_to_json,
    convergent_from_json,
    convergent_to_json,
    dumps,
    format_complex,
    matrix_from_json,
    matrix_to_json,
    parse_complex,
    spectrum_from_json,
    spectrum_to_json,
    surd_from_json,
    surd_to_json,
)
from tori.spectrum import enumerate_spectrum
from tori.surd import QuadraticIrrational

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


def _roundtrip(obj):
    return json.loads(json.dumps(obj))


@given(finite, finite)
def test_complex_roundtrip(x, y):
    z = complex(x, y)
    assert parse_complex(format_complex(z)) == z


def test_complex_formats():
    assert format_complex(1j) == "0+1i"
    assert format_complex(complex(-0.0, -2.5)) == "0-2.5i"
    assert parse_complex("5+1i") == 5 + 1j
    assert parse_complex("2i") == 2j
    assert parse_complex("1.5") == 1.5
    assert parse_complex("-i") == -1j
    for bad in ("", "abc", "nan+1i", "1+infi"):
        with pytest.raises(InvalidInput):
            parse_complex(bad)


def test_dumps_is_sorted_and_versioned():
    text = dumps({"b": 1, "a": [1, 2]})
    assert text == '{"a": [1, 2], "b": 1, "schema": 1}'
    with pytest.raises(ValueError):
        dumps({"x": math.nan})


def test_result_roundtrips():
    m = UnimodularMatrix(2, 1, 1, 1)
    assert matrix_from_json(_roundtrip(matrix_to_json(m))) == m
    x = QuadraticIrrational(-3, 2, 7, 13)
    assert surd_from_json(_roundtrip(surd_to_json(x))) == x
    cf = expand_surd(x)
    assert cf_from_json(_roundtrip(cf_to_json(cf))) == cf
    for c in convergents(cf, 6):
        assert convergent_from_json(_roundtrip(convergent_to_json(c))) == c


@pytest.mark.parametrize("mode", ["primitive", "full"])
def test_spectrum_roundtrip(mode):
    sp = enumerate_spectrum(Lattice(1, 0.3 + 1.1j), 5, mode)
    assert spectrum_from_json(_roundtrip(spectrum_to_json(sp))) == sp


@given(st.integers(-9, 9), st.lists(st.integers(1, 9), max_size=5), st.lists(st.integers(1, 9), max_size=4))
def test_cf_roundtrip_property(a0, pre, per):
    cf = ContinuedFraction(a0, tuple(pre), tuple(per))
    assert cf_from_json(_roundtrip(cf_to_json(cf))) == cf
