import json
import math

import numpy as np
from hypothesis import given, strategies as st

from cubelab.report import dumps, to_csv, to_pretty


def test_dumps_basic():
    assert dumps({"a": 1, "b": [True, None], "c": "x"}) == '{"a": 1, "b": [true, null], "c": "x"}'
    assert dumps(math.inf) == '"inf"' and dumps(-math.inf) == '"-inf"' and dumps(math.nan) == '"nan"'
    assert dumps(np.array([1, 2])) == "[1, 2]"
    assert dumps(np.float64(0.1)) == "0.10000000000000001"


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_roundtrip(x):
    assert json.loads(dumps({"x": x}))["x"] == x


def test_csv_flattens_nested():
    text = to_csv([{"a": 1, "m": {"x": 0.5}}, {"a": 2, "m": {"x": math.inf}, "b": [1]}])
    lines = text.splitlines()
    assert lines[0] == "a,m.x,b"
    assert lines[1] == "1,0.5,"
    assert lines[2] == "2,inf,[1]"


def test_pretty_alignment():
    out = to_pretty({"n": 3, "longer": 1.5})
    assert out.splitlines() == ["n       3", "longer  1.5"]
