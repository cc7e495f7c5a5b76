import json

import numpy as np
import pytest

from realization_lab.errors import DimensionError
from realization_lab.jsonio import (complex_from_json, complex_to_json, matrix_from_json, matrix_to_json,
                                    to_jsonable)


@pytest.mark.parametrize("raw, want", [(3, 3 + 0j), (-1.5, -1.5 + 0j), ([1, -2], 1 - 2j), ([0.0, 0.5], 0.5j)])
def test_complex_from_json(raw, want):
    assert complex_from_json(raw) == want


@pytest.mark.parametrize("raw", [True, "1", [1, 2, 3], None, [1, "a"]])
def test_complex_from_json_rejects(raw):
    with pytest.raises(DimensionError):
        complex_from_json(raw)


def test_negative_zero_is_normalized():
    assert json.dumps(complex_to_json(complex(-0.0, -0.0))) == "[0.0, 0.0]"


def test_matrix_roundtrip():
    M = np.array([[1 + 2j, 0], [-3, 4j]])
    back = matrix_from_json(json.loads(json.dumps(matrix_to_json(M))))
    np.testing.assert_array_equal(back, M)


@pytest.mark.parametrize("raw", [[], [[]], [[1, 2], [3]], [[float("nan")]], "x", [1, 2]])
def test_matrix_from_json_rejects_malformed(raw):
    with pytest.raises(DimensionError):
        matrix_from_json(raw)


def test_to_jsonable_handles_nested_values():
    out = to_jsonable({"a": np.eye(2), "b": [1j, None, float("nan"), float("inf")], "c": np.float64(2.0),
                       "d": np.bool_(True), "e": np.arange(3)})
    json.dumps(out)
    assert out["b"] == [[0.0, 1.0], None, None, "inf"]
    assert out["d"] is True
    assert out["a"] == [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]
