import json
import math

import numpy as np
import pytest

from fccs.fields import (
    PositivityError,
    builtin_model,
    constant_field,
    linear_source,
    model_from_config,
    sine_field,
)


def test_builtin_phase_vector():
    m = builtin_model(5)
    x = 0.37
    expected = [math.exp(-j) * (1 - math.cos(j * math.pi * x)) / (j * math.pi) for j in range(1, 6)]
    np.testing.assert_allclose(m.phase_vector(x), expected, rtol=1e-14)


def test_phase_vector_vanishes_at_origin():
    np.testing.assert_array_equal(builtin_model(4).phase_vector(0.0), 0.0)


def test_builtin_positive():
    assert builtin_model(10).check_positive() > 0.4


def test_field_derivatives_consistent():
    f = sine_field(1.0, [0.3, -0.1])
    x, h = 0.3, 1e-5
    for order in range(3):
        fd = (f(x + h, order) - f(x - h, order)) / (2 * h)
        assert fd == pytest.approx(f(x, order + 1), rel=1e-7)


def test_antiderivative():
    f = sine_field(1.0, [0.3])
    assert f.N(1.0) == pytest.approx(1.0 + 0.6 / math.pi, rel=1e-14)
    assert constant_field(2.0).N(0.5) == pytest.approx(1.0)


def test_sample_of_model():
    m = builtin_model(2)
    y = [0.5, -1.0]
    n = m.at(y)
    x = 0.25
    expected = 1 + 0.5 * math.exp(-1) * math.sin(math.pi * x) - math.exp(-2) * math.sin(2 * math.pi * x)
    assert n(x) == pytest.approx(expected, rel=1e-14)


def test_linear_source():
    F = linear_source()
    assert F(0.7) == pytest.approx(0.7)
    assert F(0.7, 1) == pytest.approx(1.0)
    assert F(0.7, 2) == pytest.approx(0.0)


def test_config_roundtrip(tmp_path):
    p = tmp_path / "field.json"
    p.write_text(json.dumps({"n0": 2.0, "coefficients": [0.5, 0.25, 0.125]}))
    m = model_from_config(p, 2)
    assert m.d == 2
    assert m.at([1.0, 0.0])(0.5) == pytest.approx(2.5)


def test_config_rejects_non_positive(tmp_path):
    p = tmp_path / "field.json"
    p.write_text(json.dumps({"n0": 1.0, "coefficients": [0.8, 0.5]}))
    with pytest.raises(PositivityError):
        model_from_config(p)
