"""Deterministic rendering helpers."""

import random
from fractions import Fraction

from eopsusy.jsonio import dumps, float_str, frac_pair, frac_str, poly_pairs
from eopsusy.ratpoly import Poly


def test_frac_rendering_canonical():
    assert frac_str(Fraction(-3, 4)) == "-3/4"
    assert frac_str(Fraction(6, 2)) == "3"
    assert frac_str(None) is None
    assert frac_pair(Fraction(5, 2)) == [5, 2]


def test_poly_pairs_low_to_high():
    assert poly_pairs(Poly([Fraction(-5, 2), 1])) == [[-5, 2], [1, 1]]


def test_float_str_round_trips():
    rng = random.Random(2024)
    for _ in range(500):
        x = rng.uniform(-1e6, 1e6) * 10.0 ** rng.randint(-12, 12)
        assert float(float_str(x)) == x


def test_dumps_is_newline_terminated_and_stable():
    doc = {"b": 1, "a": [1, 2]}
    text = dumps(doc)
    assert text.endswith("\n")
    assert text == dumps({"b": 1, "a": [1, 2]})
