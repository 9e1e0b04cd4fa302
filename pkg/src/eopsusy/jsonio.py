"""Deterministic JSON rendering helpers.

Rationals render as canonical "p/q" strings (bare integer when q = 1),
never as floats; floats appear only in numeric reports and use 17
significant digits so they round-trip.  Identical inputs must produce
byte-identical documents, so everything is rendered through these helpers
and containers are built in fixed key order.
"""

from __future__ import annotations

import json
from fractions import Fraction

from eopsusy.ratpoly import Poly, RatFunc


def frac_str(value) -> str | None:
    if value is None:
        return None
    return str(Fraction(value))


def frac_pair(value) -> list[int]:
    f = Fraction(value)
    return [f.numerator, f.denominator]


def poly_pairs(p: Poly) -> list[list[int]]:
    """Coefficients low to high, each as an exact [numerator, denominator] pair."""
    return [frac_pair(c) for c in p.coeffs]


def ratfunc_lists(r: RatFunc) -> dict:
    return {"num": poly_pairs(r.num), "den": poly_pairs(r.den)}


def float_str(x: float) -> str:
    return format(float(x), ".17g")


def dumps(obj) -> str:
    """Canonical rendering: fixed separators, preserved key order, newline."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
