"""Exact-arithmetic kernel: canonical forms, Wronskians, Sturm root counts."""

import random
from fractions import Fraction

import pytest

from eopsusy.ratpoly import (
    NEG_INF,
    POS_INF,
    Poly,
    RatFunc,
    RatPolyError,
    cauchy_root_bound,
    poly_gcd,
    poly_wronskian,
    ratfunc_normalize,
    rational,
    sturm_count,
)


# ---------------------------------------------------------------------------
# brute-force oracle: sample p on a fine rational grid covering the Cauchy
# root bound and count bracketed sign changes plus exact grid hits, refining
# until two consecutive resolutions agree; independent of the Sturm path
# ---------------------------------------------------------------------------

def _sgn(v):
    return (v > 0) - (v < 0)


def _count_at_resolution(p: Poly, a: Fraction, b: Fraction, steps: int) -> int:
    h = (b - a) / steps
    signs = [_sgn(p(a + i * h)) for i in range(steps + 1)]
    exact_hits = sum(1 for s in signs[1:-1] if s == 0)
    flips = sum(1 for s0, s1 in zip(signs, signs[1:]) if s0 * s1 < 0)
    return exact_hits + flips


def brute_force_real_roots(p: Poly, lo, hi, cells_per_unit=64) -> int:
    bound = cauchy_root_bound(p)
    a = -bound if lo == NEG_INF else max(Fraction(lo), -bound)
    b = bound if hi == POS_INF else min(Fraction(hi), bound)
    if a >= b:
        return 0
    steps = max(16, int((b - a) * cells_per_unit) + 1)
    prev = _count_at_resolution(p, a, b, steps)
    for _ in range(6):
        steps *= 4
        cur = _count_at_resolution(p, a, b, steps)
        if cur == prev:
            return cur
        prev = cur
    return prev


def random_poly(rng, max_degree=8, coeff_bound=9, nonzero=True):
    deg = rng.randint(0, max_degree)
    coeffs = [rng.randint(-coeff_bound, coeff_bound) for _ in range(deg + 1)]
    if nonzero and all(c == 0 for c in coeffs):
        coeffs[0] = 1
    return Poly(coeffs)


# ---------------------------------------------------------------------------
# Rational scalars
# ---------------------------------------------------------------------------

def test_rational_round_trips_exactly():
    rng = random.Random(20240917)
    for _ in range(1000):
        a = Fraction(rng.getrandbits(128) - (1 << 127), rng.getrandbits(64) + 1)
        b = Fraction(rng.getrandbits(128) - (1 << 127), rng.getrandbits(64) + 1)
        assert (a + b) - b == a
        if b != 0:
            assert (a * b) / b == a


def test_rational_helper_rejects_floats():
    with pytest.raises(TypeError):
        rational(0.5)
    assert rational(1, 2) == Fraction(1, 2)
    assert rational("3/4") == Fraction(3, 4)


# ---------------------------------------------------------------------------
# Poly canonical form and arithmetic
# ---------------------------------------------------------------------------

def test_poly_strips_trailing_zeros():
    assert Poly([1, 2, 0, 0]).coeffs == (Fraction(1), Fraction(2))
    assert Poly([0, 0]).coeffs == ()
    assert Poly().degree == -1


def test_poly_divmod_roundtrip():
    rng = random.Random(7)
    for _ in range(50):
        a = random_poly(rng, 6)
        b = random_poly(rng, 3)
        if b.is_zero():
            continue
        q, r = a.divmod(b)
        assert q * b + r == a
        assert r.is_zero() or r.degree < b.degree


def test_poly_gcd_common_factor():
    f = Poly([-1, 1])  # x - 1
    assert poly_gcd(Poly([-1, 0, 1]), Poly([1, -2, 1])) == f
    assert poly_gcd(Poly([2]), Poly([0, 4])) == Poly([1])


def test_poly_compose():
    p = Poly([1, 0, 1])  # 1 + x^2
    assert p.compose(Poly([0, 0, Fraction(1, 2)])) == Poly([1, 0, 0, 0, Fraction(1, 4)])


# ---------------------------------------------------------------------------
# Wronskian
# ---------------------------------------------------------------------------

def test_wronskian_identical_arguments_vanishes():
    assert poly_wronskian(Poly([1]), Poly([1])).is_zero()


def test_wronskian_x_x_squared():
    # expand x*2x - 1*x^2
    assert poly_wronskian(Poly([0, 1]), Poly([0, 0, 1])) == Poly([0, 0, 1])


def test_wronskian_antisymmetry_property():
    rng = random.Random(11)
    for _ in range(100):
        f, g = random_poly(rng, 5), random_poly(rng, 5)
        assert poly_wronskian(f, g) == -poly_wronskian(g, f)
        assert poly_wronskian(f, f).is_zero()


# ---------------------------------------------------------------------------
# Sturm counts
# ---------------------------------------------------------------------------

def test_sturm_examples():
    assert sturm_count(Poly([-1, 0, 1])) == 2  # roots +-1
    assert sturm_count(Poly([2, 0, 4])) == 0  # negative discriminant
    assert sturm_count(Poly([Fraction(5, 2), 1]), 0, POS_INF) == 0  # root at -5/2


def test_sturm_zero_polynomial_errors():
    with pytest.raises(RatPolyError, match="indeterminate root count"):
        sturm_count(Poly())


def test_sturm_open_interval_excludes_endpoint_roots():
    p = Poly([0, -1, 0, 1])  # x(x-1)(x+1)
    assert sturm_count(p, -1, 1) == 1
    assert sturm_count(p, 0, 1) == 0
    assert sturm_count(p, -2, 2) == 3
    assert sturm_count(p, 1, POS_INF) == 0


def test_sturm_repeated_roots_counted_once():
    p = Poly([1, -2, 1]) * Poly([-3, 1])  # (x-1)^2 (x-3)
    assert sturm_count(p) == 2


def test_sturm_against_brute_force_oracle():
    rng = random.Random(20240918)
    for _ in range(120):
        p = random_poly(rng, 8)
        if p.degree < 1:
            continue
        # separate near-equal roots enough for the grid oracle
        expected = brute_force_real_roots(p, NEG_INF, POS_INF, cells_per_unit=64)
        assert sturm_count(p) == expected, f"p = {p}"


def test_sturm_subinterval_against_oracle():
    rng = random.Random(5150)
    for _ in range(60):
        p = random_poly(rng, 6)
        if p.degree < 1:
            continue
        lo, hi = Fraction(-3, 2), Fraction(5, 2)
        if p(lo) == 0 or p(hi) == 0:
            continue
        expected = brute_force_real_roots(p, lo, hi, cells_per_unit=64)
        assert sturm_count(p, lo, hi) == expected, f"p = {p}"


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------

def test_ratfunc_normalize_examples():
    assert ratfunc_normalize(Poly([0, 2]), Poly([2])) == RatFunc(Poly([0, 1]))
    assert ratfunc_normalize(Poly([-1, 0, 1]), Poly([-1, 1])) == RatFunc(Poly([1, 1]))
    r = ratfunc_normalize(Poly([0, 8]), Poly([2, 0, 4]))
    assert r.num == Poly([0, 2])
    assert r.den == Poly([Fraction(1, 2), 0, 1])


def test_ratfunc_zero_denominator_errors():
    with pytest.raises(RatPolyError):
        ratfunc_normalize(Poly([1]), Poly())


def test_ratfunc_invariants_under_arithmetic():
    rng = random.Random(99)
    for _ in range(80):
        a = RatFunc(random_poly(rng, 4), random_poly(rng, 3))
        b = RatFunc(random_poly(rng, 4), random_poly(rng, 3))
        for r in (a + b, a - b, a * b):
            assert r.den.leading() == 1
            assert poly_gcd(r.num, r.den) == Poly([1]) or r.num.is_zero()
        if not b.is_zero():
            r = a / b
            assert r.den.leading() == 1


def test_ratfunc_derivative_quotient_rule():
    # d/dx [x / (x^2 + 1)] = (1 - x^2) / (x^2 + 1)^2
    r = RatFunc(Poly([0, 1]), Poly([1, 0, 1]))
    d = r.deriv()
    assert d == RatFunc(Poly([1, 0, -1]), Poly([1, 0, 2, 0, 1]))


def test_ratfunc_fast_paths_match_naive_reduction():
    # the reduced-input shortcuts must agree with building the raw
    # numerator/denominator and reducing from scratch, including shared and
    # repeated denominator factors
    rng = random.Random(987654)

    def rpoly(maxdeg=4):
        return Poly([rng.randint(-6, 6) for _ in range(rng.randint(1, maxdeg + 1))])

    for _ in range(400):
        shared = rpoly(2)
        da = rpoly(2) * (shared if rng.random() < 0.6 else Poly([1])) \
            * (shared if rng.random() < 0.3 else Poly([1]))
        db = rpoly(2) * (shared if rng.random() < 0.6 else Poly([1]))
        if da.is_zero() or db.is_zero():
            continue
        a, b = RatFunc(rpoly(), da), RatFunc(rpoly(), db)
        assert a + b == RatFunc(a.num * b.den + b.num * a.den, a.den * b.den)
        assert a * b == RatFunc(a.num * b.num, a.den * b.den)
        if not b.is_zero():
            quotient = a / b
            assert quotient == RatFunc(a.num * b.den, a.den * b.num)
            if not quotient.is_zero():
                assert poly_gcd(quotient.num, quotient.den) == Poly([1])
