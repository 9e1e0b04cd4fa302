"""Exact rational arithmetic: scalars, univariate polynomials, rational functions.

Every symbolic computation in this package runs over arbitrary-precision
rationals.  Scalars are ``fractions.Fraction`` (re-exported as ``Rational``),
which is always reduced, has a positive denominator and a canonical zero.

A :class:`Poly` is a coefficient tuple, lowest degree first, with no trailing
zero coefficient; the zero polynomial is the empty tuple.  A :class:`RatFunc`
is a reduced ``num/den`` pair with a monic denominator.  With these
canonical forms, structural equality is semantic equality, so polynomials
and rational functions can be compared (and golden-tested) with ``==``.

Floating point never appears here; numeric evaluation lives in
:mod:`eopsusy.numverify`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction

Scalar = Union[int, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def rational(value, den=None) -> Fraction:
    """Coerce ``value`` (or the pair ``value/den``) to an exact Rational."""
    if den is not None:
        return Fraction(value, den)
    if isinstance(value, float):
        raise TypeError("refusing to coerce a float to an exact Rational")
    return Fraction(value)


class RatPolyError(ValueError):
    """Domain error in exact polynomial/rational-function arithmetic."""


def _coerce_scalar(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


@dataclass(frozen=True)
class Poly:
    """Univariate polynomial over the rationals, coefficients low to high."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable = ()):
        cs = [_coerce_scalar(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- structure ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise RatPolyError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int) -> Fraction:
        """Coefficient of x**k (zero beyond the degree)."""
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "Poly":
        other = as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> "Poly":
        return self + (-as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return as_poly(other) + (-self)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly(c * other for c in self.coeffs)
        other = as_poly(other)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise RatPolyError("negative polynomial power")
        result = Poly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        """Exact euclidean division: self = q*other + r with deg r < deg other."""
        other = as_poly(other)
        if other.is_zero():
            raise RatPolyError("polynomial division by zero")
        q = [ZERO] * max(0, self.degree - other.degree + 1)
        rem = list(self.coeffs)
        d = other.degree
        lc = other.leading()
        while len(rem) - 1 >= d and any(c != 0 for c in rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            k = len(rem) - 1 - d
            factor = rem[-1] / lc
            q[k] = factor
            for j, b in enumerate(other.coeffs):
                rem[k + j] -= factor * b
        return Poly(q), Poly(rem)

    def __floordiv__(self, other) -> "Poly":
        return self.divmod(as_poly(other))[0]

    def __mod__(self, other) -> "Poly":
        return self.divmod(as_poly(other))[1]

    # -- calculus / evaluation ---------------------------------------------

    def deriv(self) -> "Poly":
        return Poly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def __call__(self, x):
        """Horner evaluation; exact for Fraction/int arguments."""
        acc = ZERO if isinstance(x, (int, Fraction)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        """Substitution self(inner(x)), exact."""
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * inner + Poly([c])
        return acc

    # -- normal forms --------------------------------------------------------

    def content(self) -> Fraction:
        """Positive rational content (gcd of numerators / lcm of denominators)."""
        if self.is_zero():
            return ZERO
        num_gcd = 0
        den_lcm = 1
        for c in self.coeffs:
            num_gcd = math.gcd(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
        return Fraction(num_gcd, den_lcm)

    def primitive(self) -> "Poly":
        """Content-1 integer-coefficient multiple with positive leading coefficient."""
        if self.is_zero():
            return self
        scale = 1 / self.content()
        if self.leading() < 0:
            scale = -scale
        return self * scale

    def monic(self) -> "Poly":
        if self.is_zero():
            raise RatPolyError("cannot make the zero polynomial monic")
        return self * (1 / self.leading())

    def to_str(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeff(k)
            if c == 0:
                continue
            sign = "-" if c < 0 else ("+" if parts else "")
            mag = abs(c)
            if k == 0:
                body = f"{mag}"
            else:
                xpow = var if k == 1 else f"{var}^{k}"
                body = xpow if mag == 1 else f"{mag}*{xpow}"
            parts.append(f"{sign} {body}" if parts else f"{sign}{body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_str()


def as_poly(p) -> Poly:
    if isinstance(p, Poly):
        return p
    if isinstance(p, (int, Fraction)):
        return Poly([p])
    if isinstance(p, (list, tuple)):
        return Poly(p)
    raise TypeError(f"cannot interpret {type(p).__name__} as Poly")


X = Poly([0, 1])


def _int_primitive(p: Poly) -> list[int]:
    """Primitive integer coefficient list (low to high) of a nonzero Poly."""
    den_lcm = 1
    for c in p.coeffs:
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    ints = [c.numerator * (den_lcm // c.denominator) for c in p.coeffs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return [v // g for v in ints]


def _int_prem(u: list[int], v: list[int]) -> list[int]:
    """Pseudo-remainder of integer coefficient lists (low to high)."""
    dv = len(v) - 1
    lc = v[-1]
    r = u[:]
    while len(r) - 1 >= dv:
        k = len(r) - 1
        coef = r[-1]
        r = [lc * c for c in r]
        for i, vc in enumerate(v):
            r[i + k - dv] -= coef * vc
        del r[-1]
        while r and r[-1] == 0:
            r.pop()
        if not r:
            break
    return r


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd via a primitive pseudo-remainder sequence over the integers.

    Content removal at each step bounds coefficient growth; all the heavy
    arithmetic runs on plain ints, never on Fractions.
    """
    a, b = as_poly(a), as_poly(b)
    if a.is_zero():
        return Poly() if b.is_zero() else b.monic()
    if b.is_zero():
        return a.monic()
    p, q = _int_primitive(a), _int_primitive(b)
    if len(p) < len(q):
        p, q = q, p
    while q:
        r = _int_prem(p, q)
        if r:
            g = 0
            for v in r:
                g = math.gcd(g, v)
            r = [v // g for v in r]
        p, q = q, r
    return Poly(p).monic()


def poly_wronskian(f: Poly, g: Poly) -> Poly:
    """Wronskian f g' - f' g of two polynomials, exact."""
    f, g = as_poly(f), as_poly(g)
    return f * g.deriv() - f.deriv() * g


# ---------------------------------------------------------------------------
# Sturm sequences and exact real-root counting
# ---------------------------------------------------------------------------

NEG_INF = float("-inf")
POS_INF = float("inf")


def _scale_primitive(p: Poly) -> Poly:
    # remove content only; unlike Poly.primitive() the sign is preserved
    if p.is_zero():
        return p
    return p * (1 / p.content())


def _sturm_sequence(p: Poly) -> list[Poly]:
    # signed remainder sequence; content removal at each step bounds
    # coefficient growth without disturbing any sign
    seq = [_scale_primitive(p), _scale_primitive(p.deriv())]
    if seq[1].is_zero():
        return seq[:1]
    while True:
        r = seq[-2] % seq[-1]
        if r.is_zero():
            return seq
        seq.append(_scale_primitive(-r))


def _sign_at(p: Poly, x) -> int:
    if p.is_zero():
        return 0
    if x == NEG_INF:
        s = p.leading()
        val = s if p.degree % 2 == 0 else -s
    elif x == POS_INF:
        val = p.leading()
    else:
        val = p(x)
    return (val > 0) - (val < 0)


def _sign_variations(seq: Sequence[Poly], x) -> int:
    signs = [s for s in (_sign_at(p, x) for p in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def sturm_count(p: Poly, lo=NEG_INF, hi=POS_INF) -> int:
    """Exact number of distinct real roots of ``p`` in the open interval (lo, hi).

    Endpoints are Rationals or +-inf.  Roots at a finite endpoint are
    excluded (the interval is open); this is implemented exactly by
    deflating the endpoint root before the Sturm-variation count.
    """
    p = as_poly(p)
    if p.is_zero():
        raise RatPolyError("indeterminate root count: zero polynomial")
    if isinstance(lo, (int, Fraction)) and isinstance(hi, (int, Fraction)) and lo >= hi:
        return 0
    for endpoint in (lo, hi):
        if endpoint in (NEG_INF, POS_INF):
            continue
        root = Poly([-Fraction(endpoint), 1])
        while not p.is_zero() and p(endpoint) == 0:
            p = p // root
        if p.degree <= 0:
            return 0
    if p.degree <= 0:
        return 0
    seq = _sturm_sequence(p)
    return _sign_variations(seq, lo) - _sign_variations(seq, hi)


def cauchy_root_bound(p: Poly) -> Fraction:
    """Rational bound B with every real root of p inside (-B, B)."""
    p = as_poly(p)
    if p.is_zero() or p.degree == 0:
        return ONE
    lead = abs(p.leading())
    return 1 + max(abs(c) for c in p.coeffs[:-1]) / lead


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RatFunc:
    """Reduced rational function num/den with monic denominator."""

    num: Poly
    den: Poly

    def __init__(self, num, den=Poly([1])):
        num, den = as_poly(num), as_poly(den)
        if den.is_zero():
            raise RatPolyError("rational function with zero denominator")
        if not num.is_zero():
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num // g
                den = den // g
        else:
            den = Poly([1])
        lc = den.leading()
        if lc != 1:
            num = num * (1 / lc)
            den = den * (1 / lc)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def as_poly(self) -> Poly:
        if not self.is_poly():
            raise RatPolyError(f"not a polynomial: denominator {self.den}")
        return self.num

    def __add__(self, other) -> "RatFunc":
        # reduced inputs let the residual gcd be confined to gcd(den, den'),
        # which is what keeps long operator compositions affordable
        other = as_ratfunc(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        a, b, c, d = self.num, self.den, other.num, other.den
        g = poly_gcd(b, d)
        if g.degree == 0:
            num = a * d + c * b
            return _prereduced(num, b * d) if not num.is_zero() else RatFunc(Poly())
        d_red = d // g
        t = a * d_red + c * (b // g)
        if t.is_zero():
            return RatFunc(Poly())
        h = poly_gcd(t, g)
        if h.degree == 0:
            return _prereduced(t, b * d_red)
        return _prereduced(t // h, (b // h) * d_red)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return _prereduced(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        return self + (-as_ratfunc(other))

    def __rsub__(self, other) -> "RatFunc":
        return as_ratfunc(other) + (-self)

    def __mul__(self, other) -> "RatFunc":
        other = as_ratfunc(other)
        if self.is_zero() or other.is_zero():
            return RatFunc(Poly())
        a, b, c, d = self.num, self.den, other.num, other.den
        g1 = poly_gcd(a, d)
        g2 = poly_gcd(c, b)
        if g1.degree > 0:
            a, d = a // g1, d // g1
        if g2.degree > 0:
            c, b = c // g2, b // g2
        return _prereduced(a * c, b * d)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        other = as_ratfunc(other)
        if other.is_zero():
            raise RatPolyError("division by the zero rational function")
        inv_lc = 1 / other.num.leading()
        inverse = _prereduced(other.den * inv_lc, other.num * inv_lc)
        return self * inverse

    def __rtruediv__(self, other) -> "RatFunc":
        return as_ratfunc(other) / self

    def deriv(self) -> "RatFunc":
        if self.den.degree == 0:
            return _prereduced(self.num.deriv(), self.den)
        return RatFunc(self.num.deriv() * self.den - self.num * self.den.deriv(),
                       self.den * self.den)

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def compose_poly(self, inner: Poly) -> "RatFunc":
        """Substitute a polynomial for the variable."""
        return RatFunc(self.num.compose(inner), self.den.compose(inner))

    def __str__(self) -> str:
        if self.is_poly():
            return str(self.num)
        return f"({self.num}) / ({self.den})"


def _prereduced(num: Poly, den: Poly) -> RatFunc:
    """Wrap an already-reduced pair without re-running the gcd."""
    if num.is_zero():
        num, den = Poly(), Poly([1])
    r = object.__new__(RatFunc)
    object.__setattr__(r, "num", num)
    object.__setattr__(r, "den", den)
    return r


def as_ratfunc(r) -> RatFunc:
    if isinstance(r, RatFunc):
        return r
    if isinstance(r, (Poly, int, Fraction)):
        return RatFunc(as_poly(r))
    raise TypeError(f"cannot interpret {type(r).__name__} as RatFunc")


def ratfunc_normalize(num, den) -> RatFunc:
    """Reduced rational function num/den, denominator made monic."""
    return RatFunc(as_poly(num), as_poly(den))
