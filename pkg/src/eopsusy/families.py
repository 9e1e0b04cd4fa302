"""Classical polynomial families and the nodeless seed solutions built from them.

Provides physicists' Hermite polynomials, their positive-coefficient
counterparts ``(-i)^m H_m(ix)`` obtained by sign-flipping alternate
coefficients, and generalized Laguerre polynomials with rational (possibly
negative) parameter and optionally negated argument.  All are generated by
the three-term recurrences over exact rationals.

A :class:`SeedSolution` packages one nodeless, nonnormalizable solution of
the oscillator (variable ``x``) or radial oscillator (variable ``z = x^2/2``)
Schroedinger equation: the polynomial part, the non-polynomial prefactor as
a symbolic tag (a power of ``z`` and the sign of a half-exponential), and
the exact energy.  Only log-derivatives of the prefactor enter any
downstream formula, so it is never expanded.

Nodelessness is certified with a Sturm count even when the parameter rules
guarantee it, as a defense against parameter-entry mistakes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from eopsusy.ratpoly import (
    POS_INF,
    Poly,
    RatFunc,
    X,
    as_poly,
    rational,
    sturm_count,
)

Z_OF_X = Poly([0, 0, Fraction(1, 2)])  # the substitution z = x^2/2
NEG_Z = Poly([0, -1])


class ConstraintError(ValueError):
    """A seed/extension parameter violates its admissibility constraint."""


class SeedFamily(enum.Enum):
    HERMITE_PSEUDO = "hermite-pseudo"
    LAGUERRE_I = "laguerre-i"
    LAGUERRE_II = "laguerre-ii"
    LAGUERRE_III = "laguerre-iii"


def hermite(n: int) -> Poly:
    """Physicists' Hermite polynomial H_n, via H_{n+1} = 2x H_n - 2n H_{n-1}."""
    if n < 0:
        raise ValueError("Hermite degree must be nonnegative")
    h_prev, h = Poly([1]), Poly([0, 2])
    if n == 0:
        return h_prev
    for k in range(1, n):
        h_prev, h = h, Poly([0, 2]) * h - 2 * k * h_prev
    return h


def pseudo_hermite(m: int) -> Poly:
    """(-i)^m H_m(ix): H_m with alternate coefficient signs flipped.

    All coefficients come out strictly positive, which is what makes the
    associated seed nodeless for even m.
    """
    h = hermite(m)
    flipped = [c if (m - k) % 4 in (0, 1) else -c for k, c in enumerate(h.coeffs)]
    out = Poly(flipped)
    assert all(c > 0 for c in out.coeffs if c != 0), "alternate-sign flip failed"
    return out


def laguerre(m: int, alpha, negate_arg: bool = False) -> Poly:
    """Generalized Laguerre polynomial L_m^{(alpha)} in z, rational alpha.

    The three-term recurrence is used directly, so negative and shifted
    alpha are exact.  With ``negate_arg`` the result is composed with
    z -> -z (giving e.g. L_m^{(alpha)}(-z), all coefficients positive for
    alpha > -1).
    """
    if m < 0:
        raise ValueError("Laguerre degree must be nonnegative")
    alpha = rational(alpha)
    p_prev, p = Poly([1]), Poly([alpha + 1, -1])
    if m == 0:
        p = p_prev
    else:
        for k in range(1, m):
            p_prev, p = p, (Poly([2 * k + 1 + alpha, -1]) * p
                            - (k + alpha) * p_prev) * Fraction(1, k + 1)
    return p.compose(NEG_Z) if negate_arg else p


@dataclass(frozen=True)
class SeedPrefactor:
    """Non-polynomial seed factor, stored symbolically.

    For oscillator seeds this is e^{+x^2/2} (``z_power`` is None).  For
    radial-oscillator seeds it is z^{z_power} e^{exp_sign * z/2}.
    """

    z_power: Fraction | None
    exp_sign: int

    def log_derivative_x(self) -> RatFunc:
        """d/dx of the log of the prefactor, as a rational function of x."""
        if self.z_power is None:  # e^{x^2/2}
            return RatFunc(X)
        # z^rho e^{s z/2} with z = x^2/2: rho * 2/x + s * x/2
        return RatFunc(Poly([2 * self.z_power]), X) + RatFunc(
            X * Fraction(self.exp_sign, 2))


@dataclass(frozen=True)
class SeedSolution:
    """A nodeless seed of the initial Schroedinger problem, with exact energy.

    ``polynomial_part`` is in x for the oscillator family and in z for the
    radial-oscillator families.
    """

    family: SeedFamily
    m: int
    l: Fraction | None
    alpha: Fraction | None
    polynomial_part: Poly
    prefactor: SeedPrefactor
    energy: Fraction

    def log_derivative_x(self) -> RatFunc:
        """phi'/phi as an exact rational function of x."""
        pre = self.prefactor.log_derivative_x()
        p = self.polynomial_part
        if self.family is SeedFamily.HERMITE_PSEUDO:
            return pre + RatFunc(p.deriv(), p)
        p_x = p.compose(Z_OF_X)
        pdot_x = p.deriv().compose(Z_OF_X)
        return pre + RatFunc(X * pdot_x, p_x)


def seed_solution(family: SeedFamily, l=None, m: int = 0) -> SeedSolution:
    """Construct the seed for ``family`` with angular momentum l and index m.

    Raises :class:`ConstraintError` when (alpha, m) violate the family's
    admissibility rules, and certifies nodelessness of the polynomial part
    on the physical domain with an exact Sturm count.
    """
    if m < 0:
        raise ConstraintError("seed index m must be nonnegative")

    if family is SeedFamily.HERMITE_PSEUDO:
        if m % 2 != 0:
            raise ConstraintError(
                f"oscillator seed requires even m for nodelessness; got m={m}")
        poly = pseudo_hermite(m)
        seed = SeedSolution(family, m, None, None, poly,
                            SeedPrefactor(None, +1), Fraction(-(2 * m + 1)))
        if sturm_count(poly) != 0:
            raise ConstraintError("seed has nodes on domain")
        return seed

    if l is None:
        raise ConstraintError("radial seed requires the angular momentum l")
    l = rational(l)
    alpha = l + Fraction(1, 2)

    if family is SeedFamily.LAGUERRE_I:
        poly = laguerre(m, alpha, negate_arg=True)
        pre = SeedPrefactor(Fraction(2 * alpha + 1, 4), +1)
        energy = -(alpha + 2 * m + 1)
    elif family is SeedFamily.LAGUERRE_II:
        if not alpha > m - 1:
            raise ConstraintError(
                f"case II seed requires alpha > m - 1; got alpha={alpha}, m={m}")
        poly = laguerre(m, -alpha, negate_arg=False)
        pre = SeedPrefactor(-Fraction(2 * alpha - 1, 4), -1)
        energy = -(alpha - 2 * m - 1)
    elif family is SeedFamily.LAGUERRE_III:
        if not alpha > m - 1:
            raise ConstraintError(
                f"case III seed requires alpha > m - 1; got alpha={alpha}, m={m}")
        if m % 2 != 0:
            raise ConstraintError(
                f"case III seed requires even m for nodelessness; got m={m}")
        poly = laguerre(m, -alpha, negate_arg=True)
        pre = SeedPrefactor(-Fraction(2 * alpha - 1, 4), +1)
        energy = alpha - 2 * m - 1
    else:
        raise ValueError(f"unknown seed family {family!r}")

    if sturm_count(poly, 0, POS_INF) != 0:
        raise ConstraintError("seed has nodes on domain")
    return SeedSolution(family, m, l, alpha, poly, pre, energy)
