"""Linear differential operators with rational-function coefficients.

A :class:`DiffOp` is a finite sum ``sum_k r_k(x) d^k/dx^k`` in normal form
(one reduced coefficient per order, highest order nonzero).  Composition is
Leibniz expansion, so products, commutators and formal adjoints are exact,
and operator identities can be *proved* by reduction to the zero operator.

On top of the plain algebra this module builds the SUSYQM machinery:
first- and second-order supercharges from nodeless seed solutions,
intertwining/factorization checks, and the composition ``b = A a A!`` that
turns a ladder operator of the initial Hamiltonian into a higher-order
ladder operator of its partner, together with the factored polynomial
entering ``b! b = P(H)``.

Hamiltonians follow the convention H = -d^2/dx^2 + V(x) with the
intertwining pair A H_plus = H_minus A, A! H_minus = H_plus A!.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from eopsusy.families import SeedFamily, SeedSolution, Z_OF_X
from eopsusy.ratpoly import (
    POS_INF,
    Poly,
    RatFunc,
    X,
    as_ratfunc,
    sturm_count,
)


class AlgebraError(ValueError):
    """An operator identity that must hold symbolically failed to."""


@dataclass(frozen=True)
class DiffOp:
    """Differential operator in normal form: ((order, coefficient), ...)."""

    terms: tuple[tuple[int, RatFunc], ...]

    def __init__(self, terms=()):
        merged: dict[int, RatFunc] = {}
        for k, c in terms:
            c = as_ratfunc(c)
            if k < 0:
                raise ValueError("negative derivative order")
            if k in merged:
                merged[k] = merged[k] + c
            else:
                merged[k] = c
        clean = tuple((k, merged[k]) for k in sorted(merged) if not merged[k].is_zero())
        object.__setattr__(self, "terms", clean)

    # -- structure -----------------------------------------------------------

    @property
    def order(self) -> int:
        """Differential order; -1 for the zero operator."""
        return self.terms[-1][0] if self.terms else -1

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, k: int) -> RatFunc:
        for j, c in self.terms:
            if j == k:
                return c
        return RatFunc(Poly())

    # -- linear structure ------------------------------------------------------

    def __add__(self, other) -> "DiffOp":
        other = as_diffop(other)
        return DiffOp(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self) -> "DiffOp":
        return DiffOp(tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other) -> "DiffOp":
        return self + (-as_diffop(other))

    def __rsub__(self, other) -> "DiffOp":
        return as_diffop(other) + (-self)

    def __mul__(self, scalar) -> "DiffOp":
        c = as_ratfunc(scalar)
        return DiffOp(tuple((k, r * c) for k, r in self.terms))

    __rmul__ = __mul__

    def __matmul__(self, other) -> "DiffOp":
        return compose(self, as_diffop(other))

    # -- action ---------------------------------------------------------------

    def apply(self, f) -> RatFunc:
        """Apply to a rational function of x."""
        f = as_ratfunc(f)
        out = RatFunc(Poly())
        for k, c in self.terms:
            g = f
            for _ in range(k):
                g = g.deriv()
            out = out + c * g
        return out

    def apply_quasi(self, log_deriv: RatFunc, f: RatFunc) -> RatFunc:
        """Apply to e^{w(x)} f(x) where w' = log_deriv; returns g with
        result = e^{w} g.  Exact whenever w' is rational."""
        f = as_ratfunc(f)
        # derivs[i] = e^{-w} d^i/dx^i (e^{w} f)
        derivs = [f]
        for _ in range(self.order):
            prev = derivs[-1]
            derivs.append(prev.deriv() + log_deriv * prev)
        out = RatFunc(Poly())
        for k, c in self.terms:
            out = out + c * derivs[k]
        return out

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k, c in reversed(self.terms):
            dd = "" if k == 0 else ("D" if k == 1 else f"D^{k}")
            parts.append(f"({c}){dd}" if dd else f"({c})")
        return " + ".join(parts)


def as_diffop(value) -> DiffOp:
    if isinstance(value, DiffOp):
        return value
    if isinstance(value, (int, Fraction, Poly, RatFunc)):
        return DiffOp(((0, as_ratfunc(value)),))
    raise TypeError(f"cannot interpret {type(value).__name__} as DiffOp")


D = DiffOp(((1, RatFunc(Poly([1]))),))
IDENTITY = DiffOp(((0, RatFunc(Poly([1]))),))


def compose(a: DiffOp, b: DiffOp) -> DiffOp:
    """Operator product a(b(.)) in normal form via Leibniz expansion."""
    a, b = as_diffop(a), as_diffop(b)
    if a.is_zero() or b.is_zero():
        return DiffOp()
    max_k = a.order
    # i-th derivatives of every coefficient of b, shared across terms of a
    b_derivs: list[list[RatFunc]] = []
    for _, c in b.terms:
        row = [c]
        for _ in range(max_k):
            row.append(row[-1].deriv())
        b_derivs.append(row)
    acc: dict[int, RatFunc] = {}
    for k, ca in a.terms:
        for (j, _), row in zip(b.terms, b_derivs):
            for i in range(k + 1):
                order = k - i + j
                contrib = ca * (comb(k, i) * row[i])
                acc[order] = acc.get(order, RatFunc(Poly())) + contrib
    return DiffOp(tuple(acc.items()))


def commutator(a: DiffOp, b: DiffOp) -> DiffOp:
    """AB - BA in normal form."""
    return compose(a, b) - compose(b, a)


def adjoint(a: DiffOp) -> DiffOp:
    """Formal adjoint: d/dx -> -d/dx, coefficients real.

    sum_k c_k d^k  ->  sum_k (-1)^k d^k o c_k, expanded to normal form.
    """
    acc: dict[int, RatFunc] = {}
    for k, c in as_diffop(a).terms:
        sign = -1 if k % 2 else 1
        deriv = c
        for i in range(k + 1):
            order = k - i
            acc[order] = acc.get(order, RatFunc(Poly())) + sign * comb(k, i) * deriv
            deriv = deriv.deriv()
    return DiffOp(tuple(acc.items()))


def hamiltonian(potential) -> DiffOp:
    """H = -d^2/dx^2 + V(x)."""
    return DiffOp(((2, RatFunc(Poly([-1]))), (0, as_ratfunc(potential))))


def op_poly(p: Poly, h: DiffOp) -> DiffOp:
    """p(h) by Horner's rule in the operator algebra."""
    acc = DiffOp()
    for c in reversed(p.coeffs):
        acc = compose(acc, h) + as_diffop(c)
    return acc


@dataclass(frozen=True)
class FactoredPoly:
    """constant * prod_i (t - roots[i]): kept factored, expandable on demand."""

    constant: Fraction
    roots: tuple[Fraction, ...]

    def expand(self) -> Poly:
        p = Poly([self.constant])
        for r in self.roots:
            p = p * Poly([-r, 1])
        return p

    def __call__(self, value: Fraction) -> Fraction:
        out = self.constant
        for r in self.roots:
            out *= value - r
        return out

    @property
    def degree(self) -> int:
        return len(self.roots)

    def at_operator(self, h: DiffOp) -> DiffOp:
        out = as_diffop(self.constant)
        for r in self.roots:
            out = compose(out, h - as_diffop(r))
        return out


# ---------------------------------------------------------------------------
# supercharges
# ---------------------------------------------------------------------------


def first_order_supercharge(seed: SeedSolution) -> tuple[DiffOp, DiffOp]:
    """A = d/dx + q0, A! = -d/dx + q0 with q0 = -(log phi)' of the seed."""
    _require_nodeless(seed)
    q0 = -seed.log_derivative_x()
    a = D + as_diffop(q0)
    return a, adjoint(a)


@dataclass(frozen=True)
class SecondOrderSupercharge:
    """Reducible second-order supercharge built from a type I / type II pair.

    ``wronskian_poly`` is the degree-(m1+m2+1) polynomial in z whose sign
    pattern controls regularity; the full Wronskian of the two seeds is
    sqrt(2) times it.  ``c = e1 - e2`` is the factorization-energy gap.
    """

    a: DiffOp
    a_dagger: DiffOp
    wronskian_poly: Poly
    mu: int
    e1: Fraction
    e2: Fraction

    @property
    def c(self) -> Fraction:
        return self.e1 - self.e2


def wronskian_denominator(seed1: SeedSolution, seed2: SeedSolution) -> Poly:
    """The polynomial g(z) with W(phi1, phi2) = sqrt(2) g(z(x)).

    g = z W(P1, P2) - (z + alpha) P1 P2 where P1, P2 are the seed
    polynomials; its degree is m1 + m2 + 1.
    """
    from eopsusy.ratpoly import poly_wronskian

    p1, p2 = seed1.polynomial_part, seed2.polynomial_part
    alpha = seed1.alpha
    z = X  # the variable is z here
    return z * poly_wronskian(p1, p2) - Poly([alpha, 1]) * p1 * p2


def second_order_supercharge(seed1: SeedSolution,
                             seed2: SeedSolution) -> SecondOrderSupercharge:
    """A = d^2/dx^2 + q1 d/dx + q0 from a type I and a type II seed.

    The two seeds must share the angular momentum; the pairing requires
    m2 < l + 1/2 so that the type II seed is regular.
    """
    if seed1.family is not SeedFamily.LAGUERRE_I or \
            seed2.family is not SeedFamily.LAGUERRE_II:
        raise AlgebraError(
            "second-order pairing is implemented for a type I first seed and "
            "a type II second seed only")
    if seed1.l != seed2.l:
        raise AlgebraError("second-order seeds must share the angular momentum")
    if not seed2.m < seed2.alpha:  # m2 < l + 1/2
        raise AlgebraError(
            f"second-order pairing requires m2 < l + 1/2; got m2={seed2.m}, "
            f"l={seed2.l}")
    g = wronskian_denominator(seed1, seed2)
    if sturm_count(g, 0, POS_INF) != 0:
        raise AlgebraError("singular intermediate: Wronskian polynomial has "
                           "roots on the half-line")
    mu = seed1.m + seed2.m + 1
    assert g.degree == mu
    # q1 = -(d/dx) log g(z(x)) = -x gdot/g at z = x^2/2
    g_x = g.compose(Z_OF_X)
    gdot_x = g.deriv().compose(Z_OF_X)
    q1 = RatFunc(-X * gdot_x, g_x)
    c = seed1.energy - seed2.energy
    q1p = q1.deriv()
    half = Fraction(1, 2)
    q0 = (q1p * half + q1 * q1 * Fraction(1, 4) - q1p.deriv() / (2 * q1)
          + (q1p / (2 * q1)) * (q1p / (2 * q1)) - (c * c) / (4 * q1 * q1))
    a = DiffOp(((2, RatFunc(Poly([1]))), (1, q1), (0, q0)))
    return SecondOrderSupercharge(a, adjoint(a), g, mu, seed1.energy, seed2.energy)


def _require_nodeless(seed: SeedSolution) -> None:
    if seed.family is SeedFamily.HERMITE_PSEUDO:
        bad = sturm_count(seed.polynomial_part) != 0
    else:
        bad = sturm_count(seed.polynomial_part, 0, POS_INF) != 0
    if bad:
        raise AlgebraError("seed has nodes on domain")


# ---------------------------------------------------------------------------
# identity checks and ladder composition
# ---------------------------------------------------------------------------


def check_intertwining(a: DiffOp, h_plus: DiffOp, h_minus: DiffOp) -> bool:
    """True iff A H_plus - H_minus A is the zero operator."""
    return (compose(a, h_plus) - compose(h_minus, a)).is_zero()


def check_factorization(a: DiffOp, a_dagger: DiffOp, h: DiffOp, f: Poly) -> bool:
    """True iff A! A = f(H) symbolically."""
    return (compose(a_dagger, a) - op_poly(f, h)).is_zero()


@dataclass(frozen=True)
class LadderSpec:
    """Ladder pair of a Hamiltonian: [h, op] = -lam op and op! op = P(h)."""

    op: DiffOp
    op_dagger: DiffOp
    lam: Fraction
    P: FactoredPoly
    h: DiffOp


def oscillator_ladder() -> LadderSpec:
    """First-order ladder of H = -d^2 + x^2: a = d/dx + x, P(H) = H - 1."""
    a = D + as_diffop(X)
    return LadderSpec(a, adjoint(a), Fraction(2),
                      FactoredPoly(Fraction(1), (Fraction(1),)),
                      hamiltonian(Poly([0, 0, 1])))


def radial_potential(l) -> RatFunc:
    """V_l(x) = x^2/4 + l(l+1)/x^2."""
    l = Fraction(l)
    return RatFunc(Poly([0, 0, Fraction(1, 4)])) + RatFunc(
        Poly([l * (l + 1)]), Poly([0, 0, 1]))


def radial_ladder(l) -> LadderSpec:
    """Second-order ladder of the radial oscillator V_l.

    a = (1/4)(2 d^2 + 2x d + x^2/2 - 2l(l+1)/x^2 + 1), lowering by 2, with
    a! a = (1/16)(2H - 3 - 2l)(2H - 1 + 2l).
    """
    l = Fraction(l)
    quarter = Fraction(1, 4)
    centrifugal = RatFunc(Poly([-2 * l * (l + 1)]), Poly([0, 0, 1]))
    a = DiffOp((
        (2, RatFunc(Poly([Fraction(1, 2)]))),
        (1, RatFunc(X * Fraction(1, 2))),
        (0, (RatFunc(Poly([0, 0, Fraction(1, 8)])) + centrifugal * quarter
             + as_ratfunc(quarter))),
    ))
    p = FactoredPoly(Fraction(1, 4), (l + Fraction(3, 2), Fraction(1, 2) - l))
    return LadderSpec(a, adjoint(a), Fraction(2), p, hamiltonian(radial_potential(l)))


def compose_ladder(a_charge: DiffOp, ladder: LadderSpec, a_charge_dagger: DiffOp,
                   f: FactoredPoly, h_minus: DiffOp) -> LadderSpec:
    """b = A a A!, b! = A a! A!: the partner Hamiltonian's ladder pair.

    ``f`` is the factorization polynomial with f(H_plus) = A! A.  The new
    pair obeys b! b = P_minus(h_minus) with
    P_minus(t) = P_plus(t) f(t - lam) f(t), assembled factored.
    """
    b = compose(compose(a_charge, ladder.op), a_charge_dagger)
    b_dagger = compose(compose(a_charge, ladder.op_dagger), a_charge_dagger)
    lam = ladder.lam
    sanity = commutator(h_minus, b) + lam * b
    if not sanity.is_zero():
        raise AlgebraError("PHA violation: [h_minus, b] != -lam b")
    new_roots: tuple[Fraction, ...] = ()
    for r in f.roots:
        new_roots += (r + lam, r)
    p_minus = FactoredPoly(ladder.P.constant * f.constant * f.constant,
                           ladder.P.roots + new_roots)
    return LadderSpec(b, b_dagger, lam, p_minus, h_minus)
