"""Rational extensions of the oscillator and radial oscillator.

Builds the rationally extended potentials whose bound states involve
exceptional orthogonal polynomials, the supersymmetric operator algebra
that produces them (supercharges, higher-order ladder operators,
polynomial Heisenberg algebras), the associated 2D superintegrable
systems, and the finite-dimensional unitary representations of their
polynomial symmetry algebras.  Everything symbolic is exact big-rational
arithmetic; :mod:`eopsusy.numverify` cross-checks spectra, wavefunctions
and orthogonality in floating point.
"""

from eopsusy.ratpoly import Poly, RatFunc, Rational, rational

__all__ = ["Poly", "RatFunc", "Rational", "rational"]
__version__ = "0.1.0"
