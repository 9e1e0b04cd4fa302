"""Tour of the rationally extended oscillator.

Builds the partner of V = x^2 obtained from the nodeless seed
(4x^2 + 2) e^{x^2/2}, shows the deformed potential, its spectrum with the
extra singlet level, and the partner polynomials whose degree sequence
skips 1 and 2.

Run: python demos/oscillator_extension_tour.py
"""

from eopsusy.extensions import build_hermite_extension, eop_from_supercharge
from eopsusy.extensions import eop_ode_residual

m = 2
spec = build_hermite_extension(m)

print(f"Rational extension of the oscillator, seed index m = {m}")
print(f"  denominator polynomial:  {spec.denominator}")
print(f"  partner potential:       V(x) = {spec.potential.total()}")
print(f"  (base x^2, rational part {spec.potential.rational_part}, "
      f"constant {spec.potential.constant})")

s = spec.spectrum
levels = [s.singlet_nu] + list(range(5))
print("\nSpectrum E = 2 nu + 1 including the singlet created by the extension:")
for nu in levels:
    print(f"  nu = {nu:>3}:  E = {s.energy(nu)}")

print("\nPartner polynomials (note degrees 1 and 2 never occur):")
for nu in levels:
    eop = eop_from_supercharge(spec, nu)
    ok = eop_ode_residual(spec, eop).is_zero()
    print(f"  nu = {nu:>3}:  degree {eop.n}:  y = {eop.coeffs}   "
          f"[ODE residual zero: {ok}]")

print("\nDegree set up to 12:", spec.degree_set(12))
print("The gaps at 1 and 2 are what later produces unexplained 2D degeneracies.")

print("\nThird-order ladder operator data:")
print(f"  order(b) = {spec.ladder.op.order}")
roots = ", ".join(str(r) for r in spec.ladder.P.roots)
print(f"  b! b = P(H) with P monic, roots {{{roots}}}")
