"""Floating-point checks of the exact claims.

Every analytic statement the symbolic layer makes is probed numerically:
finite-difference spectra against the closed-form levels, quadrature Gram
matrices against orthogonality, and direct residuals of the closed-form
bound states.

Run: python demos/numeric_crosschecks.py
"""

from eopsusy.extensions import ExtensionFamily, build_hermite_extension, \
    build_laguerre_extension
from eopsusy.numverify import (
    GridSpec,
    fd_eigs,
    gram_offdiag_ratio,
    ortho_gram,
    wavefunction_check,
)
from eopsusy.ratpoly import Poly

print("1) Finite-difference spectra (Richardson-extrapolated)")
report = fd_eigs(Poly([0, 0, 1]), GridSpec(-12, 12, 3000), 4,
                 analytic=[1, 3, 5, 7])
print(f"   oscillator:       {[f'{v:.8f}' for v in report.computed]}  "
      f"max error {report.max_error():.2e}")

h2 = build_hermite_extension(2)
report = fd_eigs(h2.potential, GridSpec(-12, 12, 3000), 4,
                 analytic=[-5, 1, 3, 5])
print(f"   extended osc m=2: {[f'{v:.8f}' for v in report.computed]}  "
      f"max error {report.max_error():.2e}")

lag = build_laguerre_extension(ExtensionFamily.LAGUERRE_I, 2, 1)
analytic = [lag.spectrum.energy(nu) for nu in range(3)]
report = fd_eigs(lag.potential, GridSpec(0, 20, 3000), 3, analytic=analytic)
print(f"   radial I l=2 m=1: {[f'{v:.8f}' for v in report.computed]}  "
      f"max error {report.max_error():.2e}")

print("\n2) Orthogonality under the deformed weights")
ratio = gram_offdiag_ratio(ortho_gram(h2, [0, 3, 4, 5, 6]))
print(f"   extended osc m=2, degrees 0,3,4,5,6: off/diag ratio {ratio:.2e}")
ratio = gram_offdiag_ratio(ortho_gram(lag, [1, 2, 3, 4, 5]))
print(f"   radial I l=2 m=1, degrees 1..5:      off/diag ratio {ratio:.2e}")

print("\n3) Closed-form bound-state residuals")
for nu in (-3, 0, 1):
    r = wavefunction_check(h2, nu, GridSpec(-8, 8, 2000))
    print(f"   extended osc m=2, nu = {nu:>2}: |(-D^2 + V - E) psi| / |psi| = {r:.2e}")
for nu in (0, 1):
    r = wavefunction_check(lag, nu, GridSpec(0.3, 14, 2000))
    print(f"   radial I l=2 m=1, nu = {nu:>2}: residual = {r:.2e}")
