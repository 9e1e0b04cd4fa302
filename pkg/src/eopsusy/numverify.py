"""Floating-point cross-validation of the exact constructions.

Three independent numeric probes of what the symbolic layer asserts:

* ``fd_eigs``            - lowest eigenvalues of -psi'' + V psi by central
  differences on a Dirichlet grid, eigenvalues of the symmetric tridiagonal
  matrix extracted by bisection on its Sturm-count function (lowest k only,
  no external solver), Richardson-extrapolated across grids h and h/2;
* ``ortho_gram``         - Gram matrices of the partner polynomials under
  their weights by composite Gauss-Legendre panels with domain truncation
  where the weight falls below a cutoff, convergence verified by panel
  doubling;
* ``wavefunction_check`` - residual of the closed-form bound states using a
  high-order finite-difference second derivative.

Everything here is deterministic float64; a report never feeds back into
the exact layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from eopsusy.extensions import ExtensionFamily, ExtensionSpec, PotentialSpec
from eopsusy.ratpoly import Poly, RatFunc


class NumericError(ValueError):
    """A numeric verification could not be carried out."""


# ---------------------------------------------------------------------------
# float evaluation of exact objects
# ---------------------------------------------------------------------------


def eval_poly(p: Poly, x: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(x, dtype=float)
    for c in reversed(p.coeffs):
        acc = acc * x + float(c)
    return acc


def eval_ratfunc(r: RatFunc, x: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return eval_poly(r.num, x) / eval_poly(r.den, x)


def potential_callable(potential):
    """Normalize a potential argument to a float callable on arrays."""
    if callable(potential) and not isinstance(potential, (Poly, RatFunc)):
        return potential
    if isinstance(potential, PotentialSpec):
        total = potential.total()
        return lambda x: eval_ratfunc(total, x)
    if isinstance(potential, Poly):
        return lambda x: eval_poly(potential, x)
    if isinstance(potential, RatFunc):
        return lambda x: eval_ratfunc(potential, x)
    raise TypeError(f"cannot evaluate {type(potential).__name__} as a potential")


# ---------------------------------------------------------------------------
# finite-difference eigensolver
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """Dirichlet box (a, b) with ``points`` interior grid points."""

    a: float
    b: float
    points: int

    def __post_init__(self):
        if not self.b > self.a:
            raise NumericError("grid needs b > a")
        if self.points < 16:
            raise NumericError("grid needs at least 16 points")

    @property
    def h(self) -> float:
        return (self.b - self.a) / (self.points + 1)

    def interior(self) -> np.ndarray:
        return self.a + self.h * np.arange(1, self.points + 1)

    def refined(self) -> "GridSpec":
        """Same box with spacing h/2 (nested grid)."""
        return GridSpec(self.a, self.b, 2 * self.points + 1)


@dataclass(frozen=True)
class EigReport:
    """Computed vs analytic spectrum with per-level absolute errors."""

    computed: tuple[float, ...]
    analytic: tuple[float, ...] | None
    abs_errors: tuple[float, ...] | None
    grids: tuple[GridSpec, GridSpec]
    raw_coarse: tuple[float, ...]
    raw_fine: tuple[float, ...]

    def max_error(self) -> float:
        if self.abs_errors is None:
            raise NumericError("no analytic levels were supplied")
        return max(self.abs_errors)

    def to_json_dict(self) -> dict:
        from eopsusy.jsonio import float_str

        return {
            "schema_version": 1,
            "computed": [float_str(v) for v in self.computed],
            "analytic": (None if self.analytic is None
                         else [float_str(v) for v in self.analytic]),
            "abs_errors": (None if self.abs_errors is None
                           else [float_str(v) for v in self.abs_errors]),
            "grids": [{"a": float_str(g.a), "b": float_str(g.b),
                       "points": g.points} for g in self.grids],
        }


def _sturm_count_tridiag(diag: np.ndarray, off_sq: np.ndarray,
                         sigmas: np.ndarray) -> np.ndarray:
    """Number of eigenvalues below each sigma (vectorized over sigmas)."""
    tiny = 1e-300
    with np.errstate(over="ignore", divide="ignore"):
        d = diag[0] - sigmas
        d = np.where(d == 0.0, -tiny, d)
        count = (d < 0).astype(int)
        for i in range(1, diag.size):
            d = diag[i] - sigmas - off_sq[i - 1] / d
            d = np.where(d == 0.0, -tiny, d)
            count += d < 0
    return count


def _lowest_eigs_tridiag(diag: np.ndarray, off: float, k: int) -> np.ndarray:
    """Lowest k eigenvalues by bisection on the Sturm count."""
    radius = np.abs(diag) + 2 * abs(off)
    lo = float(np.min(diag - radius) - 1.0)
    hi = float(np.max(diag + radius) + 1.0)
    off_sq = np.full(diag.size - 1, off * off)
    los = np.full(k, lo)
    his = np.full(k, hi)
    targets = np.arange(1, k + 1)
    for _ in range(80):
        mids = 0.5 * (los + his)
        counts = _sturm_count_tridiag(diag, off_sq, mids)
        take_hi = counts >= targets
        his = np.where(take_hi, mids, his)
        los = np.where(take_hi, los, mids)
        if np.max(his - los) < 1e-13 * max(1.0, float(np.max(np.abs(mids)))):
            break
    return 0.5 * (los + his)


def fd_eigs(potential, grid: GridSpec, k: int, analytic=None) -> EigReport:
    """Lowest k Dirichlet eigenvalues of -psi'' + V psi, extrapolated.

    Second-order central differences on ``grid`` and its h/2 refinement;
    the reported levels are the h^4 Richardson combination.  ``analytic``
    (exact rationals or floats) fills in the error columns.
    """
    v = potential_callable(potential)
    if k < 1:
        raise NumericError("need k >= 1 eigenvalues")
    if k > grid.points // 4:
        raise NumericError(
            f"k={k} exceeds resolvable levels on a {grid.points}-point grid")
    results = []
    fine = grid.refined()
    for g in (grid, fine):
        x = g.interior()
        vx = np.asarray(v(x), dtype=float)
        if not np.all(np.isfinite(vx)):
            raise NumericError("potential is not finite on the grid")
        h = g.h
        diag = 2.0 / (h * h) + vx
        results.append(_lowest_eigs_tridiag(diag, -1.0 / (h * h), k))
    coarse, refined = results
    extrapolated = refined + (refined - coarse) / 3.0
    analytic_t = None
    errors = None
    if analytic is not None:
        analytic_t = tuple(float(a) for a in analytic)
        if len(analytic_t) != k:
            raise NumericError("analytic level list must have length k")
        errors = tuple(float(abs(c - a))
                       for c, a in zip(extrapolated, analytic_t))
    return EigReport(tuple(float(v) for v in extrapolated), analytic_t, errors,
                     (grid, fine), tuple(float(v) for v in coarse),
                     tuple(float(v) for v in refined))


# ---------------------------------------------------------------------------
# orthogonality by quadrature
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureConfig:
    panels: int = 48
    order: int = 32
    cutoff: float = 1e-30
    rel_tol: float = 1e-9


def _weight_and_domain(spec: ExtensionSpec, cutoff: float):
    """Weight density in the x variable and a truncated integration window.

    Radial weights z^alpha e^{-z} den(z)^{-2} dz are integrated through
    z = x^2/2, absorbing the Jacobian, so the integrand is smooth at 0 for
    half-integer alpha.
    """
    den = spec.weight.denominator
    if spec.weight.kind == "gaussian":
        radius = 1.3 * math.sqrt(-math.log(cutoff))

        def density(x):
            return np.exp(-x * x) / eval_poly(den, x) ** 2

        return density, (-radius, radius)
    alpha = float(spec.weight.alpha)
    radius = 1.6 * math.sqrt(-2.0 * math.log(cutoff))

    def density(x):
        z = 0.5 * x * x
        return z ** alpha * np.exp(-z) * x / eval_poly(den, z) ** 2

    return density, (1e-12, radius)


def _eop_values(spec: ExtensionSpec, degree: int, x: np.ndarray) -> np.ndarray:
    from eopsusy.extensions import eop_from_supercharge

    eop = eop_from_supercharge(spec, spec.nu_for_degree(degree))
    if spec.family is ExtensionFamily.HERMITE:
        return eval_poly(eop.coeffs, x)
    return eval_poly(eop.coeffs, 0.5 * x * x)


def _panel_nodes(lo: float, hi: float, panels: int, order: int):
    base_x, base_w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    xs = (mid[:, None] + half[:, None] * base_x[None, :]).ravel()
    ws = (half[:, None] * base_w[None, :]).ravel()
    return xs, ws


def ortho_gram(spec: ExtensionSpec, degrees, quad: QuadratureConfig | None = None
               ) -> np.ndarray:
    """Gram matrix of the partner polynomials under the family weight.

    Computes the matrix twice, at the configured panel count and at double
    that, and raises if the two disagree beyond ``rel_tol`` relative to the
    matrix scale.
    """
    quad = quad or QuadratureConfig()
    degrees = list(degrees)
    density, (lo, hi) = _weight_and_domain(spec, quad.cutoff)

    def gram(panels: int) -> np.ndarray:
        xs, ws = _panel_nodes(lo, hi, panels, quad.order)
        w = density(xs) * ws
        vals = np.vstack([_eop_values(spec, n, xs) for n in degrees])
        return (vals * w) @ vals.T

    g1 = gram(quad.panels)
    g2 = gram(2 * quad.panels)
    scale = float(np.max(np.abs(g2)))
    if scale == 0.0 or not np.all(np.isfinite(g2)):
        raise NumericError("quadrature produced a degenerate Gram matrix")
    if float(np.max(np.abs(g2 - g1))) > quad.rel_tol * scale:
        raise NumericError("quadrature non-convergence: panel doubling moved "
                           "the Gram matrix beyond tolerance")
    return g2


def gram_offdiag_ratio(gram: np.ndarray) -> float:
    """max |G_ij| / sqrt(G_ii G_jj) over i != j (0 for a 1x1 matrix)."""
    d = np.sqrt(np.diag(gram))
    normalized = gram / np.outer(d, d)
    off = normalized - np.diag(np.diag(normalized))
    return float(np.max(np.abs(off))) if off.size > 1 else 0.0


# ---------------------------------------------------------------------------
# closed-form wavefunction residuals
# ---------------------------------------------------------------------------

_STENCIL = np.array([-1.0 / 560, 8.0 / 315, -1.0 / 5, 8.0 / 5, -205.0 / 72,
                     8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560])


def wavefunction_value(spec: ExtensionSpec, nu: int, x: np.ndarray) -> np.ndarray:
    """Closed-form bound state: measure prefactor times EOP over denominator."""
    from eopsusy.extensions import eop_from_supercharge

    eop = eop_from_supercharge(spec, nu)
    if spec.family is ExtensionFamily.HERMITE:
        return (np.exp(-0.5 * x * x) * eval_poly(eop.coeffs, x)
                / eval_poly(spec.denominator, x))
    z = 0.5 * x * x
    l = float(spec.l)
    return (x ** (l + 1.0) * np.exp(-0.25 * x * x) * eval_poly(eop.coeffs, z)
            / eval_poly(spec.denominator, z))


def wavefunction_check(spec: ExtensionSpec, nu: int, grid: GridSpec) -> float:
    """Relative residual ||(-psi'' + (V - E) psi)|| / ||psi|| on the grid.

    The second derivative uses the 9-point eighth-order central stencil on
    the closed form, independent of any symbolic differentiation.
    """
    x = grid.interior()
    h = grid.h
    psi = wavefunction_value(spec, nu, x)
    d2 = np.convolve(psi, _STENCIL[::-1], mode="valid") / (h * h)
    inner = slice(4, len(x) - 4)
    v = potential_callable(spec.potential)(x[inner])
    e = float(spec.spectrum.energy(nu))
    residual = -d2 + (v - e) * psi[inner]
    denom = float(np.linalg.norm(psi[inner]))
    if denom == 0.0:
        raise NumericError("wavefunction vanished on the whole grid")
    return float(np.linalg.norm(residual)) / denom
