"""2D superintegrable systems and their deformed-oscillator representations.

A separable pair ``H = H_x + H_y`` whose axes carry ladder operators with
``a! a = Q(H_x)`` and ``a_y! a_y = S(H_y)`` has integrals of motion whose
polynomial algebra is realized by a deformed oscillator with structure
function

    Phi(E, u, x) = prod_i Q(E/2 + lam(x+u) - (n1-i) lam_x)
                 * prod_j S(E/2 - lam(x+u) + j lam_y),

a product of affine factors in (E, x, u) since Q and S are kept factored.
Finite-dimensional unitary representations are the solutions of
Phi(E,u,0) = 0, Phi(E,u,p+1) = 0, Phi(E,u,n) > 0 for n = 1..p, evaluated
exactly over rationals.

Crucially, an algebraic solution only describes the actual system when the
Fock ladder lands on physical states: level n of the ladder must match a
product state (nu_x, nu_y) whose energies satisfy E and whose splitting
integral eigenvalue (E_x - E_y)/(2 lam) equals u + n.  Enumeration filters
by this matching; solutions rejected by it (and factor/branch attempts that
fail positivity or spectrum membership) are reported with their reasons.
Degeneracies the surviving representations cannot account for -- traced to
gaps in the partner's polynomial degree sequence -- are collected by
``detect_holes``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from eopsusy.diffop import FactoredPoly
from eopsusy.extensions import (
    Case2D,
    ExtensionFamily,
    ExtensionSpec,
    PhysicalSpectrum,
    build_hermite_extension,
    build_laguerre2_extension,
    build_laguerre_extension,
    physical_spectrum,
    rational,
)

ZERO = Fraction(0)


class RepresentationError(ValueError):
    """Malformed structure function or enumeration input."""


# ---------------------------------------------------------------------------
# affine forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FactorEUX:
    """cE*E + cx*x + cu*u + c0."""

    cE: Fraction
    cx: Fraction
    cu: Fraction
    c0: Fraction

    def substitute_u(self, u: "UBranch") -> "FactorEX":
        return FactorEX(self.cE + self.cu * u.cE, self.cx, self.c0 + self.cu * u.c0)


@dataclass(frozen=True)
class FactorEX:
    """cE*E + cx*x + c0 (a structure-function factor on one u-branch)."""

    cE: Fraction
    cx: Fraction
    c0: Fraction

    def value(self, e: Fraction, x) -> Fraction:
        return self.cE * e + self.cx * x + self.c0

    def substitute_e(self, slope: Fraction, intercept: Fraction) -> "FactorXP":
        return FactorXP(self.cx, self.cE * slope, self.c0 + self.cE * intercept)


@dataclass(frozen=True)
class FactorXP:
    """cx*x + cp*p + c0 (factor with the closing energy E(p) substituted)."""

    cx: Fraction
    cp: Fraction
    c0: Fraction

    def value(self, x, p) -> Fraction:
        return self.cx * x + self.cp * p + self.c0


@dataclass(frozen=True)
class UBranch:
    """u = cE*E + c0, one root branch of Phi(E, u, 0) = 0."""

    cE: Fraction
    c0: Fraction

    def value(self, e: Fraction) -> Fraction:
        return self.cE * e + self.c0


def _content_sign_normalize(cs: tuple[Fraction, ...]) -> tuple[Fraction, tuple[int, ...]]:
    """(scale, primitive integer tuple) with first nonzero entry positive."""
    nums = [c for c in cs if c != 0]
    if not nums:
        return Fraction(1), tuple(0 for _ in cs)
    num_gcd = 0
    den_lcm = 1
    for c in nums:
        num_gcd = math.gcd(num_gcd, abs(c.numerator))
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    scale = Fraction(num_gcd, den_lcm)
    if nums[0] < 0:
        scale = -scale
    return scale, tuple(int(c / scale) for c in cs)


@dataclass(frozen=True)
class PhiFactored:
    """Structure function on a branch: constant * prod of primitive factors.

    Factors are canonicalized (integer coefficients, content 1, first
    nonzero coefficient positive, sorted) with all scaling folded into the
    constant, so equality of two PhiFactored values is equality of the
    underlying polynomials in factored form.
    """

    constant: Fraction
    factors: tuple[tuple[int, int, int], ...]  # (cx, cp, c0), canonical

    @staticmethod
    def from_factors(constant: Fraction, factors: list[FactorXP]) -> "PhiFactored":
        canon = []
        for f in factors:
            scale, prim = _content_sign_normalize((f.cx, f.cp, f.c0))
            constant *= scale
            canon.append(prim)
        return PhiFactored(constant, tuple(sorted(canon)))

    def value(self, x, p) -> Fraction:
        out = self.constant
        for cx, cp, c0 in self.factors:
            out *= cx * x + cp * p + c0
        return out


# ---------------------------------------------------------------------------
# systems and structure functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class System2D:
    """Separable 2D system with ladder data (Q, S) on the two axes."""

    case: Case2D
    params: tuple[tuple[str, Fraction | int], ...]
    hx: ExtensionSpec | None  # None marks a bare oscillator axis
    hy: ExtensionSpec | None
    lambda_x: Fraction
    lambda_y: Fraction
    n1: int
    n2: int
    Q: FactoredPoly
    S: FactoredPoly

    @property
    def lam(self) -> Fraction:
        lam = self.n1 * self.lambda_x
        if lam != self.n2 * self.lambda_y:
            raise RepresentationError("n1 lambda_x != n2 lambda_y")
        return lam

    def spectrum(self) -> PhysicalSpectrum:
        return physical_spectrum(self.case, dict(self.params))


OSC_P = FactoredPoly(Fraction(1), (Fraction(1),))  # a!a = H - 1 for -d^2 + x^2


def build_system(case, params: dict) -> System2D:
    """Assemble one of the six separable cases with lambda_x = lambda_y = 2.

    The x-axis factor Q is the composed-ladder polynomial of the extension;
    the y-axis carries a bare oscillator (S = H - 1) except for the
    two-extension oscillator case.
    """
    case = Case2D(case)
    p = dict(params)
    two = Fraction(2)
    if case is Case2D.H1:
        hx = build_hermite_extension(int(p["m"]))
        return System2D(case, _params(p, "m"), hx, None, two, two, 1, 1,
                        hx.ladder.P, OSC_P)
    if case is Case2D.H2:
        hx = build_hermite_extension(int(p["m1"]))
        hy = build_hermite_extension(int(p["m2"]))
        return System2D(case, _params(p, "m1", "m2"), hx, hy, two, two, 1, 1,
                        hx.ladder.P, hy.ladder.P)
    if case in (Case2D.LAG_I, Case2D.LAG_II, Case2D.LAG_III):
        fam = {Case2D.LAG_I: ExtensionFamily.LAGUERRE_I,
               Case2D.LAG_II: ExtensionFamily.LAGUERRE_II,
               Case2D.LAG_III: ExtensionFamily.LAGUERRE_III}[case]
        hx = build_laguerre_extension(fam, rational(p["l"]), int(p["m"]))
        return System2D(case, _params(p, "l", "m"), hx, None, two, two, 1, 1,
                        hx.ladder.P, OSC_P)
    hx = build_laguerre2_extension(rational(p["l"]), int(p["m1"]), int(p["m2"]))
    return System2D(case, _params(p, "l", "m1", "m2"), hx, None, two, two, 1, 1,
                    hx.ladder.P, OSC_P)


def _params(p: dict, *keys) -> tuple:
    out = []
    for k in keys:
        v = p[k]
        out.append((k, rational(v) if k == "l" else int(v)))
    return tuple(out)


@dataclass(frozen=True)
class StructureFunction:
    """Phi(E, u, x): exact product of affine factors times a constant."""

    constant: Fraction
    factors: tuple[FactorEUX, ...]
    lam: Fraction

    def value(self, e: Fraction, u: Fraction, x) -> Fraction:
        out = self.constant
        for f in self.factors:
            out *= f.cE * e + f.cx * x + f.cu * u + f.c0
        return out


def structure_function(sys: System2D) -> StructureFunction:
    """Phi from the factored Q and S.

    Requires lambda_x = lambda_y only through lam = n1 lambda_x = n2
    lambda_y; the general (n1, n2) product form is supported.
    """
    lam = sys.lam
    half = Fraction(1, 2)
    factors: list[FactorEUX] = []
    constant = Fraction(1)
    for i in range(1, sys.n1 + 1):
        shift = -(sys.n1 - i) * sys.lambda_x
        constant *= sys.Q.constant
        for root in sys.Q.roots:
            factors.append(FactorEUX(half, lam, lam, shift - root))
    for j in range(1, sys.n2 + 1):
        shift = j * sys.lambda_y
        constant *= sys.S.constant
        for root in sys.S.roots:
            factors.append(FactorEUX(half, -lam, -lam, shift - root))
    return StructureFunction(constant, tuple(factors), lam)


def u_roots(phi: StructureFunction) -> list[UBranch]:
    """One u(E) branch per factor from factor(E, x=0, u) = 0, deduplicated.

    Factors that depend on x only vanish at x = 0 identically and yield no
    branch; a factor independent of both u and E that is nonzero at x = 0
    can never satisfy the lowering condition and is an input error.
    """
    branches: list[UBranch] = []
    for f in phi.factors:
        if f.cu == 0:
            if f.cE == 0 and f.c0 != 0:
                raise RepresentationError(
                    f"no root branch: factor {f} cannot vanish at x = 0")
            continue
        b = UBranch(-f.cE / f.cu, -f.c0 / f.cu)
        if b not in branches:
            branches.append(b)
    return branches


# ---------------------------------------------------------------------------
# representation enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StatePattern:
    """Affine family of matched states: nu = n_coeff*n + p_coeff*p + const."""

    x_n: int
    x_p: int
    x_c: int
    y_n: int
    y_p: int
    y_c: int

    def states(self, p: int) -> tuple[tuple[int, int], ...]:
        return tuple((self.x_n * n + self.x_p * p + self.x_c,
                      self.y_n * n + self.y_p * p + self.y_c)
                     for n in range(p + 1))


@dataclass(frozen=True)
class RepSolution:
    """One finite-dimensional unitary representation matched to physics.

    ``p`` is None for the infinite family p = 0, 1, 2, ...; then the energy
    is E(p) = e_slope * p + e_intercept and ``pattern`` generates the
    matched states for each p.  For a fixed-p solution ``states`` lists the
    matched product states for Fock levels n = 0..p.
    """

    u_index: int
    u: UBranch
    closing_factor: int
    p: int | None
    e_slope: Fraction
    e_intercept: Fraction
    phi: PhiFactored
    states: tuple[tuple[int, int], ...] | None
    pattern: StatePattern | None
    duplicate_group: int | None = None

    @property
    def is_family(self) -> bool:
        return self.p is None

    def e_value(self) -> Fraction:
        if self.is_family:
            raise ValueError("energy of a p-family is E(p), not a number")
        return self.e_slope * self.p + self.e_intercept

    def energy_at(self, p: int) -> Fraction:
        return self.e_slope * p + self.e_intercept

    def states_at(self, p: int) -> tuple[tuple[int, int], ...]:
        if self.is_family:
            return self.pattern.states(p)
        if p != self.p:
            raise ValueError("fixed-p solution queried at a different p")
        return self.states

    def covers_energy(self, e: Fraction) -> int | None:
        """The p with E(p) = e inside this solution's range, else None."""
        if self.e_slope == 0:
            return self.p if e == self.e_intercept else None
        q, r = divmod(e - self.e_intercept, self.e_slope)
        if r != 0 or q < 0:
            return None
        q = int(q)
        if self.is_family:
            return q
        return q if q == self.p else None

    def phi_at_p(self) -> PhiFactored:
        """The structure function with this solution's fixed p substituted."""
        if self.is_family:
            return self.phi
        subbed = [FactorXP(Fraction(cx), ZERO, Fraction(cp * self.p + c0))
                  for cx, cp, c0 in self.phi.factors]
        return PhiFactored.from_factors(self.phi.constant, subbed)


@dataclass(frozen=True)
class BranchAttempt:
    """Outcome record for one (u-branch, closing-factor) pair."""

    u_index: int
    factor_index: int
    outcome: str  # "family" | "solutions" | "unconstrained" | "rejected"
    reasons: tuple[str, ...] = ()
    p_values: tuple[int, ...] = ()


@dataclass(frozen=True)
class RepReport:
    """Everything the enumeration saw: kept solutions plus diagnostics."""

    branches: tuple[UBranch, ...]
    solutions: tuple[RepSolution, ...]
    unconstrained: tuple[BranchAttempt, ...]
    attempts: tuple[BranchAttempt, ...]

    def rejected_attempts(self) -> tuple[BranchAttempt, ...]:
        return tuple(a for a in self.attempts if a.outcome == "rejected")


REASON_POSITIVITY = "positivity"
REASON_SPECTRUM = "not-in-spectrum"
REASON_MATCHING = "states-unmatched"
REASON_CANNOT_CLOSE = "cannot-close"


def enumerate_reps(phi: StructureFunction, spectrum: PhysicalSpectrum,
                   p_max: int = 50, jobs: int = 1) -> RepReport:
    """Solve the closure constraints exactly on every branch.

    For each u-branch and each closing factor, the closure at x = p + 1 is
    a single affine equation for E, so E(p) is affine with slope lam.
    Infinite families are certified symbolically (positivity of every
    factor over 1 <= n <= p by the affine endpoint argument, and an affine
    integer state pattern); otherwise each p <= p_max is checked exactly.
    Solutions must match physical states level by level; everything else is
    reported as a rejection with its reason, or flagged as an
    E-unconstrained closure when the factor loses its E dependence.

    Branches are independent; ``jobs > 1`` evaluates them concurrently and
    merges results in canonical branch order, so output is identical.
    """
    if p_max < 0:
        raise RepresentationError("p_max must be nonnegative")
    if spectrum.lam != phi.lam:
        raise RepresentationError("spectrum and structure function disagree on lam")
    branches = u_roots(phi)

    def run_branch(item):
        u_index, branch = item
        substituted = [f.substitute_u(branch) for f in phi.factors]
        return [(f_index, _try_closing(phi.constant, substituted, branch,
                                       u_index, f_index, closer, spectrum,
                                       p_max))
                for f_index, closer in enumerate(substituted)]

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_branch = list(pool.map(run_branch, enumerate(branches)))
    else:
        per_branch = [run_branch(item) for item in enumerate(branches)]

    solutions: list[RepSolution] = []
    unconstrained: list[BranchAttempt] = []
    attempts: list[BranchAttempt] = []
    for u_index, branch_results in enumerate(per_branch):
        for f_index, attempt in branch_results:
            if attempt is None:
                continue
            kind, payload = attempt
            if kind == "solution":
                solutions.extend(payload)
                attempts.append(BranchAttempt(
                    u_index, f_index,
                    "family" if payload[0].is_family else "solutions",
                    p_values=tuple(s.p for s in payload if s.p is not None)))
            elif kind == "unconstrained":
                unconstrained.append(payload)
                attempts.append(payload)
            else:
                attempts.append(payload)
    solutions = _dedup(solutions)
    solutions = _annotate_duplicates(solutions)
    return RepReport(tuple(branches), tuple(solutions), tuple(unconstrained),
                     tuple(attempts))


def _try_closing(constant, substituted, branch, u_index, f_index, closer,
                 spectrum, p_max):
    lam = spectrum.lam
    if closer.cE == 0:
        if closer.cx == 0:
            return ("rejected", BranchAttempt(u_index, f_index, "rejected",
                                              (REASON_CANNOT_CLOSE,)))
        p_root = -closer.c0 / closer.cx - 1
        if p_root.denominator == 1 and p_root >= 0:
            return ("unconstrained",
                    BranchAttempt(u_index, f_index, "unconstrained",
                                  p_values=(int(p_root),)))
        return ("rejected", BranchAttempt(u_index, f_index, "rejected",
                                          (REASON_CANNOT_CLOSE,)))
    # E(p) from  cE E + cx (p+1) + c0 = 0
    slope = -closer.cx / closer.cE
    intercept = -(closer.cx + closer.c0) / closer.cE
    factors_xp = [f.substitute_e(slope, intercept) for f in substituted]
    family = _certify_family(slope, intercept, branch, factors_xp, spectrum, lam)
    if family is not None:
        phi_fact = PhiFactored.from_factors(constant, factors_xp)
        return ("solution", [RepSolution(u_index, branch, f_index, None,
                                         slope, intercept, phi_fact, None,
                                         family)])
    found = []
    reasons = set()
    for p in range(p_max + 1):
        e = slope * p + intercept
        u_val = branch.value(e)
        ok, reason = _check_fixed(substituted, e, u_val, p, spectrum, lam)
        if not ok:
            reasons.add(reason)
            continue
        phi_fact = PhiFactored.from_factors(constant, factors_xp)
        states = _matched_states(spectrum, e, u_val, p)
        found.append(RepSolution(u_index, branch, f_index, p, slope, intercept,
                                 phi_fact, tuple(states), None))
    if found:
        return ("solution", found)
    return ("rejected", BranchAttempt(u_index, f_index, "rejected",
                                      tuple(sorted(reasons))))


def _check_fixed(substituted, e, u_val, p, spectrum, lam):
    for n in range(1, p + 1):
        v = Fraction(1)
        for f in substituted:
            v *= f.value(e, n)
        if v <= 0:
            return False, REASON_POSITIVITY
    states = _matched_states(spectrum, e, u_val, p)
    if states is None:
        if spectrum.states_at(e):
            return False, REASON_MATCHING
        return False, REASON_SPECTRUM
    return True, None


def _matched_states(spectrum, e, u_val, p):
    """Physical states matching K = u + n for every n = 0..p, else None."""
    available = {spectrum.k_value(*s): s for s in spectrum.states_at(e)}
    out = []
    for n in range(p + 1):
        state = available.get(u_val + n)
        if state is None:
            return None
        out.append(state)
    return out


def _certify_family(slope, intercept, branch, factors_xp, spectrum, lam):
    """Symbolic proof that every p in N yields a unitary, matched solution.

    Positivity: each affine factor restricted to the box 1 <= n <= p is
    minimized at a corner, so positivity for all p reduces to sign
    conditions on the corner lines.  Matching: the state indices solved
    from E and K = u + n must be an integer affine pattern that stays in
    the admissible index set over the whole box.
    """
    if slope != lam:
        return None
    for f in factors_xp:
        a, b, c = f.cx, f.cp, f.c0
        # f > 0 on {1 <= n <= p} for every p >= 1
        if not (b >= 0 and a + b >= 0 and a + b + c > 0):
            return None
    # nu_x(n, p) from Ex = E/2 + lam (u + n), nu_y from Ey = E/2 - lam (u + n)
    ex, ey = spectrum.ex, spectrum.ey
    u_slope, u_const = branch.cE * slope, branch.cE * intercept + branch.c0
    # E/2 + lam*u as affine in p, then nu_x = (that + lam*n - bx)/ax
    half_e = (slope / 2, intercept / 2)
    ku = (half_e[0] + lam * u_slope, half_e[1] + lam * u_const)
    x_n = lam / ex.slope
    x_p = ku[0] / ex.slope
    x_c = (ku[1] - ex.intercept) / ex.slope
    y_n = -lam / ey.slope
    y_p = (slope - ku[0]) / ey.slope
    y_c = (intercept - ku[1] - ey.intercept) / ey.slope
    coeffs = (x_n, x_p, x_c, y_n, y_p, y_c)
    if any(c.denominator != 1 for c in coeffs):
        return None
    x_n, x_p, x_c, y_n, y_p, y_c = (int(c) for c in coeffs)
    for cn, cp, cc, smap in ((x_n, x_p, x_c, ex), (y_n, y_p, y_c, ey)):
        if cn == 0 and cp == 0:
            if not smap.contains_nu(cc):
                return None
            continue
        if not (cp >= 0 and cn + cp >= 0 and cc >= 0):
            return None
    return StatePattern(x_n, x_p, x_c, y_n, y_p, y_c)


def _solution_signature(s: RepSolution) -> tuple:
    # fixed-p solutions compare with p substituted (a p=0 pair reached via
    # different closing factors is one and the same representation)
    if s.is_family:
        return (None, s.e_slope, s.e_intercept, s.phi)
    return (s.p, s.e_value(), s.phi_at_p())


def _dedup(solutions):
    seen = {}
    for s in solutions:
        key = (s.u,) + _solution_signature(s)
        if key not in seen:
            seen[key] = s
    return list(seen.values())


def _annotate_duplicates(solutions):
    groups: dict[tuple, list[int]] = {}
    for i, s in enumerate(solutions):
        groups.setdefault(_solution_signature(s), []).append(i)
    out = list(solutions)
    group_id = 0
    for key, members in groups.items():
        if len(members) < 2:
            continue
        for i in members:
            s = out[i]
            out[i] = RepSolution(s.u_index, s.u, s.closing_factor, s.p,
                                 s.e_slope, s.e_intercept, s.phi, s.states,
                                 s.pattern, duplicate_group=group_id)
        group_id += 1
    return out


# ---------------------------------------------------------------------------
# hole detection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LevelCoverage:
    """One energy level: physical states vs states any representation covers."""

    energy: Fraction
    physical: tuple[tuple[int, int], ...]
    covered: tuple[tuple[int, int], ...]
    missing: tuple[tuple[int, int], ...]

    @property
    def physical_degeneracy(self) -> int:
        return len(self.physical)

    @property
    def algebraic_degeneracy(self) -> int:
        return len(self.covered)


@dataclass(frozen=True)
class HoleReport:
    """Per-level coverage comparison and the fully uncovered levels."""

    levels: tuple[LevelCoverage, ...]
    uncovered_levels: tuple[Fraction, ...]

    def missing_states(self) -> list[tuple[Fraction, tuple[int, int]]]:
        return [(lv.energy, s) for lv in self.levels for s in lv.missing]


def detect_holes(reps, spectrum: PhysicalSpectrum, e_max) -> HoleReport:
    """Compare physical degeneracies against representation coverage.

    ``reps`` is an iterable of :class:`RepSolution`; coverage of a level is
    the union of the matched states of every representation meeting that
    energy (duplicate structure functions therefore do not double count).
    """
    reps = list(reps)
    levels = []
    uncovered = []
    for e, states in spectrum.levels_up_to(e_max):
        covered: set = set()
        for rep in reps:
            p = rep.covers_energy(e)
            if p is None:
                continue
            covered.update(rep.states_at(p))
        missing = tuple(s for s in states if s not in covered)
        levels.append(LevelCoverage(e, tuple(states),
                                    tuple(sorted(covered)), missing))
        if not covered:
            uncovered.append(e)
    return HoleReport(tuple(levels), tuple(uncovered))
