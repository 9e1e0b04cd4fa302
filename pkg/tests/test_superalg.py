"""2D systems: structure functions, representation enumeration, hole reports."""

from fractions import Fraction

import pytest

from eopsusy.diffop import FactoredPoly
from eopsusy.extensions import Case2D
from eopsusy.superalg import (
    FactorXP,
    PhiFactored,
    RepresentationError,
    StructureFunction,
    System2D,
    UBranch,
    detect_holes,
    enumerate_reps,
    structure_function,
    u_roots,
)

from _cache import report_for as _cached_report, system_for

F = Fraction


def phi_expected(constant, factors):
    """Expected structure function from (cx, cp, c0) coefficient triples."""
    return PhiFactored.from_factors(
        F(constant), [FactorXP(F(a), F(b), F(c)) for a, b, c in factors])


def build_system(case, params):
    return system_for(case, tuple(sorted(params.items())))


def report_for(case, params, pmax=25):
    return _cached_report(case, tuple(sorted(params.items())), pmax)


# ---------------------------------------------------------------------------
# systems and structure functions
# ---------------------------------------------------------------------------

def test_build_system_oscillator_pair_polynomials():
    system = build_system(Case2D.H1, {"m": 2})
    assert system.Q.roots == (F(1), F(-3), F(-5))
    assert system.S.roots == (F(1),)
    assert system.lam == 2


def test_build_system_radial_polynomials():
    system = build_system(Case2D.LAG_2, {"l": 2, "m1": 1, "m2": 1})
    assert system.Q.degree == 6 and system.Q.constant == F(1, 4)
    assert system.S.roots == (F(1),)


def test_structure_function_two_bare_oscillators():
    osc = FactoredPoly(F(1), (F(1),))
    system = System2D(Case2D.H1, (("m", 0),), None, None, F(2), F(2), 1, 1,
                      osc, osc)
    phi = structure_function(system)
    assert phi.constant == 1
    assert [(f.cE, f.cx, f.cu, f.c0) for f in phi.factors] == [
        (F(1, 2), F(2), F(2), F(-1)),
        (F(1, 2), F(-2), F(-2), F(1)),
    ]


def test_structure_function_oscillator_extension_factors():
    phi = structure_function(build_system(Case2D.H1, {"m": 2}))
    assert [(f.cE, f.cx, f.cu, f.c0) for f in phi.factors] == [
        (F(1, 2), F(2), F(2), F(-1)),
        (F(1, 2), F(2), F(2), F(3)),   # +2m - 1
        (F(1, 2), F(2), F(2), F(5)),   # +2m + 1
        (F(1, 2), F(-2), F(-2), F(1)),
    ]


def test_structure_function_general_repeat_counts():
    # n1 = 1, n2 = 2 with lambda_x = 2, lambda_y = 1: the S factors repeat
    # with shifts +1 and +2
    q = FactoredPoly(F(1), (F(1),))
    s = FactoredPoly(F(3), (F(0),))
    system = System2D(Case2D.H1, (), None, None, F(2), F(1), 1, 2, q, s)
    phi = structure_function(system)
    assert phi.constant == 9
    assert [(f.cE, f.cx, f.cu, f.c0) for f in phi.factors] == [
        (F(1, 2), F(2), F(2), F(-1)),
        (F(1, 2), F(-2), F(-2), F(1)),
        (F(1, 2), F(-2), F(-2), F(2)),
    ]


def test_u_roots_oscillator_pair():
    phi = structure_function(build_system(Case2D.H1, {"m": 2}))
    assert u_roots(phi) == [
        UBranch(F(-1, 4), F(1, 2)),
        UBranch(F(-1, 4), F(1, 2) - 2),   # -E/4 - m + 1/2
        UBranch(F(-1, 4), F(-1, 2) - 2),  # -E/4 - m - 1/2
        UBranch(F(1, 4), F(1, 2)),
    ]


def test_u_roots_two_extensions():
    phi = structure_function(build_system(Case2D.H2, {"m1": 2, "m2": 2}))
    assert u_roots(phi) == [
        UBranch(F(-1, 4), F(1, 2)),
        UBranch(F(-1, 4), F(1, 2) - 2),
        UBranch(F(-1, 4), F(-1, 2) - 2),
        UBranch(F(1, 4), F(1, 2)),
        UBranch(F(1, 4), F(1, 2) + 2),
        UBranch(F(1, 4), F(3, 2) + 2),
    ]


def test_u_roots_radial_one_step():
    # -E/4 + 3/4 + l'/2, -E/4 + 1/4 - l'/2, -E/4 + 1 + Ef/2, -E/4 + Ef/2, E/4 + 1/2
    phi = structure_function(build_system(Case2D.LAG_I, {"l": 2, "m": 1}))
    lp, ef = F(1), F(-9, 2)
    assert u_roots(phi) == [
        UBranch(F(-1, 4), F(3, 4) + lp / 2),
        UBranch(F(-1, 4), F(1, 4) - lp / 2),
        UBranch(F(-1, 4), 1 + ef / 2),
        UBranch(F(-1, 4), ef / 2),
        UBranch(F(1, 4), F(1, 2)),
    ]


def test_u_roots_radial_two_step():
    phi = structure_function(build_system(Case2D.LAG_2,
                                          {"l": 2, "m1": 1, "m2": 1}))
    l, m1, m2 = F(2), 1, 1
    assert u_roots(phi) == [
        UBranch(F(-1, 4), l / 2 + F(3, 4)),
        UBranch(F(-1, 4), -l / 2 + F(1, 4)),
        UBranch(F(-1, 4), -l / 2 - m1 + F(1, 4)),
        UBranch(F(-1, 4), -l / 2 - m1 - F(3, 4)),
        UBranch(F(-1, 4), -l / 2 + m2 + F(5, 4)),
        UBranch(F(-1, 4), -l / 2 + m2 + F(1, 4)),
        UBranch(F(1, 4), F(1, 2)),
    ]


def test_u_roots_error_for_constant_factor():
    phi = StructureFunction(F(1), (FactorXP(F(0), F(0), F(0)),), F(2))
    # reuse FactorXP fields as (cE, cx, cu=0...) via a real FactorEUX
    from eopsusy.superalg import FactorEUX

    phi = StructureFunction(F(1), (FactorEUX(F(0), F(0), F(0), F(5)),), F(2))
    with pytest.raises(RepresentationError, match="no root branch"):
        u_roots(phi)


# ---------------------------------------------------------------------------
# enumeration: oscillator-extension pair (exact two-solution structure)
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("m", [2, 4])
def test_oscillator_pair_reps_exact(m):
    rep, _ = report_for(Case2D.H1, {"m": m})
    assert len(rep.solutions) == 2
    fam, ground = rep.solutions
    assert fam.is_family and fam.u_index == 0
    assert (fam.e_slope, fam.e_intercept) == (F(2), F(2))  # E = 2(p+1)
    assert fam.phi == phi_expected(16, [(1, 0, 0), (-1, 1, 1),
                                        (1, 0, m), (1, 0, m + 1)])
    assert (fam.pattern.x_n, fam.pattern.x_p, fam.pattern.x_c) == (1, 0, 0)
    assert (fam.pattern.y_n, fam.pattern.y_p, fam.pattern.y_c) == (-1, 1, 0)
    assert ground.p == 0 and ground.u_index == 2
    assert ground.e_value() == -2 * m  # E = 2(p - m) at p = 0
    assert (ground.e_slope, ground.e_intercept) == (F(2), F(-2 * m))
    assert ground.phi == phi_expected(16, [(1, 0, 0), (-1, 1, 1),
                                           (1, 0, -1 - m), (1, 0, -1)])
    assert ground.states == ((-m - 1, 0),)


def test_oscillator_pair_excludes_middle_branch():
    # the u = -E/4 - m + 1/2 branch closes algebraically at p = 0 with
    # E = 2 - 2m, but no physical state matches its Fock ladder
    rep, _ = report_for(Case2D.H1, {"m": 2})
    assert all(s.u_index != 1 for s in rep.solutions)
    reasons = {r.reasons for r in rep.rejected_attempts() if r.u_index == 1}
    assert any("states-unmatched" in rs for rs in reasons)


# ---------------------------------------------------------------------------
# enumeration: two oscillator extensions (five solutions, duplicate pair)
# ---------------------------------------------------------------------------

def test_two_extension_reps_exact():
    m1 = m2 = 2
    rep, _ = report_for(Case2D.H2, {"m1": m1, "m2": m2})
    assert len(rep.solutions) == 5
    by_key = {(s.u_index, s.closing_factor): s for s in rep.solutions}
    assert set(by_key) == {(0, 3), (0, 5), (2, 3), (2, 5), (4, 1)}

    fam = by_key[(0, 3)]
    assert fam.is_family and (fam.e_slope, fam.e_intercept) == (F(2), F(2))
    assert fam.phi == phi_expected(64, [
        (1, 0, 0), (-1, 1, 1), (1, 0, m1), (1, 0, 1 + m1),
        (-1, 1, 1 + m2), (-1, 1, 2 + m2)])

    first_excited = by_key[(0, 5)]
    assert first_excited.p == 0 and first_excited.e_value() == 2 * (0 - m2)
    assert first_excited.states == ((0, -m2 - 1),)
    assert first_excited.phi == phi_expected(64, [
        (1, 0, 0), (-1, 1, 1), (-1, 1, 0), (1, 0, m1), (1, 0, 1 + m1),
        (-1, 1, -m2)])

    ground_x = by_key[(2, 3)]
    assert ground_x.p == 0 and ground_x.e_value() == -2 * m1
    assert ground_x.states == ((-m1 - 1, 0),)

    gg1 = by_key[(2, 5)]
    gg2 = by_key[(4, 1)]
    assert gg1.p == gg2.p == 0
    assert gg1.e_value() == gg2.e_value() == -2 * (1 + m1 + m2)
    assert gg1.states == gg2.states == ((-m1 - 1, -m2 - 1),)
    # reached from different branches with different E(p) forms ...
    assert (gg1.e_slope, gg2.e_slope) == (F(2), F(-2))
    # ... but identical structure functions once p = 0 is substituted
    assert gg1.phi_at_p() == gg2.phi_at_p()
    assert gg1.duplicate_group is not None
    assert gg1.duplicate_group == gg2.duplicate_group
    assert all(s.duplicate_group is None for s in
               (fam, first_excited, ground_x))


# ---------------------------------------------------------------------------
# enumeration: radial cases
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("l,m", [(2, 1), (3, 2)])
def test_radial_case1_unique_solution(l, m):
    rep, _ = report_for(Case2D.LAG_I, {"l": l, "m": m})
    assert len(rep.solutions) == 1
    sol = rep.solutions[0]
    assert sol.is_family and sol.u_index == 0
    assert (sol.e_slope, sol.e_intercept) == (F(2), F(l) + F(3, 2))
    assert sol.phi == phi_expected(1, [
        (1, 0, 0), (-1, 1, 1), (2, 0, 2 * l - 1),
        (2, 0, 2 * m + 2 * l - 1), (2, 0, 2 * m + 2 * l + 1)])


@pytest.mark.parametrize("l,m", [(2, 1), (3, 1)])
def test_radial_case2_unique_solution(l, m):
    rep, _ = report_for(Case2D.LAG_II, {"l": l, "m": m})
    assert len(rep.solutions) == 1
    sol = rep.solutions[0]
    assert sol.is_family and sol.u_index == 0
    assert (sol.e_slope, sol.e_intercept) == (F(2), F(l) + F(7, 2))
    assert sol.phi == phi_expected(1, [
        (1, 0, 0), (-1, 1, 1), (2, 0, 3 + 2 * l),
        (2, 0, 1 + 2 * l - 2 * m), (2, 0, 3 + 2 * l - 2 * m)])


def test_radial_case3_two_solutions():
    l, m = 2, 2
    rep, _ = report_for(Case2D.LAG_III, {"l": l, "m": m})
    assert len(rep.solutions) == 2
    fam, ground = rep.solutions
    assert fam.is_family and fam.u_index == 0
    assert (fam.e_slope, fam.e_intercept) == (F(2), F(l) + F(7, 2))
    assert fam.phi == phi_expected(4, [
        (1, 0, 0), (-1, 1, 1), (1, 0, m), (1, 0, 1 + m), (2, 0, 3 + 2 * l)])
    assert ground.u_index == 3 and ground.p == 0
    assert ground.e_value() == F(l) + F(3, 2) - 2 * m
    assert ground.phi == phi_expected(4, [
        (1, 0, 0), (-1, 1, 1), (1, 0, -1), (1, 0, -1 - m),
        (2, 0, 1 + 2 * l - 2 * m)])
    assert ground.states == ((-m - 1, 0),)


def test_radial_two_step_single_solution_and_rejections():
    l, m1, m2 = 2, 1, 1
    rep, _ = report_for(Case2D.LAG_2, {"l": l, "m1": m1, "m2": m2})
    assert len(rep.branches) == 7
    assert len(rep.solutions) == 1
    sol = rep.solutions[0]
    assert sol.is_family and sol.u_index == 0
    assert (sol.e_slope, sol.e_intercept) == (F(2), F(l) + F(5, 2))
    assert sol.phi == phi_expected(32, [
        (1, 0, 0), (-1, 1, 1),
        (1, 0, F(2 * l + 1, 2)), (1, 0, F(2 * l + 2 * m1 + 1, 2)),
        (1, 0, F(2 * l + 2 * m1 + 3, 2)), (1, 0, F(2 * l - 2 * m2 - 1, 2)),
        (1, 0, F(2 * l - 2 * m2 + 1, 2))])
    # every non-winning branch fails positivity or spectrum membership
    allowed = {"positivity", "not-in-spectrum", "states-unmatched"}
    for u_index in range(1, 7):
        reasons = set()
        for att in rep.rejected_attempts():
            if att.u_index == u_index:
                reasons.update(att.reasons)
        reasons.discard("cannot-close")
        assert reasons, f"branch {u_index + 1} has no recorded failure"
        assert reasons <= allowed


# ---------------------------------------------------------------------------
# constraints re-verified independently, flags, determinism
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("case,params", [
    (Case2D.H1, {"m": 2}),
    (Case2D.H2, {"m1": 2, "m2": 2}),
    (Case2D.LAG_I, {"l": 2, "m": 1}),
    (Case2D.LAG_III, {"l": 2, "m": 2}),
    (Case2D.LAG_2, {"l": 2, "m1": 1, "m2": 1}),
])
def test_solutions_satisfy_constraints_independently(case, params):
    # evaluate Phi through the unsubstituted structure function as an
    # independent route: ends vanish, interior strictly positive
    system = build_system(case, params)
    phi = structure_function(system)
    rep = enumerate_reps(phi, system.spectrum(), p_max=12)
    assert rep.solutions
    for sol in rep.solutions:
        ps = [sol.p] if not sol.is_family else [0, 1, 2, 3, 17]
        for p in ps:
            e = sol.energy_at(p)
            u = sol.u.value(e)
            assert phi.value(e, u, 0) == 0
            assert phi.value(e, u, p + 1) == 0
            for n in range(1, p + 1):
                assert phi.value(e, u, n) > 0


def test_unconstrained_closures_flagged_not_solved():
    rep, _ = report_for(Case2D.H1, {"m": 2})
    flagged = {(a.u_index, a.factor_index, a.p_values) for a in rep.unconstrained}
    assert (1, 0, (1,)) in flagged  # factor 2(x - m) closing at p = m - 1
    assert (2, 1, (0,)) in flagged  # factor 2(x - 1) closing at p = 0
    solution_keys = {(s.u_index, s.closing_factor) for s in rep.solutions}
    assert not (flagged and solution_keys & {(a, f) for a, f, _ in flagged})


def test_enumeration_is_deterministic_and_parallel_safe():
    system = build_system(Case2D.H2, {"m1": 2, "m2": 2})
    phi = structure_function(system)
    spectrum = system.spectrum()
    sequential = enumerate_reps(phi, spectrum, p_max=20)
    threaded = enumerate_reps(phi, spectrum, p_max=20, jobs=4)
    assert sequential == threaded


def test_enumeration_input_validation():
    system = build_system(Case2D.H1, {"m": 2})
    phi = structure_function(system)
    with pytest.raises(RepresentationError, match="p_max"):
        enumerate_reps(phi, system.spectrum(), p_max=-1)
    bad = StructureFunction(phi.constant, phi.factors, F(3))
    with pytest.raises(RepresentationError, match="lam"):
        enumerate_reps(bad, system.spectrum())


def test_ladder_shift_commutator_on_fock_matrices():
    # [K, I+] = I+ and [K, I-] = -I- on an explicit Fock block, with exact
    # rational amplitudes (the identity is independent of their values)
    rep, system = report_for(Case2D.H1, {"m": 2})
    fam = rep.solutions[0]
    p = 3
    e = fam.energy_at(p)
    u = fam.u.value(e)
    dim = p + 1
    amps = [fam.phi.value(n, p) for n in range(1, p + 1)]
    assert all(a > 0 for a in amps)
    k_diag = [u + n for n in range(dim)]
    def mat_mul(a, b):
        return [[sum(a[i][t] * b[t][j] for t in range(dim))
                 for j in range(dim)] for i in range(dim)]
    raise_m = [[amps[j] if i == j + 1 else F(0) for j in range(dim)]
               for i in range(dim)]
    lower_m = [[amps[i] if j == i + 1 else F(0) for j in range(dim)]
               for i in range(dim)]
    k_m = [[k_diag[i] if i == j else F(0) for j in range(dim)]
           for i in range(dim)]
    comm_raise = mat_mul(k_m, raise_m)
    anti = mat_mul(raise_m, k_m)
    assert [[comm_raise[i][j] - anti[i][j] for j in range(dim)]
            for i in range(dim)] == raise_m
    comm_lower = mat_mul(k_m, lower_m)
    anti = mat_mul(lower_m, k_m)
    assert [[comm_lower[i][j] - anti[i][j] for j in range(dim)]
            for i in range(dim)] == [[-v for v in row] for row in lower_m]


# ---------------------------------------------------------------------------
# holes
# ---------------------------------------------------------------------------

def brute_force_coverage(rep, spectrum, e_max):
    """Oracle: enumerate states directly and test each against each solution."""
    covered = {}
    for e, states in spectrum.levels_up_to(e_max):
        got = set()
        for s in states:
            for sol in rep.solutions:
                p = sol.covers_energy(e)
                if p is not None and s in sol.states_at(p):
                    got.add(s)
        covered[e] = got
    return covered


def test_hole_report_oscillator_pair():
    rep, system = report_for(Case2D.H1, {"m": 2})
    spectrum = system.spectrum()
    holes = detect_holes(rep.solutions, spectrum, 10)
    by_energy = {lv.energy: lv for lv in holes.levels}
    assert by_energy[F(-2)].missing == ((-3, 1),)
    assert by_energy[F(0)].missing == ((-3, 2),)
    assert set(holes.uncovered_levels) == {F(-2), F(0)}
    for s in range(1, 6):
        lv = by_energy[F(2 * s)]
        assert lv.physical_degeneracy == s + 1
        assert lv.algebraic_degeneracy == s
        assert lv.missing == ((-3, s + 2),)
    oracle = brute_force_coverage(rep, spectrum, 10)
    for lv in holes.levels:
        assert set(lv.covered) == oracle[lv.energy]


def test_hole_report_radial_case1_complete():
    rep, system = report_for(Case2D.LAG_I, {"l": 2, "m": 1})
    holes = detect_holes(rep.solutions, system.spectrum(), 30)
    assert holes.uncovered_levels == ()
    assert all(not lv.missing for lv in holes.levels)
    assert all(lv.physical_degeneracy == lv.algebraic_degeneracy
               for lv in holes.levels)


def test_hole_report_counts_duplicates_once():
    rep, system = report_for(Case2D.H2, {"m1": 2, "m2": 2})
    holes = detect_holes(rep.solutions, system.spectrum(), 2)
    by_energy = {lv.energy: lv for lv in holes.levels}
    # both duplicate ground-ground solutions cover the same single state
    assert by_energy[F(-10)].algebraic_degeneracy == 1
    assert by_energy[F(-10)].missing == ()


def test_hole_report_with_no_representations():
    # negative control for the coverage logic itself
    _, system = report_for(Case2D.H1, {"m": 2})
    spectrum = system.spectrum()
    holes = detect_holes([], spectrum, 4)
    assert all(lv.algebraic_degeneracy == 0 for lv in holes.levels)
    assert set(holes.uncovered_levels) == {e for e, _ in spectrum.levels_up_to(4)}


# ---------------------------------------------------------------------------
# wider parameter sweep with independent re-verification
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("case,params,n_solutions", [
    (Case2D.H2, {"m1": 4, "m2": 2}, 5),
    (Case2D.LAG_III, {"l": 4, "m": 2}, 2),
    (Case2D.LAG_2, {"l": F(5, 2), "m1": 1, "m2": 2}, 1),
])
def test_parameter_sweep_reverified(case, params, n_solutions):
    # asymmetric indices, rational l, and a repeated ladder-polynomial root
    # (at l=5/2, m1=1, m2=2 two branches coincide: 6 distinct from 7 factors)
    rep, system = report_for(case, params, pmax=20)
    phi = structure_function(build_system(case, params))
    spectrum = system.spectrum()
    assert len(rep.solutions) == n_solutions
    if case is Case2D.LAG_2:
        assert len(phi.factors) == 7 and len(rep.branches) == 6
    for sol in rep.solutions:
        ps = [sol.p] if not sol.is_family else [0, 1, 2, 5, 11]
        for p in ps:
            e = sol.energy_at(p)
            u = sol.u.value(e)
            assert phi.value(e, u, 0) == 0
            assert phi.value(e, u, p + 1) == 0
            assert all(phi.value(e, u, n) > 0 for n in range(1, p + 1))
            states = sol.states_at(p)
            assert len(states) == p + 1
            for n, s in enumerate(states):
                assert spectrum.k_value(*s) == u + n
                assert (spectrum.ex.energy(s[0])
                        + spectrum.ey.energy(s[1])) == e
