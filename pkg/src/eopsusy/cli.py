"""Command-line surface: builders, enumerators and verifiers.

Subcommands
-----------
eop               construct partner polynomials of a rational extension
extend            build an extension and emit its JSON description
reps              enumerate finite-dimensional unitary representations
holes             per-level degeneracy coverage report
verify-spectrum   finite-difference eigenvalues vs analytic levels
verify-ortho      Gram-matrix orthogonality under the family weight
verify-algebra    symbolic operator identities of an extension
export-potential  sample the potential to CSV

Exit codes: 0 success; 1 domain/constraint violation (the message names the
violated constraint); 2 verification failure (an identity or tolerance that
should hold did not); 64 usage error.  Outputs are deterministic: rationals
render as "p/q" strings, floats with 17 significant digits, and identical
inputs produce byte-identical files.  ``EOPSUSY_OUTDIR`` optionally sets the
directory for relative output paths.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from fractions import Fraction

from eopsusy import jsonio
from eopsusy.diffop import AlgebraError, commutator, compose, op_poly
from eopsusy.extensions import (
    Case2D,
    ExtensionFamily,
    build_hermite_extension,
    build_laguerre2_extension,
    build_laguerre_extension,
    eop_from_supercharge,
    eop_ode_residual,
    physical_spectrum,
)
from eopsusy.families import ConstraintError
from eopsusy.ratpoly import Poly, RatPolyError, rational

EXIT_OK = 0
EXIT_CONSTRAINT = 1
EXIT_VERIFY = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class VerificationFailure(Exception):
    pass


EXT_CASES = ("hermite-ext", "lag-i", "lag-ii", "lag-iii", "lag2")
REP_CASES = ("H1", "H2", "LagI", "LagII", "LagIII", "Lag2")
POTENTIAL_CASES = EXT_CASES + ("oscillator", "radial")

_DEFAULT_TOL = {"hermite-ext": 1e-4, "lag-i": 1e-3, "lag-ii": 1e-3,
                "lag-iii": 1e-3, "lag2": 1e-3, "oscillator": 1e-5,
                "radial": 1e-3}
_DEFAULT_DOMAIN = {"hermite-ext": (-12.0, 12.0), "oscillator": (-12.0, 12.0)}
_HALFLINE_DOMAIN = (0.0, 20.0)


def _add_param_flags(p: _Parser) -> None:
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--m1", type=int, default=None)
    p.add_argument("--m2", type=int, default=None)
    p.add_argument("--l", type=str, default=None,
                   help="angular momentum, rational like 2 or 5/2")


def _require(args, *names):
    out = []
    for name in names:
        v = getattr(args, name)
        if v is None:
            raise UsageError(f"--{name} is required for case {args.case}")
        out.append(rational(v) if name == "l" else v)
    return out


def build_extension_from_args(args):
    case = args.case
    if case == "hermite-ext":
        (m,) = _require(args, "m")
        return build_hermite_extension(m)
    if case in ("lag-i", "lag-ii", "lag-iii"):
        l, m = _require(args, "l", "m")
        fam = {"lag-i": ExtensionFamily.LAGUERRE_I,
               "lag-ii": ExtensionFamily.LAGUERRE_II,
               "lag-iii": ExtensionFamily.LAGUERRE_III}[case]
        return build_laguerre_extension(fam, l, m)
    if case == "lag2":
        l, m1, m2 = _require(args, "l", "m1", "m2")
        return build_laguerre2_extension(l, m1, m2)
    raise UsageError(f"unknown extension case {case!r}")


def rep_case_params(args):
    case = Case2D(args.case)
    if case is Case2D.H1:
        (m,) = _require(args, "m")
        return case, {"m": m}
    if case is Case2D.H2:
        m1, m2 = _require(args, "m1", "m2")
        return case, {"m1": m1, "m2": m2}
    if case is Case2D.LAG_2:
        l, m1, m2 = _require(args, "l", "m1", "m2")
        return case, {"l": l, "m1": m1, "m2": m2}
    l, m = _require(args, "l", "m")
    return case, {"l": l, "m": m}


# ---------------------------------------------------------------------------
# JSON rendering of representation reports
# ---------------------------------------------------------------------------


def _branch_json(b):
    return {"cE": jsonio.frac_str(b.cE), "c0": jsonio.frac_str(b.c0)}


def _phi_json(phi):
    return {
        "constant": jsonio.frac_str(phi.constant),
        "factors": [{"x": str(cx), "p": str(cp), "const": str(c0)}
                    for cx, cp, c0 in phi.factors],
    }


def _solution_json(s):
    doc = {
        "u_index": s.u_index + 1,
        "u": _branch_json(s.u),
        "closing_factor": s.closing_factor,
        "p": "all" if s.is_family else s.p,
        "E": {"slope": jsonio.frac_str(s.e_slope),
              "intercept": jsonio.frac_str(s.e_intercept)},
        "phi": _phi_json(s.phi),
    }
    if s.is_family:
        pat = s.pattern
        doc["states"] = {"pattern": {
            "nu_x": {"n": pat.x_n, "p": pat.x_p, "const": pat.x_c},
            "nu_y": {"n": pat.y_n, "p": pat.y_p, "const": pat.y_c}}}
    else:
        doc["E"]["value"] = jsonio.frac_str(s.e_value())
        doc["states"] = [list(st) for st in s.states]
    doc["duplicate_group"] = s.duplicate_group
    return doc


def _report_json(case, params, rep, p_max):
    return {
        "schema_version": 1,
        "case": case.value,
        "params": {k: jsonio.frac_str(v) for k, v in sorted(params.items())},
        "lambda": "2",
        "p_max": p_max,
        "u_branches": [_branch_json(b) for b in rep.branches],
        "solutions": [_solution_json(s) for s in rep.solutions],
        "unconstrained_branches": [
            {"u_index": a.u_index + 1, "factor": a.factor_index,
             "p": list(a.p_values)} for a in rep.unconstrained],
        "rejections": [
            {"u_index": a.u_index + 1, "factor": a.factor_index,
             "reasons": list(a.reasons)} for a in rep.rejected_attempts()],
    }


def _holes_json(case, params, holes, e_max):
    return {
        "schema_version": 1,
        "case": case.value,
        "params": {k: jsonio.frac_str(v) for k, v in sorted(params.items())},
        "e_max": jsonio.frac_str(e_max),
        "levels": [
            {"energy": jsonio.frac_str(lv.energy),
             "physical": [list(s) for s in lv.physical],
             "covered": [list(s) for s in lv.covered],
             "missing": [list(s) for s in lv.missing],
             "physical_degeneracy": lv.physical_degeneracy,
             "algebraic_degeneracy": lv.algebraic_degeneracy}
            for lv in holes.levels],
        "uncovered_levels": [jsonio.frac_str(e) for e in holes.uncovered_levels],
    }


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------


def _cmd_extend(args) -> tuple[str, int]:
    spec = build_extension_from_args(args)
    return jsonio.dumps(spec.to_json_dict()), EXIT_OK


def _cmd_eop(args) -> tuple[str, int]:
    spec = build_extension_from_args(args)
    if args.degrees:
        degrees = [int(d) for d in args.degrees.split(",")]
    else:
        degrees = spec.degree_set(args.max_degree)
    polys = []
    for n in degrees:
        eop = eop_from_supercharge(spec, spec.nu_for_degree(n))
        if not eop_ode_residual(spec, eop).is_zero():
            raise VerificationFailure(
                f"partner polynomial of degree {n} violates its defining ODE")
        polys.append({"degree": eop.n, "nu": eop.nu,
                      "coefficients": [jsonio.frac_str(c)
                                       for c in eop.coeffs.coeffs]})
    doc = {
        "schema_version": 1,
        "case": args.case,
        "params": _params_json(spec),
        "variable": "x" if spec.family is ExtensionFamily.HERMITE else "z",
        "polynomials": polys,
    }
    return jsonio.dumps(doc), EXIT_OK


def _params_json(spec):
    return {k: jsonio.frac_str(v) for k, v in spec.params}


def _cmd_reps(args) -> tuple[str, int]:
    from eopsusy.superalg import build_system, enumerate_reps, structure_function

    case, params = rep_case_params(args)
    system = build_system(case, params)
    phi = structure_function(system)
    rep = enumerate_reps(phi, system.spectrum(), p_max=args.pmax, jobs=args.jobs)
    return jsonio.dumps(_report_json(case, params, rep, args.pmax)), EXIT_OK


def _cmd_holes(args) -> tuple[str, int]:
    from eopsusy.superalg import (build_system, detect_holes, enumerate_reps,
                                  structure_function)

    case, params = rep_case_params(args)
    system = build_system(case, params)
    spectrum = system.spectrum()
    rep = enumerate_reps(structure_function(system), spectrum,
                         p_max=args.pmax, jobs=args.jobs)
    e_max = rational(args.emax)
    holes = detect_holes(rep.solutions, spectrum, e_max)
    return jsonio.dumps(_holes_json(case, params, holes, e_max)), EXIT_OK


def _spectrum_job(args):
    from eopsusy.diffop import radial_potential
    from eopsusy.numverify import GridSpec, fd_eigs

    case = args.case
    k = args.k
    if case == "oscillator":
        potential = Poly([0, 0, 1])
        analytic = [2 * n + 1 for n in range(k)]
        domain = _DEFAULT_DOMAIN["oscillator"]
    elif case == "radial":
        (l,) = _require(args, "l")
        potential = radial_potential(l)
        analytic = [2 * n + l + Fraction(3, 2) for n in range(k)]
        domain = _HALFLINE_DOMAIN
    else:
        spec = build_extension_from_args(args)
        potential = spec.potential
        smap = spec.spectrum
        nus = ([smap.singlet_nu] if smap.singlet_nu is not None else []) + \
            list(range(k))
        analytic = [smap.energy(nu) for nu in nus[:k]]
        domain = _DEFAULT_DOMAIN.get(case, _HALFLINE_DOMAIN)
    if args.domain:
        lo, hi = (float(v) for v in args.domain.split(","))
        domain = (lo, hi)
    grid = GridSpec(domain[0], domain[1], args.points)
    return fd_eigs(potential, grid, k, analytic=analytic)


def _cmd_verify_spectrum(args) -> tuple[str, int]:
    report = _spectrum_job(args)
    tol = args.tol if args.tol is not None else _DEFAULT_TOL[args.case]
    doc = report.to_json_dict()
    doc["tolerance"] = jsonio.float_str(tol)
    doc["max_error"] = jsonio.float_str(report.max_error())
    passed = report.max_error() <= tol
    doc["passed"] = passed
    return jsonio.dumps(doc), (EXIT_OK if passed else EXIT_VERIFY)


def _cmd_verify_ortho(args) -> tuple[str, int]:
    from eopsusy.numverify import gram_offdiag_ratio, ortho_gram

    spec = build_extension_from_args(args)
    if args.degrees:
        degrees = [int(d) for d in args.degrees.split(",")]
    else:
        degrees = spec.degree_set(spec.eop_degree_offset + 4)[:5]
    gram = ortho_gram(spec, degrees)
    ratio = gram_offdiag_ratio(gram)
    passed = ratio <= args.tol
    doc = {
        "schema_version": 1,
        "case": args.case,
        "params": _params_json(spec),
        "degrees": degrees,
        "gram": [[jsonio.float_str(v) for v in row] for row in gram],
        "offdiag_ratio": jsonio.float_str(ratio),
        "tolerance": jsonio.float_str(args.tol),
        "passed": passed,
    }
    return jsonio.dumps(doc), (EXIT_OK if passed else EXIT_VERIFY)


def _cmd_verify_algebra(args) -> tuple[str, int]:
    spec = build_extension_from_args(args)
    a, a_dagger = spec.charge
    lam = spec.ladder.lam
    f_roots = spec.factorization_energies
    f_poly = Poly([1])
    for e in f_roots:
        f_poly = f_poly * Poly([-e, 1])
    ladder = spec.ladder
    checks = {
        "intertwining": (compose(a, spec.h_plus)
                         - compose(spec.h_minus, a)).is_zero(),
        "factorization_plus": (compose(a_dagger, a)
                               - op_poly(f_poly, spec.h_plus)).is_zero(),
        "factorization_minus": (compose(a, a_dagger)
                                - op_poly(f_poly, spec.h_minus)).is_zero(),
        "ladder_commutator": (commutator(spec.h_minus, ladder.op)
                              + lam * ladder.op).is_zero(),
    }
    expected_order = {ExtensionFamily.HERMITE: 3,
                      ExtensionFamily.LAGUERRE_I: 4,
                      ExtensionFamily.LAGUERRE_II: 4,
                      ExtensionFamily.LAGUERRE_III: 4,
                      ExtensionFamily.LAGUERRE_2STEP: 6}[spec.family]
    checks["ladder_order"] = ladder.op.order == expected_order
    if args.deep:
        checks["ladder_product"] = (
            compose(ladder.op_dagger, ladder.op)
            - ladder.P.at_operator(spec.h_minus)).is_zero()
    passed = all(checks.values())
    doc = {
        "schema_version": 1,
        "case": args.case,
        "params": _params_json(spec),
        "lambda": jsonio.frac_str(lam),
        "ladder_order": ladder.op.order,
        "checks": checks,
        "passed": passed,
    }
    return jsonio.dumps(doc), (EXIT_OK if passed else EXIT_VERIFY)


def _cmd_export_potential(args) -> tuple[str, int]:
    import numpy as np

    from eopsusy.numverify import potential_callable

    spec = build_extension_from_args(args)
    xs = np.linspace(args.xmin, args.xmax, args.points)
    vs = potential_callable(spec.potential)(xs)
    if not np.all(np.isfinite(vs)):
        raise ConstraintError("potential is not finite on the requested range")
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["x", "V"])
    for x, v in zip(xs, vs):
        writer.writerow([jsonio.float_str(x), jsonio.float_str(v)])
    return buf.getvalue(), EXIT_OK


# ---------------------------------------------------------------------------
# parser and entry point
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="eopsusy", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def ext_command(name, func, **extra_flags):
        p = sub.add_parser(name)
        p.add_argument("--case", required=True, choices=extra_flags.pop(
            "cases", EXT_CASES))
        _add_param_flags(p)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--format", choices=("json", "csv"), default=None)
        p.set_defaults(func=func)
        return p

    ext_command("extend", _cmd_extend)

    p = ext_command("eop", _cmd_eop)
    p.add_argument("--degrees", type=str, default=None,
                   help="comma-separated degrees, e.g. 0,3,4,5")
    p.add_argument("--max-degree", type=int, default=10)

    for name, func in (("reps", _cmd_reps), ("holes", _cmd_holes)):
        p = ext_command(name, func, cases=REP_CASES)
        p.add_argument("--pmax", type=int, default=50)
        p.add_argument("--jobs", type=int, default=1)
        if name == "holes":
            p.add_argument("--emax", type=str, required=True)

    p = ext_command("verify-spectrum", _cmd_verify_spectrum,
                    cases=POTENTIAL_CASES)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--points", type=int, default=3000)
    p.add_argument("--domain", type=str, default=None, help="a,b")
    p.add_argument("--tol", type=float, default=None)

    p = ext_command("verify-ortho", _cmd_verify_ortho)
    p.add_argument("--degrees", type=str, default=None)
    p.add_argument("--tol", type=float, default=1e-8)

    p = ext_command("verify-algebra", _cmd_verify_algebra)
    p.add_argument("--deep", action="store_true",
                   help="also prove the full ladder product identity")

    p = ext_command("export-potential", _cmd_export_potential)
    p.add_argument("--xmin", type=float, required=True)
    p.add_argument("--xmax", type=float, required=True)
    p.add_argument("--points", type=int, default=400)

    return parser


def _write_output(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
        return
    if not os.path.isabs(out_path):
        out_dir = os.environ.get("EOPSUSY_OUTDIR")
        if out_dir:
            out_path = os.path.join(out_dir, out_path)
    with open(out_path, "w", newline="") as fh:
        fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        text, code = args.func(args)
        _write_output(text, args.out)
        return code
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConstraintError, AlgebraError, RatPolyError) as exc:
        print(f"constraint error: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT


if __name__ == "__main__":
    sys.exit(main())
