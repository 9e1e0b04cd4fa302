"""Finite-dimensional unitary representations of the 2D symmetry algebras.

For each separable system the structure function Phi(E,u,x) factors into
affine pieces; solving Phi(E,u,0) = 0 = Phi(E,u,p+1) with positivity in
between, then matching the Fock ladder onto actual product states,
enumerates every unitary representation.  This prints the solution tables
for all six cases, including the duplicate structure-function pair of the
double oscillator extension.

Run: python demos/representation_tables.py
"""

from eopsusy.extensions import Case2D
from eopsusy.superalg import build_system, enumerate_reps, structure_function


def factor_str(cx, cp, c0):
    parts = []
    for coeff, sym in ((cx, "x"), (cp, "p"), (c0, "")):
        if coeff == 0:
            continue
        if sym and abs(coeff) == 1:
            parts.append(("+" if coeff > 0 else "-") + sym)
        else:
            parts.append(f"{coeff:+}{sym}")
    return "(" + "".join(parts).lstrip("+") + ")"


def show(case, params):
    system = build_system(case, params)
    rep = enumerate_reps(structure_function(system), system.spectrum(), p_max=40)
    pretty = ", ".join(f"{k}={v}" for k, v in sorted(params.items()))
    print(f"=== {case.value} ({pretty}) ===")
    print("  u branches: " + ", ".join(
        f"u{i+1} = {b.cE} E + {b.c0}" for i, b in enumerate(rep.branches)))
    for s in rep.solutions:
        p_txt = "p in N" if s.is_family else f"p = {s.p}"
        e_txt = (f"E = {s.e_slope} p + {s.e_intercept}" if s.is_family
                 else f"E = {s.e_value()}")
        phi_txt = f"{s.phi.constant} " + " ".join(
            factor_str(*f) for f in s.phi.factors)
        dup = ("  [same structure function as another row]"
               if s.duplicate_group is not None else "")
        states = ("nu_x = n, nu_y = p - n" if s.is_family
                  else ", ".join(str(t) for t in s.states))
        print(f"  u{s.u_index+1}: {p_txt:8}  {e_txt:20}  Phi = {phi_txt}{dup}")
        print(f"        physical states: {states}")
    if rep.unconstrained:
        flags = ", ".join(f"u{a.u_index+1}/factor{a.factor_index}"
                          for a in rep.unconstrained)
        print(f"  E-unconstrained closures flagged (never solutions): {flags}")
    print()


show(Case2D.H1, {"m": 2})
show(Case2D.H2, {"m1": 2, "m2": 2})
show(Case2D.LAG_I, {"l": 2, "m": 1})
show(Case2D.LAG_II, {"l": 2, "m": 1})
show(Case2D.LAG_III, {"l": 2, "m": 2})
show(Case2D.LAG_2, {"l": 2, "m1": 1, "m2": 1})
