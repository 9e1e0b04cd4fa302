"""Degeneracies the polynomial algebra cannot see.

The oscillator-extension pair has product states built on the extra
singlet level of the extended axis.  Because the partner polynomial
degrees skip 1..m, some of those states sit at energies no unitary
representation reaches: the level's true degeneracy exceeds the algebraic
one.  This prints the level-by-level comparison.

Run: python demos/holes_and_degeneracies.py
"""

from eopsusy.extensions import Case2D
from eopsusy.superalg import (
    build_system,
    detect_holes,
    enumerate_reps,
    structure_function,
)

for case, params, e_max in ((Case2D.H1, {"m": 2}, 10),
                            (Case2D.LAG_I, {"l": 2, "m": 1}, 16)):
    system = build_system(case, params)
    spectrum = system.spectrum()
    rep = enumerate_reps(structure_function(system), spectrum, p_max=40)
    holes = detect_holes(rep.solutions, spectrum, e_max)
    pretty = ", ".join(f"{k}={v}" for k, v in sorted(params.items()))
    print(f"=== {case.value} ({pretty}), levels up to E = {e_max} ===")
    print(f"{'E':>6}  {'physical':>8}  {'algebraic':>9}  missing states")
    for lv in holes.levels:
        missing = ", ".join(str(s) for s in lv.missing) or "-"
        print(f"{str(lv.energy):>6}  {lv.physical_degeneracy:>8}  "
              f"{lv.algebraic_degeneracy:>9}  {missing}")
    if holes.uncovered_levels:
        print("levels reached by no representation at all: "
              + ", ".join(str(e) for e in holes.uncovered_levels))
    else:
        print("every level is fully explained by the representations")
    print()
