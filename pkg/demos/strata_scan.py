"""Stratum dimensions of the Hecke correspondence on g-loop quivers.

Scans the grid, lists the points where the (0,0) stratum is not strictly
largest, and runs random lifts on the A2 quiver.

    python3 demos/strata_scan.py
"""
from qcoha.quiver import a2_quiver
from qcoha.strata import diamond_trials, strata_scan

scan = strata_scan()
print(f"{len(scan.rows)} grid points, {len(scan.excluded)} excluded (w = 0)")
print(f"{len(scan.violations)} points where a non-origin stratum ties the origin:")
for r in scan.violations:
    print(f"  g={r['g']} v1={r['v1']} w={r['w']} nu={r['nu']} (n1,n2)=({r['n1']},{r['n2']}) d={r['d']} = d00")

trials = diamond_trials(a2_quiver(), 3, 200, [(1, 1), (2, 1), (1, 2), (2, 2)], [(1, 0), (0, 1), (1, 1)])
print(f"\nA2 lifts over F_3: {sum(t.ok for t in trials)}/{len(trials)} satisfy the postconditions")
