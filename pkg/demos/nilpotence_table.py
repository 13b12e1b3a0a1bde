"""Print a p-curvature table for both operators of a family."""
from __future__ import annotations

import sys

from sympy import primerange

from teichfuchs.charp import honda_test, p_curvature
from teichfuchs.families import family
from teichfuchs.picardfuchs import derive_ode

D = int(sys.argv[1]) if len(sys.argv) > 1 else 13
fm = family(D)
ops = [derive_ode(fm, i) for i in (1, 2)]
print(" p   L1        L2")
for p in primerange(3, 60):
    if p in fm.S_exceptional:
        continue
    row = []
    for L in ops:
        pc = p_curvature(L, p)
        tag = "zero" if pc.zero else ("nilp" if pc.nilpotent else "----")
        row.append(f"{tag}/{'H' if honda_test(L, p) else '-'}")
    print(f"{p:3d}  " + "   ".join(row))
