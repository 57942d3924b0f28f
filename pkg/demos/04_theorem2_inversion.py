"""From a theta series back to a Massey system.

First a closed loop: aggregate a known kernel element into f and recover it.
Then (Q, f) = ((1, 3/2, 1), antisymmetrized f): the pipeline rescales, finds
N = 12 and degrees (360, 360, 600), builds c and compares both sides.  The
second part takes a couple of minutes.
"""

import sys
from fractions import Fraction as F

from hecke_massey import (
    DegreeTriple, Lattice, QuadForm, antisymmetrize, quad_form_of, thm2_pipeline,
    universal_massey_kernel_exact,
)
from hecke_massey.geometry import delta_plane_period
from hecke_massey.massey import aggregate_f

t = DegreeTriple.of(2, 2, 3)
c = universal_massey_kernel_exact(t, delta_periodic=True).basis[1]
rep = thm2_pipeline(quad_form_of(t), aggregate_f(t, c, delta_plane_period(t)), 6)
print(f"closed loop: N={rep.N}, recovered={rep.tensor == c}, Theta={rep.lhs}, passed={rep.passed}")

if "--quick" in sys.argv:
    sys.exit(0)
q = QuadForm.of(1, F(3, 2), 1)
f = antisymmetrize(q, Lattice.standard(2), Lattice.standard(2, 4), (0, 1))
rep = thm2_pipeline(q, f, 4)
print(f"external: N={rep.N}, degrees {rep.degrees.as_tuple()}, {len(rep.tensor.entries)} entries")
print("  Theta_Q,f  =", rep.lhs)
print("  sum_l MP_l =", rep.rhs)
print("  massey system:", rep.massey_system, " equality:", rep.equality)
