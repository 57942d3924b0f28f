"""Universal Massey systems for a few degree triples.

The exact solver works with the reduced (q-independent) equations; the
truncated solver imposes the double-product identities only up to a finite
q-order at generic moduli.  For v = w = 0 both must give the same space.
"""

from hecke_massey import DegreeTriple, ZERO_PARAMS, universal_massey_kernel_exact, universal_massey_kernel_truncated

for d in [(2, 2, 3), (3, 3, 4), (2, 4, 5), (3, 4, 6)]:
    t = DegreeTriple.of(*d)
    exact = universal_massey_kernel_exact(t)
    trunc = universal_massey_kernel_truncated(t, ZERO_PARAMS, 4, 8)
    print(f"{d}: exact dim {exact.dimension}, truncated dim {trunc.dimension}")

t = DegreeTriple.of(2, 2, 3)
for c in universal_massey_kernel_exact(t).basis:
    print("  ", c)
