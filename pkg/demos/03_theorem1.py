"""Massey products as indefinite theta series.

For each kernel element c of (2, 2, 3) and each l mod d0, the triple-product
coefficient MP(c)_l equals Theta_{Q, f_{c,l}}, and f_{c,l} satisfies the
f-condition.
"""

from hecke_massey import DegreeTriple, ZERO_PARAMS, universal_massey_kernel_exact, verify_thm1

t = DegreeTriple.of(2, 2, 3)
for n, c in enumerate(universal_massey_kernel_exact(t).basis):
    rep = verify_thm1(t, ZERO_PARAMS, c, 6)
    rows = ", ".join(f"l={r['l']}: {r['terms']} terms" for r in rep.per_l)
    print(f"basis[{n}] passed={rep.passed}  ({rows})")
