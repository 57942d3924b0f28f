"""Indefinite theta series of an antisymmetrized coset function.

Builds f on Z^2 / 4Z^2 as the signed orbit of (0, 1) under the reflections
A, B of Q = (1, 3/2, 1), checks the f-condition, and prints Theta_{Q,f}
together with a shifted version that must agree with it.
"""

from fractions import Fraction as F

from hecke_massey import Lattice, QuadForm, antisymmetrize, check_f_condition, theta_indef, theta_indef_shifted

q = QuadForm.of(1, F(3, 2), 1)
f = antisymmetrize(q, Lattice.standard(2), Lattice.standard(2, 4), (0, 1))
print("nonzero classes:", len(f.values))
print("f-condition:", check_f_condition(q, f))

theta = theta_indef(q, f, 8)
shifted = theta_indef_shifted(q, f, F(1, 7), F(-2, 11), 8)
print("Theta      =", theta)
print("shifted    =", shifted)
print("agree:", theta == shifted)
