"""Angle structures on the figure-eight knot complement.

The two ideal tetrahedra admit the symmetric strict angle structure with every
angle a third of pi, which certifies hyperbolicity.  After two 2-3 moves the
structure is lost on the new triangulation; the linear program then returns a
dual vector proving that, and a short search over moves finds a triangulation
where a strict structure exists again.
"""
from fractions import Fraction

from cuspcert.angles import (angle_equations, retriangulation_search, strict_angle_structure,
                             verify_angle_structure, verify_dual_certificate)
from cuspcert.isosig import decode, encode

t = decode("cPcbbbiht")
third = Fraction(1, 3)
print("symmetric structure verifies:", verify_angle_structure(t, [(third,) * 3] * 2))
res = strict_angle_structure(t)
print("LP optimum: least angle", res.epsilon, "of pi")

bad = decode("eLPkbcdddhgrvv")
res = strict_angle_structure(bad)
print("\nafter two 2-3 moves:", res.status)
print("dual certificate:", [str(y) for y in res.dual])
print("dual verifies:", verify_dual_certificate(angle_equations(bad), res.dual))

found = retriangulation_search(bad, 2)
print("\nsearch found a strict structure after", len(found.proof.steps), "move(s):", encode(found.triangulation))
print("angles:", [[str(a) for a in tet] for tet in found.assignment])
