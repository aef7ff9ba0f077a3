"""Crushing to a 0-efficient triangulation.

Walks the small census, builds crushing chains for the triangulations that
contain a non-trivial normal sphere or disc, and checks every chain with the
independent verifier.
"""
from collections import Counter

from cuspcert.census import load_census
from cuspcert.certify import cert_0F, verify_0F
from cuspcert.isosig import decode

lengths = Counter()
example = None
for sig in load_census():
    t = decode(sig)
    if not (t.is_valid and t.is_orientable) or any(bc.euler == 2 for bc in t.skeleton.boundary_components):
        continue
    chain = cert_0F(t).chain
    if len(chain) == 1:
        continue
    assert verify_0F(chain).accepted
    lengths[len(chain) - 1] += 1
    if len(chain) > 2 and example is None:
        example = chain

print("crushing steps needed:", dict(sorted(lengths.items())))
print("a longer chain:")
for sig, v in example:
    print(f"  {sig:12s} {decode(sig).size} tetrahedra  crush along {v}")
