"""A non-hyperbolicity certificate for the trefoil knot exterior.

The exterior contains an annulus that splits it into two solid tori, so the
manifold is Seifert fibred.  The certificate is generated, written as
canonical JSON, re-verified from scratch, and then tampered with.
"""
import json

from cuspcert.certify import Certificate, generate, verify
from cuspcert.isosig import decode

t = decode("eHLObcdddwuj")
print("trefoil exterior:", t.size, "tetrahedra, H1 =", t.homology_h1())

cert = generate(t)
print("\ncertificate kind:", cert.kind)
print("annulus:", cert.surface)
for ev in cert.evidence:
    print(f"  {ev.name}: {ev.status} via {ev.method}")

text = cert.to_json()
print("\nserialised size:", len(text), "bytes")
verdict = verify(Certificate.from_json(text))
print("verdict:", verdict.overall)

d = json.loads(text)
d["surface"][0] += 2
verdict = verify(Certificate.from_dict(d))
print("after changing one coordinate:", verdict.overall, "-", verdict.diagnostics[0])
