"""Normal surfaces in the two-tetrahedron triangulation of S^2 x S^1.

Enumerates vertex and fundamental surfaces, names each one, and shows that
cutting along the non-vertex-linking sphere leaves a connected piece with two
sphere boundary components: the sphere does not separate.
"""
from cuspcert.cut import cut_along
from cuspcert.enumerate import fundamental_surfaces, vertex_normal_surfaces
from cuspcert.isosig import decode
from cuspcert.nsurf import classify, euler_char, format_vector, is_vertex_linking

t = decode("cMcabbjaj")
print("S^2 x S^1:", t.size, "tetrahedra, H1 =", t.homology_h1())

print("\nvertex surfaces")
for v in vertex_normal_surfaces(t):
    names = ",".join(c.name for c in classify(t, v))
    tag = " (vertex link)" if is_vertex_linking(v) else ""
    print(f"  {format_vector(v)}  chi={euler_char(t, v)}  {names}{tag}")

print("\nfundamental surfaces:", len(fundamental_surfaces(t)))

sphere = next(v for v in vertex_normal_surfaces(t)
              if not is_vertex_linking(v) and [c.name for c in classify(t, v)] == ["S2"])
res = cut_along(t, sphere)
piece, _ = res.piece(0)
print("\ncut along", format_vector(sphere))
print("  pieces:", res.n_components)
print("  boundary of the piece:", [("S2" if bc.euler == 2 else bc.euler) for bc in piece.skeleton.boundary_components])
