"""
Serre functor and mutations on the Bondal quiver
================================================

Walks through the projectives, the Serre functor, the exceptional object P
and the left mutation that produces C tilde.
"""

# the algebra: 9-dimensional, Cartan matrix counts paths i -> j
from qhat import bondal_algebra, projective, injective, simple
from qhat import BoundedComplex, derived_hom_dims, derived_iso, euler_form
alg = bondal_algebra()
print("dim A =", len(alg.basis))
print("Euler form in the simple basis:", [list(map(int, r)) for r in euler_form(alg).matrix.rows])

# Hom between projectives
P = {v: BoundedComplex.module(projective(alg, v)) for v in (1, 2, 3)}
for i in (1, 2, 3):
    print(f"P{i}:", [derived_hom_dims(P[i], P[j], [0])[0] for j in (1, 2, 3)])

# the Serre functor sends projectives to injectives
from qhat import serre
for v in (1, 2, 3):
    r = derived_iso(serre(P[v]), BoundedComplex.module(injective(alg, v)))
    print(f"S(P{v}) = I{v}:", r.isomorphic, "certified" if r.certified else "")

# S of a simple is no longer a module
from qhat.chaincat import homology_dims
h = homology_dims(serre(BoundedComplex.module(simple(alg, 1))))
print("homology of S(S1):", {n: v for n, v in h.items() if any(v)})

# the named fixtures: P, P tilde, C tilde, D, E ...
from qhat import load_fixtures, left_mutate
fs = load_fixtures()
L = left_mutate(fs.obj("P"), fs.obj("I3"))
print("L_P(I3) = C tilde:", derived_iso(L, fs.obj("Ct")).isomorphic)
print("Hom(P, L_P(I3)[n]):", derived_hom_dims(fs.obj("P"), L, range(-3, 4)))
