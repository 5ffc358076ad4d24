"""
A spherical object in the orthogonal of P
=========================================

E is built as a shifted cone of P -> S(P).  Its self-extensions look like
the cohomology of a 3-sphere, but only for the Serre functor of the
subcategory.
"""

from qhat import load_fixtures, k0_class, spherical_twist, derived_iso, shift
from qhat.functors import serre, serre_sub
from qhat.homalg import is_spherical, self_ext_dims
fs = load_fixtures()
P, E = fs.obj("P"), fs.obj("E")

dims = self_ext_dims(E, range(0, 5))
print("Ext^n(E, E), n = 0..4:", [dims[n] for n in range(5)])
print("[E] in K0:", k0_class(E).coords)

print("spherical, relative Serre functor:", is_spherical(E, 3, lambda X: serre_sub(P, X)))
print("spherical, ambient Serre functor: ", is_spherical(E, 3, serre))

# twisting E by itself shifts it
T = spherical_twist(E, E)
print("T_E(E) = E[-2]:", derived_iso(T, shift(E, -2)).isomorphic)

# twist of C tilde
print("[T_E(C tilde)] in K0:", k0_class(spherical_twist(E, fs.obj("Ct"))).coords)
