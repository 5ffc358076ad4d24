"""Exact computations in the bounded derived category of a quiver with relations.

The layers, from the bottom up:

* ``pathalg``: quivers, admissible ideals, path algebras, Cartan matrices
* ``repcore``: representations, morphisms, Hom spaces, isomorphism search
* ``chaincat``: bounded complexes, chain maps, cones, homotopies, replacements
* ``homalg``: derived Hom, Euler form, K0, derived isomorphism certificates
* ``functors``: Serre functor, mutations, spherical twists, naturality search
* ``bondal``: fixtures and the verification suite for the Bondal quiver
"""

from .pathalg import PathAlgebra, bondal_algebra
from .repcore import (
    RepMorphism,
    Representation,
    hom_dim,
    injective,
    is_isomorphic,
    projective,
    simple,
)
from .chaincat import (
    BoundedComplex,
    ChainMap,
    cone,
    derived_hom_dims,
    homotopic,
    is_quasi_iso,
    null_homotopic,
    shift,
)
from .homalg import derived_iso, euler_characteristic, euler_form, is_exceptional, k0_class
from .functors import left_mutate, right_mutate, serre, serre_inverse, spherical_twist
from .bondal import load_fixtures, verify

__version__ = "0.1.0"

__all__ = [
    "BoundedComplex",
    "ChainMap",
    "PathAlgebra",
    "RepMorphism",
    "Representation",
    "bondal_algebra",
    "cone",
    "derived_hom_dims",
    "derived_iso",
    "euler_characteristic",
    "euler_form",
    "hom_dim",
    "homotopic",
    "injective",
    "is_exceptional",
    "is_isomorphic",
    "is_quasi_iso",
    "k0_class",
    "left_mutate",
    "load_fixtures",
    "null_homotopic",
    "projective",
    "right_mutate",
    "serre",
    "serre_inverse",
    "shift",
    "simple",
    "spherical_twist",
    "verify",
]
