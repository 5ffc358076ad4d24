import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracle
from conftest import bondal_reps
from qhat.chaincat import (
    BoundedComplex,
    ChainMap,
    ComplexError,
    chain_map_basis,
    complex_from_json,
    cone,
    derived_hom_dims,
    homology_dims,
    homotopic,
    identity_map,
    induced_map,
    injective_replacement,
    is_acyclic,
    is_quasi_iso,
    minimize,
    null_homotopic,
    projective_replacement,
    shift,
    shift_map,
    zero_map,
)
from qhat.repcore import hom_basis, identity, injective, projective, simple

# [DERIVED] Ext^n(S_i, S_j) for n = 0..3: the diagonal, the arrow counts i -> j in
# degree 1 and the minimal relation counts i -> j in degree 2
SIMPLE_EXT = {
    (1, 1): (1, 0, 0, 0), (1, 2): (0, 2, 0, 0), (1, 3): (0, 0, 2, 0),
    (2, 1): (0, 0, 0, 0), (2, 2): (1, 0, 0, 0), (2, 3): (0, 2, 0, 0),
    (3, 1): (0, 0, 0, 0), (3, 2): (0, 0, 0, 0), (3, 3): (1, 0, 0, 0),
}


def mod(M, n=0):
    return BoundedComplex.module(M, n)


@pytest.fixture(scope="module")
def p32(alg):
    """The two-term complex P3 --(first basis map)--> P2 with P2 in degree 0."""
    P3, P2 = projective(alg, 3), projective(alg, 2)
    f = hom_basis(P3, P2).basis[0]
    return BoundedComplex(alg, -1, [P3, P2], [f])


def test_d_squared_zero_enforced(alg):
    P3, P2, P1 = projective(alg, 3), projective(alg, 2), projective(alg, 1)
    f = hom_basis(P3, P2).basis[0]
    g = hom_basis(P2, P1).basis[0]
    if (g @ f).is_zero():
        g = hom_basis(P2, P1).basis[1]
    with pytest.raises(ComplexError):
        BoundedComplex(alg, 0, [P3, P2, P1], [f, g])


def test_shift_conventions(p32):
    X = shift(p32, 1)
    assert X.bottom == -2 and X.top == -1
    assert X.d(-2)[3] == -p32.d(-1)[3]


def test_cone_conventions(alg, p32):
    """C^n = X^{n+1} ⊕ Y^n with d(a, b) = (-da, f a + d b)."""
    X, Y = mod(projective(alg, 3)), mod(projective(alg, 2))
    f = ChainMap(X, Y, {0: hom_basis(projective(alg, 3), projective(alg, 2)).basis[0]})
    c = cone(f)
    assert (c.complex.bottom, c.complex.top) == (-1, 0)
    # the cone of a map of modules is the two-term complex with that map as differential
    assert c.complex.d(-1)[3] == f[0][3]
    assert c.complex.obj(0) == Y.obj(0)
    # inclusion then projection is zero on the nose
    assert (c.projection @ c.inclusion).is_zero()


def test_homology_of_resolution(alg, p32):
    # P3 -> P2 with the first basis map is a module concentrated in degree 0
    h = homology_dims(p32)
    assert h.get(-1, (0, 0, 0)) == (0, 0, 0)
    assert h[0] == (0, 1, 1)
    ref = oracle.homology_dims(p32)
    assert {n: v for n, v in h.items() if any(v)} == {n: v for n, v in ref.items() if any(v)}


def test_simple_ext_table(alg):
    S = {v: mod(simple(alg, v)) for v in (1, 2, 3)}
    for (i, j), expected in SIMPLE_EXT.items():
        got = derived_hom_dims(S[i], S[j], range(0, 4))
        assert tuple(got[n] for n in range(4)) == expected, (i, j)


def test_projective_replacement_of_simple(alg):
    R = projective_replacement(mod(simple(alg, 2)))
    assert is_quasi_iso(R.quasi_iso)
    sig = minimize(R.structured).minimal.summand_signature()
    assert {n: tuple(v) for n, v in sig.items() if v} == {-1: (3, 3), 0: (2,)}


def test_injective_replacement_of_simple(alg):
    R = injective_replacement(mod(simple(alg, 2)))
    assert is_quasi_iso(R.quasi_iso)
    sig = minimize(R.structured).minimal.summand_signature()
    assert {n: tuple(v) for n, v in sig.items() if v} == {0: (2,), 1: (1, 1)}


def test_cone_of_identity_is_null_homotopic_and_acyclic(p32):
    c = cone(identity_map(p32)).complex
    assert is_acyclic(c)
    assert null_homotopic(identity_map(c)) is not None


def test_identity_of_nonzero_module_not_null(alg):
    X = mod(simple(alg, 2))
    assert null_homotopic(identity_map(X)) is None


def test_homotopy_witness_certifies(alg):
    # P3 --id--> P3 as a two-term complex is contractible
    P3 = projective(alg, 3)
    X = BoundedComplex(alg, 0, [P3, P3], [identity(P3)])
    h = null_homotopic(identity_map(X))
    assert h is not None and h.certifies(identity_map(X))


def test_chain_map_validation(alg, p32):
    ChainMap(p32, p32, {-1: identity(projective(alg, 3)), 0: identity(projective(alg, 2))})
    Z = BoundedComplex(alg, -1, [projective(alg, 3), projective(alg, 2)],
                       [hom_basis(projective(alg, 3), projective(alg, 2)).basis[1]])
    with pytest.raises(ComplexError):
        ChainMap(p32, Z, {-1: identity(projective(alg, 3)), 0: identity(projective(alg, 2))})


def test_chain_map_basis_dimension(alg):
    P = {v: mod(projective(alg, v)) for v in (1, 2, 3)}
    assert len(chain_map_basis(P[3], P[1])) == 2
    assert len(chain_map_basis(P[1], P[3])) == 0


def test_induced_map_extension_is_unique_when_hom_vanishes(alg):
    # extend the identity of P3 along P3 -> Cone(0 -> P3): the solution is forced
    X = mod(projective(alg, 3))
    i = identity_map(X)
    sol = induced_map(i, i, "extend")
    assert sol is not None and sol.unique
    assert homotopic(sol.map, i) is not None


def test_json_round_trip(p32, alg):
    again = complex_from_json(alg, p32.to_json())
    assert again.total_dims() == p32.total_dims()
    assert again.d(-1)[3] == p32.d(-1)[3]


@settings(max_examples=25, deadline=None)
@given(bondal_reps())
def test_replacements_preserve_homology(M):
    X = mod(M)
    P = projective_replacement(X)
    I = injective_replacement(X)
    assert is_quasi_iso(P.quasi_iso)
    assert is_quasi_iso(I.quasi_iso)
    assert homology_dims(P.complex).get(0, (0, 0, 0)) == M.dims


@settings(max_examples=25, deadline=None)
@given(bondal_reps(), bondal_reps())
def test_degree_zero_derived_hom_is_module_hom(M, N):
    assert derived_hom_dims(mod(M), mod(N), [0])[0] == oracle.hom_dim(M, N)


@settings(max_examples=20, deadline=None)
@given(bondal_reps(), bondal_reps())
def test_projectives_and_injectives_have_no_higher_ext(M, N):
    for v in (1, 2, 3):
        dp = derived_hom_dims(mod(projective(M.algebra, v)), mod(N), range(1, 4))
        di = derived_hom_dims(mod(M), mod(injective(M.algebra, v)), range(1, 4))
        assert not any(dp.values()) and not any(di.values())


@settings(max_examples=20, deadline=None)
@given(bondal_reps(), st.integers(-3, 3))
def test_shift_moves_homology(M, n):
    X = shift(mod(M), n)
    h = {k: v for k, v in homology_dims(X).items() if any(v)}
    assert h == ({-n: M.dims} if M.total_dim else {})


@settings(max_examples=20, deadline=None)
@given(bondal_reps(), st.integers(0, 10**6))
def test_cone_of_isomorphism_is_acyclic(M, seed):
    rng = random.Random(seed)
    f = identity(M) * Fraction(rng.choice([-3, -1, 2, 5]), rng.randint(1, 4))
    c = cone(ChainMap(mod(M), mod(M), {0: f})).complex
    assert is_acyclic(c)
    assert is_quasi_iso(shift_map(identity_map(mod(M)), 1))
    assert zero_map(mod(M), mod(M)).is_zero()
