import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracle
from conftest import bondal_reps
from qhat.linalg import Mat
from qhat.repcore import (
    RepMorphism,
    Representation,
    RepresentationError,
    cokernel,
    direct_sum,
    hom_basis,
    hom_dim,
    identity,
    injective,
    injective_envelope,
    is_injective,
    is_isomorphic,
    is_projective,
    kernel,
    make_representation,
    projective,
    projective_cover,
    representation_from_json,
    simple,
    socle_dims,
    top_dims,
)

NAMES = ["I1", "I2", "I3", "P1", "P2", "P3", "S1", "S2", "S3"]

# [DERIVED] dim Hom(row, column), computed with oracle.hom_dim (sympy Kronecker system)
HOM_TABLE = {
    "I1": [1, 0, 0, 0, 0, 0, 1, 0, 0],
    "I2": [2, 1, 0, 0, 0, 0, 2, 0, 0],
    "I3": [2, 2, 1, 0, 0, 0, 2, 0, 0],
    "P1": [1, 2, 2, 1, 0, 0, 1, 0, 0],
    "P2": [0, 1, 2, 2, 1, 0, 0, 1, 0],
    "P3": [0, 0, 1, 2, 2, 1, 0, 0, 1],
    "S1": [1, 0, 0, 0, 0, 0, 1, 0, 0],
    "S2": [0, 1, 0, 0, 0, 0, 0, 1, 0],
    "S3": [0, 0, 1, 2, 2, 1, 0, 0, 1],
}


@pytest.fixture(scope="module")
def mods(alg):
    out = {}
    for v in (1, 2, 3):
        out[f"P{v}"] = projective(alg, v)
        out[f"I{v}"] = injective(alg, v)
        out[f"S{v}"] = simple(alg, v)
    return out


def test_standard_dimension_vectors(mods):
    assert mods["P1"].dims == (1, 2, 2)
    assert mods["P2"].dims == (0, 1, 2)
    assert mods["I3"].dims == (2, 2, 1)
    assert mods["I2"].dims == (2, 1, 0)
    assert mods["S2"].dims == (0, 1, 0)


def test_hom_table(mods):
    for a in NAMES:
        assert [hom_dim(mods[a], mods[b]) for b in NAMES] == HOM_TABLE[a], a


def test_projective_and_injective_flags(mods):
    for v in (1, 2, 3):
        assert is_projective(mods[f"P{v}"])
        assert is_injective(mods[f"I{v}"])
    # S3 = P3 and S1 = I1; S2 is neither
    assert is_projective(mods["S3"]) and is_injective(mods["S1"])
    assert not is_projective(mods["S2"]) and not is_injective(mods["S2"])


def test_top_and_socle(mods):
    assert top_dims(mods["P1"]) == (1, 0, 0)
    assert socle_dims(mods["P1"]) == (0, 0, 2)
    assert socle_dims(mods["I3"]) == (0, 0, 1)
    assert top_dims(mods["I3"]) == (2, 0, 0)


def test_relations_enforced(alg):
    # a1 = b2 = 1 on a line makes b2∘a1 nonzero
    with pytest.raises(RepresentationError):
        make_representation(alg, (1, 1, 1), {"a1": [[1]], "b2": [[1]]})


def test_shape_mismatch_rejected(alg):
    with pytest.raises(RepresentationError):
        make_representation(alg, (1, 1, 0), {"a1": [[1, 0]]})


def test_non_intertwining_morphism_rejected(mods):
    P2 = mods["P2"]
    bad = {v: Mat.identity(P2.dim(v)) for v in (1, 2, 3)}
    bad[3] = Mat.zeros(2, 2)
    with pytest.raises(Exception):
        RepMorphism(P2, P2, bad)


def test_projective_cover_of_simple(mods):
    c = projective_cover(mods["S2"])
    assert c.vertices == (2,)
    assert c.sum.rep.dims == mods["P2"].dims
    k = kernel(c.map).rep
    # the kernel is P3 ⊕ P3, the first syzygy
    assert k.dims == (0, 0, 2)


def test_injective_envelope_of_simple(mods):
    e = injective_envelope(mods["S2"])
    assert e.vertices == (2,)
    assert cokernel(e.map).rep.dims == (2, 0, 0)


def test_isomorphism_detects_swapped_arrows(alg):
    M = make_representation(alg, (1, 1, 0), {"a1": [[1]], "b1": [[0]]})
    N = make_representation(alg, (1, 1, 0), {"a1": [[0]], "b1": [[1]]})
    L = make_representation(alg, (1, 1, 0), {"a1": [[2]], "b1": [[0]]})
    assert not is_isomorphic(M, N)
    r = is_isomorphic(M, L)
    assert r and r.witness.is_iso()


def test_json_round_trip(mods, alg):
    for M in mods.values():
        again = representation_from_json(alg, M.to_json())
        assert again == M


def test_direct_sum_injections_and_projections(mods, alg):
    S = direct_sum([mods["P2"], mods["I2"]], alg)
    assert S.rep.dims == (2, 2, 2)
    assert (S.proj(0) @ S.inj(0)) == identity(mods["P2"])
    assert (S.proj(1) @ S.inj(0)).is_zero()


@settings(max_examples=40, deadline=None)
@given(bondal_reps(), bondal_reps())
def test_hom_dim_agrees_with_oracle(M, N):
    assert hom_dim(M, N) == oracle.hom_dim(M, N)


@settings(max_examples=30, deadline=None)
@given(bondal_reps(), st.integers(0, 10**6))
def test_hom_basis_members_intertwine(M, seed):
    H = hom_basis(M, M)
    rng = random.Random(seed)
    f = H.combination([Fraction(rng.randint(-3, 3)) for _ in H.basis])
    assert f.intertwines()
    assert identity(M).intertwines()


@settings(max_examples=30, deadline=None)
@given(bondal_reps(), st.integers(0, 10**6))
def test_base_change_gives_isomorphic_module(M, seed):
    """Conjugating by a random invertible matrix at each vertex preserves the iso class."""
    rng = random.Random(seed)
    g = {}
    for v, d in zip(M.algebra.vertices, M.dims):
        while True:
            m = Mat([[rng.randint(-2, 2) for _ in range(d)] for _ in range(d)], ncols=d)
            if d == 0 or m.is_invertible():
                break
        g[v] = m
    maps = {}
    for a in M.algebra.quiver.arrows:
        src, tgt = g[a.src], g[a.tgt]
        inv = src.inverse() if M.dim(a.src) else src
        maps[a.id] = tgt @ M.maps[a.id] @ inv
    N = Representation(M.algebra, M.dims, maps)
    r = is_isomorphic(M, N, seed=seed)
    assert r.isomorphic


@settings(max_examples=30, deadline=None)
@given(bondal_reps())
def test_cover_is_surjective_with_projective_source(M):
    c = projective_cover(M)
    assert is_projective(c.sum.rep)
    assert cokernel(c.map).rep.total_dim == 0
