import pytest
from hypothesis import given, settings, strategies as st

import oracle
from qhat.pathalg import (
    AdmissibilityError,
    QuiverError,
    algebra_from_json,
    bondal_algebra,
    build_quiver,
    cartan_matrix,
    make_relation,
    quotient_basis,
)


@pytest.fixture(scope="module")
def alg():
    return bondal_algebra()


def test_dimension_matches_path_enumeration(alg):
    # [DERIVED] brute-force path count in tests/oracle.py
    assert alg.dim == len(oracle.bondal_paths()) == 9


def test_basis_paths_are_exactly_the_nonzero_paths(alg):
    ours = {(p.source, p.target, tuple(p.arrows)) for p in alg.basis}
    assert ours == set(oracle.bondal_paths())


def test_cartan_matrix(alg):
    C = cartan_matrix(alg)
    rows = [[C[i, j] for j in (1, 2, 3)] for i in (1, 2, 3)]
    assert rows == [[1, 2, 2], [0, 1, 2], [0, 0, 1]]
    assert C.total() == alg.dim


def test_relations_kill_the_listed_composites(alg):
    for r in alg.relations:
        assert len(r.terms) == 1
        assert r.source == 1 and r.target == 3


def test_duplicate_arrow_rejected():
    with pytest.raises(QuiverError):
        build_quiver([1, 2], [("a", 1, 2), ("a", 1, 2)])


def test_undeclared_endpoint_rejected():
    with pytest.raises(QuiverError):
        build_quiver([1], [("a", 1, 2)])


def test_nonparallel_relation_rejected():
    q = build_quiver([1, 2, 3], [("a", 1, 2), ("b", 2, 3), ("c", 1, 3)])
    with pytest.raises(QuiverError):
        make_relation(q, [(1, ["a", "b"]), (1, ["a"])])


def test_non_admissible_ideal_rejected():
    # a loop with no relation gives an infinite-dimensional algebra
    q = build_quiver([1], [("x", 1, 1)])
    with pytest.raises(AdmissibilityError):
        quotient_basis(q, [])


def test_commutative_square_relation():
    q = build_quiver([1, 2, 3, 4], [("a", 1, 2), ("b", 2, 4), ("c", 1, 3), ("d", 3, 4)])
    alg = quotient_basis(q, [make_relation(q, [(1, ["a", "b"]), (-1, ["c", "d"])])])
    # 4 idempotents, 4 arrows, one surviving length-two path
    assert alg.dim == 9
    assert cartan_matrix(alg)[1, 4] == 1


def test_json_round_trip(alg):
    again = algebra_from_json(alg.to_json())
    assert again.dim == alg.dim
    assert [tuple(p.arrows) for p in again.basis] == [tuple(p.arrows) for p in alg.basis]


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3))
def test_kronecker_chain_dimension(n, k):
    """A linear chain of ``k`` Kronecker-type steps with ``n`` arrows each and no relations."""
    verts = list(range(k + 1))
    arrows = [(f"x{i}_{j}", i, i + 1) for i in range(k) for j in range(n)]
    alg = quotient_basis(build_quiver(verts, arrows), [])
    # paths from i to j number n^(j-i)
    expected = sum(n ** (j - i) for i in verts for j in verts if j >= i)
    assert alg.dim == expected
