"""Independent reference computations used to derive frozen test values.

Nothing here touches ``qhat.linalg``: ranks come from sympy, paths are
enumerated by brute force, and Hom spaces are set up as Kronecker systems.
"""

from __future__ import annotations

import itertools

import sympy

BONDAL_ARROWS = {"a1": (1, 2), "b1": (1, 2), "a2": (2, 3), "b2": (2, 3)}
BONDAL_ZERO = {("a1", "b2"), ("b1", "a2")}   # paths written in traversal order


def bondal_paths():
    """Every nonzero path of the Bondal algebra as (source, target, arrows)."""
    out = [(v, v, ()) for v in (1, 2, 3)]
    for a, (s, t) in BONDAL_ARROWS.items():
        out.append((s, t, (a,)))
    for a, b in itertools.product(BONDAL_ARROWS, repeat=2):
        if BONDAL_ARROWS[a][1] == BONDAL_ARROWS[b][0] and (a, b) not in BONDAL_ZERO:
            out.append((BONDAL_ARROWS[a][0], BONDAL_ARROWS[b][1], (a, b)))
    return out


def _mat(m, rows, cols):
    if rows == 0 or cols == 0:
        return sympy.zeros(rows, cols)
    return sympy.Matrix([[sympy.Rational(str(x)) for x in r] for r in m])


def rep_data(M):
    """(dims by vertex, sympy matrices by arrow) from a qhat Representation."""
    dims = dict(zip(M.algebra.vertices, M.dims))
    arrows = {a.id: (a.src, a.tgt) for a in M.algebra.quiver.arrows}
    mats = {a: _mat([list(r) for r in M.maps[a].rows], dims[t], dims[s]) for a, (s, t) in arrows.items()}
    return dims, arrows, mats


def hom_dim(M, N) -> int:
    """dim Hom(M, N) as the kernel of X -> (N_a X_s - X_t M_a)_a, vectorized column-major."""
    dm, arrows, am = rep_data(M)
    dn, _, an = rep_data(N)
    verts = list(dm)
    offs, k = {}, 0
    for v in verts:
        offs[v] = k
        k += dn[v] * dm[v]
    if k == 0:
        return 0
    blocks = []
    for a, (s, t) in arrows.items():
        rows = dn[t] * dm[s]
        if rows == 0:
            continue
        B = sympy.zeros(rows, k)
        # vec(N_a X_s) = (I ⊗ N_a) vec X_s ; vec(X_t M_a) = (M_a^T ⊗ I) vec X_t
        if dn[s] * dm[s]:
            B[:, offs[s]:offs[s] + dn[s] * dm[s]] += sympy.kronecker_product(sympy.eye(dm[s]), an[a])
        if dn[t] * dm[t]:
            B[:, offs[t]:offs[t] + dn[t] * dm[t]] -= sympy.kronecker_product(am[a].T, sympy.eye(dn[t]))
        blocks.append(B)
    if not blocks:
        return k
    return k - sympy.Matrix.vstack(*blocks).rank()


def homology_dims(X) -> dict[int, tuple[int, ...]]:
    """Vertexwise homology dimensions of a qhat BoundedComplex."""
    out = {}
    for n in X.degrees:
        dims = []
        for i, v in enumerate(X.algebra.vertices):
            dn = X.obj(n).dims[i]
            def rank(f):
                m = f[v]
                return sympy.Matrix([list(r) for r in m.rows]).rank() if m.nrows and m.ncols else 0
            out_rank = rank(X.d(n))
            in_rank = rank(X.d(n - 1))
            dims.append(dn - out_rank - in_rank)
        out[n] = tuple(dims)
    return out
