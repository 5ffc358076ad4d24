"""Bounded complexes of representations and the tools to compute in D^b.

Conventions: cohomological grading, ``d: X^n -> X^{n+1}``.

* shift: ``X[n]^k = X^{k+n}`` with differential ``(-1)^n d``; chain maps
  shift without sign.
* cone of ``f: X -> Y``: ``C^n = X^{n+1} ⊕ Y^n`` with
  ``d(a, b) = (-d a, f a + d b)``.
* homotopy: ``f`` is null-homotopic when ``f = d h + h d``.
* Hom complex: ``D f = d_Y f - (-1)^n f d_X`` for ``f`` of degree ``n``.

Complexes of projectives (or injectives) are also kept in *structured* form
(:class:`SumComplex`): a list of vertices per degree and matrices of algebra
elements.  A morphism ``P_v -> P_w`` is an element ``p`` from ``w`` to ``v``
acting by ``q -> q∘p``; a morphism ``I_u -> I_w`` is the Nakayama image of the
same element, so both kinds compose by the same rule.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .linalg import LinearSystem, Mat, as_fraction, frac_str, rref, solve_sparse
from .pathalg import Element, PathAlgebra, Path
from .repcore import (
    DirectSum,
    RepMorphism,
    Representation,
    RepresentationError,
    block_morphism,
    cokernel,
    corestrict,
    direct_sum,
    identity,
    image,
    injective,
    injective_envelope,
    kernel,
    map_from_projective,
    map_to_injective,
    morphism_from_json,
    projective,
    projective_cover,
    quotient_representation,
    representation_from_json,
    zero_morphism,
    zero_representation,
)


class ComplexError(ValueError):
    pass


# ---------------------------------------------------------------------------
# complexes of representations


class BoundedComplex:
    """Objects in degrees ``bottom .. bottom + len(objects) - 1``.

    ``diffs[k]`` maps ``objects[k]`` to ``objects[k + 1]``.
    """

    def __init__(self, algebra: PathAlgebra, bottom: int, objects: Sequence[Representation],
                 diffs: Sequence[RepMorphism] | None = None, check: bool = True,
                 structure: "SumComplex | None" = None, name: str | None = None):
        self.algebra = algebra
        objects = list(objects)
        diffs = list(diffs) if diffs is not None else []
        if not diffs and len(objects) > 1:
            diffs = [zero_morphism(a, b) for a, b in zip(objects, objects[1:])]
        if len(diffs) != max(len(objects) - 1, 0):
            raise ComplexError("need one differential between consecutive objects")
        self.bottom = bottom
        self.objects = tuple(objects)
        self.diffs = tuple(diffs)
        self.structure = structure
        self.name = name
        if check:
            for k, d in enumerate(self.diffs):
                if d.source.dims != objects[k].dims or d.target.dims != objects[k + 1].dims:
                    raise ComplexError(f"differential {bottom + k} has wrong endpoints")
                if not d.intertwines():
                    raise ComplexError(f"differential {bottom + k} is not a module map")
            for k in range(len(self.diffs) - 1):
                if not (self.diffs[k + 1] @ self.diffs[k]).is_zero():
                    raise ComplexError(f"d∘d != 0 at degree {bottom + k}")

    @classmethod
    def module(cls, M: Representation, degree: int = 0) -> "BoundedComplex":
        return cls(M.algebra, degree, [M], name=M.name)

    @classmethod
    def zero(cls, algebra: PathAlgebra) -> "BoundedComplex":
        return cls(algebra, 0, [])

    def __repr__(self) -> str:
        tag = f"{self.name} " if self.name else ""
        terms = ", ".join(f"{n}:{self.obj(n).dims}" for n in self.degrees)
        return f"BoundedComplex({tag}{terms})"

    @property
    def top(self) -> int:
        return self.bottom + len(self.objects) - 1

    @property
    def degrees(self) -> range:
        return range(self.bottom, self.bottom + len(self.objects))

    def obj(self, n: int) -> Representation:
        if self.bottom <= n <= self.top:
            return self.objects[n - self.bottom]
        return zero_representation(self.algebra)

    def d(self, n: int) -> RepMorphism:
        if self.bottom <= n < self.top:
            return self.diffs[n - self.bottom]
        return zero_morphism(self.obj(n), self.obj(n + 1))

    def total_dims(self) -> dict[int, tuple[int, ...]]:
        return {n: self.obj(n).dims for n in self.degrees}

    def is_zero(self) -> bool:
        return all(M.is_zero() for M in self.objects)

    def trim(self) -> "BoundedComplex":
        nz = [n for n in self.degrees if not self.obj(n).is_zero()]
        if not nz:
            return BoundedComplex.zero(self.algebra)
        lo, hi = nz[0], nz[-1]
        if (lo, hi) == (self.bottom, self.top):
            return self
        return BoundedComplex(self.algebra, lo, [self.obj(n) for n in range(lo, hi + 1)],
                              [self.d(n) for n in range(lo, hi)], check=False,
                              structure=self.structure.trim() if self.structure else None, name=self.name)

    def widen(self, lo: int, hi: int) -> "BoundedComplex":
        """Same complex listed over ``lo .. hi`` (zero objects padded)."""
        lo, hi = min(lo, self.bottom), max(hi, self.top)
        return BoundedComplex(self.algebra, lo, [self.obj(n) for n in range(lo, hi + 1)],
                              [self.d(n) for n in range(lo, hi)], check=False,
                              structure=self.structure, name=self.name)

    def to_json(self) -> dict:
        return {"bottom": self.bottom, "objects": [M.to_json() for M in self.objects],
                "diffs": [d.to_json() for d in self.diffs]}


def complex_from_json(algebra: PathAlgebra, data: Mapping | str) -> BoundedComplex:
    if isinstance(data, str):
        data = json.loads(data)
    objs = [representation_from_json(algebra, o) for o in data["objects"]]
    diffs = [morphism_from_json(a, b, d) for a, b, d in zip(objs, objs[1:], data.get("diffs", []))]
    return BoundedComplex(algebra, int(data["bottom"]), objs, diffs or None)


class ChainMap:
    """Degreewise module maps commuting with the differentials."""

    def __init__(self, source: BoundedComplex, target: BoundedComplex,
                 comps: Mapping[int, RepMorphism] | None = None, check: bool = True):
        self.source = source
        self.target = target
        comps = dict(comps or {})
        full = {}
        for n in source.degrees:
            f = comps.get(n)
            X, Y = source.obj(n), target.obj(n)
            if f is None:
                f = zero_morphism(X, Y)
            elif f.source.dims != X.dims or f.target.dims != Y.dims:
                raise ComplexError(f"component {n} has wrong endpoints")
            full[n] = f
        self.comps = full
        if check:
            self.validate()

    def validate(self) -> None:
        for n, f in self.comps.items():
            if not f.intertwines():
                raise ComplexError(f"component {n} is not a module map")
        lo = min(self.source.bottom, self.target.bottom) - 1
        hi = max(self.source.top, self.target.top) + 1
        for n in range(lo, hi):
            lhs = self.target.d(n) @ self[n]
            rhs = self[n + 1] @ self.source.d(n)
            if lhs != rhs:
                raise ComplexError(f"square at degree {n} does not commute")

    def __getitem__(self, n: int) -> RepMorphism:
        f = self.comps.get(n)
        if f is None:
            return zero_morphism(self.source.obj(n), self.target.obj(n))
        return f

    def __repr__(self) -> str:
        return f"ChainMap({self.source!r} -> {self.target!r})"

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(other.source, self.target,
                        {n: self[n] @ other[n] for n in other.source.degrees}, check=False)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(self.source, self.target, {n: self[n] + other[n] for n in self.source.degrees}, check=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return self + other * -1

    def __neg__(self) -> "ChainMap":
        return self * -1

    def __mul__(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target, {n: f * c for n, f in self.comps.items()}, check=False)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.comps.values())

    def to_json(self) -> dict:
        return {str(n): f.to_json() for n, f in self.comps.items()}


def identity_map(X: BoundedComplex) -> ChainMap:
    return ChainMap(X, X, {n: identity(X.obj(n)) for n in X.degrees}, check=False)


def zero_map(X: BoundedComplex, Y: BoundedComplex) -> ChainMap:
    return ChainMap(X, Y, {}, check=False)


def chain_map_from_json(X: BoundedComplex, Y: BoundedComplex, data: Mapping) -> ChainMap:
    return ChainMap(X, Y, {int(n): morphism_from_json(X.obj(int(n)), Y.obj(int(n)), f) for n, f in data.items()})


@dataclass(frozen=True)
class Homotopy:
    """Components ``h^n: X^n -> Y^{n-1}`` with ``f = d h + h d``."""
    source: BoundedComplex
    target: BoundedComplex
    comps: Mapping[int, RepMorphism]

    def __getitem__(self, n: int) -> RepMorphism:
        h = self.comps.get(n)
        return h if h is not None else zero_morphism(self.source.obj(n), self.target.obj(n - 1))

    def boundary(self) -> ChainMap:
        """``d h + h d``."""
        X, Y = self.source, self.target
        return ChainMap(X, Y, {n: Y.d(n - 1) @ self[n] + self[n + 1] @ X.d(n) for n in X.degrees}, check=False)

    def certifies(self, f: ChainMap) -> bool:
        b = self.boundary()
        return all(f[n] == b[n] for n in f.source.degrees)


# ---------------------------------------------------------------------------
# shift, cone, homology


def shift(X: BoundedComplex, n: int) -> BoundedComplex:
    sign = -1 if n % 2 else 1
    st = shift_sum(X.structure, n) if X.structure is not None else None
    return BoundedComplex(X.algebra, X.bottom - n, X.objects, [d * sign for d in X.diffs],
                          check=False, structure=st, name=X.name)


def shift_map(f: ChainMap, n: int, source: BoundedComplex | None = None,
              target: BoundedComplex | None = None) -> ChainMap:
    X = source or shift(f.source, n)
    Y = target or shift(f.target, n)
    return ChainMap(X, Y, {k - n: g for k, g in f.comps.items()}, check=False)


@dataclass(frozen=True)
class Cone:
    complex: BoundedComplex
    inclusion: ChainMap   # target -> cone
    projection: ChainMap  # cone -> source[1]
    map: ChainMap


def cone(f: ChainMap) -> Cone:
    X, Y = f.source, f.target
    alg = X.algebra
    lo = min(X.bottom - 1, Y.bottom)
    hi = max(X.top - 1, Y.top)
    sums = {n: DirectSum([X.obj(n + 1), Y.obj(n)], alg) for n in range(lo, hi + 1)}
    diffs = []
    for n in range(lo, hi):
        blocks = {(0, 0): X.d(n + 1) * -1, (1, 0): f[n + 1], (1, 1): Y.d(n)}
        diffs.append(block_morphism(sums[n], sums[n + 1], blocks))
    C = BoundedComplex(alg, lo, [sums[n].rep for n in range(lo, hi + 1)], diffs, check=False)
    inc = ChainMap(Y, C, {n: sums[n].inj(1) for n in Y.degrees if lo <= n <= hi}, check=False)
    X1 = shift(X, 1)
    proj = ChainMap(C, X1, {n: sums[n].proj(0) for n in range(lo, hi + 1)}, check=False)
    return Cone(C, inc, proj, f)


def cone_map(c1: Cone, c2: Cone, u: ChainMap, w: ChainMap, h: Homotopy | None = None) -> ChainMap:
    """Map of cones ``(a, b) -> (u a, w b + h a)``.

    Requires ``w f1 - f2 u = d h + h d`` (``h`` omitted when the square commutes).
    """
    C1, C2 = c1.complex, c2.complex
    alg = C1.algebra
    comps = {}
    for n in C1.degrees:
        s1 = DirectSum([c1.map.source.obj(n + 1), c1.map.target.obj(n)], alg)
        s2 = DirectSum([c2.map.source.obj(n + 1), c2.map.target.obj(n)], alg)
        blocks = {(0, 0): u[n + 1], (1, 1): w[n]}
        if h is not None:
            blocks[(1, 0)] = h[n + 1]
        comps[n] = RepMorphism(C1.obj(n), C2.obj(n), block_morphism(s1, s2, blocks).maps, check=False)
    return ChainMap(C1, C2, comps)


def homology(X: BoundedComplex) -> dict[int, Representation]:
    out = {}
    for n in X.degrees:
        K = kernel(X.d(n))
        B = corestrict(X.d(n - 1), K)
        out[n] = cokernel(B).rep
    return out


def homology_dims(X: BoundedComplex) -> dict[int, tuple[int, ...]]:
    return {n: H.dims for n, H in homology(X).items() if not H.is_zero()}


def is_acyclic(X: BoundedComplex) -> bool:
    for n in X.degrees:
        for v in X.algebra.vertices:
            if X.obj(n).dim(v) != X.d(n)[v].rank() + X.d(n - 1)[v].rank():
                return False
    return True


def is_quasi_iso(f: ChainMap) -> bool:
    return is_acyclic(cone(f).complex)


# ---------------------------------------------------------------------------
# linear systems over complexes of representations


def _add_module_block(sys: LinearSystem, key, M: Representation, N: Representation) -> None:
    for v in M.algebra.vertices:
        sys.add_block((key, v), N.dim(v), M.dim(v))
    for a in M.algebra.quiver.arrows:
        sys.matrix_equation([(1, N.maps[a.id], (key, a.src), None), (-1, None, (key, a.tgt), M.maps[a.id])],
                            None, (N.dim(a.tgt), M.dim(a.src)))


def _extract_module(sys: LinearSystem, x, key, M: Representation, N: Representation) -> RepMorphism:
    return RepMorphism(M, N, {v: sys.extract(x, (key, v)) for v in M.algebra.vertices}, check=False)


def null_homotopic(f: ChainMap) -> Homotopy | None:
    """A homotopy ``h`` with ``f = d h + h d``, or ``None`` if none exists."""
    X, Y = f.source, f.target
    sys = LinearSystem()
    degs = list(X.degrees)
    for n in degs:
        _add_module_block(sys, ("h", n), X.obj(n), Y.obj(n - 1))
    for n in degs:
        for v in X.algebra.vertices:
            terms = []
            if n in X.degrees:
                terms.append((1, Y.d(n - 1)[v], (("h", n), v), None))
            if n + 1 in X.degrees:
                terms.append((1, None, (("h", n + 1), v), X.d(n)[v]))
            sys.matrix_equation(terms, f[n][v], (Y.obj(n).dim(v), X.obj(n).dim(v)))
    res = sys.solve()
    if res is None:
        return None
    x, _ = res
    comps = {n: _extract_module(sys, x, ("h", n), X.obj(n), Y.obj(n - 1)) for n in degs}
    h = Homotopy(X, Y, comps)
    assert h.certifies(f)
    return h


def homotopic(f: ChainMap, g: ChainMap) -> Homotopy | None:
    return null_homotopic(f - g)


def chain_map_basis(X: BoundedComplex, Y: BoundedComplex) -> list[ChainMap]:
    sys = LinearSystem()
    for n in X.degrees:
        _add_module_block(sys, ("f", n), X.obj(n), Y.obj(n))
    for n in range(X.bottom - 1, X.top + 1):
        for v in X.algebra.vertices:
            terms = []
            if n in X.degrees:
                terms.append((1, Y.d(n)[v], (("f", n), v), None))
            if n + 1 in X.degrees:
                terms.append((-1, None, (("f", n + 1), v), X.d(n)[v]))
            if terms:
                sys.matrix_equation(terms, None, (Y.obj(n + 1).dim(v), X.obj(n).dim(v)))
    if sys.nvars == 0:
        return []
    _, kern = sys.solve()
    return [ChainMap(X, Y, {n: _extract_module(sys, k, ("f", n), X.obj(n), Y.obj(n)) for n in X.degrees},
                     check=False) for k in kern]


@dataclass(frozen=True)
class InducedMap:
    """Solution of ``u g ~ t`` (extension) or ``g u ~ t`` (lift)."""
    map: ChainMap
    homotopy: Homotopy
    unique: bool


def induced_map(g: ChainMap, t: ChainMap, side: str = "extend") -> InducedMap | None:
    """Find a chain map ``u`` with ``u∘g ≃ t`` (``side="extend"``) or ``g∘u ≃ t`` (``"lift"``).

    Returns ``None`` when no such ``u`` exists.  ``unique`` records whether
    every solution of the homogeneous problem is null-homotopic, i.e. whether
    ``u`` is determined up to homotopy.
    """
    if side == "extend":
        U_src, U_tgt = g.target, t.target
    elif side == "lift":
        U_src, U_tgt = t.source, g.source
    else:
        raise ValueError(f"unknown side {side!r}")
    X, Z = t.source, t.target
    alg = X.algebra
    sys = LinearSystem()
    for n in U_src.degrees:
        _add_module_block(sys, ("u", n), U_src.obj(n), U_tgt.obj(n))
    for n in X.degrees:
        _add_module_block(sys, ("h", n), X.obj(n), Z.obj(n - 1))
    for n in range(U_src.bottom - 1, U_src.top + 1):
        for v in alg.vertices:
            terms = []
            if n in U_src.degrees:
                terms.append((1, U_tgt.d(n)[v], (("u", n), v), None))
            if n + 1 in U_src.degrees:
                terms.append((-1, None, (("u", n + 1), v), U_src.d(n)[v]))
            if terms:
                sys.matrix_equation(terms, None, (U_tgt.obj(n + 1).dim(v), U_src.obj(n).dim(v)))
    for n in X.degrees:
        for v in alg.vertices:
            terms = []
            if n in U_src.degrees:
                if side == "extend":
                    terms.append((1, None, (("u", n), v), g[n][v]))
                else:
                    terms.append((1, g[n][v], (("u", n), v), None))
            terms.append((-1, Z.d(n - 1)[v], (("h", n), v), None))
            if n + 1 in X.degrees:
                terms.append((-1, None, (("h", n + 1), v), X.d(n)[v]))
            sys.matrix_equation(terms, t[n][v], (Z.obj(n).dim(v), X.obj(n).dim(v)))
    res = sys.solve()
    if res is None:
        return None
    x, kern = res
    u = ChainMap(U_src, U_tgt, {n: _extract_module(sys, x, ("u", n), U_src.obj(n), U_tgt.obj(n))
                                for n in U_src.degrees})
    h = Homotopy(X, Z, {n: _extract_module(sys, x, ("h", n), X.obj(n), Z.obj(n - 1)) for n in X.degrees})
    unique = all(
        null_homotopic(ChainMap(U_src, U_tgt, {n: _extract_module(sys, k, ("u", n), U_src.obj(n), U_tgt.obj(n))
                                               for n in U_src.degrees}, check=False)) is not None
        for k in kern)
    return InducedMap(u, h, unique)


# ---------------------------------------------------------------------------
# algebra-element matrices


def _elem_add(x: dict, y: Mapping, c=1) -> None:
    for k, v in y.items():
        nv = x.get(k, 0) + c * v
        if nv:
            x[k] = nv
        else:
            x.pop(k, None)


class EMat:
    """Sparse matrix of algebra elements; entry ``(j, i)`` maps summand ``i`` to ``j``."""

    def __init__(self, nrows: int, ncols: int, entries: Mapping[tuple[int, int], Mapping] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries = {k: dict(v) for k, v in (entries or {}).items() if any(v.values())}
        for (j, i) in self.entries:
            if not (0 <= j < nrows and 0 <= i < ncols):
                raise ComplexError("entry outside the matrix")

    def __getitem__(self, ji) -> dict:
        return self.entries.get(ji, {})

    def __eq__(self, other) -> bool:
        return (isinstance(other, EMat) and (self.nrows, self.ncols) == (other.nrows, other.ncols)
                and self.entries == other.entries)

    def __repr__(self) -> str:
        return f"EMat({self.nrows}x{self.ncols}, {self.entries})"

    def __add__(self, other: "EMat") -> "EMat":
        out = {k: dict(v) for k, v in self.entries.items()}
        for k, v in other.entries.items():
            _elem_add(out.setdefault(k, {}), v)
        return EMat(self.nrows, self.ncols, out)

    def __mul__(self, c) -> "EMat":
        c = as_fraction(c)
        return EMat(self.nrows, self.ncols, {k: {b: c * x for b, x in v.items()} for k, v in self.entries.items()})

    __rmul__ = __mul__

    def __sub__(self, other: "EMat") -> "EMat":
        return self + other * -1

    def __neg__(self) -> "EMat":
        return self * -1

    def is_zero(self) -> bool:
        return not self.entries

    def drop(self, rows: Iterable[int] = (), cols: Iterable[int] = ()) -> "EMat":
        rows, cols = set(rows), set(cols)
        rmap = {j: n for n, j in enumerate(j for j in range(self.nrows) if j not in rows)}
        cmap = {i: n for n, i in enumerate(i for i in range(self.ncols) if i not in cols)}
        return EMat(len(rmap), len(cmap), {(rmap[j], cmap[i]): v for (j, i), v in self.entries.items()
                                           if j in rmap and i in cmap})

    def to_strings(self, alg: PathAlgebra) -> list[list[str]]:
        return [[alg.element_str(self[(j, i)]) for i in range(self.ncols)] for j in range(self.nrows)]

    @staticmethod
    def identity(n: int, verts: Sequence, alg: PathAlgebra) -> "EMat":
        return EMat(n, n, {(i, i): alg.idempotent(v) for i, v in enumerate(verts)})

    @staticmethod
    def zeros(m: int, n: int) -> "EMat":
        return EMat(m, n)

    @staticmethod
    def block_diag(mats: Sequence["EMat"]) -> "EMat":
        out, r0, c0 = {}, 0, 0
        for m in mats:
            for (j, i), v in m.entries.items():
                out[(r0 + j, c0 + i)] = v
            r0 += m.nrows
            c0 += m.ncols
        return EMat(r0, c0, out)

    @staticmethod
    def hstack(mats: Sequence["EMat"], nrows: int) -> "EMat":
        out, c0 = {}, 0
        for m in mats:
            for (j, i), v in m.entries.items():
                out[(j, c0 + i)] = v
            c0 += m.ncols
        return EMat(nrows, c0, out)

    @staticmethod
    def vstack(mats: Sequence["EMat"], ncols: int) -> "EMat":
        out, r0 = {}, 0
        for m in mats:
            for (j, i), v in m.entries.items():
                out[(r0 + j, i)] = v
            r0 += m.nrows
        return EMat(r0, ncols, out)


def ecompose(alg: PathAlgebra, B: EMat, A: EMat) -> EMat:
    """Morphism composite ``B∘A`` (``A`` first)."""
    if A.nrows != B.ncols:
        raise ComplexError("element matrices are not composable")
    by_row: dict[int, list] = {}
    for (j, i), x in A.entries.items():
        by_row.setdefault(j, []).append((i, x))
    out: dict[tuple[int, int], dict] = {}
    for (k, j), y in B.entries.items():
        for i, x in by_row.get(j, ()):
            _elem_add(out.setdefault((k, i), {}), alg.mul(x, y))
    return EMat(B.nrows, A.ncols, out)


_TERM = re.compile(r"\s*([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?([A-Za-z][A-Za-z0-9_]*)?\s*")


def parse_element(alg: PathAlgebra, text: str, src=None, tgt=None, aliases: Mapping[str, str] | None = None) -> Element:
    """Parse ``"a2a1 - 2*b2b1"``, ``"1"`` (identity at ``src``), ``"0"``.

    Paths are written by their labels (``a2a1`` is ``a2∘a1``); ``e<v>`` is
    an idempotent.  ``aliases`` substitutes whole labels first.
    """
    text = str(text).strip()
    if text in ("", "0"):
        return {}
    labels = {p.label(): i for i, p in enumerate(alg.basis)}
    out: dict = {}
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ComplexError(f"cannot parse element {text!r}")
        sign, coeff, lab = m.groups()
        pos = m.end()
        c = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            c = -c
        if lab is None:
            if coeff is None:
                raise ComplexError(f"cannot parse element {text!r}")
            if src is None or src != tgt:
                raise ComplexError("a scalar entry needs equal source and target vertices")
            _elem_add(out, alg.idempotent(src), c)
            continue
        if aliases and lab in aliases:
            _elem_add(out, parse_element(alg, aliases[lab], src, tgt), c)
            continue
        if lab not in labels:
            raise ComplexError(f"unknown path label {lab!r}")
        _elem_add(out, {labels[lab]: Fraction(1)}, c)
    if src is not None and out:
        ends = alg.endpoints(out)
        if ends != (tgt, src):
            raise ComplexError(f"element {text!r} does not run from {tgt} to {src}")
    return out


def _invert_local(alg: PathAlgebra, u: Mapping, v) -> dict:
    """Inverse of ``u = c e_v + r`` in ``e_v A e_v`` (``r`` nilpotent)."""
    ev = alg.idempotent(v)
    (iv,) = ev
    c = u.get(iv, 0)
    if not c:
        raise ComplexError("element is not invertible")
    r = dict(u)
    r.pop(iv)
    t = {k: -x / c for k, x in r.items()}
    out, power = dict(ev), dict(ev)
    for _ in range(alg.nilpotency_bound):
        power = alg.mul(power, t)
        if not power:
            break
        _elem_add(out, power)
    return {k: x / c for k, x in out.items()}


# ---------------------------------------------------------------------------
# structured complexes of projectives / injectives


@dataclass(frozen=True)
class SumComplex:
    """Complex whose degree-``n`` term is ``⊕ P_v`` (or ``⊕ I_v``) over ``terms[n]``."""
    algebra: PathAlgebra
    kind: str  # "proj" or "inj"
    bottom: int
    terms: tuple[tuple, ...]
    diffs: tuple[EMat, ...]

    def __post_init__(self):
        if self.kind not in ("proj", "inj"):
            raise ComplexError("kind must be 'proj' or 'inj'")
        if len(self.diffs) != max(len(self.terms) - 1, 0):
            raise ComplexError("need one differential between consecutive terms")
        for k, d in enumerate(self.diffs):
            if (d.nrows, d.ncols) != (len(self.terms[k + 1]), len(self.terms[k])):
                raise ComplexError(f"differential {self.bottom + k} has the wrong size")
            for (j, i), x in d.entries.items():
                if self.algebra.endpoints(x) != (self.terms[k + 1][j], self.terms[k][i]):
                    raise ComplexError(f"entry ({j},{i}) of differential {self.bottom + k} has wrong endpoints")
        for k in range(len(self.diffs) - 1):
            if not ecompose(self.algebra, self.diffs[k + 1], self.diffs[k]).is_zero():
                raise ComplexError(f"d∘d != 0 at degree {self.bottom + k}")

    @property
    def top(self) -> int:
        return self.bottom + len(self.terms) - 1

    @property
    def degrees(self) -> range:
        return range(self.bottom, self.bottom + len(self.terms))

    def term(self, n: int) -> tuple:
        return self.terms[n - self.bottom] if self.bottom <= n <= self.top else ()

    def d(self, n: int) -> EMat:
        if self.bottom <= n < self.top:
            return self.diffs[n - self.bottom]
        return EMat(len(self.term(n + 1)), len(self.term(n)))

    def __repr__(self) -> str:
        letter = "P" if self.kind == "proj" else "I"
        body = ", ".join(f"{n}:" + "+".join(f"{letter}{v}" for v in self.term(n)) for n in self.degrees)
        return f"SumComplex({body})"

    def is_zero(self) -> bool:
        return not any(self.terms)

    def trim(self) -> "SumComplex":
        nz = [n for n in self.degrees if self.term(n)]
        if not nz:
            return SumComplex(self.algebra, self.kind, 0, (), ())
        lo, hi = nz[0], nz[-1]
        return SumComplex(self.algebra, self.kind, lo, tuple(self.term(n) for n in range(lo, hi + 1)),
                          tuple(self.d(n) for n in range(lo, hi)))

    def summand_signature(self) -> dict[int, tuple]:
        return {n: tuple(sorted(self.term(n), key=self.algebra.quiver.vertex_index.get))
                for n in self.degrees if self.term(n)}

    def is_minimal(self) -> bool:
        return all(self.algebra.is_radical(x) for d in self.diffs for x in d.entries.values())

    def realize(self, name: str | None = None) -> BoundedComplex:
        sums = [term_sum(self.algebra, self.kind, t) for t in self.terms]
        diffs = [realize_emat(self.algebra, self.kind, sums[k], sums[k + 1], self.terms[k], self.terms[k + 1], d)
                 for k, d in enumerate(self.diffs)]
        return BoundedComplex(self.algebra, self.bottom, [s.rep for s in sums], diffs, check=False,
                              structure=self, name=name)

    def to_json(self) -> dict:
        return {"kind": self.kind, "bottom": self.bottom, "terms": [list(t) for t in self.terms],
                "diffs": [d.to_strings(self.algebra) for d in self.diffs]}


def sum_complex_from_json(alg: PathAlgebra, data: Mapping, aliases: Mapping | None = None) -> SumComplex:
    terms = tuple(tuple(t) for t in data["terms"])
    bottom = int(data["bottom"])
    diffs = []
    for k, rows in enumerate(data.get("diffs", [])):
        diffs.append(emat_from_strings(alg, rows, terms[k], terms[k + 1], aliases))
    return SumComplex(alg, data["kind"], bottom, terms, tuple(diffs))


def emat_from_strings(alg: PathAlgebra, rows: Sequence[Sequence[str]], src: Sequence, tgt: Sequence,
                      aliases: Mapping | None = None) -> EMat:
    if len(rows) != len(tgt) or any(len(r) != len(src) for r in rows):
        raise ComplexError("element matrix has the wrong shape")
    ent = {}
    for j, row in enumerate(rows):
        for i, s in enumerate(row):
            x = parse_element(alg, s, src[i], tgt[j], aliases)
            if x:
                ent[(j, i)] = x
    return EMat(len(tgt), len(src), ent)


_STD_CACHE: dict = {}


def standard_module(alg: PathAlgebra, kind: str, v) -> Representation:
    key = (id(alg), kind, v)
    M = _STD_CACHE.get(key)
    if M is None or M.algebra is not alg:
        M = _STD_CACHE[key] = projective(alg, v) if kind == "proj" else injective(alg, v)
    return M


def term_sum(alg: PathAlgebra, kind: str, verts: Sequence) -> DirectSum:
    return DirectSum([standard_module(alg, kind, v) for v in verts], alg)


def element_vector(alg: PathAlgebra, x: Mapping, src, tgt) -> list[Fraction]:
    """Coefficients of ``x`` over the basis paths from ``src`` to ``tgt``."""
    return [x.get(i, Fraction(0)) for i in alg.basis_between(src, tgt)]


def realize_element(alg: PathAlgebra, kind: str, v, w, x: Mapping) -> RepMorphism:
    """``P_v -> P_w`` (or ``I_v -> I_w``) given by an element from ``w`` to ``v``."""
    if kind == "proj":
        f = map_from_projective(standard_module(alg, "proj", w), v, element_vector(alg, x, w, v))
        return RepMorphism(standard_module(alg, "proj", v), f.target, f.maps, check=False)
    f = map_to_injective(standard_module(alg, "inj", v), w, element_vector(alg, x, w, v))
    return RepMorphism(f.source, standard_module(alg, "inj", w), f.maps, check=False)


def realize_emat(alg: PathAlgebra, kind: str, src: DirectSum, tgt: DirectSum,
                 sv: Sequence, tv: Sequence, D: EMat) -> RepMorphism:
    blocks = {(j, i): realize_element(alg, kind, sv[i], tv[j], x) for (j, i), x in D.entries.items()}
    return block_morphism(src, tgt, blocks)


def structure_of_morphism(alg: PathAlgebra, kind: str, f: RepMorphism, sv: Sequence, tv: Sequence) -> EMat:
    """Read the element matrix off a morphism between realized sums."""
    src, tgt = term_sum(alg, kind, sv), term_sum(alg, kind, tv)
    ent = {}
    for i, v in enumerate(sv):
        for j, w in enumerate(tv):
            if kind == "proj":
                # image of e_v, inside P_w at vertex v
                col = src.offsets[v][i]
                vec = [f.maps[v][tgt.offsets[v][j] + r, col] for r in range(tgt.summands[j].dim(v))]
                idx = alg.basis_between(w, v)
            else:
                # functional picked out by e_w in I_w at vertex w
                row = tgt.offsets[w][j]
                vec = [f.maps[w][row, src.offsets[w][i] + r] for r in range(src.summands[i].dim(w))]
                idx = alg.basis_between(w, v)
            x = {b: c for b, c in zip(idx, vec) if c}
            if x:
                ent[(j, i)] = x
    return EMat(len(tv), len(sv), ent)


def shift_sum(C: SumComplex, n: int) -> SumComplex:
    sign = -1 if n % 2 else 1
    return SumComplex(C.algebra, C.kind, C.bottom - n, C.terms, tuple(d * sign for d in C.diffs))


def nakayama(C: SumComplex) -> SumComplex:
    """``P_v -> I_v`` with the same element data."""
    if C.kind != "proj":
        raise ComplexError("Nakayama functor expects a complex of projectives")
    return SumComplex(C.algebra, "inj", C.bottom, C.terms, C.diffs)


def nakayama_inverse(C: SumComplex) -> SumComplex:
    if C.kind != "inj":
        raise ComplexError("inverse Nakayama functor expects a complex of injectives")
    return SumComplex(C.algebra, "proj", C.bottom, C.terms, C.diffs)


def sum_of_complexes(parts: Sequence[SumComplex], alg: PathAlgebra, kind: str = "proj") -> SumComplex:
    parts = [p for p in parts if not p.is_zero()]
    if not parts:
        return SumComplex(alg, kind, 0, (), ())
    lo = min(p.bottom for p in parts)
    hi = max(p.top for p in parts)
    terms = tuple(tuple(v for p in parts for v in p.term(n)) for n in range(lo, hi + 1))
    diffs = tuple(EMat.block_diag([p.d(n) for p in parts]) for n in range(lo, hi))
    return SumComplex(alg, parts[0].kind, lo, terms, diffs)


@dataclass(frozen=True)
class SumMap:
    """Chain map between structured complexes of the same kind."""
    source: SumComplex
    target: SumComplex
    comps: Mapping[int, EMat]

    def __getitem__(self, n: int) -> EMat:
        m = self.comps.get(n)
        return m if m is not None else EMat(len(self.target.term(n)), len(self.source.term(n)))

    def degrees(self) -> range:
        return self.source.degrees

    def is_chain_map(self) -> bool:
        alg = self.source.algebra
        for n in range(self.source.bottom - 1, self.source.top + 1):
            lhs = ecompose(alg, self.target.d(n), self[n])
            rhs = ecompose(alg, self[n + 1], self.source.d(n))
            if lhs != rhs:
                return False
        return True

    def then(self, other: "SumMap") -> "SumMap":
        """``other∘self``."""
        alg = self.source.algebra
        return SumMap(self.source, other.target, {n: ecompose(alg, other[n], self[n]) for n in self.source.degrees})

    def __add__(self, other: "SumMap") -> "SumMap":
        return SumMap(self.source, self.target, {n: self[n] + other[n] for n in self.source.degrees})

    def __mul__(self, c) -> "SumMap":
        return SumMap(self.source, self.target, {n: self[n] * c for n in self.source.degrees})

    __rmul__ = __mul__

    def __sub__(self, other: "SumMap") -> "SumMap":
        return self + other * -1

    def is_zero(self) -> bool:
        return all(self[n].is_zero() for n in self.source.degrees)

    def realize(self, source: BoundedComplex | None = None, target: BoundedComplex | None = None) -> ChainMap:
        X = source or self.source.realize()
        Y = target or self.target.realize()
        alg = self.source.algebra
        kind = self.source.kind
        comps = {}
        for n in self.source.degrees:
            sv, tv = self.source.term(n), self.target.term(n)
            f = realize_emat(alg, kind, term_sum(alg, kind, sv), term_sum(alg, kind, tv), sv, tv, self[n])
            comps[n] = RepMorphism(X.obj(n), Y.obj(n), f.maps, check=False)
        return ChainMap(X, Y, comps, check=False)

    def to_json(self) -> dict:
        return {str(n): self[n].to_strings(self.source.algebra) for n in self.source.degrees}


def sum_identity(C: SumComplex) -> SumMap:
    return SumMap(C, C, {n: EMat.identity(len(C.term(n)), C.term(n), C.algebra) for n in C.degrees})


def sum_map_from_json(src: SumComplex, tgt: SumComplex, data: Mapping, aliases: Mapping | None = None) -> SumMap:
    comps = {}
    for n, rows in data.items():
        n = int(n)
        comps[n] = emat_from_strings(src.algebra, rows, src.term(n), tgt.term(n), aliases)
    return SumMap(src, tgt, comps)


def structure_of_chain_map(f: ChainMap, source: SumComplex | None = None, target: SumComplex | None = None) -> SumMap:
    S = source or f.source.structure
    T = target or f.target.structure
    if S is None or T is None or S.kind != T.kind:
        raise ComplexError("chain map endpoints carry no common structure")
    comps = {n: structure_of_morphism(S.algebra, S.kind, f[n], S.term(n), T.term(n)) for n in S.degrees}
    return SumMap(S, T, comps)


def nakayama_map(f: SumMap) -> SumMap:
    return SumMap(nakayama(f.source), nakayama(f.target), f.comps)


def nakayama_inverse_map(f: SumMap) -> SumMap:
    return SumMap(nakayama_inverse(f.source), nakayama_inverse(f.target), f.comps)


def shift_sum_map(f: SumMap, n: int) -> SumMap:
    return SumMap(shift_sum(f.source, n), shift_sum(f.target, n), {k - n: m for k, m in f.comps.items()})


# -- linear algebra on structured maps ---------------------------------------


class _ElemVars:
    """Unknown element matrices, one coefficient per basis path of each entry."""

    def __init__(self, alg: PathAlgebra):
        self.alg = alg
        self.n = 0
        self.slots: dict = {}

    def add(self, key, sv: Sequence, tv: Sequence) -> None:
        for i, v in enumerate(sv):
            for j, w in enumerate(tv):
                for b in self.alg.basis_between(w, v):
                    self.slots[(key, j, i, b)] = self.n
                    self.n += 1

    def emat(self, key, x: Sequence, nrows: int, ncols: int) -> EMat:
        ent: dict = {}
        for (k, j, i, b), idx in self.slots.items():
            if k == key and x[idx]:
                ent.setdefault((j, i), {})[b] = x[idx]
        return EMat(nrows, ncols, ent)

    def linear_terms(self, key, L: EMat | None, R: EMat | None, rows: int, cols: int):
        """Expand ``L∘X∘R`` (``R`` first) as ``{(row, col, basis): {var: coeff}}``."""
        alg = self.alg
        out: dict = {}
        for (k, j, i, b), idx in self.slots.items():
            if k != key:
                continue
            lefts = [(j, None)] if L is None else [(r, y) for (r, jj), y in L.entries.items() if jj == j]
            rights = [(i, None)] if R is None else [(c, y) for (ii, c), y in R.entries.items() if ii == i]
            for r, ly in lefts:
                for c, ry in rights:
                    x = {b: Fraction(1)}
                    if ry is not None:
                        x = alg.mul(ry, x)
                    if ly is not None:
                        x = alg.mul(x, ly)
                    for bb, coeff in x.items():
                        row = out.setdefault((r, c, bb), {})
                        row[idx] = row.get(idx, 0) + coeff
        return out


def _add_elem_equations(sys_rows: list, rhs: list, contributions: Sequence[tuple], const: EMat | None) -> None:
    acc: dict = {}
    for sign, terms in contributions:
        for key, row in terms.items():
            tgt = acc.setdefault(key, {})
            for v, c in row.items():
                tgt[v] = tgt.get(v, 0) + sign * c
    keys = set(acc)
    if const is not None:
        for (j, i), x in const.entries.items():
            for b in x:
                keys.add((j, i, b))
    for key in keys:
        row = {v: c for v, c in acc.get(key, {}).items() if c}
        c = const[(key[0], key[1])].get(key[2], 0) if const is not None else 0
        if row or c:
            sys_rows.append(row)
            rhs.append(c)


def sum_chain_map_basis(X: SumComplex, Y: SumComplex) -> list[SumMap]:
    alg = X.algebra
    ev = _ElemVars(alg)
    for n in X.degrees:
        ev.add(n, X.term(n), Y.term(n))
    rows, rhs = [], []
    for n in range(X.bottom - 1, X.top + 1):
        contrib = []
        if n in X.degrees:
            contrib.append((1, ev.linear_terms(n, Y.d(n), None, 0, 0)))
        if n + 1 in X.degrees:
            contrib.append((-1, ev.linear_terms(n + 1, None, X.d(n), 0, 0)))
        _add_elem_equations(rows, rhs, contrib, None)
    if ev.n == 0:
        return []
    _, kern = solve_sparse(rows, rhs, ev.n)
    return [SumMap(X, Y, {n: ev.emat(n, k, len(Y.term(n)), len(X.term(n))) for n in X.degrees}) for k in kern]


def sum_null_homotopy(f: SumMap) -> dict[int, EMat] | None:
    """Structured ``h`` with ``f = d h + h d``, or ``None``."""
    X, Y = f.source, f.target
    alg = X.algebra
    ev = _ElemVars(alg)
    for n in X.degrees:
        ev.add(n, X.term(n), Y.term(n - 1))
    rows, rhs = [], []
    for n in X.degrees:
        contrib = [(1, ev.linear_terms(n, Y.d(n - 1), None, 0, 0))]
        if n + 1 in X.degrees:
            contrib.append((1, ev.linear_terms(n + 1, None, X.d(n), 0, 0)))
        _add_elem_equations(rows, rhs, contrib, f[n])
    res = solve_sparse(rows, rhs, ev.n)
    if res is None:
        return None
    x, _ = res
    h = {n: ev.emat(n, x, len(Y.term(n - 1)), len(X.term(n))) for n in X.degrees}
    # verify exactly
    for n in X.degrees:
        b = ecompose(alg, Y.d(n - 1), h[n])
        if n + 1 in h:
            b = b + ecompose(alg, h[n + 1], X.d(n))
        if b != f[n]:
            raise AssertionError("structured homotopy failed verification")
    return h


def sum_homotopic(f: SumMap, g: SumMap) -> bool:
    return sum_null_homotopy(f - g) is not None


def is_sum_iso(f: SumMap) -> bool:
    """Componentwise invertibility of a map between structured complexes."""
    alg = f.source.algebra
    for n in f.source.degrees:
        sv, tv = f.source.term(n), f.target.term(n)
        if len(sv) != len(tv):
            return False
        if not sv:
            continue
        if not realize_emat(alg, f.source.kind, term_sum(alg, f.source.kind, sv),
                            term_sum(alg, f.source.kind, tv), sv, tv, f[n]).is_iso():
            return False
    return True


# ---------------------------------------------------------------------------
# replacements


@dataclass(frozen=True)
class Replacement:
    structured: SumComplex
    complex: BoundedComplex   # realized ``structured``
    quasi_iso: ChainMap       # proj: complex -> X;  inj: X -> complex


def _is_zero_rep(M: Representation) -> bool:
    return M.total_dim == 0


def projective_replacement(X: BoundedComplex, max_steps: int | None = None) -> Replacement:
    """Degreewise projective complex with a quasi-isomorphism onto ``X``.

    Built top-down: in degree ``k`` cover
    ``{(x, p) in X^k ⊕ P^{k+1} : d x = φ p, d p = 0}`` by its projective cover.
    """
    alg = X.algebra
    if X.is_zero():
        Z = SumComplex(alg, "proj", 0, (), ())
        R = Z.realize()
        return Replacement(Z, R, zero_map(R, X))
    if max_steps is None:
        max_steps = len(X.objects) + len(alg.vertices) + 3
    X = X.trim()
    terms: dict[int, tuple] = {}
    diffs: dict[int, EMat] = {}
    phis: dict[int, RepMorphism] = {}
    sums: dict[int, DirectSum] = {}
    k = X.top
    while True:
        Xk = X.obj(k)
        Pn = sums.get(k + 1)
        Pn_rep = Pn.rep if Pn is not None else zero_representation(alg)
        Pnn_rep = sums[k + 2].rep if (k + 2) in sums else zero_representation(alg)
        src = DirectSum([Xk, Pn_rep], alg)
        tgt = DirectSum([X.obj(k + 1), Pnn_rep], alg)
        blocks = {(0, 0): X.d(k)}
        if Pn is not None:
            blocks[(0, 1)] = RepMorphism(Pn_rep, X.obj(k + 1), phis[k + 1].maps, check=False) * -1
            if (k + 2) in sums:
                dP = realize_emat(alg, "proj", Pn, sums[k + 2], terms[k + 1], terms[k + 2], diffs[k + 1])
                blocks[(1, 1)] = dP
        K = kernel(block_morphism(src, tgt, blocks))
        if _is_zero_rep(K.rep):
            if k < X.bottom:
                break
            terms[k] = ()
            sums[k] = DirectSum([], alg)
            phis[k] = zero_morphism(sums[k].rep, Xk)
            k -= 1
            continue
        if k < X.bottom - max_steps:
            raise ComplexError("projective resolution did not terminate; global dimension too large?")
        cov = projective_cover(K.rep)
        g = K.map @ RepMorphism(cov.sum.rep, K.rep, cov.map.maps, check=False)
        terms[k] = cov.vertices
        sums[k] = cov.sum
        phis[k] = src.proj(0) @ g
        if Pn is not None:
            dmor = src.proj(1) @ g
            diffs[k] = structure_of_morphism(alg, "proj", RepMorphism(cov.sum.rep, Pn.rep, dmor.maps, check=False),
                                             cov.vertices, terms[k + 1])
        k -= 1
    degs = sorted(terms)
    lo, hi = degs[0], degs[-1]
    C = SumComplex(alg, "proj", lo, tuple(terms[n] for n in range(lo, hi + 1)),
                   tuple(diffs.get(n, EMat(len(terms[n + 1]), len(terms[n]))) for n in range(lo, hi)))
    R = C.realize()
    q = ChainMap(R, X, {n: RepMorphism(R.obj(n), X.obj(n), phis[n].maps, check=False) for n in R.degrees}, check=False)
    trimmed = C.trim()
    if trimmed.bottom != C.bottom or trimmed.top != C.top:
        R2 = trimmed.realize()
        q = ChainMap(R2, X, {n: RepMorphism(R2.obj(n), X.obj(n), q[n].maps, check=False) for n in R2.degrees},
                     check=False)
        C, R = trimmed, R2
    return Replacement(C, R, q)


def injective_replacement(X: BoundedComplex, max_steps: int | None = None) -> Replacement:
    """Degreewise injective complex with a quasi-isomorphism from ``X``.

    Built bottom-up: in degree ``k`` embed
    ``(X^k ⊕ I^{k-1}) / {(d x, -ψ x) + (0, d i)}`` into its injective envelope.
    """
    alg = X.algebra
    if X.is_zero():
        Z = SumComplex(alg, "inj", 0, (), ())
        R = Z.realize()
        return Replacement(Z, R, zero_map(X, R))
    if max_steps is None:
        max_steps = len(X.objects) + len(alg.vertices) + 3
    X = X.trim()
    terms: dict[int, tuple] = {}
    diffs: dict[int, EMat] = {}
    psis: dict[int, RepMorphism] = {}
    sums: dict[int, DirectSum] = {}
    k = X.bottom
    while True:
        Xk = X.obj(k)
        Ip = sums.get(k - 1)
        Ip_rep = Ip.rep if Ip is not None else zero_representation(alg)
        Ipp_rep = sums[k - 2].rep if (k - 2) in sums else zero_representation(alg)
        src = DirectSum([X.obj(k - 1), Ipp_rep], alg)
        tgt = DirectSum([Xk, Ip_rep], alg)
        blocks = {(0, 0): X.d(k - 1)}
        if Ip is not None:
            blocks[(1, 0)] = RepMorphism(X.obj(k - 1), Ip_rep, psis[k - 1].maps, check=False) * -1
            if (k - 2) in sums:
                blocks[(1, 1)] = realize_emat(alg, "inj", sums[k - 2], Ip, terms[k - 2], terms[k - 1], diffs[k - 2])
        Q = cokernel(block_morphism(src, tgt, blocks))
        if _is_zero_rep(Q.rep):
            if k > X.top:
                break
            terms[k] = ()
            sums[k] = DirectSum([], alg)
            psis[k] = zero_morphism(Xk, sums[k].rep)
            k += 1
            continue
        if k > X.top + max_steps:
            raise ComplexError("injective resolution did not terminate; global dimension too large?")
        env = injective_envelope(Q.rep)
        g = RepMorphism(Q.rep, env.sum.rep, env.map.maps, check=False) @ Q.map
        terms[k] = env.vertices
        sums[k] = env.sum
        psis[k] = g @ tgt.inj(0)
        if Ip is not None:
            dmor = g @ tgt.inj(1)
            diffs[k - 1] = structure_of_morphism(alg, "inj", RepMorphism(Ip.rep, env.sum.rep, dmor.maps, check=False),
                                                 terms[k - 1], env.vertices)
        k += 1
    degs = sorted(terms)
    lo, hi = degs[0], degs[-1]
    C = SumComplex(alg, "inj", lo, tuple(terms[n] for n in range(lo, hi + 1)),
                   tuple(diffs.get(n, EMat(len(terms[n + 1]), len(terms[n]))) for n in range(lo, hi)))
    R = C.realize()
    q = ChainMap(X, R, {n: RepMorphism(X.obj(n), R.obj(n), psis[n].maps, check=False) for n in X.degrees if n in psis},
                 check=False)
    trimmed = C.trim()
    if trimmed.bottom != C.bottom or trimmed.top != C.top:
        R2 = trimmed.realize()
        q = ChainMap(X, R2, {n: RepMorphism(X.obj(n), R2.obj(n), q[n].maps, check=False) for n in X.degrees},
                     check=False)
        C, R = trimmed, R2
    return Replacement(C, R, q)


def structured_form(X: BoundedComplex, kind: str = "proj") -> SumComplex:
    """Recover structure of a degreewise projective (injective) complex.

    Raises :class:`ComplexError` when some term is not projective (injective).
    """
    if X.structure is not None and X.structure.kind == kind:
        return X.structure
    alg = X.algebra
    terms, isos = {}, {}
    for n in X.degrees:
        M = X.obj(n)
        if kind == "proj":
            c = projective_cover(M)
            if c.sum.rep.dims != M.dims:
                raise ComplexError(f"degree {n} is not projective")
            iso = RepMorphism(c.sum.rep, M, c.map.maps, check=False)  # sum -> M
        else:
            c = injective_envelope(M)
            if c.sum.rep.dims != M.dims:
                raise ComplexError(f"degree {n} is not injective")
            iso = RepMorphism(c.sum.rep, M, c.map.inverse().maps, check=False)
        terms[n] = c.vertices
        isos[n] = iso
    diffs = []
    for n in range(X.bottom, X.top):
        m = isos[n + 1].inverse() @ X.d(n) @ isos[n]
        diffs.append(structure_of_morphism(alg, kind, m, terms[n], terms[n + 1]))
    return SumComplex(alg, kind, X.bottom, tuple(terms[n] for n in X.degrees), tuple(diffs))


# ---------------------------------------------------------------------------
# minimization


@dataclass(frozen=True)
class Minimization:
    minimal: SumComplex
    to_min: SumMap     # original -> minimal
    from_min: SumMap   # minimal -> original


def _find_unit(C: SumComplex):
    alg = C.algebra
    for n in C.degrees:
        d = C.d(n)
        for (j, i) in sorted(d.entries):
            x = d.entries[(j, i)]
            v = C.term(n)[i]
            if C.term(n + 1)[j] == v and not alg.is_radical(x):
                return n, j, i
    return None


def minimize(X) -> Minimization:
    """Strip contractible summands ``P --u--> P`` (``u`` invertible) one by one.

    Accepts a :class:`SumComplex` or a degreewise projective/injective
    :class:`BoundedComplex`.
    """
    if isinstance(X, BoundedComplex):
        try:
            C = structured_form(X, "proj")
        except ComplexError:
            C = structured_form(X, "inj")
    else:
        C = X
    alg = C.algebra
    orig = C
    f_total = sum_identity(C)
    g_total = sum_identity(C)
    while True:
        hit = _find_unit(C)
        if hit is None:
            break
        k, j0, i0 = hit
        d = C.d(k)
        alpha = d[(j0, i0)]
        ainv = _invert_local(alg, alpha, C.term(k)[i0])
        keep_i = [i for i in range(len(C.term(k))) if i != i0]
        keep_j = [j for j in range(len(C.term(k + 1))) if j != j0]
        beta = d.drop(rows=keep_j, cols=[i0])            # 1 x (n-1): B -> A'
        gamma = d.drop(rows=[j0], cols=keep_i)           # (m-1) x 1: A -> C
        delta = d.drop(rows=[j0], cols=[i0])
        A_inv = EMat(1, 1, {(0, 0): ainv})
        ga = ecompose(alg, gamma, A_inv)                 # γ α^{-1}
        new_d = delta - ecompose(alg, ga, beta)
        terms = list(C.terms)
        t_k = tuple(v for i, v in enumerate(C.term(k)) if i != i0)
        t_k1 = tuple(v for j, v in enumerate(C.term(k + 1)) if j != j0)
        terms[k - C.bottom] = t_k
        terms[k + 1 - C.bottom] = t_k1
        diffs = list(C.diffs)
        diffs[k - C.bottom] = new_d
        if k - 1 >= C.bottom:
            diffs[k - 1 - C.bottom] = C.d(k - 1).drop(rows=[i0])
        if k + 1 < C.top:
            diffs[k + 1 - C.bottom] = C.d(k + 1).drop(cols=[j0])
        D = SumComplex(alg, C.kind, C.bottom, tuple(terms), tuple(diffs))
        # f: C -> D, g: D -> C
        f_comps, g_comps = {}, {}
        for n in C.degrees:
            if n == k:
                f_comps[n] = EMat.identity(len(C.term(n)), C.term(n), alg).drop(rows=[i0])
                inc = EMat.identity(len(C.term(n)), C.term(n), alg).drop(cols=[i0])
                corr = ecompose(alg, A_inv, beta) * -1   # -α^{-1} β : B -> A
                g_comps[n] = inc + EMat(inc.nrows, inc.ncols,
                                        {(i0, c): x for (_, c), x in corr.entries.items()})
            elif n == k + 1:
                proj = EMat.identity(len(C.term(n)), C.term(n), alg).drop(rows=[j0])
                corr = ga * -1                            # -γ α^{-1} : A' -> C
                f_comps[n] = proj + EMat(proj.nrows, proj.ncols,
                                         {(r, j0): x for (r, _), x in corr.entries.items()})
                g_comps[n] = EMat.identity(len(C.term(n)), C.term(n), alg).drop(cols=[j0])
            else:
                f_comps[n] = EMat.identity(len(C.term(n)), C.term(n), alg)
                g_comps[n] = f_comps[n]
        f = SumMap(C, D, f_comps)
        g = SumMap(D, C, g_comps)
        f_total = SumMap(orig, D, f_total.then(f).comps)
        g_total = SumMap(D, orig, g.then(g_total).comps)
        C = D
    M = C.trim()
    if M.bottom != C.bottom or M.top != C.top:
        f_total = SumMap(orig, M, {n: f_total[n] for n in orig.degrees})
        g_total = SumMap(M, orig, {n: g_total[n] for n in M.degrees})
    return Minimization(M, f_total, g_total)


# ---------------------------------------------------------------------------
# Hom complexes


class HomComplex:
    """Total Hom complex between a structured complex and a complex of representations.

    ``mode == "from_proj"``: ``Hom(P, Y)`` with ``Hom(P_v, M) = M_v``.
    ``mode == "into_inj"``: ``Hom(X, I)`` with ``Hom(M, I_v) = (M_v)^*``.
    Cochains of degree ``n`` are vectors; :meth:`D` gives the differential.
    """

    def __init__(self, mode: str, S: SumComplex, R: BoundedComplex):
        self.mode = mode
        self.S = S
        self.R = R
        self.alg = S.algebra
        self._layout: dict[int, list] = {}
        self._D: dict[int, Mat] = {}

    @property
    def degree_range(self) -> range:
        if self.mode == "from_proj":
            lo = self.R.bottom - self.S.top
            hi = self.R.top - self.S.bottom
        else:
            lo = self.S.bottom - self.R.top
            hi = self.S.top - self.R.bottom
        return range(lo, hi + 1)

    def layout(self, n: int) -> list:
        """Blocks ``(k, summand, vertex, offset, size)`` of the degree-``n`` cochains."""
        if n in self._layout:
            return self._layout[n]
        out, off = [], 0
        if self.mode == "from_proj":
            for k in self.S.degrees:
                M = self.R.obj(k + n)
                for i, v in enumerate(self.S.term(k)):
                    out.append((k, i, v, off, M.dim(v)))
                    off += M.dim(v)
        else:
            for k in self.R.degrees:
                M = self.R.obj(k)
                for j, w in enumerate(self.S.term(k + n)):
                    out.append((k, j, w, off, M.dim(w)))
                    off += M.dim(w)
        self._layout[n] = out
        return out

    def dim(self, n: int) -> int:
        lay = self.layout(n)
        return lay[-1][3] + lay[-1][4] if lay else 0

    def D(self, n: int) -> Mat:
        """Differential from degree ``n`` to ``n + 1`` (``D f = d f - (-1)^n f d``)."""
        if n in self._D:
            return self._D[n]
        alg = self.alg
        src, tgt = self.layout(n), self.layout(n + 1)
        tpos = {(k, i): (off, size) for k, i, _, off, size in tgt}
        sign = -1 if n % 2 else 1
        entries: dict = {}

        def put(r0, c0, m: Mat, c):
            for r, cc, x in m.nonzero():
                key = (r0 + r, c0 + cc)
                entries[key] = entries.get(key, 0) + c * x

        if self.mode == "from_proj":
            for k, i, v, off, size in src:
                # d_Y ∘ f: component at (k, i) moves to Y^{k+n+1}_v
                dY = self.R.d(k + n)[v]
                if (k, i) in tpos and size:
                    put(tpos[(k, i)][0], off, dY, 1)
                # f ∘ d_P: feeds the summands of P^{k-1} mapping into (k, i)
                dP = self.S.d(k - 1)
                for (j, u), x in dP.entries.items():
                    if j != i or (k - 1, u) not in tpos:
                        continue
                    w = self.S.term(k - 1)[u]
                    act = self.R.obj(k + n).element_matrix(x, v, w)
                    put(tpos[(k - 1, u)][0], off, act, -sign)
        else:
            for k, j, w, off, size in src:
                # d_I ∘ f: functional φ on X^k_w pushes to summands z of I^{k+n+1}
                dI = self.S.d(k + n)
                for (z, jj), x in dI.entries.items():
                    if jj != j or (k, z) not in tpos:
                        continue
                    zz = self.S.term(k + n + 1)[z]
                    act = self.R.obj(k).element_matrix(x, zz, w)   # X_z -> X_w
                    put(tpos[(k, z)][0], off, act.T, 1)
                # f ∘ d_X: functional on X^{k-1}_w is φ ∘ (d_X)_w
                if (k - 1, j) in tpos:
                    dX = self.R.d(k - 1)[w]
                    put(tpos[(k - 1, j)][0], off, dX.T, -sign)
        m = Mat.from_sparse(self.dim(n + 1), self.dim(n), entries)
        self._D[n] = m
        return m

    def cohomology_dim(self, n: int) -> int:
        return self.dim(n) - self.D(n).rank() - self.D(n - 1).rank()

    def cocycles(self, n: int) -> list[list[Fraction]]:
        return self.D(n).nullspace() if self.dim(n) else []

    def cohomology_basis(self, n: int) -> list[list[Fraction]]:
        """Cocycles completing the coboundaries, in deterministic order."""
        Z = self.cocycles(n)
        if not Z:
            return []
        Dm = self.D(n - 1)
        B = [list(c) for c in Dm.columns()] if Dm.ncols else []
        mat = Mat.from_columns(B + Z, self.dim(n)) if (B or Z) else Mat.zeros(self.dim(n), 0)
        ind = mat.independent_columns()
        return [Z[c - len(B)] for c in ind if c >= len(B)]

    def express(self, n: int, vec: Sequence, basis: Sequence[Sequence]) -> tuple[list[Fraction], list[Fraction]]:
        """Write a cocycle as ``Σ c_i basis_i + D(h)``; returns ``(c, h)``."""
        Dm = self.D(n - 1)
        cols = [list(b) for b in basis] + [list(c) for c in Dm.columns()]
        A = Mat.from_columns(cols, self.dim(n)) if cols else Mat.zeros(self.dim(n), 0)
        res = solve_sparse(A.sparse_rows(), list(vec), A.ncols)
        if res is None:
            raise ComplexError("vector is not a cocycle in the expected class")
        x = res[0]
        return x[:len(basis)], x[len(basis):]

    # -- translation to and from chain-level maps --

    def to_maps(self, n: int, vec: Sequence) -> dict[int, RepMorphism]:
        """Realized components ``S^k -> R^{k+n}`` (from_proj) or ``R^k -> S^{k+n}`` (into_inj)."""
        alg = self.alg
        out = {}
        if self.mode == "from_proj":
            for k in self.S.degrees:
                M = self.R.obj(k + n)
                S = term_sum(alg, "proj", self.S.term(k))
                blocks = {}
                for kk, i, v, off, size in self.layout(n):
                    if kk == k:
                        f = map_from_projective(M, v, vec[off:off + size])
                        blocks[(0, i)] = RepMorphism(S.summands[i], M, f.maps, check=False)
                mor = block_morphism(S, DirectSum([M], alg), blocks)
                out[k] = RepMorphism(S.rep, M, mor.maps, check=False)
        else:
            for k in self.R.degrees:
                M = self.R.obj(k)
                T = term_sum(alg, "inj", self.S.term(k + n))
                blocks = {}
                for kk, j, w, off, size in self.layout(n):
                    if kk == k:
                        f = map_to_injective(M, w, vec[off:off + size])
                        blocks[(j, 0)] = RepMorphism(M, T.summands[j], f.maps, check=False)
                mor = block_morphism(DirectSum([M], alg), T, blocks)
                out[k] = RepMorphism(M, T.rep, mor.maps, check=False)
        return out

    def from_maps(self, n: int, comps: Mapping[int, RepMorphism]) -> list[Fraction]:
        vec = [Fraction(0)] * self.dim(n)
        alg = self.alg
        if self.mode == "from_proj":
            for k, i, v, off, size in self.layout(n):
                f = comps.get(k)
                if f is None or not size:
                    continue
                S = term_sum(alg, "proj", self.S.term(k))
                col = S.offsets[v][i]  # e_v is the first basis path of P_v at v
                for r in range(size):
                    vec[off + r] = f.maps[v][r, col]
        else:
            for k, j, w, off, size in self.layout(n):
                f = comps.get(k)
                if f is None or not size:
                    continue
                T = term_sum(alg, "inj", self.S.term(k + n))
                row = T.offsets[w][j]
                for r in range(size):
                    vec[off + r] = f.maps[w][row, r]
        return vec

    def chain_map(self, vec: Sequence, source: BoundedComplex | None = None,
                  target: BoundedComplex | None = None) -> ChainMap:
        """A degree-0 cocycle as a chain map."""
        comps = self.to_maps(0, vec)
        if self.mode == "from_proj":
            X = source or self.S.realize()
            Y = target or self.R
        else:
            X = source or self.R
            Y = target or self.S.realize()
        return ChainMap(X, Y, {n: RepMorphism(X.obj(n), Y.obj(n), f.maps, check=False) for n, f in comps.items()},
                        check=False)

    def post_compose_matrix(self, other: "HomComplex", g: ChainMap, n: int = 0) -> Mat:
        """Matrix of ``f -> g∘f`` from ``Hom^n(P, R)`` to ``Hom^n(P, R')`` (from_proj only)."""
        assert self.mode == other.mode == "from_proj"
        entries: dict = {}
        tpos = {(k, i): off for k, i, _, off, _s in other.layout(n)}
        for k, i, v, off, size in self.layout(n):
            m = g[k + n][v] if (k + n) in g.source.degrees else None
            if m is None or (k, i) not in tpos:
                continue
            for r, c, x in m.nonzero():
                entries[(tpos[(k, i)] + r, off + c)] = x
        return Mat.from_sparse(other.dim(n), self.dim(n), entries)

    def pre_compose_matrix(self, other: "HomComplex", u: SumMap, n: int = 0) -> Mat:
        """Matrix of ``f -> f∘u`` from ``Hom^n(P', R)`` (self) to ``Hom^n(P, R)`` (other), ``u: P -> P'``."""
        assert self.mode == other.mode == "from_proj"
        entries: dict = {}
        spos = {(k, i): (off, v) for k, i, v, off, _s in self.layout(n)}
        for k, i, v, off, size in other.layout(n):
            comp = u[k]
            M = self.R.obj(k + n)
            for (j, ii), x in comp.entries.items():
                if ii != i or (k, j) not in spos:
                    continue
                soff, w = spos[(k, j)]
                act = M.element_matrix(x, w, v)  # M_w -> M_v
                for r, c, val in act.nonzero():
                    key = (off + r, soff + c)
                    entries[key] = entries.get(key, 0) + val
        return Mat.from_sparse(other.dim(n), self.dim(n), entries)


def hom_from_projectives(P: SumComplex, Y: BoundedComplex) -> HomComplex:
    if P.kind != "proj":
        raise ComplexError("expected a complex of projectives")
    return HomComplex("from_proj", P, Y)


def hom_into_injectives(X: BoundedComplex, I: SumComplex) -> HomComplex:
    if I.kind != "inj":
        raise ComplexError("expected a complex of injectives")
    return HomComplex("into_inj", I, X)


# ---------------------------------------------------------------------------
# derived Hom and lifting


_REPL_CACHE: dict = {}


def _complex_key(X: BoundedComplex):
    return (id(X.algebra), X.bottom, tuple(X.objects), tuple(tuple(d.maps.values()) for d in X.diffs))


def cached_projective_replacement(X: BoundedComplex) -> Replacement:
    key = ("proj",) + _complex_key(X)
    r = _REPL_CACHE.get(key)
    if r is None:
        r = _REPL_CACHE[key] = projective_replacement(X)
    return r


def cached_injective_replacement(X: BoundedComplex) -> Replacement:
    key = ("inj",) + _complex_key(X)
    r = _REPL_CACHE.get(key)
    if r is None:
        r = _REPL_CACHE[key] = injective_replacement(X)
    return r


def derived_hom_dims(X: BoundedComplex, Y: BoundedComplex, degrees: Iterable[int]) -> dict[int, int]:
    """``dim Hom_D(X, Y[n])`` via a projective replacement of ``X``."""
    if isinstance(X, Representation):
        X = BoundedComplex.module(X)
    if isinstance(Y, Representation):
        Y = BoundedComplex.module(Y)
    P = cached_projective_replacement(X).structured
    H = hom_from_projectives(P, Y)
    return {n: H.cohomology_dim(n) for n in degrees}


def derived_hom_dims_injective(X: BoundedComplex, Y: BoundedComplex, degrees: Iterable[int]) -> dict[int, int]:
    """Same numbers through an injective replacement of ``Y``."""
    if isinstance(X, Representation):
        X = BoundedComplex.module(X)
    if isinstance(Y, Representation):
        Y = BoundedComplex.module(Y)
    I = cached_injective_replacement(Y).structured
    H = hom_into_injectives(X, I)
    return {n: H.cohomology_dim(n) for n in degrees}


def lift_to_projectives(f: ChainMap, PX: Replacement, PY: Replacement) -> SumMap:
    """Structured ``F: P_X -> P_Y`` with ``q_Y F`` homotopic to ``f q_X``."""
    H1 = hom_from_projectives(PX.structured, PY.complex)
    H2 = hom_from_projectives(PX.structured, f.target)
    target = H2.from_maps(0, {n: f[n] @ PX.quasi_iso[n] for n in PX.complex.degrees})
    Q = H1.post_compose_matrix(H2, PY.quasi_iso)
    D0 = H1.D(0)
    Dm = H2.D(-1)
    n0, nh = H1.dim(0), H2.dim(-1)
    # unknowns (F, h): D0 F = 0 and Q F - Dm h = target
    rows, rhs = [], []
    for r, row in enumerate(D0.sparse_rows()):
        rows.append(row)
        rhs.append(0)
    Qr, Dr = Q.sparse_rows(), Dm.sparse_rows()
    for r in range(H2.dim(0)):
        row = dict(Qr[r])
        for c, x in Dr[r].items():
            row[n0 + c] = row.get(n0 + c, 0) - x
        rows.append(row)
        rhs.append(target[r])
    res = solve_sparse(rows, rhs, n0 + nh)
    if res is None:
        raise ComplexError("map does not lift (replacement not a quasi-isomorphism?)")
    x, _ = res
    F = H1.chain_map(x[:n0], source=PX.complex, target=PY.complex)
    return structure_of_chain_map(F, PX.structured, PY.structured)


def lift_to_injectives(f: ChainMap, IX: Replacement, IY: Replacement) -> SumMap:
    """Structured ``G: I_X -> I_Y`` with ``G ψ_X`` homotopic to ``ψ_Y f``."""
    H1 = hom_into_injectives(IX.complex, IY.structured)   # Hom(I_X, I_Y)
    H2 = hom_into_injectives(f.source, IY.structured)     # Hom(X, I_Y)
    target = H2.from_maps(0, {n: IY.quasi_iso[n] @ f[n] for n in f.source.degrees})
    # pre-composition with ψ_X: Hom(I_X, I_Y) -> Hom(X, I_Y)
    entries: dict = {}
    pos1 = {(k, j): off for k, j, _w, off, _s in H1.layout(0)}
    for k, j, w, off, size in H2.layout(0):
        if (k, j) not in pos1:
            continue
        psi = IX.quasi_iso[k][w] if k in IX.quasi_iso.source.degrees else None
        if psi is None:
            continue
        for r, c, x in psi.T.nonzero():
            entries[(off + r, pos1[(k, j)] + c)] = x
    Q = Mat.from_sparse(H2.dim(0), H1.dim(0), entries)
    D0, Dm = H1.D(0), H2.D(-1)
    n0, nh = H1.dim(0), H2.dim(-1)
    rows, rhs = [], []
    for row in D0.sparse_rows():
        rows.append(row)
        rhs.append(0)
    Qr, Dr = Q.sparse_rows(), Dm.sparse_rows()
    for r in range(H2.dim(0)):
        row = dict(Qr[r])
        for c, x in Dr[r].items():
            row[n0 + c] = row.get(n0 + c, 0) - x
        rows.append(row)
        rhs.append(target[r])
    res = solve_sparse(rows, rhs, n0 + nh)
    if res is None:
        raise ComplexError("map does not lift to injective replacements")
    x, _ = res
    G = H1.chain_map(x[:n0], source=IX.complex, target=IY.complex)
    return structure_of_chain_map(G, IX.structured, IY.structured)
