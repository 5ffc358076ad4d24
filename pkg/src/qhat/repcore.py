"""Finite-dimensional representations of a bound quiver and their morphisms.

A representation assigns a vector space ``k^{d_v}`` to every vertex and a
matrix of shape ``(d_tgt, d_src)`` to every arrow.  Paths act covariantly:
the path ``a2∘a1`` acts as ``M(a2) @ M(a1)``.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .linalg import LinearSystem, Mat, as_fraction, frac_str, rref, solve_sparse
from .pathalg import Element, Path, PathAlgebra


class RepresentationError(ValueError):
    pass


class Representation:
    """Immutable representation of ``algebra`` with one matrix per arrow."""

    def __init__(self, algebra: PathAlgebra, dims, maps: Mapping[str, Mat] | None = None,
                 check: bool = True, name: str | None = None):
        self.algebra = algebra
        vs = algebra.vertices
        if isinstance(dims, Mapping):
            dims = [dims.get(v, 0) for v in vs]
        dims = tuple(int(d) for d in dims)
        if len(dims) != len(vs) or any(d < 0 for d in dims):
            raise RepresentationError("dimension vector does not match the vertex set")
        self.dims = dims
        self._dim = dict(zip(vs, dims))
        maps = dict(maps or {})
        full = {}
        for a in algebra.quiver.arrows:
            shape = (self._dim[a.tgt], self._dim[a.src])
            m = maps.pop(a.id, None)
            m = Mat.zeros(*shape) if m is None else (m if isinstance(m, Mat) else Mat(m, ncols=shape[1]))
            if m.shape != shape:
                raise RepresentationError(f"arrow {a.id}: shape {m.shape}, expected {shape}")
            full[a.id] = m
        if maps:
            raise RepresentationError(f"unknown arrows {sorted(maps)}")
        self.maps = full
        self.name = name
        self._path_cache: dict[int, Mat] = {}
        if check:
            for r in algebra.relations:
                acc = Mat.zeros(self._dim[r.target], self._dim[r.source])
                for c, p in r.terms:
                    acc = acc + self.path_matrix(p) * c
                if not acc.is_zero():
                    raise RepresentationError(f"relation {r} violated")

    def __repr__(self) -> str:
        tag = f"{self.name} " if self.name else ""
        return f"Representation({tag}dims={self.dims})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, Representation) and other.algebra is self.algebra
                and other.dims == self.dims and other.maps == self.maps)

    def __hash__(self) -> int:
        return hash((self.dims, tuple(self.maps[a] for a in sorted(self.maps))))

    def dim(self, v) -> int:
        return self._dim[v]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def path_matrix(self, p: Path) -> Mat:
        m = Mat.identity(self._dim[p.source])
        for a in p.arrows:
            m = self.maps[a] @ m
        return m

    def basis_matrix(self, i: int) -> Mat:
        m = self._path_cache.get(i)
        if m is None:
            m = self._path_cache[i] = self.path_matrix(self.algebra.basis[i])
        return m

    def element_matrix(self, x: Mapping[int, Fraction], src, tgt) -> Mat:
        """Action of a homogeneous element from ``src`` to ``tgt``."""
        acc = Mat.zeros(self._dim[tgt], self._dim[src])
        for i, c in x.items():
            p = self.algebra.basis[i]
            if (p.source, p.target) != (src, tgt):
                raise RepresentationError("element does not run between the given vertices")
            if c:
                acc = acc + self.basis_matrix(i) * c
        return acc

    def to_json(self) -> dict:
        return {"dims": list(self.dims), "maps": {a: m.to_strings() for a, m in self.maps.items()}}


def make_representation(algebra: PathAlgebra, dims, arrow_maps: Mapping | None = None,
                        name: str | None = None) -> Representation:
    maps = {}
    vd = dict(zip(algebra.vertices, dims)) if not isinstance(dims, Mapping) else dict(dims)
    for k, m in (arrow_maps or {}).items():
        a = algebra.quiver.arrow_by_id[k]
        try:
            maps[k] = m if isinstance(m, Mat) else Mat(m, ncols=vd.get(a.src, 0))
        except ValueError as exc:
            raise RepresentationError(f"arrow {k}: {exc}") from None
    return Representation(algebra, dims, maps, name=name)


def zero_representation(algebra: PathAlgebra) -> Representation:
    return Representation(algebra, [0] * len(algebra.vertices))


def representation_from_json(algebra: PathAlgebra, data: Mapping | str, name: str | None = None) -> Representation:
    if isinstance(data, str):
        data = json.loads(data)
    return make_representation(algebra, data["dims"], data.get("maps", {}), name=name)


class RepMorphism:
    """Vertexwise matrices intertwining the arrow actions."""

    def __init__(self, source: Representation, target: Representation,
                 maps: Mapping | None = None, check: bool = True):
        if source.algebra is not target.algebra:
            raise RepresentationError("representations over different algebras")
        self.source = source
        self.target = target
        maps = dict(maps or {})
        full = {}
        for v in source.algebra.vertices:
            shape = (target.dim(v), source.dim(v))
            m = maps.get(v)
            m = Mat.zeros(*shape) if m is None else (m if isinstance(m, Mat) else Mat(m, ncols=shape[1]))
            if m.shape != shape:
                raise RepresentationError(f"vertex {v}: shape {m.shape}, expected {shape}")
            full[v] = m
        self.maps = full
        if check and not self.intertwines():
            raise RepresentationError("vertex maps do not intertwine the arrow actions")

    def intertwines(self) -> bool:
        for a in self.source.algebra.quiver.arrows:
            if self.target.maps[a.id] @ self.maps[a.src] != self.maps[a.tgt] @ self.source.maps[a.id]:
                return False
        return True

    def __repr__(self) -> str:
        return f"RepMorphism({self.source.dims} -> {self.target.dims})"

    def __getitem__(self, v) -> Mat:
        return self.maps[v]

    def __eq__(self, other) -> bool:
        return (isinstance(other, RepMorphism) and self.source == other.source
                and self.target == other.target and self.maps == other.maps)

    def __hash__(self) -> int:
        return hash(tuple(self.maps.values()))

    def __matmul__(self, other: "RepMorphism") -> "RepMorphism":
        """Composition ``self∘other``."""
        if other.target.dims != self.source.dims:
            raise RepresentationError("morphisms are not composable")
        return RepMorphism(other.source, self.target,
                           {v: self.maps[v] @ other.maps[v] for v in self.maps}, check=False)

    def __add__(self, other: "RepMorphism") -> "RepMorphism":
        return RepMorphism(self.source, self.target,
                           {v: self.maps[v] + other.maps[v] for v in self.maps}, check=False)

    def __sub__(self, other: "RepMorphism") -> "RepMorphism":
        return self + other * -1

    def __neg__(self) -> "RepMorphism":
        return self * -1

    def __mul__(self, c) -> "RepMorphism":
        return RepMorphism(self.source, self.target, {v: m * c for v, m in self.maps.items()}, check=False)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.maps.values())

    def rank_vector(self) -> tuple[int, ...]:
        return tuple(self.maps[v].rank() for v in self.source.algebra.vertices)

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and all(m.is_invertible() for m in self.maps.values())

    def inverse(self) -> "RepMorphism":
        return RepMorphism(self.target, self.source, {v: m.inverse() for v, m in self.maps.items()}, check=False)

    def vector(self) -> list[Fraction]:
        out = []
        for v in self.source.algebra.vertices:
            for row in self.maps[v].rows:
                out.extend(row)
        return out

    def to_json(self) -> dict:
        return {str(v): m.to_strings() for v, m in self.maps.items()}


def identity(M: Representation) -> RepMorphism:
    return RepMorphism(M, M, {v: Mat.identity(M.dim(v)) for v in M.algebra.vertices}, check=False)


def zero_morphism(M: Representation, N: Representation) -> RepMorphism:
    return RepMorphism(M, N, {}, check=False)


def morphism_from_json(M: Representation, N: Representation, data: Mapping) -> RepMorphism:
    maps = {}
    for v in M.algebra.vertices:
        m = data.get(str(v), data.get(v))
        if m is not None:
            maps[v] = Mat(m, ncols=M.dim(v))
    return RepMorphism(M, N, maps)


@dataclass(frozen=True)
class HomSpace:
    source: Representation
    target: Representation
    basis: tuple[RepMorphism, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def combination(self, coeffs: Sequence) -> RepMorphism:
        out = zero_morphism(self.source, self.target)
        for c, f in zip(coeffs, self.basis):
            c = as_fraction(c)
            if c:
                out = out + f * c
        return out


def intertwining_system(M: Representation, N: Representation) -> LinearSystem:
    sys = LinearSystem()
    for v in M.algebra.vertices:
        sys.add_block(v, N.dim(v), M.dim(v))
    for a in M.algebra.quiver.arrows:
        sys.matrix_equation([(1, N.maps[a.id], a.src, None), (-1, None, a.tgt, M.maps[a.id])],
                            None, (N.dim(a.tgt), M.dim(a.src)))
    return sys


def hom_basis(M: Representation, N: Representation) -> HomSpace:
    sys = intertwining_system(M, N)
    if sys.nvars == 0:
        return HomSpace(M, N, ())
    x, kernel = sys.solve()
    basis = tuple(RepMorphism(M, N, {v: sys.extract(k, v) for v in M.algebra.vertices}, check=False)
                  for k in kernel)
    return HomSpace(M, N, basis)


def hom_dim(M: Representation, N: Representation) -> int:
    return hom_basis(M, N).dimension


# ---------------------------------------------------------------------------
# subspace helpers


def column_basis(A: Mat) -> Mat:
    """Independent columns of ``A`` (first occurrences), as a matrix."""
    cols = A.independent_columns()
    return Mat.from_columns([A.column(j) for j in cols], A.nrows)


def coordinates(B: Mat, V: Mat) -> Mat:
    """``Y`` with ``B @ Y == V`` for ``B`` of full column rank."""
    rows = B.sparse_rows()
    cols = []
    for j in range(V.ncols):
        res = solve_sparse(rows, V.column(j), B.ncols)
        if res is None:
            raise RepresentationError("vector outside the subspace")
        cols.append(res[0])
    return Mat.from_columns(cols, B.ncols)


def complement_columns(B: Mat, n: int) -> list[int]:
    """Standard basis indices completing the column span of ``B`` to ``k^n``."""
    full = Mat.hstack([B, Mat.identity(n)], nrows=n)
    return [j - B.ncols for j in full.independent_columns() if j >= B.ncols]


def _quotient_data(B: Mat, n: int):
    """Quotient ``k^n -> k^n / span(B)``: (projection, section) matrices."""
    B = column_basis(B) if B.ncols else B
    J = complement_columns(B, n)
    E = Mat.from_columns([[Fraction(int(i == j)) for i in range(n)] for j in J], n)
    full = Mat.hstack([B, E], nrows=n)
    inv = full.inverse() if n else Mat.zeros(0, 0)
    proj = inv.submatrix(range(B.ncols, n), range(n))
    return proj, E


@dataclass(frozen=True)
class SubQuotient:
    """A representation together with its canonical map (inclusion or projection)."""
    rep: Representation
    map: RepMorphism


def subrepresentation(M: Representation, spans: Mapping) -> SubQuotient:
    """Subrepresentation spanned by the given columns at each vertex (must be stable)."""
    alg = M.algebra
    bases = {v: column_basis(spans[v]) if v in spans and spans[v].ncols else Mat.zeros(M.dim(v), 0)
             for v in alg.vertices}
    maps = {a.id: coordinates(bases[a.tgt], M.maps[a.id] @ bases[a.src]) for a in alg.quiver.arrows}
    sub = Representation(alg, [bases[v].ncols for v in alg.vertices], maps)
    return SubQuotient(sub, RepMorphism(sub, M, bases, check=False))


def quotient_representation(M: Representation, spans: Mapping) -> SubQuotient:
    alg = M.algebra
    data = {v: _quotient_data(spans.get(v, Mat.zeros(M.dim(v), 0)), M.dim(v)) for v in alg.vertices}
    maps = {a.id: data[a.tgt][0] @ M.maps[a.id] @ data[a.src][1] for a in alg.quiver.arrows}
    Q = Representation(alg, [data[v][1].ncols for v in alg.vertices], maps)
    return SubQuotient(Q, RepMorphism(M, Q, {v: data[v][0] for v in alg.vertices}, check=False))


def kernel(f: RepMorphism) -> SubQuotient:
    spans = {}
    for v, m in f.maps.items():
        ns = m.nullspace()
        spans[v] = Mat.from_columns(ns, m.ncols) if ns else Mat.zeros(m.ncols, 0)
    return subrepresentation(f.source, spans)


def image(f: RepMorphism) -> SubQuotient:
    """Image with its inclusion into the target."""
    return subrepresentation(f.target, dict(f.maps))


def cokernel(f: RepMorphism) -> SubQuotient:
    return quotient_representation(f.target, dict(f.maps))


def corestrict(f: RepMorphism, sub: SubQuotient) -> RepMorphism:
    """Factor ``f`` through the inclusion ``sub.map``."""
    return RepMorphism(f.source, sub.rep, {v: coordinates(sub.map.maps[v], f.maps[v]) for v in f.maps}, check=False)


# ---------------------------------------------------------------------------
# standard modules


def projective(alg: PathAlgebra, v) -> Representation:
    """``P_v``: at vertex ``j`` the basis paths ``v -> j``; arrows post-compose."""
    between = {j: alg.basis_between(v, j) for j in alg.vertices}
    maps = {}
    for a in alg.quiver.arrows:
        src, tgt = between[a.src], between[a.tgt]
        pos = {b: r for r, b in enumerate(tgt)}
        arrow = Path(a.src, a.tgt, (a.id,))
        entries = {}
        for c, i in enumerate(src):
            for k, x in alg.compose_paths(arrow, alg.basis[i]).items():
                entries[(pos[k], c)] = x
        maps[a.id] = Mat.from_sparse(len(tgt), len(src), entries)
    return Representation(alg, [len(between[j]) for j in alg.vertices], maps, name=f"P{v}")


def injective(alg: PathAlgebra, v) -> Representation:
    """``I_v``: at vertex ``j`` the dual of the basis paths ``j -> v``."""
    between = {j: alg.basis_between(j, v) for j in alg.vertices}
    maps = {}
    for a in alg.quiver.arrows:
        src, tgt = between[a.src], between[a.tgt]
        pos = {b: c for c, b in enumerate(src)}
        arrow = Path(a.src, a.tgt, (a.id,))
        entries = {}
        for r, q in enumerate(tgt):
            for k, x in alg.compose_paths(alg.basis[q], arrow).items():
                entries[(r, pos[k])] = x
        maps[a.id] = Mat.from_sparse(len(tgt), len(src), entries)
    return Representation(alg, [len(between[j]) for j in alg.vertices], maps, name=f"I{v}")


def simple(alg: PathAlgebra, v) -> Representation:
    return Representation(alg, [int(j == v) for j in alg.vertices], name=f"S{v}")


def map_from_projective(M: Representation, v, m: Sequence) -> RepMorphism:
    """The morphism ``P_v -> M`` sending ``e_v`` to ``m in M_v``."""
    alg = M.algebra
    P = projective(alg, v)
    m = [as_fraction(x) for x in m]
    maps = {}
    for j in alg.vertices:
        cols = [M.basis_matrix(i).apply(m) for i in alg.basis_between(v, j)]
        maps[j] = Mat.from_columns(cols, M.dim(j)) if cols else Mat.zeros(M.dim(j), 0)
    return RepMorphism(P, M, maps, check=False)


def map_to_injective(M: Representation, v, phi: Sequence) -> RepMorphism:
    """The morphism ``M -> I_v`` induced by the functional ``phi`` on ``M_v``."""
    alg = M.algebra
    I = injective(alg, v)
    phi = Mat([list(phi)], ncols=M.dim(v))
    maps = {}
    for j in alg.vertices:
        rows = [(phi @ M.basis_matrix(i)).rows[0] for i in alg.basis_between(j, v)]
        maps[j] = Mat(rows, ncols=M.dim(j))
    return RepMorphism(M, I, maps, check=False)


# ---------------------------------------------------------------------------
# direct sums


class DirectSum:
    """Biproduct of a list of representations with injections and projections."""

    def __init__(self, summands: Sequence[Representation], algebra: PathAlgebra | None = None):
        summands = tuple(summands)
        if algebra is None:
            if not summands:
                raise RepresentationError("empty direct sum needs an algebra")
            algebra = summands[0].algebra
        self.algebra = algebra
        self.summands = summands
        vs = algebra.vertices
        self.offsets = {v: list(itertools.accumulate([0] + [S.dim(v) for S in summands])) for v in vs}
        maps = {a.id: Mat.block_diag([S.maps[a.id] for S in summands]) if summands else None
                for a in algebra.quiver.arrows}
        maps = {k: m for k, m in maps.items() if m is not None}
        self.rep = Representation(algebra, [self.offsets[v][-1] for v in vs], maps, check=False)

    def __len__(self) -> int:
        return len(self.summands)

    def inj(self, i: int) -> RepMorphism:
        S = self.summands[i]
        maps = {}
        for v, off in self.offsets.items():
            maps[v] = Mat.from_sparse(off[-1], S.dim(v), {(off[i] + r, r): 1 for r in range(S.dim(v))})
        return RepMorphism(S, self.rep, maps, check=False)

    def proj(self, i: int) -> RepMorphism:
        S = self.summands[i]
        maps = {}
        for v, off in self.offsets.items():
            maps[v] = Mat.from_sparse(S.dim(v), off[-1], {(r, off[i] + r): 1 for r in range(S.dim(v))})
        return RepMorphism(self.rep, S, maps, check=False)


def direct_sum(reps: Sequence[Representation], algebra: PathAlgebra | None = None) -> DirectSum:
    return DirectSum(reps, algebra)


def block_morphism(src: DirectSum, tgt: DirectSum, blocks: Mapping[tuple[int, int], RepMorphism]) -> RepMorphism:
    """Morphism ``src -> tgt`` with component ``blocks[(j, i)]`` from summand ``i`` to ``j``."""
    maps = {}
    for v in src.algebra.vertices:
        so, to = src.offsets[v], tgt.offsets[v]
        entries = {}
        for (j, i), f in blocks.items():
            for r, c, x in f.maps[v].nonzero():
                entries[(to[j] + r, so[i] + c)] = x
        maps[v] = Mat.from_sparse(to[-1], so[-1], entries)
    return RepMorphism(src.rep, tgt.rep, maps, check=False)


# ---------------------------------------------------------------------------
# radical, top, socle, covers and envelopes


def radical_spans(M: Representation) -> dict:
    alg = M.algebra
    out = {}
    for v in alg.vertices:
        cols = [M.maps[a.id] for a in alg.quiver.arrows if a.tgt == v and M.dim(a.src)]
        out[v] = column_basis(Mat.hstack(cols, nrows=M.dim(v))) if cols else Mat.zeros(M.dim(v), 0)
    return out


def socle_spans(M: Representation) -> dict:
    alg = M.algebra
    out = {}
    for v in alg.vertices:
        outs = [M.maps[a.id] for a in alg.quiver.arrows if a.src == v]
        K = Mat.vstack(outs, ncols=M.dim(v)) if outs else Mat.zeros(0, M.dim(v))
        ns = K.nullspace()
        out[v] = Mat.from_columns(ns, M.dim(v)) if ns else Mat.zeros(M.dim(v), 0)
    return out


def top_dims(M: Representation) -> tuple[int, ...]:
    rad = radical_spans(M)
    return tuple(M.dim(v) - rad[v].ncols for v in M.algebra.vertices)


def socle_dims(M: Representation) -> tuple[int, ...]:
    soc = socle_spans(M)
    return tuple(soc[v].ncols for v in M.algebra.vertices)


@dataclass(frozen=True)
class Cover:
    """Projective cover ``⊕ P_v -> M`` (or injective envelope ``M -> ⊕ I_v``)."""
    vertices: tuple
    generators: tuple  # vectors in M_v (covers) or functionals on M_v (envelopes)
    sum: DirectSum
    map: RepMorphism


def projective_cover(M: Representation) -> Cover:
    """Minimal projective cover; generators complete the radical in standard-basis order."""
    alg = M.algebra
    rad = radical_spans(M)
    verts, gens, parts = [], [], []
    for v in alg.vertices:
        for j in complement_columns(rad[v], M.dim(v)):
            m = [Fraction(int(r == j)) for r in range(M.dim(v))]
            verts.append(v)
            gens.append(tuple(m))
            parts.append(map_from_projective(M, v, m))
    S = DirectSum([p.source for p in parts], alg)
    cover = block_morphism(S, DirectSum([M], alg), {(0, i): p for i, p in enumerate(parts)})
    cover = RepMorphism(S.rep, M, cover.maps, check=False)
    return Cover(tuple(verts), tuple(gens), S, cover)


def injective_envelope(M: Representation) -> Cover:
    """Minimal injective envelope; functionals are dual to a socle basis."""
    alg = M.algebra
    soc = socle_spans(M)
    verts, gens, parts = [], [], []
    for v in alg.vertices:
        n, s = M.dim(v), soc[v].ncols
        if not s:
            continue
        J = complement_columns(soc[v], n)
        full = Mat.hstack([soc[v]] + [Mat.from_columns([[Fraction(int(i == j)) for i in range(n)]], n) for j in J], nrows=n)
        inv = full.inverse()
        for r in range(s):
            phi = inv.rows[r]
            verts.append(v)
            gens.append(tuple(phi))
            parts.append(map_to_injective(M, v, phi))
    S = DirectSum([p.target for p in parts], alg)
    env = block_morphism(DirectSum([M], alg), S, {(i, 0): p for i, p in enumerate(parts)})
    env = RepMorphism(M, S.rep, env.maps, check=False)
    return Cover(tuple(verts), tuple(gens), S, env)


def is_projective(M: Representation) -> bool:
    return projective_cover(M).sum.rep.dims == M.dims


def is_injective(M: Representation) -> bool:
    return injective_envelope(M).sum.rep.dims == M.dims


# ---------------------------------------------------------------------------
# isomorphism testing


@dataclass(frozen=True)
class IsoResult:
    isomorphic: bool
    witness: object = None
    certified: bool = True
    seed: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.isomorphic


def random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 4))


def find_invertible(basis: Sequence, combine, invertible, degree: int, seed: int = 0,
                    samples: int = 8, grid_cap: int = 20000):
    """Search a linear space of maps for an invertible member.

    ``combine(coeffs)`` builds the member and ``invertible`` tests it.  After
    ``samples`` seeded random draws, a deterministic grid ``{0..degree}^r`` is
    scanned; the determinant has degree ``<= degree`` so an exhausted grid
    certifies that no invertible member exists.  Returns
    ``(member | None, certified)``.
    """
    r = len(basis)
    if r == 0:
        return None, True
    rng = random.Random(seed)
    for _ in range(samples):
        f = combine([random_rational(rng) for _ in range(r)])
        if invertible(f):
            return f, True
    grid = range(degree + 1)
    for n, coeffs in enumerate(itertools.product(grid, repeat=r)):
        if n >= grid_cap:
            return None, False
        f = combine(list(coeffs))
        if invertible(f):
            return f, True
    return None, True


def is_isomorphic(M: Representation, N: Representation, seed: int = 0) -> IsoResult:
    if M.dims != N.dims:
        return IsoResult(False, reason="dimension vectors differ")
    if M.total_dim == 0:
        return IsoResult(True, identity(M))
    H = hom_basis(M, N)
    if H.dimension == 0:
        return IsoResult(False, reason="Hom(M, N) = 0")
    dims = (hom_dim(M, M), hom_dim(N, N), hom_dim(N, M))
    if len(set(dims + (H.dimension,))) > 1:
        return IsoResult(False, reason="Hom dimensions differ")
    f, cert = find_invertible(H.basis, H.combination, RepMorphism.is_iso, M.total_dim, seed)
    if f is None:
        return IsoResult(False, certified=cert, seed=seed, reason="no invertible morphism")
    return IsoResult(True, f, seed=seed)
