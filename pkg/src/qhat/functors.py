"""Serre functor, mutations, twists, and naturality search.

All functors are realized on explicit complexes of representations.  Outputs
are cached by the content of the input complex so that the images of a
morphism and of its endpoints are literally the same Python objects, which
keeps chain maps composable.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .chaincat import (
    BoundedComplex,
    ChainMap,
    ComplexError,
    Cone,
    HomComplex,
    Homotopy,
    Replacement,
    SumComplex,
    SumMap,
    _complex_key,
    cached_injective_replacement,
    cached_projective_replacement,
    cone,
    cone_map,
    derived_hom_dims,
    hom_from_projectives,
    hom_into_injectives,
    identity_map,
    is_quasi_iso,
    lift_to_injectives,
    lift_to_projectives,
    minimize,
    nakayama,
    nakayama_inverse,
    nakayama_inverse_map,
    nakayama_map,
    shift,
    shift_map,
    shift_sum,
    sum_of_complexes,
    term_sum,
)
from .homalg import as_complex, derived_iso, is_exceptional, minimal_model
from .linalg import Mat, solve_sparse
from .repcore import DirectSum, RepMorphism, block_morphism, random_rational, zero_morphism


class FunctorError(ValueError):
    pass


# ---------------------------------------------------------------------------
# minimal replacements as Replacement objects


_MINREP: dict = {}


def minimal_projective(X: BoundedComplex) -> Replacement:
    """Minimal complex of projectives with a quasi-isomorphism onto ``X``."""
    key = ("proj",) + _complex_key(X)
    hit = _MINREP.get(key)
    if hit is None:
        mz, R = minimal_model(X)
        M = mz.minimal
        RM = M.realize()
        back = mz.from_min.realize(RM, R.complex)
        q = R.quasi_iso @ back
        hit = _MINREP[key] = Replacement(M, RM, q)
    return hit


def minimal_injective(X: BoundedComplex) -> Replacement:
    """Minimal complex of injectives with a quasi-isomorphism from ``X``."""
    key = ("inj",) + _complex_key(X)
    hit = _MINREP.get(key)
    if hit is None:
        R = cached_injective_replacement(X)
        mz = minimize(R.structured)
        M = mz.minimal
        RM = M.realize()
        to = mz.to_min.realize(R.complex, RM)
        hit = _MINREP[key] = Replacement(M, RM, to @ R.quasi_iso)
    return hit


def derived_morphism_basis(X, Y) -> list[ChainMap]:
    """Chain maps between minimal projective models representing a basis of ``Hom_D(X, Y)``."""
    PX, PY = minimal_projective(as_complex(X)), minimal_projective(as_complex(Y))
    H = hom_from_projectives(PX.structured, PY.complex)
    return [H.chain_map(v, PX.complex, PY.complex) for v in H.cohomology_basis(0)]


# ---------------------------------------------------------------------------
# Serre functor


def serre(X) -> BoundedComplex:
    """Nakayama functor applied to the minimal projective replacement."""
    return _serre_obj(as_complex(X))


_SERRE: dict = {}


def _serre_obj(X: BoundedComplex) -> BoundedComplex:
    key = ("S",) + _complex_key(X)
    hit = _SERRE.get(key)
    if hit is None:
        hit = _SERRE[key] = nakayama(minimal_projective(X).structured).realize(name=f"S({X.name or 'X'})")
    return hit


def serre_map(f: ChainMap) -> ChainMap:
    PX, PY = minimal_projective(f.source), minimal_projective(f.target)
    F = lift_to_projectives(f, PX, PY)
    return nakayama_map(F).realize(serre(f.source), serre(f.target))


def serre_inverse(X) -> BoundedComplex:
    """Inverse Nakayama functor applied to the minimal injective replacement."""
    X = as_complex(X)
    key = ("S-",) + _complex_key(X)
    hit = _SERRE.get(key)
    if hit is None:
        hit = _SERRE[key] = nakayama_inverse(minimal_injective(X).structured).realize(
            name=f"S^-1({X.name or 'X'})")
    return hit


def serre_inverse_map(f: ChainMap) -> ChainMap:
    IX, IY = minimal_injective(f.source), minimal_injective(f.target)
    G = lift_to_injectives(f, IX, IY)
    return nakayama_inverse_map(G).realize(serre_inverse(f.source), serre_inverse(f.target))


# ---------------------------------------------------------------------------
# evaluation and coevaluation cones


def _stack_cols(parts: Sequence[RepMorphism], source, target) -> RepMorphism:
    """Row of morphisms ``⊕ A_i -> B`` (summands in order)."""
    alg = target.algebra
    maps = {}
    for v in alg.vertices:
        maps[v] = Mat.hstack([p.maps[v] for p in parts], target.dim(v))
    return RepMorphism(source, target, maps, check=False)


def _stack_rows(parts: Sequence[RepMorphism], source, target) -> RepMorphism:
    """Column of morphisms ``A -> ⊕ B_i``."""
    alg = source.algebra
    maps = {}
    for v in alg.vertices:
        maps[v] = Mat.vstack([p.maps[v] for p in parts], source.dim(v))
    return RepMorphism(source, target, maps, check=False)


@dataclass
class Evaluation:
    """``⊕_n Hom^n(E, X) ⊗ E[-n] -> X`` together with its cone."""
    E: SumComplex                      # minimal projective model of E
    X: BoundedComplex
    hom: HomComplex
    basis: dict[int, list]            # degree -> cocycle vectors
    pieces: list[tuple[int, int]]     # (degree, index) in summand order
    source: BoundedComplex            # ⊕ E[-n]
    map: ChainMap
    cone: Cone

    @property
    def complex(self) -> BoundedComplex:
        return self.cone.complex


def _piece_complex(E: SumComplex, pieces, alg) -> BoundedComplex:
    parts = [shift_sum(E, -n) for n, _ in pieces]
    return sum_of_complexes(parts, alg, "proj").realize()


def _pieces_at(E: SumComplex, pieces, k) -> list:
    return [i for i, (n, _) in enumerate(pieces) if E.term(k - n)]


def evaluation(E, X) -> Evaluation:
    """Canonical evaluation map assembled from a basis of ``H^*Hom(E, X)``."""
    E, X = as_complex(E), as_complex(X)
    key = _complex_key(E) + ("ev",) + _complex_key(X)
    hit = _EVAL.get(key)
    if hit is not None:
        return hit
    alg = X.algebra
    PE = minimal_projective(E).structured
    H = hom_from_projectives(PE, X)
    basis = {n: H.cohomology_basis(n) for n in H.degree_range}
    basis = {n: b for n, b in basis.items() if b}
    pieces = [(n, i) for n in sorted(basis) for i in range(len(basis[n]))]
    S = _piece_complex(PE, pieces, alg)
    comps = {}
    if pieces:
        shifted = []
        for n, i in pieces:
            m = H.to_maps(n, basis[n][i])       # P_E^j -> X^{j+n}
            shifted.append({j: m[j] for j in PE.degrees})
        # piece (n, i) contributes P_E^{k-n} at degree k
        for k in S.degrees:
            parts = []
            for (n, i), maps in zip(pieces, shifted):
                if not PE.term(k - n):
                    continue
                parts.append(RepMorphism(maps[k - n].source, X.obj(k), maps[k - n].maps, check=False))
            if parts:
                comps[k] = _stack_cols(parts, S.obj(k), X.obj(k))
    ev = ChainMap(S, X, comps)
    ev_data = Evaluation(PE, X, H, basis, pieces, S, ev, cone(ev))
    _EVAL[key] = ev_data
    return ev_data


_EVAL: dict = {}
_COEV: dict = {}


def evaluation_map(E, m: ChainMap) -> ChainMap:
    """Induced map of evaluation cones for ``m: X -> X'``."""
    ev1, ev2 = evaluation(E, m.source), evaluation(E, m.target)
    PE = ev1.E
    H1, H2 = ev1.hom, ev2.hom
    alg = PE.algebra
    idx2 = {p: r for r, p in enumerate(ev2.pieces)}
    coeffs: dict = {}       # (piece2, piece1) -> scalar
    homs: list = []         # per piece1: maps P_E^j -> X'^{j+n-1}
    for (n, i) in ev1.pieces:
        z = H1.to_maps(n, ev1.basis[n][i])
        mz = {j: m[j + n] @ z[j] for j in PE.degrees}
        vec = H2.from_maps(n, mz)
        c, h = H2.express(n, vec, ev2.basis.get(n, []))
        for jj, cc in enumerate(c):
            if cc:
                coeffs[(idx2[(n, jj)], ev1.pieces.index((n, i)))] = cc
        homs.append(H2.to_maps(n - 1, h) if H2.dim(n - 1) else {})
    S1, S2 = ev1.source, ev2.source
    # u: S1 -> S2, scalar multiples of the identity of P_E between equal degrees
    ucomps = {}
    for k in S1.degrees:
        src_pieces = _pieces_at(PE, ev1.pieces, k)
        tgt_pieces = _pieces_at(PE, ev2.pieces, k)
        if not tgt_pieces or not src_pieces:
            continue
        blocks = {}
        Ssum = DirectSum([_sub_obj(PE, ev1.pieces[p], k) for p in src_pieces], alg)
        Tsum = DirectSum([_sub_obj(PE, ev2.pieces[q], k) for q in tgt_pieces], alg)
        for a, p in enumerate(src_pieces):
            for b, q in enumerate(tgt_pieces):
                cc = coeffs.get((q, p))
                if cc:
                    Mobj = Ssum.summands[a]
                    blocks[(b, a)] = RepMorphism(Mobj, Tsum.summands[b],
                                                 {v: Mat.identity(Mobj.dim(v)) * cc for v in alg.vertices},
                                                 check=False)
        mor = block_morphism(Ssum, Tsum, blocks)
        ucomps[k] = RepMorphism(S1.obj(k), S2.obj(k), mor.maps, check=False)
    u = ChainMap(S1, S2, ucomps)
    hcomps = {}
    X2 = m.target
    for k in S1.degrees:
        parts = []
        for p in _pieces_at(PE, ev1.pieces, k):
            n, _ = ev1.pieces[p]
            h = homs[p].get(k - n)
            src_obj = _sub_obj(PE, ev1.pieces[p], k)
            if h is None:
                h = zero_morphism(src_obj, X2.obj(k - 1))
            parts.append(RepMorphism(src_obj, X2.obj(k - 1), h.maps, check=False))
        if parts:
            hcomps[k] = _stack_cols(parts, S1.obj(k), X2.obj(k - 1))
    H = Homotopy(S1, X2, hcomps)
    if not H.certifies(m @ ev1.map - ev2.map @ u):
        raise AssertionError("evaluation square homotopy failed verification")
    return cone_map(ev1.cone, ev2.cone, u, m, H)


def _sub_obj(PE: SumComplex, piece, k):
    n, _ = piece
    return term_sum(PE.algebra, "proj", PE.term(k - n)).rep


@dataclass
class Coevaluation:
    """``X -> ⊕_n Hom^n(X, E)^* ⊗ E[n]`` together with its cone."""
    E: SumComplex                      # minimal injective model of E
    X: BoundedComplex
    hom: HomComplex
    basis: dict[int, list]
    pieces: list[tuple[int, int]]
    target: BoundedComplex
    map: ChainMap
    cone: Cone

    @property
    def complex(self) -> BoundedComplex:
        return shift(self.cone.complex, -1)


def coevaluation(E, X) -> Coevaluation:
    E, X = as_complex(E), as_complex(X)
    key = _complex_key(E) + ("coev",) + _complex_key(X)
    hit = _COEV.get(key)
    if hit is not None:
        return hit
    alg = X.algebra
    IE = minimal_injective(E).structured
    H = hom_into_injectives(X, IE)
    basis = {n: H.cohomology_basis(n) for n in H.degree_range}
    basis = {n: b for n, b in basis.items() if b}
    pieces = [(n, i) for n in sorted(basis) for i in range(len(basis[n]))]
    parts = [shift_sum(IE, n) for n, _ in pieces]
    T = sum_of_complexes(parts, alg, "inj").realize()
    comps = {}
    if pieces:
        maps = [H.to_maps(n, basis[n][i]) for n, i in pieces]   # X^k -> I^{k+n}
        for k in X.degrees:
            rows = []
            for (n, i), mp in zip(pieces, maps):
                if not IE.term(k + n):
                    continue
                f = mp[k]
                rows.append(f)
            if rows and k in T.degrees:
                comps[k] = _stack_rows(rows, X.obj(k), T.obj(k))
    co = ChainMap(X, T, comps)
    data = Coevaluation(IE, X, H, basis, pieces, T, co, cone(co))
    _COEV[key] = data
    return data


def coevaluation_map(E, m: ChainMap) -> ChainMap:
    """Induced map of the (unshifted) coevaluation cones for ``m: X -> X'``."""
    c1, c2 = coevaluation(E, m.source), coevaluation(E, m.target)
    IE = c1.E
    H1, H2 = c1.hom, c2.hom
    alg = IE.algebra
    idx1 = {p: r for r, p in enumerate(c1.pieces)}
    coeffs: dict = {}      # (piece2, piece1)
    homs = []              # per piece2: maps X^k -> I^{k+n-1}
    for (n, j) in c2.pieces:
        z = H2.to_maps(n, c2.basis[n][j])
        zm = {k: z[k] @ m[k] for k in m.source.degrees}
        vec = H1.from_maps(n, zm)
        c, h = H1.express(n, vec, c1.basis.get(n, []))
        for ii, cc in enumerate(c):
            if cc:
                coeffs[(c2.pieces.index((n, j)), idx1[(n, ii)])] = cc
        hm = H1.to_maps(n - 1, h) if H1.dim(n - 1) else {}
        sign = -1 if n % 2 else 1
        homs.append({k: f * sign for k, f in hm.items()})
    T1, T2 = c1.target, c2.target
    def sub(piece, k):
        n, _ = piece
        return term_sum(alg, "inj", IE.term(k + n)).rep

    wcomps = {}
    for k in T1.degrees:
        sp = [p for p, (n, _) in enumerate(c1.pieces) if IE.term(k + n)]
        tp = [q for q, (n, _) in enumerate(c2.pieces) if IE.term(k + n)]
        if not sp or not tp:
            continue
        Ssum = DirectSum([sub(c1.pieces[p], k) for p in sp], alg)
        Tsum = DirectSum([sub(c2.pieces[q], k) for q in tp], alg)
        blocks = {}
        for a, p in enumerate(sp):
            for b, q in enumerate(tp):
                cc = coeffs.get((q, p))
                if cc:
                    Mo = Ssum.summands[a]
                    blocks[(b, a)] = RepMorphism(Mo, Tsum.summands[b],
                                                 {v: Mat.identity(Mo.dim(v)) * cc for v in alg.vertices},
                                                 check=False)
        mor = block_morphism(Ssum, Tsum, blocks)
        wcomps[k] = RepMorphism(T1.obj(k), T2.obj(k), mor.maps, check=False)
    w = ChainMap(T1, T2, wcomps)
    X1 = m.source
    hcomps = {}
    for k in X1.degrees:
        rows = []
        for q, (n, _) in enumerate(c2.pieces):
            if not IE.term(k - 1 + n):
                continue
            tgt = sub(c2.pieces[q], k - 1)
            h = homs[q].get(k)
            if h is None:
                h = zero_morphism(X1.obj(k), tgt)
            rows.append(RepMorphism(X1.obj(k), tgt, h.maps, check=False))
        if rows:
            hcomps[k] = _stack_rows(rows, X1.obj(k), T2.obj(k - 1))
    # w∘coev1 - coev2∘m = -(d h + h d)
    Hn = Homotopy(X1, T2, {k: f * -1 for k, f in hcomps.items()})
    if not Hn.certifies(w @ c1.map - c2.map @ m):
        raise AssertionError("coevaluation square homotopy failed verification")
    return cone_map(c1.cone, c2.cone, m, w, Hn)


# ---------------------------------------------------------------------------
# mutations, twists, subcategory Serre functors


def _require_exceptional(E) -> None:
    if not is_exceptional(E):
        raise FunctorError("mutation requires an exceptional object")


def left_mutate(E, X) -> BoundedComplex:
    """``cone(Hom•(E, X) ⊗ E -> X)``."""
    _require_exceptional(E)
    return evaluation(E, X).complex


def left_mutate_map(E, m: ChainMap) -> ChainMap:
    return evaluation_map(E, m)


def right_mutate(E, X) -> BoundedComplex:
    """``cone(X -> Hom•(X, E)^* ⊗ E)[-1]``."""
    _require_exceptional(E)
    return coevaluation(E, X).complex


def right_mutate_map(E, m: ChainMap) -> ChainMap:
    c1, c2 = coevaluation(E, m.source), coevaluation(E, m.target)
    return shift_map(coevaluation_map(E, m), -1, c1.complex, c2.complex)


def spherical_twist(E, X) -> BoundedComplex:
    """Cone of the evaluation map; no exceptionality requirement."""
    return evaluation(E, X).complex


def spherical_twist_map(E, m: ChainMap) -> ChainMap:
    return evaluation_map(E, m)


def in_right_orthogonal(E, X, degrees=range(-4, 5)) -> bool:
    """``Hom•(E, X) = 0``, checked on all degrees where the Hom complex lives."""
    E, X = as_complex(E), as_complex(X)
    H = hom_from_projectives(minimal_projective(E).structured, X)
    degs = set(degrees) | set(H.degree_range)
    return all(d == 0 for d in derived_hom_dims(E, X, sorted(degs)).values())


def serre_sub_inverse(P, X) -> BoundedComplex:
    """Inverse Serre functor of ``P^⊥``: ``L_P ∘ S⁻¹``."""
    X = as_complex(X)
    if not in_right_orthogonal(P, X):
        raise FunctorError("object is not in the right orthogonal of P")
    return left_mutate(P, serre_inverse(X))


def serre_sub(P, X) -> BoundedComplex:
    """Serre functor of ``P^⊥``: ``S ∘ R_P``, inverse to :func:`serre_sub_inverse`."""
    X = as_complex(X)
    if not in_right_orthogonal(P, X):
        raise FunctorError("object is not in the right orthogonal of P")
    return serre(right_mutate(P, X))


# ---------------------------------------------------------------------------
# functor routes and values


@dataclass
class Route:
    """A functor given by its action on objects and on chain maps."""
    name: str
    on_object: Callable[[BoundedComplex], BoundedComplex]
    on_map: Callable[[ChainMap], ChainMap]

    def then(self, other: "Route") -> "Route":
        return Route(f"{other.name}∘{self.name}", lambda X: other.on_object(self.on_object(X)),
                     lambda f: other.on_map(self.on_map(f)))


@dataclass
class FunctorValue:
    provenance: str
    objects: dict[str, BoundedComplex] = field(default_factory=dict)
    maps: dict[str, ChainMap] = field(default_factory=dict)


def apply_route(route: Route, objects: Mapping[str, BoundedComplex],
                morphisms: Mapping[str, ChainMap] | None = None) -> FunctorValue:
    fv = FunctorValue(route.name)
    for k, X in objects.items():
        fv.objects[k] = route.on_object(X)
    for k, f in (morphisms or {}).items():
        fv.maps[k] = route.on_map(f)
    return fv


def identity_route() -> Route:
    return Route("id", lambda X: X, lambda f: f)


def shift_route(n: int) -> Route:
    cache: dict = {}

    def obj(X):
        key = _complex_key(X)
        if key not in cache:
            cache[key] = shift(X, n)
        return cache[key]

    return Route(f"[{n}]", obj, lambda f: shift_map(f, n, obj(f.source), obj(f.target)))


def serre_route() -> Route:
    return Route("S", serre, serre_map)


def serre_inverse_route() -> Route:
    return Route("S^-1", serre_inverse, serre_inverse_map)


def left_mutation_route(E, name: str = "L_E") -> Route:
    _require_exceptional(E)
    return Route(name, lambda X: evaluation(E, X).complex, lambda f: evaluation_map(E, f))


def right_mutation_route(E, name: str = "R_E") -> Route:
    _require_exceptional(E)
    return Route(name, lambda X: coevaluation(E, X).complex, lambda f: right_mutate_map(E, f))


def twist_route(E, name: str = "T_E") -> Route:
    return Route(name, lambda X: evaluation(E, X).complex, lambda f: evaluation_map(E, f))


# ---------------------------------------------------------------------------
# naturality


@dataclass
class NaturalityResult:
    natural: bool
    certified: bool = True
    reason: str = ""
    seed: int | None = None
    etas: dict = field(default_factory=dict)        # object name -> ChainMap P_FX -> G X
    homotopies: dict = field(default_factory=dict)  # morphism name -> Homotopy
    solution_dim: int = 0

    def __bool__(self) -> bool:
        return self.natural

    def to_json(self) -> dict:
        return {"natural": self.natural, "certified": self.certified, "reason": self.reason,
                "seed": self.seed, "solution_dim": self.solution_dim,
                "etas": {k: f.to_json() for k, f in self.etas.items()},
                "homotopies": {k: {str(n): h.to_json() for n, h in H.comps.items()}
                               for k, H in self.homotopies.items()}}


NaturalitySquare = NaturalityResult


def check_naturality(F: Route, G: Route, objects: Mapping[str, BoundedComplex],
                     morphisms: Mapping[str, tuple[str, str, ChainMap]],
                     seed: int = 0, samples: int = 8, grid_cap: int = 2048) -> NaturalityResult:
    """Search for isomorphisms ``η_X: F X -> G X`` with ``G(m) η_X ≃ η_Y F(m)``.

    ``morphisms`` maps a name to ``(source name, target name, chain map)``.
    ``F X`` is replaced by its minimal projective model ``P_X`` so that maps
    and homotopies out of it are computed in the Hom complex
    ``Hom(P_X, G Y)``.  The unknowns are the degree-0 cochains ``η_X`` and
    degree-(-1) cochains ``h_m``; their solution space is sampled for a family
    of quasi-isomorphisms.
    """
    FX = {k: F.on_object(X) for k, X in objects.items()}
    GX = {k: G.on_object(X) for k, X in objects.items()}
    for k in objects:
        r = derived_iso(FX[k], GX[k], seed)
        if not r.isomorphic and r.certified:
            return NaturalityResult(False, True, f"F({k}) and G({k}) are not isomorphic", seed)
    PX = {k: minimal_projective(FX[k]) for k in objects}
    HX = {k: hom_from_projectives(PX[k].structured, GX[k]) for k in objects}
    var: dict = {}
    nvar = 0
    for k in objects:
        var[("eta", k)] = (nvar, HX[k].dim(0))
        nvar += HX[k].dim(0)
    rows: list = []
    # cocycle condition on each η
    for k in objects:
        off, _ = var[("eta", k)]
        for row in HX[k].D(0).sparse_rows():
            if row:
                rows.append({off + c: x for c, x in row.items()})
    mor_data = {}
    for name, (s, t, m) in morphisms.items():
        Fm = F.on_map(m)
        Gm = G.on_map(m)
        Ft = lift_to_projectives(Fm, PX[s], PX[t])   # P_s -> P_t
        Hst = hom_from_projectives(PX[s].structured, GX[t])
        var[("h", name)] = (nvar, Hst.dim(-1))
        nvar += Hst.dim(-1)
        post = HX[s].post_compose_matrix(Hst, Gm, 0)
        pre = HX[t].pre_compose_matrix(Hst, Ft, 0)
        Dm = Hst.D(-1)
        so, _ = var[("eta", s)]
        to, _ = var[("eta", t)]
        ho, _ = var[("h", name)]
        pr, qr, dr = post.sparse_rows(), pre.sparse_rows(), Dm.sparse_rows()
        for r in range(Hst.dim(0)):
            row: dict = {}
            for c, x in pr[r].items():
                row[so + c] = row.get(so + c, 0) + x
            for c, x in qr[r].items():
                row[to + c] = row.get(to + c, 0) - x
            for c, x in dr[r].items():
                row[ho + c] = row.get(ho + c, 0) - x
            row = {c: x for c, x in row.items() if x}
            if row:
                rows.append(row)
        mor_data[name] = (s, t, Hst, Ft, Gm)
    if nvar == 0:
        empty = all(PX[k].structured.is_zero() for k in objects)
        return NaturalityResult(empty, True, "all objects vanish" if empty else "no maps", seed)
    _, kern = solve_sparse(rows, [0] * len(rows), nvar)
    for k in objects:
        off, size = var[("eta", k)]
        if not PX[k].structured.is_zero() and not any(any(v[off:off + size]) for v in kern):
            return NaturalityResult(False, True, f"every compatible family vanishes at {k}", seed,
                                    solution_dim=len(kern))

    def build(x):
        etas = {}
        for k in objects:
            off, size = var[("eta", k)]
            etas[k] = HX[k].chain_map(x[off:off + size], PX[k].complex, GX[k])
        return etas

    def good(etas):
        return all(is_quasi_iso(etas[k]) for k in objects)

    rng = random.Random(seed)
    found = None
    for _ in range(samples):
        cs = [random_rational(rng) for _ in kern]
        x = [sum(c * v[i] for c, v in zip(cs, kern)) for i in range(nvar)]
        etas = build(x)
        if good(etas):
            found = x
            break
    certified = True
    if found is None:
        deg = sum(sum(len(t) for t in PX[k].structured.terms) for k in objects)
        for n, cs in enumerate(itertools.product(range(deg + 1), repeat=len(kern))):
            if n >= grid_cap:
                certified = False
                break
            x = [sum(c * v[i] for c, v in zip(cs, kern)) for i in range(nvar)]
            if good(build(x)):
                found = x
                break
    if found is None:
        return NaturalityResult(False, certified, "no quasi-isomorphic family found", seed,
                                solution_dim=len(kern))
    etas = build(found)
    homotopies = {}
    for name, (s, t, Hst, Ft, Gm) in mor_data.items():
        ho, size = var[("h", name)]
        hm = Hst.to_maps(-1, found[ho:ho + size]) if size else {}
        src = PX[s].complex
        tgt = GX[t]
        comps = {k: RepMorphism(src.obj(k), tgt.obj(k - 1), f.maps, check=False) for k, f in hm.items()}
        H = Homotopy(src, tgt, comps)
        lhs = Gm @ etas[s]
        rhs = etas[t] @ Ft.realize(PX[s].complex, PX[t].complex)
        if not H.certifies(lhs - rhs):
            raise AssertionError(f"naturality homotopy for {name} failed verification")
        homotopies[name] = H
    return NaturalityResult(True, True, "natural family of quasi-isomorphisms found", seed, etas, homotopies,
                            len(kern))


__all__ = [
    "Coevaluation",
    "Evaluation",
    "FunctorError",
    "FunctorValue",
    "NaturalityResult",
    "NaturalitySquare",
    "Route",
    "apply_route",
    "check_naturality",
    "coevaluation",
    "derived_morphism_basis",
    "evaluation",
    "identity_route",
    "in_right_orthogonal",
    "left_mutate",
    "left_mutate_map",
    "left_mutation_route",
    "minimal_injective",
    "minimal_projective",
    "right_mutate",
    "right_mutate_map",
    "right_mutation_route",
    "serre",
    "serre_inverse",
    "serre_inverse_map",
    "serre_inverse_route",
    "serre_map",
    "serre_route",
    "serre_sub",
    "serre_sub_inverse",
    "shift_route",
    "spherical_twist",
    "spherical_twist_map",
    "twist_route",
]
