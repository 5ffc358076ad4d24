"""Quivers, admissible relations and the finite path basis of ``kQ/I``.

Composition follows the usual operator convention: ``f∘g`` applies ``g``
first.  A :class:`Path` stores its arrows in the order they are traversed,
so the path written ``a2 a1`` (``a2∘a1``) has ``arrows == ("a1", "a2")``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

from .linalg import Mat, as_fraction, frac_str, rref

Vertex = Hashable
Element = dict[int, Fraction]  # basis index -> coefficient


class QuiverError(ValueError):
    pass


class AdmissibilityError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    id: str
    src: Vertex
    tgt: Vertex


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex id")
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise QuiverError("duplicate arrow id")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.src not in vs or a.tgt not in vs:
                raise QuiverError(f"arrow {a.id!r} has an undeclared endpoint")

    @cached_property
    def arrow_by_id(self) -> dict[str, Arrow]:
        return {a.id: a for a in self.arrows}

    @cached_property
    def vertex_index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def arrow_index(self) -> dict[str, int]:
        return {a.id: i for i, a in enumerate(self.arrows)}

    def outgoing(self, v) -> list[Arrow]:
        return [a for a in self.arrows if a.src == v]


def build_quiver(vertices: Iterable, arrows: Iterable) -> Quiver:
    """Validated quiver from vertex ids and ``(id, src, tgt)`` triples (or dicts)."""
    parsed = []
    for a in arrows:
        if isinstance(a, Arrow):
            parsed.append(a)
        elif isinstance(a, Mapping):
            parsed.append(Arrow(str(a["id"]), a["src"], a["tgt"]))
        else:
            i, s, t = a
            parsed.append(Arrow(str(i), s, t))
    return Quiver(tuple(vertices), tuple(parsed))


@dataclass(frozen=True)
class Path:
    source: Vertex
    target: Vertex
    arrows: tuple[str, ...] = ()

    @property
    def length(self) -> int:
        return len(self.arrows)

    def label(self) -> str:
        if not self.arrows:
            return f"e{self.source}"
        return "".join(reversed(self.arrows))

    def __str__(self) -> str:
        return self.label()


def trivial_path(v) -> Path:
    return Path(v, v, ())


def path_from_arrows(quiver: Quiver, arrows: Sequence[str]) -> Path:
    if not arrows:
        raise QuiverError("use trivial_path for length-0 paths")
    arrs = [quiver.arrow_by_id[a] for a in arrows]
    for x, y in zip(arrs, arrs[1:]):
        if x.tgt != y.src:
            raise QuiverError(f"arrows {x.id!r}, {y.id!r} are not composable")
    return Path(arrs[0].src, arrs[-1].tgt, tuple(arrows))


def concat(p: Path, q: Path) -> Path:
    """``p∘q`` as a raw path (``q`` traversed first)."""
    if q.target != p.source:
        raise QuiverError(f"cannot compose {p} after {q}")
    return Path(q.source, p.target, q.arrows + p.arrows)


@dataclass(frozen=True)
class Relation:
    terms: tuple[tuple[Fraction, Path], ...]

    def __post_init__(self):
        if not self.terms:
            raise QuiverError("empty relation")
        s, t = self.terms[0][1].source, self.terms[0][1].target
        for _, p in self.terms:
            if (p.source, p.target) != (s, t):
                raise QuiverError("relation terms are not parallel")
            if p.length < 2:
                raise QuiverError("relation paths must have length >= 2")

    @property
    def source(self):
        return self.terms[0][1].source

    @property
    def target(self):
        return self.terms[0][1].target


def make_relation(quiver: Quiver, terms: Iterable) -> Relation:
    """Relation from ``(coeff, arrow sequence)`` pairs."""
    return Relation(tuple((as_fraction(c), path_from_arrows(quiver, seq)) for c, seq in terms))


def _path_key(quiver: Quiver, p: Path):
    if not p.arrows:
        return (0, (), quiver.vertex_index[p.source])
    return (p.length, tuple(quiver.arrow_index[a] for a in p.arrows), 0)


def enumerate_paths(quiver: Quiver, max_length: int) -> list[Path]:
    """All paths of length <= ``max_length`` in deglex order."""
    out = [trivial_path(v) for v in quiver.vertices]
    frontier = [p for p in out]
    for _ in range(max_length):
        nxt = []
        for p in frontier:
            for a in quiver.outgoing(p.target):
                nxt.append(Path(p.source, a.tgt, p.arrows + (a.id,)))
        out.extend(nxt)
        frontier = nxt
    return sorted(out, key=lambda p: _path_key(quiver, p))


class PathAlgebra:
    """The finite-dimensional algebra ``kQ/I`` with a path basis.

    ``basis`` is ordered by (length, arrow sequence); every path has a unique
    normal form as a combination of basis paths.
    """

    def __init__(self, quiver: Quiver, relations: Sequence[Relation], basis: Sequence[Path],
                 nilpotency_bound: int, reductions: Mapping[Path, Element]):
        self.quiver = quiver
        self.relations = tuple(relations)
        self.basis = tuple(basis)
        self.nilpotency_bound = nilpotency_bound
        self._index = {p: i for i, p in enumerate(self.basis)}
        self._reductions = dict(reductions)

    def __repr__(self) -> str:
        return f"PathAlgebra(vertices={list(self.quiver.vertices)}, dim={self.dim})"

    @property
    def vertices(self) -> tuple:
        return self.quiver.vertices

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, p: Path) -> int:
        return self._index[p]

    def basis_between(self, src, tgt) -> list[int]:
        """Indices of basis paths from ``src`` to ``tgt`` in basis order."""
        return self._between[(src, tgt)]

    @cached_property
    def _between(self) -> dict:
        out = {(s, t): [] for s in self.vertices for t in self.vertices}
        for i, p in enumerate(self.basis):
            out[(p.source, p.target)].append(i)
        return out

    def normal_form(self, p: Path) -> Element:
        if p in self._index:
            return {self._index[p]: Fraction(1)}
        if p.length >= self.nilpotency_bound:
            return {}
        return dict(self._reductions.get(p, {}))

    def compose_paths(self, p: Path, q: Path) -> Element:
        """Normal form of ``p∘q`` (``q`` first)."""
        return self.normal_form(concat(p, q))

    @cached_property
    def _table(self) -> dict[tuple[int, int], Element]:
        tab = {}
        for i, p in enumerate(self.basis):
            for j, q in enumerate(self.basis):
                if q.target == p.source:
                    tab[(i, j)] = self.compose_paths(p, q)
        return tab

    def mul(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> Element:
        """Product ``x∘y`` of algebra elements (``y`` applied first)."""
        out: Element = {}
        for i, a in x.items():
            for j, b in y.items():
                prod = self._table.get((i, j))
                if not prod:
                    continue
                for k, c in prod.items():
                    v = out.get(k, 0) + a * b * c
                    if v:
                        out[k] = v
                    else:
                        out.pop(k, None)
        return out

    def idempotent(self, v) -> Element:
        return {self._index[trivial_path(v)]: Fraction(1)}

    def arrow_element(self, a: str) -> Element:
        return self.normal_form(path_from_arrows(self.quiver, [a]))

    def endpoints(self, x: Mapping[int, Fraction]) -> tuple | None:
        """Common (source, target) of a nonzero homogeneous element."""
        ends = {(self.basis[i].source, self.basis[i].target) for i, c in x.items() if c}
        if not ends:
            return None
        if len(ends) > 1:
            raise QuiverError("element is not homogeneous")
        return ends.pop()

    def element_str(self, x: Mapping[int, Fraction]) -> str:
        parts = []
        for i in sorted(x):
            c = x[i]
            if not c:
                continue
            lab = self.basis[i].label()
            parts.append(lab if c == 1 else f"-{lab}" if c == -1 else f"{frac_str(c)}*{lab}")
        return " + ".join(parts) if parts else "0"

    def cartan_matrix(self) -> "CartanMatrix":
        return cartan_matrix(self)

    def is_radical(self, x: Mapping[int, Fraction]) -> bool:
        return all(self.basis[i].length > 0 for i, c in x.items() if c)

    # serialization --------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt} for a in self.quiver.arrows],
            "relations": [[{"coeff": frac_str(c), "path": list(p.arrows)} for c, p in r.terms]
                          for r in self.relations],
        }


@dataclass(frozen=True)
class CartanMatrix:
    """Entry ``(i, j)`` counts basis paths from vertex ``i`` to vertex ``j``.

    With modules as covariant representations, ``dim Hom(P_i, P_j)`` equals
    the ``(j, i)`` entry.
    """

    vertices: tuple
    entries: Mat

    def __getitem__(self, ij) -> int:
        i, j = ij
        idx = {v: k for k, v in enumerate(self.vertices)}
        return int(self.entries[idx[i], idx[j]])

    def total(self) -> int:
        return int(sum(sum(r) for r in self.entries.rows))


def quotient_basis(quiver: Quiver, relations: Sequence[Relation], max_length: int | None = None) -> PathAlgebra:
    """Path basis of ``kQ/I`` by linear reduction of all paths up to ``max_length``.

    The ideal is accepted as admissible only if every path of length
    ``max_length`` lies in the span of the relation multiples ``u∘r∘v``;
    otherwise :class:`AdmissibilityError` is raised.
    """
    if max_length is None:
        max_length = len(quiver.arrows) + 2
    for r in relations:
        for _, p in r.terms:
            path_from_arrows(quiver, p.arrows)
    paths = enumerate_paths(quiver, max_length)
    by_pair: dict[tuple, list[Path]] = {}
    for p in paths:
        by_pair.setdefault((p.source, p.target), []).append(p)

    # all relation multiples u∘r∘v, split into those fully inside the window
    # and those needing truncation (only valid once admissibility is known)
    inside: dict[tuple, list[dict[Path, Fraction]]] = {}
    truncated: dict[tuple, list[dict[Path, Fraction]]] = {}
    for r in relations:
        lefts = [p for p in paths if p.source == r.target]
        rights = [p for p in paths if p.target == r.source]
        longest = max(t.length for _, t in r.terms)
        shortest = min(t.length for _, t in r.terms)
        for u in lefts:
            for v in rights:
                if u.length + v.length + shortest > max_length:
                    continue
                gen: dict[Path, Fraction] = {}
                for c, t in r.terms:
                    w = concat(u, concat(t, v))
                    if w.length <= max_length:
                        gen[w] = gen.get(w, 0) + c
                key = (v.source, u.target)
                if u.length + v.length + longest <= max_length:
                    inside.setdefault(key, []).append(gen)
                else:
                    truncated.setdefault(key, []).append(gen)

    reductions: dict[Path, Element] = {}
    basis: list[Path] = []
    for key, plist in by_pair.items():
        # descending order so the largest path in each generator is the pivot
        cols = sorted(plist, key=lambda p: _path_key(quiver, p), reverse=True)
        col = {p: i for i, p in enumerate(cols)}
        rows = [{col[p]: c for p, c in g.items() if c} for g in inside.get(key, [])]
        echelon_rows = rref(rows)
        for p in cols:
            if p.length == max_length:
                nf = _reduce_vector({col[p]: Fraction(1)}, echelon_rows)
                if nf:
                    raise AdmissibilityError(
                        f"path {p} of length {max_length} is not in the ideal; "
                        "the ideal is not admissible within the bound")
        rows += [{col[p]: c for p, c in g.items() if c} for g in truncated.get(key, [])]
        rows += [{col[p]: Fraction(1)} for p in cols if p.length == max_length]
        red = rref(rows)
        std = [p for p in cols if col[p] not in red]
        key_basis = sorted(std, key=lambda p: _path_key(quiver, p))
        basis.extend(key_basis)
        for p in cols:
            if col[p] in red:
                row = red[col[p]]
                reductions[p] = {cols[j]: -c for j, c in row.items() if j != col[p]}
    basis.sort(key=lambda p: _path_key(quiver, p))
    index = {p: i for i, p in enumerate(basis)}
    reductions_idx = {p: {index[q]: c for q, c in nf.items() if c} for p, nf in reductions.items()}
    return PathAlgebra(quiver, relations, basis, max_length, reductions_idx)


def _reduce_vector(v: dict[int, Fraction], basis: Mapping[int, dict[int, Fraction]]) -> dict[int, Fraction]:
    v = dict(v)
    for p in sorted(k for k in v if k in basis):
        f = v.get(p)
        if not f:
            continue
        for k, c in basis[p].items():
            nv = v.get(k, 0) - f * c
            if nv:
                v[k] = nv
            else:
                v.pop(k, None)
    return v


def cartan_matrix(alg: PathAlgebra) -> CartanMatrix:
    vs = alg.vertices
    return CartanMatrix(vs, Mat([[len(alg.basis_between(i, j)) for j in vs] for i in vs]))


def compose_paths(alg: PathAlgebra, p: Path, q: Path) -> Element:
    return alg.compose_paths(p, q)


# ---------------------------------------------------------------------------
# JSON


def algebra_from_json(data: Mapping | str, max_length: int | None = None) -> PathAlgebra:
    if isinstance(data, str):
        data = json.loads(data)
    q = build_quiver(data["vertices"], data["arrows"])
    rels = [make_relation(q, [(t["coeff"], t["path"]) for t in rel]) for rel in data.get("relations", [])]
    return quotient_basis(q, rels, max_length)


def bondal_algebra() -> PathAlgebra:
    """The Bondal quiver ``1 ⇉ 2 ⇉ 3`` with ``b2∘a1 = a2∘b1 = 0``."""
    q = build_quiver([1, 2, 3], [("a1", 1, 2), ("b1", 1, 2), ("a2", 2, 3), ("b2", 2, 3)])
    rels = [make_relation(q, [(1, ["a1", "b2"])]), make_relation(q, [(1, ["b1", "a2"])])]
    return quotient_basis(q, rels)
