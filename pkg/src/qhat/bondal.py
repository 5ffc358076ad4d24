"""Fixtures and verification suite for the Bondal quiver.

Every named object and morphism lives in the JSON files under
``qhat/fixtures`` (or the directory named by ``QHAT_FIXTURES``).  Loading
turns each display into a :class:`Representation`, :class:`BoundedComplex`
or :class:`ChainMap` and refuses to continue if any of them fails to
validate.  :func:`verify` then runs named checks against the loaded set and
collects the outcome in a :class:`VerificationReport`.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Mapping

from .chaincat import (
    BoundedComplex,
    ChainMap,
    ComplexError,
    Homotopy,
    _add_module_block,
    _extract_module,
    cone,
    homotopic,
    identity_map,
    induced_map,
    is_acyclic,
    is_quasi_iso,
    null_homotopic,
    projective_replacement,
    shift,
    shift_map,
    sum_complex_from_json,
)
from .functors import (
    check_naturality,
    coevaluation,
    derived_morphism_basis,
    evaluation,
    left_mutate,
    left_mutation_route,
    minimal_projective,
    right_mutate,
    serre,
    serre_inverse,
    serre_inverse_route,
    serre_map,
    serre_sub_inverse,
    shift_route,
    spherical_twist,
)
from .homalg import (
    as_complex,
    derived_iso,
    euler_characteristic,
    euler_form,
    ext1_simples,
    ext_quiver,
    is_acyclic_quiver,
    is_exceptional,
    k0_class,
    minimal_model,
    pair,
    self_ext_dims,
)
from .chaincat import derived_hom_dims
from .linalg import LinearSystem, Mat, as_fraction, frac_str
from .pathalg import PathAlgebra, bondal_algebra
from .repcore import (
    RepMorphism,
    Representation,
    RepresentationError,
    direct_sum,
    hom_dim,
    injective,
    is_isomorphic,
    is_projective,
    is_injective,
    projective,
    simple,
)

FORMAT = "qhat-fixtures/1"
FIXTURE_FILES = ("modules.json", "complexes.json", "maps.json", "ladder_i3_i2.json",
                 "ladder_i2_i1.json", "families.json")
DEFAULT_SEED = 0
WINDOW = range(-4, 5)


class FixtureError(ValueError):
    """A display failed to validate; ``display`` names the offending entry."""

    def __init__(self, display: str, message: str):
        super().__init__(f"{display}: {message}")
        self.display = display


class UnknownCheckError(KeyError):
    pass


# ---------------------------------------------------------------------------
# matrices as written in the displays


def fixture_dir() -> Path:
    env = os.environ.get("QHAT_FIXTURES")
    if env:
        return Path(env)
    return Path(str(resources.files("qhat") / "fixtures"))


def _entry(x, params: Mapping[str, int] | None = None) -> Fraction:
    if isinstance(x, str) and params and x in params:
        return Fraction(params[x])
    return as_fraction(x)


def parse_matrix(spec, shape: tuple[int, int], where: str,
                 params: Mapping[str, int] | None = None) -> tuple[Mat, str | None]:
    """Turn a displayed matrix into a :class:`Mat` of ``shape``.

    Accepts nested lists, a scalar (a ``1x1`` block, or zero of any shape),
    and ``"id"``.  A row vector written where a column is needed (or the
    reverse) is transposed; the returned note records that.
    """
    m, n = shape
    if isinstance(spec, str) and spec == "id":
        if m != n:
            raise FixtureError(where, f"'id' used for a {m}x{n} block")
        return Mat.identity(m), None
    if not isinstance(spec, list):
        c = _entry(spec, params)
        if c == 0:
            return Mat.zeros(m, n), None
        if (m, n) != (1, 1):
            raise FixtureError(where, f"scalar {spec} used for a {m}x{n} block")
        return Mat([[c]]), None
    rows = [[_entry(x, params) for x in row] for row in spec]
    r = len(rows)
    c = len(rows[0]) if rows else 0
    if any(len(row) != c for row in rows):
        raise FixtureError(where, "ragged matrix")
    if (r, c) == (m, n):
        return Mat(rows, ncols=n), None
    if (c, r) == (m, n) and (r == 1 or c == 1):
        return Mat([list(col) for col in zip(*rows)], ncols=n), "vector transposed to fit"
    raise FixtureError(where, f"matrix is {r}x{c}, expected {m}x{n}")


# ---------------------------------------------------------------------------
# completion of partially drawn module and chain maps


def _complete(blocks: dict, given: dict, build_equations, where: str) -> tuple[dict, str | None]:
    """Solve for the blocks absent from ``given``.

    ``blocks`` maps key -> (rows, cols); ``build_equations(sys)`` adds the
    linear constraints.  A unique completion is required; when the constraints
    leave freedom the undrawn blocks are read as zero, provided that is
    consistent.
    """
    missing = [k for k, (r, c) in blocks.items() if k not in given and r * c]
    if not missing:
        out = dict(given)
        for k, (r, c) in blocks.items():
            out.setdefault(k, Mat.zeros(r, c))
        return out, None

    def attempt(zero_missing: bool):
        sys = LinearSystem()
        for k, (r, c) in blocks.items():
            sys.add_block(k, r, c)
        for k, M in given.items():
            sys.matrix_equation([(1, None, k, None)], M, blocks[k])
        if zero_missing:
            for k in missing:
                sys.matrix_equation([(1, None, k, None)], None, blocks[k])
        build_equations(sys)
        return sys, sys.solve()

    sys, res = attempt(False)
    if res is None:
        raise FixtureError(where, "displayed entries admit no completion")
    x, kern = res
    note = "undrawn entries completed uniquely"
    if kern:
        sys, res = attempt(True)
        if res is None:
            raise FixtureError(where, "undrawn entries are ambiguous and cannot be read as zero")
        x, _ = res
        note = "undrawn entries read as zero"
    out = dict(given)
    for k in missing:
        out[k] = sys.extract(x, k)
    for k, (r, c) in blocks.items():
        if k not in out:
            out[k] = Mat.zeros(r, c)
    return out, note


def complete_module_map(M: Representation, N: Representation, given: Mapping, where: str,
                        params=None) -> tuple[RepMorphism, str | None]:
    alg = M.algebra
    blocks = {v: (N.dim(v), M.dim(v)) for v in alg.vertices}
    fixed, notes = {}, []
    for v, spec in given.items():
        v = _vertex(alg, v, where)
        mat, note = parse_matrix(spec, blocks[v], f"{where} vertex {v}", params)
        fixed[v] = mat
        if note:
            notes.append(f"vertex {v}: {note}")

    def eqs(sys):
        for a in alg.quiver.arrows:
            sys.matrix_equation([(1, N.maps[a.id], a.src, None), (-1, None, a.tgt, M.maps[a.id])],
                                None, (N.dim(a.tgt), M.dim(a.src)))

    full, note = _complete(blocks, fixed, eqs, where)
    if note:
        notes.append(note)
    f = RepMorphism(M, N, full, check=False)
    if not f.intertwines():
        raise FixtureError(where, "not a module map")
    return f, "; ".join(notes) or None


def complete_chain_map(X: BoundedComplex, Y: BoundedComplex, given: Mapping, where: str) -> tuple[ChainMap, str | None]:
    alg = X.algebra
    blocks, fixed, notes = {}, {}, []
    for n in X.degrees:
        for v in alg.vertices:
            blocks[(n, v)] = (Y.obj(n).dim(v), X.obj(n).dim(v))
    for n_str, comp in given.items():
        n = int(n_str)
        for v, spec in comp.items():
            v = _vertex(alg, v, where)
            if n not in X.degrees:
                raise FixtureError(where, f"component in degree {n}, where the source vanishes")
            mat, note = parse_matrix(spec, blocks[(n, v)], f"{where} degree {n} vertex {v}")
            fixed[(n, v)] = mat
            if note:
                notes.append(f"degree {n} vertex {v}: {note}")

    def eqs(sys):
        for n in X.degrees:
            Xn, Yn = X.obj(n), Y.obj(n)
            for a in alg.quiver.arrows:
                sys.matrix_equation([(1, Yn.maps[a.id], (n, a.src), None), (-1, None, (n, a.tgt), Xn.maps[a.id])],
                                    None, (Yn.dim(a.tgt), Xn.dim(a.src)))
        for n in range(X.bottom - 1, X.top + 1):
            for v in alg.vertices:
                terms = []
                if n in X.degrees:
                    terms.append((1, Y.d(n)[v], (n, v), None))
                if n + 1 in X.degrees:
                    terms.append((-1, None, (n + 1, v), X.d(n)[v]))
                if terms:
                    sys.matrix_equation(terms, None, (Y.obj(n + 1).dim(v), X.obj(n).dim(v)))

    full, note = _complete(blocks, fixed, eqs, where)
    if note:
        notes.append(note)
    comps = {n: RepMorphism(X.obj(n), Y.obj(n), {v: full[(n, v)] for v in alg.vertices}, check=False)
             for n in X.degrees}
    try:
        f = ChainMap(X, Y, comps)
    except ComplexError as exc:
        raise FixtureError(where, str(exc)) from None
    return f, "; ".join(notes) or None


def _vertex(alg: PathAlgebra, v, where: str):
    for w in alg.vertices:
        if str(w) == str(v):
            return w
    raise FixtureError(where, f"unknown vertex {v!r}")


# ---------------------------------------------------------------------------
# the fixture set


@dataclass
class Ladder:
    """A chain-level verification ladder: displayed maps plus the claims about them."""
    name: str
    basis: dict[str, dict]
    maps: dict[str, ChainMap]
    claims: list[dict]


@dataclass
class FixtureSet:
    algebra: PathAlgebra
    modules: dict[str, Representation]
    objects: dict[str, BoundedComplex]
    maps: dict[str, ChainMap]
    ladders: dict[str, Ladder]
    families: dict[str, dict]
    family_config: dict[str, dict]
    provenance: dict[str, dict]
    digest: str
    directory: str

    def obj(self, name: str) -> BoundedComplex:
        if name in self.objects:
            return self.objects[name]
        raise KeyError(f"unknown fixture {name!r}")

    def map(self, name: str) -> ChainMap:
        if name in self.maps:
            return self.maps[name]
        raise KeyError(f"unknown map {name!r}")

    def resolve(self, name: str):
        """Look up an object or module by name, accepting a ``[n]`` shift suffix."""
        m = re.fullmatch(r"(.+?)\[(-?\d+)\]", name)
        if m:
            return shift(self.resolve(m.group(1)), int(m.group(2)))
        if name in self.objects:
            return self.objects[name]
        for fam in self.families.values():
            if name in fam:
                return fam[name]
        raise KeyError(f"unknown fixture {name!r}")


def _read(directory: Path, fname: str) -> dict:
    path = directory / fname
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise FixtureError(fname, f"missing fixture file in {directory}") from None
    except json.JSONDecodeError as exc:
        raise FixtureError(fname, f"malformed JSON: {exc}") from None
    if data.get("format") != FORMAT:
        raise FixtureError(fname, f"unsupported format {data.get('format')!r}")
    return data


def fixture_digest(directory: Path | None = None) -> str:
    directory = Path(directory) if directory is not None else fixture_dir()
    h = hashlib.sha256()
    for fname in FIXTURE_FILES:
        h.update(fname.encode())
        try:
            h.update((directory / fname).read_bytes())
        except FileNotFoundError:
            raise FixtureError(fname, f"missing fixture file in {directory}") from None
    return h.hexdigest()


def build_module(alg: PathAlgebra, name: str, spec: Mapping, params=None) -> Representation:
    dims = [int(d) for d in spec["dims"]]
    dv = dict(zip(alg.vertices, dims))
    arrows = alg.quiver.arrow_by_id
    maps = {}
    for aid, m in spec.get("maps", {}).items():
        if aid not in arrows:
            raise FixtureError(name, f"unknown arrow {aid!r}")
        a = arrows[aid]
        maps[aid], _ = parse_matrix(m, (dv[a.tgt], dv[a.src]), f"{name} arrow {aid}", params)
    try:
        return Representation(alg, dims, maps, name=name)
    except RepresentationError as exc:
        raise FixtureError(name, str(exc)) from None


_STANDARD = {"proj": projective, "inj": injective, "simple": simple}


class _Loader:
    def __init__(self, directory: Path):
        self.dir = directory
        self.alg = bondal_algebra()
        self.raw_modules = _read(directory, "modules.json")["modules"]
        self.raw_objects = _read(directory, "complexes.json")["objects"]
        self.raw_maps = _read(directory, "maps.json")["maps"]
        self.modules: dict[str, Representation] = {}
        self.objects: dict[str, BoundedComplex] = {}
        self.maps: dict[str, ChainMap] = {}
        self.provenance: dict[str, dict] = {}
        self._busy: set[str] = set()

    # modules -----------------------------------------------------------

    def module(self, name: str) -> Representation:
        hit = self.modules.get(name)
        if hit is not None:
            return hit
        spec = self.raw_modules.get(name)
        if spec is None:
            raise FixtureError(name, "unknown module")
        M = build_module(self.alg, name, spec)
        std = spec.get("standard")
        if std:
            kind, v = std
            ref = _STANDARD[kind](self.alg, _vertex(self.alg, v, name))
            if ref.dims != M.dims or any(ref.maps[a] != M.maps[a] for a in M.maps):
                raise FixtureError(name, f"displayed arrows differ from the computed {kind} module")
        self.modules[name] = M
        self.provenance[name] = {"display": spec.get("display", ""), "kind": "module"}
        return M

    def term(self, spec, where: str) -> Representation:
        if isinstance(spec, str):
            return self.module(spec)
        parts = [self.module(p) for p in spec["sum"]]
        S = direct_sum(parts, self.alg).rep
        if "maps" not in spec:
            return S
        dims = spec.get("dims", list(S.dims))
        given = {"dims": dims, "maps": {}}
        for a in self.alg.quiver.arrows:
            if a.id in spec["maps"]:
                given["maps"][a.id] = spec["maps"][a.id]
            elif dims == list(S.dims):
                m = S.maps[a.id]
                given["maps"][a.id] = [list(r) for r in m.rows] if m.nrows * m.ncols else 0
        M = build_module(self.alg, where, given)
        if not is_isomorphic(M, S):
            raise FixtureError(where, "explicit term is not isomorphic to the stated direct sum")
        return M

    # objects -----------------------------------------------------------

    def obj(self, name: str) -> BoundedComplex:
        hit = self.objects.get(name)
        if hit is not None:
            return hit
        if name in self._busy:
            raise FixtureError(name, "circular definition")
        if name not in self.raw_objects and name in self.raw_modules:
            X = BoundedComplex.module(self.module(name))
            self.objects[name] = X
            return X
        spec = self.raw_objects.get(name)
        if spec is None:
            raise FixtureError(name, "unknown object")
        self._busy.add(name)
        try:
            X = self._build_object(name, spec)
        finally:
            self._busy.discard(name)
        X.name = name
        self.objects[name] = X
        self.provenance.setdefault(name, {"display": spec.get("display", ""), "kind": "object"})
        return X

    def _build_object(self, name: str, spec: Mapping) -> BoundedComplex:
        if "terms" in spec:
            return self._explicit_complex(name, spec)
        if "cone" in spec:
            f = self.map(spec["cone"])
            c = cone(f)
            c.complex.name = name
            self.maps[f"{name}.inc"] = c.inclusion
            self.maps[f"{name}.proj"] = c.projection
            return c.complex
        if "shift" in spec:
            return shift(self.obj(spec["shift"]), int(spec["by"]))
        if "serre" in spec:
            return serre(self.obj(spec["serre"]))
        if "cocone_generator" in spec:
            src, tgt = spec["cocone_generator"]
            basis = derived_morphism_basis(self.obj(src), self.obj(tgt))
            if len(basis) != 1:
                raise FixtureError(name, f"Hom({src}, {tgt}) has dimension {len(basis)}, expected 1")
            return shift(cone(basis[0]).complex, -1)
        raise FixtureError(name, "unrecognized object specification")

    def _explicit_complex(self, name: str, spec: Mapping) -> BoundedComplex:
        terms = sorted(spec["terms"], key=lambda t: int(t["degree"]))
        degs = [int(t["degree"]) for t in terms]
        if degs != list(range(degs[0], degs[0] + len(degs))):
            raise FixtureError(name, "terms must occupy consecutive degrees")
        objs = [self.term(t["module"], f"{name} degree {t['degree']}") for t in terms]
        diffs, notes = [], []
        for k in range(len(objs) - 1):
            n = degs[k]
            given = spec.get("diffs", {}).get(str(n), {})
            d, note = complete_module_map(objs[k], objs[k + 1], given, f"{name} differential {n}")
            diffs.append(d)
            if note:
                notes.append(f"differential {n}: {note}")
        try:
            X = BoundedComplex(self.alg, degs[0], objs, diffs, name=name)
        except ComplexError as exc:
            raise FixtureError(name, str(exc)) from None
        self.provenance[name] = {"display": spec.get("display", ""), "kind": "complex", "notes": notes}
        return X

    # maps --------------------------------------------------------------

    def map(self, name: str) -> ChainMap:
        hit = self.maps.get(name)
        if hit is not None:
            return hit
        spec = self.raw_maps.get(name)
        if spec is None:
            m = re.fullmatch(r"(.+)\.(inc|proj)", name)
            if m:
                self.obj(m.group(1))
                if name in self.maps:
                    return self.maps[name]
            raise FixtureError(name, "unknown map")
        f = self._build_map(name, spec, name)
        self.maps[name] = f
        return f

    def _build_map(self, name: str, spec: Mapping, key: str) -> ChainMap:
        X, Y = self.obj(spec["source"]), self.obj(spec["target"])
        f, note = complete_chain_map(X, Y, spec.get("components", {}), key)
        self.provenance[key] = {"display": spec.get("display", ""), "kind": "map",
                                "provenance": spec.get("provenance", "displayed"),
                                "note": "; ".join(x for x in (spec.get("note"), note) if x)}
        return f

    def ladder(self, fname: str) -> Ladder:
        data = _read(self.dir, fname)
        lname = fname.rsplit(".", 1)[0]
        maps = {}
        # ladder maps live in their own namespace: step names repeat across ladders
        for name, spec in data["maps"].items():
            key = f"{lname}:{name}"
            maps[name] = self._build_map(name, spec, key)
            self.provenance[key]["ladder"] = lname
        return Ladder(lname, data["basis"], maps, data["claims"])

    def families(self) -> tuple[dict, dict]:
        data = _read(self.dir, "families.json")["families"]
        out = {}
        tor = data["torsion"]
        out["torsion"] = {}
        for a, b in tor["samples"]:
            name = f"T_{a}_{b}"
            params = dict(zip(tor["params"], (a, b)))
            for x in params.values():
                if x == 0:
                    raise FixtureError(name, "torsion parameters must be nonzero")
            M = build_module(self.alg, name, tor, params)
            out["torsion"][name] = BoundedComplex.module(M)
        pic = data["pic0"]
        out["pic0"] = {}
        for (k,) in pic["samples"]:
            name = f"M_{k}"
            if k == 0:
                raise FixtureError(name, "the scalar must be nonzero")
            text = json.dumps(pic["complex"]).replace("{k}", str(k))
            try:
                C = sum_complex_from_json(self.alg, json.loads(text)).realize(name=name)
            except (ComplexError, ValueError) as exc:
                raise FixtureError(name, str(exc)) from None
            out["pic0"][name] = C
        return out, data


_CACHE: dict[tuple[str, str], FixtureSet] = {}


def load_fixtures(directory: str | Path | None = None) -> FixtureSet:
    """Load and validate every fixture; raises :class:`FixtureError` naming the first bad display."""
    directory = Path(directory) if directory is not None else fixture_dir()
    digest = fixture_digest(directory)
    key = (str(directory), digest)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    L = _Loader(directory)
    for name in L.raw_modules:
        L.obj(name)
    for name in L.raw_objects:
        L.obj(name)
    for name in L.raw_maps:
        L.map(name)
    ladders = {}
    for fname in ("ladder_i3_i2.json", "ladder_i2_i1.json"):
        lad = L.ladder(fname)
        ladders[lad.name] = lad
    fams, config = L.families()
    fs = FixtureSet(L.alg, L.modules, L.objects, L.maps, ladders, fams, config, L.provenance,
                    digest, str(directory))
    _CACHE[key] = fs
    return fs


# ---------------------------------------------------------------------------
# map expressions used by ladder claims


def _factor(fs: FixtureSet, lad: Ladder, tok: str) -> ChainMap:
    m = re.fullmatch(r"(.+?)\[(-?\d+)\]", tok)
    if m:
        return shift_map(_factor(fs, lad, m.group(1)), int(m.group(2)))
    if tok in lad.maps:
        return lad.maps[tok]
    if tok in fs.maps:
        return fs.maps[tok]
    raise KeyError(f"unknown map {tok!r} in ladder {lad.name}")


def evaluate(fs: FixtureSet, lad: Ladder, expr: str) -> ChainMap:
    """Evaluate ``a * b - c * d`` style expressions (``*`` is composition)."""
    tokens = re.split(r"\s+([+-])\s+", expr.strip())
    total, sign = None, 1
    for i, tok in enumerate(tokens):
        if i % 2:
            sign = 1 if tok == "+" else -1
            continue
        factors = [_factor(fs, lad, t.strip()) for t in tok.split("*")]
        f = factors[-1]
        for g in reversed(factors[:-1]):
            if g.source.total_dims() != f.target.total_dims():
                raise ComplexError(f"cannot compose in {expr!r}")
            f = g @ f
        f = f if sign == 1 else -f
        total = f if total is None else total + f
    return total


def _homotopy_json(h: Homotopy) -> dict:
    return {str(n): g.to_json() for n, g in sorted(h.comps.items()) if not g.is_zero()}


def run_claim(fs: FixtureSet, lad: Ladder, claim: Mapping, b: str | None) -> dict:
    subst = {}
    if b is not None:
        subst = {"{b}": b, "{s}": lad.basis[b]["serre_inverse"]}

    def fill(s: str) -> str:
        for k, v in subst.items():
            s = s.replace(k, v)
        return s

    cid = claim["id"] + (f"/{b}" if b else "")
    out = {"claim": cid, "statement": claim["statement"]}
    kind = claim["kind"]
    try:
        if kind == "null":
            f = evaluate(fs, lad, fill(claim["lhs"]))
            h = null_homotopic(f)
            out["ok"] = h is not None
            out["witness"] = _homotopy_json(h) if h is not None else None
        elif kind in ("equal", "homotopic"):
            f = evaluate(fs, lad, fill(claim["lhs"]))
            g = evaluate(fs, lad, fill(claim["rhs"]))
            diff = f - g
            if diff.is_zero():
                out["ok"], out["exact"] = True, True
            elif kind == "equal":
                out["ok"], out["exact"] = False, False
                out["difference"] = diff.to_json()
            else:
                h = null_homotopic(diff)
                out["ok"], out["exact"] = h is not None, False
                out["witness"] = _homotopy_json(h) if h is not None else None
                if h is None:
                    out["difference"] = diff.to_json()
        elif kind == "derive":
            along = evaluate(fs, lad, fill(claim["along"]))
            target = evaluate(fs, lad, fill(claim["target"]))
            expect = evaluate(fs, lad, fill(claim["expect"]))
            sol = induced_map(along, target, claim["side"])
            if sol is None:
                out["ok"], out["reason"] = False, "no solution"
            else:
                h = null_homotopic(sol.map - expect)
                out["ok"] = sol.unique and h is not None
                out["unique"] = sol.unique
                out["derived"] = sol.map.to_json()
                if h is None:
                    out["reason"] = "derived map differs from the display"
        else:
            raise KeyError(f"unknown claim kind {kind!r}")
    except (KeyError, ValueError) as exc:
        out["ok"], out["reason"] = False, f"{type(exc).__name__}: {exc}"
    return out


def run_ladder(fs: FixtureSet, name: str) -> list[dict]:
    lad = fs.ladders[name]
    results = [{"claim": "displays-validate", "ok": True, "statement": "every displayed map is a chain map",
                "maps": sorted(lad.maps)}]
    for claim in lad.claims:
        text = json.dumps(claim)
        if claim.get("per_basis", True) and ("{b}" in text or "{s}" in text):
            for b in lad.basis:
                results.append(run_claim(fs, lad, claim, b))
        else:
            results.append(run_claim(fs, lad, claim, None))
    return results


# ---------------------------------------------------------------------------
# report


@dataclass
class CheckResult:
    check: str
    status: str
    witness: list[dict]
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class VerificationReport:
    seed: int
    fixture_hash: str
    entries: list[CheckResult] = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(1 for e in self.entries if not e.passed)

    def timings(self) -> dict[str, float]:
        return {e.check: round(e.seconds, 4) for e in self.entries}

    def to_json(self, timings: bool = False) -> dict:
        data = {
            "seed": self.seed,
            "fixture_hash": self.fixture_hash,
            "checks": [{"check": e.check, "status": e.status, "witness": e.witness} for e in self.entries],
            "failures": self.failures,
        }
        if timings:
            data["timings"] = self.timings()
        return data

    def dumps(self, timings: bool = False) -> str:
        return json.dumps(self.to_json(timings), indent=2, sort_keys=True, default=_json_default)


def _json_default(x):
    if isinstance(x, Fraction):
        return frac_str(x)
    if isinstance(x, (set, frozenset, tuple)):
        return list(x)
    raise TypeError(f"not serializable: {type(x).__name__}")


# ---------------------------------------------------------------------------
# checks


def _sub(name: str, ok: bool, **data) -> dict:
    return {"claim": name, "ok": bool(ok), **data}


def _iso(name: str, X, Y, seed: int) -> dict:
    r = derived_iso(X, Y, seed)
    return _sub(name, r.isomorphic and r.certified, certified=r.certified, reason=r.reason,
                witness=r.witness_json())


def check_hom_table(fs: FixtureSet, seed: int) -> list[dict]:
    out = []
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            d = hom_dim(fs.modules[f"P{i}"], fs.modules[f"P{j}"])
            expected = 2 if i > j else 1 if i == j else 0
            out.append(_sub(f"Hom(P{i},P{j})", d == expected, dim=d, expected=expected))
    return out


def _module_map(f: ChainMap) -> RepMorphism:
    return f[0]


def check_serre_projectives(fs: FixtureSet, seed: int) -> list[dict]:
    out = []
    isos = {}
    for i in (1, 2, 3):
        SP = serre(fs.obj(f"P{i}"))
        out.append(_iso(f"S(P{i}) = I{i}", SP, fs.obj(f"I{i}"), seed))
        # S of a projective module is its injective partner, one term in degree 0
        psi = is_isomorphic(SP.obj(0), fs.modules[f"I{i}"], seed)
        isos[i] = psi.witness if psi else None
    for p, f, (i, j) in (("p32_1", "f1", (3, 2)), ("p32_2", "f2", (3, 2)),
                         ("p21_1", "g1", (2, 1)), ("p21_2", "g2", (2, 1))):
        Sp = serre_map(fs.map(p))
        img = isos[j] @ _module_map(Sp) @ isos[i].inverse()
        disp = _module_map(fs.map(f))
        out.append(_sub(f"S({p})", _proportional(img, disp) is not None,
                        scalar=frac_str(_proportional(img, disp) or 0), image=img.to_json()))
    # one scalar per pair of basis maps: the basis change is an automorphism of each I_i
    for a, b in (("p32_1", "p32_2"), ("p21_1", "p21_2")):
        fa, fb = {"p32_1": "f1", "p32_2": "f2", "p21_1": "g1", "p21_2": "g2"}[a], \
            {"p32_1": "f1", "p32_2": "f2", "p21_1": "g1", "p21_2": "g2"}[b]
        i, j = (3, 2) if a.startswith("p32") else (2, 1)
        ca = _proportional(isos[j] @ _module_map(serre_map(fs.map(a))) @ isos[i].inverse(), _module_map(fs.map(fa)))
        cb = _proportional(isos[j] @ _module_map(serre_map(fs.map(b))) @ isos[i].inverse(), _module_map(fs.map(fb)))
        out.append(_sub(f"common scalar {a},{b}", ca is not None and ca == cb))
    return out


def _proportional(f: RepMorphism, g: RepMorphism) -> Fraction | None:
    """The nonzero ``c`` with ``f = c g``, if any."""
    vf, vg = f.vector(), g.vector()
    c = None
    for x, y in zip(vf, vg):
        if y == 0:
            if x != 0:
                return None
            continue
        r = Fraction(x) / Fraction(y)
        if c is None:
            c = r
        elif r != c:
            return None
    return c if c else None


def check_exceptional_pair(fs: FixtureSet, seed: int) -> list[dict]:
    P, Pt = fs.obj("P"), fs.obj("Pt")
    SP = fs.obj("SP")
    return [
        _sub("P exceptional", is_exceptional(P)),
        _sub("P tilde exceptional", is_exceptional(Pt)),
        _iso("S(P) = P tilde[2]", SP, shift(Pt, 2), seed),
        _iso("S^2(P) = P[4]", serre(SP), shift(P, 4), seed),
    ]


def check_spherical_object(fs: FixtureSet, seed: int) -> list[dict]:
    P, E = fs.obj("P"), fs.obj("E")
    hom = derived_hom_dims(P, E, WINDOW)
    ext = self_ext_dims(E, range(-4, 8))
    expected = {n: (1 if n in (0, 3) else 0) for n in range(-4, 8)}
    k0 = k0_class(E)
    return [
        _sub("Hom(P, E[n]) = 0", all(v == 0 for v in hom.values()), dims=hom),
        _sub("Ext(E, E) = (1,0,0,1)", ext == expected, dims=ext),
        _iso("S_sub^-1(E) = E[-3]", serre_sub_inverse(P, E), shift(E, -3), seed),
        _sub("[E] = 0", k0.is_zero(), k0=list(k0.coords)),
    ]


def check_orthogonal_membership(fs: FixtureSet, seed: int) -> list[dict]:
    P = fs.obj("P")
    out = []
    for name in ("Ct", "D"):
        dims = derived_hom_dims(P, fs.obj(name), WINDOW)
        out.append(_sub(f"Hom(P, {name}[n]) = 0", all(v == 0 for v in dims.values()), dims=dims))
    form = euler_form(fs.algebra)
    chi_form = pair(form, k0_class(P), k0_class(fs.obj("D")))
    chi_ext = euler_characteristic(P, fs.obj("D"))
    out.append(_sub("chi(P, D) = 0 (K0 route)", chi_form == 0, value=chi_form))
    out.append(_sub("chi(P, D) = 0 (Ext route)", chi_ext == 0, value=chi_ext))
    return out


_TRIANGLES = (("I3", "P3_1", "Ct"), ("I2", "P2_1", "A"), ("I1", "P1_1", "D1"))


def check_decomposition_triangles(fs: FixtureSet, seed: int) -> list[dict]:
    P, SP, Pt1 = fs.obj("P"), fs.obj("SP"), fs.obj("Pt_1")
    out = []
    for inj, proj, part in _TRIANGLES:
        X = fs.obj(part)
        out.append(_iso(f"L_P({inj}) = {part}", left_mutate(P, fs.obj(inj)), X, seed))
        out.append(_iso(f"P-component of {inj}", evaluation(P, fs.obj(inj)).source, P, seed))
        out.append(_iso(f"R_S(P)({proj}) = {part}", right_mutate(SP, fs.obj(proj)), X, seed))
        out.append(_iso(f"S(P)-component of {proj}", coevaluation(SP, fs.obj(proj)).target, Pt1, seed))
    for m in ("A_to_CPI2", "CP2_to_A", "r_Ct"):
        out.append(_sub(f"{m} is a quasi-isomorphism", is_quasi_iso(fs.map(m))))
    return out


def check_extension_algebras(fs: FixtureSet, seed: int) -> list[dict]:
    P = fs.obj("P")
    out = []
    for name, expected in (("Ct", (0, 1, 1)), ("A", (0, 1, 1)), ("D", (1, 1, 0))):
        dims = derived_hom_dims(fs.obj(name), P, range(0, 3))
        got = tuple(dims[n] for n in range(3))
        out.append(_sub(f"Hom(P-side)({name}, P)", got == expected, dims=list(got), expected=list(expected)))
    return out


def check_resolutions(fs: FixtureSet, seed: int) -> list[dict]:
    out = []
    for name, test in (("P_A", is_projective), ("P_Ct", is_projective), ("I_A", is_injective), ("I_D", is_injective)):
        X = fs.obj(name)
        out.append(_sub(f"{name} terms", all(test(X.obj(n)) for n in X.degrees)))
    for m, res, target in (("eps_A", "P_A", "A"), ("iota_A", "I_A", "A"), ("eps_Ct", "P_Ct", "Ct")):
        out.append(_sub(f"{m} is a quasi-isomorphism", is_quasi_iso(fs.map(m))))
        out.append(_iso(f"{res} = {target}", fs.obj(res), fs.obj(target), seed))
    out.append(_sub("kappa_D1 is a quasi-isomorphism", is_quasi_iso(fs.map("kappa_D1"))))
    out.append(_iso("I_D = D", fs.obj("I_D"), fs.obj("D"), seed))
    return out


def check_triangularity(fs: FixtureSet, seed: int) -> list[dict]:
    alg = fs.algebra
    ext = ext1_simples(alg)
    quiver = ext_quiver(alg)
    arrows = [(i, j) for (i, j), m in quiver.items() for _ in range(m)]
    S2 = projective_replacement(fs.obj("S2")).structured
    M = minimal_model(fs.obj("S2"))[0].minimal
    sig = {str(n): list(v) for n, v in M.summand_signature().items() if v}
    return [
        _sub("Ext^1 between simples", True, dims={f"{i},{j}": d for (i, j), d in sorted(ext.items())}),
        _sub("Ext quiver acyclic", is_acyclic_quiver(alg.vertices, arrows), arrows=arrows),
        _sub("Ext^1(S2, S2) = 0", ext[(2, 2)] == 0),
        _sub("S2 resolved by P3+P3 -> P2", sig == {"-1": [3, 3], "0": [2]}, signature=sig),
    ]


def check_ladder_i3_i2(fs: FixtureSet, seed: int) -> list[dict]:
    return run_ladder(fs, "ladder_i3_i2")


def check_ladder_i2_i1(fs: FixtureSet, seed: int) -> list[dict]:
    return run_ladder(fs, "ladder_i2_i1")


ORTHOGONAL_SAMPLE = ("Ct", "A", "D1", "E")


def naturality_data(fs: FixtureSet):
    objs = {n: minimal_projective(fs.obj(n)).complex for n in ORTHOGONAL_SAMPLE}
    morphisms = {}
    for s in ORTHOGONAL_SAMPLE:
        for t in ORTHOGONAL_SAMPLE:
            for k, f in enumerate(derived_morphism_basis(fs.obj(s), fs.obj(t))):
                morphisms[f"{s}->{t}#{k}"] = (s, t, f)
    return objs, morphisms


def check_mutation_naturality(fs: FixtureSet, seed: int) -> list[dict]:
    SP, E = fs.obj("SP"), fs.obj("E")
    objs, morphisms = naturality_data(fs)
    F = left_mutation_route(SP, "L_S(P)")
    G = serre_inverse_route().then(shift_route(1))
    res = check_naturality(F, G, objs, morphisms, seed=seed)
    return [
        _sub("natural isomorphism on the sample", res.natural and res.certified, reason=res.reason,
             morphisms=sorted(morphisms), solution_dim=res.solution_dim),
        _iso("L_S(P)(E) = S^-1(E)[1]", left_mutate(SP, E), shift(serre_inverse(E), 1), seed),
    ]


def check_twist_route(fs: FixtureSet, seed: int) -> list[dict]:
    P, E = fs.obj("P"), fs.obj("E")
    out = []
    for name in ORTHOGONAL_SAMPLE:
        X = fs.obj(name)
        out.append(_iso(f"T_E({name})[-1] = S_sub^-1({name})", shift(spherical_twist(E, X), -1),
                        serre_sub_inverse(P, X), seed))
    return out


def _satisfies_relations(X: BoundedComplex) -> bool:
    """Recheck every term against the relations and every ``d∘d`` against zero."""
    for n in X.degrees:
        M = X.obj(n)
        try:
            Representation(M.algebra, M.dims, M.maps, check=True)
        except RepresentationError:
            return False
        if n + 1 in X.degrees and n + 1 < X.top and not (X.d(n + 1) @ X.d(n)).is_zero():
            return False
    return True


def check_families(fs: FixtureSet, seed: int) -> list[dict]:
    P = fs.obj("P")
    out = []
    for fam in ("torsion", "pic0"):
        for name, M in fs.families[fam].items():
            out.append(_sub(f"{name} satisfies the relations", _satisfies_relations(M)))
            out.append(_iso(f"S({name}) = {name}[1]", serre(M), shift(M, 1), seed))
            left = derived_hom_dims(M, P, WINDOW)
            right = derived_hom_dims(P, M, WINDOW)
            out.append(_sub(f"Hom({name}, P[n]) = 0", all(v == 0 for v in left.values()), dims=left))
            out.append(_sub(f"Hom(P, {name}[n]) = 0", all(v == 0 for v in right.values()), dims=right))
    return out


PROPERTY_OBJECTS = ("P1", "P2", "P3", "I1", "I2", "I3", "S1", "S2", "S3", "P", "Pt", "D", "Ct", "A", "E")
EULER_MODULES = ("P1", "P2", "P3", "I1", "I2", "I3")


def check_properties(fs: FixtureSet, seed: int) -> list[dict]:
    out = []
    bad = [n for n in sorted(fs.objects) if not is_acyclic(cone(identity_map(fs.objects[n])).complex)]
    out.append(_sub("cone of the identity is acyclic", not bad, failures=bad, objects=len(fs.objects)))
    bad = []
    for name in sorted(fs.maps):
        f = fs.maps[name]
        if k0_class(cone(f).complex) != k0_class(f.target) - k0_class(f.source):
            bad.append(name)
    out.append(_sub("K0 is additive on cones of fixture maps", not bad, failures=bad, maps=len(fs.maps)))
    bad = []
    serres = {n: serre(fs.obj(n)) for n in PROPERTY_OBJECTS}
    for x in PROPERTY_OBJECTS:
        for y in PROPERTY_OBJECTS:
            X, Y = fs.obj(x), fs.obj(y)
            lhs = derived_hom_dims(X, Y, WINDOW)
            rhs = derived_hom_dims(Y, serres[x], [-n for n in WINDOW])
            if any(lhs[n] != rhs[-n] for n in WINDOW):
                bad.append(f"{x},{y}")
    n_pairs = len(PROPERTY_OBJECTS) ** 2
    out.append(_sub("Serre duality dimension symmetry", not bad, failures=bad, pairs=n_pairs))
    form = euler_form(fs.algebra)
    bad = []
    for x in EULER_MODULES:
        for y in EULER_MODULES:
            X, Y = fs.obj(x), fs.obj(y)
            if pair(form, k0_class(X), k0_class(Y)) != euler_characteristic(X, Y):
                bad.append(f"{x},{y}")
    out.append(_sub("Euler form: K0 route = Ext route", not bad, failures=bad, pairs=len(EULER_MODULES) ** 2))
    return out


CHECKS: dict[str, Callable[[FixtureSet, int], list[dict]]] = {
    "hom-table": check_hom_table,
    "serre-projectives": check_serre_projectives,
    "exceptional-pair": check_exceptional_pair,
    "spherical-object": check_spherical_object,
    "orthogonal-membership": check_orthogonal_membership,
    "decomposition-triangles": check_decomposition_triangles,
    "extension-algebras": check_extension_algebras,
    "resolutions": check_resolutions,
    "triangularity": check_triangularity,
    "ladder-i3-i2": check_ladder_i3_i2,
    "ladder-i2-i1": check_ladder_i2_i1,
    "mutation-naturality": check_mutation_naturality,
    "twist-route": check_twist_route,
    "families": check_families,
    "properties": check_properties,
}


def run_check(name: str, fs: FixtureSet | None = None, seed: int = DEFAULT_SEED) -> CheckResult:
    if name not in CHECKS:
        raise UnknownCheckError(f"unknown check {name!r}; known: {', '.join(CHECKS)}")
    fs = fs or load_fixtures()
    t0 = time.perf_counter()
    try:
        subs = CHECKS[name](fs, seed)
        status = "pass" if all(s["ok"] for s in subs) else "fail"
    except Exception as exc:   # a crashing check is a failed check, with the error as its witness
        subs = [_sub("error", False, error=f"{type(exc).__name__}: {exc}")]
        status = "fail"
    return CheckResult(name, status, subs, time.perf_counter() - t0)


def verify(check: str | Iterable[str] | None = None, seed: int = DEFAULT_SEED,
           fixtures: FixtureSet | None = None) -> VerificationReport:
    """Run one check, several, or (``None`` / ``"all"``) every check."""
    if check is None or check == "all":
        names = list(CHECKS)
    elif isinstance(check, str):
        names = [check]
    else:
        names = list(check)
    for n in names:
        if n not in CHECKS:
            raise UnknownCheckError(f"unknown check {n!r}; known: {', '.join(CHECKS)}")
    fs = fixtures or load_fixtures()
    report = VerificationReport(seed, fs.digest)
    for n in names:
        report.entries.append(run_check(n, fs, seed))
    return report


__all__ = [
    "CHECKS",
    "CheckResult",
    "FixtureError",
    "FixtureSet",
    "Ladder",
    "UnknownCheckError",
    "VerificationReport",
    "complete_chain_map",
    "complete_module_map",
    "evaluate",
    "fixture_digest",
    "fixture_dir",
    "load_fixtures",
    "parse_matrix",
    "run_check",
    "run_claim",
    "run_ladder",
    "verify",
]
