"""Exact linear algebra over the rationals.

Dense matrices are immutable :class:`Mat` values holding :class:`fractions.Fraction`
entries.  All elimination goes through a sparse row-echelon engine (rows are
``dict[int, Fraction]``), which is what keeps the derived-category solves
tractable: the systems that arise are large but have a handful of nonzeros
per row.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Row = dict[int, Fraction]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


class Mat:
    """Immutable dense rational matrix."""

    __slots__ = ("rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable] = (), ncols: int | None = None):
        data = tuple(tuple(as_fraction(x) for x in r) for r in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(data[0])
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self.rows = data
        self.nrows = len(data)
        self.ncols = ncols
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, m: int, n: int) -> "Mat":
        z = Fraction(0)
        return cls(((z,) * n for _ in range(m)), ncols=n)

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls(((Fraction(int(i == j)) for j in range(n)) for i in range(n)), ncols=n)

    @classmethod
    def from_sparse(cls, m: int, n: int, entries: Mapping[tuple[int, int], Fraction]) -> "Mat":
        rows = [[Fraction(0)] * n for _ in range(m)]
        for (i, j), v in entries.items():
            rows[i][j] = as_fraction(v)
        return cls(rows, ncols=n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "Mat":
        return cls(((c[i] for c in cols) for i in range(nrows)), ncols=len(cols))

    # basic protocol -----------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shape, self.rows))
        return self._hash

    def __repr__(self) -> str:
        if self.nrows == 0 or self.ncols == 0:
            return f"Mat.zeros({self.nrows}, {self.ncols})"
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"Mat[{body}]"

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Mat":
        if self.nrows == 0:
            return Mat.zeros(self.ncols, 0)
        return Mat(zip(*self.rows), ncols=self.nrows)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def nonzero(self) -> Iterable[tuple[int, int, Fraction]]:
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                if x:
                    yield i, j, x

    def to_strings(self) -> list[list[str]]:
        return [[frac_str(x) for x in r] for r in self.rows]

    # arithmetic -----------------------------------------------------------
    def __add__(self, other: "Mat") -> "Mat":
        self._check_same(other)
        return Mat((tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), ncols=self.ncols)

    def __sub__(self, other: "Mat") -> "Mat":
        self._check_same(other)
        return Mat((tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), ncols=self.ncols)

    def __neg__(self) -> "Mat":
        return Mat((tuple(-a for a in r) for r in self.rows), ncols=self.ncols)

    def __mul__(self, c) -> "Mat":
        c = as_fraction(c)
        return Mat((tuple(c * a for a in r) for r in self.rows), ncols=self.ncols)

    __rmul__ = __mul__

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        n = other.ncols
        out = []
        orows = other.rows
        for r in self.rows:
            acc = [Fraction(0)] * n
            for k, a in enumerate(r):
                if a:
                    ok = orows[k]
                    for j in range(n):
                        b = ok[j]
                        if b:
                            acc[j] += a * b
            out.append(acc)
        return Mat(out, ncols=n)

    def _check_same(self, other: "Mat") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def apply(self, v: Sequence) -> list[Fraction]:
        return [sum((a * b for a, b in zip(r, v) if a and b), Fraction(0)) for r in self.rows]

    # block assembly ---------------------------------------------------------
    @staticmethod
    def hstack(mats: Sequence["Mat"], nrows: int = 0) -> "Mat":
        if not mats:
            return Mat.zeros(nrows, 0)
        m = mats[0].nrows
        return Mat((sum((M.rows[i] for M in mats), ()) for i in range(m)), ncols=sum(M.ncols for M in mats))

    @staticmethod
    def vstack(mats: Sequence["Mat"], ncols: int = 0) -> "Mat":
        if not mats:
            return Mat.zeros(0, ncols)
        return Mat((r for M in mats for r in M.rows), ncols=mats[0].ncols)

    @staticmethod
    def block_diag(mats: Sequence["Mat"]) -> "Mat":
        m = sum(M.nrows for M in mats)
        n = sum(M.ncols for M in mats)
        entries = {}
        r0 = c0 = 0
        for M in mats:
            for i, j, x in M.nonzero():
                entries[(r0 + i, c0 + j)] = x
            r0 += M.nrows
            c0 += M.ncols
        return Mat.from_sparse(m, n, entries)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        return Mat(((self.rows[i][j] for j in cols) for i in rows), ncols=len(cols))

    # elimination-backed queries -------------------------------------------------
    def sparse_rows(self) -> list[Row]:
        return [{j: x for j, x in enumerate(r) if x} for r in self.rows]

    def rank(self) -> int:
        return len(echelon(self.sparse_rows()))

    def nullspace(self) -> list[list[Fraction]]:
        """Basis of ``{x : self @ x = 0}`` as column vectors."""
        return nullspace(self.sparse_rows(), self.ncols)

    def inverse(self) -> "Mat":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        rows = self.sparse_rows()
        for i in range(n):
            rows[i][n + i] = Fraction(1)
        basis = rref(rows)
        if len(basis) < n or any(p >= n for p in basis):
            raise ZeroDivisionError("matrix is singular")
        return Mat([[basis[i].get(n + j, Fraction(0)) for j in range(n)] for i in range(n)], ncols=n)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def independent_columns(self) -> list[int]:
        """Indices of the leftmost maximal independent set of columns."""
        chosen: list[int] = []
        basis: dict[int, Row] = {}
        for j in range(self.ncols):
            r = reduce_row({i: x for i, x in enumerate(self.column(j)) if x}, basis)
            if r:
                p = min(r)
                inv = 1 / r[p]
                basis[p] = {k: x * inv for k, x in r.items()}
                chosen.append(j)
        return chosen


# ---------------------------------------------------------------------------
# sparse elimination engine


def reduce_row(row: Row, basis: Mapping[int, Row]) -> Row:
    """Reduce ``row`` against an echelon ``basis`` (pivot -> row, pivot entry 1)."""
    row = {k: v for k, v in row.items() if v}
    while True:
        piv = [k for k in row if k in basis]
        if not piv:
            return row
        c = min(piv)
        f = row[c]
        for k, v in basis[c].items():
            nv = row.get(k, 0) - f * v
            if nv:
                row[k] = nv
            else:
                row.pop(k, None)


def echelon(rows: Iterable[Row]) -> dict[int, Row]:
    """Forward elimination; returns pivot -> normalized row (not back-reduced)."""
    basis: dict[int, Row] = {}
    for r in rows:
        r = reduce_row(r, basis)
        if not r:
            continue
        p = min(r)
        inv = 1 / r[p]
        basis[p] = {k: v * inv for k, v in r.items()}
    return basis


def rref(rows: Iterable[Row]) -> dict[int, Row]:
    """Reduced row echelon form as pivot -> row."""
    basis = echelon(rows)
    for p in sorted(basis, reverse=True):
        row = basis[p]
        # rows with larger pivots are already fully reduced
        for q in [k for k in row if k != p and k in basis]:
            f = row[q]
            for k, v in basis[q].items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return basis


def _kernel_from_rref(basis: Mapping[int, Row], ncols: int) -> list[list[Fraction]]:
    out = []
    for f in range(ncols):
        if f in basis:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for p, r in basis.items():
            c = r.get(f)
            if c:
                v[p] = -c
        out.append(v)
    return out


def nullspace(rows: Iterable[Row], ncols: int) -> list[list[Fraction]]:
    return _kernel_from_rref(rref(rows), ncols)


def solve_sparse(rows: Sequence[Row], rhs: Sequence, ncols: int):
    """Solve ``A x = b`` for sparse ``A``.

    Returns ``(x, kernel)`` with ``x`` the particular solution whose free
    variables are zero, or ``None`` when the system is inconsistent.
    """
    aug = []
    for r, b in zip(rows, rhs):
        r = dict(r)
        b = as_fraction(b)
        if b:
            r[ncols] = b
        aug.append(r)
    basis = rref(aug)
    if ncols in basis:
        return None
    x = [Fraction(0)] * ncols
    for p, r in basis.items():
        x[p] = r.get(ncols, Fraction(0))
    return x, _kernel_from_rref({p: {k: v for k, v in r.items() if k != ncols} for p, r in basis.items()}, ncols)


def solve(A: Mat, b: Sequence) -> list[Fraction] | None:
    res = solve_sparse(A.sparse_rows(), b, A.ncols)
    return None if res is None else res[0]


class LinearSystem:
    """Incrementally assembled sparse system ``sum coef * var = rhs``.

    Unknowns live in named matrix-shaped blocks, so the ``L @ X @ R`` terms of
    intertwining and homotopy equations can be written down directly.
    """

    def __init__(self):
        self.nvars = 0
        self.blocks: dict[object, tuple[int, int, int]] = {}
        self.rows: list[Row] = []
        self.rhs: list[Fraction] = []

    def add_block(self, key, nrows: int, ncols: int) -> int:
        if key in self.blocks:
            raise KeyError(f"duplicate block {key!r}")
        off = self.nvars
        self.blocks[key] = (off, nrows, ncols)
        self.nvars += nrows * ncols
        return off

    def add_equation(self, coeffs: Row, rhs=0) -> None:
        coeffs = {k: v for k, v in coeffs.items() if v}
        rhs = as_fraction(rhs)
        if coeffs or rhs:
            self.rows.append(coeffs)
            self.rhs.append(rhs)

    def matrix_equation(self, terms, const: Mat | None, shape: tuple[int, int]) -> None:
        """Impose ``sum_t c_t * L_t @ X_t @ R_t = const``.

        ``terms`` holds ``(coef, L, key, R)`` tuples; ``None`` for ``L`` or
        ``R`` means identity.
        """
        m, n = shape
        acc: dict[tuple[int, int], Row] = {}
        for coef, L, key, R in terms:
            coef = as_fraction(coef)
            off, bm, bn = self.blocks[key]
            if bm == 0 or bn == 0 or not coef:
                continue
            Lnz = _nz_by_col(L, bm)
            Rnz = _nz_by_row(R, bn)
            for a in range(bm):
                la = Lnz[a]
                if not la:
                    continue
                for b in range(bn):
                    rb = Rnz[b]
                    if not rb:
                        continue
                    v = off + a * bn + b
                    for i, li in la:
                        for j, rj in rb:
                            row = acc.setdefault((i, j), {})
                            row[v] = row.get(v, 0) + coef * li * rj
        for i in range(m):
            for j in range(n):
                c = const[i, j] if const is not None else 0
                self.add_equation(acc.get((i, j), {}), c)

    def solve(self):
        return solve_sparse(self.rows, self.rhs, self.nvars)

    def extract(self, x: Sequence[Fraction], key) -> Mat:
        off, m, n = self.blocks[key]
        return Mat(((x[off + i * n + j] for j in range(n)) for i in range(m)), ncols=n)


def _nz_by_col(L: Mat | None, n: int) -> list[list[tuple[int, Fraction]]]:
    if L is None:
        return [[(a, Fraction(1))] for a in range(n)]
    out: list[list[tuple[int, Fraction]]] = [[] for _ in range(L.ncols)]
    for i, a, x in L.nonzero():
        out[a].append((i, x))
    return out


def _nz_by_row(R: Mat | None, n: int) -> list[list[tuple[int, Fraction]]]:
    if R is None:
        return [[(b, Fraction(1))] for b in range(n)]
    out: list[list[tuple[int, Fraction]]] = [[] for _ in range(R.nrows)]
    for b, j, x in R.nonzero():
        out[b].append((j, x))
    return out


def combine(vectors: Sequence[Sequence[Fraction]], coeffs: Sequence) -> list[Fraction]:
    n = len(vectors[0]) if vectors else 0
    out = [Fraction(0)] * n
    for v, c in zip(vectors, coeffs):
        c = as_fraction(c)
        if c:
            for i, x in enumerate(v):
                if x:
                    out[i] += c * x
    return out


def frac_str(x) -> str:
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
