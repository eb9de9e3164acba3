"""Exact rational linear algebra on sparse matrices.

Matrices are sparse maps ``(row, col) -> Fraction`` plus optional tensor-space
metadata attached to both sides.  Two independent elimination routines are
kept on purpose: an integer fraction-free echelon reduction used by default,
and a plain rational Gauss-Jordan retained as a cross-checking oracle.  All
arithmetic is exact; no floats anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Mapping, Sequence

__all__ = [
    "DimensionMismatchError",
    "ExactMatrix",
    "rank",
    "kernel_basis",
    "compose",
    "kron",
    "in_column_space",
]

_F0 = Fraction(0)
_F1 = Fraction(1)


class DimensionMismatchError(ValueError):
    """Shapes (or attached tensor spaces) of the operands do not line up."""


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class ExactMatrix:
    """Immutable sparse rational matrix.

    Stored entries are never zero, so equality of matrices is equality of the
    entry maps plus the shape.  ``domain``/``codomain`` are optional
    ``TensorSpace`` handles; when present their dimensions must match the
    shape, and composition checks that the inner spaces agree factor by
    factor.
    """

    __slots__ = ("rows", "cols", "entries", "domain", "codomain")

    def __init__(self, rows: int, cols: int, entries: Mapping | None = None,
                 domain=None, codomain=None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimensions")
        if domain is not None and domain.dim != cols:
            raise DimensionMismatchError(
                f"domain dimension {domain.dim} != cols {cols}")
        if codomain is not None and codomain.dim != rows:
            raise DimensionMismatchError(
                f"codomain dimension {codomain.dim} != rows {rows}")
        clean: dict[tuple[int, int], Fraction] = {}
        if entries:
            for (r, c), v in entries.items():
                f = _as_fraction(v)
                if f:
                    if not (0 <= r < rows and 0 <= c < cols):
                        raise IndexError(f"entry ({r},{c}) outside {rows}x{cols}")
                    clean[(r, c)] = f
        self.rows = rows
        self.cols = cols
        self.entries = clean
        self.domain = domain
        self.codomain = codomain

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zeros(cls, rows: int, cols: int, domain=None, codomain=None) -> "ExactMatrix":
        return cls(rows, cols, {}, domain, codomain)

    @classmethod
    def identity(cls, n_or_space) -> "ExactMatrix":
        if isinstance(n_or_space, int):
            n, space = n_or_space, None
        else:
            space = n_or_space
            n = space.dim
        return cls(n, n, {(i, i): _F1 for i in range(n)}, space, space)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], domain=None, codomain=None) -> "ExactMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        entries = {}
        for r, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for c, v in enumerate(row):
                f = _as_fraction(v)
                if f:
                    entries[(r, c)] = f
        return cls(nrows, ncols, entries, domain, codomain)

    # ------------------------------------------------------------------
    # basic queries

    def entry(self, r: int, c: int) -> Fraction:
        return self.entries.get((r, c), _F0)

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def to_rows(self) -> list[list[Fraction]]:
        dense = [[_F0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            dense[r][c] = v
        return dense

    def column(self, c: int) -> dict[int, Fraction]:
        return {r: v for (r, cc), v in self.entries.items() if cc == c}

    def columns(self) -> list[list[tuple[int, Fraction]]]:
        cols: list[list[tuple[int, Fraction]]] = [[] for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            cols[c].append((r, v))
        return cols

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.rows == other.rows and self.cols == other.cols
                and self.entries == other.entries)

    __hash__ = None  # mutable mapping inside; value-compared, not hashed

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    # ------------------------------------------------------------------
    # algebra

    def transpose(self) -> "ExactMatrix":
        """The dual map: transposed entries between the dual spaces."""
        entries = {(c, r): v for (r, c), v in self.entries.items()}
        dom = self.codomain.dual() if self.codomain is not None else None
        cod = self.domain.dual() if self.domain is not None else None
        return ExactMatrix(self.cols, self.rows, entries, dom, cod)

    def scaled(self, s) -> "ExactMatrix":
        f = _as_fraction(s)
        if not f:
            return ExactMatrix.zeros(self.rows, self.cols, self.domain, self.codomain)
        return ExactMatrix(self.rows, self.cols,
                           {k: f * v for k, v in self.entries.items()},
                           self.domain, self.codomain)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return compose(self, other)

    def apply(self, vec: Sequence) -> tuple[Fraction, ...]:
        if len(vec) != self.cols:
            raise DimensionMismatchError(
                f"vector length {len(vec)} != cols {self.cols}")
        out = [_F0] * self.rows
        for (r, c), v in self.entries.items():
            x = vec[c]
            if x:
                out[r] += v * x
        return tuple(out)

    def rank(self, method: str = "fraction_free") -> int:
        if method == "fraction_free":
            return len(_echelon_int(_integer_rows(self), self.cols))
        if method == "naive":
            return _rank_naive(self)
        raise ValueError(f"unknown elimination method {method!r}")

    def kernel_basis(self) -> list[tuple[Fraction, ...]]:
        """Basis of the right kernel, one vector per free column.

        Vector ``i`` carries 1 at the ``i``-th free column and 0 at every
        other free column, so the stacked result is a reduced column echelon
        form with unit pivots in a fixed order.
        """
        ech = _echelon_int(_integer_rows(self), self.cols)
        pivot_cols = {c for c, _ in ech}
        basis = []
        for f in range(self.cols):
            if f in pivot_cols:
                continue
            x = _back_substitute(ech, {f: _F1})
            basis.append(tuple(x.get(j, _F0) for j in range(self.cols)))
        return basis

    def in_column_space(self, vec: Sequence) -> tuple[bool, tuple[Fraction, ...] | None]:
        """Membership of ``vec`` in the column space, with one exact preimage."""
        if len(vec) != self.rows:
            raise DimensionMismatchError(
                f"vector length {len(vec)} != rows {self.rows}")
        v = [_as_fraction(x) for x in vec]
        aug = self.cols
        by_row: dict[int, dict[int, Fraction]] = {}
        for (r, c), val in self.entries.items():
            by_row.setdefault(r, {})[c] = val
        for r, val in enumerate(v):
            if val:
                by_row.setdefault(r, {})[aug] = val
        rows = [_clear_denominators(row) for row in by_row.values()]
        ech = _echelon_int(rows, aug + 1)
        if any(c == aug for c, _ in ech):
            return False, None
        x = _back_substitute(ech, {aug: _F1})
        pre = tuple(-x.get(j, _F0) for j in range(self.cols))
        return True, pre


# ----------------------------------------------------------------------
# module-level operation surface

def rank(m: ExactMatrix, method: str = "fraction_free") -> int:
    return m.rank(method)


def kernel_basis(m: ExactMatrix) -> list[tuple[Fraction, ...]]:
    return m.kernel_basis()


def in_column_space(m: ExactMatrix, vec: Sequence):
    return m.in_column_space(vec)


def compose(f: ExactMatrix, g: ExactMatrix) -> ExactMatrix:
    """Matrix of ``f∘g``; requires the inner spaces to agree."""
    if f.cols != g.rows:
        raise DimensionMismatchError(
            f"cannot compose {f.rows}x{f.cols} with {g.rows}x{g.cols}")
    if (f.domain is not None and g.codomain is not None
            and f.domain != g.codomain):
        raise DimensionMismatchError("inner tensor spaces differ")
    f_by_inner: dict[int, list[tuple[int, Fraction]]] = {}
    for (r, k), v in f.entries.items():
        f_by_inner.setdefault(k, []).append((r, v))
    acc: dict[tuple[int, int], Fraction] = {}
    for (k, c), gv in g.entries.items():
        hits = f_by_inner.get(k)
        if not hits:
            continue
        for r, fv in hits:
            key = (r, c)
            w = acc.get(key, _F0) + fv * gv
            if w:
                acc[key] = w
            elif key in acc:
                del acc[key]
    return ExactMatrix(f.rows, g.cols, acc, g.domain, f.codomain)


def kron(f: ExactMatrix, g: ExactMatrix) -> ExactMatrix:
    """Kronecker product, row-major over the ordered tensor factors."""
    entries = {}
    grows, gcols = g.rows, g.cols
    for (rf, cf), vf in f.entries.items():
        base_r = rf * grows
        base_c = cf * gcols
        for (rg, cg), vg in g.entries.items():
            entries[(base_r + rg, base_c + cg)] = vf * vg
    dom = (f.domain.tensor(g.domain)
           if f.domain is not None and g.domain is not None else None)
    cod = (f.codomain.tensor(g.codomain)
           if f.codomain is not None and g.codomain is not None else None)
    return ExactMatrix(f.rows * grows, f.cols * gcols, entries, dom, cod)


# ----------------------------------------------------------------------
# elimination kernels

def _clear_denominators(row: Mapping[int, Fraction]) -> dict[int, int]:
    mult = lcm(*(v.denominator for v in row.values())) if row else 1
    return {c: int(v * mult) for c, v in row.items()}


def _integer_rows(m: ExactMatrix) -> list[dict[int, int]]:
    by_row: dict[int, dict[int, Fraction]] = {}
    for (r, c), v in m.entries.items():
        by_row.setdefault(r, {})[c] = v
    return [_clear_denominators(row) for row in by_row.values()]


def _echelon_int(rows: list[dict[int, int]], ncols: int) -> list[tuple[int, dict[int, int]]]:
    """Fraction-free sparse forward elimination.

    Cross-multiplied updates stay in the integers; every produced row is
    divided by its content so entries cannot swell.  Only rows sharing the
    pivot column are touched, which keeps the sparsity usable.  Returns the
    list of (pivot column, row) pairs in pivot order; the pivot column of a
    row is always its least nonzero column.
    """
    pending: dict[int, list[dict[int, int]]] = {}

    def push(row: dict[int, int]) -> None:
        pending.setdefault(min(row), []).append(row)

    for row in rows:
        if row:
            push(row)

    echelon: list[tuple[int, dict[int, int]]] = []
    for c in range(ncols):
        bucket = pending.pop(c, None)
        if not bucket:
            continue
        piv_i = min(range(len(bucket)),
                    key=lambda i: (len(bucket[i]), abs(bucket[i][c]), i))
        piv = bucket.pop(piv_i)
        pa = piv[c]
        echelon.append((c, piv))
        for row in bucket:
            rb = row[c]
            g = gcd(pa, rb)
            fa = pa // g
            fb = rb // g
            new = {col: fa * v for col, v in row.items() if col != c}
            for col, v in piv.items():
                if col == c:
                    continue
                w = new.get(col, 0) - fb * v
                if w:
                    new[col] = w
                elif col in new:
                    del new[col]
            if new:
                content = 0
                for v in new.values():
                    content = gcd(content, v)
                    if content == 1:
                        break
                if content > 1:
                    for col in new:
                        new[col] //= content
                push(new)
    return echelon


def _back_substitute(echelon: list[tuple[int, dict[int, int]]],
                     fixed: dict[int, Fraction]) -> dict[int, Fraction]:
    """Solve ``U·x = 0`` for the pivot coordinates, the rest fixed by ``fixed``."""
    x = dict(fixed)
    for pc, row in reversed(echelon):
        s = _F0
        for col, v in row.items():
            if col == pc:
                continue
            xv = x.get(col)
            if xv is not None:
                s += v * xv
        if s:
            x[pc] = -s / row[pc]
    return x


def _rank_naive(m: ExactMatrix) -> int:
    """Textbook Gauss-Jordan over Fraction; the independent rank oracle."""
    by_row: dict[int, dict[int, Fraction]] = {}
    for (r, c), v in m.entries.items():
        by_row.setdefault(r, {})[c] = v
    work = [dict(row) for row in by_row.values()]
    rank_ = 0
    for c in range(m.cols):
        piv_row = None
        for row in work:
            if row.get(c):
                piv_row = row
                break
        if piv_row is None:
            continue
        work.remove(piv_row)
        rank_ += 1
        inv = 1 / piv_row[c]
        piv = {col: v * inv for col, v in piv_row.items()}
        for row in work:
            f = row.get(c)
            if not f:
                continue
            for col, v in piv.items():
                w = row.get(col, _F0) - f * v
                if w:
                    row[col] = w
                elif col in row:
                    del row[col]
        work = [row for row in work if row]
    return rank_
