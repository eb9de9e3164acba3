"""SL(2)/GL(2) representation spaces with canonical ordered bases.

The elementary building blocks are the symmetric powers ``S(m)`` of the
2-dimensional space ``U = <s, t>``, the twists ``V(m) = U ⊗ S(m)``, their
exterior and symmetric squares, and formal duals.  A ``TensorSpace`` is an
ordered list of such factors with row-major index arithmetic, and every map
built here carries its spaces so that equivariance (weight homogeneity) can
be asserted entry by entry.

Basis conventions, fixed once and used everywhere:

* ``S(m)``: ``e_i = s^(m-i) t^i`` for ``i = 0..m``.
* ``V(m)``: ``x_mu = s ⊗ s^(m-mu) t^mu`` for ``mu = 0..m`` followed by
  ``xb_mu = t ⊗ s^(m-mu) t^mu``.
* ``Wedge2V(m)``: wedges ``z_i ∧ z_j`` of V(m) basis vectors with ``i < j``,
  ordered lexicographically; the pairing with the dual wedge basis is
  ``<v∧w, p∧q> = p(v)q(w) - p(w)q(v)``, so dual maps are plain transposes.
* ``Sym2V(m)``: products ``z_i · z_j`` with ``i <= j``, same ordering.
* torus weights: ``s`` has weight +1 and ``t`` weight -1 under
  ``diag(z, 1/z)``; a dual basis vector carries the negated weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactla import ExactMatrix

__all__ = [
    "S", "V", "Wedge2V", "Sym2V", "Dual",
    "TensorSpace", "build_space",
    "Character", "character", "decompose_character",
    "CharacterDecompositionError",
    "cg_beta", "cg_mu", "cg_beta_v", "cg_mu_v",
    "desym_sigma", "sym_iota",
    "swap_factors", "on_dual_spaces",
    "is_weight_homogeneous", "weight_blocks",
    "blockwise_rank", "blockwise_kernel_dim",
    "blockwise_kernel_character", "blockwise_image_character",
]

_F1 = Fraction(1)
_F2 = Fraction(2)


# ----------------------------------------------------------------------
# elementary factors

@dataclass(frozen=True)
class S:
    """Symmetric power S_m of U; empty when m < 0."""
    m: int


@dataclass(frozen=True)
class V:
    """U ⊗ S_m; empty when m < 0."""
    m: int


@dataclass(frozen=True)
class Wedge2V:
    """Exterior square of V(m)."""
    m: int


@dataclass(frozen=True)
class Sym2V:
    """Symmetric square of V(m)."""
    m: int


@dataclass(frozen=True)
class Dual:
    """Formal dual marker: same index set, negated weights."""
    inner: object


def v_dim(m: int) -> int:
    return max(0, 2 * (m + 1))


def wedge_pairs(m: int) -> list[tuple[int, int]]:
    d = v_dim(m)
    return [(i, j) for i in range(d) for j in range(i + 1, d)]


def sym_pairs(m: int) -> list[tuple[int, int]]:
    d = v_dim(m)
    return [(i, j) for i in range(d) for j in range(i, d)]


def _v_weight(m: int, idx: int) -> int:
    if idx <= m:
        return 1 + m - 2 * idx
    return -1 + m - 2 * (idx - (m + 1))


def _v_label(m: int, idx: int) -> str:
    if idx <= m:
        return f"x{idx}"
    return f"xb{idx - (m + 1)}"


def factor_dim(f) -> int:
    if isinstance(f, Dual):
        return factor_dim(f.inner)
    if isinstance(f, S):
        return max(0, f.m + 1)
    if isinstance(f, V):
        return v_dim(f.m)
    if isinstance(f, Wedge2V):
        d = v_dim(f.m)
        return d * (d - 1) // 2
    if isinstance(f, Sym2V):
        d = v_dim(f.m)
        return d * (d + 1) // 2
    raise TypeError(f"not an elementary factor: {f!r}")


def factor_weights(f) -> tuple[int, ...]:
    if isinstance(f, Dual):
        return tuple(-w for w in factor_weights(f.inner))
    if isinstance(f, S):
        return tuple(f.m - 2 * i for i in range(factor_dim(f)))
    if isinstance(f, V):
        return tuple(_v_weight(f.m, i) for i in range(factor_dim(f)))
    if isinstance(f, Wedge2V):
        return tuple(_v_weight(f.m, i) + _v_weight(f.m, j)
                     for i, j in wedge_pairs(f.m))
    if isinstance(f, Sym2V):
        return tuple(_v_weight(f.m, i) + _v_weight(f.m, j)
                     for i, j in sym_pairs(f.m))
    raise TypeError(f"not an elementary factor: {f!r}")


def factor_label(f, idx: int) -> str:
    if isinstance(f, Dual):
        return factor_label(f.inner, idx) + "*"
    if isinstance(f, S):
        return f"s^{f.m - idx}t^{idx}"
    if isinstance(f, V):
        return _v_label(f.m, idx)
    if isinstance(f, Wedge2V):
        i, j = wedge_pairs(f.m)[idx]
        return f"{_v_label(f.m, i)}^{_v_label(f.m, j)}"
    if isinstance(f, Sym2V):
        i, j = sym_pairs(f.m)[idx]
        return f"{_v_label(f.m, i)}.{_v_label(f.m, j)}"
    raise TypeError(f"not an elementary factor: {f!r}")


def _dual_factor(f):
    return f.inner if isinstance(f, Dual) else Dual(f)


# ----------------------------------------------------------------------
# tensor spaces

class TensorSpace:
    """Ordered tensor product of elementary factors, row-major indexing."""

    __slots__ = ("factors", "dim", "_dims", "_strides", "_weights")

    def __init__(self, factors: Iterable):
        self.factors = tuple(factors)
        self._dims = tuple(factor_dim(f) for f in self.factors)
        dim = 1
        strides = []
        for d in reversed(self._dims):
            strides.append(dim)
            dim *= d
        strides.reverse()
        self._strides = tuple(strides)
        self.dim = dim if self.factors else 1
        self._weights = tuple(factor_weights(f) for f in self.factors)

    def index(self, multi: Sequence[int]) -> int:
        if len(multi) != len(self.factors):
            raise ValueError("multi-index arity mismatch")
        flat = 0
        for i, (d, s) in enumerate(zip(self._dims, self._strides)):
            mi = multi[i]
            if not 0 <= mi < d:
                raise IndexError(f"factor {i} index {mi} out of range {d}")
            flat += mi * s
        return flat

    def multi(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.dim:
            raise IndexError(f"index {index} out of range {self.dim}")
        out = []
        for d, s in zip(self._dims, self._strides):
            out.append(index // s % d if d else 0)
        return tuple(out)

    def weight(self, index: int) -> int:
        return sum(w[mi] for w, mi in zip(self._weights, self.multi(index)))

    def weights(self) -> list[int]:
        return [self.weight(i) for i in range(self.dim)]

    def label(self, index: int) -> str:
        multi = self.multi(index)
        return "⊗".join(factor_label(f, mi)
                        for f, mi in zip(self.factors, multi)) or "1"

    def tensor(self, other: "TensorSpace") -> "TensorSpace":
        return TensorSpace(self.factors + other.factors)

    def dual(self) -> "TensorSpace":
        return TensorSpace(tuple(_dual_factor(f) for f in self.factors))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorSpace):
            return NotImplemented
        return self.factors == other.factors

    def __hash__(self) -> int:
        return hash(self.factors)

    def __repr__(self) -> str:
        return f"TensorSpace{self.factors!r}"


def build_space(factors: Iterable) -> TensorSpace:
    return TensorSpace(factors)


# ----------------------------------------------------------------------
# characters

class CharacterDecompositionError(ValueError):
    """The Laurent polynomial is not a nonnegative sum of irreducibles."""


class Character:
    """Laurent polynomial in one variable recording torus weights."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {w: int(m) for w, m in dict(coeffs or {}).items() if m}

    @classmethod
    def irreducible(cls, m: int) -> "Character":
        return cls({m - 2 * i: 1 for i in range(m + 1)})

    @classmethod
    def zero(cls) -> "Character":
        return cls({})

    def __add__(self, other: "Character") -> "Character":
        out = dict(self.coeffs)
        for w, m in other.coeffs.items():
            out[w] = out.get(w, 0) + m
        return Character(out)

    def __sub__(self, other: "Character") -> "Character":
        out = dict(self.coeffs)
        for w, m in other.coeffs.items():
            out[w] = out.get(w, 0) - m
        return Character(out)

    def __mul__(self, other: "Character") -> "Character":
        out: dict[int, int] = {}
        for w1, m1 in self.coeffs.items():
            for w2, m2 in other.coeffs.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + m1 * m2
        return Character(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Character):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def dimension(self) -> int:
        return sum(self.coeffs.values())

    def is_palindromic(self) -> bool:
        return all(self.coeffs.get(-w, 0) == m for w, m in self.coeffs.items())

    def decompose(self) -> dict[int, int]:
        """Multiset {m: multiplicity} with sum of char(S_m) equal to self.

        Computed by repeatedly stripping the top weight; raises when the
        input is not a genuine character.
        """
        rem = dict(self.coeffs)
        out: dict[int, int] = {}
        while True:
            rem = {w: m for w, m in rem.items() if m}
            if not rem:
                return out
            top = max(rem)
            mult = rem[top]
            if top < 0 or mult < 0:
                raise CharacterDecompositionError(
                    f"not a nonnegative combination of irreducibles: "
                    f"weight {top} has multiplicity {mult}")
            out[top] = out.get(top, 0) + mult
            for w in range(-top, top + 1, 2):
                rem[w] = rem.get(w, 0) - mult

    def __repr__(self) -> str:
        terms = [f"{m}*z^{w}" for w, m in sorted(self.coeffs.items(), reverse=True)]
        return "Character(" + (" + ".join(terms) if terms else "0") + ")"


def character(space: TensorSpace) -> Character:
    """Character of the space; multiplicative over the tensor factors."""
    out = Character({0: 1})
    for f in space.factors:
        ws: dict[int, int] = {}
        for w in factor_weights(f):
            ws[w] = ws.get(w, 0) + 1
        out = out * Character(ws)
        if not out:
            return Character.zero()
    if space.dim == 0:
        return Character.zero()
    return out


def decompose_character(c: Character) -> dict[int, int]:
    return c.decompose()


# ----------------------------------------------------------------------
# index helpers for multiplication by s and t

def s_mul_s_index(i: int) -> int:
    """s · e_i in S(m) lands on e_i in S(m+1)."""
    return i


def t_mul_s_index(i: int) -> int:
    """t · e_i in S(m) lands on e_{i+1} in S(m+1)."""
    return i + 1


def s_mul_v_index(m: int, idx: int) -> int:
    """s · (basis idx of V(m)) as an index of V(m+1)."""
    if idx <= m:
        return idx
    return (m + 2) + (idx - (m + 1))


def t_mul_v_index(m: int, idx: int) -> int:
    """t · (basis idx of V(m)) as an index of V(m+1)."""
    if idx <= m:
        return idx + 1
    return (m + 2) + (idx - (m + 1)) + 1


# ----------------------------------------------------------------------
# the Clebsch-Gordan maps and (de)symmetrizations

def cg_beta(k: int, n: int) -> ExactMatrix:
    """Injection S_{k-1}⊗S_{n-1} → S_k⊗S_n, f⊗g ↦ sf⊗tg − tf⊗sg."""
    if k < 1 or n < 1:
        raise ValueError("cg_beta needs k, n >= 1")
    dom = build_space([S(k - 1), S(n - 1)])
    cod = build_space([S(k), S(n)])
    entries: dict[tuple[int, int], int] = {}
    for a in range(k):
        for c in range(n):
            col = dom.index((a, c))
            entries[(cod.index((a, c + 1)), col)] = 1
            entries[(cod.index((a + 1, c)), col)] = -1
    return ExactMatrix(cod.dim, dom.dim, entries, dom, cod)


def cg_mu(k: int, n: int) -> ExactMatrix:
    """Multiplication S_k⊗S_n → S_{k+n}."""
    if k < 0 or n < 0:
        raise ValueError("cg_mu needs k, n >= 0")
    dom = build_space([S(k), S(n)])
    cod = build_space([S(k + n)])
    entries = {}
    for a in range(k + 1):
        for c in range(n + 1):
            entries[(a + c, dom.index((a, c)))] = 1
    return ExactMatrix(cod.dim, dom.dim, entries, dom, cod)


def cg_beta_v(k: int, n: int) -> ExactMatrix:
    """U-twisted injection S_{k-1}⊗V_{n-1} → S_k⊗V_n (same formula on the S part)."""
    if k < 1 or n < 1:
        raise ValueError("cg_beta_v needs k, n >= 1")
    dom = build_space([S(k - 1), V(n - 1)])
    cod = build_space([S(k), V(n)])
    entries: dict[tuple[int, int], int] = {}
    for a in range(k):
        for z in range(v_dim(n - 1)):
            col = dom.index((a, z))
            entries[(cod.index((a, t_mul_v_index(n - 1, z))), col)] = 1
            entries[(cod.index((a + 1, s_mul_v_index(n - 1, z))), col)] = -1
    return ExactMatrix(cod.dim, dom.dim, entries, dom, cod)


def cg_mu_v(k: int, n: int) -> ExactMatrix:
    """U-twisted multiplication S_k⊗V_n → V_{k+n}."""
    if k < 0 or n < 0:
        raise ValueError("cg_mu_v needs k, n >= 0")
    dom = build_space([S(k), V(n)])
    cod = build_space([V(k + n)])
    entries = {}
    for a in range(k + 1):
        for z in range(v_dim(n)):
            if z <= n:
                row = a + z
            else:
                row = (k + n + 1) + a + (z - (n + 1))
            entries[(row, dom.index((a, z)))] = 1
    return ExactMatrix(cod.dim, dom.dim, entries, dom, cod)


def desym_sigma(m: int) -> ExactMatrix:
    """Λ²V_m → V_m⊗V_m, v∧w ↦ v⊗w − w⊗v."""
    dom = build_space([Wedge2V(m)])
    cod = build_space([V(m), V(m)])
    d = v_dim(m)
    entries: dict[tuple[int, int], int] = {}
    for col, (i, j) in enumerate(wedge_pairs(m)):
        entries[(i * d + j, col)] = 1
        entries[(j * d + i, col)] = -1
    return ExactMatrix(cod.dim, dom.dim, entries, dom, cod)


def sym_iota(m: int) -> ExactMatrix:
    """S²V_m → V_m⊗V_m, v·w ↦ v⊗w + w⊗v (so v·v ↦ 2 v⊗v)."""
    dom = build_space([Sym2V(m)])
    cod = build_space([V(m), V(m)])
    d = v_dim(m)
    entries: dict[tuple[int, int], Fraction] = {}
    for col, (i, j) in enumerate(sym_pairs(m)):
        if i == j:
            entries[(i * d + i, col)] = _F2
        else:
            entries[(i * d + j, col)] = _F1
            entries[(j * d + i, col)] = _F1
    return ExactMatrix(cod.dim, dom.dim, entries, dom, cod)


# ----------------------------------------------------------------------
# structural utilities

def swap_factors(space: TensorSpace, perm: Sequence[int]) -> ExactMatrix:
    """Permutation matrix reordering the tensor factors of ``space`` by ``perm``.

    ``perm[i]`` is the old position placed at new position ``i``.
    """
    if sorted(perm) != list(range(len(space.factors))):
        raise ValueError(f"not a permutation of the factors: {perm!r}")
    new_space = TensorSpace(tuple(space.factors[p] for p in perm))
    entries = {}
    for col in range(space.dim):
        multi = space.multi(col)
        row = new_space.index(tuple(multi[p] for p in perm))
        entries[(row, col)] = 1
    return ExactMatrix(new_space.dim, space.dim, entries, space, new_space)


def on_dual_spaces(m: ExactMatrix) -> ExactMatrix:
    """The same matrix read as the corresponding map between the dual spaces."""
    dom = m.domain.dual() if m.domain is not None else None
    cod = m.codomain.dual() if m.codomain is not None else None
    return ExactMatrix(m.rows, m.cols, m.entries, dom, cod)


def is_weight_homogeneous(m: ExactMatrix) -> bool:
    """True when every nonzero entry connects equal-weight basis vectors."""
    if m.domain is None or m.codomain is None:
        raise ValueError("weight check needs both tensor spaces attached")
    dw = m.domain.weights()
    cw = m.codomain.weights()
    return all(cw[r] == dw[c] for (r, c) in m.entries)


def weight_blocks(m: ExactMatrix) -> dict[int, tuple[list[int], list[int]]]:
    """Rows and columns of each weight block of a weight-homogeneous map."""
    if not is_weight_homogeneous(m):
        raise ValueError("matrix is not weight-homogeneous")
    rows_by_w: dict[int, list[int]] = {}
    cols_by_w: dict[int, list[int]] = {}
    for r, w in enumerate(m.codomain.weights()):
        rows_by_w.setdefault(w, []).append(r)
    for c, w in enumerate(m.domain.weights()):
        cols_by_w.setdefault(w, []).append(c)
    blocks = {}
    for w in sorted(set(rows_by_w) | set(cols_by_w)):
        blocks[w] = (rows_by_w.get(w, []), cols_by_w.get(w, []))
    return blocks


def _submatrix(m: ExactMatrix, rows: list[int], cols: list[int]) -> ExactMatrix:
    rmap = {r: i for i, r in enumerate(rows)}
    cmap = {c: i for i, c in enumerate(cols)}
    entries = {}
    for (r, c), v in m.entries.items():
        ri = rmap.get(r)
        ci = cmap.get(c)
        if ri is not None and ci is not None:
            entries[(ri, ci)] = v
    return ExactMatrix(len(rows), len(cols), entries)


def blockwise_rank(m: ExactMatrix) -> int:
    return sum(_submatrix(m, rows, cols).rank()
               for rows, cols in weight_blocks(m).values())


def blockwise_kernel_dim(m: ExactMatrix) -> int:
    return m.cols - blockwise_rank(m)


def blockwise_kernel_character(m: ExactMatrix) -> Character:
    """Character of the kernel, one weight block at a time."""
    coeffs = {}
    for w, (rows, cols) in weight_blocks(m).items():
        kdim = len(cols) - _submatrix(m, rows, cols).rank()
        if kdim:
            coeffs[w] = kdim
    return Character(coeffs)


def blockwise_image_character(m: ExactMatrix) -> Character:
    """Character of the image, one weight block at a time."""
    coeffs = {}
    for w, (rows, cols) in weight_blocks(m).items():
        r = _submatrix(m, rows, cols).rank()
        if r:
            coeffs[w] = r
    return Character(coeffs)
