"""Monad maps for special symplectic instanton bundles and their kernels.

Everything is an :class:`~instanton_ext2.exactla.ExactMatrix` between spaces
from :mod:`instanton_ext2.rep`.  The two central objects are the operator
``phi`` on ``B⊗B⊗Λ²V*`` built by composition, and its dual ``phi_dual_explicit``
assembled directly from the four-term basis formula; the package checks that
the two constructions are exact transposes of each other.  The kernel of the
dual operator is identified constructively: ``epsilon`` maps onto it, and
``reduce_mod_epsilon`` rewrites any kernel vector as an explicit image,
consuming its lexicographic leading term at every step.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .exactla import ExactMatrix, compose, kron
from . import rep
from .rep import (
    S, V, Wedge2V, Sym2V, Dual,
    build_space, character,
    cg_beta_v, desym_sigma, sym_iota, swap_factors, on_dual_spaces,
    v_dim, wedge_pairs, sym_pairs,
    s_mul_v_index, t_mul_v_index,
)

__all__ = [
    "MonadSpec", "MonadMatrices", "ReductionCertificate",
    "NotInKernelError", "ReductionStuckError",
    "special_b", "catalecticant", "kappa_dual", "special_a",
    "monad_matrices", "monad_complex_check",
    "fiber_check_a", "fiber_check_b",
    "phi", "phi_dual_explicit", "epsilon_prime", "epsilon",
    "reduce_mod_epsilon", "ext2_character_check", "ext2_characters",
    "mixed_wedge_coefficient",
    "curve_point", "random_point", "random_alpha",
]

_F0 = Fraction(0)

SAMPLE_COORD_BOUND = 10  # integer sampling window for fiber points and alpha


class NotInKernelError(ValueError):
    """The vector handed to the reducer is not annihilated by the dual operator."""


class ReductionStuckError(RuntimeError):
    """A leading term has a shape the case analysis rules out.

    Never expected on genuine kernel vectors; raised instead of looping so a
    sign-convention bug is loud.
    """


@dataclass(frozen=True)
class MonadSpec:
    """Data (n, k, alpha) of a special symplectic instanton monad on P^(2n+1).

    ``alpha`` lists the 2n+2k-1 coefficients of a functional on the degree
    2n+2k-2 monomials, highest power of ``s`` first.
    """
    n: int
    k: int
    alpha: tuple[Fraction, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need n >= 1")
        if self.k < 2:
            raise ValueError("need k >= 2")
        alpha = tuple(Fraction(a) for a in self.alpha)
        want = 2 * self.n + 2 * self.k - 1
        if len(alpha) != want:
            raise ValueError(f"alpha must have {want} coefficients, got {len(alpha)}")
        if not any(alpha):
            raise ValueError("alpha must be nonzero")
        object.__setattr__(self, "alpha", alpha)


@dataclass(frozen=True)
class MonadMatrices:
    """The pair of linear maps of a monad, with the (A, B, C) dimensions."""
    a: ExactMatrix
    b: ExactMatrix
    dims: tuple[int, int, int]

    def __post_init__(self):
        dim_a, dim_b, dim_c = self.dims
        if self.a.cols != dim_a or self.b.rows != dim_c:
            raise ValueError("monad matrices do not match the declared dimensions")


# ----------------------------------------------------------------------
# the special monad maps

def special_b(k: int, n: int) -> ExactMatrix:
    """The surjection B⊗V* → C of the special monad.

    Transpose of the U-twisted Clebsch-Gordan injection
    S_{k-2}⊗V_{n-1} → S_{k-1}⊗V_n, between the dual spaces.
    """
    if k < 2 or n < 1:
        raise ValueError("need k >= 2 and n >= 1")
    return cg_beta_v(k - 1, n).transpose()


def catalecticant(spec: MonadSpec) -> ExactMatrix:
    """Hankel matrix of f ↦ alpha(f·-): entry (i, j) is alpha[i+j]."""
    n, k, alpha = spec.n, spec.k, spec.alpha
    dom = build_space([S(k - 1)])
    cod = build_space([Dual(S(2 * n + k - 1))])
    entries = {}
    for i in range(2 * n + k):
        for j in range(k):
            v = alpha[i + j]
            if v:
                entries[(i, j)] = v
    return ExactMatrix(cod.dim, dom.dim, entries, dom, cod)


def kappa_dual(k: int, n: int) -> ExactMatrix:
    """S_{k-1}⊗Λ²V_n → S_{2n+k-1}: f⊗(s⊗g)∧(t⊗h) ↦ fgh, the rest to zero.

    On a wedge of two basis vectors the value is the product monomial when the
    U-parts are s and t (signed by orientation) and zero when they coincide;
    the coinciding case is the whole isotypic piece killed by equivariance.
    """
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    dom = build_space([S(k - 1), Wedge2V(n)])
    cod = build_space([S(2 * n + k - 1)])
    entries = {}
    for a in range(k):
        for widx, (i, j) in enumerate(wedge_pairs(n)):
            if i <= n < j:  # x_i ∧ xb_{j-(n+1)}
                mu, nu = i, j - (n + 1)
                entries[(a + mu + nu, dom.index((a, widx)))] = 1
    return ExactMatrix(cod.dim, dom.dim, entries, dom, cod)


def special_a(spec: MonadSpec) -> ExactMatrix:
    """The monad map A → B⊗Λ²V* of a special symplectic bundle.

    Composite of the Hankel map with the transposed product contraction."""
    return compose(kappa_dual(spec.k, spec.n).transpose(), catalecticant(spec))


def monad_matrices(spec: MonadSpec) -> MonadMatrices:
    n, k = spec.n, spec.k
    return MonadMatrices(
        a=special_a(spec),
        b=special_b(k, n),
        dims=(k, k, 2 * n * (k - 1)),
    )


def _induced_b_on_wedge(k: int, n: int) -> ExactMatrix:
    """B⊗Λ²V* → C⊗V*: desymmetrize the wedge, then apply b to the first copy."""
    b = special_b(k, n)
    sigma_dual = on_dual_spaces(desym_sigma(n))
    id_b = ExactMatrix.identity(build_space([Dual(S(k - 1))]))
    id_v = ExactMatrix.identity(build_space([Dual(V(n))]))
    return compose(kron(b, id_v), kron(id_b, sigma_dual))


def monad_complex_check(m: MonadMatrices) -> bool:
    """True iff the induced sequence A → B⊗Λ²V* → C⊗V* composes to zero."""
    k = m.dims[0]
    n = m.dims[2] // (2 * (k - 1)) if k > 1 else 1
    return compose(_induced_b_on_wedge(k, n), m.a).is_zero


# ----------------------------------------------------------------------
# fiberwise monad conditions

def _wedge_contraction(n: int, v: Sequence) -> ExactMatrix:
    """Λ²V* → V*, ω ↦ ω(v, ·), for a point v of V_n."""
    vals = [Fraction(x) for x in v]
    d = v_dim(n)
    if len(vals) != d:
        raise ValueError(f"point must have {d} coordinates")
    dom = build_space([Dual(Wedge2V(n))])
    cod = build_space([Dual(V(n))])
    entries: dict[tuple[int, int], Fraction] = {}
    for widx, (i, j) in enumerate(wedge_pairs(n)):
        if vals[i]:
            entries[(j, widx)] = vals[i]
        if vals[j]:
            entries[(i, widx)] = -vals[j]
    return ExactMatrix(cod.dim, dom.dim, entries, dom, cod)


def fiber_check_a(m: MonadMatrices, v: Sequence) -> int:
    """Rank of A → B⊗V* after contracting the wedge factor with v.

    The left monad map is a subbundle at the point [v] iff this equals dim A.
    """
    if not any(Fraction(x) for x in v):
        raise ValueError("fiber point must be nonzero")
    k = m.dims[0]
    n = m.dims[2] // (2 * (k - 1)) if k > 1 else 1
    id_b = ExactMatrix.identity(build_space([Dual(S(k - 1))]))
    a_v = compose(kron(id_b, _wedge_contraction(n, v)), m.a)
    return a_v.rank()


def fiber_check_b(k: int, n: int, v: Sequence) -> int:
    """Rank of b restricted to B⊗ann(v); surjective at [v] iff it is 2n(k-1)."""
    vals = [Fraction(x) for x in v]
    if len(vals) != v_dim(n):
        raise ValueError(f"point must have {v_dim(n)} coordinates")
    if not any(vals):
        raise ValueError("fiber point must be nonzero")
    pairing = ExactMatrix(1, v_dim(n), {(0, c): x for c, x in enumerate(vals) if x})
    ann = pairing.kernel_basis()
    incl = ExactMatrix(v_dim(n), len(ann),
                       {(r, c): vec[r] for c, vec in enumerate(ann)
                        for r in range(v_dim(n)) if vec[r]},
                       None, build_space([Dual(V(n))]))
    id_b = ExactMatrix.identity(build_space([Dual(S(k - 1))]))
    restricted = compose(special_b(k, n), kron(id_b, incl))
    return restricted.rank()


# ----------------------------------------------------------------------
# the operator on B⊗B⊗Λ²V* and its dual

def phi(k: int, n: int) -> ExactMatrix:
    """B⊗B⊗Λ²V* → C⊗C as (b⊗b)∘(id⊗σ), with the middle factors reordered.

    Both reorderings are the fixed swap of tensor factors 2 and 3; the final
    swap groups the two S* factors of C⊗C first so that the transpose of this
    matrix is directly comparable with :func:`phi_dual_explicit`.
    """
    if k < 2 or n < 1:
        raise ValueError("need k >= 2 and n >= 1")
    b = special_b(k, n)
    id_bb = ExactMatrix.identity(build_space([Dual(S(k - 1)), Dual(S(k - 1))]))
    step1 = kron(id_bb, on_dual_spaces(desym_sigma(n)))
    step2 = swap_factors(step1.codomain, (0, 2, 1, 3))
    step3 = kron(b, b)
    step4 = swap_factors(step3.codomain, (0, 2, 1, 3))
    return compose(step4, compose(step3, compose(step2, step1)))


def phi_dual_explicit(k: int, n: int) -> ExactMatrix:
    """S_{k-2}⊗S_{k-2}⊗V_{n-1}⊗V_{n-1} → S_{k-1}⊗S_{k-1}⊗Λ²V_n.

    Assembled term by term from

        g⊗g'⊗v⊗v' ↦ sg⊗sg'⊗(tv∧tv') − sg⊗tg'⊗(tv∧sv')
                    − tg⊗sg'⊗(sv∧tv') + tg⊗tg'⊗(sv∧sv')

    on basis vectors, with wedges reindexed to the ordered pair basis.
    """
    if k < 2 or n < 1:
        raise ValueError("need k >= 2 and n >= 1")
    dom = build_space([S(k - 2), S(k - 2), V(n - 1), V(n - 1)])
    cod = build_space([S(k - 1), S(k - 1), Wedge2V(n)])
    pair_index = {p: i for i, p in enumerate(wedge_pairs(n))}
    entries: dict[tuple[int, int], int] = {}
    nb = v_dim(n - 1)
    for al in range(k - 1):
        for be in range(k - 1):
            for p in range(nb):
                tp = t_mul_v_index(n - 1, p)
                sp = s_mul_v_index(n - 1, p)
                for q in range(nb):
                    tq = t_mul_v_index(n - 1, q)
                    sq = s_mul_v_index(n - 1, q)
                    col = dom.index((al, be, p, q))
                    for aa, bb, i, j, sgn in (
                            (al, be, tp, tq, 1),
                            (al, be + 1, tp, sq, -1),
                            (al + 1, be, sp, tq, -1),
                            (al + 1, be + 1, sp, sq, 1)):
                        if i == j:
                            continue
                        if i < j:
                            widx = pair_index[(i, j)]
                        else:
                            widx = pair_index[(j, i)]
                            sgn = -sgn
                        key = (cod.index((aa, bb, widx)), col)
                        val = entries.get(key, 0) + sgn
                        if val:
                            entries[key] = val
                        elif key in entries:
                            del entries[key]
    return ExactMatrix(cod.dim, dom.dim, entries, dom, cod)


def epsilon_prime(k: int, n: int) -> ExactMatrix:
    """S_{k-3}⊗S_{k-3}⊗V_{n-2}⊗V_{n-2} → S_{k-2}⊗S_{k-2}⊗V_{n-1}⊗V_{n-1}.

        f⊗f'⊗u⊗u' ↦ sf⊗sf'⊗tu⊗tu' − sf⊗tf'⊗su⊗tu'
                    − tf⊗sf'⊗tu⊗su' + tf⊗tf'⊗su⊗su'

    Empty domain (hence an empty matrix) when k < 3 or n < 2.
    """
    if k < 2 or n < 1:
        raise ValueError("need k >= 2 and n >= 1")
    dom = build_space([S(k - 3), S(k - 3), V(n - 2), V(n - 2)])
    cod = build_space([S(k - 2), S(k - 2), V(n - 1), V(n - 1)])
    entries: dict[tuple[int, int], int] = {}
    nb = v_dim(n - 2)
    for al in range(max(0, k - 2)):
        for be in range(max(0, k - 2)):
            for p in range(nb):
                tp = t_mul_v_index(n - 2, p)
                sp = s_mul_v_index(n - 2, p)
                for q in range(nb):
                    tq = t_mul_v_index(n - 2, q)
                    sq = s_mul_v_index(n - 2, q)
                    col = dom.index((al, be, p, q))
                    for aa, bb, i, j, sgn in (
                            (al, be, tp, tq, 1),
                            (al, be + 1, sp, tq, -1),
                            (al + 1, be, tp, sq, -1),
                            (al + 1, be + 1, sp, sq, 1)):
                        key = (cod.index((aa, bb, i, j)), col)
                        entries[key] = sgn
    return ExactMatrix(cod.dim, dom.dim, entries, dom, cod)


def epsilon(k: int, n: int) -> ExactMatrix:
    """S_{k-3}⊗S_{k-3}⊗S²V_{n-2} into the domain of the dual operator."""
    ep = epsilon_prime(k, n)
    id_ss = ExactMatrix.identity(build_space([S(k - 3), S(k - 3)]))
    return compose(ep, kron(id_ss, sym_iota(n - 2)))


# ----------------------------------------------------------------------
# structured reduction: every kernel vector is an explicit epsilon image

@dataclass(frozen=True)
class ReductionCertificate:
    """Record of the leading-term subtractions taking a kernel vector to 0.

    ``steps`` lists (leading index consumed, epsilon-domain index used,
    coefficient); ``preimage`` is the accumulated vector with
    ``epsilon · preimage`` equal to the input.
    """
    steps: tuple[tuple[int, int, Fraction], ...]
    preimage: tuple[Fraction, ...]


def reduce_mod_epsilon(k: int, n: int, xi: Sequence,
                       phi_d: ExactMatrix | None = None,
                       eps: ExactMatrix | None = None) -> ReductionCertificate:
    """Drive a kernel vector of the dual operator to exactly zero.

    At each step the lexicographically first nonzero coordinate is classified
    by its bar pattern; a matching epsilon generator is subtracted, which
    removes that coordinate and only introduces strictly later ones.  The
    classification also enforces the shapes a leading term of a kernel vector
    can take; anything else raises :class:`ReductionStuckError`.
    """
    if phi_d is None:
        phi_d = phi_dual_explicit(k, n)
    if eps is None:
        eps = epsilon(k, n)
    dom = phi_d.domain
    eps_dom = eps.domain
    if len(xi) != dom.dim:
        raise ValueError(f"vector length {len(xi)} != {dom.dim}")
    if any(phi_d.apply(xi)):
        raise NotInKernelError("vector is not in the kernel of the dual operator")

    eps_cols: list[list[tuple[int, Fraction]]] = eps.columns()
    nb = n - 1  # unbarred V_{n-1} indices are 0..n-1
    cur = {i: Fraction(x) for i, x in enumerate(xi) if x}
    steps: list[tuple[int, int, Fraction]] = []
    pre = [_F0] * eps.cols
    while cur:
        lead = min(cur)
        c = cur[lead]
        al, be, p, q = dom.multi(lead)
        p_bar, q_bar = p > nb, q > nb
        mu = p - (nb + 1) if p_bar else p
        nu = q - (nb + 1) if q_bar else q

        def stuck(why: str):
            raise ReductionStuckError(
                f"leading term at ({al},{be},{'b' if p_bar else ''}{mu},"
                f"{'b' if q_bar else ''}{nu}): {why}")

        if al > k - 3 or be > k - 3:
            stuck("no generator with this S-part")
        if not p_bar and not q_bar:
            if mu == 0 or mu > nu:
                stuck("unbarred pair needs 0 < mu <= nu")
            gi, gj = mu - 1, nu - 1
            diag = 2 if mu == nu else 1
        elif not p_bar and q_bar:
            if mu == 0 or nu == 0:
                stuck("mixed pair needs mu, nu > 0")
            gi, gj = mu - 1, (n - 1) + (nu - 1)
            diag = 1
        elif p_bar and not q_bar:
            stuck("barred-unbarred pair can never lead")
        else:
            if mu == 0 or mu > nu:
                stuck("double-barred pair needs 0 < mu <= nu")
            gi, gj = (n - 1) + (mu - 1), (n - 1) + (nu - 1)
            diag = 2 if mu == nu else 1

        pair_idx = sym_pairs(n - 2).index((gi, gj))
        gen = eps_dom.index((al, be, pair_idx))
        coeff = c / diag
        for r, v in eps_cols[gen]:
            w = cur.get(r, _F0) - coeff * v
            if w:
                cur[r] = w
            elif r in cur:
                del cur[r]
        if lead in cur:  # cannot happen when the generator table is right
            raise ReductionStuckError("leading term survived its own subtraction")
        steps.append((lead, gen, coeff))
        pre[gen] += coeff
    return ReductionCertificate(tuple(steps), tuple(pre))


# ----------------------------------------------------------------------
# representation-theoretic checks

def ext2_characters(k: int, n: int) -> tuple[rep.Character, rep.Character]:
    """(kernel character of the dual operator, character it should equal)."""
    kernel_char = rep.blockwise_kernel_character(phi_dual_explicit(k, n))
    expected = character(build_space([S(k - 3), S(k - 3), Sym2V(n - 2)]))
    return kernel_char, expected


def ext2_character_check(k: int, n: int) -> bool:
    kernel_char, expected = ext2_characters(k, n)
    return kernel_char == expected


def mixed_wedge_coefficient(xi: Sequence, k: int, n: int,
                            al: int, be: int, mu: int, nu: int,
                            alt_indices: bool = False) -> Fraction:
    """Coefficient of the dual operator's value at g_al⊗g_be⊗(y_mu ∧ yb_nu).

    Independent eight-term expansion in the coordinates of ``xi``, used to
    cross-check the assembled matrix row by row.  ``alt_indices`` switches the
    last two cross terms to an alternate index reading that the cross-check
    flags as inconsistent with the matrix construction.
    """
    dom = build_space([S(k - 2), S(k - 2), V(n - 1), V(n - 1)])

    def c(a, b, p, pbar, q, qbar):
        if not (0 <= a <= k - 2 and 0 <= b <= k - 2):
            return _F0
        if not (0 <= p <= n - 1 and 0 <= q <= n - 1):
            return _F0
        pi = p + (pbar and n)
        qi = q + (qbar and n)
        v = xi[dom.index((a, b, pi, qi))]
        return v if isinstance(v, Fraction) else Fraction(v)

    third = c(al - 1, be, nu, True, mu - 1, False)
    fourth = c(al - 1, be - 1, nu, True, mu, False)
    if alt_indices:
        third = c(al - 1, be, nu, True, mu, False)
        fourth = c(al - 1, be - 1, nu, True, mu, True)
    return (c(al, be, mu - 1, False, nu - 1, True)
            - c(al, be, nu - 1, True, mu - 1, False)
            - c(al, be - 1, mu - 1, False, nu, True)
            + c(al, be - 1, nu - 1, True, mu, False)
            - c(al - 1, be, mu, False, nu - 1, True)
            + third
            + c(al - 1, be - 1, mu, False, nu, True)
            - fourth)


# ----------------------------------------------------------------------
# sampling helpers (explicit seeds everywhere; no global generator)

def curve_point(n: int, lam) -> tuple[Fraction, ...]:
    """(s+λt) ⊗ (s+λt)^n, the rational normal curve inside V_n."""
    lam = Fraction(lam)
    base = [comb(n, mu) * lam ** mu for mu in range(n + 1)]
    return tuple(base + [lam * x for x in base])


def random_point(n: int, rng: random.Random) -> tuple[int, ...]:
    """Uniform integer point of V_n with coordinates in the sampling window."""
    d = v_dim(n)
    while True:
        v = tuple(rng.randint(-SAMPLE_COORD_BOUND, SAMPLE_COORD_BOUND)
                  for _ in range(d))
        if any(v):
            return v


def random_alpha(n: int, k: int, rng: random.Random) -> tuple[int, ...]:
    """Uniform nonzero integer coefficient vector for a monad functional."""
    length = 2 * n + 2 * k - 1
    while True:
        a = tuple(rng.randint(-SAMPLE_COORD_BOUND, SAMPLE_COORD_BOUND)
                  for _ in range(length))
        if any(a):
            return a
