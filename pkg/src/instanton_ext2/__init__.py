"""Exact-arithmetic monad and obstruction-space verification library.

Submodules:

* :mod:`instanton_ext2.exactla` — sparse exact rational matrices, ranks,
  kernels, Kronecker products.
* :mod:`instanton_ext2.rep` — SL(2) representation spaces, canonical bases,
  characters, Clebsch-Gordan maps.
* :mod:`instanton_ext2.instanton_maps` — the special monad maps, the operator
  on B⊗B⊗Λ²V* and its dual, the kernel identification and reduction.
* :mod:`instanton_ext2.cohomology` — dimension formulas, Chern series, and
  the assembled per-cell verification.
* :mod:`instanton_ext2.cli` — `instanton-ext2` command line tool.
"""

from .exactla import (
    DimensionMismatchError, ExactMatrix,
    rank, kernel_basis, compose, kron, in_column_space,
)
from .rep import (
    S, V, Wedge2V, Sym2V, Dual, TensorSpace, build_space,
    Character, character, decompose_character, CharacterDecompositionError,
    cg_beta, cg_mu, cg_beta_v, cg_mu_v, desym_sigma, sym_iota,
)
from .instanton_maps import (
    MonadSpec, MonadMatrices, ReductionCertificate,
    NotInKernelError, ReductionStuckError,
    special_b, catalecticant, kappa_dual, special_a,
    monad_matrices, monad_complex_check, fiber_check_a, fiber_check_b,
    phi, phi_dual_explicit, epsilon, reduce_mod_epsilon,
    ext2_character_check,
)
from .cohomology import (
    TruncatedSeries, DimensionReport,
    ext2_dim_formula, ext1_dim_formula, euler_formula,
    chern_check, full_verification,
)

__version__ = "0.1.0"
