"""Dense multiway tensor algebra.

Contractions, CP/Tucker/odeco decompositions, and the generalized eigenvalue
(z, h, per-mode) and singular value (l2, lO) theory for dense real tensors,
with 1-based multi-index conventions and colexicographic storage.
"""

from .shape import (
    ContiguousPartition,
    Shape,
    coarsen,
    colex_rank,
    compose_permutations,
    invert_permutation,
    is_coarser,
    lex_rank,
    rank,
    refinement_quotient,
    unrank,
)
from .tensor import (
    DenseTensor,
    fiber,
    frobenius_inner,
    frobenius_norm,
    is_symmetric,
    kronecker,
    matricize,
    moment_tensor,
    outer,
    permute_modes,
    squeeze,
    tensorize,
    unit_tensor,
    vectorize,
    zehfuss,
)
from .contract import (
    contract,
    contract_all,
    contract_all_but,
    dot,
    mode_product,
    multi_mode_product,
    trace_pair,
)
from .decomp import (
    CpAlsResult,
    CpDecomposition,
    OdecoResult,
    TuckerDecomposition,
    cp_als,
    cp_eval,
    cp_normalize,
    cp_to_tucker,
    hosvd,
    multilinear_rank,
    odeco_decompose,
    tucker_eval,
)
from .spectra import (
    BestRankOne,
    BridgeResult,
    EigenPair,
    SingularTuple,
    best_rank_one,
    eig_orbit,
    eig_residual,
    eig_singular_bridge,
    find_eigenpairs,
    find_eigenpairs_contract_leading,
    find_eigenpairs_contract_trailing,
    find_singular_tuples,
    singular_orbit,
    singular_residual,
)
from .serialize import load_tensor, save_tensor

__version__ = "0.1.0"
