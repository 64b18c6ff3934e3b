"""Exact hitting sets, low-rank recovery and rank-metric codes over GF(p^k)."""

from .errors import (
    AdviceTooLarge,
    CompositeCharacteristic,
    DecodeFailure,
    DiagonalOutOfRange,
    DuplicatePoints,
    FieldTooSmall,
    InconsistentEvaluations,
    InconsistentSyndrome,
    LengthMismatch,
    NoNullspace,
    NotEchelon,
    NotRank1,
    OracleFailure,
    OrderTooSmall,
    OrderUnreachable,
    PromiseViolation,
    RankPromiseViolated,
    ShapeMismatch,
    StrideTooSmall,
    TensorhitError,
    TooLarge,
)
from .field import (
    Fel,
    FieldCtx,
    embed_as_matrix,
    find_element_of_order,
    make_extension,
    make_prime_field,
)
from .hitting import (
    L,
    Measurement,
    MeasurementSet,
    combine_simulated_syndromes,
    first_witness,
    generate_family,
    hard_tensor,
    hitting_set_B,
    hitting_set_B_prime,
    hitting_set_D,
    hitting_set_D_prime,
    hitting_set_tensor,
    naive_set,
    pit_test,
    rank_preserver,
    simulate_improper,
    simulate_proper,
)
from .lrr import (
    DiagonalMeasurements,
    EchelonState,
    RecoveryHooks,
    convert_B_to_D,
    lne_scan,
    low_rank_recovery,
    make_upper_echelon,
    measure_D,
    measure_syndromes,
    recover_from_D,
    tensor_measure,
    tensor_recover,
)
from .rankcode import (
    RankMetricCode,
    build_code,
    decode,
    encode,
    min_distance_brute,
)
from .sparse import DualRSMeasurements, dual_rs, pronys_method
from .tensor import (
    DenseMatrix,
    DenseTensor,
    LowRankTensor,
    Rank1Tensor,
    diagonal,
    eval_fT,
    eval_fhat,
    expand,
    inner_product,
    matrix_rank,
    merge_variables,
    nnz,
    permute_axes,
    set_diagonal,
    split_variables,
)

__all__ = [name for name in dir() if not name.startswith("_")]
