"""Completely bounded and diamond norms of linear maps between matrix algebras."""

from .closedform import (
    Disc,
    max_min_real_rotation,
    smallest_enclosing_disc,
    unitary_diff_norm,
    unitary_pair_norm,
)
from .errors import (
    CBNormError,
    ConditioningError,
    DimensionError,
    InconsistencyError,
    InternalError,
    SpanError,
    ValidationError,
)
from .minimizer import (
    BoundsReport,
    NormEstimate,
    SearchConfig,
    bounds_report,
    cb_norm,
    diamond_norm,
    objective,
    phi_norm_lower_bound,
    random_search,
    refine,
    stabilized_lower_bound,
)
from .reduction import ReducedRep, make_lin_indep, tensor_rank
from .superop import (
    ChoiMatrix,
    GCKRep,
    apply,
    choi,
    cp_cb_norm,
    dual,
    from_choi,
    from_kraus,
    from_unitary_pair,
    identity_map,
    is_cp,
    star,
    subtract,
    tensor_with_identity,
    zero_map,
)

__version__ = "0.1.0"
