"""Matrix product state encodings of discretized smooth functions.

Sample a function on a dyadic grid, factor it into a matrix product state,
measure its entanglement across every cut and compare the measurements with
closed-form entropy, overlap and truncation bounds.
"""

from .bounds import (
    BoundReport,
    corollary2_eval,
    entropy_upper_bound,
    lemma3_overlap_bound,
    rank2_fidelity_trend,
    required_epsilon,
    verify_lemma3,
)
from .entropy import (
    EntropyProfile,
    check_fannes,
    entropy_profile,
    fannes_audenaert_rhs,
    trace_distance_pure,
    von_neumann,
)
from .estimators import EntropyProfiler, MPSCompressor
from .funcgrid import DiscretizedState, Domain, FunctionSpec, discretize, inner, one_norm
from .mps import (
    MatrixProductState,
    TruncationPolicy,
    from_state_vector,
    mps_inner,
    poly_to_mps,
    schmidt_spectrum,
    to_state_vector,
    truncate,
)
from .polyapprox import (
    ChebyshevPoly,
    degree_for_overlap,
    fit_chebyshev,
    linf_error,
    minimal_degree_search,
    required_degree,
)

__version__ = "0.1.0"
