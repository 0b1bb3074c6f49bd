"""Exact and asymptotic enumeration of symmetric 0-1 matrices with given row sums."""

from .asymptotics import (ErrorOrder, LogEstimate, conjecture_G2, dense_G, dense_GD_by_trace,
                          dense_GD_total, loop_count_A, loop_count_B, mean_loops_A,
                          mode_candidates_A, naive_G2, sparse_G, sparse_GD, sparse_regular)
from .core import (DegreeSequence, DensityError, LoopModelParams, ParityError, SequenceStats,
                   compute_stats, lbar, loop_model_params, mu, q2_at_lbar_factored, q_dense)
from .dist import (SparseTraceParams, TraceLaw, chernoff_tails, pb_central_moments, pb_cumulants,
                   pb_moments, pb_parity_split, pb_pmf, sparse_params, trace_law_dense,
                   trace_law_exact, trace_law_sparse)
from .exact import (CountCache, Counter, ResourceLimitError, check_loop_bijection, count_loopy,
                    count_loopy_by_trace, count_simple, log_big, memo_key, trace_profile)
from .saddle import WeightVector, log_u_asymptotic, log_u_exact, u_asymptotic, u_exact

__version__ = "0.1.0"
