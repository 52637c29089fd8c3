"""Last-passage percolation coupling laboratory."""

from lpplab._core import (
    Law,
    __version__,
    block_b_for_n,
    frechet_envelope,
    harmonic,
    ks_critical,
    ks_distance,
    marginal,
    moments,
    shape_convex_bound,
    shape_rost,
    simulate,
    variance_law,
    worst_case_law,
)

__all__ = [
    "Law",
    "__version__",
    "block_b_for_n",
    "frechet_envelope",
    "harmonic",
    "ks_critical",
    "ks_distance",
    "marginal",
    "moments",
    "shape_convex_bound",
    "shape_rost",
    "simulate",
    "variance_law",
    "worst_case_law",
]
