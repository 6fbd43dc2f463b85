"""Rate-energy region solvers for MIMO broadcasting with wireless power transfer."""

from ._core import (
    SwiptError,
    compute_corners,
    generate_rayleigh_channel,
    grid_search_p3_diag,
    run_scenario,
    solve_p1,
    solve_p2,
    solve_p3,
    trace_colocated_outer,
    trace_separated,
    trace_simo_closed,
    trace_ts1,
    trace_ts2,
    trace_ups,
    waterfill,
)

__all__ = [
    "SwiptError",
    "compute_corners",
    "generate_rayleigh_channel",
    "grid_search_p3_diag",
    "run_scenario",
    "solve_p1",
    "solve_p2",
    "solve_p3",
    "trace_colocated_outer",
    "trace_separated",
    "trace_simo_closed",
    "trace_ts1",
    "trace_ts2",
    "trace_ups",
    "waterfill",
]
