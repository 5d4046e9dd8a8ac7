"""Turbo-code interleavers from cubic Hamiltonian graphs.

Construction via spoke vectors, exact girth and summary-distance analysis
of the interleaver graph, and Monte-Carlo BER measurement of the resulting
rate-1/3 turbo code.
"""

from .cubic import CubicGraph, from_chord_involution, girth_bfs, girth_upper_bound
from .errors import ConstructionError, ResourceLimitError, ValidationError
from .ig import (
    InterleaverGraph,
    build_ig,
    dsum_bounds,
    min_solid_cycle_bruteforce,
    nonchain_girth,
    summary_distance_exact,
)
from .permutation import (
    PermCycle,
    Permutation,
    cycle_summary_distance,
    enumerate_perm_cycles,
    lee_distance,
    make_permutation,
    read_interleaver_file,
    summary_distance_bruteforce,
    write_interleaver_file,
)
from .sim import BerPoint, SimConfig, channel, simulate_ber, write_ber_csv
from .spokes import (
    SearchReport,
    SignedSpokeDescription,
    SpokeVector,
    Verdict,
    count_valid_bruteforce,
    count_valid_formula,
    cubic_graph_from_spokes,
    describe,
    enumerate_valid,
    extend_description,
    interleaver_from_spokes,
    min_spoke_size_for_girth,
    read_spoke_file,
    search_best_girth,
    validate_spoke_vector,
    write_spoke_file,
)
from .turbo import (
    TrellisCode,
    bcjr_log_map,
    check_spread,
    pccc_encode,
    quadratic_interleaver,
    rsc_encode,
    srandom_interleaver,
    turbo_decode,
)

__version__ = "0.1.0"
