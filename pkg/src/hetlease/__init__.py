"""Revenue optimization for heterogeneous cellular networks.

Switch small base stations off during quiet periods, offload their
traffic to the always-on macro cell, and lease the freed spectrum to a
secondary network.  The per-slot decision is solved by simulated
annealing, validated against exhaustive search and two sorting
heuristics.
"""

from .economics import (
    WATT_MIN_PER_KWH,
    all_on_power_slot,
    closed_form_revenue_slot,
    daily_revenue,
    energy_factor,
    energy_revenue_slot,
    hetnet_power_slot,
    leasing_revenue_slot,
    power_saving_slot,
    sbs_off_weights,
    total_revenue_slot,
)
from .feasibility import (
    CONSERVATION_TOL,
    OffloadReport,
    is_feasible,
    offload_contribution,
    offloaded_mbs_load,
)
from .metrics import (
    BenchRecord,
    network_throughput,
    runtime_scaling,
    throughput_invariance_report,
    write_bench_csv,
)
from .model import (
    BaseStation,
    BsKind,
    ConfigError,
    DegenerateInstanceError,
    EnumerationCapError,
    InfeasibleSwitchError,
    OffloadMode,
    PricingSeries,
    RevenueBreakdown,
    Scenario,
    SolverResult,
    SwitchVector,
    TimeGrid,
    TrafficSeries,
    daily_breakdown,
    default_parameter_set,
)
from .scenario import (
    CsvFormatError,
    PriceKind,
    PricePolicy,
    RawActivityRecord,
    bench_config,
    bench_scenario,
    build_pricing,
    build_scenario,
    default_electricity_multipliers,
    dt_shift,
    dynamic_electricity_price,
    dynamic_spectrum_price,
    ingest_activity_csv,
    load_config,
    normalize_series,
    reference_config,
    reference_scenario,
    reference_variants,
    save_config,
    scenario_to_config,
    sn_demand_from_pn,
    synth_traffic,
    validate_config,
)
from .solvers import (
    ES_MAX_SBS,
    Method,
    SaParams,
    SortOrder,
    es_solve_slot,
    metropolis_accept,
    neighbor_one_reserve,
    neighbor_swap,
    neighbor_two_reserve,
    sa_solve_slot,
    shake,
    solve_day,
    sorting_solve_slot,
    utility_vector,
)

__version__ = "0.1.0"
