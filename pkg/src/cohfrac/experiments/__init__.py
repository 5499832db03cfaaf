from .simulation import (
    CSV_HEADER,
    GapSummary,
    SimulationError,
    SimulationRecord,
    derive_seed,
    read_csv,
    records_to_csv,
    run_gap_simulation,
    simulate_sample,
    summarize,
    write_csv,
)
from .verify import (
    SUITES,
    Check,
    SuiteReport,
    run_suite,
    verify_bounds,
    verify_gradient,
    verify_sdp_certificate,
    verify_theorem1,
    verify_theorem3,
)
