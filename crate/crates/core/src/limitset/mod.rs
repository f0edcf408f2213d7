//! The limit set `C`: Cantor gaps, periodic cycles, iterated images and
//! omega-limits.

mod cycles;
mod gaps;
mod images;
mod omega;

pub use cycles::{cycle_points, find_periodic_orbit, fminus_cycle, Cycle, CycleMap, CycleSearch, PeriodicOrbit};
pub use gaps::{
    check_gap_hypothesis, gap_endpoints, gaps_up_to, total_gap_length, Gap, HYPOTHESIS_TOL, ITERATION_CHECK_TOL,
};
pub use images::{cycle_pairing, iterated_image, measure_bound, Arc, IntervalDecomposition, HOLE_MATCH_TOL};
pub use omega::{omega_limit, Omega, OmegaLimit, OmegaOptions};
