//! Continuous-time construction-and-exploration of the configuration
//! multigraph, its process observables, and the analytic means of the
//! processes that ignore wake-ups.

mod engine;
mod io;
mod tilde;
mod trace;

pub use engine::{explore, explore_with, Exploration, ExploreOptions, TraceLevel};
pub use io::{write_boundaries_csv, write_trace_csv};
pub use tilde::{gamma_n, psi, tilde_means, TildeMeans, TildeProcess};
pub use trace::{
    component_sizes_from_trace, Boundary, EventKind, ExplorationTrace, Sample, SandwichReport,
};
