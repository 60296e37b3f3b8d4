//! Survival probability of near-critical Galton–Watson processes: the
//! fixed-point solver, its bounds and asymptotic regimes, and a Monte Carlo
//! oracle.

mod mc;
mod regime;
mod solver;

pub use mc::{mc_extinction, McEstimate, McOptions};
pub use regime::{
    classify_regime, fit_log_slope, power_law_exponent_check, ExponentFit, LawDiagnostics,
    RegimeFlag, RegimeKind, RegimePrediction, RhoPrediction,
};
pub use solver::{
    balance_ratio, lower_bound, phi, pgf_gap, solve_rho, SurvivalSolution,
};
