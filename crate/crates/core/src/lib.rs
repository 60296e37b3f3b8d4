//! Near-critical configuration-model random graphs: degree sequences,
//! Galton–Watson survival probabilities, uniform half-edge pairing, the
//! continuous-time exploration process, closed-form scaling predictions and
//! a reproducible experiment harness.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix it to `f64`.

pub mod config_model;
pub mod degree_model;
mod error;
pub mod experiments;
pub mod exploration;
pub mod gw_survival;
pub mod rng;
mod scalar;
pub mod theory;

pub use error::{Error, Result};
pub use scalar::{compensated_sum, CompensatedSum, Scalar};

pub type DegreeStats64 = degree_model::DegreeStats<f64>;
pub type Offspring64 = degree_model::OffspringDistribution<f64>;
pub type SurvivalSolution64 = gw_survival::SurvivalSolution<f64>;
pub type TildeMeans64 = exploration::TildeMeans<f64>;
pub type GiantPrediction64 = theory::GiantPrediction<f64>;
pub type RegimeReport64 = theory::RegimeReport<f64>;
