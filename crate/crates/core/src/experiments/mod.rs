//! Replicated experiments over a grid of graph sizes, with output scored
//! against the closed-form predictions.

mod config;
mod run;
mod summary;

pub use config::{ExperimentConfig, Family, Mode, Observables};
pub use run::{
    config_hash, family_sequence, predict, run, ExperimentResult, Prediction, Row, SummaryRow,
};
pub use summary::{summarize, Summary};
