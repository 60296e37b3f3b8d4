//! The configuration multigraph: uniform half-edge pairing, simplicity and
//! exact component statistics.

mod components;
mod io;
mod pairing;

pub use components::{components, ComponentSize, ComponentStats};
pub use io::{read_edge_list, write_edge_list, EdgeListHeader};
pub(crate) use pairing::owners as owners_of;
pub use pairing::{
    is_simple, pair_half_edges, sample_simple, simple_prob_prediction, MultiGraph, SimpleSample,
    DEFAULT_MAX_ATTEMPTS,
};
