//! Degree sequences, offspring laws and the degree statistics consumed by
//! the survival solver and the scaling predictions.

mod generators;
mod io;
mod offspring;
mod sequence;

pub use generators::{
    degree_surgery, e3_offspring, from_iid_pmf, power_law_offspring, power_law_sequence,
    truncated_family, two_atom_for_eps, two_atom_sequence, TAIL_CUTOFF,
};
pub use io::{read_degree_csv, read_pmf_csv, write_counts_csv, write_explicit_csv};
pub use offspring::{DegreePmf, OffspringDistribution, Truncation};
pub use sequence::{DegreeSequence, DegreeStats, EvenFixup};
