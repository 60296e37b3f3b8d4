use rand::Rng;

use crate::degree_model::{DegreeSequence, DegreeStats};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default rejection budget of [`sample_simple`].
pub const DEFAULT_MAX_ATTEMPTS: u32 = 200;

/// A configuration multigraph. Vertices are `0..n`; loops appear as `(v, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(u32, u32)>,
    half_edge_owner: Vec<u32>,
    seed: Option<u64>,
}

impl MultiGraph {
    /// Assembles a graph from an explicit pairing. `owner[h]` is the vertex
    /// of half-edge `h`.
    pub fn from_parts(n: usize, edges: Vec<(u32, u32)>, half_edge_owner: Vec<u32>) -> Self {
        Self {
            n,
            edges,
            half_edge_owner,
            seed: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn half_edge_owner(&self) -> &[u32] {
        &self.half_edge_owner
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Per-vertex incidence counts, loops counted twice.
    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.n];
        for &(u, v) in &self.edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        deg
    }
}

/// Half-edge owners laid out vertex by vertex.
pub(crate) fn owners(seq: &DegreeSequence) -> Result<Vec<u32>> {
    let ell = seq.half_edges();
    if ell % 2 == 1 {
        return Err(Error::Parity(ell));
    }
    if seq.n() > u32::MAX as usize {
        return Err(Error::InvalidParameter("too many vertices".into()));
    }
    let mut owner = Vec::with_capacity(ell as usize);
    for (v, &d) in seq.degrees().iter().enumerate() {
        owner.extend(std::iter::repeat(v as u32).take(d as usize));
    }
    Ok(owner)
}

/// Uniform perfect matching of the half-edges: position `i` is paired with a
/// uniformly chosen later position swapped into `i+1`.
pub fn pair_half_edges<R: Rng + ?Sized>(seq: &DegreeSequence, rng: &mut R) -> Result<MultiGraph> {
    let owner = owners(seq)?;
    let ell = owner.len();
    let mut slots = owner.clone();
    let mut edges = Vec::with_capacity(ell / 2);
    let mut i = 0;
    while i < ell {
        let j = rng.random_range(i + 1..ell);
        slots.swap(i + 1, j);
        edges.push((slots[i], slots[i + 1]));
        i += 2;
    }
    Ok(MultiGraph::from_parts(seq.n(), edges, owner))
}

/// No loops and no repeated vertex pair.
pub fn is_simple(g: &MultiGraph) -> bool {
    if g.edges.iter().any(|&(u, v)| u == v) {
        return false;
    }
    let mut pairs: Vec<(u32, u32)> = g.edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    pairs.sort_unstable();
    pairs.windows(2).all(|w| w[0] != w[1])
}

#[derive(Clone, Debug)]
pub struct SimpleSample {
    pub graph: MultiGraph,
    pub attempts: u32,
}

/// Rejection sampling of a simple graph with the given degrees.
pub fn sample_simple<R: Rng + ?Sized>(
    seq: &DegreeSequence,
    rng: &mut R,
    max_attempts: u32,
) -> Result<SimpleSample> {
    if max_attempts == 0 {
        return Err(Error::InvalidParameter("max_attempts must be at least 1".into()));
    }
    for attempt in 1..=max_attempts {
        let graph = pair_half_edges(seq, rng)?;
        if is_simple(&graph) {
            return Ok(SimpleSample {
                graph,
                attempts: attempt,
            });
        }
    }
    Err(Error::RejectionFailure {
        attempts: max_attempts,
    })
}

/// Asymptotic probability that the multigraph is simple, `e^{−ν/2 − ν²/4}`.
pub fn simple_prob_prediction<T: Scalar>(stats: &DegreeStats<T>) -> T {
    let nu = stats.nu;
    (-(nu / T::lit(2.0)) - nu * nu / T::lit(4.0)).exp()
}
