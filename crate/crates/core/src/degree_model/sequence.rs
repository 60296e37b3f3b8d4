use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::offspring::OffspringDistribution;

/// Record of the parity repair applied to an odd degree sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvenFixup {
    /// Zero-based index of the vertex whose degree was incremented.
    pub vertex: usize,
    /// Its degree before the increment.
    pub from: u32,
}

/// A degree sequence `d_1..d_n` together with its degree counts `n_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSequence {
    degrees: Vec<u32>,
    counts: BTreeMap<u32, u64>,
    fixup: Option<EvenFixup>,
}

impl DegreeSequence {
    /// Builds a sequence from explicit per-vertex degrees. The degree sum may
    /// be odd; consumers that need an even sum check it themselves.
    pub fn from_degrees(degrees: Vec<u32>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidParameter("empty degree sequence".into()));
        }
        let mut counts = BTreeMap::new();
        for &d in &degrees {
            *counts.entry(d).or_insert(0u64) += 1;
        }
        Ok(Self {
            degrees,
            counts,
            fixup: None,
        })
    }

    /// Builds a sequence from counts `(k, n_k)`. Vertices are laid out in
    /// ascending degree order.
    pub fn from_counts<I: IntoIterator<Item = (u32, u64)>>(counts: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, nk) in counts {
            if nk > 0 {
                *map.entry(k).or_insert(0u64) += nk;
            }
        }
        let n: u64 = map.values().sum();
        if n == 0 {
            return Err(Error::InvalidParameter("empty degree sequence".into()));
        }
        let mut degrees = Vec::with_capacity(n as usize);
        for (&k, &nk) in &map {
            degrees.extend(std::iter::repeat(k).take(nk as usize));
        }
        Ok(Self {
            degrees,
            counts: map,
            fixup: None,
        })
    }

    pub(crate) fn with_fixup(mut self, fixup: Option<EvenFixup>) -> Self {
        self.fixup = fixup;
        self
    }

    /// Increments the degree of one minimal-degree vertex if the sum is odd.
    /// `pick` chooses among the `m` minimal vertices (argument is `m`).
    pub(crate) fn make_even(mut degrees: Vec<u32>, pick: impl FnOnce(usize) -> usize) -> Result<Self> {
        let sum: u64 = degrees.iter().map(|&d| d as u64).sum();
        let mut fixup = None;
        if sum % 2 == 1 {
            let min = *degrees.iter().min().expect("nonempty");
            let minimal: Vec<usize> = (0..degrees.len()).filter(|&i| degrees[i] == min).collect();
            let vertex = minimal[pick(minimal.len())];
            degrees[vertex] += 1;
            fixup = Some(EvenFixup { vertex, from: min });
        }
        Ok(Self::from_degrees(degrees)?.with_fixup(fixup))
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.degrees[v]
    }

    /// Degree counts `(k, n_k)` in ascending `k`.
    pub fn counts(&self) -> impl DoubleEndedIterator<Item = (u32, u64)> + '_ {
        self.counts.iter().map(|(&k, &nk)| (k, nk))
    }

    pub fn count(&self, k: u32) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// Total number of half-edges, `ℓ_n = Σ d_i`.
    pub fn half_edges(&self) -> u64 {
        self.counts.iter().map(|(&k, &nk)| k as u64 * nk).sum()
    }

    pub fn max_degree(&self) -> u32 {
        *self.counts.keys().next_back().expect("nonempty")
    }

    pub fn is_even(&self) -> bool {
        self.half_edges() % 2 == 0
    }

    pub fn fixup(&self) -> Option<EvenFixup> {
        self.fixup
    }

    /// Moments and derived parameters of the empirical degree law.
    ///
    /// Every sum is taken exactly in wide integers over the counts and
    /// divided once, so heavy tails do not lose precision.
    pub fn stats<T: Scalar>(&self) -> Result<DegreeStats<T>> {
        let n = self.n() as u64;
        let mut s1 = 0u128;
        let mut s2 = 0u128;
        let mut s3 = 0u128;
        let mut f2 = 0u128;
        let mut f3 = 0u128;
        let mut excess = 0i128;
        for (&k, &nk) in self.counts.iter().rev() {
            let (k, nk) = (k as u128, nk as u128);
            s1 += k * nk;
            s2 += k * k * nk;
            s3 += k * k * k * nk;
            f2 += k * k.saturating_sub(1) * nk;
            f3 += k * k.saturating_sub(1) * k.saturating_sub(2) * nk;
            excess += (k as i128) * (k as i128 - 2) * nk as i128;
        }
        if s1 == 0 {
            return Err(Error::DegenerateSequence(
                "all vertices are isolated, the size-biased law is undefined".into(),
            ));
        }
        let nf = T::from_count(n);
        let s1f = T::from_wide(s1);
        let mu = s1f / nf;
        Ok(DegreeStats {
            n,
            mu,
            nu: T::from_wide(f2) / s1f,
            eps: T::from_signed_wide(excess) / s1f,
            m2: T::from_wide(s2) / nf,
            r: T::from_wide(s3) / nf,
            kappa: T::from_wide(f3) / s1f,
            factorial2: T::from_wide(f2) / nf,
            delta: self.max_degree(),
            ell: s1 as u64,
        })
    }

    /// Forward-degree law `D̃ = D* − 1`: `P(D̃ = k−1) = k n_k / ℓ_n`.
    pub fn size_biased<T: Scalar>(&self) -> Result<OffspringDistribution<T>> {
        let ell = self.half_edges();
        if ell == 0 {
            return Err(Error::DegenerateSequence(
                "zero mean degree, the size-biased law is undefined".into(),
            ));
        }
        let ellf = T::from_count(ell);
        let atoms = self
            .counts
            .iter()
            .filter(|(&k, _)| k > 0)
            .map(|(&k, &nk)| ((k - 1) as u64, T::from_count(k as u64 * nk) / ellf))
            .collect();
        OffspringDistribution::new(atoms)
    }

    /// Empirical degree law `P(D_n = k) = n_k / n`.
    pub fn empirical_pmf<T: Scalar>(&self) -> Result<OffspringDistribution<T>> {
        let nf = T::from_count(self.n() as u64);
        let atoms = self
            .counts
            .iter()
            .map(|(&k, &nk)| (k as u64, T::from_count(nk) / nf))
            .collect();
        OffspringDistribution::new(atoms)
    }
}

/// Statistics of the empirical degree law `D_n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegreeStats<T> {
    pub n: u64,
    /// `E D_n`.
    pub mu: T,
    /// `E D_n(D_n−1) / E D_n`.
    pub nu: T,
    /// `ν_n − 1`, computed as `E D_n(D_n−2) / E D_n` without cancellation.
    pub eps: T,
    /// `E D_n²`.
    pub m2: T,
    /// `R_n = E D_n³`.
    pub r: T,
    /// `κ_n = E D_n(D_n−1)(D_n−2) / E D_n`.
    pub kappa: T,
    /// `E D_n(D_n−1)`.
    pub factorial2: T,
    /// Maximum degree `Δ_n`.
    pub delta: u32,
    /// `ℓ_n = Σ d_i`.
    pub ell: u64,
}
