use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::degree_model::DegreeSequence;
use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, Scalar};

/// Means of the processes that ignore wake-ups: a vertex of degree `k` stays
/// sleeping until its first half-edge dies, so `Ṽ_k(t) ~ Bin(n_k, e^{−kt})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TildeMeans<T> {
    pub t: T,
    /// `Σ_k k n_k e^{−kt}`.
    pub es_tilde: T,
    /// `Σ_k n_k e^{−kt}`.
    pub ev_tilde: T,
    /// `ℓ e^{−2t}`.
    pub el: T,
    /// `EL − ES̃`.
    pub ea_tilde: T,
}

pub fn tilde_means<T: Scalar>(seq: &DegreeSequence, t: T) -> Result<TildeMeans<T>> {
    if !(t >= T::zero()) {
        return Err(Error::InvalidParameter(format!("t = {t} must be nonnegative")));
    }
    let es_tilde = compensated_sum(
        seq.counts()
            .map(|(k, nk)| T::from_count(k as u64 * nk) * (-T::from_count(k as u64) * t).exp()),
    );
    let ev_tilde = compensated_sum(
        seq.counts()
            .map(|(k, nk)| T::from_count(nk) * (-T::from_count(k as u64) * t).exp()),
    );
    let el = T::from_count(seq.half_edges()) * (-T::lit(2.0) * t).exp();
    Ok(TildeMeans {
        t,
        es_tilde,
        ev_tilde,
        el,
        ea_tilde: el - es_tilde,
    })
}

/// `γ = Σ_k (n_k/n) k min(1, αk)²`.
pub fn gamma_n<T: Scalar>(seq: &DegreeSequence, alpha: T) -> Result<T> {
    if !(alpha >= T::zero()) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} must be nonnegative")));
    }
    let n = T::from_count(seq.n() as u64);
    Ok(compensated_sum(seq.counts().map(|(k, nk)| {
        let kk = T::from_count(k as u64);
        let c = (alpha * kk).min(T::one());
        T::from_count(nk) / n * kk * c * c
    })))
}

/// `ψ(t) = γ^{−1}(μ e^{−2αt} − E D e^{−αtD})`, evaluated per degree class as
/// `−e^{−2x} expm1(−(k−2)x)` with `x = αt` to avoid cancellation.
pub fn psi<T: Scalar>(seq: &DegreeSequence, alpha: T, gamma: T, t: T) -> Result<T> {
    if gamma == T::zero() {
        return Err(Error::DivisionDegenerate("gamma = 0".into()));
    }
    let n = T::from_count(seq.n() as u64);
    let x = alpha * t;
    let e2 = (-T::lit(2.0) * x).exp();
    let sum = compensated_sum(seq.counts().map(|(k, nk)| {
        let kk = T::from_count(k as u64);
        let shift = kk - T::lit(2.0);
        -T::from_count(nk) / n * kk * e2 * (-shift * x).exp_m1()
    }));
    Ok(sum / gamma)
}

/// Realization of `S̃, Ṽ` from a lifetime array: a vertex leaves the
/// sleeping set when its first half-edge dies.
#[derive(Clone, Debug)]
pub struct TildeProcess {
    /// Vertex death times (minimum lifetime over its half-edges), ascending.
    times: Vec<f64>,
    /// `suffix[i]` is the total degree of vertices `i..` in `times` order.
    suffix: Vec<u64>,
    isolated: u64,
}

impl TildeProcess {
    /// `lifetimes` is indexed by half-edge, with the half-edges of vertex `i`
    /// stored contiguously in vertex order.
    pub fn new(seq: &DegreeSequence, lifetimes: &[f64]) -> Self {
        assert_eq!(lifetimes.len() as u64, seq.half_edges(), "one lifetime per half-edge");
        let mut deaths = Vec::with_capacity(seq.n());
        let mut pos = 0usize;
        for &d in seq.degrees() {
            let d = d as usize;
            if d > 0 {
                let m = lifetimes[pos..pos + d].iter().copied().fold(f64::INFINITY, f64::min);
                deaths.push((m, d as u64));
            }
            pos += d;
        }
        deaths.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        let mut suffix = vec![0u64; deaths.len() + 1];
        for i in (0..deaths.len()).rev() {
            suffix[i] = suffix[i + 1] + deaths[i].1;
        }
        Self {
            times: deaths.into_iter().map(|(t, _)| t).collect(),
            suffix,
            isolated: seq.count(0),
        }
    }

    /// Draws fresh i.i.d. Exp(1) lifetimes.
    pub fn sample<R: Rng + ?Sized>(seq: &DegreeSequence, rng: &mut R) -> Self {
        let lifetimes: Vec<f64> = (0..seq.half_edges()).map(|_| Exp1.sample(rng)).collect();
        Self::new(seq, &lifetimes)
    }

    /// `(S̃(t), Ṽ(t))`, right-continuous.
    pub fn at(&self, t: f64) -> (u64, u64) {
        let i = self.times.partition_point(|&x| x <= t);
        (self.suffix[i], (self.times.len() - i) as u64 + self.isolated)
    }
}
