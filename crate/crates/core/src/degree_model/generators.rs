use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::offspring::{OffspringDistribution, Truncation};
use super::sequence::DegreeSequence;

/// Tail mass below which an infinite-support law is cut off.
pub const TAIL_CUTOFF: f64 = 1e-15;

/// Draws `n` i.i.d. degrees from `pmf`. An odd degree sum is repaired by
/// incrementing a uniformly chosen minimal-degree vertex; the repair is
/// recorded in [`DegreeSequence::fixup`].
pub fn from_iid_pmf<T: Scalar, R: Rng + ?Sized>(
    pmf: &OffspringDistribution<T>,
    n: usize,
    rng: &mut R,
) -> Result<DegreeSequence> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if pmf.max_support() > u32::MAX as u64 {
        return Err(Error::InvalidParameter("degree exceeds u32 range".into()));
    }
    let weights: Vec<f64> = pmf.atoms().iter().map(|&(_, p)| p.as_f64()).collect();
    let index = WeightedIndex::new(&weights)
        .map_err(|e| Error::InvalidParameter(format!("pmf weights: {e}")))?;
    let degrees: Vec<u32> = (0..n)
        .map(|_| pmf.atoms()[index.sample(rng)].0 as u32)
        .collect();
    DegreeSequence::make_even(degrees, |m| rng.random_range(0..m))
}

/// Deterministic power-law sequence `d_i = max(1, ⌊(n/i)^{1/γ}⌋)`, sorted
/// decreasing, with the last vertex incremented when the sum is odd.
pub fn power_law_sequence(gamma: f64, n: usize) -> Result<DegreeSequence> {
    if !(gamma > 1.0) {
        return Err(Error::InvalidParameter(format!("gamma must exceed 1, got {gamma}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let nf = n as f64;
    let degrees: Vec<u32> = (1..=n)
        .map(|i| {
            let x = (nf / i as f64).powf(1.0 / gamma);
            (x.floor() as u32).max(1)
        })
        .collect();
    // minimal vertices sit at the end of a decreasing sequence
    DegreeSequence::make_even(degrees, |m| m - 1)
}

/// The three-atom law with atoms at 0, 2 and `n`:
/// `P(0) = (1−ε+(n−2)p)/2`, `P(2) = (1+ε−np)/2`, `P(n) = p`. Its mean is
/// `1+ε`.
pub fn e3_offspring<T: Scalar>(n: u64, eps: T, p: T) -> Result<OffspringDistribution<T>> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("n must be at least 3, got {n}")));
    }
    let nf = T::from_count(n);
    if !(eps > T::zero() && eps <= T::one()) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0,1], got {eps}")));
    }
    if !(p > T::zero() && p * nf <= T::one() * (T::one() + T::epsilon())) {
        return Err(Error::InvalidParameter(format!("p must lie in (0,1/n], got {p}")));
    }
    let two = T::lit(2.0);
    let p0 = (T::one() - eps + (nf - two) * p) / two;
    let p2 = (T::one() + eps - nf * p) / two;
    for (label, m) in [("P(0)", p0), ("P(2)", p2)] {
        if !(T::zero()..=T::one()).contains(&m) {
            return Err(Error::InvalidParameter(format!("{label} = {m} out of [0,1]")));
        }
    }
    OffspringDistribution::new(vec![(0, p0), (2, p2), (n, p)])
}

/// Truncates a mean-one `base` at `cap` and moves mass `δ = ε + E(X − X∧cap)`
/// from 0 to 1, producing a law with mean exactly `1 + ε`.
pub fn truncated_family<T: Scalar>(
    base: &OffspringDistribution<T>,
    eps: T,
    cap: u64,
) -> Result<OffspringDistribution<T>> {
    if cap < 1 {
        return Err(Error::InvalidParameter("truncation point must be at least 1".into()));
    }
    if (base.mean() - T::one()).abs() > T::lit(1e-9) {
        return Err(Error::InvalidParameter(format!(
            "base law must have mean 1, got {}",
            base.mean()
        )));
    }
    if eps < T::zero() {
        return Err(Error::InvalidParameter(format!("eps must be nonnegative, got {eps}")));
    }
    let loss = base.expect(|k, _| {
        if k > cap {
            T::from_count(k - cap)
        } else {
            T::zero()
        }
    });
    let delta = eps + loss;
    let p0 = base.pmf(0);
    if p0 < delta {
        return Err(Error::InfeasibleShift {
            p0: p0.as_f64(),
            delta: delta.as_f64(),
        });
    }
    let mut atoms: Vec<(u64, T)> = base.atoms().iter().map(|&(k, p)| (k.min(cap), p)).collect();
    atoms.push((0, -delta));
    atoms.push((1, delta));
    // merge first so the shifted zero mass is never transiently negative
    atoms.sort_by_key(|&(k, _)| k);
    let mut merged: Vec<(u64, T)> = Vec::new();
    for (k, p) in atoms {
        match merged.last_mut() {
            Some(last) if last.0 == k => last.1 += p,
            _ => merged.push((k, p)),
        }
    }
    for m in merged.iter_mut() {
        if m.1 < T::zero() {
            m.1 = T::zero();
        }
    }
    OffspringDistribution::new(merged)
}

/// Mean-one law with atoms at 0 and at the powers of two, `P(X = 2^j) ∝
/// 2^{−jβ}`, so that `P(X > x) ≍ x^{−β}`. The dyadic tail is cut where both
/// the remaining mass and its contribution to the mean fall below `cutoff`
/// (at most `2^62`); the cut is recorded.
pub fn power_law_offspring<T: Scalar>(beta: f64, cutoff: f64) -> Result<OffspringDistribution<T>> {
    if !(beta > 1.0) {
        return Err(Error::InvalidParameter(format!("beta must exceed 1, got {beta}")));
    }
    let ratio_mass = 2f64.powf(-beta);
    let ratio_mean = 2f64.powf(1.0 - beta);
    let total_mass = 1.0 / (1.0 - ratio_mass);
    let total_mean = 1.0 / (1.0 - ratio_mean);
    let mut top = 0u32;
    loop {
        let tail_mass = ratio_mass.powi(top as i32 + 1) / (1.0 - ratio_mass) / total_mass;
        let tail_mean = ratio_mean.powi(top as i32 + 1) / (1.0 - ratio_mean) / total_mean;
        if (tail_mass < cutoff && tail_mean < cutoff) || top == 62 {
            break;
        }
        top += 1;
    }
    let weights: Vec<f64> = (0..=top).map(|j| ratio_mass.powi(j as i32)).collect();
    let z: f64 = weights.iter().rev().sum();
    let scaled_mean: f64 = (0..=top)
        .rev()
        .map(|j| weights[j as usize] / z * 2f64.powi(j as i32))
        .sum();
    let w = 1.0 / scaled_mean;
    let mut atoms = vec![(0u64, T::lit(1.0 - w))];
    for j in 0..=top {
        atoms.push((1u64 << j, T::lit(w * weights[j as usize] / z)));
    }
    let tail_mass = ratio_mass.powi(top as i32 + 1) / (1.0 - ratio_mass) / total_mass;
    Ok(OffspringDistribution::new(atoms)?.with_truncation(Truncation {
        point: 1u64 << top,
        tail_mass,
    }))
}

/// `(p1, p3)` of the two-atom degree law on {1,3} with `ν = 1 + ε`.
pub fn two_atom_for_eps(eps: f64) -> Result<(f64, f64)> {
    if !(-1.0..2.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!(
            "eps must lie in [-1,2) for the two-atom family, got {eps}"
        )));
    }
    let p3 = (1.0 + eps) / (4.0 - 2.0 * eps);
    Ok((1.0 - p3, p3))
}

/// Two-atom sequence with `round(n·p3)` vertices of degree 3 and the rest of
/// degree 1, parity-repaired on a degree-1 vertex when needed.
pub fn two_atom_sequence(n: usize, p3: f64) -> Result<DegreeSequence> {
    if !(0.0..=1.0).contains(&p3) || n == 0 {
        return Err(Error::InvalidParameter(format!("invalid two-atom parameters n={n}, p3={p3}")));
    }
    let n3 = (n as f64 * p3).round() as usize;
    let mut degrees = vec![1u32; n - n3];
    degrees.extend(std::iter::repeat(3).take(n3));
    DegreeSequence::make_even(degrees, |m| m - 1)
}

/// Replaces `2m` vertices of degree 1 by `m` of degree 0 and `m` of degree 2
/// (the first `2m` degree-1 vertices in index order). `ℓ_n` is unchanged and
/// `n·E D(D−1)` grows by exactly `2m`.
pub fn degree_surgery(seq: &DegreeSequence, m: u64) -> Result<DegreeSequence> {
    let available = seq.count(1);
    if available < 2 * m {
        return Err(Error::InfeasibleSurgery {
            needed: 2 * m,
            available,
        });
    }
    if m == 0 {
        return Ok(seq.clone());
    }
    let mut degrees = seq.degrees().to_vec();
    let mut changed = 0u64;
    for d in degrees.iter_mut() {
        if *d == 1 {
            *d = if changed < m { 0 } else { 2 };
            changed += 1;
            if changed == 2 * m {
                break;
            }
        }
    }
    DegreeSequence::from_degrees(degrees)
}
