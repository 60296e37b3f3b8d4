use crate::degree_model::OffspringDistribution;
use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Scalar};

/// Result of solving `1 − ρ = E(1−ρ)^X`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurvivalSolution<T> {
    pub rho: T,
    /// `−log(1−ρ)`; infinite when `ρ = 1`.
    pub alpha: T,
    /// `|E(1−ρ)^X − (1−ρ)|` at the returned `rho`.
    pub residual: T,
    pub iterations: u32,
    /// Width of the final bisection bracket.
    pub bracket: T,
}

impl<T: Scalar> SurvivalSolution<T> {
    fn trivial(rho: T) -> Self {
        Self {
            rho,
            alpha: -(-rho).ln_1p(),
            residual: T::zero(),
            iterations: 0,
            bracket: T::zero(),
        }
    }
}

/// `φ(x) = e^{−x} − 1 + x`, by its Taylor series near zero.
pub fn phi<T: Scalar>(x: T) -> T {
    if x < T::lit(0.1) {
        let mut term = x * x / T::lit(2.0);
        let mut acc = CompensatedSum::new();
        for m in 3..=16 {
            acc.add(term);
            term = -term * x / T::lit(m as f64);
        }
        acc.value()
    } else {
        (-x).exp_m1() + x
    }
}

/// `−log(1−ρ) − ρ = Σ_{m≥2} ρ^m/m`.
fn log_excess<T: Scalar>(rho: T) -> T {
    if rho < T::lit(0.1) {
        let mut pow = rho * rho;
        let mut acc = CompensatedSum::new();
        for m in 2..=32 {
            acc.add(pow / T::lit(m as f64));
            pow = pow * rho;
        }
        acc.value()
    } else {
        -(-rho).ln_1p() - rho
    }
}

/// `(1−ρ)^k − 1 + kρ ≥ 0`, evaluated as `φ(kα) − kλ(ρ)` so that small `ρ`
/// does not cancel.
fn pgf_term<T: Scalar>(k: u64, alpha: T, lambda: T) -> T {
    if k <= 1 {
        return T::zero();
    }
    let kf = T::from_count(k);
    (phi(kf * alpha) - kf * lambda).max(T::zero())
}

/// `E(1−ρ)^X − (1−ρ)`, computed as `E[(1−ρ)^X − 1 + ρX] − ερ`.
pub fn pgf_gap<T: Scalar>(dist: &OffspringDistribution<T>, rho: T) -> T {
    if rho >= T::one() {
        return dist.pmf(0);
    }
    if rho <= T::zero() {
        return T::zero();
    }
    let alpha = -(-rho).ln_1p();
    let lambda = log_excess(rho);
    dist.expect(|k, _| pgf_term(k, alpha, lambda)) - dist.eps() * rho
}

/// Strictly increasing in `ρ` on (0,1) whenever `P(X ≥ 2) > 0`; its root is
/// the survival probability.
fn scaled_gap<T: Scalar>(dist: &OffspringDistribution<T>, rho: T, eps: T) -> T {
    let alpha = -(-rho).ln_1p();
    let lambda = log_excess(rho);
    dist.expect(|k, _| pgf_term(k, alpha, lambda) / rho) - eps
}

/// Survival probability of the Galton–Watson process with offspring `dist`.
///
/// Works in the `ρ` coordinate: the map `ρ ↦ (E(1−ρ)^X − (1−ρ))/ρ` is
/// increasing by convexity of the generating function, so bisection on
/// (0,1) is always bracketed. Iterates to full relative precision.
pub fn solve_rho<T: Scalar>(dist: &OffspringDistribution<T>) -> Result<SurvivalSolution<T>> {
    if dist.atoms() == [(1, T::one())] {
        return Err(Error::DegenerateOffspring);
    }
    let eps = dist.eps();
    if eps <= T::zero() {
        return Ok(SurvivalSolution::trivial(T::zero()));
    }
    if dist.pmf(0) == T::zero() {
        return Ok(SurvivalSolution::trivial(T::one()));
    }
    let (mut lo, mut hi) = (T::zero(), T::one());
    let mut iterations = 0;
    let two = T::lit(2.0);
    while iterations < 4096 {
        let mid = lo + (hi - lo) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if scaled_gap(dist, mid, eps) < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= T::epsilon() * hi {
            break;
        }
    }
    let rho = lo + (hi - lo) / two;
    Ok(SurvivalSolution {
        rho,
        alpha: -(-rho).ln_1p(),
        residual: pgf_gap(dist, rho).abs(),
        iterations,
        bracket: hi - lo,
    })
}

/// `2ε / E X(X−1)`, a lower bound for the survival probability.
pub fn lower_bound<T: Scalar>(dist: &OffspringDistribution<T>) -> Result<T> {
    let eps = dist.eps();
    if eps <= T::zero() {
        return Err(Error::InvalidParameter(format!("mean must exceed 1, eps = {eps}")));
    }
    let f2 = dist.factorial_moment2();
    if f2 <= T::zero() {
        return Err(Error::Inconsistent("mean exceeds 1 but E X(X-1) = 0".into()));
    }
    Ok(T::lit(2.0) * eps / f2)
}

/// `ε / E[X ∧ ρX²]`; stays in a fixed band along a near-critical family.
pub fn balance_ratio<T: Scalar>(dist: &OffspringDistribution<T>, rho: T) -> Result<T> {
    if !(rho > T::zero() && rho < T::one()) {
        return Err(Error::InvalidParameter(format!("rho must lie in (0,1), got {rho}")));
    }
    let denom = dist.expect(|k, _| {
        let x = T::from_count(k);
        x.min(rho * x * x)
    });
    if denom <= T::zero() {
        return Err(Error::DivisionDegenerate("E[X ∧ ρX²] = 0".into()));
    }
    Ok(dist.eps() / denom)
}
