//! Closed-form predictions and scaling thresholds for a concrete degree
//! sequence: giant size and degree profile, third-moment forms, the critical
//! window, and the complexity of the giant.

use crate::degree_model::{DegreeSequence, DegreeStats};
use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct GiantPrediction<T> {
    /// `μ ρ n`.
    pub v1: T,
    /// Equal to `v1`: the giant has as many excess edges as a tree to first
    /// order.
    pub e1: T,
    /// `ρ n`, the scale that the second component is small against.
    pub v2_order: T,
    /// `(k, μ ρ P(D* = k) n)` for every degree present.
    pub degree_profile: Vec<(u32, T)>,
    /// `E(1 − (1−ρ)^D) n`.
    pub giant_fraction_exact: T,
    /// True when `ρ ≤ 0` and every field is zero.
    pub no_giant: bool,
}

/// Giant-component predictions. `rho ≤ 0` gives an all-zero prediction with
/// `no_giant` set.
pub fn predict_giant<T: Scalar>(seq: &DegreeSequence, rho: T) -> Result<GiantPrediction<T>> {
    if rho.is_nan() || rho > T::one() {
        return Err(Error::InvalidParameter(format!("rho = {rho} outside [0,1]")));
    }
    let n = T::from_count(seq.n() as u64);
    if rho <= T::zero() {
        return Ok(GiantPrediction {
            v1: T::zero(),
            e1: T::zero(),
            v2_order: T::zero(),
            degree_profile: seq.counts().map(|(k, _)| (k, T::zero())).collect(),
            giant_fraction_exact: T::zero(),
            no_giant: true,
        });
    }
    let stats = seq.stats::<T>()?;
    let v1 = stats.mu * rho * n;
    // μ ρ n · k n_k / ℓ = ρ k n_k
    let degree_profile = seq
        .counts()
        .map(|(k, nk)| (k, rho * T::from_count(k as u64 * nk)))
        .collect();
    let log_q = (-rho).ln_1p();
    let giant_fraction_exact = compensated_sum(
        seq.counts()
            .map(|(k, nk)| -T::from_count(nk) * (T::from_count(k as u64) * log_q).exp_m1()),
    );
    Ok(GiantPrediction {
        v1,
        e1: v1,
        v2_order: rho * n,
        degree_profile,
        giant_fraction_exact,
        no_giant: false,
    })
}

/// Predictions that depend on the third moment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThirdMomentForms<T> {
    /// `2 μ ε n / κ`.
    pub td3_value: T,
    /// Finite-`n` lower bound `2 μ_n ε_n n / κ_n`.
    pub tdx_lower: T,
    /// `ε n / R`.
    pub win_scale: T,
    /// `ε / R`, the order of `ρ` and `α`.
    pub reda_rho_scale: T,
    /// `α Δ ≤ 1`, when `α` was supplied.
    pub reda_valid: Option<bool>,
    /// False when `ε ≤ 0`; all values are then zero.
    pub supercritical: bool,
}

pub fn predict_third_moment_forms<T: Scalar>(
    stats: &DegreeStats<T>,
    alpha: Option<T>,
) -> Result<ThirdMomentForms<T>> {
    if stats.kappa == T::zero() {
        return Err(Error::DivisionDegenerate("kappa = 0".into()));
    }
    let reda_valid = alpha.map(|a| a * T::from_count(stats.delta as u64) <= T::one());
    if stats.eps <= T::zero() {
        return Ok(ThirdMomentForms {
            td3_value: T::zero(),
            tdx_lower: T::zero(),
            win_scale: T::zero(),
            reda_rho_scale: T::zero(),
            reda_valid,
            supercritical: false,
        });
    }
    let n = T::from_count(stats.n);
    let td3 = T::lit(2.0) * stats.mu * stats.eps * n / stats.kappa;
    Ok(ThirdMomentForms {
        td3_value: td3,
        tdx_lower: td3,
        win_scale: stats.eps * n / stats.r,
        reda_rho_scale: stats.eps / stats.r,
        reda_valid,
        supercritical: true,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Subcritical,
    CriticalWindow,
    BarelySupercritical,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Subcritical => "subcritical",
            Regime::CriticalWindow => "critical-window",
            Regime::BarelySupercritical => "barely-supercritical",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegimeReport<T> {
    /// `n^{−1/3} R^{2/3}`.
    pub threshold: T,
    /// `ε / threshold`.
    pub margin: T,
    /// `n^{2/3} R^{−1/3}`.
    pub critical_scale: T,
    /// `(nR)^{−1/3}`.
    pub t1: T,
    pub regime: Regime,
    /// `Δ / (nR)^{1/3}`.
    pub delta_condition: T,
    pub cut: T,
}

pub const DEFAULT_MARGIN_CUT: f64 = 10.0;

pub fn regime_report<T: Scalar>(stats: &DegreeStats<T>, cut: T) -> RegimeReport<T> {
    let n = T::from_count(stats.n);
    let third = T::lit(1.0 / 3.0);
    let nr = (n * stats.r).powf(third);
    let threshold = stats.r.powf(T::lit(2.0) * third) / n.powf(third);
    let margin = stats.eps / threshold;
    let regime = if margin > cut {
        Regime::BarelySupercritical
    } else if margin >= -cut {
        Regime::CriticalWindow
    } else {
        Regime::Subcritical
    };
    RegimeReport {
        threshold,
        margin,
        critical_scale: n / nr,
        t1: nr.recip(),
        regime,
        delta_condition: T::from_count(stats.delta as u64) / nr,
        cut,
    }
}

/// `h(x) = (1 + x/2)e^{−x} − 1 + x/2`.
///
/// Below `x = 1` the power series `Σ_{m≥3} (−1)^{m+1}(m−2) x^m / (2·m!)` is
/// summed instead; the closed form loses all digits to cancellation near 0.
pub fn h<T: Scalar>(x: T) -> T {
    if x < T::one() {
        let mut term = x * x * x / T::lit(6.0); // x^m / m! at m = 3
        let mut sum = T::zero();
        for m in 3..40u32 {
            let mf = T::from_count(m as u64);
            let c = (mf - T::lit(2.0)) / T::lit(2.0);
            let add = if m % 2 == 1 { c * term } else { -c * term };
            sum += add;
            if add.abs() <= sum.abs() * T::epsilon() * T::lit(0.25) {
                break;
            }
            term = term * x / (mf + T::one());
        }
        sum
    } else {
        let half = x / T::lit(2.0);
        (T::one() + half) * (-x).exp() - T::one() + half
    }
}

/// `χ = E h(αD) − ½ μ h(2α)` with `α = −ln(1−ρ)`, cross-checked against
/// `½μ(1−(1−ρ)²) − E(1−(1−ρ)^D)`.
///
/// The two forms differ by `½α(E D(1−ρ)^D − μ(1−ρ)²)`, so they agree only
/// when `rho` solves the survival equation of the forward-degree law; any
/// other `rho` is reported as a disagreement.
pub fn chi<T: Scalar>(seq: &DegreeSequence, rho: T) -> Result<T> {
    if rho.is_nan() || rho < T::zero() || rho >= T::one() {
        return Err(Error::InvalidParameter(format!("rho = {rho} outside [0,1)")));
    }
    if rho == T::zero() {
        return Ok(T::zero());
    }
    let n = T::from_count(seq.n() as u64);
    let stats = seq.stats::<T>()?;
    let alpha = -(-rho).ln_1p();
    let eh = compensated_sum(
        seq.counts()
            .map(|(k, nk)| T::from_count(nk) / n * h(alpha * T::from_count(k as u64))),
    );
    let chih = eh - stats.mu / T::lit(2.0) * h(T::lit(2.0) * alpha);

    let q = T::one() - rho;
    let survive = compensated_sum(
        seq.counts()
            .map(|(k, nk)| -T::from_count(nk) / n * (T::from_count(k as u64) * (-rho).ln_1p()).exp_m1()),
    );
    let chi1 = stats.mu / T::lit(2.0) * (T::one() - q * q) - survive;

    // cancellation in the direct form costs about log10(μ/|χ|) digits
    let tol = T::lit(1e-12).max(T::lit(1e-6) * chih.abs())
        .max(T::lit(64.0) * T::epsilon() * stats.mu);
    if (chih - chi1).abs() > tol {
        return Err(Error::NumericalInstability {
            form_a: chih.as_f64(),
            form_b: chi1.as_f64(),
        });
    }
    Ok(chih)
}

/// Both third-moment forms of the complexity density: `(κμ/12)ρ³` and
/// `(2μ/3κ²)ε³`.
pub fn chi_td3_closed_form<T: Scalar>(stats: &DegreeStats<T>, rho: T) -> (T, T) {
    let rho_form = stats.kappa * stats.mu / T::lit(12.0) * rho.powi(3);
    let eps_form = if stats.eps <= T::zero() || stats.kappa == T::zero() {
        T::zero()
    } else {
        T::lit(2.0) * stats.mu / (T::lit(3.0) * stats.kappa * stats.kappa) * stats.eps.powi(3)
    };
    (rho_form, eps_form)
}

/// Growth of the explored vertex count, `ĝ(t) = μt`.
pub fn g_hat<T: Scalar>(stats: &DegreeStats<T>, t: T) -> T {
    stats.mu * t
}

/// Growth of the explored half-edge count, `ĥ(t) = 2μt`.
pub fn h_hat<T: Scalar>(stats: &DegreeStats<T>, t: T) -> T {
    T::lit(2.0) * stats.mu * t
}
