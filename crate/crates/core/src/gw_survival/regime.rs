use crate::degree_model::{power_law_offspring, truncated_family, OffspringDistribution, TAIL_CUTOFF};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::solver::{lower_bound, solve_rho};

/// Which asymptotic statement a family of offspring laws falls under.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegimeKind {
    Subcritical,
    /// `E X_n² = O(1)`: `ρ_n ≍ ε_n`.
    BoundedSecondMoment,
    /// `E X_n² → E X²`: `ρ_n ∼ 2ε_n / E X(X−1)`.
    ConvergentSecondMoment,
    /// Weak limit with infinite variance: `ρ_n = o(ε_n)`.
    InfiniteLimitSecondMoment,
    /// `ε_n Δ_n = o(E X_n²)`: `ρ_n ≍ ε_n / E X_n²`.
    BoundedMax,
    /// Tail `P(X > x) ≍ x^{−β}` with `1 < β < 2`: `ρ_n ≍ ε_n^{1/(β−1)}`.
    PowerLaw,
    /// No sharp statement applies; only the general bounds are reported.
    GeneralBounds,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegimeFlag {
    /// Some law had `ε ≤ 0`.
    Subcritical,
    /// Diagnostics pointed to regimes that disagree.
    Conflict,
    /// Only an order statement is available, without a numeric rate.
    SmallerOrderOnly,
}

/// Predicted survival probability for the largest-`n` law of a family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RhoPrediction<T> {
    /// Asymptotic equivalent.
    Value(T),
    /// Order of magnitude: `scale` up to constants, inside `[lower, upper]`.
    Order { scale: T, lower: T, upper: T },
    /// `ρ = o(ε)`; only the rigorous bracket is known.
    SmallerOrder { lower: T, upper: T },
}

/// Per-law finite-`n` quantities used by the classifier.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LawDiagnostics<T> {
    pub n: u64,
    pub eps: T,
    pub second_moment: T,
    /// Second moment restricted to `X ≤ √Δ`, a proxy for the weak limit.
    pub bulk_second_moment: T,
    pub factorial2: T,
    pub max_support: u64,
    /// `ε Δ / E X²`.
    pub max_ratio: T,
    pub rho: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegimePrediction<T> {
    pub regime: RegimeKind,
    pub predicted_rho: RhoPrediction<T>,
    /// `2ε / E X(X−1)` for the largest-`n` law.
    pub lower_bound: T,
    pub flags: Vec<RegimeFlag>,
    pub diagnostics: Vec<LawDiagnostics<T>>,
    /// Tail exponent fitted on the largest-`n` law, when it has enough atoms.
    pub tail_exponent: Option<T>,
}

const GROWTH_CUT: f64 = 1.5;
const SETTLED_CUT: f64 = 0.1;
const BULK_MATCH: f64 = 0.05;
const MAX_RATIO_CUT: f64 = 0.1;

fn diagnostics<T: Scalar>(n: u64, dist: &OffspringDistribution<T>) -> Result<LawDiagnostics<T>> {
    let delta = dist.max_support();
    let cut = (delta as f64).sqrt().floor() as u64;
    let bulk = dist.expect(|k, _| {
        if k <= cut {
            T::from_count(k) * T::from_count(k)
        } else {
            T::zero()
        }
    });
    let eps = dist.eps();
    let m2 = dist.second_moment();
    Ok(LawDiagnostics {
        n,
        eps,
        second_moment: m2,
        bulk_second_moment: bulk,
        factorial2: dist.factorial_moment2(),
        max_support: delta,
        max_ratio: eps * T::from_count(delta) / m2,
        rho: solve_rho(dist)?.rho,
    })
}

/// Slope of `log P(X > x)` against `log x` over the atoms, when the law has
/// at least eight of them above 1.
fn tail_exponent<T: Scalar>(dist: &OffspringDistribution<T>) -> Option<T> {
    let pts: Vec<(f64, f64)> = dist
        .atoms()
        .iter()
        .filter(|&&(k, _)| k >= 2)
        .filter_map(|&(k, _)| {
            let tail = dist.tail_from(k + 1).as_f64();
            (tail > 0.0).then(|| ((k as f64).ln(), tail.ln()))
        })
        .collect();
    if pts.len() < 8 {
        return None;
    }
    least_squares(&pts).map(|(slope, _)| T::lit(-slope))
}

fn least_squares(pts: &[(f64, f64)]) -> Option<(f64, f64)> {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Classifies a family of laws indexed by `n` (at least three) from
/// finite-`n` trends, and predicts `ρ` for the largest `n`.
///
/// Rules, in order: any `ε ≤ 0` is subcritical; a settled second moment
/// that matches its bulk part gives the convergent case, otherwise the
/// bounded case; a growing second moment with `εΔ/E X²` small and shrinking
/// gives the bounded-maximum case; a growing bulk with a fitted tail exponent
/// in (1,2) gives the power-law case, and without one the infinite-variance
/// case. A growing second moment over a settled bulk matches none of the
/// sharp statements and falls back to the general bounds with a conflict
/// flag.
pub fn classify_regime<T: Scalar>(
    family: &[(u64, OffspringDistribution<T>)],
) -> Result<RegimePrediction<T>> {
    if family.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 laws, got {}",
            family.len()
        )));
    }
    let mut family: Vec<&(u64, OffspringDistribution<T>)> = family.iter().collect();
    family.sort_by_key(|f| f.0);
    let last = &family[family.len() - 1].1;

    if family.iter().any(|(_, d)| d.eps() <= T::zero()) {
        let diagnostics = family
            .iter()
            .map(|(n, d)| diagnostics(*n, d))
            .collect::<Result<Vec<_>>>()?;
        return Ok(RegimePrediction {
            regime: RegimeKind::Subcritical,
            predicted_rho: RhoPrediction::Value(T::zero()),
            lower_bound: T::zero(),
            flags: vec![RegimeFlag::Subcritical],
            diagnostics,
            tail_exponent: None,
        });
    }

    let diags = family
        .iter()
        .map(|(n, d)| diagnostics(*n, d))
        .collect::<Result<Vec<_>>>()?;
    let first = diags[0];
    let prev = diags[diags.len() - 2];
    let cur = diags[diags.len() - 1];

    let growth = (cur.second_moment / first.second_moment).as_f64();
    let bulk_growth = (cur.bulk_second_moment / first.bulk_second_moment).as_f64();
    let settled = ((cur.second_moment - prev.second_moment) / cur.second_moment)
        .abs()
        .as_f64()
        < SETTLED_CUT;
    // a support that does not grow along the family is its own bulk
    let bulk_match = cur.max_support <= first.max_support
        || ((cur.second_moment - cur.bulk_second_moment) / cur.second_moment).as_f64() < BULK_MATCH;
    let max_ratio_small =
        cur.max_ratio.as_f64() < MAX_RATIO_CUT && cur.max_ratio <= first.max_ratio;

    let lb = lower_bound(last)?;
    let p_branch = last.tail_from(2);
    let upper = (cur.eps / p_branch).min(T::one());
    let eps = cur.eps;
    let tail = tail_exponent(last);
    let mut flags = Vec::new();

    let (regime, predicted_rho) = if growth < GROWTH_CUT && settled {
        if bulk_match {
            (
                RegimeKind::ConvergentSecondMoment,
                RhoPrediction::Value(T::lit(2.0) * eps / cur.factorial2),
            )
        } else {
            (
                RegimeKind::BoundedSecondMoment,
                RhoPrediction::Order {
                    scale: eps,
                    lower: lb,
                    upper,
                },
            )
        }
    } else if max_ratio_small {
        (
            RegimeKind::BoundedMax,
            RhoPrediction::Order {
                scale: eps / cur.factorial2,
                lower: lb,
                upper,
            },
        )
    } else if bulk_growth >= GROWTH_CUT {
        match tail {
            Some(beta) if beta > T::one() && beta < T::lit(2.0) => (
                RegimeKind::PowerLaw,
                RhoPrediction::Order {
                    scale: eps.powf(T::one() / (beta - T::one())),
                    lower: lb,
                    upper,
                },
            ),
            _ => {
                flags.push(RegimeFlag::SmallerOrderOnly);
                (
                    RegimeKind::InfiniteLimitSecondMoment,
                    RhoPrediction::SmallerOrder { lower: lb, upper },
                )
            }
        }
    } else {
        flags.push(RegimeFlag::Conflict);
        (
            RegimeKind::GeneralBounds,
            RhoPrediction::Order {
                scale: eps,
                lower: lb,
                upper,
            },
        )
    };

    Ok(RegimePrediction {
        regime,
        predicted_rho,
        lower_bound: lb,
        flags,
        diagnostics: diags,
        tail_exponent: tail,
    })
}

/// Least-squares fit of `log ρ` against `log ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentFit<T> {
    pub slope: T,
    pub intercept: T,
    /// `(ε, ρ)` pairs used for the fit.
    pub points: Vec<(T, T)>,
}

/// Fits `log ρ = slope · log ε + intercept`.
pub fn fit_log_slope<T: Scalar>(points: &[(T, T)]) -> Result<ExponentFit<T>> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(e, r)| *e > T::zero() && *r > T::zero())
        .map(|(e, r)| (e.as_f64().ln(), r.as_f64().ln()))
        .collect();
    if usable.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 positive (eps, rho) pairs, got {}",
            usable.len()
        )));
    }
    let (slope, intercept) = least_squares(&usable)
        .ok_or_else(|| Error::InsufficientData("all eps values coincide".into()))?;
    Ok(ExponentFit {
        slope: T::lit(slope),
        intercept: T::lit(intercept),
        points: points.to_vec(),
    })
}

/// Solves `ρ` along the truncated heavy-tail family built from a degree tail
/// exponent `γ` (offspring tail `β = γ − 1`) and fits the exponent of `ρ`
/// in `ε`. Each law truncates the base at `⌈ε^{−1/(β−1)}⌉`.
pub fn power_law_exponent_check<T: Scalar>(gamma: f64, eps_values: &[f64]) -> Result<ExponentFit<T>> {
    if !(gamma > 2.0) {
        return Err(Error::InvalidParameter(format!("gamma must exceed 2, got {gamma}")));
    }
    if eps_values.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 eps values, got {}",
            eps_values.len()
        )));
    }
    let beta = gamma - 1.0;
    let base = power_law_offspring::<T>(beta, TAIL_CUTOFF)?;
    let mut points = Vec::with_capacity(eps_values.len());
    for &eps in eps_values {
        let cap = eps.powf(-1.0 / (beta - 1.0)).ceil().min((1u64 << 62) as f64) as u64;
        let law = truncated_family(&base, T::lit(eps), cap.max(1))?;
        points.push((T::lit(eps), solve_rho(&law)?.rho));
    }
    fit_log_slope(&points)
}
