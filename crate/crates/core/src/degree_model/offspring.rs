use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Scalar};

/// Where an infinite-support law was cut off.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncation {
    /// Largest atom kept.
    pub point: u64,
    /// Probability mass beyond `point` that was dropped before renormalizing.
    pub tail_mass: f64,
}

/// A probability mass function with finite support on the nonnegative
/// integers, stored as sorted sparse atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct OffspringDistribution<T> {
    atoms: Vec<(u64, T)>,
    mean: T,
    excess: T,
    second_moment: T,
    factorial2: T,
    truncation: Option<Truncation>,
}

/// The same representation is used for degree laws.
pub type DegreePmf<T> = OffspringDistribution<T>;

impl<T: Scalar> OffspringDistribution<T> {
    /// Validates and normalizes a list of `(k, P(X=k))` atoms. Duplicate `k`
    /// are merged and zero masses dropped.
    pub fn new(mut atoms: Vec<(u64, T)>) -> Result<Self> {
        if atoms.iter().any(|&(_, p)| !(p >= T::zero()) || !p.is_finite()) {
            return Err(Error::InvalidParameter(
                "probabilities must be finite and nonnegative".into(),
            ));
        }
        atoms.sort_by_key(|&(k, _)| k);
        let mut merged: Vec<(u64, T)> = Vec::with_capacity(atoms.len());
        for (k, p) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == k => last.1 += p,
                _ => merged.push((k, p)),
            }
        }
        merged.retain(|&(_, p)| p > T::zero());
        let total = descending_sum(&merged, |_, p| p);
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(64.0));
        if merged.is_empty() || (total - T::one()).abs() > tol {
            return Err(Error::InvalidParameter(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        let mean = descending_sum(&merged, |k, p| T::from_count(k) * p);
        let excess = descending_sum(&merged, |k, p| (T::from_count(k) - T::one()) * p);
        let second_moment = descending_sum(&merged, |k, p| {
            let kf = T::from_count(k);
            kf * kf * p
        });
        let factorial2 = descending_sum(&merged, |k, p| {
            let kf = T::from_count(k);
            kf * (kf - T::one()) * p
        });
        Ok(Self {
            atoms: merged,
            mean,
            excess,
            second_moment,
            factorial2,
            truncation: None,
        })
    }

    pub(crate) fn with_truncation(mut self, truncation: Truncation) -> Self {
        self.truncation = Some(truncation);
        self
    }

    /// Atoms `(k, P(X=k))` in ascending `k`.
    pub fn atoms(&self) -> &[(u64, T)] {
        &self.atoms
    }

    pub fn pmf(&self, k: u64) -> T {
        self.atoms
            .binary_search_by_key(&k, |&(j, _)| j)
            .map(|i| self.atoms[i].1)
            .unwrap_or_else(|_| T::zero())
    }

    pub fn mean(&self) -> T {
        self.mean
    }

    /// `E X − 1`, summed term by term as `Σ (k−1) p_k`.
    pub fn eps(&self) -> T {
        self.excess
    }

    pub fn second_moment(&self) -> T {
        self.second_moment
    }

    /// `E X(X−1)`.
    pub fn factorial_moment2(&self) -> T {
        self.factorial2
    }

    pub fn max_support(&self) -> u64 {
        self.atoms.last().expect("nonempty").0
    }

    pub fn truncation(&self) -> Option<Truncation> {
        self.truncation
    }

    /// `P(X ≥ k)`.
    pub fn tail_from(&self, k: u64) -> T {
        let start = self.atoms.partition_point(|&(j, _)| j < k);
        descending_sum(&self.atoms[start..], |_, p| p)
    }

    /// Compensated `Σ_k f(k, p_k)` taken from the largest atom down.
    pub fn expect(&self, f: impl Fn(u64, T) -> T) -> T {
        descending_sum(&self.atoms, |k, p| f(k, p) * p)
    }

    /// Size-biased law shifted down by one: `P(X̃ = k−1) = k P(X=k) / E X`.
    pub fn size_biased(&self) -> Result<Self> {
        if !(self.mean > T::zero()) {
            return Err(Error::DegenerateSequence(
                "zero mean, the size-biased law is undefined".into(),
            ));
        }
        let atoms = self
            .atoms
            .iter()
            .filter(|&&(k, _)| k > 0)
            .map(|&(k, p)| (k - 1, T::from_count(k) * p / self.mean))
            .collect();
        Self::new(atoms)
    }

    /// Converts the scalar type.
    pub fn cast<U: Scalar>(&self) -> Result<OffspringDistribution<U>> {
        let atoms = self
            .atoms
            .iter()
            .map(|&(k, p)| (k, U::lit(p.as_f64())))
            .collect();
        OffspringDistribution::new(atoms)
    }
}

fn descending_sum<T: Scalar>(atoms: &[(u64, T)], f: impl Fn(u64, T) -> T) -> T {
    let mut acc = CompensatedSum::new();
    for &(k, p) in atoms.iter().rev() {
        acc.add(f(k, p));
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_masses() {
        assert!(OffspringDistribution::new(vec![(0, 0.5f64), (1, 0.4)]).is_err());
        assert!(OffspringDistribution::new(vec![(0, -0.1f64), (1, 1.1)]).is_err());
        assert!(OffspringDistribution::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn merges_and_sorts() {
        let d = OffspringDistribution::new(vec![(2, 0.25f64), (0, 0.5), (2, 0.25), (5, 0.0)]).unwrap();
        assert_eq!(d.atoms(), &[(0, 0.5), (2, 0.5)]);
        assert_eq!(d.max_support(), 2);
        assert_eq!(d.mean(), 1.0);
        assert_eq!(d.factorial_moment2(), 1.0);
        assert_eq!(d.tail_from(1), 0.5);
    }

    proptest! {
        #[test]
        fn moments_match_pmf(ws in prop::collection::vec(0.0f64..1.0, 1..12)) {
            let total: f64 = ws.iter().sum();
            prop_assume!(total > 1e-6);
            let atoms: Vec<_> = ws.iter().enumerate().map(|(k, w)| (k as u64, w / total)).collect();
            let d = OffspringDistribution::new(atoms.clone()).unwrap();
            let mean: f64 = atoms.iter().map(|&(k, p)| k as f64 * p).sum();
            let m2: f64 = atoms.iter().map(|&(k, p)| (k * k) as f64 * p).sum();
            prop_assert!((d.mean() - mean).abs() < 1e-12);
            prop_assert!((d.second_moment() - m2).abs() < 1e-11);
            prop_assert!((d.eps() - (mean - 1.0)).abs() < 1e-12);
            // size-biased mean equals E X(X-1)/E X
            if mean > 0.0 {
                let sb = d.size_biased().unwrap();
                prop_assert!((sb.mean() - d.factorial_moment2() / d.mean()).abs() <= 1e-12 * sb.mean().max(1.0));
            }
        }
    }
}
