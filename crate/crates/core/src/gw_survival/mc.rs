use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::Binomial;
use rayon::prelude::*;

use crate::degree_model::OffspringDistribution;
use crate::rng::stream_rng;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug)]
pub struct McOptions {
    pub trials: u64,
    /// A line is declared extinct-free once it survives this many generations.
    pub generation_cap: u64,
    /// A line is declared surviving once its population exceeds this.
    pub population_cap: u64,
}

impl Default for McOptions {
    fn default() -> Self {
        Self {
            trials: 100_000,
            generation_cap: 10_000,
            population_cap: 10_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub survived: u64,
    pub trials: u64,
}

/// Below this population, offspring are drawn one by one.
const DIRECT_DRAW_LIMIT: u64 = 16;

struct Sampler {
    ks: Vec<u64>,
    probs: Vec<f64>,
    index: WeightedIndex<f64>,
}

impl Sampler {
    fn new<T: Scalar>(dist: &OffspringDistribution<T>) -> Self {
        let ks: Vec<u64> = dist.atoms().iter().map(|a| a.0).collect();
        let probs: Vec<f64> = dist.atoms().iter().map(|a| a.1.as_f64()).collect();
        let index = WeightedIndex::new(&probs).expect("validated pmf");
        Self { ks, probs, index }
    }

    /// Total offspring of `z` individuals. Large populations are split
    /// multinomially over the atoms with sequential binomials.
    fn children<R: Rng>(&self, z: u64, rng: &mut R) -> u64 {
        if z <= DIRECT_DRAW_LIMIT {
            return (0..z).map(|_| self.ks[self.index.sample(rng)]).sum();
        }
        let mut remaining = z;
        let mut mass_left = 1.0f64;
        let mut total = 0u64;
        let last = self.ks.len() - 1;
        for (i, (&k, &p)) in self.ks.iter().zip(&self.probs).enumerate() {
            if remaining == 0 {
                break;
            }
            let c = if i == last || p >= mass_left {
                remaining
            } else {
                let q = (p / mass_left).clamp(0.0, 1.0);
                Binomial::new(remaining, q).expect("valid binomial").sample(rng)
            };
            total = total.saturating_add(k.saturating_mul(c));
            remaining -= c;
            mass_left -= p;
        }
        total
    }
}

/// Monte Carlo survival probability: the fraction of independent lines whose
/// population exceeds `population_cap` (or that are still alive after
/// `generation_cap` generations). Trial `i` uses stream `i` of `seed`.
pub fn mc_extinction<T: Scalar>(dist: &OffspringDistribution<T>, opts: McOptions, seed: u64) -> McEstimate {
    let sampler = Sampler::new(dist);
    let survived: u64 = (0..opts.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream_rng(seed, trial);
            let mut z = 1u64;
            for _ in 0..opts.generation_cap {
                z = sampler.children(z, &mut rng);
                if z == 0 {
                    return 0;
                }
                if z > opts.population_cap {
                    return 1;
                }
            }
            1
        })
        .sum();
    let trials = opts.trials.max(1);
    let p = survived as f64 / trials as f64;
    McEstimate {
        estimate: p,
        stderr: (p * (1.0 - p) / trials as f64).sqrt(),
        survived,
        trials,
    }
}
