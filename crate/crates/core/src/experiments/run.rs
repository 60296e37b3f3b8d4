use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::config_model::{components, is_simple, pair_half_edges, simple_prob_prediction, MultiGraph};
use crate::degree_model::{e3_offspring, power_law_sequence, two_atom_sequence, DegreeSequence};
use crate::error::{Error, Result};
use crate::exploration::{explore_with, ExploreOptions, TraceLevel};
use crate::gw_survival::solve_rho;
use crate::rng::{replicate_stream, stream_rng, StreamRng};
use crate::theory::{chi, predict_giant, regime_report, Regime};

use super::config::{ExperimentConfig, Family, Mode};
use super::summary::{summarize, Summary};

/// Closed-form predictions for one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct Prediction {
    pub n: u64,
    pub mu: f64,
    pub nu: f64,
    pub eps: f64,
    pub r: f64,
    pub delta: u32,
    pub rho: f64,
    pub alpha: f64,
    /// `μρn`.
    pub v1: f64,
    /// `E(1 − (1−ρ)^D) n`.
    pub giant_exact: f64,
    /// `ρn`.
    pub v2_order: f64,
    /// `nχ`, zero without a giant.
    pub k1: f64,
    pub simple_prob: f64,
    pub critical_scale: f64,
    pub margin: f64,
    pub regime: Regime,
}

/// Outcome of one replicate.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub n: u64,
    pub replicate: u32,
    pub stream: u64,
    pub eps: f64,
    pub rho: f64,
    pub v1: u64,
    pub e1: u64,
    pub k1: u64,
    pub v2: u64,
    pub e2: u64,
    pub components: u64,
    pub simple: bool,
    pub attempts: u32,
    /// `(k, count)` for the degrees inside the largest component.
    pub profile: Option<Vec<(u32, u64)>>,
    pub wall_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub n: u64,
    pub observable: &'static str,
    /// What the prediction column is.
    pub reference: &'static str,
    pub summary: Summary,
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub config_sha256: String,
    pub seed: u64,
    pub family: String,
    pub predictions: Vec<Prediction>,
    pub rows: Vec<Row>,
    pub summaries: Vec<SummaryRow>,
}

/// Hex SHA-256 of the config text.
pub fn config_hash(config: &ExperimentConfig) -> String {
    hex::encode(Sha256::digest(config.source.as_bytes()))
}

/// Counts summing to exactly `n` with `n_k ≈ n·w_k` (largest remainder).
fn rounded_counts(weights: &[(u32, f64)], n: usize) -> Vec<(u32, u64)> {
    let total: f64 = weights.iter().map(|w| w.1).sum();
    let mut out: Vec<(u32, u64, f64)> = weights
        .iter()
        .map(|&(k, w)| {
            let x = n as f64 * w / total;
            (k, x.floor() as u64, x - x.floor())
        })
        .collect();
    let assigned: u64 = out.iter().map(|o| o.1).sum();
    let mut order: Vec<usize> = (0..out.len()).collect();
    order.sort_by(|&a, &b| out[b].2.total_cmp(&out[a].2).then(a.cmp(&b)));
    for &i in order.iter().take((n as u64).saturating_sub(assigned) as usize) {
        out[i].1 += 1;
    }
    out.into_iter().map(|(k, c, _)| (k, c)).collect()
}

fn from_weights(weights: &[(u32, f64)], n: usize) -> Result<DegreeSequence> {
    let mut degrees = Vec::with_capacity(n);
    for (k, c) in rounded_counts(weights, n) {
        degrees.extend(std::iter::repeat(k).take(c as usize));
    }
    // the parity repair lands on the last minimal-degree vertex
    DegreeSequence::make_even(degrees, |m| m - 1)
}

/// The degree sequence of `family` at size `n`. Every family is
/// deterministic in `n`; randomness enters only through the pairing.
pub fn family_sequence(family: &Family, n: usize) -> Result<DegreeSequence> {
    match family {
        Family::TwoAtom { p3, .. } => two_atom_sequence(n, *p3),
        Family::PowerLaw { gamma } => power_law_sequence(*gamma, n),
        Family::E3 {
            eps_scale,
            eps_exponent,
            p_scale,
            p_exponent,
        } => {
            let nf = n as f64;
            let x = e3_offspring(
                n as u64,
                eps_scale * nf.powf(*eps_exponent),
                p_scale * nf.powf(*p_exponent),
            )?;
            // invert the size bias: P(D = k) ∝ P(X = k−1)/k
            let w: Vec<(u32, f64)> = x
                .atoms()
                .iter()
                .map(|&(k, p)| ((k + 1) as u32, p / (k + 1) as f64))
                .collect();
            from_weights(&w, n)
        }
        Family::Pmf { pmf, .. } => {
            let w: Vec<(u32, f64)> = pmf
                .atoms()
                .iter()
                .map(|&(k, p)| {
                    u32::try_from(k)
                        .map(|k| (k, p))
                        .map_err(|_| Error::InvalidParameter(format!("degree {k} too large")))
                })
                .collect::<Result<_>>()?;
            from_weights(&w, n)
        }
    }
}

/// Predictions for one degree sequence.
pub fn predict(seq: &DegreeSequence, margin_cut: f64) -> Result<Prediction> {
    let stats = seq.stats::<f64>()?;
    let sol = solve_rho(&seq.size_biased::<f64>()?)?;
    let giant = predict_giant(seq, sol.rho)?;
    let k1 = if sol.rho > 0.0 && sol.rho < 1.0 {
        seq.n() as f64 * chi(seq, sol.rho)?
    } else {
        0.0
    };
    let report = regime_report(&stats, margin_cut);
    Ok(Prediction {
        n: stats.n,
        mu: stats.mu,
        nu: stats.nu,
        eps: stats.eps,
        r: stats.r,
        delta: stats.delta,
        rho: sol.rho,
        alpha: sol.alpha,
        v1: giant.v1,
        giant_exact: giant.giant_fraction_exact,
        v2_order: giant.v2_order,
        k1,
        simple_prob: simple_prob_prediction(&stats),
        critical_scale: report.critical_scale,
        margin: report.margin,
        regime: report.regime,
    })
}

fn build_graph(seq: &DegreeSequence, rng: &mut StreamRng, explore: bool) -> Result<MultiGraph> {
    if !explore {
        return pair_half_edges(seq, rng);
    }
    let opts = ExploreOptions {
        level: TraceLevel::Boundaries,
        keep_lifetimes: false,
    };
    let e = explore_with(seq, rng, opts)?;
    let mut from_trace = e.trace.components.clone();
    from_trace.sort_unstable();
    if from_trace != components(&e.graph).multiset() {
        return Err(Error::Inconsistent(
            "exploration components differ from union-find on the same graph".into(),
        ));
    }
    Ok(e.graph)
}

fn replicate(
    config: &ExperimentConfig,
    seq: &DegreeSequence,
    pred: &Prediction,
    grid_index: usize,
    rep: u32,
) -> Result<Row> {
    let start = Instant::now();
    let stream = replicate_stream(grid_index, rep);
    let mut rng = stream_rng(config.seed, stream);
    let explore = config.observables.exploration;
    let (graph, attempts) = match config.mode {
        Mode::Multigraph => (build_graph(seq, &mut rng, explore)?, 1),
        Mode::Simple => {
            let mut found = None;
            for attempt in 1..=config.max_attempts {
                let g = build_graph(seq, &mut rng, explore)?;
                if is_simple(&g) {
                    found = Some((g, attempt));
                    break;
                }
            }
            found.ok_or(Error::RejectionFailure {
                attempts: config.max_attempts,
            })?
        }
    };
    let simple = is_simple(&graph);
    let c = components(&graph);
    let (v1, e1) = (c.v1(), c.e1());
    if c.k1() + v1 != e1 + 1 {
        return Err(Error::Inconsistent(format!("k1={} but v1={v1}, e1={e1}", c.k1())));
    }
    Ok(Row {
        n: seq.n() as u64,
        replicate: rep,
        stream,
        eps: pred.eps,
        rho: pred.rho,
        v1,
        e1,
        k1: c.k1(),
        v2: c.v2(),
        e2: c.e2(),
        components: c.component_count() as u64,
        simple,
        attempts,
        profile: config
            .observables
            .profile
            .then(|| c.c1_degree_counts.iter().map(|(&k, &v)| (k, v)).collect()),
        wall_ms: config
            .observables
            .wall_time
            .then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}

/// Runs every replicate on a pool of `threads` workers (0: one per core).
/// Output does not depend on `threads`.
pub fn run(config: &ExperimentConfig, threads: usize) -> Result<ExperimentResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let mut predictions = Vec::new();
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for (gi, &n) in config.n_grid.iter().enumerate() {
        let attach = |replicate: u32| {
            move |e: Error| Error::Replicate {
                n: n as u64,
                replicate,
                source: Box::new(e),
            }
        };
        let seq = family_sequence(&config.family, n).map_err(attach(0))?;
        let pred = predict(&seq, config.margin_cut).map_err(attach(0))?;
        let batch: Vec<Row> = pool.install(|| {
            (0..config.replicates)
                .into_par_iter()
                .map(|r| replicate(config, &seq, &pred, gi, r).map_err(attach(r)))
                .collect::<Result<Vec<_>>>()
        })?;
        summaries.extend(summarize_grid_point(config, &pred, &batch));
        rows.extend(batch);
        predictions.push(pred);
    }
    Ok(ExperimentResult {
        config_sha256: config_hash(config),
        seed: config.seed,
        family: config.family.describe(),
        predictions,
        rows,
        summaries,
    })
}

fn summarize_grid_point(config: &ExperimentConfig, pred: &Prediction, rows: &[Row]) -> Vec<SummaryRow> {
    let col = |f: fn(&Row) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
    let nonzero = |x: f64| (x > 0.0).then_some(x);
    let mut out = vec![
        ("v1", "mu*rho*n", col(|r| r.v1 as f64), nonzero(pred.v1)),
        ("v1", "giant_exact", col(|r| r.v1 as f64), nonzero(pred.giant_exact)),
        ("v1", "n^(2/3)*R^(-1/3)", col(|r| r.v1 as f64), nonzero(pred.critical_scale)),
        ("e1", "mu*rho*n", col(|r| r.e1 as f64), nonzero(pred.v1)),
        ("k1", "n*chi", col(|r| r.k1 as f64), nonzero(pred.k1)),
        ("v2", "rho*n", col(|r| r.v2 as f64), nonzero(pred.v2_order)),
    ];
    match config.mode {
        Mode::Multigraph => out.push((
            "simple",
            "exp(-nu/2-nu^2/4)",
            col(|r| if r.simple { 1.0 } else { 0.0 }),
            Some(pred.simple_prob),
        )),
        Mode::Simple => out.push((
            "attempts",
            "exp(nu/2+nu^2/4)",
            col(|r| r.attempts as f64),
            Some(pred.simple_prob.recip()),
        )),
    }
    out.into_iter()
        .map(|(observable, reference, values, p)| SummaryRow {
            n: pred.n,
            observable,
            reference,
            summary: summarize(&values, p),
        })
        .collect()
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl ExperimentResult {
    fn header<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "# nearcrit {}", env!("CARGO_PKG_VERSION"))?;
        writeln!(out, "# config_sha256={}", self.config_sha256)?;
        writeln!(out, "# seed={}", self.seed)?;
        writeln!(out, "# family={}", self.family)?;
        Ok(())
    }

    /// One row per replicate, in grid and replicate order.
    pub fn write_rows<W: Write>(&self, mut out: W) -> Result<()> {
        self.header(&mut out)?;
        let profile = self.rows.iter().any(|r| r.profile.is_some());
        let wall = self.rows.iter().any(|r| r.wall_ms.is_some());
        let mut w = csv::Writer::from_writer(out);
        let mut head = vec![
            "n", "replicate", "stream", "eps", "rho", "v1", "e1", "k1", "v2", "e2", "components",
            "simple", "attempts",
        ];
        if profile {
            head.push("c1_profile");
        }
        if wall {
            head.push("wall_ms");
        }
        w.write_record(&head)?;
        for r in &self.rows {
            let mut rec = vec![
                r.n.to_string(),
                r.replicate.to_string(),
                r.stream.to_string(),
                r.eps.to_string(),
                r.rho.to_string(),
                r.v1.to_string(),
                r.e1.to_string(),
                r.k1.to_string(),
                r.v2.to_string(),
                r.e2.to_string(),
                r.components.to_string(),
                (r.simple as u8).to_string(),
                r.attempts.to_string(),
            ];
            if profile {
                rec.push(
                    r.profile
                        .as_deref()
                        .unwrap_or_default()
                        .iter()
                        .map(|(k, c)| format!("{k}:{c}"))
                        .collect::<Vec<_>>()
                        .join(";"),
                );
            }
            if wall {
                rec.push(opt(r.wall_ms));
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_summary<W: Write>(&self, mut out: W) -> Result<()> {
        self.header(&mut out)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "n", "observable", "reference", "count", "mean", "median", "stderr", "cv",
            "cv_defined", "prediction", "ratio",
        ])?;
        for s in &self.summaries {
            let m = &s.summary;
            w.write_record([
                s.n.to_string(),
                s.observable.to_owned(),
                s.reference.to_owned(),
                m.count.to_string(),
                m.mean.to_string(),
                m.median.to_string(),
                m.stderr.to_string(),
                opt(m.cv),
                (m.cv.is_some() as u8).to_string(),
                opt(m.prediction),
                opt(m.ratio),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// One row per grid point with every closed-form prediction.
    pub fn write_predictions<W: Write>(&self, mut out: W) -> Result<()> {
        self.header(&mut out)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "n", "mu", "nu", "eps", "R", "delta", "rho", "alpha", "v1", "giant_exact", "v2_order",
            "k1", "simple_prob", "critical_scale", "margin", "regime",
        ])?;
        for p in &self.predictions {
            w.write_record([
                p.n.to_string(),
                p.mu.to_string(),
                p.nu.to_string(),
                p.eps.to_string(),
                p.r.to_string(),
                p.delta.to_string(),
                p.rho.to_string(),
                p.alpha.to_string(),
                p.v1.to_string(),
                p.giant_exact.to_string(),
                p.v2_order.to_string(),
                p.k1.to_string(),
                p.simple_prob.to_string(),
                p.critical_scale.to_string(),
                p.margin.to_string(),
                p.regime.as_str().to_owned(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
