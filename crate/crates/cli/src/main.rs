use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use nearcrit_core::config_model::{
    components, pair_half_edges, sample_simple, simple_prob_prediction, write_edge_list,
    EdgeListHeader, DEFAULT_MAX_ATTEMPTS,
};
use nearcrit_core::degree_model::{read_degree_csv, read_pmf_csv, DegreeSequence};
use nearcrit_core::experiments::{run, ExperimentConfig};
use nearcrit_core::exploration::{explore_with, write_boundaries_csv, write_trace_csv, ExploreOptions, TraceLevel};
use nearcrit_core::gw_survival::{balance_ratio, lower_bound, mc_extinction, solve_rho, McOptions};
use nearcrit_core::rng::stream_rng;
use nearcrit_core::theory::{regime_report, DEFAULT_MARGIN_CUT};
use nearcrit_core::Error;

#[derive(Parser)]
#[command(name = "nearcrit", version, about = "Near-critical configuration-model random graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree statistics, survival probability and regime of a degree file.
    Stats { degree_file: PathBuf },
    /// Survival probability of an offspring law given as a `k,p` file.
    Survival {
        pmf_file: PathBuf,
        /// Also estimate it by simulating this many Galton–Watson trees.
        #[arg(long)]
        mc_trials: Option<u64>,
        #[arg(long, env = "NEARCRIT_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Sample a configuration multigraph and print its edge list.
    Generate {
        degree_file: PathBuf,
        #[arg(long, env = "NEARCRIT_SEED", default_value_t = 0)]
        seed: u64,
        /// Condition on simplicity by rejection.
        #[arg(long)]
        simple: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
        max_attempts: u32,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the exploration process and print its components.
    Explore {
        degree_file: PathBuf,
        #[arg(long, env = "NEARCRIT_SEED", default_value_t = 0)]
        seed: u64,
        /// Write the sampled process as `t,S,A,V,L,N,event_kind`.
        #[arg(long)]
        trace_out: Option<PathBuf>,
        /// Write one `T_i,v,e,k` row per component.
        #[arg(long)]
        boundaries_out: Option<PathBuf>,
        /// Record every event regardless of size.
        #[arg(long)]
        full: bool,
    },
    /// Run a replicated experiment described by a config file.
    Experiment {
        config_file: PathBuf,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Replicate rows; the summary and predictions go next to it. Falls
        /// back to the config's `output`, then standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Parse(_) => 2,
        _ => 3,
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, Error> {
    std::fs::read(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

fn read_degrees(path: &Path) -> Result<(DegreeSequence, String), Error> {
    let bytes = read_bytes(path)?;
    let seq = read_degree_csv(bytes.as_slice())?;
    Ok((seq, hex::encode(Sha256::digest(&bytes))))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}.csv"))
}

fn stats(path: &Path) -> Result<(), Error> {
    let (seq, _) = read_degrees(path)?;
    let s = seq.stats::<f64>()?;
    let mut out = io::stdout().lock();
    writeln!(out, "n = {}", s.n)?;
    writeln!(out, "half_edges = {}", s.ell)?;
    writeln!(out, "max_degree = {}", s.delta)?;
    writeln!(out, "mu = {}", s.mu)?;
    writeln!(out, "nu = {}", s.nu)?;
    writeln!(out, "eps = {}", s.eps)?;
    writeln!(out, "second_moment = {}", s.m2)?;
    writeln!(out, "R = {}", s.r)?;
    writeln!(out, "kappa = {}", s.kappa)?;
    writeln!(out, "simple_prob = {}", simple_prob_prediction(&s))?;
    let sol = solve_rho(&seq.size_biased::<f64>()?)?;
    writeln!(out, "rho = {}", sol.rho)?;
    writeln!(out, "alpha = {}", sol.alpha)?;
    let rep = regime_report(&s, DEFAULT_MARGIN_CUT);
    writeln!(out, "threshold = {}", rep.threshold)?;
    writeln!(out, "margin = {}", rep.margin)?;
    writeln!(out, "critical_scale = {}", rep.critical_scale)?;
    writeln!(out, "t1 = {}", rep.t1)?;
    writeln!(out, "delta_condition = {}", rep.delta_condition)?;
    writeln!(out, "regime = {}", rep.regime.as_str())?;
    Ok(())
}

fn survival(path: &Path, mc_trials: Option<u64>, seed: u64) -> Result<(), Error> {
    let dist = read_pmf_csv(read_bytes(path)?.as_slice())?;
    let sol = solve_rho(&dist)?;
    let mut out = io::stdout().lock();
    writeln!(out, "mean = {}", dist.mean())?;
    writeln!(out, "eps = {}", dist.eps())?;
    writeln!(out, "rho = {}", sol.rho)?;
    writeln!(out, "alpha = {}", sol.alpha)?;
    writeln!(out, "residual = {:e}", sol.residual)?;
    if dist.eps() > 0.0 && dist.factorial_moment2() > 0.0 {
        writeln!(out, "lower_bound = {}", lower_bound(&dist)?)?;
        writeln!(out, "balance_ratio = {}", balance_ratio(&dist, sol.rho)?)?;
    }
    if let Some(trials) = mc_trials {
        let est = mc_extinction(&dist, McOptions { trials, ..McOptions::default() }, seed);
        writeln!(out, "mc_rho = {}", est.estimate)?;
        writeln!(out, "mc_stderr = {}", est.stderr)?;
    }
    Ok(())
}

fn generate(path: &Path, seed: u64, simple: bool, max_attempts: u32, out: Option<&Path>) -> Result<(), Error> {
    let (seq, hash) = read_degrees(path)?;
    let mut rng = stream_rng(seed, 0);
    let (graph, attempts) = if simple {
        let s = sample_simple(&seq, &mut rng, max_attempts)?;
        (s.graph, Some(s.attempts))
    } else {
        (pair_half_edges(&seq, &mut rng)?, None)
    };
    let header = EdgeListHeader {
        seed: Some(seed),
        degree_sha256: Some(hash),
        attempts,
    };
    write_edge_list(&graph.with_seed(seed), &header, output(out)?)
}

fn explore(path: &Path, seed: u64, trace_out: Option<&Path>, boundaries_out: Option<&Path>, full: bool) -> Result<(), Error> {
    let (seq, _) = read_degrees(path)?;
    let opts = ExploreOptions {
        level: if full { TraceLevel::Full } else { TraceLevel::Auto },
        keep_lifetimes: false,
    };
    let e = explore_with(&seq, &mut stream_rng(seed, 0), opts)?;
    if let Some(p) = trace_out {
        write_trace_csv(&e.trace, output(Some(p))?)?;
    }
    if let Some(p) = boundaries_out {
        write_boundaries_csv(&e.trace, output(Some(p))?)?;
    }
    let c = components(&e.graph);
    let mut out = io::stdout().lock();
    writeln!(out, "components = {}", c.component_count())?;
    writeln!(out, "v1 = {}", c.v1())?;
    writeln!(out, "e1 = {}", c.e1())?;
    writeln!(out, "k1 = {}", c.k1())?;
    writeln!(out, "v2 = {}", c.v2())?;
    writeln!(out, "cycles = {}", e.trace.cycles())?;
    writeln!(out, "samples = {}", e.trace.samples.len())?;
    Ok(())
}

fn experiment(path: &Path, threads: usize, out: Option<&Path>) -> Result<(), Error> {
    let config = ExperimentConfig::from_file(path)?;
    let result = run(&config, threads)?;
    let target = out.map(Path::to_path_buf).or_else(|| config.output.clone());
    match target {
        Some(p) => {
            result.write_rows(output(Some(&p))?)?;
            let summary = sibling(&p, "summary");
            result.write_summary(output(Some(&summary))?)?;
            result.write_predictions(output(Some(&sibling(&p, "predictions")))?)?;
            result.write_summary(io::stdout().lock())?;
        }
        None => {
            let mut w = output(None)?;
            result.write_rows(&mut w)?;
            writeln!(w)?;
            result.write_summary(&mut w)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Stats { degree_file } => stats(degree_file),
        Command::Survival { pmf_file, mc_trials, seed } => survival(pmf_file, *mc_trials, *seed),
        Command::Generate { degree_file, seed, simple, max_attempts, out } => {
            generate(degree_file, *seed, *simple, *max_attempts, out.as_deref())
        }
        Command::Explore { degree_file, seed, trace_out, boundaries_out, full } => {
            explore(degree_file, *seed, trace_out.as_deref(), boundaries_out.as_deref(), *full)
        }
        Command::Experiment { config_file, threads, out } => experiment(config_file, *threads, out.as_deref()),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
