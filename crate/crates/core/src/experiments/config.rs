use std::path::{Path, PathBuf};

use ini::Ini;

use crate::degree_model::{read_pmf_csv, two_atom_for_eps, OffspringDistribution};
use crate::error::{Error, Result};
use crate::theory::DEFAULT_MARGIN_CUT;

/// Degree family swept over `n_grid`.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// Degrees 1 and 3 with `round(n·p3)` vertices of degree 3.
    TwoAtom { p1: f64, p3: f64 },
    /// `d_i = max(1, ⌊(n/i)^{1/γ}⌋)`.
    PowerLaw { gamma: f64 },
    /// Degree law whose forward law is `X = 0,1,2,n` with
    /// `ε = eps_scale·n^eps_exponent` and `p = p_scale·n^p_exponent`.
    E3 {
        eps_scale: f64,
        eps_exponent: f64,
        p_scale: f64,
        p_exponent: f64,
    },
    /// Degree law read from a `k,p` file.
    Pmf {
        path: PathBuf,
        pmf: OffspringDistribution<f64>,
    },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::TwoAtom { .. } => "two-atom",
            Family::PowerLaw { .. } => "power-law",
            Family::E3 { .. } => "e3",
            Family::Pmf { .. } => "pmf",
        }
    }

    /// `key=value` pairs for output headers.
    pub fn describe(&self) -> String {
        match self {
            Family::TwoAtom { p1, p3 } => format!("two-atom p1={p1} p3={p3}"),
            Family::PowerLaw { gamma } => format!("power-law gamma={gamma}"),
            Family::E3 {
                eps_scale,
                eps_exponent,
                p_scale,
                p_exponent,
            } => format!(
                "e3 eps={eps_scale}*n^{eps_exponent} p={p_scale}*n^{p_exponent}"
            ),
            Family::Pmf { path, .. } => format!("pmf path={}", path.display()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Multigraph,
    /// Condition on simplicity by rejection.
    Simple,
}

/// Optional per-replicate work.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Observables {
    /// Build the graph through the exploration process and cross-check its
    /// component sizes against union-find.
    pub exploration: bool,
    /// Degree counts inside the largest component.
    pub profile: bool,
    /// Wall-clock time per replicate. Off by default since it makes the
    /// output nondeterministic.
    pub wall_time: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub family: Family,
    pub n_grid: Vec<usize>,
    pub replicates: u32,
    pub seed: u64,
    pub mode: Mode,
    pub max_attempts: u32,
    pub observables: Observables,
    pub output: Option<PathBuf>,
    pub margin_cut: f64,
    /// Text the config was parsed from, hashed into output headers.
    pub source: String,
}

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn req<'a>(props: &'a ini::Properties, key: &str) -> Result<&'a str> {
    props
        .get(key)
        .ok_or_else(|| cfg_err(format!("missing key `{key}`")))
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| cfg_err(format!("`{key}`: cannot parse `{v}`")))
}

/// Integer that may be written in scientific notation (`1e6`).
fn count(key: &str, v: &str) -> Result<usize> {
    let v = v.trim();
    if let Ok(x) = v.parse::<usize>() {
        return Ok(x);
    }
    let x: f64 = num(key, v)?;
    if x.fract() != 0.0 || !(1.0..=u32::MAX as f64).contains(&x) {
        return Err(cfg_err(format!("`{key}`: `{v}` is not a positive integer")));
    }
    Ok(x as usize)
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| cfg_err(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Parses the bracketed-section format. Relative paths resolve against
    /// `base_dir`.
    ///
    /// ```text
    /// [experiment]
    /// seed = 1
    /// replicates = 20
    /// n_grid = 1e4, 1e5
    /// mode = multigraph
    /// observables = exploration, profile
    ///
    /// [family]
    /// kind = two-atom
    /// eps = 0.05
    /// ```
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| cfg_err(e.to_string()))?;
        for (section, props) in ini.iter() {
            let known: &[&str] = match section {
                Some("experiment") => &[
                    "name",
                    "seed",
                    "replicates",
                    "n_grid",
                    "mode",
                    "max_attempts",
                    "observables",
                    "output",
                    "margin_cut",
                ],
                Some("family") => &[
                    "kind",
                    "eps",
                    "p1",
                    "p3",
                    "gamma",
                    "eps_scale",
                    "eps_exponent",
                    "p_scale",
                    "p_exponent",
                    "path",
                ],
                None if props.is_empty() => &[],
                None => return Err(cfg_err("keys outside a section")),
                Some(other) => return Err(cfg_err(format!("unknown section [{other}]"))),
            };
            for (k, _) in props.iter() {
                if !known.contains(&k) {
                    return Err(cfg_err(format!("unknown key `{k}`")));
                }
            }
        }
        let exp = ini
            .section(Some("experiment"))
            .ok_or_else(|| cfg_err("missing [experiment] section"))?;
        let fam = ini
            .section(Some("family"))
            .ok_or_else(|| cfg_err("missing [family] section"))?;

        let seed = num::<u64>("seed", req(exp, "seed")?)?;
        let replicates = match exp.get("replicates") {
            Some(v) => count("replicates", v)? as u32,
            None => 1,
        };
        let n_grid = req(exp, "n_grid")?
            .split(',')
            .map(|v| count("n_grid", v))
            .collect::<Result<Vec<_>>>()?;
        if n_grid.is_empty() || n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(cfg_err("n_grid must be nonempty and strictly ascending"));
        }
        let mode = match exp.get("mode").map(str::trim).unwrap_or("multigraph") {
            "multigraph" => Mode::Multigraph,
            "simple" => Mode::Simple,
            other => return Err(cfg_err(format!("unknown mode `{other}`"))),
        };
        let max_attempts = match exp.get("max_attempts") {
            Some(v) => count("max_attempts", v)? as u32,
            None => crate::config_model::DEFAULT_MAX_ATTEMPTS,
        };
        let mut observables = Observables::default();
        for o in exp.get("observables").unwrap_or("").split(',') {
            match o.trim() {
                "" | "components" => {}
                "exploration" => observables.exploration = true,
                "profile" => observables.profile = true,
                "wall_time" => observables.wall_time = true,
                other => return Err(cfg_err(format!("unknown observable `{other}`"))),
            }
        }
        let margin_cut = match exp.get("margin_cut") {
            Some(v) => num("margin_cut", v)?,
            None => DEFAULT_MARGIN_CUT,
        };

        let family = match req(fam, "kind")?.trim() {
            "two-atom" => {
                let (p1, p3) = match (fam.get("eps"), fam.get("p1"), fam.get("p3")) {
                    (Some(e), None, None) => two_atom_for_eps(num("eps", e)?)
                        .map_err(|e| cfg_err(e.to_string()))?,
                    (None, Some(a), Some(b)) => (num("p1", a)?, num("p3", b)?),
                    (None, None, Some(b)) => {
                        let p3: f64 = num("p3", b)?;
                        (1.0 - p3, p3)
                    }
                    _ => return Err(cfg_err("two-atom needs either `eps` or `p1`/`p3`")),
                };
                if !(0.0..=1.0).contains(&p3) || ((p1 + p3) - 1.0).abs() > 1e-9 {
                    return Err(cfg_err(format!("p1={p1}, p3={p3} is not a probability vector")));
                }
                Family::TwoAtom { p1, p3 }
            }
            "power-law" => {
                let gamma: f64 = num("gamma", req(fam, "gamma")?)?;
                if !(gamma > 1.0) {
                    return Err(cfg_err("power-law needs gamma > 1"));
                }
                Family::PowerLaw { gamma }
            }
            "e3" => Family::E3 {
                eps_scale: fam.get("eps_scale").map_or(Ok(1.0), |v| num("eps_scale", v))?,
                eps_exponent: num("eps_exponent", req(fam, "eps_exponent")?)?,
                p_scale: fam.get("p_scale").map_or(Ok(1.0), |v| num("p_scale", v))?,
                p_exponent: num("p_exponent", req(fam, "p_exponent")?)?,
            },
            "pmf" => {
                let rel = PathBuf::from(req(fam, "path")?.trim());
                let path = if rel.is_absolute() { rel } else { base_dir.join(rel) };
                let file = std::fs::File::open(&path)
                    .map_err(|e| cfg_err(format!("cannot open {}: {e}", path.display())))?;
                let pmf = read_pmf_csv(file).map_err(|e| cfg_err(e.to_string()))?;
                Family::Pmf { path, pmf }
            }
            other => return Err(cfg_err(format!("unknown family `{other}`"))),
        };

        Ok(Self {
            name: exp.get("name").unwrap_or("experiment").trim().to_owned(),
            family,
            n_grid,
            replicates: replicates.max(1),
            seed,
            mode,
            max_attempts,
            observables,
            output: exp.get("output").map(|p| base_dir.join(p.trim())),
            margin_cut,
            source: text.to_owned(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = "[experiment]\nseed = 7\nreplicates = 3\nn_grid = 100, 1e3\n\n[family]\nkind = two-atom\neps = 0.05\n";

    #[test]
    fn parses_basic() {
        let c = ExperimentConfig::parse(BASIC, Path::new(".")).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.replicates, 3);
        assert_eq!(c.n_grid, vec![100, 1000]);
        assert_eq!(c.mode, Mode::Multigraph);
        assert_eq!(c.observables, Observables::default());
        match c.family {
            Family::TwoAtom { p1, p3 } => {
                assert!((p1 - 0.730769).abs() < 1e-6 && (p3 - 0.269231).abs() < 1e-6)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            "[experiment]\nseed=1\nn_grid=100\n",
            "[experiment]\nseed=1\nn_grid=100,10\n[family]\nkind=two-atom\neps=0.1\n",
            "[experiment]\nseed=1\nn_grid=100\nbogus=1\n[family]\nkind=two-atom\neps=0.1\n",
            "[experiment]\nseed=x\nn_grid=100\n[family]\nkind=two-atom\neps=0.1\n",
            "[experiment]\nseed=1\nn_grid=100\nmode=erased\n[family]\nkind=two-atom\neps=0.1\n",
            "[experiment]\nseed=1\nn_grid=100\n[family]\nkind=lattice\n",
            "[experiment]\nseed=1\nn_grid=100\n[family]\nkind=power-law\ngamma=0.5\n",
            "[experiment]\nseed=1\nn_grid=100\n[family]\nkind=pmf\npath=/nonexistent.csv\n",
        ];
        for b in bad {
            assert!(matches!(ExperimentConfig::parse(b, Path::new(".")), Err(Error::Config(_))), "{b}");
        }
    }

    #[test]
    fn pmf_path_is_relative_to_config() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("law.csv"), "k,p\n1,0.5\n3,0.5\n").unwrap();
        let text = "[experiment]\nseed=1\nn_grid=10\nobservables = exploration, profile\nmode = simple\n[family]\nkind=pmf\npath=law.csv\n";
        let c = ExperimentConfig::parse(text, dir.path()).unwrap();
        assert!(c.observables.exploration && c.observables.profile && !c.observables.wall_time);
        assert_eq!(c.mode, Mode::Simple);
        assert!(matches!(c.family, Family::Pmf { .. }));
    }
}
