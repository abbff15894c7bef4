//! Experiment configuration.
//!
//! ```toml
//! p = 2.0
//! n_list = [10, 20, 40]
//! grid_size = 200
//! seed_formula_variant = "proof-consistent"
//! output_dir = "out"
//!
//! [q]
//! kind = "cosine"
//! amplitude = 1.0
//! k = 1.0
//!
//! [r]
//! kind = "polynomial"
//! coefficients = [0.0, 1.0, -1.0]
//!
//! [tolerances]
//! ode_tol = 1e-9
//! root_tol = 1e-10
//! ```
//!
//! `kind = "csv"` takes a `path`, resolved against the directory holding
//! the config file.

use std::fmt;
use std::path::{Path, PathBuf};

use pnodal::asymptotics::ExpansionVariant;
use pnodal::potentials::SampledPotential;
use pnodal::Potential;
use serde::Deserialize;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PotentialSpec {
    #[default]
    Zero,
    Constant { value: f64 },
    Polynomial { coefficients: Vec<f64> },
    Cosine { amplitude: f64, k: f64 },
    Bump { amplitude: f64, center: f64, width: f64 },
    Csv { path: PathBuf },
}

impl PotentialSpec {
    pub fn build(&self, base: &Path) -> Result<Potential, ConfigError> {
        Ok(match self {
            PotentialSpec::Zero => Potential::Zero,
            PotentialSpec::Constant { value } => Potential::Constant(*value),
            PotentialSpec::Polynomial { coefficients } => Potential::Polynomial(coefficients.clone()),
            PotentialSpec::Cosine { amplitude, k } => Potential::Cosine { amplitude: *amplitude, k: *k },
            PotentialSpec::Bump { amplitude, center, width } => {
                if width.is_nan() || *width <= 0.0 {
                    return Err(ConfigError(format!("bump width must be positive, got {width}")));
                }
                Potential::Bump { amplitude: *amplitude, center: *center, width: *width }
            }
            PotentialSpec::Csv { path } => {
                let full = base.join(path);
                let sampled = SampledPotential::from_csv_path(&full)
                    .map_err(|e| ConfigError(format!("{}: {e}", full.display())))?;
                Potential::Sampled(sampled)
            }
        })
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_ode_tol")]
    pub ode_tol: f64,
    #[serde(default = "default_root_tol")]
    pub root_tol: f64,
}

fn default_ode_tol() -> f64 {
    1e-9
}

fn default_root_tol() -> f64 {
    1e-10
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { ode_tol: default_ode_tol(), root_tol: default_root_tol() }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    p: f64,
    n_list: Vec<usize>,
    #[serde(default = "default_grid_size")]
    grid_size: usize,
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default)]
    seed_formula_variant: Option<String>,
    #[serde(default)]
    output_dir: Option<PathBuf>,
    #[serde(default)]
    q: PotentialSpec,
    #[serde(default)]
    r: PotentialSpec,
}

fn default_grid_size() -> usize {
    200
}

/// A validated experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub p: f64,
    pub q_spec: PotentialSpec,
    pub r_spec: PotentialSpec,
    pub q: Potential,
    pub r: Potential,
    pub n_list: Vec<usize>,
    pub grid_size: usize,
    pub tolerances: Tolerances,
    pub seed_formula_variant: ExpansionVariant,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    /// Parses TOML text. `base` resolves relative CSV paths.
    pub fn parse(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
        if !(raw.p > 1.0 && raw.p.is_finite()) {
            return Err(ConfigError(format!("field `p`: must be a finite number > 1, got {}", raw.p)));
        }
        if raw.n_list.is_empty() {
            return Err(ConfigError("field `n_list`: must not be empty".into()));
        }
        if raw.n_list.contains(&0) {
            return Err(ConfigError("field `n_list`: indices start at 1".into()));
        }
        if raw.n_list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ConfigError("field `n_list`: must be strictly ascending".into()));
        }
        if raw.grid_size < 16 {
            return Err(ConfigError(format!("field `grid_size`: must be at least 16, got {}", raw.grid_size)));
        }
        let tol = raw.tolerances;
        if !(tol.ode_tol > 0.0 && tol.root_tol > 0.0) {
            return Err(ConfigError("section `tolerances`: values must be positive".into()));
        }
        let variant = match raw.seed_formula_variant.as_deref() {
            None => ExpansionVariant::default(),
            Some(s) => s.parse().map_err(|e| ConfigError(format!("field `seed_formula_variant`: {e}")))?,
        };
        let q = raw.q.build(base).map_err(|e| ConfigError(format!("section `q`: {e}")))?;
        let r = raw.r.build(base).map_err(|e| ConfigError(format!("section `r`: {e}")))?;
        Ok(Self {
            p: raw.p,
            q_spec: raw.q,
            r_spec: raw.r,
            q,
            r,
            n_list: raw.n_list,
            grid_size: raw.grid_size,
            tolerances: tol,
            seed_formula_variant: variant,
            output_dir: raw.output_dir.unwrap_or_else(|| PathBuf::from("pnodal-out")),
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
        ExperimentConfig::parse(text, Path::new("."))
    }

    #[test]
    fn minimal() {
        let cfg = parse("p = 3.0\nn_list = [1, 2]\n").unwrap();
        assert_eq!(cfg.q, Potential::Zero);
        assert_eq!(cfg.grid_size, 200);
        assert_eq!(cfg.seed_formula_variant, ExpansionVariant::ProofConsistent);
        assert_eq!(cfg.tolerances, Tolerances::default());
    }

    #[test]
    fn catalog_entries() {
        let cfg = parse(
            "p = 2\nn_list = [5]\n[q]\nkind = \"bump\"\namplitude = 1\ncenter = 0.5\nwidth = 0.2\n\
             [r]\nkind = \"constant\"\nvalue = 0.3\n",
        )
        .unwrap();
        assert_eq!(cfg.q, Potential::Bump { amplitude: 1.0, center: 0.5, width: 0.2 });
        assert_eq!(cfg.r, Potential::Constant(0.3));
    }

    #[test]
    fn rejects_bad_values() {
        for (text, needle) in [
            ("p = 1.0\nn_list = [1]", "`p`"),
            ("p = 2\nn_list = []", "`n_list`"),
            ("p = 2\nn_list = [3, 2]", "ascending"),
            ("p = 2\nn_list = [2]\ngrid_size = 8", "`grid_size`"),
            ("p = 2\nn_list = [2]\nseed_formula_variant = \"other\"", "seed_formula_variant"),
            ("p = 2\nn_list = [2]\n[q]\nkind = \"wave\"", "wave"),
            ("p = 2\nn_list = [2]\nextra = 1", "extra"),
            ("p = 2\nn_list = [2]\n[r]\nkind = \"csv\"\npath = \"missing.csv\"", "missing.csv"),
        ] {
            let err = parse(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{text:?} -> {err}");
        }
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = parse("p = 2\nn_list = [1,\n").unwrap_err().to_string();
        assert!(err.contains("line"), "{err}");
    }
}
