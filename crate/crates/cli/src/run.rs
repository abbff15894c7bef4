//! Subcommand implementations.
//!
//! Per-index work fans out over a rayon pool; results come back in `n_list`
//! order and each file is written by a single writer.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use pnodal::asymptotics::{
    eigenvalue_expansion, nodal_length_expansion, nodal_point_expansion, ExpansionVariant, LambdaSource,
};
use pnodal::pruefer::self_convergence;
use pnodal::reconstruct::{extrapolate_ladder, reconstruct_q, uniform_grid, ReconstructionResult};
use pnodal::spectrum::{solve_index, ShootingOptions};
use pnodal::{CoefficientPair, NodalData, Pencil, SpTable};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ConfigError, ExperimentConfig};

/// Number of step halvings tried when the phase fails its self-convergence
/// check.
const MAX_REFINEMENTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Complete,
    Partial,
}

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Io(PathBuf, io::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "config error: {e}"),
            RunError::Io(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

impl std::error::Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

/// Settings shared by every subcommand.
pub struct Experiment {
    pub config: ExperimentConfig,
    pub table: SpTable,
    pub pair: CoefficientPair,
    pub out_dir: PathBuf,
    pub pool: rayon::ThreadPool,
}

impl Experiment {
    pub fn new(config: ExperimentConfig, out_dir: PathBuf, threads: Option<usize>) -> Result<Self, RunError> {
        let table = SpTable::for_p(config.p).map_err(|e| ConfigError(format!("field `p`: {e}")))?;
        let pair = CoefficientPair::new(config.q.clone(), config.r.clone()).map_err(|e| ConfigError(e.to_string()))?;
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(t) = threads {
            builder = builder.num_threads(t);
        }
        let pool = builder.build().map_err(|e| ConfigError(format!("thread pool: {e}")))?;
        Ok(Self { config, table, pair, out_dir, pool })
    }

    pub fn pencil(&self) -> Pencil<'_> {
        Pencil::new(&self.table, &self.pair)
    }

    fn shooting_options(&self) -> ShootingOptions {
        ShootingOptions {
            root_tol: self.config.tolerances.root_tol,
            seed_variant: self.config.seed_formula_variant,
            ..ShootingOptions::default()
        }
    }

    /// Solves index `n`, halving the phase step until `θ(1)` moves by less
    /// than `ode_tol` under a further halving.
    pub fn solve(&self, n: usize) -> Result<NodalData, String> {
        let pencil = self.pencil();
        let mut options = self.shooting_options();
        let mut drift = f64::NAN;
        for _ in 0..=MAX_REFINEMENTS {
            let nodal = solve_index(&pencil, n, &options).map_err(|e| e.to_string())?;
            drift = self_convergence(&pencil, nodal.lambda, &options.phase).map_err(|e| e.to_string())?;
            if drift < self.config.tolerances.ode_tol {
                return Ok(nodal);
            }
            options.phase = options.phase.halved();
        }
        Err(format!("phase did not self-converge: drift {drift:e} at step {}", options.phase.phase_step))
    }

    fn solve_all(&self) -> Vec<Result<NodalData, String>> {
        self.pool.install(|| self.config.n_list.par_iter().map(|&n| self.solve(n)).collect())
    }

    fn write(&self, name: &str, contents: &str) -> Result<(), RunError> {
        fs::create_dir_all(&self.out_dir).map_err(|e| RunError::Io(self.out_dir.clone(), e))?;
        let path = self.out_dir.join(name);
        fs::write(&path, contents).map_err(|e| RunError::Io(path, e))
    }
}

/// Fixed 12-significant-digit scientific format.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.11e}")
    }
}

fn status_field(msg: &str) -> String {
    msg.replace([',', '\n', '"'], " ")
}

fn outcome(failures: usize) -> Outcome {
    if failures == 0 {
        Outcome::Complete
    } else {
        Outcome::Partial
    }
}

/// `eig.csv`.
pub fn cmd_eig(exp: &Experiment) -> Result<Outcome, RunError> {
    let params = exp.table.params();
    let p = params.p;
    let results = exp.solve_all();
    let mut out = String::from("n,lambda_n,lambda_n_pow_2_over_p,predicted,residual,residual_scaled,status\n");
    let mut failures = 0;
    for (&n, res) in exp.config.n_list.iter().zip(&results) {
        let predicted = eigenvalue_expansion(params, &exp.pair, n, exp.config.seed_formula_variant).value();
        match res {
            Ok(nodal) => {
                let residual = predicted - nodal.rho;
                let scaled = residual * (n as f64).powf((p + 2.0) / p);
                let _ = writeln!(
                    out,
                    "{n},{},{},{},{},{},ok",
                    num(nodal.lambda),
                    num(nodal.rho),
                    num(predicted),
                    num(residual),
                    num(scaled)
                );
            }
            Err(msg) => {
                failures += 1;
                let _ = writeln!(out, "{n},nan,nan,{},nan,nan,{}", num(predicted), status_field(msg));
            }
        }
    }
    exp.write("eig.csv", &out)?;
    Ok(outcome(failures))
}

fn nodes_table(exp: &Experiment, nodal: &NodalData) -> Result<String, String> {
    let params = exp.table.params();
    let variant = exp.config.seed_formula_variant;
    let n = nodal.n;
    let sum: f64 = nodal.nodal_lengths.iter().sum();
    if (sum - 1.0).abs() > 1e-10 {
        return Err(format!("nodal lengths sum to {sum:e}"));
    }
    let mut out = String::from("j,x_j_numeric,x_j_predicted,l_j_numeric,l_j_predicted\n");
    for j in 0..n {
        let x_pred = if j == 0 {
            0.0
        } else {
            nodal_point_expansion(params, &exp.pair, n, j, variant).map_err(|e| e.to_string())?.value()
        };
        let l_pred =
            nodal_length_expansion(params, &exp.pair, nodal, j, LambdaSource::Numerical).map_err(|e| e.to_string())?;
        let _ = writeln!(
            out,
            "{j},{},{},{},{}",
            num(nodal.node(j)),
            num(x_pred),
            num(nodal.nodal_lengths[j]),
            num(l_pred.value())
        );
    }
    Ok(out)
}

/// `nodes_n{n}.csv` per index.
pub fn cmd_nodes(exp: &Experiment) -> Result<Outcome, RunError> {
    let results = exp.solve_all();
    let mut failures = 0;
    for (&n, res) in exp.config.n_list.iter().zip(&results) {
        match res.clone().and_then(|nodal| nodes_table(exp, &nodal)) {
            Ok(text) => exp.write(&format!("nodes_n{n}.csv"), &text)?,
            Err(msg) => {
                failures += 1;
                eprintln!("n={n}: {msg}");
            }
        }
    }
    Ok(outcome(failures))
}

#[derive(Debug, Serialize)]
struct Summary {
    n: usize,
    lambda_n: f64,
    sup_error: f64,
    l2_error: f64,
    noise_floor: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    extrapolated_sup_error: Option<f64>,
}

/// `reconstruct_n{n}.csv` and `reconstruct_n{n}.json` per index.
pub fn cmd_reconstruct(exp: &Experiment, ladder: bool) -> Result<Outcome, RunError> {
    let params = exp.table.params();
    let grid = uniform_grid(exp.config.grid_size);
    let root_tol = exp.config.tolerances.root_tol;
    let results = exp.solve_all();
    let mut failures = 0;
    let mut rungs: Vec<ReconstructionResult> = Vec::new();
    let truth: Vec<f64> = grid.iter().map(|&x| exp.pair.q().value(x)).collect();
    for (&n, res) in exp.config.n_list.iter().zip(&results) {
        let rec = res.clone().and_then(|nodal| {
            let rec = reconstruct_q(params, &nodal, exp.pair.r(), &grid, root_tol).map_err(|e| e.to_string())?;
            let rec = rec.with_truth(exp.pair.q()).map_err(|e| e.to_string())?;
            Ok((nodal.lambda, rec))
        });
        let (lambda, rec) = match rec {
            Ok(v) => v,
            Err(msg) => {
                failures += 1;
                eprintln!("n={n}: {msg}");
                continue;
            }
        };
        rungs.push(rec.clone());
        let extrapolated = if ladder && rungs.len() >= 2 { extrapolate_ladder(&rungs).ok() } else { None };

        let mut out = String::from("x,q_hat,q_true,abs_err");
        if ladder {
            out.push_str(",extrapolated");
        }
        out.push('\n');
        for (k, &x) in grid.iter().enumerate() {
            let _ = write!(
                out,
                "{},{},{},{}",
                num(x),
                num(rec.values[k]),
                num(truth[k]),
                num((rec.values[k] - truth[k]).abs())
            );
            if ladder {
                let e = extrapolated.as_ref().map_or(f64::NAN, |v| v[k]);
                let _ = write!(out, ",{}", num(e));
            }
            out.push('\n');
        }
        exp.write(&format!("reconstruct_n{n}.csv"), &out)?;

        let summary = Summary {
            n,
            lambda_n: lambda,
            sup_error: rec.sup_error.unwrap_or(f64::NAN),
            l2_error: rec.l2_error.unwrap_or(f64::NAN),
            noise_floor: rec.noise_floor,
            extrapolated_sup_error: extrapolated
                .as_ref()
                .map(|v| v.iter().zip(&truth).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)),
        };
        let json = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
        exp.write(&format!("reconstruct_n{n}.json"), &json)?;
    }
    Ok(outcome(failures))
}

/// `sp_table.csv` over `[0, 2π_p]` with `grid_size` intervals.
pub fn cmd_sp_table(exp: &Experiment) -> Result<Outcome, RunError> {
    let table = &exp.table;
    let p = table.p();
    let m = exp.config.grid_size;
    let mut out = String::from("phase,S_p,S_p_prime,identity_residual\n");
    for i in 0..=m {
        let phase = 2.0 * table.pi_p() * i as f64 / m as f64;
        let (s, c) = table.sp_pair(phase);
        let residual = s.abs().powf(p) + c.abs().powf(p) - 1.0;
        let _ = writeln!(out, "{},{},{},{}", num(phase), num(s), num(c), num(residual));
    }
    exp.write("sp_table.csv", &out)?;
    Ok(Outcome::Complete)
}

/// Reads `PNODAL_THREADS`.
pub fn threads_from_env() -> Result<Option<usize>, ConfigError> {
    match std::env::var("PNODAL_THREADS") {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(t) if t >= 1 => Ok(Some(t)),
            _ => Err(ConfigError(format!("PNODAL_THREADS must be a positive integer, got '{s}'"))),
        },
        Err(_) => Ok(None),
    }
}

/// Resolves the output directory: `--out` wins over `output_dir`.
pub fn output_dir(config: &ExperimentConfig, out: Option<&Path>) -> PathBuf {
    out.map(Path::to_path_buf).unwrap_or_else(|| config.output_dir.clone())
}

/// Overrides the configured expansion variant.
pub fn with_variant(mut config: ExperimentConfig, variant: Option<ExpansionVariant>) -> ExperimentConfig {
    if let Some(v) = variant {
        config.seed_formula_variant = v;
    }
    config
}
