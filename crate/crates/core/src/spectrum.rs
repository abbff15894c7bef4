//! Eigenvalues by shooting on `ρθ(1; λ) = nπ_p`, and nodal data.

use crate::asymptotics::{eigenvalue_expansion, ExpansionVariant};
use crate::error::{Error, Result};
use crate::pruefer::{integrate_phase, Pencil, PhaseOptions, PhaseSolution};

/// Shooting controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOptions {
    pub phase: PhaseOptions,
    /// Accepted `|ρθ(1) - nπ_p|`.
    pub root_tol: f64,
    pub max_iter: usize,
    /// Below this index admissibility is checked before shooting.
    pub n_min: usize,
    /// Expansion used for the initial guess.
    pub seed_variant: ExpansionVariant,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self {
            phase: PhaseOptions::default(),
            root_tol: 1e-10,
            max_iter: 100,
            n_min: 3,
            seed_variant: ExpansionVariant::ProofConsistent,
        }
    }
}

/// A converged eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    pub n: usize,
    pub lambda: f64,
    /// `λ^{2/p}`.
    pub rho: f64,
    pub mismatch: f64,
    pub iterations: usize,
}

/// Eigenvalue, interior nodes and nodal lengths of the `n`-th eigenfunction.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalData {
    pub n: usize,
    pub lambda: f64,
    pub rho: f64,
    /// `x_1 < … < x_{n-1}`.
    pub nodal_points: Vec<f64>,
    /// `l_j = x_{j+1} - x_j`, `j = 0..n-1`, with `x_0 = 0` and `x_n = 1`.
    pub nodal_lengths: Vec<f64>,
    /// `|ρθ(x_j) - jπ_p|` at each accepted node.
    pub phase_residuals: Vec<f64>,
}

impl NodalData {
    /// `x_j` for `j = 0..=n`, including the endpoints.
    pub fn node(&self, j: usize) -> f64 {
        if j == 0 {
            0.0
        } else if j == self.n {
            1.0
        } else {
            self.nodal_points[j - 1]
        }
    }

    /// `max{j : x_j ≤ x}` with `x_0 = 0`, clamped to `0..n-1`.
    pub fn interval_index(&self, x: f64) -> usize {
        self.nodal_points.partition_point(|&v| v <= x)
    }
}

/// `λ^{2/p} θ(1; λ) - nπ_p`.
pub fn boundary_mismatch(pencil: &Pencil, lambda: f64, n: usize, options: &PhaseOptions) -> Result<f64> {
    let sol = integrate_phase(pencil, lambda, options)?;
    Ok(sol.total_phase() - n as f64 * pencil.pi_p())
}

struct Probe {
    rho: f64,
    mismatch: f64,
    theta_end: f64,
}

fn probe(pencil: &Pencil, rho: f64, n: usize, options: &PhaseOptions) -> Result<Probe> {
    if !(rho > 0.0) {
        return Err(Error::NonPositiveLambda(rho));
    }
    let sol = integrate_phase(pencil, pencil.lambda_from_rho(rho), options)?;
    Ok(Probe { rho, mismatch: sol.total_phase() - n as f64 * pencil.pi_p(), theta_end: sol.theta_end() })
}

/// Solves for `λ_n`. The search runs in `ρ = λ^{2/p}`, where the mismatch is
/// nearly linear with unit slope; the seed inverts the leading terms of the
/// eigenvalue expansion.
pub fn find_eigenvalue(pencil: &Pencil, n: usize, options: &ShootingOptions) -> Result<Eigenvalue> {
    if n == 0 {
        return Err(Error::IndexOutOfRange { n, j: 0 });
    }
    let pi_p = pencil.pi_p();
    let seed = eigenvalue_expansion(pencil.table.params(), pencil.pair, n, options.seed_variant).value();
    let seed = if seed > 0.0 { seed } else { n as f64 * pi_p };
    if n < options.n_min && !pencil.is_admissible(pencil.lambda_from_rho(seed)) {
        return Err(Error::Inadmissible { n, lambda: pencil.lambda_from_rho(seed) });
    }

    let first = probe(pencil, seed, n, &options.phase)?;
    let mut evals = 1;
    if first.mismatch.abs() < options.root_tol {
        return Ok(finish(pencil, n, &first, evals));
    }

    // Newton-like step with slope θ(1), then widen until the sign changes.
    let guard = 0.5 * pi_p;
    let mut step = (-first.mismatch / first.theta_end).clamp(-guard, guard);
    if step == 0.0 {
        step = options.root_tol;
    }
    let mut lo = first;
    let mut hi = probe(pencil, lo.rho + step, n, &options.phase)?;
    evals += 1;
    let mut widen = 0;
    while lo.mismatch.signum() == hi.mismatch.signum() {
        if hi.mismatch.abs() < options.root_tol {
            return Ok(finish(pencil, n, &hi, evals));
        }
        widen += 1;
        if widen > 8 {
            return Err(Error::NoBracket { n, seed });
        }
        let next_rho = hi.rho + (hi.rho - lo.rho) * 2.0;
        lo = hi;
        hi = probe(pencil, next_rho, n, &options.phase)?;
        evals += 1;
    }
    if lo.rho > hi.rho {
        std::mem::swap(&mut lo, &mut hi);
    }

    // Illinois-safeguarded regula falsi.
    let (mut a, mut b) = (lo, hi);
    let mut side = 0i8;
    let mut best_mismatch = a.mismatch.abs().min(b.mismatch.abs());
    for _ in 0..options.max_iter {
        let mut x = b.rho - b.mismatch * (b.rho - a.rho) / (b.mismatch - a.mismatch);
        if !(x > a.rho && x < b.rho) {
            x = 0.5 * (a.rho + b.rho);
        }
        let c = probe(pencil, x, n, &options.phase)?;
        evals += 1;
        best_mismatch = best_mismatch.min(c.mismatch.abs());
        if c.mismatch.abs() < options.root_tol {
            return Ok(finish(pencil, n, &c, evals));
        }
        if c.mismatch.signum() == b.mismatch.signum() {
            b = c;
            if side == 1 {
                a.mismatch *= 0.5;
            }
            side = 1;
        } else {
            a = c;
            if side == -1 {
                b.mismatch *= 0.5;
            }
            side = -1;
        }
        if b.rho - a.rho <= 4.0 * f64::EPSILON * b.rho {
            break;
        }
    }
    Err(Error::RootNotConverged { n, mismatch: best_mismatch })
}

fn finish(pencil: &Pencil, n: usize, probe: &Probe, iterations: usize) -> Eigenvalue {
    Eigenvalue {
        n,
        lambda: pencil.lambda_from_rho(probe.rho),
        rho: probe.rho,
        mismatch: probe.mismatch,
        iterations,
    }
}

/// Locates `x_j` with `ρθ(x_j) = jπ_p` for `j = 1..n-1`.
///
/// Each node is bracketed on the stored trajectory and then refined by
/// re-integrating the bracketing step with ten sub-steps; the final position
/// solves a single RK4 step of variable length for the target phase.
pub fn extract_nodes(pencil: &Pencil, phase: &PhaseSolution, n: usize) -> Result<NodalData> {
    let pi_p = pencil.pi_p();
    let rho = phase.rho;
    let lambda = phase.lambda;
    let total = phase.total_phase();
    let mut nodal_points = Vec::with_capacity(n.saturating_sub(1));
    let mut phase_residuals = Vec::with_capacity(n.saturating_sub(1));

    for j in 1..n {
        let target = j as f64 * pi_p;
        if target >= total {
            return Err(Error::MissingNode { found: j - 1, expected: n - 1 });
        }
        let k = phase.thetas.partition_point(|&t| rho * t < target);
        // rho*thetas[k-1] < target <= rho*thetas[k]
        let (mut x, mut theta) = (phase.xs[k - 1], phase.thetas[k - 1]);
        let sub = phase.step_size / 10.0;
        let mut h = sub;
        for _ in 0..40 {
            h = sub.min(1.0 - x);
            let (next, _) = pencil.rk4_step(lambda, rho, x, theta, h);
            if rho * next >= target || h < sub {
                break;
            }
            x += h;
            theta = next;
        }
        let (xj, residual) = solve_step_length(pencil, lambda, rho, x, theta, h, target);
        nodal_points.push(xj);
        phase_residuals.push(residual);
    }

    let nodal_lengths = (0..n)
        .map(|j| {
            let right = if j + 1 == n { 1.0 } else { nodal_points[j] };
            let left = if j == 0 { 0.0 } else { nodal_points[j - 1] };
            right - left
        })
        .collect();
    Ok(NodalData { n, lambda, rho, nodal_points, nodal_lengths, phase_residuals })
}

// Finds δ ∈ [0, h] with ρ·RK4(x, θ, δ) = target by safeguarded secant.
fn solve_step_length(pencil: &Pencil, lambda: f64, rho: f64, x: f64, theta: f64, h: f64, target: f64) -> (f64, f64) {
    let g = |d: f64| {
        if d == 0.0 {
            rho * theta - target
        } else {
            rho * pencil.rk4_step(lambda, rho, x, theta, d).0 - target
        }
    };
    let (mut a, mut ga) = (0.0, g(0.0));
    let (mut b, mut gb) = (h, g(h));
    if ga.abs() <= f64::EPSILON * target.abs() {
        return (x, ga.abs());
    }
    let mut best = if ga.abs() < gb.abs() { (a, ga) } else { (b, gb) };
    for _ in 0..100 {
        let mut d = b - gb * (b - a) / (gb - ga);
        if !(d > a && d < b) {
            d = 0.5 * (a + b);
        }
        let gd = g(d);
        if gd.abs() < best.1.abs() {
            best = (d, gd);
        }
        if gd.abs() <= 4.0 * f64::EPSILON * target.abs() || b - a <= f64::EPSILON * h {
            break;
        }
        if gd.signum() == gb.signum() {
            b = d;
            gb = gd;
            ga *= 0.5;
        } else {
            a = d;
            ga = gd;
            gb *= 0.5;
        }
    }
    (x + best.0, best.1.abs())
}

/// Eigenvalue plus nodal data for index `n`.
pub fn solve_index(pencil: &Pencil, n: usize, options: &ShootingOptions) -> Result<NodalData> {
    let eig = find_eigenvalue(pencil, n, options)?;
    let phase = integrate_phase(pencil, eig.lambda, &options.phase)?;
    extract_nodes(pencil, &phase, n)
}
