//! Modified Prüfer phase.
//!
//! With `u = c(x) S_p(ρθ)`, `u' = ρ c(x) S_p'(ρθ)` and `ρ = λ^{2/p}`, the
//! phase obeys
//!
//! ```text
//! θ'(x) = 1 - (q(x)/λ² + 2r(x)/λ) |S_p(ρθ)|^p,   θ(0) = 0.
//! ```
//!
//! The phase is integrated with classical RK4 on a uniform grid whose step
//! keeps `ρh` below [`PhaseOptions::phase_step`].

use crate::error::{Error, Result};
use crate::gentrig::SpTable;
use crate::potentials::CoefficientPair;

/// A generalized-sine table together with the coefficient pair.
#[derive(Debug, Clone, Copy)]
pub struct Pencil<'a> {
    pub table: &'a SpTable,
    pub pair: &'a CoefficientPair,
}

impl<'a> Pencil<'a> {
    pub fn new(table: &'a SpTable, pair: &'a CoefficientPair) -> Self {
        Self { table, pair }
    }

    pub fn p(&self) -> f64 {
        self.table.p()
    }

    pub fn pi_p(&self) -> f64 {
        self.table.pi_p()
    }

    /// `ρ = λ^{2/p}`.
    pub fn rho(&self, lambda: f64) -> f64 {
        lambda.powf(2.0 / self.p())
    }

    /// `λ = ρ^{p/2}`.
    pub fn lambda_from_rho(&self, rho: f64) -> f64 {
        rho.powf(0.5 * self.p())
    }

    /// `λ² > sup|q| + 2λ sup|r|`, which keeps the phase strictly increasing.
    pub fn is_admissible(&self, lambda: f64) -> bool {
        lambda > 0.0 && lambda * lambda > self.pair.q().sup_abs() + 2.0 * lambda * self.pair.r().sup_abs()
    }

    /// `(θ', w)` where `w = q/λ² + 2r/λ`; the phase can stall once `w ≥ 1`.
    #[inline]
    fn rhs(&self, lambda: f64, rho: f64, x: f64, theta: f64) -> (f64, f64) {
        let weight = self.pair.q().value(x) / (lambda * lambda) + 2.0 * self.pair.r().value(x) / lambda;
        if weight == 0.0 {
            return (1.0, 0.0);
        }
        (1.0 - weight * self.table.sp_abs_pow(rho * theta), weight)
    }

    /// One RK4 step of size `h` from `(x, theta)`; also returns the largest
    /// stage weight.
    #[inline]
    pub(crate) fn rk4_step(&self, lambda: f64, rho: f64, x: f64, theta: f64, h: f64) -> (f64, f64) {
        let k1 = self.rhs(lambda, rho, x, theta);
        self.rk4_step_with(lambda, rho, x, theta, h, k1)
    }

    #[inline]
    fn rk4_step_with(&self, lambda: f64, rho: f64, x: f64, theta: f64, h: f64, k1: (f64, f64)) -> (f64, f64) {
        let xm = x + 0.5 * h;
        let k2 = self.rhs(lambda, rho, xm, theta + 0.5 * h * k1.0);
        let k3 = self.rhs(lambda, rho, xm, theta + 0.5 * h * k2.0);
        let k4 = self.rhs(lambda, rho, (x + h).min(1.0), theta + h * k3.0);
        let weight = k1.1.max(k2.1).max(k4.1);
        (theta + h * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0) / 6.0, weight)
    }
}

/// Integration controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseOptions {
    /// Upper bound on `ρh`, the phase advanced per step. Must not exceed 0.1.
    pub phase_step: f64,
}

impl Default for PhaseOptions {
    fn default() -> Self {
        Self { phase_step: 0.02 }
    }
}

impl PhaseOptions {
    pub fn halved(self) -> Self {
        Self { phase_step: 0.5 * self.phase_step }
    }
}

/// `θ(x; λ)` on a uniform grid from 0 to 1 with slopes for dense output.
#[derive(Debug, Clone)]
pub struct PhaseSolution {
    pub lambda: f64,
    pub rho: f64,
    pub p: f64,
    pub step_size: f64,
    pub xs: Vec<f64>,
    pub thetas: Vec<f64>,
    pub slopes: Vec<f64>,
}

impl PhaseSolution {
    pub fn theta_end(&self) -> f64 {
        self.thetas[self.thetas.len() - 1]
    }

    /// Total phase `ρθ(1)`.
    pub fn total_phase(&self) -> f64 {
        self.rho * self.theta_end()
    }

    /// Cubic Hermite dense output.
    pub fn theta_at(&self, x: f64) -> f64 {
        let n = self.xs.len() - 1;
        let k = ((x / self.step_size).floor() as usize).min(n - 1);
        let h = self.step_size;
        let t = (x - self.xs[k]) / h;
        let t2 = t * t;
        let omt = 1.0 - t;
        (1.0 + 2.0 * t) * omt * omt * self.thetas[k]
            + t * omt * omt * h * self.slopes[k]
            + t2 * (3.0 - 2.0 * t) * self.thetas[k + 1]
            + t2 * (t - 1.0) * h * self.slopes[k + 1]
    }
}

/// Right-hand side of the phase equation.
pub fn phase_rhs(pencil: &Pencil, lambda: f64, x: f64, theta: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    pencil.pair.q().eval(x)?;
    Ok(pencil.rhs(lambda, pencil.rho(lambda), x, theta).0)
}

/// Number of uniform steps for a given `ρ`.
pub fn step_count(rho: f64, options: &PhaseOptions) -> usize {
    ((rho / options.phase_step).ceil() as usize).max(16)
}

/// Integrates the phase from `θ(0) = 0` to `x = 1`.
pub fn integrate_phase(pencil: &Pencil, lambda: f64, options: &PhaseOptions) -> Result<PhaseSolution> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    let rho = pencil.rho(lambda);
    let steps = step_count(rho, options);
    let h = 1.0 / steps as f64;
    if h < 1e-12 {
        return Err(Error::StepUnderflow { step: h, lambda });
    }

    let mut xs = Vec::with_capacity(steps + 1);
    let mut thetas = Vec::with_capacity(steps + 1);
    let mut slopes = Vec::with_capacity(steps + 1);
    let mut theta = 0.0;
    let mut slope = pencil.rhs(lambda, rho, 0.0, 0.0);
    xs.push(0.0);
    thetas.push(theta);
    slopes.push(slope.0);
    for k in 0..steps {
        let x = k as f64 / steps as f64;
        let (next, weight) = pencil.rk4_step_with(lambda, rho, x, theta, h, slope);
        if !(weight < 1.0) {
            return Err(Error::NonMonotonePhase { x, lambda });
        }
        theta = next;
        let x_next = (k + 1) as f64 / steps as f64;
        slope = pencil.rhs(lambda, rho, x_next, theta);
        xs.push(x_next);
        thetas.push(theta);
        slopes.push(slope.0);
    }
    Ok(PhaseSolution { lambda, rho, p: pencil.p(), step_size: h, xs, thetas, slopes })
}

/// `|θ_h(1) - θ_{h/2}(1)|`.
pub fn self_convergence(pencil: &Pencil, lambda: f64, options: &PhaseOptions) -> Result<f64> {
    let coarse = integrate_phase(pencil, lambda, options)?;
    let fine = integrate_phase(pencil, lambda, &options.halved())?;
    Ok((coarse.theta_end() - fine.theta_end()).abs())
}
