//! Closed-form large-`n` expansions and their measured residuals.
//!
//! Three expansions are evaluated:
//!
//! * eigenvalues: `λ_n^{2/p} ≈ nπ_p + ∫q / (p (nπ_p)^{p-1}) + 2∫r / (p (nπ_p)^e)`;
//! * nodal points `x_j^n`;
//! * nodal lengths `l_j^n ≈ π_p/λ^{2/p} + (2/(pλ))∫_I r + (1/(pλ²))∫_I q` over
//!   the nodal interval `I = [x_j, x_{j+1}]`.
//!
//! The r-term exponent `e` of the eigenvalue expansion has two readings:
//! `(p-2)/p`, and `(p-2)/2` from expanding `2∫r/(pλ)` with
//! `λ = (nπ_p)^{p/2}`. Both are available through [`ExpansionVariant`];
//! they coincide at `p = 2`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gentrig::PParameters;
use crate::potentials::{CoefficientPair, Which};
use crate::pruefer::{Pencil, PhaseSolution};
use crate::spectrum::NodalData;

/// Which reading of the expansion exponents to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExpansionVariant {
    /// Exponents `(p-2)/p` (eigenvalues) and `(2p-2)/p` (nodal points).
    Printed,
    /// Exponents obtained by expanding the exact phase identity.
    #[default]
    ProofConsistent,
}

impl ExpansionVariant {
    pub fn name(self) -> &'static str {
        match self {
            ExpansionVariant::Printed => "printed",
            ExpansionVariant::ProofConsistent => "proof-consistent",
        }
    }
}

impl fmt::Display for ExpansionVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExpansionVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "printed" => Ok(ExpansionVariant::Printed),
            "proof-consistent" => Ok(ExpansionVariant::ProofConsistent),
            other => Err(format!("unknown variant '{other}' (expected 'printed' or 'proof-consistent')")),
        }
    }
}

/// Term-by-term value of an expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenvalueTerms {
    pub leading: f64,
    pub q_term: f64,
    pub r_term: f64,
}

impl EigenvalueTerms {
    pub fn value(&self) -> f64 {
        self.leading + self.q_term + self.r_term
    }
}

/// Coefficients multiplying `∫₀¹q` and `∫₀¹r` in the eigenvalue expansion.
pub fn eigenvalue_coefficients(p: f64, pi_p: f64, n: usize, variant: ExpansionVariant) -> (f64, f64) {
    let npi = n as f64 * pi_p;
    let r_exp = match variant {
        ExpansionVariant::Printed => (p - 2.0) / p,
        ExpansionVariant::ProofConsistent => (p - 2.0) / 2.0,
    };
    (1.0 / (p * npi.powf(p - 1.0)), 2.0 / (p * npi.powf(r_exp)))
}

/// Predicted `λ_n^{2/p}`.
pub fn eigenvalue_expansion(
    params: &PParameters,
    pair: &CoefficientPair,
    n: usize,
    variant: ExpansionVariant,
) -> EigenvalueTerms {
    let (cq, cr) = eigenvalue_coefficients(params.p, params.pi_p, n, variant);
    EigenvalueTerms {
        leading: n as f64 * params.pi_p,
        q_term: cq * pair.integral_q(),
        r_term: cr * pair.integral_r(),
    }
}

/// Terms of the nodal point expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodalPointTerms {
    /// `j/n`.
    pub leading: f64,
    /// Term in `∫₀¹q`.
    pub q_global: f64,
    /// Term in `∫₀¹r`.
    pub r_global: f64,
    /// Term in `∫₀^{x_j} q S_p^p`.
    pub q_local: f64,
    /// Term in `∫₀^{x_j} r S_p^p`.
    pub r_local: f64,
}

impl NodalPointTerms {
    pub fn value(&self) -> f64 {
        self.leading + self.q_global + self.r_global + self.q_local + self.r_local
    }
}

fn nodal_point_terms(
    params: &PParameters,
    pair: &CoefficientPair,
    n: usize,
    j: usize,
    variant: ExpansionVariant,
    weighted_q: f64,
    weighted_r: f64,
) -> NodalPointTerms {
    let p = params.p;
    let pi_p = params.pi_p;
    let (nf, jf) = (n as f64, j as f64);
    let npi = nf * pi_p;
    let (q_global, r_global) = match variant {
        ExpansionVariant::Printed => {
            let e = (2.0 * p - 2.0) / p;
            (
                jf / (p * nf.powf(p + 1.0) * pi_p.powf(p)) * pair.integral_q(),
                2.0 * jf / (p * nf.powf(e) * pi_p.powf(e)) * pair.integral_r(),
            )
        }
        // jπ_p/λ^{2/p} with the reciprocal of the eigenvalue expansion.
        ExpansionVariant::ProofConsistent => (
            -jf / (p * nf * npi.powf(p)) * pair.integral_q(),
            -2.0 * jf / (p * nf * npi.powf(0.5 * p)) * pair.integral_r(),
        ),
    };
    NodalPointTerms {
        leading: jf / nf,
        q_global,
        r_global,
        q_local: weighted_q / npi.powf(p),
        r_local: 2.0 * weighted_r / npi.powf(0.5 * p),
    }
}

fn check_interior(n: usize, j: usize) -> Result<()> {
    if j == 0 || j >= n {
        return Err(Error::IndexOutOfRange { n, j });
    }
    Ok(())
}

/// Predicted `x_j^n` with the weighted integrals replaced by their mean
/// `(1/p)∫₀^{j/n}` (the upper limit taken at leading order).
pub fn nodal_point_expansion(
    params: &PParameters,
    pair: &CoefficientPair,
    n: usize,
    j: usize,
    variant: ExpansionVariant,
) -> Result<NodalPointTerms> {
    check_interior(n, j)?;
    let upper = j as f64 / n as f64;
    let wq = pair.integrate(Which::Q, 0.0, upper)? / params.p;
    let wr = pair.integrate(Which::R, 0.0, upper)? / params.p;
    Ok(nodal_point_terms(params, pair, n, j, variant, wq, wr))
}

/// As [`nodal_point_expansion`] but with the weighted integrals
/// `∫₀^{x_j} f |S_p(ρθ)|^p` taken along a computed phase up to the numerical
/// node.
pub fn nodal_point_expansion_raw(
    pencil: &Pencil,
    phase: &PhaseSolution,
    nodal: &NodalData,
    j: usize,
    variant: ExpansionVariant,
) -> Result<NodalPointTerms> {
    check_interior(nodal.n, j)?;
    let upper = nodal.node(j);
    let wq = weighted_integral(pencil, phase, Which::Q, upper);
    let wr = weighted_integral(pencil, phase, Which::R, upper);
    Ok(nodal_point_terms(pencil.table.params(), pencil.pair, nodal.n, j, variant, wq, wr))
}

const GL4_X: [f64; 4] = [-0.861_136_311_594_052_6, -0.339_981_043_584_856_3, 0.339_981_043_584_856_3, 0.861_136_311_594_052_6];
const GL4_W: [f64; 4] = [0.347_854_845_137_453_9, 0.652_145_154_862_546_1, 0.652_145_154_862_546_1, 0.347_854_845_137_453_9];

/// `∫₀^{upper} f(t) |S_p(ρθ(t))|^p dt` along the dense phase.
pub fn weighted_integral(pencil: &Pencil, phase: &PhaseSolution, which: Which, upper: f64) -> f64 {
    let f = pencil.pair.get(which);
    if f.is_zero() {
        return 0.0;
    }
    let h = phase.step_size;
    let mut sum = 0.0;
    let mut a = 0.0;
    while a < upper {
        let b = (a + h).min(upper);
        let (c, half) = (0.5 * (a + b), 0.5 * (b - a));
        for (x, w) in GL4_X.iter().zip(&GL4_W) {
            let t = c + half * x;
            sum += w * half * f.value(t) * pencil.table.sp_abs_pow(phase.rho * phase.theta_at(t));
        }
        a = b;
    }
    sum
}

/// Source of `λ_n` in the nodal length expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaSource {
    /// The computed eigenvalue carried by the nodal data.
    Numerical,
    /// `λ_n` from the eigenvalue expansion.
    Predicted(ExpansionVariant),
}

/// Terms of the nodal length expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodalLengthTerms {
    pub leading: f64,
    pub r_term: f64,
    pub q_term: f64,
}

impl NodalLengthTerms {
    pub fn value(&self) -> f64 {
        self.leading + self.r_term + self.q_term
    }
}

/// Predicted `l_j^n` in local form over the computed nodal interval.
pub fn nodal_length_expansion(
    params: &PParameters,
    pair: &CoefficientPair,
    nodal: &NodalData,
    j: usize,
    source: LambdaSource,
) -> Result<NodalLengthTerms> {
    if j >= nodal.n {
        return Err(Error::IndexOutOfRange { n: nodal.n, j });
    }
    let p = params.p;
    let (rho, lambda) = match source {
        LambdaSource::Numerical => (nodal.rho, nodal.lambda),
        LambdaSource::Predicted(variant) => {
            let rho = eigenvalue_expansion(params, pair, nodal.n, variant).value();
            (rho, rho.powf(0.5 * p))
        }
    };
    let (a, b) = (nodal.node(j), nodal.node(j + 1));
    Ok(NodalLengthTerms {
        leading: params.pi_p / rho,
        r_term: 2.0 / (p * lambda) * pair.integrate(Which::R, a, b)?,
        q_term: 1.0 / (p * lambda * lambda) * pair.integrate(Which::Q, a, b)?,
    })
}

/// Variable against which residual decay is fitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Abscissa {
    Index,
    Lambda,
}

/// Fitted decay of `|residual|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayFit {
    /// Exponent `a` in `|residual| ~ C·t^{-a}`.
    Exponent(f64),
    /// Residuals at the numerical noise floor; no fit attempted.
    Degenerate,
}

/// Residuals below this are treated as numerical noise.
pub const NOISE_FLOOR: f64 = 1e-9;

/// Predicted-versus-computed comparison over a range of indices.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionReport {
    pub n_range: Vec<usize>,
    pub abscissa: Abscissa,
    pub abscissa_values: Vec<f64>,
    pub predicted: Vec<f64>,
    pub computed: Vec<f64>,
    pub residual: Vec<f64>,
    pub decay: DecayFit,
}

impl ExpansionReport {
    /// `|residual_i| · t_i^{order}`.
    pub fn scaled_residuals(&self, order: f64) -> Vec<f64> {
        self.residual.iter().zip(&self.abscissa_values).map(|(r, t)| r.abs() * t.powf(order)).collect()
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    let m = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Builds a report and fits the decay exponent.
pub fn residual_report(
    n_range: Vec<usize>,
    abscissa: Abscissa,
    abscissa_values: Vec<f64>,
    predicted: Vec<f64>,
    computed: Vec<f64>,
) -> Result<ExpansionReport> {
    if n_range.len() < 4 {
        return Err(Error::TooFewIndices { needed: 4, got: n_range.len() });
    }
    for len in [abscissa_values.len(), predicted.len(), computed.len()] {
        if len != n_range.len() {
            return Err(Error::LengthMismatch(n_range.len(), len));
        }
    }
    let residual: Vec<f64> = predicted.iter().zip(&computed).map(|(a, b)| a - b).collect();
    let decay = if residual.iter().all(|r| r.abs() < NOISE_FLOOR) || residual.contains(&0.0) {
        DecayFit::Degenerate
    } else {
        DecayFit::Exponent(-log_log_slope(&abscissa_values, &residual))
    };
    Ok(ExpansionReport { n_range, abscissa, abscissa_values, predicted, computed, residual, decay })
}
