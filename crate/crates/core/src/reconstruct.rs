//! Recovery of `q` from nodal lengths at finite `n`.
//!
//! ```text
//! q̂_n(x) = p λ_n² ( λ_n^{2/p} l_j / π_p - 2 r(x) / (p λ_n) - 1 ),   j = max{j : x_j ≤ x}.
//! ```
//!
//! The formula amplifies any error in `λ_n^{2/p} l_j / π_p` by `p λ_n²`, so
//! every result carries the noise floor `p λ_n² · root_tol`.

use crate::error::{Error, Result};
use crate::gentrig::PParameters;
use crate::potentials::Potential;
use crate::spectrum::NodalData;

/// A reconstructed coefficient on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    pub n: usize,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub truth: Option<Vec<f64>>,
    pub sup_error: Option<f64>,
    pub l2_error: Option<f64>,
    /// `j_n(x)` per grid point.
    pub j_map: Vec<usize>,
    pub noise_floor: f64,
}

impl ReconstructionResult {
    /// Attaches ground truth and fills in the error metrics.
    pub fn with_truth(mut self, truth: &Potential) -> Result<Self> {
        let values = self.grid.iter().map(|&x| truth.eval(x)).collect::<Result<Vec<_>>>()?;
        let (sup, l2) = error_metrics(&self.grid, &self.values, &values)?;
        self.truth = Some(values);
        self.sup_error = Some(sup);
        self.l2_error = Some(l2);
        Ok(self)
    }
}

/// `n` equispaced points strictly inside `(0, 1)`: cell midpoints.
pub fn uniform_grid(size: usize) -> Vec<f64> {
    (0..size).map(|i| (i as f64 + 0.5) / size as f64).collect()
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if let Some(&x) = grid.iter().find(|&&x| !(x > 0.0 && x < 1.0)) {
        return Err(Error::GridOutOfRange(x));
    }
    Ok(())
}

/// `λ_n^{2/p} l_j / π_p` per nodal interval.
pub fn normalized_lengths(params: &PParameters, nodal: &NodalData) -> Vec<f64> {
    nodal.nodal_lengths.iter().map(|l| nodal.rho * l / params.pi_p).collect()
}

/// `p λ_n² · root_tol`.
pub fn noise_floor(params: &PParameters, nodal: &NodalData, root_tol: f64) -> f64 {
    params.p * nodal.lambda * nodal.lambda * root_tol
}

/// Finite-`n` evaluation of the reconstruction formula for `q`, with `r`
/// supplied.
pub fn reconstruct_q(
    params: &PParameters,
    nodal: &NodalData,
    r: &Potential,
    grid: &[f64],
    root_tol: f64,
) -> Result<ReconstructionResult> {
    check_grid(grid)?;
    let p = params.p;
    let lambda = nodal.lambda;
    let ratios = normalized_lengths(params, nodal);
    let mut j_map = Vec::with_capacity(grid.len());
    let mut values = Vec::with_capacity(grid.len());
    for &x in grid {
        let j = nodal.interval_index(x);
        let rx = r.eval(x)?;
        values.push(p * lambda * lambda * (ratios[j] - 2.0 * rx / (p * lambda) - 1.0));
        j_map.push(j);
    }
    Ok(ReconstructionResult {
        n: nodal.n,
        grid: grid.to_vec(),
        values,
        truth: None,
        sup_error: None,
        l2_error: None,
        j_map,
        noise_floor: noise_floor(params, nodal, root_tol),
    })
}

/// Leading-order recovery of `r` from the nodal length expansion:
/// `r̂(x) = (p λ_n / 2)(λ_n^{2/p} l_j / π_p - 1)`, accurate to `O(1/λ_n)`
/// for bounded `q`.
pub fn reconstruct_r_leading(
    params: &PParameters,
    nodal: &NodalData,
    grid: &[f64],
    root_tol: f64,
) -> Result<ReconstructionResult> {
    check_grid(grid)?;
    let p = params.p;
    let ratios = normalized_lengths(params, nodal);
    let j_map: Vec<usize> = grid.iter().map(|&x| nodal.interval_index(x)).collect();
    let values = j_map.iter().map(|&j| 0.5 * p * nodal.lambda * (ratios[j] - 1.0)).collect();
    Ok(ReconstructionResult {
        n: nodal.n,
        grid: grid.to_vec(),
        values,
        truth: None,
        sup_error: None,
        l2_error: None,
        j_map,
        noise_floor: 0.5 * p * nodal.lambda * root_tol,
    })
}

/// Sup norm and trapezoid-weighted discrete L² norm of `values - truth`.
pub fn error_metrics(grid: &[f64], values: &[f64], truth: &[f64]) -> Result<(f64, f64)> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if values.len() != grid.len() || truth.len() != grid.len() {
        return Err(Error::LengthMismatch(grid.len(), values.len().min(truth.len())));
    }
    let err: Vec<f64> = values.iter().zip(truth).map(|(a, b)| (a - b).abs()).collect();
    let sup = err.iter().copied().fold(0.0, f64::max);
    if grid.len() == 1 {
        return Ok((sup, err[0]));
    }
    let integral: f64 = grid
        .windows(2)
        .zip(err.windows(2))
        .map(|(g, e)| 0.5 * (g[1] - g[0]) * (e[0] * e[0] + e[1] * e[1]))
        .sum();
    let span = grid[grid.len() - 1] - grid[0];
    Ok((sup, (integral / span).sqrt()))
}

/// Extrapolates the last two rungs of an `n`-ladder assuming an error
/// proportional to `1/n`. All results must share the same grid.
pub fn extrapolate_ladder(results: &[ReconstructionResult]) -> Result<Vec<f64>> {
    if results.len() < 2 {
        return Err(Error::TooFewIndices { needed: 2, got: results.len() });
    }
    let a = &results[results.len() - 2];
    let b = &results[results.len() - 1];
    if a.grid.len() != b.grid.len() {
        return Err(Error::LengthMismatch(a.grid.len(), b.grid.len()));
    }
    let (na, nb) = (a.n as f64, b.n as f64);
    Ok(a.values.iter().zip(&b.values).map(|(va, vb)| (nb * vb - na * va) / (nb - na)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_nodal(n: usize, p: f64) -> (PParameters, NodalData) {
        let params = PParameters::new(p).unwrap();
        let rho = n as f64 * params.pi_p;
        let nodal = NodalData {
            n,
            lambda: rho.powf(0.5 * p),
            rho,
            nodal_points: (1..n).map(|j| j as f64 / n as f64).collect(),
            nodal_lengths: vec![1.0 / n as f64; n],
            phase_residuals: vec![0.0; n - 1],
        };
        (params, nodal)
    }

    #[test]
    fn zero_data_reconstructs_zero() {
        let (params, nodal) = uniform_nodal(10, 2.0);
        let grid = uniform_grid(50);
        let res = reconstruct_q(&params, &nodal, &Potential::Zero, &grid, 1e-10).unwrap();
        let res = res.with_truth(&Potential::Zero).unwrap();
        assert!(res.sup_error.unwrap() <= res.noise_floor);
        let r = reconstruct_r_leading(&params, &nodal, &grid, 1e-10).unwrap();
        assert!(r.values.iter().all(|v| v.abs() <= r.noise_floor));
    }

    #[test]
    fn j_map_convention() {
        let (params, nodal) = uniform_nodal(4, 2.0);
        let grid = [0.1, 0.25, 0.3, 0.74, 0.9];
        let res = reconstruct_q(&params, &nodal, &Potential::Zero, &grid, 1e-10).unwrap();
        assert_eq!(res.j_map, vec![0, 1, 1, 2, 3]);
    }

    #[test]
    fn grid_errors() {
        let (params, nodal) = uniform_nodal(4, 2.0);
        assert_eq!(reconstruct_q(&params, &nodal, &Potential::Zero, &[], 1e-10), Err(Error::EmptyGrid));
        assert_eq!(
            reconstruct_q(&params, &nodal, &Potential::Zero, &[0.5, 1.0], 1e-10),
            Err(Error::GridOutOfRange(1.0))
        );
        assert_eq!(reconstruct_r_leading(&params, &nodal, &[0.0], 1e-10), Err(Error::GridOutOfRange(0.0)));
    }

    #[test]
    fn metrics() {
        let grid = uniform_grid(20);
        let truth: Vec<f64> = grid.iter().map(|x| x * x).collect();
        assert_eq!(error_metrics(&grid, &truth, &truth).unwrap(), (0.0, 0.0));
        let shifted: Vec<f64> = truth.iter().map(|v| v + 0.1).collect();
        let (sup, l2) = error_metrics(&grid, &shifted, &truth).unwrap();
        assert!((sup - 0.1).abs() < 1e-15);
        assert!((l2 - 0.1).abs() < 1e-15);
        assert_eq!(error_metrics(&[], &[], &[]), Err(Error::EmptyGrid));
    }

    #[test]
    fn ladder_extrapolation_removes_first_order_error() {
        let grid = uniform_grid(4);
        let make = |n: usize| ReconstructionResult {
            n,
            grid: grid.clone(),
            values: grid.iter().map(|x| x + 3.0 / n as f64).collect(),
            truth: None,
            sup_error: None,
            l2_error: None,
            j_map: vec![0; 4],
            noise_floor: 0.0,
        };
        let ext = extrapolate_ladder(&[make(10), make(20), make(40)]).unwrap();
        for (e, x) in ext.iter().zip(&grid) {
            assert!((e - x).abs() < 1e-13);
        }
        assert!(extrapolate_ladder(&[make(10)]).is_err());
    }
}
