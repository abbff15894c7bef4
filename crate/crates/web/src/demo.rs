//! Plain-Rust operations behind the browser bindings.
//!
//! The demo pencil uses `q(x) = a cos(2πx)` and `r(x) = b x(1-x)`.

use pnodal::asymptotics::{nodal_length_expansion, LambdaSource};
use pnodal::reconstruct::{reconstruct_q, uniform_grid};
use pnodal::spectrum::{solve_index, ShootingOptions};
use pnodal::{CoefficientPair, Pencil, Potential, SpTable};

pub type DemoResult<T> = Result<T, String>;

fn pair(q_amplitude: f64, r_amplitude: f64) -> DemoResult<CoefficientPair> {
    let r = if r_amplitude == 0.0 {
        Potential::Zero
    } else {
        Potential::Polynomial(vec![0.0, r_amplitude, -r_amplitude])
    };
    CoefficientPair::new(Potential::Cosine { amplitude: q_amplitude, k: 1.0 }, r).map_err(|e| e.to_string())
}

/// Samples of `S_p` and `S_p'` over one period.
#[derive(Debug, Clone, PartialEq)]
pub struct SpCurve {
    pub pi_p: f64,
    pub phase: Vec<f64>,
    pub sine: Vec<f64>,
    pub cosine: Vec<f64>,
}

pub fn sp_curve(p: f64, samples: usize) -> DemoResult<SpCurve> {
    let table = SpTable::for_p(p).map_err(|e| e.to_string())?;
    let m = samples.max(2);
    let mut curve = SpCurve { pi_p: table.pi_p(), phase: Vec::new(), sine: Vec::new(), cosine: Vec::new() };
    for i in 0..m {
        let x = 2.0 * table.pi_p() * i as f64 / (m - 1) as f64;
        let (s, c) = table.sp_pair(x);
        curve.phase.push(x);
        curve.sine.push(s);
        curve.cosine.push(c);
    }
    Ok(curve)
}

/// Nodal points and lengths of the `n`-th eigenfunction with the predicted
/// lengths alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct Nodes {
    pub lambda: f64,
    pub nodal_points: Vec<f64>,
    /// `n·l_j`.
    pub scaled_lengths: Vec<f64>,
    /// `n·l_j` predicted by the local expansion.
    pub scaled_predicted: Vec<f64>,
}

pub fn nodes(p: f64, q_amplitude: f64, r_amplitude: f64, n: usize) -> DemoResult<Nodes> {
    let table = SpTable::for_p(p).map_err(|e| e.to_string())?;
    let pair = pair(q_amplitude, r_amplitude)?;
    let pencil = Pencil::new(&table, &pair);
    let nodal = solve_index(&pencil, n, &ShootingOptions::default()).map_err(|e| e.to_string())?;
    let nf = n as f64;
    let mut predicted = Vec::with_capacity(n);
    for j in 0..n {
        let t = nodal_length_expansion(table.params(), &pair, &nodal, j, LambdaSource::Numerical)
            .map_err(|e| e.to_string())?;
        predicted.push(nf * t.value());
    }
    Ok(Nodes {
        lambda: nodal.lambda,
        scaled_lengths: nodal.nodal_lengths.iter().map(|l| nf * l).collect(),
        nodal_points: nodal.nodal_points,
        scaled_predicted: predicted,
    })
}

/// `q̂_n` against the true `q` on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Overlay {
    pub grid: Vec<f64>,
    pub q_hat: Vec<f64>,
    pub q_true: Vec<f64>,
    pub sup_error: f64,
    pub noise_floor: f64,
}

pub fn reconstruction(p: f64, q_amplitude: f64, r_amplitude: f64, n: usize, grid_size: usize) -> DemoResult<Overlay> {
    let table = SpTable::for_p(p).map_err(|e| e.to_string())?;
    let pair = pair(q_amplitude, r_amplitude)?;
    let pencil = Pencil::new(&table, &pair);
    let options = ShootingOptions::default();
    let nodal = solve_index(&pencil, n, &options).map_err(|e| e.to_string())?;
    let grid = uniform_grid(grid_size.max(16));
    let rec = reconstruct_q(table.params(), &nodal, pair.r(), &grid, options.root_tol)
        .and_then(|r| r.with_truth(pair.q()))
        .map_err(|e| e.to_string())?;
    Ok(Overlay {
        q_true: rec.truth.clone().unwrap_or_default(),
        sup_error: rec.sup_error.unwrap_or(f64::NAN),
        noise_floor: rec.noise_floor,
        q_hat: rec.values,
        grid: rec.grid,
    })
}
