//! Coefficient functions `q` and `r` on `[0, 1]`.

use std::f64::consts::PI;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::quadrature;

/// A coefficient function on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    Zero,
    Constant(f64),
    /// `c₀ + c₁x + c₂x² + …`
    Polynomial(Vec<f64>),
    /// `amplitude · cos(2πkx)`
    Cosine { amplitude: f64, k: f64 },
    /// `amplitude · exp(1 - 1/(1 - z²))` for `z = (x - center)/width`, `|z| < 1`; zero outside.
    Bump { amplitude: f64, center: f64, width: f64 },
    Sampled(SampledPotential),
}

/// Uniform-or-not sampled data with piecewise-linear interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPotential {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl SampledPotential {
    /// Abscissae must be strictly increasing from exactly 0 to exactly 1.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch(xs.len(), ys.len()));
        }
        if xs.len() < 2 {
            return Err(Error::InvalidSamples(format!("need at least 2 points, got {}", xs.len())));
        }
        if let Some(bad) = xs.iter().chain(&ys).find(|v| !v.is_finite()) {
            return Err(Error::InvalidSamples(format!("non-finite value {bad}")));
        }
        if let Some(w) = xs.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSamples(format!("x not strictly increasing at {} -> {}", w[0], w[1])));
        }
        if xs[0] != 0.0 || xs[xs.len() - 1] != 1.0 {
            return Err(Error::InvalidSamples(format!(
                "x must span [0, 1], got [{}, {}]",
                xs[0],
                xs[xs.len() - 1]
            )));
        }
        Ok(Self { xs, ys })
    }

    /// Samples `f` on `points` uniformly spaced points of `[0, 1]`.
    pub fn from_fn<F: Fn(f64) -> f64>(points: usize, f: F) -> Result<Self> {
        let m = points.max(2) - 1;
        let xs: Vec<f64> = (0..=m).map(|i| i as f64 / m as f64).collect();
        let ys = xs.iter().map(|&x| f(x)).collect();
        Self::new(xs, ys)
    }

    /// Reads two-column CSV `x,value` with a header row.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Csv(e.to_string()))?;
            if record.len() != 2 {
                return Err(Error::Csv(format!("row {}: expected 2 columns, got {}", line + 2, record.len())));
            }
            let parse = |i: usize| {
                record[i]
                    .parse::<f64>()
                    .map_err(|e| Error::Csv(format!("row {}, column {}: {e}", line + 2, i + 1)))
            };
            xs.push(parse(0)?);
            ys.push(parse(1)?);
        }
        Self::new(xs, ys)
    }

    pub fn from_csv_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        let file = std::fs::File::open(path.as_ref())
            .map_err(|e| Error::Csv(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_csv_reader(file)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    fn segment(&self, x: f64) -> usize {
        self.xs.partition_point(|&v| v <= x).clamp(1, self.xs.len() - 1) - 1
    }

    fn value(&self, x: f64) -> f64 {
        let k = self.segment(x);
        let t = (x - self.xs[k]) / (self.xs[k + 1] - self.xs[k]);
        self.ys[k] + t * (self.ys[k + 1] - self.ys[k])
    }

    // Exact integral of the interpolant from 0 to x.
    fn antiderivative(&self, x: f64) -> f64 {
        let k = self.segment(x);
        let full: f64 = (0..k)
            .map(|i| 0.5 * (self.ys[i] + self.ys[i + 1]) * (self.xs[i + 1] - self.xs[i]))
            .sum();
        full + 0.5 * (self.ys[k] + self.value(x)) * (x - self.xs[k])
    }
}

impl Potential {
    /// Polynomial `x(1 - x)`.
    pub fn parabola() -> Self {
        Potential::Polynomial(vec![0.0, 1.0, -1.0])
    }

    /// Value at `x` without domain checking.
    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        match self {
            Potential::Zero => 0.0,
            Potential::Constant(c) => *c,
            Potential::Polynomial(coeffs) => coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c),
            Potential::Cosine { amplitude, k } => amplitude * (2.0 * PI * k * x).cos(),
            Potential::Bump { amplitude, center, width } => {
                let z = (x - center) / width;
                if z.abs() < 1.0 {
                    amplitude * (1.0 - 1.0 / (1.0 - z * z)).exp()
                } else {
                    0.0
                }
            }
            Potential::Sampled(s) => s.value(x),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfDomain(x));
        }
        Ok(self.value(x))
    }

    /// `∫ₐᵇ`, exact for every catalog entry except the bump.
    pub fn integrate(&self, a: f64, b: f64) -> Result<f64> {
        for x in [a, b] {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::OutOfDomain(x));
            }
        }
        if a > b {
            return Err(Error::ReversedBounds { a, b });
        }
        Ok(match self {
            Potential::Zero => 0.0,
            Potential::Constant(c) => c * (b - a),
            Potential::Polynomial(coeffs) => {
                let anti = |x: f64| {
                    coeffs.iter().enumerate().rev().fold(0.0, |acc, (i, c)| acc * x + c / (i + 1) as f64) * x
                };
                anti(b) - anti(a)
            }
            Potential::Cosine { amplitude, k } => {
                if *k == 0.0 {
                    amplitude * (b - a)
                } else {
                    let w = 2.0 * PI * k;
                    amplitude * ((w * b).sin() - (w * a).sin()) / w
                }
            }
            Potential::Bump { center, width, .. } => {
                let lo = a.max(center - width);
                let hi = b.min(center + width);
                if lo >= hi {
                    0.0
                } else {
                    quadrature::integrate(|x| self.value(x), lo, hi, 1e-15)?
                }
            }
            Potential::Sampled(s) => s.antiderivative(b) - s.antiderivative(a),
        })
    }

    /// `sup |f|` on `[0, 1]`; polynomials are bounded by dense sampling.
    pub fn sup_abs(&self) -> f64 {
        match self {
            Potential::Zero => 0.0,
            Potential::Constant(c) => c.abs(),
            Potential::Polynomial(_) => (0..=1024).map(|i| self.value(i as f64 / 1024.0).abs()).fold(0.0, f64::max),
            Potential::Cosine { amplitude, .. } | Potential::Bump { amplitude, .. } => amplitude.abs(),
            Potential::Sampled(s) => s.ys.iter().fold(0.0, |m, y| m.max(y.abs())),
        }
    }

    /// True when the function vanishes identically.
    pub fn is_zero(&self) -> bool {
        match self {
            Potential::Zero => true,
            Potential::Constant(c) => *c == 0.0,
            Potential::Polynomial(coeffs) => coeffs.iter().all(|&c| c == 0.0),
            Potential::Cosine { amplitude, .. } | Potential::Bump { amplitude, .. } => *amplitude == 0.0,
            Potential::Sampled(s) => s.ys.iter().all(|&y| y == 0.0),
        }
    }
}

/// Selects `q` or `r` within a [`CoefficientPair`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Q,
    R,
}

/// The potentials `q` and `r` with cached integrals over `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientPair {
    q: Potential,
    r: Potential,
    integral_q: f64,
    integral_r: f64,
}

impl CoefficientPair {
    pub fn new(q: Potential, r: Potential) -> Result<Self> {
        let integral_q = q.integrate(0.0, 1.0)?;
        let integral_r = r.integrate(0.0, 1.0)?;
        Ok(Self { q, r, integral_q, integral_r })
    }

    pub fn zero() -> Self {
        Self { q: Potential::Zero, r: Potential::Zero, integral_q: 0.0, integral_r: 0.0 }
    }

    pub fn q(&self) -> &Potential {
        &self.q
    }

    pub fn r(&self) -> &Potential {
        &self.r
    }

    pub fn get(&self, which: Which) -> &Potential {
        match which {
            Which::Q => &self.q,
            Which::R => &self.r,
        }
    }

    pub fn integral_q(&self) -> f64 {
        self.integral_q
    }

    pub fn integral_r(&self) -> f64 {
        self.integral_r
    }

    pub fn eval(&self, which: Which, x: f64) -> Result<f64> {
        self.get(which).eval(x)
    }

    pub fn integrate(&self, which: Which, a: f64, b: f64) -> Result<f64> {
        self.get(which).integrate(a, b)
    }
}
