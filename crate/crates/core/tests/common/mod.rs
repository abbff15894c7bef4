#![allow(dead_code)]

use std::f64::consts::PI;

/// Tanh-sinh quadrature of `f` on `[0, 1]`. `f` receives `(x, 1 - x)` so
/// endpoint singularities can be evaluated without cancellation.
pub fn tanh_sinh<F: Fn(f64, f64) -> f64>(f: F) -> f64 {
    let h = 1.0 / 64.0;
    let mut sum = 0.0;
    let mut k: i64 = -(6.0 / h) as i64;
    while (k as f64) * h <= 6.0 {
        let t = k as f64 * h;
        let u = 0.5 * PI * t.sinh();
        let comp = 1.0 / (1.0 + (2.0 * u).exp());
        let x = 1.0 / (1.0 + (-2.0 * u).exp());
        let w = 0.5 * PI * t.cosh() / (2.0 * u.cosh() * u.cosh());
        if x > 0.0 && comp > 0.0 {
            let v = f(x, comp);
            if v.is_finite() {
                sum += w * v;
            }
        }
        k += 1;
    }
    sum * h
}

/// `1 - t^p` given `t` and `1 - t`.
fn one_minus_pow(t: f64, comp: f64, p: f64) -> f64 {
    if t < 0.5 {
        1.0 - t.powf(p)
    } else {
        -(p * (-comp).ln_1p()).exp_m1()
    }
}

/// `2∫₀¹ (1 - t^p)^{-1/p} dt`.
pub fn pi_p_oracle(p: f64) -> f64 {
    2.0 * tanh_sinh(|t, c| one_minus_pow(t, c, p).powf(-1.0 / p))
}

/// `∫₀^s (1 - t^p)^{-1/p} dt` for `s < 1`.
pub fn arc(p: f64, s: f64) -> f64 {
    s * tanh_sinh(|t, c| {
        let u = s * t;
        let comp = if u < 0.5 { 1.0 - u } else { c * s + (1.0 - s) };
        one_minus_pow(u, comp, p).powf(-1.0 / p)
    })
}

/// `S_p(x)` for `x` in `[0, π_p/2)` by inverting the defining integral.
pub fn sp_by_inversion(p: f64, x: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut s = (x / (0.5 * pi_p_oracle(p))).min(0.999);
    for _ in 0..200 {
        let f = arc(p, s) - x;
        if f.abs() < 1e-15 {
            break;
        }
        if f > 0.0 {
            hi = s;
        } else {
            lo = s;
        }
        let step = f * (1.0 - s.powf(p)).powf(1.0 / p);
        let next = s - step;
        s = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        if hi - lo < 1e-16 {
            break;
        }
    }
    s
}

/// Negative-pivot count of the symmetric tridiagonal matrix with diagonal `d`
/// and constant off-diagonal `e`.
fn negative_count(d: &[f64], e: f64) -> usize {
    let mut count = 0;
    let mut piv = 1.0;
    for (i, di) in d.iter().enumerate() {
        piv = if i == 0 { *di } else { di - e * e / piv };
        if piv == 0.0 {
            piv = -1e-300;
        }
        if piv < 0.0 {
            count += 1;
        }
    }
    count
}

/// Eigenvalues `λ_1..λ_count` of `-u'' + (q + 2λr)u = λ²u`, `u(0) = u(1) = 0`,
/// by second-order finite differences on `mesh` intervals and bisection on the
/// inertia of `K + Q + 2λR - λ²I`.
pub fn fd_pencil_eigenvalues(q: &dyn Fn(f64) -> f64, r: &dyn Fn(f64) -> f64, count: usize, mesh: usize) -> Vec<f64> {
    let h = 1.0 / mesh as f64;
    let xs: Vec<f64> = (1..mesh).map(|i| i as f64 * h).collect();
    let qs: Vec<f64> = xs.iter().map(|&x| q(x)).collect();
    let rs: Vec<f64> = xs.iter().map(|&x| r(x)).collect();
    let off = -1.0 / (h * h);
    let below = |lambda: f64| {
        let d: Vec<f64> =
            qs.iter().zip(&rs).map(|(qv, rv)| 2.0 / (h * h) + qv + 2.0 * lambda * rv - lambda * lambda).collect();
        negative_count(&d, off)
    };
    (1..=count)
        .map(|n| {
            let mut lo = 1e-3;
            let mut hi = (n as f64 + 1.0) * PI + 10.0;
            while below(hi) < n {
                hi *= 2.0;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if below(mid) >= n {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo < 1e-13 * hi {
                    break;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Richardson extrapolation of the finite-difference eigenvalues from meshes
/// `m` and `2m`.
pub fn fd_pencil_richardson(q: &dyn Fn(f64) -> f64, r: &dyn Fn(f64) -> f64, count: usize, m: usize) -> Vec<f64> {
    let coarse = fd_pencil_eigenvalues(q, r, count, m);
    let fine = fd_pencil_eigenvalues(q, r, count, 2 * m);
    coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect()
}

/// Direct RK4 integration of `u'' = (q + 2λr - λ²)u`, `u(0) = 0`, `u'(0) = 1`.
/// Returns the unwrapped angle `atan2(λu, u')` at `x = 1` and the interior
/// sign changes of `u`, located by cubic Hermite interpolation.
pub fn shoot_p2(q: &dyn Fn(f64) -> f64, r: &dyn Fn(f64) -> f64, lambda: f64, steps: usize) -> (f64, Vec<f64>) {
    let h = 1.0 / steps as f64;
    let f = |x: f64, y: [f64; 2]| [y[1], (q(x) + 2.0 * lambda * r(x) - lambda * lambda) * y[0]];
    let mut y = [0.0, 1.0];
    let mut angle = 0.0f64;
    let mut zeros = Vec::new();
    for k in 0..steps {
        let x = k as f64 * h;
        let k1 = f(x, y);
        let k2 = f(x + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = f(x + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = f(x + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        let next = [
            y[0] + h * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]) / 6.0,
            y[1] + h * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]) / 6.0,
        ];
        let a0 = (lambda * y[0]).atan2(y[1]);
        let a1 = (lambda * next[0]).atan2(next[1]);
        let mut d = a1 - a0;
        if d < -PI {
            d += 2.0 * PI;
        } else if d > PI {
            d -= 2.0 * PI;
        }
        angle += d;
        if k + 1 < steps && y[0] != 0.0 && y[0].signum() != next[0].signum() && next[0] != 0.0 {
            // Hermite cubic on the step, solved by bisection.
            let (u0, u1, d0, d1) = (y[0], next[0], y[1] * h, next[1] * h);
            let cubic = |t: f64| {
                let t2 = t * t;
                let omt = 1.0 - t;
                (1.0 + 2.0 * t) * omt * omt * u0 + t * omt * omt * d0 + t2 * (3.0 - 2.0 * t) * u1 + t2 * (t - 1.0) * d1
            };
            let (mut a, mut b) = (0.0, 1.0);
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                if cubic(m).signum() == u0.signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            zeros.push(x + 0.5 * (a + b) * h);
        }
        y = next;
    }
    (angle, zeros)
}

/// Closed-form eigenvalue of the constant pencil at `p = 2`.
pub fn constant_pencil(c1: f64, c2: f64, n: usize) -> f64 {
    let npi = n as f64 * PI;
    c2 + (c2 * c2 + c1 + npi * npi).sqrt()
}
