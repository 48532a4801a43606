//! Direct numerical solution of the original boundary value problem
//!
//! ```text
//! μ ∂h/∂x + z0 h = e(x),
//! e''(x) + Q² e(x) + iα J(x) = 0,     J = (1/√π) ∫ e^{-μ²} h dμ,
//! h(0, μ) = 0 for μ > 0,   e(0) = 1,   e(∞) = 0,
//! ```
//!
//! by discrete ordinates in μ and second-order finite differences in x.
//! Along each characteristic `h` is integrated exactly for a piecewise-linear
//! `e`, which makes `J` a dense linear function of the nodal values of `e`;
//! the whole system is assembled once and solved by LU.
//!
//! Nothing here uses the spectral machinery.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Result, SkinError};
use crate::params::KineticParams;
use crate::quadrature::gauss_legendre;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Discretization settings of the direct solver.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    /// Velocity nodes per direction (multiple of 8).
    pub n_mu: usize,
    /// Spatial cells.
    pub n_x: usize,
    /// Truncation of the half-space, in mean free paths.
    pub x_max: f64,
    /// Tolerance of the fixed-point fallback.
    pub fp_tol: f64,
    pub max_iter: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { n_mu: 160, n_x: 800, x_max: 20.0, fp_tol: 1e-12, max_iter: 500 }
    }
}

impl OracleConfig {
    /// Defaults with `x_max` sized from the local and anomalous skin depths.
    pub fn for_params(kp: &KineticParams) -> Self {
        let len = decay_length_estimate(kp);
        Self { x_max: (16.0 * len).max(20.0), ..Self::default() }
    }

    /// Enlarge `x_max` to cover a known slowest decay length.
    pub fn with_decay_hint(mut self, len: f64) -> Self {
        if len.is_finite() && len > 0.0 {
            self.x_max = self.x_max.max(16.0 * len);
        }
        self
    }
}

/// Larger of the local skin depth `1/Re k` and the anomalous one `α^{-1/3}`.
pub fn decay_length_estimate(kp: &KineticParams) -> f64 {
    let k = local_wavenumber(kp);
    let local = 1.0 / k.re.max(1e-300);
    let anomalous = kp.alpha().powf(-1.0 / 3.0);
    local.max(anomalous).max(1.0)
}

fn local_wavenumber(kp: &KineticParams) -> Complex64 {
    let k2 = -(I * kp.alpha() / kp.z0() + kp.q() * kp.q());
    let k = k2.sqrt();
    if k.re < 0.0 {
        -k
    } else {
        k
    }
}

/// Output of the direct solver.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub x: Vec<f64>,
    pub e: Vec<Complex64>,
    pub e_prime_0: Complex64,
    /// Z in units of 1/c.
    pub z: Complex64,
}

/// Half-range velocity nodes and weights of `e^{-μ²}/√π dμ` on `(0, 6.5]`.
fn velocity_rule(n_mu: usize) -> (Vec<f64>, Vec<f64>) {
    let per = 8;
    let panels = (n_mu / per).max(4);
    // geometric toward zero for the first third of the panels, then uniform
    let n_geo = panels / 3;
    let split = 0.5;
    let top = 6.5;
    let mut breaks = vec![0.0];
    for k in (0..n_geo).rev() {
        breaks.push(split * 0.25f64.powi(k as i32 + 1).max(1e-5));
    }
    breaks.dedup();
    breaks.push(split);
    let n_uni = panels - (breaks.len() - 1);
    for k in 1..=n_uni {
        breaks.push(split + (top - split) * k as f64 / n_uni as f64);
    }
    let (gx, gw) = gauss_legendre(per);
    let mut mu = Vec::new();
    let mut w = Vec::new();
    for p in breaks.windows(2) {
        let c = 0.5 * (p[0] + p[1]);
        let h = 0.5 * (p[1] - p[0]);
        for j in 0..per {
            let m = c + h * gx[j];
            mu.push(m);
            w.push(h * gw[j] * (-m * m).exp() / PI.sqrt());
        }
    }
    (mu, w)
}

/// Spatial grid on `[0, x_max]`, stretched so that the first cell is small.
fn spatial_grid(n: usize, x_max: f64, len: f64) -> Vec<f64> {
    let h0 = (2e-3 * (len / 10.0).max(1.0)).min(x_max / n as f64);
    // x(ξ) = x_max (e^{βξ} - 1)/(e^β - 1), pick β so that x(1/n) ≈ h0
    let first = |beta: f64| x_max * ((beta / n as f64).exp_m1()) / beta.exp_m1();
    let (mut lo, mut hi) = (1e-8, 60.0);
    if first(lo) <= h0 {
        return (0..=n).map(|i| x_max * i as f64 / n as f64).collect();
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if first(mid) > h0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let beta = 0.5 * (lo + hi);
    let mut x: Vec<f64> = (0..=n).map(|i| x_max * (beta * i as f64 / n as f64).exp_m1() / beta.exp_m1()).collect();
    x[n] = x_max;
    x
}

/// `(1 - e^{-s}(1 + s))/s`, accurate for small `|s|`.
fn phi1(s: Complex64) -> Complex64 {
    if s.norm() < 1e-3 {
        // s/2 - s²/3 + s³/8 - s⁴/30
        s * (0.5 - s * (1.0 / 3.0 - s * (1.0 / 8.0 - s / 30.0)))
    } else {
        (1.0 - (-s).exp() * (1.0 + s)) / s
    }
}

/// Cell weights `(e^{-s}, upstream, downstream)` of the exact characteristic
/// step for a linear source.
fn cell_weights(z0: Complex64, dx: f64, mu: f64) -> (Complex64, Complex64, Complex64) {
    let s = z0 * dx / mu;
    let decay = (-s).exp();
    let p1 = phi1(s);
    let one_minus = if s.norm() < 1e-3 { s * (1.0 - s * (0.5 - s / 6.0)) } else { 1.0 - decay };
    (decay, p1 / z0, (one_minus - p1) / z0)
}

/// Dense matrix `M` with `J_i = Σ_j M_ij e_j`.
fn current_matrix(z0: Complex64, x: &[f64], mu: &[f64], w: &[f64]) -> Vec<Complex64> {
    let n = x.len();
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    let mut row = vec![Complex64::new(0.0, 0.0); n];
    for (&mu_k, &w_k) in mu.iter().zip(w) {
        // μ > 0, sweep forward from h(0) = 0
        row.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for i in 1..n {
            let (d, up, down) = cell_weights(z0, x[i] - x[i - 1], mu_k);
            for v in &mut row[..i] {
                *v *= d;
            }
            row[i - 1] += up;
            row[i] += down;
            let mi = &mut m[i * n..(i + 1) * n];
            for j in 0..=i {
                mi[j] += w_k * row[j];
            }
        }
        // μ < 0, sweep backward from h(x_max) = 0
        row.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for i in (0..n - 1).rev() {
            let (d, up, down) = cell_weights(z0, x[i + 1] - x[i], mu_k);
            for v in &mut row[i + 1..] {
                *v *= d;
            }
            row[i + 1] += up;
            row[i] += down;
            let mi = &mut m[i * n..(i + 1) * n];
            for j in i..n {
                mi[j] += w_k * row[j];
            }
        }
    }
    m
}

/// Kinetic response `h(x_i, μ)` to prescribed nodal values of `e`.
pub fn characteristic_sweep(z0: Complex64, x: &[f64], e: &[Complex64], mu: f64) -> Vec<Complex64> {
    let n = x.len();
    let mut h = vec![Complex64::new(0.0, 0.0); n];
    if mu > 0.0 {
        for i in 1..n {
            let (d, up, down) = cell_weights(z0, x[i] - x[i - 1], mu);
            h[i] = d * h[i - 1] + up * e[i - 1] + down * e[i];
        }
    } else if mu < 0.0 {
        for i in (0..n - 1).rev() {
            let (d, up, down) = cell_weights(z0, x[i + 1] - x[i], -mu);
            h[i] = d * h[i + 1] + up * e[i + 1] + down * e[i];
        }
    } else {
        for i in 0..n {
            h[i] = e[i] / z0;
        }
    }
    h
}

/// Solve the boundary value problem directly.
pub fn solve_bvp(kp: &KineticParams, cfg: &OracleConfig) -> Result<OracleSolution> {
    if cfg.n_mu < 32 || cfg.n_mu % 8 != 0 {
        return Err(SkinError::ParameterDomain(format!("n_mu = {} must be a multiple of 8, at least 32", cfg.n_mu)));
    }
    if cfg.n_x < 20 || !(cfg.x_max > 0.0) {
        return Err(SkinError::ParameterDomain("spatial grid too small".into()));
    }
    if kp.q() == 0.0 {
        return Err(SkinError::ParameterDomain("Q = 0: the impedance prefactor vanishes".into()));
    }
    let z0 = kp.z0();
    let q2 = kp.q() * kp.q();
    let ia = I * kp.alpha();
    let x = spatial_grid(cfg.n_x, cfg.x_max, decay_length_estimate(kp));
    let (mu, w) = velocity_rule(cfg.n_mu);
    let n = x.len();
    let m = current_matrix(z0, &x, &mu, &w);

    // unknowns e_1 … e_{n-2}; e_0 = 1, e_{n-1} = 0
    let nu = n - 2;
    let mut a = DMatrix::<Complex64>::zeros(nu, nu);
    let mut rhs = DVector::<Complex64>::zeros(nu);
    for r in 0..nu {
        let i = r + 1;
        let hl = x[i] - x[i - 1];
        let hr = x[i + 1] - x[i];
        let cl = 2.0 / (hl * (hl + hr));
        let cr = 2.0 / (hr * (hl + hr));
        let cc = -(cl + cr) + q2;
        for c in 0..nu {
            a[(r, c)] = ia * m[i * n + c + 1];
        }
        a[(r, r)] += cc;
        if r > 0 {
            a[(r, r - 1)] += cl;
        }
        if r + 1 < nu {
            a[(r, r + 1)] += cr;
        }
        // known e_0 = 1
        rhs[r] = -(ia * m[i * n]);
        if i == 1 {
            rhs[r] -= cl;
        }
    }
    let sol = match a.clone().lu().solve(&rhs) {
        Some(s) if s.iter().all(|v| v.is_finite()) => s,
        _ => fixed_point(&a, &rhs, cfg)?,
    };
    let mut e = Vec::with_capacity(n);
    e.push(Complex64::new(1.0, 0.0));
    e.extend(sol.iter().copied());
    e.push(Complex64::new(0.0, 0.0));

    // one-sided gradient corrected with e''(0) from the field equation
    let j0: Complex64 = (0..n).map(|j| m[j] * e[j]).sum();
    let e2_0 = -(q2 * e[0] + ia * j0);
    let h0 = x[1] - x[0];
    let e_prime_0 = (e[1] - e[0]) / h0 - 0.5 * h0 * e2_0;

    let tail_start = x.partition_point(|&xi| xi < 0.8 * cfg.x_max);
    let tail = e[tail_start..].iter().map(|v| v.norm()).fold(0.0, f64::max);
    if tail > 1e-5 {
        return Err(SkinError::Truncation(format!(
            "|e| reaches {tail:.2e} beyond 0.8·x_max = {:.3}; increase x_max",
            0.8 * cfg.x_max
        )));
    }
    let z = 4.0 * PI * I * kp.q() / (z0 * e_prime_0);
    Ok(OracleSolution { x, e, e_prime_0, z })
}

/// Jacobi-preconditioned fixed-point iteration used when LU fails.
fn fixed_point(a: &DMatrix<Complex64>, rhs: &DVector<Complex64>, cfg: &OracleConfig) -> Result<DVector<Complex64>> {
    let n = rhs.len();
    let mut x = DVector::<Complex64>::zeros(n);
    for _ in 0..cfg.max_iter {
        let r = rhs - a * &x;
        let mut delta = 0.0f64;
        for i in 0..n {
            let step = r[i] / a[(i, i)];
            x[i] += step;
            delta = delta.max(step.norm());
        }
        if !delta.is_finite() {
            break;
        }
        if delta < cfg.fp_tol {
            return Ok(x);
        }
    }
    Err(SkinError::OracleDivergence(format!("fixed-point iteration did not converge in {} steps", cfg.max_iter)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kp(wt: f64, q: f64, alpha: f64) -> KineticParams {
        KineticParams::from_transport(wt, q, alpha).unwrap()
    }

    #[test]
    fn velocity_rule_integrates_maxwellian_moments() {
        let (mu, w) = velocity_rule(160);
        let m0: f64 = w.iter().sum();
        let m2: f64 = mu.iter().zip(&w).map(|(m, w)| m * m * w).sum();
        assert!((m0 - 0.5).abs() < 1e-12);
        assert!((m2 - 0.25).abs() < 1e-12);
        assert!(mu.iter().all(|&m| m > 0.0 && m < 6.5));
    }

    #[test]
    fn characteristic_step_is_exact_for_linear_field() {
        // e = 1 - x/L gives h = (1 - x/L)/z0 + μ/(z0² L) - (1/z0 + μ/(z0² L)) e^{-z0 x/μ} for μ > 0
        let z0 = Complex64::new(1.0, -0.7);
        let l = 3.0;
        let x: Vec<f64> = (0..=37).map(|i| l * (i as f64 / 37.0).powf(1.7)).collect();
        let e: Vec<Complex64> = x.iter().map(|&xi| Complex64::new(1.0 - xi / l, 0.0)).collect();
        for &mu in &[1e-4, 0.03, 0.8, 4.0] {
            let h = characteristic_sweep(z0, &x, &e, mu);
            for (i, &xi) in x.iter().enumerate() {
                let exact = (1.0 - xi / l) / z0 + mu / (z0 * z0 * l) - (1.0 / z0 + mu / (z0 * z0 * l)) * (-z0 * xi / mu).exp();
                assert!((h[i] - exact).norm() < 1e-13, "mu={mu} x={xi} {}", (h[i] - exact).norm());
            }
            // backward: h = (1 - x/L)/z0 - μ'/(z0² L)(1 - e^{-z0 (L-x)/μ'}) with μ' = |μ|
            let h = characteristic_sweep(z0, &x, &e, -mu);
            for (i, &xi) in x.iter().enumerate() {
                let exact = (1.0 - xi / l) / z0 - mu / (z0 * z0 * l) * (1.0 - (-z0 * (l - xi) / mu).exp());
                assert!((h[i] - exact).norm() < 1e-13, "mu=-{mu} x={xi} {}", (h[i] - exact).norm());
            }
        }
    }

    #[test]
    fn kinetic_equation_residual_is_small() {
        let z0 = Complex64::new(1.0, -0.5);
        let n = 40000;
        let x: Vec<f64> = (0..=n).map(|i| 5.0 * i as f64 / n as f64).collect();
        let e: Vec<Complex64> = x.iter().map(|&xi| Complex64::new((-xi).exp() * (2.0 * xi).cos(), 0.0)).collect();
        for &mu in &[0.7, -0.7, 2.5] {
            let h = characteristic_sweep(z0, &x, &e, mu);
            let d = x[1] - x[0];
            let mut worst = 0.0f64;
            for i in 2..x.len() - 2 {
                let dh = (h[i - 2] - 8.0 * h[i - 1] + 8.0 * h[i + 1] - h[i + 2]) / (12.0 * d);
                worst = worst.max((mu * dh + z0 * h[i] - e[i]).norm());
            }
            assert!(worst < 1e-8, "mu={mu} residual {worst:e}");
        }
    }

    #[test]
    fn weak_coupling_matches_local_solution() {
        let k = kp(0.5, 1e-3, 1e-3);
        let cfg = OracleConfig::for_params(&k);
        let s = solve_bvp(&k, &cfg).unwrap();
        let kk = local_wavenumber(&k);
        let zl = 4.0 * PI * I * k.q() / (k.z0() * (-kk));
        assert!((s.z - zl).norm() < 0.01 * zl.norm(), "{} vs {zl}", s.z);
    }

    #[test]
    fn rejects_bad_config() {
        let k = kp(0.5, 1e-3, 1.0);
        assert!(solve_bvp(&k, &OracleConfig { n_mu: 30, ..OracleConfig::default() }).is_err());
        assert!(solve_bvp(&kp(0.5, 0.0, 1.0), &OracleConfig::default()).is_err());
    }

    #[test]
    fn short_domain_is_reported() {
        let k = kp(0.1, 1e-3, 0.01);
        let cfg = OracleConfig { x_max: 5.0, n_x: 200, ..OracleConfig::default() };
        assert!(matches!(solve_bvp(&k, &cfg), Err(SkinError::Truncation(_))));
    }
}
