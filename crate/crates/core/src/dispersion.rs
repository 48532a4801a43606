//! The dispersion function `λ(z) = 1 + b z² - a p(z)`, its boundary values on
//! the real axis and the Riemann–Hilbert coefficient `G = λ⁺/λ⁻`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, SkinError};
use crate::params::KineticParams;
use crate::specfun::{p_derivative, p_upper, p_upper_derivative, p_value, HalfPlaneSide};

/// Default upper end of the velocity integrals.
pub const DEFAULT_TAU_MAX: f64 = 8.0;

/// Upper end of the velocity integrals, overridable through `SKINFX_TAU_MAX`.
pub fn tau_max() -> f64 {
    std::env::var("SKINFX_TAU_MAX")
        .ok()
        .and_then(|s| s.trim().parse::<f64>().ok())
        .filter(|t| t.is_finite() && *t >= 4.0)
        .unwrap_or(DEFAULT_TAU_MAX)
}

/// λ(z), taking the limit from `side` on the real axis.
pub fn lambda_value(kp: &KineticParams, z: Complex64, side: HalfPlaneSide) -> Complex64 {
    1.0 + kp.b() * z * z - kp.a() * p_value(z, side)
}

/// λ'(z) on the branch selected as in [`lambda_value`].
pub fn lambda_derivative(kp: &KineticParams, z: Complex64, side: HalfPlaneSide) -> Complex64 {
    2.0 * kp.b() * z - kp.a() * p_derivative(z, side)
}

/// Entire continuation of λ from the upper half-plane.
pub fn lambda_upper(kp: &KineticParams, z: Complex64) -> Complex64 {
    1.0 + kp.b() * z * z - kp.a() * p_upper(z)
}

pub fn lambda_upper_derivative(kp: &KineticParams, z: Complex64) -> Complex64 {
    2.0 * kp.b() * z - kp.a() * p_upper_derivative(z)
}

/// Entire continuation of λ from the lower half-plane, `λ_upper(-z)`.
pub fn lambda_lower(kp: &KineticParams, z: Complex64) -> Complex64 {
    lambda_upper(kp, -z)
}

pub fn lambda_lower_derivative(kp: &KineticParams, z: Complex64) -> Complex64 {
    -lambda_upper_derivative(kp, -z)
}

/// Threshold below which a boundary value of λ counts as vanishing.
fn degenerate_floor(kp: &KineticParams, mu: f64) -> f64 {
    1e-13 * (1.0 + kp.b().norm() * mu * mu)
}

/// `(λ⁺(μ), λ⁻(μ))`, rejecting points where either vanishes.
pub fn boundary_values(kp: &KineticParams, mu: f64) -> Result<(Complex64, Complex64)> {
    let z = Complex64::new(mu, 0.0);
    let lp = lambda_value(kp, z, HalfPlaneSide::Above);
    let lm = lambda_value(kp, z, HalfPlaneSide::Below);
    let floor = degenerate_floor(kp, mu);
    let m = lp.norm().min(lm.norm());
    if !(m > floor) {
        return Err(SkinError::DegenerateCoefficient { mu, magnitude: m });
    }
    Ok((lp, lm))
}

/// G(μ) = λ⁺(μ)/λ⁻(μ)
pub fn g_coefficient(kp: &KineticParams, mu: f64) -> Result<Complex64> {
    let (lp, lm) = boundary_values(kp, mu)?;
    Ok(lp / lm)
}

/// Continuous arguments of λ⁺ and λ⁻ tabulated along `[0, T]`.
///
/// The arguments are tracked through an adaptively refined table so that the
/// increment of `arg G` and hence the index are unambiguous.
#[derive(Debug, Clone)]
pub struct BranchTable {
    mu: Vec<f64>,
    arg_plus: Vec<f64>,
    arg_minus: Vec<f64>,
    t_max: f64,
}

const MAX_ARG_STEP: f64 = PI / 8.0;
const NODE_BUDGET: usize = 200_000;

impl BranchTable {
    /// Build the table from boundary-value functions of the two limits.
    pub fn build_with<F>(boundary: F, t_max: f64) -> Result<Self>
    where
        F: Fn(f64) -> Result<(Complex64, Complex64)>,
    {
        let n_seed = 512;
        let seeds: Vec<f64> = (0..n_seed)
            .map(|i| 0.5 * t_max * (1.0 - (PI * i as f64 / (n_seed - 1) as f64).cos()))
            .collect();
        let mut mu = vec![seeds[0]];
        let (lp0, lm0) = boundary(seeds[0])?;
        let mut vals = vec![(lp0, lm0)];
        for &target in &seeds[1..] {
            // refine the step from the last accepted node to `target`
            let mut stack = vec![target];
            while let Some(&next) = stack.last() {
                let prev = *mu.last().unwrap();
                let (lpp, lmp) = *vals.last().unwrap();
                let (lpn, lmn) = boundary(next)?;
                let dp = (lpn / lpp).arg().abs();
                let dm = (lmn / lmp).arg().abs();
                let dl = (lpn.norm() / lpp.norm()).ln().abs().max((lmn.norm() / lmp.norm()).ln().abs());
                let fine = next - prev < 1e-12 * (1.0 + prev);
                if (dp > MAX_ARG_STEP || dm > MAX_ARG_STEP || dl > std::f64::consts::LN_2) && !fine {
                    stack.push(0.5 * (prev + next));
                } else {
                    stack.pop();
                    mu.push(next);
                    vals.push((lpn, lmn));
                    if mu.len() > NODE_BUDGET {
                        return Err(SkinError::NonConvergence {
                            stage: "dispersion",
                            detail: format!("argument tracking exceeded {NODE_BUDGET} nodes near mu = {next}"),
                        });
                    }
                }
            }
        }
        let track = |sel: fn(&(Complex64, Complex64)) -> Complex64| {
            let mut out = Vec::with_capacity(vals.len());
            let mut acc = sel(&vals[0]).arg();
            out.push(acc);
            for w in vals.windows(2) {
                acc += (sel(&w[1]) / sel(&w[0])).arg();
                out.push(acc);
            }
            out
        };
        let arg_plus = track(|v| v.0);
        let arg_minus = track(|v| v.1);
        Ok(Self { mu, arg_plus, arg_minus, t_max })
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.mu
    }

    /// Continuous `arg G` at the table nodes, zero at `μ = 0`.
    pub fn arg_g_nodes(&self) -> Vec<f64> {
        let base = self.arg_plus[0] - self.arg_minus[0];
        self.arg_plus.iter().zip(&self.arg_minus).map(|(p, m)| p - m - base).collect()
    }

    /// Total increment of `arg G` over `[0, T]`.
    pub fn arg_increment(&self) -> f64 {
        *self.arg_g_nodes().last().unwrap()
    }

    /// Linear interpolation of the continuous `arg G`.
    pub fn arg_g_interpolated(&self, mu: f64) -> f64 {
        let base = self.arg_plus[0] - self.arg_minus[0];
        let at = |i: usize| self.arg_plus[i] - self.arg_minus[i] - base;
        if mu <= self.mu[0] {
            return at(0);
        }
        let n = self.mu.len();
        if mu >= self.mu[n - 1] {
            return at(n - 1);
        }
        let i = self.mu.partition_point(|&m| m <= mu) - 1;
        let s = (mu - self.mu[i]) / (self.mu[i + 1] - self.mu[i]);
        at(i) * (1.0 - s) + at(i + 1) * s
    }

    /// The index `κ = Δarg G / 2π`, checked to be an integer in `{0, 1}`.
    pub fn kappa(&self) -> Result<i32> {
        let turns = self.arg_increment() / (2.0 * PI);
        let k = turns.round();
        if (turns - k).abs() > 0.05 {
            return Err(SkinError::SpectralBoundary(format!(
                "arg G increment is {turns:.4} turns, not close to an integer"
            )));
        }
        let k = k as i32;
        if !(0..=1).contains(&k) {
            return Err(SkinError::SpectralBoundary(format!("index {k} outside the supported range {{0, 1}}")));
        }
        Ok(k)
    }

    /// Continuous branch of `ln G(μ)` given the value `G(μ)`.
    pub fn ln_g_from(&self, mu: f64, g: Complex64) -> Complex64 {
        let principal = g.ln();
        let target = self.arg_g_interpolated(mu);
        let m = ((target - principal.im) / (2.0 * PI)).round();
        Complex64::new(principal.re, principal.im + 2.0 * PI * m)
    }
}

/// λ-specific table with `ln G` evaluation.
#[derive(Debug, Clone)]
pub struct Dispersion {
    kp: KineticParams,
    table: BranchTable,
}

impl Dispersion {
    pub fn new(kp: &KineticParams, t_max: f64) -> Result<Self> {
        let table = BranchTable::build_with(|mu| boundary_values(kp, mu), t_max)?;
        Ok(Self { kp: *kp, table })
    }

    pub fn params(&self) -> &KineticParams {
        &self.kp
    }

    pub fn table(&self) -> &BranchTable {
        &self.table
    }

    pub fn kappa(&self) -> Result<i32> {
        self.table.kappa()
    }

    /// ln G on the continuous branch that vanishes at `μ = 0`.
    pub fn ln_g(&self, mu: f64) -> Result<Complex64> {
        let g = g_coefficient(&self.kp, mu)?;
        Ok(self.table.ln_g_from(mu, g))
    }

    pub fn g(&self, mu: f64) -> Result<Complex64> {
        g_coefficient(&self.kp, mu)
    }

    pub fn boundary(&self, mu: f64) -> Result<(Complex64, Complex64)> {
        boundary_values(&self.kp, mu)
    }
}

/// Convenience wrapper with the default (or environment) `T`.
pub fn build_branch_table(kp: &KineticParams) -> Result<Dispersion> {
    Dispersion::new(kp, tau_max())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::q_value;

    fn kp(wt: f64, q: f64, alpha: f64) -> KineticParams {
        KineticParams::from_transport(wt, q, alpha).unwrap()
    }

    #[test]
    fn lambda_is_one_at_origin() {
        let k = kp(0.5, 0.01, 3.0);
        for side in [HalfPlaneSide::Above, HalfPlaneSide::Below, HalfPlaneSide::PrincipalValue] {
            assert!((lambda_value(&k, Complex64::new(0.0, 0.0), side) - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn boundary_values_differ_by_the_jump() {
        let k = kp(0.3, 0.02, 2.0);
        for &mu in &[0.2, 0.9, 1.5, 3.0] {
            let (lp, lm) = boundary_values(&k, mu).unwrap();
            // λ⁺ - λ⁻ = -a (p⁺ - p⁻) = 2i a q
            let jump = 2.0 * Complex64::new(0.0, 1.0) * k.a() * q_value(mu);
            assert!((lp - lm - jump).norm() < 1e-13 * (1.0 + lp.norm()));
            let pv = lambda_value(&k, Complex64::new(mu, 0.0), HalfPlaneSide::PrincipalValue);
            assert!((0.5 * (lp + lm) - pv).norm() < 1e-13 * (1.0 + pv.norm()));
        }
    }

    #[test]
    fn entire_continuations_agree_with_branches() {
        let k = kp(1.2, 0.0, 0.7);
        let z = Complex64::new(0.8, 0.4);
        assert!((lambda_upper(&k, z) - lambda_value(&k, z, HalfPlaneSide::Above)).norm() < 1e-14);
        assert!((lambda_lower(&k, z.conj()) - lambda_value(&k, z.conj(), HalfPlaneSide::Above)).norm() < 1e-13);
        let h = 1e-6;
        let fd = (lambda_lower(&k, z + h) - lambda_lower(&k, z - h)) / (2.0 * h);
        assert!((fd - lambda_lower_derivative(&k, z)).norm() < 1e-7);
    }

    #[test]
    fn g_tends_to_one() {
        let k = kp(0.5, 0.001, 1.0);
        assert!((g_coefficient(&k, 0.0).unwrap() - 1.0).norm() < 1e-15);
        assert!((g_coefficient(&k, 7.5).unwrap() - 1.0).norm() < 1e-20);
    }

    #[test]
    fn index_matches_simple_cases() {
        // weak anomaly: λ barely differs from 1, no winding
        let d = Dispersion::new(&kp(0.1, 0.0, 0.01), 8.0).unwrap();
        assert_eq!(d.kappa().unwrap(), 0);
        // δ real positive and small: inside the tongue of index one
        let wt = 1.0 / 3f64.sqrt();
        let z0 = Complex64::new(1.0, -wt);
        let alpha = (Complex64::new(0.0, 1.0) * z0 * z0 * z0).re / 0.5;
        let k = kp(wt, 0.0, alpha);
        assert!((k.delta().im).abs() < 1e-12 && (k.delta().re - 0.5).abs() < 1e-12);
        let d = Dispersion::new(&k, 8.0).unwrap();
        assert_eq!(d.kappa().unwrap(), 1);
    }

    #[test]
    fn ln_g_is_continuous_and_consistent() {
        let k = kp(0.6, 0.0, 1.0);
        let d = Dispersion::new(&k, 8.0).unwrap();
        let mut prev = d.ln_g(0.0).unwrap();
        assert!(prev.norm() < 1e-15);
        let mut mu: f64 = 0.0;
        while mu < 8.0 {
            mu += 0.001;
            let l = d.ln_g(mu.min(8.0)).unwrap();
            assert!((l - prev).norm() < 0.2, "jump at {mu}");
            assert!((l.exp() - d.g(mu.min(8.0)).unwrap()).norm() < 1e-12);
            prev = l;
        }
        let kap = d.kappa().unwrap() as f64;
        assert!((prev.im - 2.0 * PI * kap).abs() < 1e-6);
    }

    #[test]
    fn degenerate_point_is_reported() {
        let err = BranchTable::build_with(
            |mu| {
                if (mu - 1.0).abs() < 2e-2 {
                    Err(SkinError::DegenerateCoefficient { mu, magnitude: 0.0 })
                } else {
                    Ok((Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)))
                }
            },
            2.0,
        );
        assert!(matches!(err, Err(SkinError::DegenerateCoefficient { .. })));
    }

    #[test]
    fn synthetic_table_counts_turns() {
        // λ⁺ winds once, λ⁻ stays put
        let t = BranchTable::build_with(
            |mu| {
                let s = mu / 4.0;
                let phase = 2.0 * PI * (3.0 * s * s - 2.0 * s * s * s);
                Ok((Complex64::from_polar(1.0, phase), Complex64::new(1.0, 0.0)))
            },
            4.0,
        )
        .unwrap();
        assert_eq!(t.kappa().unwrap(), 1);
        assert!((t.arg_g_interpolated(2.0) - PI).abs() < 1e-3);
    }
}
