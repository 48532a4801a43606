//! Exact solution of the half-space problem assembled from the discrete
//! zeros, the factor function and the continuous-spectrum coefficient.
//!
//! With `e(0) = 1` the expansion reads
//!
//! ```text
//! e(x)   = a z0 [ Σ_k -C_k e^{-z0 x/η_k}/(η_k X(η_k)) + ∫₀^∞ e^{-z0 x/η} ρ(η)/η dη ]
//! h(x,μ) = -a Σ_k C_k e^{-z0 x/η_k}/(X(η_k)(η_k - μ))
//!          + a P∫₀^∞ e^{-z0 x/η} ρ(η)/(η - μ) dη + [μ > 0] λ(μ) A(μ) e^{-z0 x/μ}
//! ```
//!
//! where `ρ(η) = η³ e^{-η²} A(η)/√π` and
//!
//! ```text
//! A(η) = -a/(X⁻(η) λ⁺(η)) · Σ_k C_k/(η - η_k).
//! ```
//!
//! Index 0: `C₀ = -η₀ X(0)/(a z0)`. Index 1: `C₀ = X(0)/(a z0 (1/η₁ - 1/η₀))`,
//! `C₁ = -C₀`. The discrete amplitudes are `A_k = -√π C_k/(η_k³ e^{-η_k²} X(η_k))`.
//!
//! The wall gradient follows from the factor function alone,
//! `e'(0) = z0 [X'(0)/X(0) - Σ_k 1/η_k]`, and the surface impedance, in
//! units of `1/c`, is `Z = 4πiQ/(z0 e'(0))`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dispersion::{self, Dispersion};
use crate::error::{Result, SkinError};
use crate::factor::FactorRep;
use crate::params::KineticParams;
use crate::quadrature::{adaptive_gk, Density, PanelGrid};
use crate::specfun::{HalfPlaneSide, q_value};
use crate::spectrum::{self, SpectrumReport};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Surface impedance and the intermediate quantities it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpedanceReport {
    /// Z in units of 1/c.
    pub z: Complex64,
    pub e_prime_0: Complex64,
    /// X'(0)/X(0)
    pub logderiv: Complex64,
    pub kappa: i32,
    pub zeros: Vec<Complex64>,
}

/// Discrete-spectrum coefficients for `e(0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteCoefficients {
    pub zeros: Vec<Complex64>,
    /// X(η_k)
    pub x_at_zeros: Vec<Complex64>,
    pub c: Vec<Complex64>,
    pub a: Vec<Complex64>,
    pub x0: Complex64,
}

/// Field profile with the coefficient payload.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileTable {
    pub x: Vec<f64>,
    pub e: Vec<Complex64>,
    pub coefficients: DiscreteCoefficients,
    /// `(η, A(η))` samples of the continuous coefficient.
    pub continuous: Vec<(f64, Complex64)>,
    pub warnings: Vec<String>,
}

impl ProfileTable {
    /// Rescale to a prescribed wall gradient `e'(0) = es_prime`.
    pub fn rescaled(&self, e_prime_0: Complex64, es_prime: Complex64) -> Self {
        let k = es_prime / e_prime_0;
        let mut out = self.clone();
        for v in &mut out.e {
            *v *= k;
        }
        out
    }
}

/// Compute C_k, A_k from the zeros and the factor function.
pub fn discrete_coefficients(kp: &KineticParams, spec: &SpectrumReport, rep: &FactorRep) -> Result<DiscreteCoefficients> {
    if spec.kappa != rep.kappa() {
        return Err(SkinError::Inconsistency {
            stage: "solution",
            detail: format!("spectrum index {} differs from factor index {}", spec.kappa, rep.kappa()),
        });
    }
    let az0 = kp.a() * kp.z0();
    let x0 = rep.x_at_zero();
    let zeros = spec.zeros.clone();
    let x_at_zeros: Vec<Complex64> = zeros.iter().map(|&z| rep.x_value(z)).collect::<Result<_>>()?;
    let c = match spec.kappa {
        0 => vec![-zeros[0] * x0 / az0],
        1 => {
            let (e0, e1) = (zeros[0], zeros[1]);
            if (e0 - e1).norm() < 1e-8 {
                return Err(SkinError::DegenerateSpectrum(format!("{e0} and {e1}")));
            }
            let c0 = x0 / (az0 * (1.0 / e1 - 1.0 / e0));
            vec![c0, -c0]
        }
        k => return Err(SkinError::Inconsistency { stage: "solution", detail: format!("index {k}") }),
    };
    let a = zeros
        .iter()
        .zip(&x_at_zeros)
        .zip(&c)
        .map(|((&eta, &xk), &ck)| -SQRT_PI * ck / (eta.powu(3) * (-eta * eta).exp() * xk))
        .collect();
    Ok(DiscreteCoefficients { zeros, x_at_zeros, c, a, x0 })
}

/// The complete analytic solution for one parameter point.
#[derive(Debug, Clone)]
pub struct Solution {
    kp: KineticParams,
    disp: Dispersion,
    spectrum: SpectrumReport,
    factor: FactorRep,
    coeffs: DiscreteCoefficients,
    rho: Density,
}

impl Solution {
    pub fn new(kp: &KineticParams) -> Result<Self> {
        if kp.q() == 0.0 {
            // allowed for the spectral structure; only Z itself needs Q > 0
        }
        let disp = dispersion::build_branch_table(kp)?;
        let kappa = disp.kappa()?;
        let spectrum = spectrum::find_discrete_zeros(kp, kappa)?;
        let factor = FactorRep::build(kp, &disp)?;
        let coeffs = discrete_coefficients(kp, &spectrum, &factor)?;
        let mut sol = Self {
            kp: *kp,
            disp,
            spectrum,
            factor,
            coeffs,
            rho: Density::new(PanelGrid::from_breaks(vec![0.0, 1.0]), vec![Complex64::new(0.0, 0.0); 16]),
        };
        sol.rho = sol.build_rho()?;
        Ok(sol)
    }

    fn build_rho(&self) -> Result<Density> {
        let failure = std::cell::RefCell::new(None);
        let f = |eta: f64| -> Complex64 {
            if eta <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            match self.continuous_coefficient(eta) {
                Ok(a) => q_value(eta) / PI * a,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    Complex64::new(f64::NAN, f64::NAN)
                }
            }
        };
        let t_max = self.factor.t_max();
        // extra breaks at the real parts of the zeros, where A(η) varies fastest
        let mut breaks = PanelGrid::graded(t_max, 14).breaks().to_vec();
        for z in &self.coeffs.zeros {
            if z.re > 0.0 && z.re < t_max {
                let w = z.im.abs().max(1e-6);
                for k in -6i32..=6 {
                    let b = z.re + (k as f64).signum() * w * 2f64.powi(k.abs() - 3);
                    if b > 0.0 && b < t_max {
                        breaks.push(b);
                    }
                }
            }
        }
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        let refined = PanelGrid::from_breaks(breaks).refine(&f, 1e-13, 20_000);
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let (grid, values) = refined?;
        Ok(Density::new(grid, values))
    }

    pub fn params(&self) -> &KineticParams {
        &self.kp
    }

    pub fn dispersion(&self) -> &Dispersion {
        &self.disp
    }

    pub fn spectrum(&self) -> &SpectrumReport {
        &self.spectrum
    }

    pub fn factor(&self) -> &FactorRep {
        &self.factor
    }

    pub fn coefficients(&self) -> &DiscreteCoefficients {
        &self.coeffs
    }

    pub fn kappa(&self) -> i32 {
        self.spectrum.kappa
    }

    fn pole_sum(&self, eta: Complex64) -> Complex64 {
        self.coeffs.zeros.iter().zip(&self.coeffs.c).map(|(&z, &c)| c / (eta - z)).sum()
    }

    /// A(η) for 0 < η; zero beyond the quadrature range.
    pub fn continuous_coefficient(&self, eta: f64) -> Result<Complex64> {
        if eta <= 0.0 || eta >= self.factor.t_max() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let xm = self.factor.x_boundary(eta, HalfPlaneSide::Below)?;
        let (lp, _) = self.disp.boundary(eta)?;
        Ok(-self.kp.a() / (xm * lp) * self.pole_sum(Complex64::new(eta, 0.0)))
    }

    /// A(η) through the jump of `1/X` across the cut.
    pub fn continuous_coefficient_from_jump(&self, eta: f64) -> Result<Complex64> {
        let xp = self.factor.x_boundary(eta, HalfPlaneSide::Above)?;
        let xm = self.factor.x_boundary(eta, HalfPlaneSide::Below)?;
        if (xp - xm).norm() < 1e-13 * xp.norm() {
            return Err(SkinError::NonConvergence {
                stage: "solution",
                detail: format!("X⁺ and X⁻ coincide at {eta}; jump form is ill-conditioned"),
            });
        }
        let jump = 1.0 / xp - 1.0 / xm;
        let den = 2.0 * SQRT_PI * I * eta.powi(3) * (-eta * eta).exp();
        Ok(jump * self.pole_sum(Complex64::new(eta, 0.0)) / den)
    }

    /// Pole-elimination brackets `C_k/X(z) + A_k η_k³ e^{-η_k²}/√π` at `z = η_k`.
    pub fn pole_brackets(&self) -> Vec<Complex64> {
        let cf = &self.coeffs;
        (0..cf.zeros.len())
            .map(|k| {
                let eta = cf.zeros[k];
                cf.c[k] / cf.x_at_zeros[k] + cf.a[k] * eta.powu(3) * (-eta * eta).exp() / SQRT_PI
            })
            .collect()
    }

    /// C₀ through the amplitude `A₀` (index 0 only).
    pub fn c0_via_amplitude(&self) -> Option<Complex64> {
        if self.kappa() != 0 {
            return None;
        }
        let eta = self.coeffs.zeros[0];
        let x_eta = self.coeffs.x_at_zeros[0];
        let a0 = SQRT_PI * self.coeffs.x0 / (self.kp.a() * self.kp.z0() * x_eta * eta * eta * (-eta * eta).exp());
        Some(-a0 / SQRT_PI * (-eta * eta).exp() * eta.powu(3) * x_eta)
    }

    /// Left-hand side of the closure relation, which must equal `1/(a z0)`.
    pub fn closure(&self) -> Complex64 {
        let cf = &self.coeffs;
        let disc: Complex64 = (0..cf.zeros.len()).map(|k| -cf.c[k] / (cf.zeros[k] * cf.x_at_zeros[k])).sum();
        disc + self.rho.integrate_with(|t| Complex64::new(1.0 / t, 0.0))
    }

    /// e'(0) from the factor function.
    pub fn e_prime_zero(&self) -> Result<Complex64> {
        let l = self.factor.x_logderiv_at_zero()?;
        let s: Complex64 = self.coeffs.zeros.iter().map(|&z| 1.0 / z).sum();
        Ok(self.kp.z0() * (l - s))
    }

    /// e'(0) by differentiating the expansion term by term.
    pub fn e_prime_zero_from_expansion(&self) -> Complex64 {
        let cf = &self.coeffs;
        let z0 = self.kp.z0();
        let disc: Complex64 =
            (0..cf.zeros.len()).map(|k| -cf.c[k] / (cf.zeros[k] * cf.zeros[k] * cf.x_at_zeros[k])).sum();
        let cont = self.rho.integrate_with(|t| Complex64::new(1.0 / (t * t), 0.0));
        -self.kp.a() * z0 * z0 * (disc + cont)
    }

    pub fn impedance(&self) -> Result<ImpedanceReport> {
        if self.kp.q() == 0.0 {
            return Err(SkinError::ParameterDomain("Q = 0: the impedance prefactor vanishes".into()));
        }
        let logderiv = self.factor.x_logderiv_at_zero()?;
        let e_prime_0 = self.e_prime_zero()?;
        let z = 4.0 * PI * I * self.kp.q() / (self.kp.z0() * e_prime_0);
        Ok(ImpedanceReport { z, e_prime_0, logderiv, kappa: self.kappa(), zeros: self.coeffs.zeros.clone() })
    }

    /// e(x) from the expansion.
    pub fn e_value(&self, x: f64) -> Complex64 {
        let cf = &self.coeffs;
        let z0 = self.kp.z0();
        let disc: Complex64 = (0..cf.zeros.len())
            .map(|k| -cf.c[k] * (-z0 * x / cf.zeros[k]).exp() / (cf.zeros[k] * cf.x_at_zeros[k]))
            .sum();
        let cont = self.rho.integrate_with(|t| (-z0 * x / t).exp() / t);
        self.kp.a() * z0 * (disc + cont)
    }

    /// Slowest decay length among the modes, `max |η_k|/Re(z0/η_k)·|1/η_k|…`.
    pub fn decay_length(&self) -> f64 {
        let z0 = self.kp.z0();
        self.coeffs.zeros.iter().map(|&z| 1.0 / (z0 / z).re).fold(1.0, f64::max)
    }

    /// h(x, μ) from the expansion.
    pub fn distribution(&self, x: f64, mu: f64) -> Result<Complex64> {
        let g = self.rho.map(|t, v| if t > 0.0 { v * (-self.kp.z0() * x / t).exp() } else { v });
        self.distribution_with(&g, x, mu)
    }

    /// h(x, ·) evaluator that reuses the x-dependent density.
    pub fn distribution_at(&self, x: f64) -> impl Fn(f64) -> Result<Complex64> + '_ {
        let g = self.rho.map(move |t, v| if t > 0.0 { v * (-self.kp.z0() * x / t).exp() } else { v });
        move |mu| self.distribution_with(&g, x, mu)
    }

    fn distribution_with(&self, g: &Density, x: f64, mu: f64) -> Result<Complex64> {
        let a = self.kp.a();
        let z0 = self.kp.z0();
        let cf = &self.coeffs;
        let disc: Complex64 = (0..cf.zeros.len())
            .map(|k| -a * cf.c[k] * (-z0 * x / cf.zeros[k]).exp() / (cf.x_at_zeros[k] * (cf.zeros[k] - mu)))
            .sum();
        let cont = a * g.cauchy(Complex64::new(mu, 0.0), HalfPlaneSide::PrincipalValue);
        let delta_term = if mu > 0.0 && mu < self.factor.t_max() {
            let lam = dispersion::lambda_value(&self.kp, Complex64::new(mu, 0.0), HalfPlaneSide::PrincipalValue);
            lam * self.continuous_coefficient(mu)? * (-z0 * x / mu).exp()
        } else {
            Complex64::new(0.0, 0.0)
        };
        Ok(disc + cont + delta_term)
    }

    /// Current moment `(1/√π) ∫ e^{-μ²} h(x, μ) dμ`.
    pub fn current(&self, x: f64) -> Result<Complex64> {
        let h = self.distribution_at(x);
        let failure = std::cell::RefCell::new(None);
        let f = |mu: f64| match h(mu) {
            Ok(v) => v * (-mu * mu).exp(),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(f64::NAN, f64::NAN)
            }
        };
        let lim = 7.0;
        let neg = adaptive_gk(&f, -lim, 0.0, 1e-14, 1e-11);
        let pos = adaptive_gk(&f, 0.0, lim, 1e-14, 1e-11);
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        Ok((neg? + pos?) / SQRT_PI)
    }

    /// Weighted wall residual `√(∫_{μ>0} e^{-μ²}|h(0,μ)|² / ∫_{μ<0} e^{-μ²}|h(0,μ)|²)`.
    pub fn wall_residual(&self) -> Result<f64> {
        let h = self.distribution_at(0.0);
        let failure = std::cell::RefCell::new(None);
        let f = |mu: f64| match h(mu) {
            Ok(v) => Complex64::new(v.norm_sqr() * (-mu * mu).exp(), 0.0),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(f64::NAN, 0.0)
            }
        };
        let neg = adaptive_gk(&f, -7.0, 0.0, 1e-30, 1e-10);
        let neg = match (&*failure.borrow(), neg) {
            (None, Ok(v)) => v.re,
            (_, Err(e)) => return Err(e),
            (Some(e), _) => return Err(e.clone()),
        };
        // the positive side is ideally zero; resolve it relative to the other
        let pos = adaptive_gk(&f, 0.0, 7.0, 1e-20 * neg, 1e-6);
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        Ok((pos?.re / neg).sqrt())
    }

    /// Relative residual of `e'' + Q² e + iα J = 0` at `x`, with `e''` from
    /// Richardson-extrapolated central differences.
    pub fn field_residual(&self, x: f64) -> Result<f64> {
        let h = 0.04f64.min(0.5 * x);
        let ex = self.e_value(x);
        let d2 = |h: f64| (self.e_value(x + h) - 2.0 * ex + self.e_value(x - h)) / (h * h);
        let (a, b, c) = (d2(h), d2(h / 2.0), d2(h / 4.0));
        let r1 = (4.0 * b - a) / 3.0;
        let r2 = (4.0 * c - b) / 3.0;
        let e2 = (16.0 * r2 - r1) / 15.0;
        let q = self.kp.q();
        let lhs = e2 + q * q * self.e_value(x);
        let rhs = -I * self.kp.alpha() * self.current(x)?;
        Ok((lhs - rhs).norm() / rhs.norm().max(lhs.norm()))
    }

    /// Samples of A(η) on a uniform grid.
    pub fn continuous_samples(&self, n: usize) -> Result<Vec<(f64, Complex64)>> {
        let t = self.factor.t_max();
        (1..=n)
            .map(|i| {
                let eta = t * i as f64 / (n + 1) as f64;
                Ok((eta, self.continuous_coefficient(eta)?))
            })
            .collect()
    }
}

/// `∫ e^{-μ²} Φ(η, μ) dμ` evaluated by quadrature of the eigenfunction.
pub fn eigenfunction_moment(kp: &KineticParams, eta: f64) -> Result<Complex64> {
    // P∫ e^{-μ²}/(η - μ) dμ with the singular part subtracted symmetrically
    let c = (-eta * eta).exp();
    let r = 9.0 + eta.abs();
    let pv = adaptive_gk(
        |mu| {
            let d = eta - mu;
            if d.abs() < 1e-300 {
                Complex64::new(2.0 * eta * c, 0.0)
            } else {
                Complex64::new(((-mu * mu).exp() - c) / d, 0.0)
            }
        },
        eta - r,
        eta + r,
        1e-15,
        1e-14,
    )?;
    let lam = dispersion::lambda_value(kp, Complex64::new(eta, 0.0), HalfPlaneSide::PrincipalValue);
    Ok(kp.a() / SQRT_PI * eta.powi(3) * c * pv + lam * c)
}

/// Surface impedance through the full analytic pipeline.
pub fn impedance(kp: &KineticParams) -> Result<ImpedanceReport> {
    if kp.q() == 0.0 {
        return Err(SkinError::ParameterDomain("Q = 0: the impedance prefactor vanishes".into()));
    }
    Solution::new(kp)?.impedance()
}

/// e(x) on a grid, with the coefficient payload.
pub fn efield_profile(kp: &KineticParams, x_grid: &[f64]) -> Result<ProfileTable> {
    let sol = Solution::new(kp)?;
    profile_from(&sol, x_grid)
}

pub fn profile_from(sol: &Solution, x_grid: &[f64]) -> Result<ProfileTable> {
    if let Some(&bad) = x_grid.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
        return Err(SkinError::ParameterDomain(format!("x = {bad} must be finite and nonnegative")));
    }
    let e: Vec<Complex64> = x_grid.par_iter().map(|&x| sol.e_value(x)).collect();
    let mut warnings = Vec::new();
    if let (Some(&xm), Some(&em)) = (x_grid.last(), e.last()) {
        let e0 = sol.e_value(0.0).norm();
        if em.norm() > 1e-6 * e0 {
            warnings.push(format!("|e(x_max = {xm})| = {:.3e} exceeds 1e-6·|e(0)|; extend the grid", em.norm()));
        }
    }
    Ok(ProfileTable {
        x: x_grid.to_vec(),
        e,
        coefficients: sol.coefficients().clone(),
        continuous: sol.continuous_samples(64)?,
        warnings,
    })
}

/// h(x, μ) for a single point.
pub fn distribution(kp: &KineticParams, x: f64, mu: f64) -> Result<Complex64> {
    Solution::new(kp)?.distribution(x, mu)
}

/// Closed-form impedance of the collision-dominated limit, where the current
/// is slaved to the local field: `e'' + Q² e + (iα/z0) e = 0`.
pub fn local_impedance(kp: &KineticParams) -> Result<Complex64> {
    if kp.q() == 0.0 {
        return Err(SkinError::ParameterDomain("Q = 0: the impedance prefactor vanishes".into()));
    }
    let z0 = kp.z0();
    let k2 = -(I * kp.alpha() / z0 + kp.q() * kp.q());
    let mut k = k2.sqrt();
    if k.re < 0.0 {
        k = -k;
    }
    Ok(4.0 * PI * I * kp.q() / (z0 * (-k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kp(wt: f64, q: f64, alpha: f64) -> KineticParams {
        KineticParams::from_transport(wt, q, alpha).unwrap()
    }

    #[test]
    fn closure_and_wall_value() {
        for k in [kp(0.1, 1e-3, 1.0), kp(0.5, 1e-3, 1.0)] {
            let sol = Solution::new(&k).unwrap();
            let target = 1.0 / (k.a() * k.z0());
            assert!((sol.closure() - target).norm() < 1e-8 * target.norm(), "{} vs {target}", sol.closure());
            assert!((sol.e_value(0.0) - 1.0).norm() < 1e-8);
            let a = sol.e_prime_zero().unwrap();
            let b = sol.e_prime_zero_from_expansion();
            assert!((a - b).norm() < 1e-6 * a.norm(), "{a} vs {b}");
        }
    }

    #[test]
    fn algebraic_identities() {
        let sol = Solution::new(&kp(0.1, 1e-3, 1.0)).unwrap();
        let c0 = sol.coefficients().c[0];
        let alt = sol.c0_via_amplitude().unwrap();
        assert!((c0 - alt).norm() < 1e-10 * c0.norm());

        let sol = Solution::new(&kp(0.5, 1e-3, 10.0)).unwrap();
        assert_eq!(sol.kappa(), 1);
        let c = &sol.coefficients().c;
        assert_eq!(c[0] + c[1], Complex64::new(0.0, 0.0));
        for b in sol.pole_brackets() {
            assert!(b.norm() < 1e-9 * c[0].norm().max(1.0));
        }
        for &eta in &[0.3, 1.0, 2.2] {
            let a = sol.continuous_coefficient(eta).unwrap();
            let b = sol.continuous_coefficient_from_jump(eta).unwrap();
            assert!((a - b).norm() < 1e-8 * a.norm(), "eta={eta}: {a} vs {b}");
        }
    }

    #[test]
    fn normalization_identity() {
        let k = kp(0.4, 0.2, 3.0);
        for &eta in &[0.2, 0.9, 1.7, 3.1] {
            let lhs = eigenfunction_moment(&k, eta).unwrap();
            let rhs = (1.0 + k.b() * eta * eta) * (-eta * eta).exp();
            assert!((lhs - rhs).norm() < 1e-9 * rhs.norm().max(1e-3), "eta={eta}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn continuous_coefficient_small_eta() {
        let sol = Solution::new(&kp(0.1, 1e-3, 1.0)).unwrap();
        let mut prev = f64::INFINITY;
        for &eta in &[0.1, 0.01, 0.001] {
            let v = (sol.continuous_coefficient(eta).unwrap() * q_value(eta)).norm();
            assert!(v.is_finite() && v < prev);
            prev = v;
        }
        assert_eq!(sol.continuous_coefficient(9.0).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn q_zero_rejected_for_impedance() {
        assert!(matches!(impedance(&kp(0.0, 0.0, 1.0)), Err(SkinError::ParameterDomain(_))));
    }

    #[test]
    fn local_limit_closed_form() {
        let k = kp(0.5, 1e-3, 1e-3);
        let zl = local_impedance(&k).unwrap();
        let za = impedance(&k).unwrap().z;
        assert!((za - zl).norm() < 0.01 * zl.norm(), "{za} vs {zl}");
    }
}
