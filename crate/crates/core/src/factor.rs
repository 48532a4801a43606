//! Canonical factor function of the Riemann–Hilbert problem
//! `X⁺(μ) = G(μ)·X⁻(μ)` on the half-line.
//!
//! Index 0: `X = exp V`, `V(z) = (1/2πi) ∫₀^∞ ln G(τ)/(τ - z) dτ`.
//!
//! Index 1: `X = z⁻¹ exp V` with the integrand `ln G - 2πi`. The constant
//! `2πi` does not decay, so it is split off with the cubic step
//! `r(τ) = 1 - 3s² + 2s³`, `s = τ/T`, whose Cauchy transform over `[0, T]`
//! is elementary:
//!
//! ```text
//! ∫₀ᵀ r(τ)/(τ - z) dτ = r(z)·[ln(T - z) - ln(-z)] - 5/6 - 2z/T + 2z²/T².
//! ```
//!
//! The remainder `f₂ = ln G - 2πi(1 - r)` vanishes at both ends of `[0, T]`
//! and is integrated numerically. Folding the `z⁻¹` prefactor into the
//! logarithm gives
//!
//! ```text
//! X(z) = -exp( V₂(z) + 5/6 + 2z/T - 2z²/T² - r(z) ln(T - z) + (r(z) - 1) ln(-z) ),
//! ```
//!
//! which is regular at `z = 0`. `X(0)` is the limit along the negative real
//! axis.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::dispersion::Dispersion;
use crate::error::{Result, SkinError};
use crate::params::KineticParams;
use crate::quadrature::{Density, PanelGrid};
use crate::specfun::HalfPlaneSide;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const TWO_PI_I: Complex64 = Complex64 { re: 0.0, im: 2.0 * PI };

/// Distance from `[0, T]` below which off-axis evaluation is refused.
pub const NEAR_CUT: f64 = 1e-10;

type LnG = Arc<dyn Fn(f64) -> Result<Complex64> + Send + Sync>;

/// Tabulated factor function for one parameter point.
#[derive(Clone)]
pub struct FactorRep {
    kappa: i32,
    t_max: f64,
    ln_g: LnG,
    density: Density,
}

impl std::fmt::Debug for FactorRep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FactorRep")
            .field("kappa", &self.kappa)
            .field("t_max", &self.t_max)
            .field("panels", &self.density.grid().n_panels())
            .finish()
    }
}

fn step(tau: Complex64, t_max: f64) -> Complex64 {
    let s = tau / t_max;
    1.0 - 3.0 * s * s + 2.0 * s * s * s
}

impl FactorRep {
    /// Build from the dispersion data of a parameter point.
    pub fn build(kp: &KineticParams, disp: &Dispersion) -> Result<Self> {
        let _ = kp;
        let kappa = disp.kappa()?;
        let t_max = disp.table().t_max();
        let d = Arc::new(disp.clone());
        let ln_g: LnG = Arc::new(move |mu| d.ln_g(mu));
        Self::from_ln_g(ln_g, kappa, t_max)
    }

    /// Build from an arbitrary continuous branch of `ln G` on `[0, T]`.
    pub fn from_ln_g(ln_g: LnG, kappa: i32, t_max: f64) -> Result<Self> {
        if !(0..=1).contains(&kappa) {
            return Err(SkinError::Regularization(format!("index {kappa} not supported")));
        }
        let end = ln_g(t_max)?;
        let expected = TWO_PI_I * kappa as f64;
        if (end - expected).norm() > 1e-6 {
            return Err(SkinError::Regularization(format!(
                "ln G(T) = {end} does not match 2πi·{kappa}; T too small or index wrong"
            )));
        }
        let failure: RefCell<Option<SkinError>> = RefCell::new(None);
        let f = |tau: f64| -> Complex64 {
            match ln_g(tau) {
                Ok(v) => {
                    if kappa == 1 {
                        v - TWO_PI_I * (1.0 - step(Complex64::new(tau, 0.0), t_max))
                    } else {
                        v
                    }
                }
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    Complex64::new(f64::NAN, f64::NAN)
                }
            }
        };
        let refined = PanelGrid::graded(t_max, 14).refine(&f, 1e-13, 20_000);
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let (grid, values) = refined?;
        Ok(Self { kappa, t_max, ln_g, density: Density::new(grid, values) })
    }

    pub fn kappa(&self) -> i32 {
        self.kappa
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn grid(&self) -> &PanelGrid {
        self.density.grid()
    }

    /// Same factor with every quadrature panel split in two.
    pub fn doubled(&self) -> Result<Self> {
        let grid = self.density.grid().doubled();
        let kappa = self.kappa;
        let t_max = self.t_max;
        let mut values = Vec::with_capacity(grid.nodes().len());
        for &t in grid.nodes() {
            values.push(self.integrand(t)?);
        }
        Ok(Self { kappa, t_max, ln_g: self.ln_g.clone(), density: Density::new(grid, values) })
    }

    /// ln G on the regular branch.
    pub fn ln_g(&self, mu: f64) -> Result<Complex64> {
        (self.ln_g)(mu)
    }

    /// The numerically integrated density (ln G, or its regularized form).
    fn integrand(&self, mu: f64) -> Result<Complex64> {
        if mu < 0.0 || mu > self.t_max {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let l = (self.ln_g)(mu)?;
        Ok(if self.kappa == 1 { l - TWO_PI_I * (1.0 - step(Complex64::new(mu, 0.0), self.t_max)) } else { l })
    }

    fn check_off_cut(&self, z: Complex64) -> Result<()> {
        if z.im.abs() < NEAR_CUT && z.re >= -NEAR_CUT && z.re <= self.t_max + NEAR_CUT {
            return Err(SkinError::NearCut { re: z.re, im: z.im, tol: NEAR_CUT });
        }
        Ok(())
    }

    /// Numerical part `(1/2πi) ∫ f(τ)/(τ - z) dτ`.
    fn v_numeric(&self, z: Complex64, side: HalfPlaneSide) -> Complex64 {
        self.density.cauchy(z, side) / TWO_PI_I
    }

    /// Closed-form part for index one, everything in `ln X` besides `V₂`.
    fn closed_part(&self, z: Complex64, ln_t_minus_z: Complex64, ln_minus_z: Complex64) -> Complex64 {
        let t = self.t_max;
        let r = step(z, t);
        5.0 / 6.0 + 2.0 * z / t - 2.0 * z * z / (t * t) - r * ln_t_minus_z + (r - 1.0) * ln_minus_z
    }

    /// V(z) off the cut. For index one this is the transform of `ln G - 2πi`.
    pub fn v_value(&self, z: Complex64) -> Result<Complex64> {
        self.check_off_cut(z)?;
        let v = self.v_numeric(z, HalfPlaneSide::PrincipalValue);
        if self.kappa == 0 {
            return Ok(v);
        }
        let t = self.t_max;
        let r = step(z, t);
        let cauchy_r = r * ((t - z).ln() - (-z).ln()) - 5.0 / 6.0 - 2.0 * z / t + 2.0 * z * z / (t * t);
        Ok(v - cauchy_r)
    }

    /// ln X(z) off the cut (continuous in the plane cut along `[0, ∞)`).
    pub fn ln_x_value(&self, z: Complex64) -> Result<Complex64> {
        self.check_off_cut(z)?;
        let v = self.v_numeric(z, HalfPlaneSide::PrincipalValue);
        if self.kappa == 0 {
            return Ok(v);
        }
        Ok(v + self.closed_part(z, (self.t_max - z).ln(), (-z).ln()) + I * PI)
    }

    /// X(z) off the cut.
    pub fn x_value(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.ln_x_value(z)?.exp())
    }

    /// ln of the one-sided boundary value `X^±(μ)`.
    pub fn ln_x_boundary(&self, mu: f64, side: HalfPlaneSide) -> Result<Complex64> {
        if !(mu > 0.0) {
            return Err(SkinError::ParameterDomain(format!("boundary value needs mu > 0, got {mu}")));
        }
        let z = Complex64::new(mu, 0.0);
        let pv = self.v_numeric(z, HalfPlaneSide::PrincipalValue);
        let f = self.integrand(mu)?;
        let v = pv + side.sign() * 0.5 * f;
        if self.kappa == 0 {
            return Ok(v);
        }
        let t = self.t_max;
        let sgn = side.sign();
        // ln(c - z) at z = μ ± i0
        let ln_t = if t > mu { Complex64::new((t - mu).ln(), 0.0) } else { Complex64::new((mu - t).ln(), -sgn * PI) };
        let ln_0 = Complex64::new(mu.ln(), -sgn * PI);
        Ok(v + self.closed_part(z, ln_t, ln_0) + I * PI)
    }

    /// One-sided boundary value `X^±(μ)`; the principal-value side gives the
    /// geometric mean of the two limits.
    pub fn x_boundary(&self, mu: f64, side: HalfPlaneSide) -> Result<Complex64> {
        Ok(self.ln_x_boundary(mu, side)?.exp())
    }

    /// ln X(0).
    pub fn ln_x_at_zero(&self) -> Complex64 {
        let v0 = self.density.integrate_with(|t| Complex64::new(1.0 / t, 0.0)) / TWO_PI_I;
        if self.kappa == 0 {
            v0
        } else {
            v0 + 5.0 / 6.0 - self.t_max.ln() + I * PI
        }
    }

    pub fn x_at_zero(&self) -> Complex64 {
        self.ln_x_at_zero().exp()
    }

    /// X'(0)/X(0).
    pub fn x_logderiv_at_zero(&self) -> Result<Complex64> {
        let d0 = self.density.integrate_with(|t| Complex64::new(1.0 / (t * t), 0.0)) / TWO_PI_I;
        if self.kappa == 0 {
            return Ok(d0);
        }
        let l = d0 + 3.0 / self.t_max;
        self.check_regularization(l)?;
        Ok(l)
    }

    /// Confirm that `ln X` has a finite slope at the origin by comparing
    /// one-sided difference quotients at two step sizes.
    fn check_regularization(&self, l: Complex64) -> Result<()> {
        let l0 = self.ln_x_at_zero();
        let slope = |h: f64| -> Result<Complex64> { Ok((self.ln_x_value(Complex64::new(-h, 0.0))? - l0) / (-h)) };
        let s3 = slope(1e-3)?;
        let s4 = slope(1e-4)?;
        // a surviving 1/z term would make the quotients differ by ~1e7
        let spread = (s3 - s4).norm();
        let tol = 1e-2 * (1.0 + l.norm()) + 10.0 * 1e-3 * (1.0 + s3.norm());
        if !spread.is_finite() || spread > tol || (s4 - l).norm() > tol {
            return Err(SkinError::Regularization(format!(
                "difference quotients {s3}, {s4} do not approach X'(0)/X(0) = {l}"
            )));
        }
        Ok(())
    }
}

/// Factor function for a parameter point from scratch.
pub fn build_factor(kp: &KineticParams) -> Result<(Dispersion, FactorRep)> {
    let disp = crate::dispersion::build_branch_table(kp)?;
    let rep = FactorRep::build(kp, &disp)?;
    Ok((disp, rep))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn kp(wt: f64, q: f64, alpha: f64) -> KineticParams {
        KineticParams::from_transport(wt, q, alpha).unwrap()
    }

    fn kappa_one_point() -> KineticParams {
        let wt = 1.0 / 3f64.sqrt();
        let z0 = c(1.0, -wt);
        let alpha = (I * z0 * z0 * z0).re / 0.5;
        kp(wt, 0.0, alpha)
    }

    #[test]
    fn identity_coefficient_gives_unit_factor() {
        let rep = FactorRep::from_ln_g(Arc::new(|_| Ok(c(0.0, 0.0))), 0, 8.0).unwrap();
        for &z in &[c(-1.0, 0.0), c(2.0, 1.0), c(0.3, -0.2)] {
            assert_eq!(rep.v_value(z).unwrap(), c(0.0, 0.0));
            assert_eq!(rep.x_value(z).unwrap(), c(1.0, 0.0));
        }
        assert_eq!(rep.x_boundary(1.0, HalfPlaneSide::Above).unwrap(), c(1.0, 0.0));
        assert_eq!(rep.x_logderiv_at_zero().unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn conjugated_density_conjugates_v() {
        let f = |t: f64| c(t.powi(3) * (-t * t).exp(), t.sin() * t.powi(3) * (-t * t).exp());
        let a = FactorRep::from_ln_g(Arc::new(move |t| Ok(f(t))), 0, 8.0).unwrap();
        let b = FactorRep::from_ln_g(Arc::new(move |t| Ok(f(t).conj())), 0, 8.0).unwrap();
        for &z in &[c(1.0, 0.5), c(-2.0, 0.1), c(3.0, -1.0)] {
            // (1/2πi)∫ f̄/(τ - z̄) = -conj((1/2πi)∫ f/(τ - z))
            let va = a.v_value(z).unwrap();
            let vb = b.v_value(z.conj()).unwrap();
            assert!((vb + va.conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn near_cut_is_refused() {
        let rep = FactorRep::from_ln_g(Arc::new(|_| Ok(c(0.0, 0.0))), 0, 8.0).unwrap();
        assert!(matches!(rep.v_value(c(1.0, 1e-12)), Err(SkinError::NearCut { .. })));
        assert!(rep.v_value(c(-1.0, 0.0)).is_ok());
    }

    fn ratio_check(rep: &FactorRep, disp: &Dispersion) {
        for i in 0..20 {
            let mu = 0.05 + 5.9 * i as f64 / 19.0;
            let xp = rep.x_boundary(mu, HalfPlaneSide::Above).unwrap();
            let xm = rep.x_boundary(mu, HalfPlaneSide::Below).unwrap();
            let g = disp.g(mu).unwrap();
            assert!((xp / xm - g).norm() <= 1e-8 * g.norm(), "mu={mu}: {} vs {g}", xp / xm);
            // boundary values are limits of the off-axis function
            let off = rep.x_value(c(mu, 1e-6)).unwrap();
            assert!((off - xp).norm() < 1e-4 * xp.norm(), "mu={mu}");
            let off = rep.x_value(c(mu, -1e-6)).unwrap();
            assert!((off - xm).norm() < 1e-4 * xm.norm(), "mu={mu}");
        }
    }

    #[test]
    fn factorization_index_zero() {
        let k = kp(0.1, 1e-3, 1.0);
        let (disp, rep) = build_factor(&k).unwrap();
        assert_eq!(rep.kappa(), 0);
        ratio_check(&rep, &disp);
        // X → 1 at infinity
        for th in [0.5f64, 2.0, -1.0, -2.5] {
            let x = rep.x_value(Complex64::from_polar(1e3, th)).unwrap();
            assert!((x - 1.0).norm() < 1e-3);
        }
    }

    #[test]
    fn factorization_index_one() {
        let k = kappa_one_point();
        let (disp, rep) = build_factor(&k).unwrap();
        assert_eq!(rep.kappa(), 1);
        ratio_check(&rep, &disp);
        for th in [0.5f64, 2.0, -1.0, -2.5] {
            let z = Complex64::from_polar(1e3, th);
            let x = rep.x_value(z).unwrap();
            assert!((z * x - 1.0).norm() < 1e-3, "{}", z * x);
        }
        let x0 = rep.x_at_zero();
        assert!(x0.is_finite() && x0.norm() > 0.0);
        // X(0) is the limit along the negative axis
        let xm = rep.x_value(c(-1e-7, 0.0)).unwrap();
        assert!((xm - x0).norm() < 1e-5 * x0.norm());
    }

    #[test]
    fn log_derivative_index_zero_matches_finite_difference() {
        let k = kp(0.1, 1e-3, 10.0);
        let (_, rep) = build_factor(&k).unwrap();
        let l = rep.x_logderiv_at_zero().unwrap();
        let h = 1e-5;
        // central difference of ln X across the origin along the negative axis,
        // the origin itself through the one-sided formula
        let lp = rep.ln_x_value(c(-h, 0.0)).unwrap();
        let lpp = rep.ln_x_value(c(-2.0 * h, 0.0)).unwrap();
        let l0 = rep.ln_x_at_zero();
        let fd = (-3.0 * l0 + 4.0 * lp - lpp) / (-2.0 * h);
        assert!((fd - l).norm() < 1e-6 * l.norm(), "{fd} vs {l}");
    }

    #[test]
    fn log_derivative_index_one_matches_richardson() {
        let k = kappa_one_point();
        let (_, rep) = build_factor(&k).unwrap();
        let l = rep.x_logderiv_at_zero().unwrap();
        let l0 = rep.ln_x_at_zero();
        let h = 1e-4;
        let d1 = (rep.ln_x_value(c(-h, 0.0)).unwrap() - l0) / (-h);
        let d2 = (rep.ln_x_value(c(-2.0 * h, 0.0)).unwrap() - l0) / (-2.0 * h);
        // first-order quotients, Richardson removes the O(h) term
        let rich = 2.0 * d1 - d2;
        assert!((rich - l).norm() < 1e-6 * l.norm(), "{rich} vs {l}");
    }

    #[test]
    fn doubling_nodes_leaves_v_unchanged() {
        for k in [kp(0.1, 1e-3, 1.0), kp(0.5, 1e-3, 1.0), kappa_one_point()] {
            let (_, rep) = build_factor(&k).unwrap();
            let dbl = rep.doubled().unwrap();
            for i in 0..10 {
                let z = Complex64::from_polar(0.3 + 0.7 * i as f64, -2.8 + 0.6 * i as f64);
                let a = rep.v_value(z).unwrap();
                let b = dbl.v_value(z).unwrap();
                assert!((a - b).norm() < 1e-11, "z={z}: {a} vs {b}");
            }
            let a = rep.x_logderiv_at_zero().unwrap();
            let b = dbl.x_logderiv_at_zero().unwrap();
            assert!((a - b).norm() < 1e-10 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn geometric_mean_continuity() {
        let k = kp(0.1, 1e-3, 1.0);
        let (_, rep) = build_factor(&k).unwrap();
        let mut prev: Option<Complex64> = None;
        let mut mu = 0.01;
        while mu < 7.9 {
            let p = rep.x_boundary(mu, HalfPlaneSide::Above).unwrap() * rep.x_boundary(mu, HalfPlaneSide::Below).unwrap();
            if let Some(q) = prev {
                assert!((p - q).norm() < 0.05 * (1.0 + p.norm()), "tear at {mu}");
            }
            prev = Some(p);
            mu += 0.0137;
        }
    }
}
