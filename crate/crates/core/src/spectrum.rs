//! Discrete spectrum and the δ-plane picture.
//!
//! The number of zeros of λ in the cut plane is `N = 2 + 2κ` with `κ` the
//! index of `G`. Zeros come in pairs `±η`; exactly one member of each pair
//! satisfies the decay condition `Re(z0/η) > 0` and only those are reported.
//!
//! With the displacement current dropped, `λ = 1 - p(z)/δ`, so the index is
//! the winding number of the closed curve
//!
//! ```text
//! Λ:  δ₁ = p(μ),  δ₂ = ±q(μ),   0 ≤ μ < ∞
//! ```
//!
//! around `δ`. Inside (Δ⁺) there are four zeros, outside (Δ⁻) two. In plasma
//! variables the boundary `δ ∈ Λ` becomes the curve `L(v_c)`:
//! `ε = v_c·Y(μ)`, `γ = v_c·√(3Y² - p)`, where `ν₁ = Y(μ)` solves
//!
//! ```text
//! 64ν₁⁶ - 48ν₁⁴p + 3ν₁²(3p² - q²) + q²p = 0.
//! ```
//!
//! The sextic has one admissible root per sign of `δ₂ = ±q`, so `L(v_c)` is
//! traced as two branches joined at large `μ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dispersion::{self, lambda_lower, lambda_lower_derivative, lambda_upper, lambda_upper_derivative};
use crate::error::{Result, SkinError};
use crate::params::KineticParams;
use crate::specfun::{p_principal, q_value};

/// Upper end of the μ range for the Λ and L curves.
pub const CURVE_MU_MAX: f64 = 6.0;

/// Decaying zeros of the dispersion function.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub kappa: i32,
    /// Total number of zeros in the cut plane, `2 + 2κ`.
    pub n_zeros: usize,
    /// One representative per ± pair, `Re(z0/η) > 0`, sorted by modulus.
    pub zeros: Vec<Complex64>,
    /// |λ(η)| at each stored zero.
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainClass {
    DeltaPlus,
    DeltaMinus,
    Boundary,
}

impl DomainClass {
    pub fn name(self) -> &'static str {
        match self {
            DomainClass::DeltaPlus => "delta_plus",
            DomainClass::DeltaMinus => "delta_minus",
            DomainClass::Boundary => "boundary",
        }
    }
}

/// Which sign of `δ₂ = ±q(μ)` a curve point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub mu: f64,
    pub x: f64,
    pub y: f64,
    pub branch: Branch,
}

/// Sampled curve: the + branch with μ ascending, then the − branch with μ
/// descending, so consecutive points trace the closed curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoints {
    pub points: Vec<CurvePoint>,
}

/// Index of `G` from the argument increment along the real axis.
pub fn index_kappa(kp: &KineticParams) -> Result<i32> {
    dispersion::build_branch_table(kp)?.kappa()
}

/// Locate the decaying zeros by the argument principle in sectors of an
/// annulus, then polish them with Newton's method.
pub fn find_discrete_zeros(kp: &KineticParams, report_kappa: i32) -> Result<SpectrumReport> {
    let expected_total = 2 + 2 * report_kappa;
    let (r_min, r_max) = search_annulus(kp)?;
    let phi = kp.z0().arg();
    let theta_hi = phi + PI / 2.0;
    let theta_lo = phi - PI / 2.0;

    let upper = Sector::new(r_min, r_max, 0.0, PI, Half::Upper);
    let lower = Sector::new(r_min, r_max, -PI, 0.0, Half::Lower);
    let n_up = upper.count(kp)?;
    let n_lo = lower.count(kp)?;
    if n_up != n_lo || (n_up + n_lo) as i32 != expected_total {
        return Err(SkinError::Inconsistency {
            stage: "spectrum",
            detail: format!(
                "argument principle counts {n_up} + {n_lo} zeros in the two half-planes, index gives {expected_total}"
            ),
        });
    }

    let dec_up = Sector::new(r_min, r_max, 0.0, theta_hi, Half::Upper);
    let dec_lo = Sector::new(r_min, r_max, theta_lo, 0.0, Half::Lower);
    let mut zeros = Vec::new();
    for s in [dec_up, dec_lo] {
        let n = s.count(kp)?;
        if n > 0 {
            s.locate(kp, n, &mut zeros, 0)?;
        }
    }
    if zeros.len() as i32 != 1 + report_kappa {
        return Err(SkinError::Inconsistency {
            stage: "spectrum",
            detail: format!("found {} decaying zeros, expected {}", zeros.len(), 1 + report_kappa),
        });
    }
    zeros.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
    let residuals: Vec<f64> = zeros.iter().map(|&z| lambda_at(kp, z).norm()).collect();
    for (z, r) in zeros.iter().zip(&residuals) {
        let bound = 1e-10 * (1.0f64).max((kp.b() - kp.a()).norm() * z.norm_sqr());
        if *r > bound {
            return Err(SkinError::NonConvergence {
                stage: "spectrum",
                detail: format!("zero {z} has residual {r:e} above {bound:e}"),
            });
        }
        if (kp.z0() / z).re <= 0.0 {
            return Err(SkinError::Inconsistency {
                stage: "spectrum",
                detail: format!("zero {z} is not decaying"),
            });
        }
    }
    Ok(SpectrumReport { kappa: report_kappa, n_zeros: expected_total as usize, zeros, residuals })
}

/// Index and decaying zeros in one call.
pub fn spectrum(kp: &KineticParams) -> Result<SpectrumReport> {
    let kappa = index_kappa(kp)?;
    find_discrete_zeros(kp, kappa)
}

/// λ on the sheet appropriate to the half-plane of `z`.
fn lambda_at(kp: &KineticParams, z: Complex64) -> Complex64 {
    if z.im >= 0.0 {
        lambda_upper(kp, z)
    } else {
        lambda_lower(kp, z)
    }
}

fn search_annulus(kp: &KineticParams) -> Result<(f64, f64)> {
    let a = kp.a();
    let b = kp.b();
    let lead = b - a;
    if lead.norm() < 1e-12 * (1.0 + a.norm()) {
        return Err(SkinError::SpectralBoundary(
            "the quadratic term of lambda vanishes (b = a); zero search region undefined".into(),
        ));
    }
    let r_max = (4.0 * ((1.0 - a / 2.0) / lead).norm().sqrt()).max(4.0);
    let mut r_min = 0.05f64.min(0.25 * (1.0 / (PI.sqrt() * a.norm())).cbrt());
    if b.norm() > 0.0 {
        r_min = r_min.min(0.25 / b.norm().sqrt());
    }
    Ok((r_min, r_max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Half {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy)]
struct Sector {
    r0: f64,
    r1: f64,
    t0: f64,
    t1: f64,
    half: Half,
}

impl Sector {
    fn new(r0: f64, r1: f64, t0: f64, t1: f64, half: Half) -> Self {
        Self { r0, r1, t0, t1, half }
    }

    fn f(&self, kp: &KineticParams, z: Complex64) -> Complex64 {
        match self.half {
            Half::Upper => lambda_upper(kp, z),
            Half::Lower => lambda_lower(kp, z),
        }
    }

    fn df(&self, kp: &KineticParams, z: Complex64) -> Complex64 {
        match self.half {
            Half::Upper => lambda_upper_derivative(kp, z),
            Half::Lower => lambda_lower_derivative(kp, z),
        }
    }

    /// Argument change of λ along a path `s ↦ path(s)`, `s ∈ [0, 1]`.
    fn winding_along<P: Fn(f64) -> Complex64>(&self, kp: &KineticParams, path: P) -> Result<f64> {
        let n0 = 64;
        let mut total = 0.0;
        let mut s_prev = 0.0;
        let mut f_prev = self.f(kp, path(0.0));
        let mut evals = 0usize;
        for k in 1..=n0 {
            let mut stack = vec![k as f64 / n0 as f64];
            while let Some(&s) = stack.last() {
                let f = self.f(kp, path(s));
                evals += 1;
                if !f.is_finite() || f.norm() == 0.0 {
                    return Err(SkinError::SpectralBoundary(format!(
                        "dispersion function vanishes on the search contour near {}",
                        path(s)
                    )));
                }
                let d = (f / f_prev).arg();
                if d.abs() > PI / 6.0 && s - s_prev > 1e-13 {
                    stack.push(0.5 * (s_prev + s));
                } else if d.abs() > PI / 6.0 {
                    return Err(SkinError::SpectralBoundary(format!(
                        "zero of the dispersion function on the search contour near {}",
                        path(s)
                    )));
                } else {
                    stack.pop();
                    total += d;
                    s_prev = s;
                    f_prev = f;
                }
                if evals > 2_000_000 {
                    return Err(SkinError::NonConvergence {
                        stage: "spectrum",
                        detail: "contour refinement budget exhausted".into(),
                    });
                }
            }
        }
        Ok(total)
    }

    fn count(&self, kp: &KineticParams) -> Result<usize> {
        let Sector { r0, r1, t0, t1, .. } = *self;
        let mut w = 0.0;
        // outer arc, counterclockwise
        w += self.winding_along(kp, |s| Complex64::from_polar(r1, t0 + (t1 - t0) * s))?;
        // ray at t1, inward (geometric in r)
        w += self.winding_along(kp, |s| Complex64::from_polar(r1 * (r0 / r1).powf(s), t1))?;
        // inner arc, clockwise
        w += self.winding_along(kp, |s| Complex64::from_polar(r0, t1 + (t0 - t1) * s))?;
        // ray at t0, outward
        w += self.winding_along(kp, |s| Complex64::from_polar(r0 * (r1 / r0).powf(s), t0))?;
        let turns = w / (2.0 * PI);
        let n = turns.round();
        if (turns - n).abs() > 0.05 || n < 0.0 {
            return Err(SkinError::SpectralBoundary(format!(
                "non-integer winding {turns:.4} on sector r=[{r0}, {r1}] theta=[{t0}, {t1}]"
            )));
        }
        Ok(n as usize)
    }

    fn center(&self) -> Complex64 {
        Complex64::from_polar((self.r0 * self.r1).sqrt(), 0.5 * (self.t0 + self.t1))
    }

    fn contains(&self, z: Complex64) -> bool {
        let r = z.norm();
        let t = z.arg();
        r > self.r0 && r < self.r1 && t >= self.t0 && t <= self.t1
    }

    fn split(&self) -> [Sector; 2] {
        let radial = (self.r1 / self.r0).ln();
        let mid_r = (self.r0 * self.r1).sqrt();
        let angular = self.t1 - self.t0;
        if radial > angular {
            [
                Sector { r1: mid_r, ..*self },
                Sector { r0: mid_r, ..*self },
            ]
        } else {
            let tm = 0.5 * (self.t0 + self.t1);
            [Sector { t1: tm, ..*self }, Sector { t0: tm, ..*self }]
        }
    }

    fn newton(&self, kp: &KineticParams, start: Complex64) -> Option<Complex64> {
        let mut z = start;
        for _ in 0..100 {
            let f = self.f(kp, z);
            let d = self.df(kp, z);
            if d.norm() == 0.0 || !f.is_finite() {
                return None;
            }
            let step = f / d;
            z -= step;
            if !z.is_finite() {
                return None;
            }
            if step.norm() <= 1e-15 * z.norm() {
                break;
            }
        }
        // one more step to settle rounding
        let f = self.f(kp, z);
        let d = self.df(kp, z);
        if d.norm() > 0.0 {
            z -= f / d;
        }
        Some(z)
    }

    fn locate(&self, kp: &KineticParams, n: usize, out: &mut Vec<Complex64>, depth: usize) -> Result<()> {
        if depth > 80 {
            return Err(SkinError::NonConvergence {
                stage: "spectrum",
                detail: format!("sector subdivision did not isolate zeros near {}", self.center()),
            });
        }
        if n == 1 {
            let size = (self.r1 / self.r0).ln().max(self.t1 - self.t0);
            if size < 0.25 || depth > 12 {
                if let Some(z) = self.newton(kp, self.center()) {
                    let on_sheet = match self.half {
                        Half::Upper => z.im >= 0.0,
                        Half::Lower => z.im <= 0.0,
                    };
                    if self.contains(z) && on_sheet {
                        out.push(z);
                        return Ok(());
                    }
                }
                if depth > 60 {
                    return Err(SkinError::NonConvergence {
                        stage: "spectrum",
                        detail: format!("Newton refinement failed in sector around {}", self.center()),
                    });
                }
            }
        }
        for s in self.split() {
            let m = s.count(kp)?;
            if m > 0 {
                s.locate(kp, m, out, depth + 1)?;
            }
        }
        Ok(())
    }
}

/// Point of Λ at `μ` on the given branch.
pub fn lambda_point(mu: f64, branch: Branch) -> Complex64 {
    Complex64::new(p_principal(mu), branch.sign() * q_value(mu))
}

/// Winding of the truncated curve Λ around `delta`, together with the
/// distance from `delta` to Λ.
fn lambda_winding(delta: Complex64) -> (f64, f64) {
    let ang = |mu: f64, br: Branch| (lambda_point(mu, br) - delta).arg();
    let wrap = |d: f64| {
        let mut d = d;
        while d > PI {
            d -= 2.0 * PI;
        }
        while d < -PI {
            d += 2.0 * PI;
        }
        d
    };
    let mut total = 0.0;
    let mut dist = f64::INFINITY;
    let mut nearest = (0.0, Branch::Plus);
    for br in [Branch::Plus, Branch::Minus] {
        let (start, end) = match br {
            Branch::Plus => (0.0, CURVE_MU_MAX),
            Branch::Minus => (CURVE_MU_MAX, 0.0),
        };
        let n0 = 240;
        let mut m_prev = start;
        let mut a_prev = ang(start, br);
        for k in 1..=n0 {
            let mut stack = vec![start + (end - start) * k as f64 / n0 as f64];
            while let Some(&m) = stack.last() {
                let a = ang(m, br);
                let mid = 0.5 * (m_prev + m);
                let am = ang(mid, br);
                let d = wrap(a - a_prev);
                let d2 = wrap(am - a_prev) + wrap(a - am);
                let small = (m - m_prev).abs() < 1e-13;
                if !small && (d.abs() > 0.2 || (d - d2).abs() > 1e-9) {
                    stack.push(mid);
                } else {
                    stack.pop();
                    total += d;
                    let pm = lambda_point(m, br);
                    let dd = (pm - delta).norm();
                    if dd < dist {
                        dist = dd;
                        nearest = (m, br);
                    }
                    m_prev = m;
                    a_prev = a;
                }
            }
        }
        if br == Branch::Plus {
            // closing segment at the truncation point
            let a = ang(CURVE_MU_MAX, Branch::Minus);
            total += wrap(a - a_prev);
        }
    }
    // polish the distance near the closest sample
    let (m0, br) = nearest;
    let f = |m: f64| (lambda_point(m.clamp(0.0, CURVE_MU_MAX), br) - delta).norm();
    let (mut lo, mut hi) = ((m0 - 0.05).max(0.0), (m0 + 0.05).min(CURVE_MU_MAX));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..120 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if f(x1) < f(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    dist = dist.min(f(0.5 * (lo + hi)));
    (total / (2.0 * PI), dist)
}

/// Position of `δ = 1/a` relative to Λ (displacement current dropped).
pub fn classify_delta(kp: &KineticParams) -> DomainClass {
    classify_delta_value(kp.without_displacement().delta())
}

/// Position of an explicit `δ` relative to Λ.
pub fn classify_delta_value(delta: Complex64) -> DomainClass {
    let (turns, dist) = lambda_winding(delta);
    if dist < 1e-9 * (1.0 + delta.norm()) {
        return DomainClass::Boundary;
    }
    if turns.round().abs() == 1.0 {
        DomainClass::DeltaPlus
    } else {
        DomainClass::DeltaMinus
    }
}

fn mu_grid(n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|i| CURVE_MU_MAX * i as f64 / (n - 1) as f64).collect()
}

/// Λ sampled at `n_points` values of μ per branch.
pub fn lambda_curve(n_points: usize) -> CurvePoints {
    let grid = mu_grid(n_points);
    let mut points = Vec::with_capacity(2 * grid.len());
    for &mu in &grid {
        let p = lambda_point(mu, Branch::Plus);
        points.push(CurvePoint { mu, x: p.re, y: p.im, branch: Branch::Plus });
    }
    for &mu in grid.iter().rev() {
        let p = lambda_point(mu, Branch::Minus);
        points.push(CurvePoint { mu, x: p.re, y: p.im, branch: Branch::Minus });
    }
    CurvePoints { points }
}

/// Sextic of the L curve in `ν₁`, with `p = p(μ)`, `q = q(μ)`.
pub fn sextic(nu: f64, p: f64, q: f64) -> f64 {
    let t = nu * nu;
    64.0 * t * t * t - 48.0 * t * t * p + 3.0 * t * (3.0 * p * p - q * q) + q * q * p
}

/// Unsquared form `ν₁(3p - 8ν₁²) - s·q·√(3ν₁² - p)`, `s = ±1` for the branch.
pub fn unsquared(nu: f64, p: f64, q: f64, branch: Branch) -> f64 {
    let rad = (3.0 * nu * nu - p).max(0.0);
    nu * (3.0 * p - 8.0 * nu * nu) - branch.sign() * q * rad.sqrt()
}

/// Admissible root `ν₁ = Y(μ)` of the sextic on the given branch of Λ.
pub fn y_root(mu: f64, branch: Branch) -> Result<f64> {
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(SkinError::RootSelection { mu, detail: "mu must be finite and nonnegative".into() });
    }
    let p = p_principal(mu);
    let q = q_value(mu);
    if mu == 0.0 || (p == 0.0 && q == 0.0) {
        return Ok(0.0);
    }
    // bracket in ν; g has one sign change on each interval
    let g = |nu: f64| unsquared(nu, p, q, branch);
    let (mut lo, mut hi) = match branch {
        Branch::Plus => ((p / 3.0).sqrt(), (3.0 * p / 8.0).sqrt()),
        Branch::Minus => {
            let lo = (3.0 * p / 8.0).sqrt();
            let mut hi = lo.max(1e-3) * 2.0;
            while g(hi) > 0.0 {
                hi *= 2.0;
                if hi > 1e6 {
                    return Err(SkinError::RootSelection { mu, detail: "no upper bracket for the root".into() });
                }
            }
            (lo, hi)
        }
    };
    let (glo, ghi) = (g(lo), g(hi));
    if glo.signum() == ghi.signum() {
        return Err(SkinError::RootSelection {
            mu,
            detail: format!("unsquared equation does not change sign on [{lo}, {hi}] ({glo:e}, {ghi:e})"),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid).signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let nu = if g(lo).abs() < g(hi).abs() { lo } else { hi };
    if 3.0 * nu * nu < p {
        return Err(SkinError::RootSelection { mu, detail: format!("root {nu} has negative radicand") });
    }
    Ok(nu)
}

/// All admissible nonnegative roots of the sextic, each tagged with the sign
/// choice of the unsquared equation it satisfies.
pub fn y_roots(mu: f64) -> Result<Vec<(Branch, f64)>> {
    Ok(vec![(Branch::Plus, y_root(mu, Branch::Plus)?), (Branch::Minus, y_root(mu, Branch::Minus)?)])
}

/// The curve L(v_c) in the (γ, ε) plane; `x = γ`, `y = ε`.
pub fn l_curve(v_c: f64, n_points: usize) -> Result<CurvePoints> {
    if !(v_c > 0.0) || !v_c.is_finite() {
        return Err(SkinError::ParameterDomain(format!("v_c = {v_c} must be positive")));
    }
    let grid = mu_grid(n_points);
    let mut points = Vec::with_capacity(2 * grid.len());
    let mut push = |mu: f64, br: Branch| -> Result<()> {
        let nu = y_root(mu, br)?;
        let p = p_principal(mu);
        let omega = (3.0 * nu * nu - p).max(0.0).sqrt();
        points.push(CurvePoint { mu, x: v_c * omega, y: v_c * nu, branch: br });
        Ok(())
    };
    for &mu in &grid {
        push(mu, Branch::Plus)?;
    }
    for &mu in grid.iter().rev() {
        push(mu, Branch::Minus)?;
    }
    Ok(CurvePoints { points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::lambda_value;
    use crate::specfun::HalfPlaneSide;

    fn kp(wt: f64, q: f64, alpha: f64) -> KineticParams {
        KineticParams::from_transport(wt, q, alpha).unwrap()
    }

    #[test]
    fn zeros_are_zeros_and_even() {
        for &(wt, q, alpha) in &[(0.5, 1e-3, 1.0), (0.1, 1e-3, 10.0), (1.0, 1e-3, 0.1), (0.0, 0.0, 2.0)] {
            let k = kp(wt, q, alpha);
            let rep = spectrum(&k).unwrap();
            assert_eq!(rep.zeros.len() as i32, 1 + rep.kappa);
            for &z in &rep.zeros {
                let side = if z.im >= 0.0 { HalfPlaneSide::Above } else { HalfPlaneSide::Below };
                assert!(lambda_value(&k, z, side).norm() < 1e-10);
                assert!(lambda_value(&k, -z, side).norm() < 1e-10 || lambda_at(&k, -z).norm() < 1e-10);
                assert!((k.z0() / z).re > 0.0);
            }
        }
    }

    #[test]
    fn small_anomaly_zero_matches_leading_balance() {
        // λ ≈ 1 - a/2 - a z² for small a
        let k = kp(0.3, 0.0, 1e-3);
        let rep = spectrum(&k).unwrap();
        assert_eq!(rep.kappa, 0);
        let a = k.a();
        let guess = ((1.0 - a / 2.0) / a).sqrt();
        let z = rep.zeros[0];
        let close = (z - guess).norm().min((z + guess).norm());
        assert!(close / z.norm() < 1e-2, "{z} vs ±{guess}");
    }

    #[test]
    fn index_one_point_has_two_zeros() {
        let wt = 1.0 / 3f64.sqrt();
        let z0 = Complex64::new(1.0, -wt);
        let alpha = (Complex64::new(0.0, 1.0) * z0 * z0 * z0).re / 0.5;
        let k = kp(wt, 0.0, alpha);
        let rep = spectrum(&k).unwrap();
        assert_eq!(rep.kappa, 1);
        assert_eq!(rep.n_zeros, 4);
        assert_eq!(rep.zeros.len(), 2);
        assert_eq!(classify_delta(&k), DomainClass::DeltaPlus);
    }

    #[test]
    fn lambda_curve_basics() {
        let c = lambda_curve(7);
        assert_eq!(c.points.len(), 14);
        assert_eq!((c.points[0].x, c.points[0].y), (0.0, 0.0));
        let last = c.points.last().unwrap();
        assert_eq!((last.x, last.y), (0.0, 0.0));
        let p1 = lambda_point(1.0, Branch::Plus);
        assert!((p1.re - 1.07616).abs() < 1e-5 && (p1.im - 0.652049).abs() < 1e-6);
        for i in 0..7 {
            let a = c.points[i];
            let b = c.points[13 - i];
            assert_eq!(a.mu, b.mu);
            assert_eq!(a.x, b.x);
            assert_eq!(a.y, -b.y);
        }
    }

    #[test]
    fn classification_of_simple_points() {
        assert_eq!(classify_delta_value(lambda_point(1.0, Branch::Plus)), DomainClass::Boundary);
        assert_eq!(classify_delta_value(lambda_point(2.3, Branch::Minus)), DomainClass::Boundary);
        assert_eq!(classify_delta_value(Complex64::new(0.5, 0.0)), DomainClass::DeltaPlus);
        assert_eq!(classify_delta_value(Complex64::new(-0.5, 0.0)), DomainClass::DeltaMinus);
        assert_eq!(classify_delta_value(Complex64::new(1.0, 2.0)), DomainClass::DeltaMinus);
        // far away off the real axis
        let bound = lambda_curve(600).points.iter().map(|p| p.x.abs() + p.y.abs()).fold(0.0, f64::max);
        for th in [0.3f64, 1.5, 2.5, -0.7, -2.9] {
            let d = Complex64::from_polar(2.5 * bound, th);
            assert_eq!(classify_delta_value(d), DomainClass::DeltaMinus, "theta {th}");
        }
    }

    #[test]
    fn y_root_properties() {
        assert_eq!(y_root(0.0, Branch::Plus).unwrap(), 0.0);
        for &mu in &[0.05, 0.5, 1.0, 2.0, 4.0, 6.0] {
            let p = p_principal(mu);
            let q = q_value(mu);
            for br in [Branch::Plus, Branch::Minus] {
                let nu = y_root(mu, br).unwrap();
                assert!(sextic(nu, p, q).abs() < 1e-12 * (1.0 + p.abs().powi(3)), "mu={mu} {br:?}");
                assert!(unsquared(nu, p, q, br).abs() < 1e-10);
                assert!(3.0 * nu * nu >= p);
                // the point maps back onto Λ
                let om = (3.0 * nu * nu - p).sqrt();
                let d = -(Complex64::new(om, nu)).powu(3) / om;
                assert!((d - lambda_point(mu, br)).norm() < 1e-9 * (1.0 + d.norm()), "mu={mu} {br:?}: {d}");
            }
        }
    }

    #[test]
    fn sextic_has_two_admissible_roots() {
        // both sign choices of the unsquared equation have a root at every μ > 0
        let r = y_roots(1.0).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[0].1 < r[1].1);
    }

    #[test]
    fn l_curve_scaling_and_origin() {
        let a = l_curve(0.001, 31).unwrap();
        let b = l_curve(0.002, 31).unwrap();
        assert_eq!((a.points[0].x, a.points[0].y), (0.0, 0.0));
        for (p, q) in a.points.iter().zip(&b.points) {
            assert!((2.0 * p.x - q.x).abs() <= 1e-15 * q.x.abs().max(1e-300));
            assert!((2.0 * p.y - q.y).abs() <= 1e-15 * q.y.abs().max(1e-300));
        }
    }
}
