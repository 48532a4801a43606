//! Problem constants and the conversions between the three parameterizations
//! of the skin-effect problem.
//!
//! Everything downstream works in the transport form `(ωτ, Q, α)`:
//!
//! * `z0 = 1 - iωτ`, with `ωτ = ω/ν`;
//! * `Q = ωl/c`, the displacement-current parameter (`l = v_T/ν`);
//! * `α = 2l²/δ²`, the anomaly parameter.
//!
//! From these the dispersion constants `a = -iα/z0³`, `b = Q²/z0²` and
//! `δ = 1/a` are derived once, at construction.
//!
//! The plasma form `(γ, ε, v_T/c)` with `γ = ω/ω_p`, `ε = ν/ω_p` is the one
//! used for the domain diagrams. It maps onto the transport form through
//! `ω₁ = γ/v_c`, `ν₁ = ε/v_c`, `v_c = √(π/4)·v_T/c`:
//!
//! * `ωτ = γ/ε`,
//! * `Q = (γ/ε)·(v_T/c)`,
//! * `α = ω₁/ν₁³ = γ·v_c²/ε³`,
//!
//! which reproduces `a = -iω₁/(ν₁ - iω₁)³` and `b = ω₁²(v_T/c)²/(ν₁ - iω₁)²`.
//!
//! The dimensional quantities of the kinetic model (electron mass, charge,
//! temperature, density, collision time, mean free path, plasma frequency)
//! only ever enter through these ratios and are not represented here.

use num_complex::Complex64;

use crate::error::{Result, SkinError};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Frequency, collision rate and thermal speed in plasma units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// ω/ω_p
    pub gamma: f64,
    /// ν/ω_p
    pub eps: f64,
    /// v_T/c
    pub vt_over_c: f64,
}

impl PhysicalParams {
    pub fn new(gamma: f64, eps: f64, vt_over_c: f64) -> Result<Self> {
        for (name, v) in [("gamma", gamma), ("eps", eps), ("vt_over_c", vt_over_c)] {
            if !v.is_finite() {
                return Err(SkinError::ParameterDomain(format!("{name} = {v} is not finite")));
            }
        }
        if gamma <= 0.0 {
            return Err(SkinError::ParameterDomain(format!("gamma = {gamma} must be positive")));
        }
        if eps <= 0.0 {
            return Err(SkinError::ParameterDomain(format!(
                "eps = {eps} must be positive (collisionless plasma is not covered)"
            )));
        }
        if !(vt_over_c > 0.0 && vt_over_c < 1.0) {
            return Err(SkinError::ParameterDomain(format!(
                "vt_over_c = {vt_over_c} must lie in (0, 1)"
            )));
        }
        Ok(Self { gamma, eps, vt_over_c })
    }

    /// Build from the reduced thermal speed `v_c = √(π/4)·v_T/c` directly.
    pub fn from_vc(gamma: f64, eps: f64, v_c: f64) -> Result<Self> {
        Self::new(gamma, eps, v_c / VC_FACTOR)
    }

    /// v_c = √(π/4)·v_T/c
    pub fn v_c(&self) -> f64 {
        VC_FACTOR * self.vt_over_c
    }

    /// ω₁ = γ/v_c
    pub fn omega1(&self) -> f64 {
        self.gamma / self.v_c()
    }

    /// ν₁ = ε/v_c
    pub fn nu1(&self) -> f64 {
        self.eps / self.v_c()
    }

    /// `a = -iω₁/(ν₁ - iω₁)³`, evaluated directly in plasma variables.
    pub fn a_direct(&self) -> Complex64 {
        let w1 = self.omega1();
        let n1 = self.nu1();
        -I * w1 / (Complex64::new(n1, -w1)).powu(3)
    }

    /// `b = ω₁²(v_T/c)²/(ν₁ - iω₁)²`, evaluated directly in plasma variables.
    pub fn b_direct(&self) -> Complex64 {
        let w1 = self.omega1();
        let n1 = self.nu1();
        w1 * w1 * self.vt_over_c * self.vt_over_c / Complex64::new(n1, -w1).powu(2)
    }

    /// Closed form `δ = -(γ + iε)³/(v_c²·γ)` of the δ-plane coordinate.
    pub fn delta_closed_form(&self) -> Complex64 {
        let vc = self.v_c();
        -Complex64::new(self.gamma, self.eps).powu(3) / (vc * vc * self.gamma)
    }
}

/// √(π/4)
pub const VC_FACTOR: f64 = 0.886_226_925_452_758;

/// The dimensionless constants of the kinetic problem in transport form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticParams {
    omega_tau: f64,
    q: f64,
    alpha: f64,
    z0: Complex64,
    a: Complex64,
    b: Complex64,
    delta: Complex64,
}

impl KineticParams {
    /// Canonical constructor from `(ωτ, Q, α)`.
    pub fn from_transport(omega_tau: f64, q: f64, alpha: f64) -> Result<Self> {
        for (name, v) in [("omega_tau", omega_tau), ("Q", q), ("alpha", alpha)] {
            if !v.is_finite() {
                return Err(SkinError::ParameterDomain(format!("{name} = {v} is not finite")));
            }
        }
        if omega_tau < 0.0 {
            return Err(SkinError::ParameterDomain(format!("omega_tau = {omega_tau} must be >= 0")));
        }
        if q < 0.0 {
            return Err(SkinError::ParameterDomain(format!("Q = {q} must be >= 0")));
        }
        if alpha <= 0.0 {
            return Err(SkinError::ParameterDomain(format!("alpha = {alpha} must be > 0")));
        }
        let z0 = Complex64::new(1.0, -omega_tau);
        let z0_3 = z0 * z0 * z0;
        let a = -I * alpha / z0_3;
        let b = q * q / (z0 * z0);
        let delta = I * z0_3 / alpha;
        Ok(Self { omega_tau, q, alpha, z0, a, b, delta })
    }

    /// Convert plasma-unit parameters into the transport form.
    pub fn from_plasma(p: &PhysicalParams) -> Result<Self> {
        let p = PhysicalParams::new(p.gamma, p.eps, p.vt_over_c)?;
        let omega_tau = p.gamma / p.eps;
        let vc = p.v_c();
        let alpha = p.gamma * vc * vc / (p.eps * p.eps * p.eps);
        Self::from_transport(omega_tau, omega_tau * p.vt_over_c, alpha)
    }

    pub fn omega_tau(&self) -> f64 {
        self.omega_tau
    }

    /// Q = ωl/c
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// z0 = 1 - iωτ
    pub fn z0(&self) -> Complex64 {
        self.z0
    }

    /// a = -iα/z0³
    pub fn a(&self) -> Complex64 {
        self.a
    }

    /// b = Q²/z0²
    pub fn b(&self) -> Complex64 {
        self.b
    }

    /// δ = 1/a
    pub fn delta(&self) -> Complex64 {
        self.delta
    }

    /// Same point with the displacement current dropped (`Q = 0`, `b = 0`).
    pub fn without_displacement(&self) -> Self {
        Self { q: 0.0, b: Complex64::new(0.0, 0.0), ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn zero_collision_time_collapses_powers() {
        let kp = KineticParams::from_transport(0.0, 0.0, 1.0).unwrap();
        assert_eq!(kp.z0(), Complex64::new(1.0, 0.0));
        assert!(close(kp.a(), -I, 1e-16));
        assert_eq!(kp.b(), Complex64::new(0.0, 0.0));
        assert!(close(kp.delta(), I, 1e-16));
    }

    #[test]
    fn defining_identities_hold() {
        let kp = KineticParams::from_transport(1.0, 0.0, 1.0).unwrap();
        let z0 = kp.z0();
        assert!(close(z0 * z0 * z0, Complex64::new(-2.0, -2.0), 1e-15));
        assert!((kp.a() * z0 * z0 * z0 + I).norm() < 1e-15);

        let kp = KineticParams::from_transport(0.5, 0.01, 5.0).unwrap();
        assert!((kp.delta() * kp.a() - 1.0).norm() < 1e-15);
        let z0 = kp.z0();
        assert!((kp.b() * z0 * z0 - 0.01 * 0.01).norm() < 1e-18);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(KineticParams::from_transport(-0.1, 0.0, 1.0).is_err());
        assert!(KineticParams::from_transport(0.1, -1.0, 1.0).is_err());
        assert!(KineticParams::from_transport(0.1, 0.0, 0.0).is_err());
        assert!(KineticParams::from_transport(f64::NAN, 0.0, 1.0).is_err());
        assert!(KineticParams::from_transport(0.1, f64::INFINITY, 1.0).is_err());
        assert!(PhysicalParams::new(0.5, 0.0, 0.01).is_err());
        assert!(PhysicalParams::new(0.5, 0.1, 1.0).is_err());
        assert!(PhysicalParams::new(-0.5, 0.1, 0.1).is_err());
    }

    #[test]
    fn equal_frequency_and_collision_rate() {
        let p = PhysicalParams::new(0.3, 0.3, 0.2).unwrap();
        let kp = KineticParams::from_plasma(&p).unwrap();
        assert_eq!(kp.omega_tau(), 1.0);
    }

    #[test]
    fn plasma_form_matches_direct_formulas() {
        for &(g, e, v) in &[(0.8, 0.1, 0.001), (0.5, 0.5, 0.01), (0.02, 0.003, 0.3)] {
            let p = PhysicalParams::new(g, e, v).unwrap();
            let kp = KineticParams::from_plasma(&p).unwrap();
            assert!(close(kp.a(), p.a_direct(), 1e-12), "a mismatch at {g},{e},{v}");
            assert!(close(kp.b(), p.b_direct(), 1e-12), "b mismatch at {g},{e},{v}");
            let d1 = 1.0 / kp.a();
            let d2 = p.delta_closed_form();
            assert!((d1 - d2).norm() / d1.norm() < 1e-12);
            assert_eq!(kp.z0().re, 1.0);
            assert!(kp.a().is_finite() && kp.b().is_finite());
        }
    }

    proptest::proptest! {
        #[test]
        fn invariants_for_random_points(wt in 0.0f64..10.0, q in 0.0f64..1.0, alpha in 1e-4f64..1e3) {
            let kp = KineticParams::from_transport(wt, q, alpha).unwrap();
            let z0 = kp.z0();
            proptest::prop_assert_eq!(z0.re, 1.0);
            let z3 = z0 * z0 * z0;
            proptest::prop_assert!((kp.a() * z3 + I * alpha).norm() <= 1e-14 * alpha);
            proptest::prop_assert!((kp.b() * z0 * z0 - q * q).norm() <= 1e-14 * (q * q).max(1e-300));
            proptest::prop_assert!((kp.delta() * kp.a() - 1.0).norm() < 1e-14);
        }

        #[test]
        fn delta_two_ways(g in 1e-4f64..2.0, e in 1e-4f64..2.0, v in 1e-4f64..0.5) {
            let p = PhysicalParams::new(g, e, v).unwrap();
            let kp = KineticParams::from_plasma(&p).unwrap();
            let d1 = 1.0 / kp.a();
            let d2 = p.delta_closed_form();
            proptest::prop_assert!((d1 - d2).norm() / d1.norm() < 1e-12);
        }
    }
}
