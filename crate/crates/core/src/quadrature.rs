//! Quadrature on `[0, T]`: composite Gauss–Legendre panels, Cauchy integrals
//! with product rules near the contour, and an adaptive
//! Gauss–Kronrod integrator for reference values.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, SkinError};
use crate::specfun::HalfPlaneSide;

/// Nodes per panel.
pub const PANEL_ORDER: usize = 16;

/// Bernstein-ellipse parameter above which plain Gauss–Legendre is used for
/// a Cauchy kernel.
const DIRECT_RHO: f64 = 2.5;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

struct Reference {
    x: Vec<f64>,
    w: Vec<f64>,
    /// barycentric weights of the Legendre nodes
    bary: Vec<f64>,
    /// node values to Legendre coefficients
    leg: DMatrix<f64>,
}

fn reference() -> &'static Reference {
    static REF: OnceLock<Reference> = OnceLock::new();
    REF.get_or_init(|| {
        let n = PANEL_ORDER;
        let (x, w) = gauss_legendre(n);
        let bary = (0..n)
            .map(|j| {
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                s * ((1.0 - x[j] * x[j]) * w[j]).sqrt()
            })
            .collect();
        let mut leg = DMatrix::zeros(n, n);
        for j in 0..n {
            let (mut p0, mut p1) = (1.0, x[j]);
            for k in 0..n {
                let pk = if k == 0 { p0 } else { p1 };
                leg[(k, j)] = (2.0 * k as f64 + 1.0) / 2.0 * w[j] * pk;
                if k >= 1 {
                    let kf = k as f64;
                    let next = ((2.0 * kf + 1.0) * x[j] * p1 - kf * p0) / (kf + 1.0);
                    p0 = p1;
                    p1 = next;
                }
            }
        }
        Reference { x, w, bary, leg }
    })
}

/// Barycentric interpolation on one panel's reference nodes.
fn interpolate_reference(vals: &[Complex64], t: f64) -> Complex64 {
    let r = reference();
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for j in 0..PANEL_ORDER {
        let d = t - r.x[j];
        if d == 0.0 {
            return vals[j];
        }
        let c = r.bary[j] / d;
        num += c * vals[j];
        den += c;
    }
    num / den
}

/// Composite Gauss–Legendre discretization of an interval.
#[derive(Debug, Clone)]
pub struct PanelGrid {
    breaks: Vec<f64>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl PanelGrid {
    /// Grid with the given panel break points (ascending, at least two).
    pub fn from_breaks(breaks: Vec<f64>) -> Self {
        let r = reference();
        let mut nodes = Vec::with_capacity((breaks.len() - 1) * PANEL_ORDER);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for p in breaks.windows(2) {
            let c = 0.5 * (p[0] + p[1]);
            let h = 0.5 * (p[1] - p[0]);
            for j in 0..PANEL_ORDER {
                nodes.push(c + h * r.x[j]);
                weights.push(h * r.w[j]);
            }
        }
        Self { breaks, nodes, weights }
    }

    /// Panels on `[0, t_max]`, geometric toward zero down to `2^-depth`, then
    /// of unit length at most.
    pub fn graded(t_max: f64, depth: u32) -> Self {
        let mut breaks = vec![0.0];
        let first = t_max.min(1.0);
        for k in (0..depth).rev() {
            breaks.push(first * 0.5f64.powi(k as i32 + 1));
        }
        breaks.push(first);
        let mut t = first;
        while t < t_max - 1e-12 {
            let next = (t + 1.0).min(t_max);
            breaks.push(next);
            t = next;
        }
        Self::from_breaks(breaks)
    }

    /// Bisect panels until the interpolant of `f` reproduces `f` at the panel
    /// midpoints to `tol·(1 + max|f|)`.
    pub fn refine<F>(self, f: F, tol: f64, max_panels: usize) -> Result<(Self, Vec<Complex64>)>
    where
        F: Fn(f64) -> Complex64,
    {
        let r = reference();
        let mut todo: Vec<(f64, f64)> = self.breaks.windows(2).map(|p| (p[0], p[1])).collect();
        todo.reverse();
        let mut done: Vec<(f64, f64, Vec<Complex64>)> = Vec::new();
        let mut scale = 0.0f64;
        // probe points: midpoints between consecutive reference nodes
        let probes: Vec<f64> = (0..PANEL_ORDER - 1).map(|j| 0.5 * (r.x[j] + r.x[j + 1])).collect();
        while let Some((a, b)) = todo.pop() {
            let c = 0.5 * (a + b);
            let h = 0.5 * (b - a);
            let vals: Vec<Complex64> = r.x.iter().map(|&t| f(c + h * t)).collect();
            for v in &vals {
                scale = scale.max(v.norm());
            }
            let mut err = 0.0f64;
            for &t in &probes {
                let exact = f(c + h * t);
                scale = scale.max(exact.norm());
                err = err.max((interpolate_reference(&vals, t) - exact).norm());
            }
            if !err.is_finite() {
                return Err(SkinError::NonConvergence {
                    stage: "quadrature",
                    detail: format!("non-finite integrand on [{a}, {b}]"),
                });
            }
            if err > tol * (1.0 + scale) && h > 1e-10 * (1.0 + c.abs()) {
                if done.len() + todo.len() + 2 > max_panels {
                    return Err(SkinError::NonConvergence {
                        stage: "quadrature",
                        detail: format!("panel budget {max_panels} exhausted near {c}"),
                    });
                }
                todo.push((c, b));
                todo.push((a, c));
            } else {
                done.push((a, b, vals));
            }
        }
        let mut breaks = vec![done[0].0];
        let mut values = Vec::with_capacity(done.len() * PANEL_ORDER);
        for (_, b, vals) in done {
            breaks.push(b);
            values.extend(vals);
        }
        Ok((Self::from_breaks(breaks), values))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn n_panels(&self) -> usize {
        self.breaks.len() - 1
    }

    pub fn start(&self) -> f64 {
        self.breaks[0]
    }

    pub fn end(&self) -> f64 {
        *self.breaks.last().unwrap()
    }

    /// Sample `f` at the nodes.
    pub fn sample<F: Fn(f64) -> Complex64>(&self, f: F) -> Vec<Complex64> {
        self.nodes.iter().map(|&t| f(t)).collect()
    }

    /// Same grid with every panel split in two.
    pub fn doubled(&self) -> Self {
        let mut breaks = vec![self.breaks[0]];
        for p in self.breaks.windows(2) {
            breaks.push(0.5 * (p[0] + p[1]));
            breaks.push(p[1]);
        }
        Self::from_breaks(breaks)
    }
}

/// A function tabulated on a [`PanelGrid`].
#[derive(Debug, Clone)]
pub struct Density {
    grid: PanelGrid,
    values: Vec<Complex64>,
}

impl Density {
    pub fn new(grid: PanelGrid, values: Vec<Complex64>) -> Self {
        assert_eq!(grid.nodes.len(), values.len());
        Self { grid, values }
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: PanelGrid, f: F) -> Self {
        let values = grid.sample(f);
        Self { grid, values }
    }

    pub fn grid(&self) -> &PanelGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Same grid, values multiplied pointwise by `g(τ)`.
    pub fn map<F: Fn(f64, Complex64) -> Complex64>(&self, g: F) -> Self {
        let values = self.grid.nodes.iter().zip(&self.values).map(|(&t, &v)| g(t, v)).collect();
        Self { grid: self.grid.clone(), values }
    }

    /// Interpolated value; zero outside the grid.
    pub fn interpolate(&self, t: f64) -> Complex64 {
        let br = &self.grid.breaks;
        if t < br[0] || t > *br.last().unwrap() {
            return Complex64::new(0.0, 0.0);
        }
        let k = match br.binary_search_by(|b| b.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(br.len() - 2),
            Err(i) => i - 1,
        };
        let c = 0.5 * (br[k] + br[k + 1]);
        let h = 0.5 * (br[k + 1] - br[k]);
        interpolate_reference(&self.values[k * PANEL_ORDER..(k + 1) * PANEL_ORDER], (t - c) / h)
    }

    /// ∫ f(τ) g(τ) dτ
    pub fn integrate_with<G: Fn(f64) -> Complex64>(&self, g: G) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for ((&t, &w), &v) in self.grid.nodes.iter().zip(&self.grid.weights).zip(&self.values) {
            s += w * v * g(t);
        }
        s
    }

    /// ∫ f(τ) dτ
    pub fn integral(&self) -> Complex64 {
        self.integrate_with(|_| Complex64::new(1.0, 0.0))
    }

    /// `∫ f(τ)/(τ - z) dτ`. For real `z` the limit from `side` is taken.
    pub fn cauchy(&self, z: Complex64, side: HalfPlaneSide) -> Complex64 {
        let r = reference();
        let br = &self.grid.breaks;
        let mut z = z;
        if z.im == 0.0 {
            let tiny = 2e-15 * (1.0 + z.re.abs());
            if br.iter().any(|&b| (b - z.re).abs() < tiny) {
                // off a panel end by the same absolute step for every panel
                z.re += 2.0 * tiny;
            }
        }
        let mut total = Complex64::new(0.0, 0.0);
        for k in 0..br.len() - 1 {
            let c = 0.5 * (br[k] + br[k + 1]);
            let h = 0.5 * (br[k + 1] - br[k]);
            let vals = &self.values[k * PANEL_ORDER..(k + 1) * PANEL_ORDER];
            let w = (z - c) / h;
            if bernstein_rho(w) >= DIRECT_RHO {
                for j in 0..PANEL_ORDER {
                    total += r.w[j] * vals[j] / (r.x[j] - w);
                }
            } else {
                total += helsing_panel(vals, w, side);
            }
        }
        total
    }
}

/// Parameter of the Bernstein ellipse through `w` (foci ±1).
pub fn bernstein_rho(w: Complex64) -> f64 {
    let s = (w * w - 1.0).sqrt();
    (w + s).norm().max((w - s).norm())
}

/// `∫_{-1}^{1} f(t)/(t - w) dt` with `f` given at the Legendre nodes.
fn helsing_panel(vals: &[Complex64], w: Complex64, side: HalfPlaneSide) -> Complex64 {
    let r = reference();
    let mut w = w;
    let on_axis = w.im == 0.0;
    if on_axis && ((w.re - 1.0).abs() < 1e-14 || (w.re + 1.0).abs() < 1e-14) {
        // shift off a panel end, always to the right so that neighbouring
        // panels agree on which one contains the point
        w.re += 1e-13;
    }
    let p0 = if on_axis {
        let t0 = w.re;
        let base = ((1.0 - t0) / (1.0 + t0)).abs().ln();
        if t0.abs() < 1.0 {
            Complex64::new(base, std::f64::consts::PI * side.sign())
        } else {
            Complex64::new(base, 0.0)
        }
    } else {
        (1.0 - w).ln() - (-1.0 - w).ln()
    };
    // Legendre coefficients are exact under the nodes' discrete orthogonality;
    // ∫ P_k(t)/(t - w) dt = -2 Q_k(w) with Q_k from the three-term recurrence.
    let mut q_prev = -0.5 * p0;
    let mut q_cur = w * q_prev - 1.0;
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..PANEL_ORDER {
        let qk = if k == 0 { q_prev } else { q_cur };
        let mut ck = Complex64::new(0.0, 0.0);
        for j in 0..PANEL_ORDER {
            ck += r.leg[(k, j)] * vals[j];
        }
        total += -2.0 * ck * qk;
        if k >= 1 {
            let kf = k as f64;
            let next = ((2.0 * kf + 1.0) * w * q_cur - kf * q_prev) / (kf + 1.0);
            q_prev = q_cur;
            q_cur = next;
        }
    }
    total
}

const GK_X: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const GK_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * GK_WK[7];
    let mut g = fc * GK_WG[3];
    for i in 0..7 {
        let f1 = f(c - h * GK_X[i]);
        let f2 = f(c + h * GK_X[i]);
        k += (f1 + f2) * GK_WK[i];
        if i % 2 == 1 {
            g += (f1 + f2) * GK_WG[i / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Adaptive Gauss–Kronrod (7/15) integration of a complex function.
pub fn adaptive_gk<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<Complex64> {
    let mut intervals = vec![{
        let (v, e) = gk15(&f, a, b);
        (a, b, v, e)
    }];
    for _ in 0..20_000 {
        let total: Complex64 = intervals.iter().map(|s| s.2).sum();
        let err: f64 = intervals.iter().map(|s| s.3).sum();
        if !total.is_finite() {
            break;
        }
        if err <= abs_tol.max(rel_tol * total.norm()) {
            return Ok(total);
        }
        let (idx, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .unwrap();
        let (lo, hi, _, _) = intervals.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
    Err(SkinError::NonConvergence {
        stage: "quadrature",
        detail: format!("adaptive Gauss-Kronrod on [{a}, {b}] did not reach tolerance"),
    })
}
