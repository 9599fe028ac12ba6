//! Radial Green's functions of `L`, `L²` and `D²` on the round `Sⁿ`, `n = 2k+1`,
//! their regular parts at coincidence, and the trace values built from them.
//!
//! Radii: `r` is the geodesic distance, `z = cos r`, `X = |x| = tan(r/2)`.
//! With `m = (n−2)/2` and `K = D_n/(n−2)`,
//!
//! ```text
//! G_L(r)  = C_n / sin^{n−2}(r/2)            = D_n (1−z)^{−m}
//! G_L²(r) = K [ (1−z)^{1−m} + (1+z)^{−m} J(z) ]
//! J(z)    = ∫_{−1}^z ((1+w)/(1−w))^m dw      = 4 ∫_X^∞ τ^{3−n}(1+τ²)^{−2} dτ
//! G_D²(X) = (1/ω_{n−1}) (4/(1+X²))^{(1−n)/2} ∫_X^∞ 2 τ^{1−n}/(1+τ²) dτ
//! ```

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::antiderivative::tail;
use crate::error::{Error, Result};
use crate::exact::{factorial, sphere_volume_exact, PiMultiple};
use crate::quadrature::{adaptive, adaptive_tail};

/// Volume of the unit `m`-sphere.
pub fn sphere_volume(m: u32) -> f64 {
    sphere_volume_exact(m).to_f64()
}

fn check_odd(n: u32) -> Result<()> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::ParityError(format!("needs odd n ≥ 3, got {n}")));
    }
    Ok(())
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r < PI) {
        return Err(Error::DomainError(format!("radius {r} outside (0, π)")));
    }
    Ok(())
}

/// `ω_{n−1}`, `C_n = 1/(2^{n−1}(n−2)ω_{n−1})` and `D_n = 2^{(n−2)/2} C_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereConstants {
    pub n: u32,
    pub omega: f64,
    pub omega_exact: PiMultiple,
    pub c_n: PiMultiple,
    pub d_n: PiMultiple,
}

impl SphereConstants {
    pub fn new(n: u32) -> Result<Self> {
        check_odd(n)?;
        let omega_exact = sphere_volume_exact(n - 1);
        let denom = BigInt::from(1u8) << (n as usize - 1);
        let c_n = PiMultiple::rational(BigRational::new(1.into(), denom * BigInt::from(n - 2))) / omega_exact.clone();
        let d_n = c_n.clone() * PiMultiple::sqrt_two_pow(n as i32 - 2);
        Ok(Self { n, omega: omega_exact.to_f64(), omega_exact, c_n, d_n })
    }

    fn m(&self) -> f64 {
        (self.n as f64 - 2.0) / 2.0
    }
}

/// A radial function with optional closed-form first and second derivatives.
pub trait RadialProfile {
    fn value(&self, r: f64) -> f64;

    fn derivatives(&self, _r: f64) -> Option<(f64, f64)> {
        None
    }
}

/// Wraps a closure as a [`RadialProfile`] without derivatives.
pub struct FnProfile<F>(pub F);

impl<F: Fn(f64) -> f64> RadialProfile for FnProfile<F> {
    fn value(&self, r: f64) -> f64 {
        (self.0)(r)
    }
}

/// Fourth-order central differences, step shrunk near the ends of `(0, π)`.
fn finite_difference<P: RadialProfile + ?Sized>(f: &P, r: f64) -> (f64, f64) {
    let h = 1e-3f64.min(r / 4.0).min((PI - r) / 4.0);
    let (m2, m1, z, p1, p2) = (f.value(r - 2.0 * h), f.value(r - h), f.value(r), f.value(r + h), f.value(r + 2.0 * h));
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let d2 = (-m2 + 16.0 * m1 - 30.0 * z + 16.0 * p1 - p2) / (12.0 * h * h);
    (d1, d2)
}

/// `L f = −f″ − (n−1) cot r f′ + n(n−2)/4 f` on a radial profile.
pub fn radial_l_apply<P: RadialProfile + ?Sized>(n: u32, f: &P, r: f64) -> Result<f64> {
    check_radius(r)?;
    let (d1, d2) = f.derivatives(r).unwrap_or_else(|| finite_difference(f, r));
    let n_ = n as f64;
    Ok(-d2 - (n_ - 1.0) * r.cos() / r.sin() * d1 + n_ * (n_ - 2.0) / 4.0 * f.value(r))
}

/// `G_L(r) = C_n / sin^{n−2}(r/2)`, `0 < r ≤ π`.
pub fn green_l(n: u32, r: f64) -> Result<f64> {
    if !(r > 0.0 && r <= PI) {
        return Err(Error::DomainError(format!("radius {r} outside (0, π]")));
    }
    let c = SphereConstants::new(n)?;
    Ok(c.c_n.to_f64() / (r / 2.0).sin().powi(n as i32 - 2))
}

fn green_l_derivatives(c: &SphereConstants, r: f64) -> (f64, f64) {
    let cn = c.c_n.to_f64();
    let p = c.n as f64 - 2.0;
    let (s, co) = (r / 2.0).sin_cos();
    let d1 = -cn * p / 2.0 * s.powf(-p - 1.0) * co;
    let d2 = cn * p / 4.0 * ((p + 1.0) * s.powf(-p - 2.0) * co * co + s.powf(-p));
    (d1, d2)
}

/// `J(z) = 4 ∫_X^∞ τ^{3−n}(1+τ²)^{−2} dτ`, exact antiderivative route.
fn j_exact(n: u32, x: f64) -> f64 {
    4.0 * tail(n - 3, 2, x)
}

/// `J(z) = ∫_{−1}^z ((1+w)/(1−w))^m dw` by adaptive quadrature in `w`.
fn j_quadrature(n: u32, z: f64, tol: f64) -> Result<f64> {
    let m = (n as f64 - 2.0) / 2.0;
    adaptive(|w: f64| ((1.0 + w) / (1.0 - w)).powf(m), -1.0, z, tol, tol)
}

fn l2_from_j(c: &SphereConstants, z: f64, j: f64) -> f64 {
    let m = c.m();
    let k = c.d_n.to_f64() / (c.n as f64 - 2.0);
    k * ((1.0 - z).powf(1.0 - m) + (1.0 + z).powf(-m) * j)
}

/// `G_L²(r)` through the exact antiderivative.
pub fn green_l2(n: u32, r: f64) -> Result<f64> {
    check_radius(r)?;
    let c = SphereConstants::new(n)?;
    Ok(l2_from_j(&c, r.cos(), j_exact(n, (r / 2.0).tan())))
}

/// `G_L²(r)` with `J` integrated numerically in `w`.
pub fn green_l2_quadrature(n: u32, r: f64, tol: f64) -> Result<f64> {
    check_radius(r)?;
    let c = SphereConstants::new(n)?;
    let z = r.cos();
    Ok(l2_from_j(&c, z, j_quadrature(n, z, tol)?))
}

/// The particular part alone, `K[(1+z)^{−m}J − z(1−z)^{−m}]`, before the
/// homogeneous `A(1−z)^{−m}` with `A = K` is added.
pub fn green_l2_particular(n: u32, r: f64) -> Result<f64> {
    check_radius(r)?;
    let c = SphereConstants::new(n)?;
    let (z, m) = (r.cos(), c.m());
    let k = c.d_n.to_f64() / (n as f64 - 2.0);
    Ok(k * ((1.0 + z).powf(-m) * j_exact(n, (r / 2.0).tan()) - z * (1.0 - z).powf(-m)))
}

fn green_l2_derivatives(c: &SphereConstants, r: f64) -> (f64, f64) {
    let m = c.m();
    let k = c.d_n.to_f64() / (c.n as f64 - 2.0);
    let z = r.cos();
    let j = j_exact(c.n, (r / 2.0).tan());
    let (a, b) = (1.0 - z, 1.0 + z);
    let gz = k * (m * a.powf(-m) - m * b.powf(-m - 1.0) * j);
    let gzz = k * (m * m * a.powf(-m - 1.0) + m * (m + 1.0) * b.powf(-m - 2.0) * j - m * a.powf(-m) / b);
    let (s, co) = r.sin_cos();
    (-s * gz, s * s * gzz - co * gz)
}

/// `(4/(1+X²))^{(1−n)/2}`.
fn d2_prefactor(n: u32, x: f64) -> f64 {
    (4.0 / (1.0 + x * x)).powf((1.0 - n as f64) / 2.0)
}

/// `(−1)^k [π/2 − arctan X − Σ_{j<k} (−1)^j X^{−2j−1}/(2j+1)]`, which equals
/// `∫_X^∞ τ^{1−n}(1+τ²)^{−1} dτ`.
pub fn d2_bracket(n: u32, x: f64) -> f64 {
    let k = (n - 1) / 2;
    let mut s = FRAC_PI_2 - x.atan();
    for j in 0..k {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        s -= sign * x.powi(-(2 * j as i32) - 1) / (2 * j + 1) as f64;
    }
    if k % 2 == 0 {
        s
    } else {
        -s
    }
}

/// `G_D²` at stereographic radius `X` via the arctan closed form (the exact
/// antiderivative, switched to its series for large `X`).
pub fn green_d2(n: u32, x_norm: f64) -> Result<f64> {
    if !(x_norm > 0.0) {
        return Err(Error::DomainError(format!("|x| = {x_norm} must be positive")));
    }
    let c = SphereConstants::new(n)?;
    Ok(d2_prefactor(n, x_norm) / c.omega * 2.0 * tail(n - 1, 1, x_norm))
}

/// `G_D²` at stereographic radius `X` with the `τ`-integral done numerically.
pub fn green_d2_quadrature(n: u32, x_norm: f64, tol: f64) -> Result<f64> {
    if !(x_norm > 0.0) {
        return Err(Error::DomainError(format!("|x| = {x_norm} must be positive")));
    }
    let c = SphereConstants::new(n)?;
    let e = 1 - n as i32;
    let integral = adaptive_tail(|t: f64| 2.0 * t.powi(e) / (1.0 + t * t), x_norm, tol, tol)?;
    Ok(d2_prefactor(n, x_norm) / c.omega * integral)
}

/// The small-`|x|` bracket for the `L²` integral exactly as printed, with the
/// term `−|x|/(1+|x|²)²`.
pub fn printed_l2_bracket(n: u32, x: f64) -> f64 {
    l2_bracket_with(n, x, x / (1.0 + x * x).powi(2))
}

/// The same bracket with `−|x|/(2(1+|x|²))`, which equals
/// `¼ ∫_X^∞ τ^{1−n}(1+τ²)^{−2} dτ`.
pub fn corrected_l2_bracket(n: u32, x: f64) -> f64 {
    l2_bracket_with(n, x, x / (2.0 * (1.0 + x * x)))
}

fn l2_bracket_with(n: u32, x: f64, middle: f64) -> f64 {
    let k = (n - 1) / 2;
    let n_ = n as f64;
    let mut s = n_ * PI / 4.0 - n_ / 2.0 * x.atan() - middle;
    for j in 0..k {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        s -= sign * (k - j) as f64 / (2 * j + 1) as f64 * x.powi(-(2 * j as i32) - 1);
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    sign / 4.0 * s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenKind {
    L,
    L2,
    D2,
}

impl std::fmt::Display for GreenKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GreenKind::L => "L",
            GreenKind::L2 => "L2",
            GreenKind::D2 => "D2",
        })
    }
}

/// A radial Green's function with its small-`r` singular exponents.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGreen {
    pub dim_n: u32,
    pub kind: GreenKind,
    /// Exponents `s` of the terms `r^s` in the singular part, most singular
    /// first.
    pub singular_orders: Vec<i32>,
    pub constants: SphereConstants,
}

impl RadialGreen {
    pub fn new(n: u32, kind: GreenKind) -> Result<Self> {
        let constants = SphereConstants::new(n)?;
        let lead = match kind {
            GreenKind::L | GreenKind::D2 => n as i32 - 2,
            GreenKind::L2 => n as i32 - 4,
        };
        let singular_orders = (1..=lead).rev().step_by(2).map(|s| -s).collect();
        Ok(Self { dim_n: n, kind, singular_orders, constants })
    }

    pub fn evaluate(&self, r: f64) -> Result<f64> {
        match self.kind {
            GreenKind::L => green_l(self.dim_n, r),
            GreenKind::L2 => green_l2(self.dim_n, r),
            GreenKind::D2 => {
                check_radius(r)?;
                green_d2(self.dim_n, (r / 2.0).tan())
            }
        }
    }

    pub fn regular_part(&self, cfg: &RegularPartConfig) -> Result<RegularPart> {
        regular_part_of(|r| self.value(r), &self.singular_orders, cfg)
    }
}

impl RadialProfile for RadialGreen {
    fn value(&self, r: f64) -> f64 {
        self.evaluate(r).unwrap_or(f64::NAN)
    }

    fn derivatives(&self, r: f64) -> Option<(f64, f64)> {
        match self.kind {
            GreenKind::L => Some(green_l_derivatives(&self.constants, r)),
            GreenKind::L2 => Some(green_l2_derivatives(&self.constants, r)),
            GreenKind::D2 => None,
        }
    }
}

/// Settings of the regular-part extraction.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularPartConfig {
    pub window: (f64, f64),
    pub nodes: usize,
    pub richardson_levels: usize,
    /// First Richardson step; the geometric mean of the window when unset.
    pub richardson_start: Option<f64>,
    /// Degree of the polynomial carried next to the singular terms in the fit.
    pub poly_degree: usize,
    /// Relative tolerance on the fit/extrapolation disagreement.
    pub tolerance: f64,
}

impl Default for RegularPartConfig {
    fn default() -> Self {
        Self { window: (1e-3, 1e-1), nodes: 24, richardson_levels: 2, richardson_start: None, poly_degree: 6, tolerance: 1e-6 }
    }
}

impl RegularPartConfig {
    /// Wider window and deeper extrapolation; usable up to `n = 7`, where the
    /// default window loses the constant to cancellation.
    pub fn wide() -> Self {
        Self { window: (1e-2, 0.3), nodes: 32, richardson_levels: 4, richardson_start: Some(0.2), poly_degree: 8, tolerance: 1e-4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularPart {
    pub value: f64,
    pub error_estimate: f64,
    /// Constant from the least-squares fit alone.
    pub fitted: f64,
    /// Constant from Richardson extrapolation of the remainder.
    pub extrapolated: f64,
}

/// Constant term of `f` at `r → 0` after removing `Σ c_s r^s` over
/// `singular_orders`.
///
/// `r^p f(r)` (with `p` the strongest singularity) is fitted by least squares
/// on a geometric grid in the window with the monomials `r^{p+s}` and
/// `r^{p+j}`, `j ≤ poly_degree`; the remainder `f − Σ c_s r^s` is then
/// extrapolated to `r = 0` by Richardson halving from the geometric mean of
/// the window. The two constants must agree to `tolerance`.
pub fn regular_part_of<F: Fn(f64) -> f64>(f: F, singular_orders: &[i32], cfg: &RegularPartConfig) -> Result<RegularPart> {
    let (lo, hi) = cfg.window;
    let p = singular_orders.iter().map(|s| -s).max().unwrap_or(0).max(0);
    let mut exps: Vec<i32> = singular_orders.iter().map(|s| p + s).collect();
    exps.extend((0..=cfg.poly_degree as i32).map(|j| p + j));
    exps.sort_unstable();
    exps.dedup();
    let const_col = exps.iter().position(|&e| e == p).expect("constant column present");

    let ratio = (hi / lo).powf(1.0 / (cfg.nodes as f64 - 1.0));
    let grid: Vec<f64> = (0..cfg.nodes).map(|i| lo * ratio.powi(i as i32)).collect();
    // columns scaled to unit max on the window
    let scale: Vec<f64> = exps.iter().map(|&e| lo.powi(e).max(hi.powi(e))).collect();
    let a = DMatrix::from_fn(grid.len(), exps.len(), |i, j| grid[i].powi(exps[j]) / scale[j]);
    let y = DVector::from_iterator(grid.len(), grid.iter().map(|&r| r.powi(p) * f(r)));
    let sol = a
        .svd(true, true)
        .solve(&y, 1e-15)
        .map_err(|_| Error::FitUnstable { estimate: f64::NAN, tolerance: cfg.tolerance })?;
    let coeff = |e: i32| {
        let j = exps.iter().position(|&x| x == e).expect("column");
        sol[j] / scale[j]
    };
    let fitted = sol[const_col] / scale[const_col];
    let singular: Vec<(i32, f64)> = singular_orders.iter().map(|&s| (s, coeff(p + s))).collect();
    let remainder = |r: f64| f(r) - singular.iter().map(|(s, c)| c * r.powi(*s)).sum::<f64>();

    let h0 = cfg.richardson_start.unwrap_or((lo * hi).sqrt());
    let levels = cfg.richardson_levels;
    let mut table: Vec<f64> = (0..=levels).map(|i| remainder(h0 / 2f64.powi(i as i32))).collect();
    for level in 1..=levels {
        let w = 2f64.powi(level as i32);
        for i in 0..(table.len() - level) {
            table[i] = (w * table[i + 1] - table[i]) / (w - 1.0);
        }
    }
    let extrapolated = table[0];
    let error_estimate = (fitted - extrapolated).abs();
    // relative to the constant, or to |f| at the outer edge when the constant is ~0
    let bound = cfg.tolerance * fitted.abs().max(extrapolated.abs()).max(f(hi).abs());
    if !(error_estimate <= bound) {
        return Err(Error::FitUnstable { estimate: error_estimate, tolerance: bound });
    }
    Ok(RegularPart { value: fitted, error_estimate, fitted, extrapolated })
}

fn q(n: i64, d: BigInt) -> BigRational {
    BigRational::new(n.into(), d)
}

fn sign_pow(e: u32) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `TR L⁻² = (−1)^{k+1} (π²/2^{4k+4}) (2k+1)(2k)!/((2k−1)(k!)²)` on `S^{2k+1}`.
pub fn kv_trace_l2(k: u32) -> PiMultiple {
    assert!(k >= 1, "k must be positive");
    let num = BigInt::from(sign_pow(k + 1) * (2 * k as i64 + 1)) * factorial(2 * k);
    let den = (BigInt::from(1u8) << (4 * k as usize + 4)) * BigInt::from(2 * k as i64 - 1) * factorial(k).pow(2);
    PiMultiple::new(BigRational::new(num, den), 2)
}

/// `TR D⁻² = (−1)^k (π²/2^{2k+1}) (2k)!/(k!)²` on `S^{2k+1}`.
pub fn kv_trace_d2(k: u32) -> PiMultiple {
    assert!(k >= 1, "k must be positive");
    let num = BigInt::from(sign_pow(k)) * factorial(2 * k);
    let den = (BigInt::from(1u8) << (2 * k as usize + 1)) * factorial(k).pow(2);
    PiMultiple::new(BigRational::new(num, den), 2)
}

/// Stated regular part `(−1)^{k+1}(2k+1)π/(2^{2k+4}(2k−1)ω_{2k})` of `G_L²`.
pub fn printed_regular_l2(k: u32) -> PiMultiple {
    let den = (BigInt::from(1u8) << (2 * k as usize + 4)) * BigInt::from(2 * k as i64 - 1);
    PiMultiple::new(q(sign_pow(k + 1) * (2 * k as i64 + 1), den), 1) / sphere_volume_exact(2 * k)
}

/// Regular part `(−1)^k π/(2ω_{2k})` of the printed `G_D²` bracket.
pub fn printed_regular_d2(k: u32) -> PiMultiple {
    PiMultiple::new(q(sign_pow(k), BigInt::from(2)), 1) / sphere_volume_exact(2 * k)
}

/// `vol(Sⁿ) · G^reg` from the numerical pipeline.
pub fn numeric_trace(kind: GreenKind, k: u32, cfg: &RegularPartConfig) -> Result<(f64, RegularPart)> {
    let n = 2 * k + 1;
    let g = RadialGreen::new(n, kind)?;
    let reg = g.regular_part(cfg)?;
    Ok((sphere_volume(n) * reg.value, reg))
}

/// The pipeline applied to the printed `L²` expansion
/// `−D_n(1+z)^{−m}·bracket`; its regular part times `vol(Sⁿ)` reproduces
/// [`kv_trace_l2`].
pub fn printed_l2_profile(n: u32, r: f64) -> f64 {
    let c = SphereConstants::new(n).expect("odd n");
    let z = r.cos();
    -c.d_n.to_f64() * (1.0 + z).powf(-c.m()) * printed_l2_bracket(n, (r / 2.0).tan())
}

/// The printed `D²` closed form without the conformal prefactor.
pub fn printed_d2_profile(n: u32, r: f64) -> f64 {
    let c = SphereConstants::new(n).expect("odd n");
    d2_bracket(n, (r / 2.0).tan()) / c.omega
}

/// Numeric trace against the stated closed form for one `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceComparison {
    pub kind: GreenKind,
    pub k: u32,
    pub numeric: f64,
    pub printed: PiMultiple,
    pub ratio: f64,
    pub error_estimate: f64,
    /// Pipeline on the printed expansion, divided by the printed value.
    pub printed_pipeline_ratio: f64,
}

pub fn compare_trace(kind: GreenKind, k: u32, cfg: &RegularPartConfig) -> Result<TraceComparison> {
    let n = 2 * k + 1;
    let (numeric, reg) = numeric_trace(kind, k, cfg)?;
    let printed = match kind {
        GreenKind::L2 => kv_trace_l2(k),
        GreenKind::D2 => kv_trace_d2(k),
        GreenKind::L => return Err(Error::PreconditionViolation("G_L has no trace value here".into())),
    };
    let orders = RadialGreen::new(n, kind)?.singular_orders;
    let printed_reg = match kind {
        GreenKind::L2 => {
            // the printed expansion keeps all odd orders down to −(n−2)
            let full: Vec<i32> = (1..=(n as i32 - 2)).rev().step_by(2).map(|s| -s).collect();
            regular_part_of(|r| printed_l2_profile(n, r), &full, cfg)?
        }
        _ => regular_part_of(|r| printed_d2_profile(n, r), &orders, cfg)?,
    };
    let p = printed.to_f64();
    Ok(TraceComparison {
        kind,
        k,
        numeric,
        ratio: numeric / p,
        error_estimate: sphere_volume(n) * reg.error_estimate,
        printed_pipeline_ratio: sphere_volume(n) * printed_reg.value / p,
        printed,
    })
}
