//! Leading symbols of the Hessians of `ζ_L(s)` and `ζ_{D²}(s)` at the round
//! sphere, their Gamma prefactors at `s = 0`, and the sign chain that decides
//! whether `det` or `ζ(0)` is locally extremal.
//!
//! On the symbol level the Hessian pairs a symmetric `k` with itself through
//!
//! ```text
//! P(s) · extra · |ξ|^{n−2s} · ( a (tr KΠ)² + b tr (KΠ)² ),   Π = 1 − ξξᵀ/|ξ|²,
//! ```
//!
//! and on data with `t = tr KΠ`, `u = tr (KΠ)²` the only constraint is the
//! Cauchy–Schwarz bound `t² ≤ (n−1) u`. Definiteness of the bracket is
//! therefore read off the two extreme rays `t = 0` and `K ∝ Π`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::exact::{factorial, gamma_half_integer, PiMultiple};
use crate::linalg::{dot, Mat};
use crate::scalar::{RealScalar, Scalar};
use crate::special::{gamma, gamma_sign};

/// Coefficients of `a·(tr KΠ)² + b·tr((KΠ)²)`, scaled by `extra_factor`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadFormCoeffs<T> {
    pub a: T,
    pub b: T,
    pub extra_factor: T,
}

/// A symmetric `k` and a nonzero covector `ξ` at one point of `T*Sⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointData<T> {
    pub n: usize,
    pub k: Mat<T>,
    pub xi: Vec<T>,
}

impl<T: Scalar> PointData<T> {
    pub fn new(k: Mat<T>, xi: Vec<T>) -> Result<Self> {
        let n = xi.len();
        if k.dim != n {
            return Err(Error::PreconditionViolation(format!("k is {0}×{0} but ξ has {n} entries", k.dim)));
        }
        if !k.is_symmetric() {
            return Err(Error::PreconditionViolation("k must be symmetric".into()));
        }
        if xi.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroCovector);
        }
        Ok(Self { n, k, xi })
    }

    pub fn is_trace_free(&self) -> bool {
        self.k.trace().close_to(&T::zero())
    }

    pub fn is_transverse(&self) -> bool {
        self.k.mul_vec(&self.xi).iter().all(|x| x.close_to(&T::zero()))
    }

    /// `Π = 1 − ξξᵀ/|ξ|²`.
    pub fn projector(&self) -> Mat<T> {
        let norm2 = dot(&self.xi, &self.xi);
        let p = Mat::outer(&self.xi, &self.xi).scale(&(T::one() / norm2));
        &Mat::identity(self.n) - &p
    }

    /// `(t, u) = (tr KΠ, tr (KΠ)²)`.
    pub fn invariants(&self) -> (T, T) {
        let kp = &self.k * &self.projector();
        let t = kp.trace();
        let u = (&kp * &kp).trace();
        (t, u)
    }
}

/// Bracket of the `ζ_L(s)` symbol.
pub fn bracket_l<T: Scalar>(n: u32, s: &T) -> QuadFormCoeffs<T> {
    let m = T::from_int(n as i64 - 1);
    let m2 = m.clone() * m.clone();
    let a = s.clone() * s.clone() / m2.clone() - s.clone() / m2 - T::one() / (T::from_int(2) * m);
    QuadFormCoeffs { a, b: T::from_ratio(1, 2), extra_factor: T::one() }
}

/// Bracket of the `ζ_{D²}(s)` symbol, with the spinor factor `2^{⌊n/2⌋−2}`.
pub fn bracket_d2<T: Scalar>(n: u32, s: &T) -> QuadFormCoeffs<T> {
    let e = (n / 2) as i32 - 2;
    let extra = if e >= 0 { T::from_int(2).pow_u(e as u32) } else { T::one() / T::from_int(2).pow_u((-e) as u32) };
    QuadFormCoeffs {
        a: T::one(),
        b: T::from_int(2) * s.clone() - T::from_int(n as i64 - 1),
        extra_factor: extra,
    }
}

/// `extra · (a t² + b u)` for the point data, exact for rational input.
pub fn bracket_value<T: Scalar>(coeffs: &QuadFormCoeffs<T>, p: &PointData<T>) -> T {
    let (t, u) = p.invariants();
    coeffs.extra_factor.clone() * (coeffs.a.clone() * t.clone() * t + coeffs.b.clone() * u)
}

/// `prefactor · extra · |ξ|^{s_power} · (a t² + b u)`.
pub fn evaluate_form<T: RealScalar>(coeffs: &QuadFormCoeffs<T>, prefactor: T, p: &PointData<T>, s_power: T) -> Result<T> {
    let norm = Float::sqrt(dot(&p.xi, &p.xi));
    if norm.is_zero() {
        return Err(Error::ZeroCovector);
    }
    Ok(prefactor * Float::powf(norm, s_power) * bracket_value(coeffs, p))
}

/// Which limit of the Gamma prefactor at `s = 0` is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefactorMode {
    /// `lim P(s)/s`, `n` odd; feeds `ζ′(0)` and the determinant.
    DetDerivativeAtZero,
    /// `lim P(s)`, `n` even; feeds `ζ(0)`.
    Zeta0LimitAtZero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prefactor {
    pub exact: PiMultiple,
    pub value: f64,
    pub sign: i32,
}

/// `P(s) = (4π)^{−n/2} Γ(s−n/2) Γ(n/2+1−s)² / (Γ(s) Γ(n+2−2s))` in floating
/// point.
pub fn raw_prefactor(n: u32, s: f64) -> f64 {
    let h = n as f64 / 2.0;
    (4.0 * std::f64::consts::PI).powf(-h) * gamma(s - h) * gamma(h + 1.0 - s).powi(2)
        / (gamma(s) * gamma(n as f64 + 2.0 - 2.0 * s))
}

/// Exact limit of the prefactor at `s = 0` in the given mode.
///
/// The sign comes from pole counting, `sign Γ(−n/2) = (−1)^{(n+1)/2}` for odd
/// `n`, and `(−1)^{n/2}` from `Γ(s−m)/Γ(s) → (−1)^m/m!` for even `n`.
pub fn gamma_prefactor(n: u32, mode: PrefactorMode) -> Result<Prefactor> {
    if n < 2 {
        return Err(Error::PreconditionViolation(format!("n = {n} too small")));
    }
    let four_pi = PiMultiple::new(BigRational::from_integer(BigInt::from(1) << (n as usize)), 0)
        * PiMultiple { coeff: BigRational::from_integer(1.into()), half_pi_exp: n as i32, root_two: 0 };
    let gamma_top = gamma_half_integer(n as i64 + 2).expect("positive");
    let ratio = gamma_top.clone() * gamma_top / PiMultiple::rational(BigRational::from_integer(factorial(n + 1)));
    let exact = match mode {
        PrefactorMode::DetDerivativeAtZero => {
            if n % 2 == 0 {
                return Err(Error::ParityError(format!("determinant prefactor needs odd n, got {n}")));
            }
            let g = gamma_half_integer(-(n as i64)).expect("odd n is not a pole");
            debug_assert_eq!(g.sign(), gamma_sign(-(n as f64) / 2.0));
            g * ratio / four_pi
        }
        PrefactorMode::Zeta0LimitAtZero => {
            if n % 2 == 1 {
                return Err(Error::ParityError(format!("ζ(0) prefactor needs even n, got {n}")));
            }
            let m = n / 2;
            let sign = if m % 2 == 0 { 1 } else { -1 };
            let lim = PiMultiple::rational(BigRational::new(sign.into(), factorial(m)));
            lim * ratio / four_pi
        }
    };
    Ok(Prefactor { value: exact.to_f64(), sign: exact.sign(), exact })
}

/// Two-point Richardson estimate of the `s → 0` limit of the raw prefactor
/// (divided by `s` in determinant mode), at `s₁ = 1e−6`, `s₂ = 1e−7`.
pub fn prefactor_richardson(n: u32, mode: PrefactorMode) -> f64 {
    let f = |s: f64| match mode {
        PrefactorMode::DetDerivativeAtZero => raw_prefactor(n, s) / s,
        PrefactorMode::Zeta0LimitAtZero => raw_prefactor(n, s),
    };
    let (s1, s2) = (1e-6, 1e-7);
    (s1 * f(s2) - s2 * f(s1)) / (s1 - s2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketDefiniteness {
    PosDef,
    PosSemidef,
    NegDef,
    NegSemidef,
    Indefinite,
    /// The bracket vanishes on every admissible `(t, u)`.
    Zero,
}

impl BracketDefiniteness {
    /// `+1` for the positive classes, `−1` for the negative ones, `0`
    /// otherwise.
    pub fn sign(self) -> i32 {
        match self {
            BracketDefiniteness::PosDef | BracketDefiniteness::PosSemidef => 1,
            BracketDefiniteness::NegDef | BracketDefiniteness::NegSemidef => -1,
            _ => 0,
        }
    }
}

impl fmt::Display for BracketDefiniteness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BracketDefiniteness::PosDef => "POS_DEF",
            BracketDefiniteness::PosSemidef => "POS_SEMIDEF",
            BracketDefiniteness::NegDef => "NEG_DEF",
            BracketDefiniteness::NegSemidef => "NEG_SEMIDEF",
            BracketDefiniteness::Indefinite => "INDEFINITE",
            BracketDefiniteness::Zero => "ZERO",
        };
        f.write_str(s)
    }
}

/// Classifies `a t² + b u` on `KΠ ≠ 0`, i.e. on the cone `0 ≤ t² ≤ m u`,
/// `u > 0`, from its values `b` (trace-free ray) and `am + b` (ray `K ∝ Π`).
pub fn frame_definiteness<T: Scalar>(coeffs: &QuadFormCoeffs<T>, m: u32) -> BracketDefiniteness {
    assert!(m >= 2, "frame dimension must be at least 2");
    let tf = coeffs.b.sign();
    let pure = (coeffs.a.clone() * T::from_int(m as i64) + coeffs.b.clone()).sign();
    match (tf, pure) {
        (1, 1) => BracketDefiniteness::PosDef,
        (-1, -1) => BracketDefiniteness::NegDef,
        (0, 0) => BracketDefiniteness::Zero,
        (a, b) if a >= 0 && b >= 0 => BracketDefiniteness::PosSemidef,
        (a, b) if a <= 0 && b <= 0 => BracketDefiniteness::NegSemidef,
        _ => BracketDefiniteness::Indefinite,
    }
}

/// Definiteness of the bracket as a form on symmetric `k`. Every `k` with
/// `KΠ = 0` is null, so the strict classes of [`frame_definiteness`] become
/// semidefinite here.
pub fn bracket_definiteness<T: Scalar>(coeffs: &QuadFormCoeffs<T>, m: u32) -> BracketDefiniteness {
    match frame_definiteness(coeffs, m) {
        BracketDefiniteness::PosDef => BracketDefiniteness::PosSemidef,
        BracketDefiniteness::NegDef => BracketDefiniteness::NegSemidef,
        other => other,
    }
}

/// Rays on which the bracket vanishes, among the two extremes.
pub fn null_rays<T: Scalar>(coeffs: &QuadFormCoeffs<T>, m: u32) -> Vec<&'static str> {
    let mut out = Vec::new();
    if coeffs.b.is_zero() {
        out.push("trace-free KΠ");
    }
    if (coeffs.a.clone() * T::from_int(m as i64) + coeffs.b.clone()).is_zero() {
        out.push("K ∝ Π");
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Functional {
    DetL,
    Zeta0L,
    DetD2,
    Zeta0D2,
}

impl Functional {
    pub const ALL: [Functional; 4] = [Functional::DetL, Functional::Zeta0L, Functional::DetD2, Functional::Zeta0D2];

    pub fn needs_odd_dimension(self) -> bool {
        matches!(self, Functional::DetL | Functional::DetD2)
    }

    pub fn applies_to(self, n: u32) -> bool {
        n >= 3 && (n % 2 == 1) == self.needs_odd_dimension()
    }

    fn label(self) -> &'static str {
        match self {
            Functional::DetL => "det L",
            Functional::Zeta0L => "ζ_L(0)",
            Functional::DetD2 => "det D²",
            Functional::Zeta0D2 => "ζ_{D²}(0)",
        }
    }

    fn bracket_sign(self, n: u32) -> i32 {
        let zero = BigRational::from_int(0);
        let m = n - 1;
        match self {
            Functional::DetL | Functional::Zeta0L => bracket_definiteness(&bracket_l(n, &zero), m).sign(),
            Functional::DetD2 | Functional::Zeta0D2 => bracket_definiteness(&bracket_d2(n, &zero), m).sign(),
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Functional::DetL => "DET_L",
            Functional::Zeta0L => "ZETA0_L",
            Functional::DetD2 => "DET_D2",
            Functional::Zeta0D2 => "ZETA0_D2",
        };
        f.write_str(s)
    }
}

/// Result of the sign chain for one functional in one dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalStatement {
    pub functional: Functional,
    pub n: u32,
    pub k: u32,
    pub prefactor_sign: i32,
    pub bracket_sign: i32,
    /// Sign of the Hessian coefficient `c` in front of `T₀`.
    pub c_sign: i32,
    /// `ε` such that `ε·F` has a local maximum at the round metric.
    pub maximized_sign: i32,
    pub statement: String,
}

/// Runs the sign chain: `sign c = −sign P_det · sign bracket` for
/// determinants (`det = exp(−ζ′(0))`), `sign c = sign P_ζ · sign bracket`
/// for `ζ(0)`. `c > 0` makes `F` a local minimum, so `−F` is maximal.
pub fn extremal_classification(functional: Functional, n: u32) -> Result<ExtremalStatement> {
    if n < 3 || !functional.applies_to(n) {
        return Err(Error::ParityError(format!(
            "{functional} is only defined here for {} n ≥ 3, got {n}",
            if functional.needs_odd_dimension() { "odd" } else { "even" }
        )));
    }
    let k = n / 2;
    let bracket_sign = functional.bracket_sign(n);
    let (prefactor_sign, c_sign) = if functional.needs_odd_dimension() {
        let p = gamma_prefactor(n, PrefactorMode::DetDerivativeAtZero)?.sign;
        (p, -p * bracket_sign)
    } else {
        let p = gamma_prefactor(n, PrefactorMode::Zeta0LimitAtZero)?.sign;
        (p, p * bracket_sign)
    };
    let maximized_sign = -c_sign;
    let statement = format!(
        "{}{} is a local maximum at the round S^{n}",
        if maximized_sign < 0 { "-" } else { "" },
        functional.label()
    );
    Ok(ExtremalStatement { functional, n, k, prefactor_sign, bracket_sign, c_sign, maximized_sign, statement })
}

/// The signs `ε` stated for the four extremality results: `(−1)^{k+1}` for
/// the conformal Laplacian, `(−1)^k` for the squared Dirac operator.
pub fn expected_maximized_sign(functional: Functional, n: u32) -> i32 {
    let k = n / 2;
    let odd_k = k % 2 == 1;
    match functional {
        Functional::DetL | Functional::Zeta0L => {
            if odd_k {
                1
            } else {
                -1
            }
        }
        Functional::DetD2 | Functional::Zeta0D2 => {
            if odd_k {
                -1
            } else {
                1
            }
        }
    }
}
