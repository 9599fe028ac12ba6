//! Exact antiderivatives of `τ^{−a}(1+τ²)^{−p}` for even `a ≥ 0`, `p ≥ 0`.
//!
//! Every such antiderivative has the shape
//!
//! ```text
//! c·arctan τ + Σ cₑ τ^e + Σ d_q τ/(1+τ²)^q
//! ```
//!
//! with rational coefficients, built from
//!
//! ```text
//! I(a, p) = I(a, p−1) − I(a−2, p)
//! I(0, p) = τ/(2(p−1)(1+τ²)^{p−1}) + (2p−3)/(2(p−1)) · I(0, p−1)
//! I(0, 1) = arctan τ,   I(a, 0) = τ^{1−a}/(1−a).
//! ```

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::FRAC_PI_2;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TauAntiderivative {
    pub atan: BigRational,
    /// `e ↦ cₑ` for the terms `cₑ τ^e`.
    pub powers: BTreeMap<i64, BigRational>,
    /// `q ↦ d_q` for the terms `d_q τ/(1+τ²)^q`.
    pub fractions: BTreeMap<u32, BigRational>,
}

impl TauAntiderivative {
    fn add_scaled(&mut self, other: &Self, c: &BigRational) {
        self.atan += &other.atan * c;
        for (e, v) in &other.powers {
            *self.powers.entry(*e).or_insert_with(BigRational::zero) += v * c;
        }
        for (q, v) in &other.fractions {
            *self.fractions.entry(*q).or_insert_with(BigRational::zero) += v * c;
        }
    }

    fn prune(mut self) -> Self {
        self.powers.retain(|_, v| !v.is_zero());
        self.fractions.retain(|_, v| !v.is_zero());
        self
    }

    pub fn evaluate(&self, tau: f64) -> f64 {
        let f = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
        let mut acc = f(&self.atan) * tau.atan();
        for (e, c) in &self.powers {
            acc += f(c) * tau.powi(*e as i32);
        }
        for (q, d) in &self.fractions {
            acc += f(d) * tau / (1.0 + tau * tau).powi(*q as i32);
        }
        acc
    }

    /// Limit at `τ → ∞` when every power is negative (true for `a ≥ 2` or
    /// `p ≥ 1`).
    pub fn at_infinity(&self) -> Option<f64> {
        if self.powers.keys().any(|&e| e >= 0) {
            return None;
        }
        Some(self.atan.to_f64()? * FRAC_PI_2)
    }
}

/// Memoized builder for `I(a, p)`.
#[derive(Debug, Default)]
pub struct AntiderivativeTable {
    memo: HashMap<(u32, u32), TauAntiderivative>,
}

impl AntiderivativeTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, a: u32, p: u32) -> TauAntiderivative {
        assert!(a % 2 == 0, "only even powers of τ are supported");
        assert!(a > 0 || p > 0, "I(0, 0) = τ is not needed");
        if let Some(v) = self.memo.get(&(a, p)) {
            return v.clone();
        }
        let one = BigRational::one();
        let mut out = TauAntiderivative::default();
        if p == 0 {
            let e = 1 - a as i64;
            out.powers.insert(e, BigRational::new(BigInt::one(), BigInt::from(e)));
        } else if a == 0 && p == 1 {
            out.atan = one;
        } else if a == 0 {
            let p_ = p as i64;
            out.fractions.insert(p - 1, BigRational::new(1.into(), (2 * (p_ - 1)).into()));
            let lower = self.get(0, p - 1);
            out.add_scaled(&lower, &BigRational::new((2 * p_ - 3).into(), (2 * (p_ - 1)).into()));
        } else {
            let first = self.get(a, p - 1);
            let second = self.get(a - 2, p);
            out.add_scaled(&first, &one);
            out.add_scaled(&second, &-one);
        }
        let out = out.prune();
        self.memo.insert((a, p), out.clone());
        out
    }
}

/// `∫_x^∞ τ^{−a}(1+τ²)^{−p} dτ` for even `a`, `a + 2p ≥ 2`, `x > 0`.
///
/// For `x ≤ 2` this is `F(∞) − F(x)` from the exact antiderivative; above it
/// uses the convergent series of `∫_0^{1/x} u^{a+2p−2}(1+u²)^{−p} du`, whose
/// coefficients are exact binomials.
pub fn tail(a: u32, p: u32, x: f64) -> f64 {
    assert!(x > 0.0, "tail start must be positive");
    assert!(a + 2 * p >= 2, "integral diverges at infinity");
    if x <= 2.0 {
        let f = AntiderivativeTable::new().get(a, p);
        f.at_infinity().expect("decaying integrand") - f.evaluate(x)
    } else {
        tail_series(a, p, 1.0 / x)
    }
}

fn tail_series(a: u32, p: u32, u: f64) -> f64 {
    let b = (a + 2 * p - 2) as i64;
    // binom(−p, i) = (−1)^i (p)_i / i!
    let mut coeff = BigRational::one();
    let mut acc = 0.0;
    let u2 = u * u;
    let mut upow = u.powi(b as i32 + 1);
    for i in 0..200i64 {
        let term = coeff.to_f64().unwrap_or(f64::NAN) * upow / (b + 2 * i + 1) as f64;
        acc += term;
        if term.abs() <= 1e-18 * acc.abs() {
            break;
        }
        coeff = -coeff * BigRational::new((p as i64 + i).into(), (i + 1).into());
        upow *= u2;
    }
    acc
}

/// Exact rational part of `F(∞)`: the arctan coefficient.
pub fn atan_coefficient(a: u32, p: u32) -> BigRational {
    AntiderivativeTable::new().get(a, p).atan
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive_tail;

    fn integrand(a: u32, p: u32) -> impl Fn(f64) -> f64 {
        move |t: f64| t.powi(-(a as i32)) / (1.0 + t * t).powi(p as i32)
    }

    #[test]
    fn base_cases() {
        let mut tab = AntiderivativeTable::new();
        assert_eq!(tab.get(0, 1).atan, BigRational::one());
        let f = tab.get(0, 2);
        assert_eq!(f.atan, BigRational::new(1.into(), 2.into()));
        assert_eq!(f.fractions[&1], BigRational::new(1.into(), 2.into()));
        let f = tab.get(2, 0);
        assert_eq!(f.powers[&-1], -BigRational::one());
    }

    #[test]
    fn derivative_matches_integrand() {
        let mut tab = AntiderivativeTable::new();
        for a in [0, 2, 4, 6] {
            for p in 0..4 {
                if a == 0 && p == 0 {
                    continue;
                }
                let f = tab.get(a, p);
                for t in [0.3, 0.9, 1.7, 3.1] {
                    let h = 1e-5;
                    let d = (f.evaluate(t + h) - f.evaluate(t - h)) / (2.0 * h);
                    let want = integrand(a, p)(t);
                    assert!((d - want).abs() < 1e-7 * want.abs().max(1.0), "a={a} p={p} t={t}: {d} vs {want}");
                }
            }
        }
    }

    #[test]
    fn tail_matches_quadrature_both_branches() {
        for (a, p) in [(0, 2), (2, 1), (2, 2), (4, 2), (6, 1), (6, 2)] {
            for x in [0.25, 0.5, 1.0, 2.0, 2.5, 7.0, 40.0] {
                let q = adaptive_tail(integrand(a, p), x, 1e-15, 1e-13).unwrap();
                let e = tail(a, p, x);
                assert!((q - e).abs() <= 1e-11 * q.abs(), "a={a} p={p} x={x}: {e} vs {q}");
            }
        }
    }

    #[test]
    fn elementary_value() {
        // ∫_1^∞ 2/((1+τ²)τ²) dτ = 2(1 − π/4)
        let v = 2.0 * tail(2, 1, 1.0);
        assert!((v - 2.0 * (1.0 - std::f64::consts::FRAC_PI_4)).abs() < 1e-15);
    }
}
