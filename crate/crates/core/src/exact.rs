//! Exact integer and symbolic helpers.
//!
//! Gamma ratios at integer shifts are rising factorials, and every constant
//! that carries π (sphere volumes, Gamma values at half-integers, trace
//! values) is kept as a rational multiple of a power of π, with an optional
//! `√2` factor, until the very last floating-point evaluation.

use std::fmt;
use std::ops::{Div, Mul, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `x (x+1) ⋯ (x+m-1)`, i.e. `Γ(x+m)/Γ(x)` continued to all integers `x`.
pub fn rising_factorial(x: i64, m: u32) -> BigInt {
    (0..m as i64).fold(BigInt::one(), |acc, i| acc * BigInt::from(x + i))
}

pub fn factorial(m: u32) -> BigInt {
    rising_factorial(1, m)
}

/// `c · √π^half_pi_exp · √2^root_two` with `root_two ∈ {0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiMultiple {
    pub coeff: BigRational,
    pub half_pi_exp: i32,
    pub root_two: u8,
}

impl PiMultiple {
    /// `coeff · π^pi_exp`.
    pub fn new(coeff: BigRational, pi_exp: i32) -> Self {
        Self { coeff, half_pi_exp: 2 * pi_exp, root_two: 0 }
    }

    pub fn rational(coeff: BigRational) -> Self {
        Self::new(coeff, 0)
    }

    pub fn from_int(v: i64) -> Self {
        Self::rational(BigRational::from_integer(v.into()))
    }

    /// `√π`.
    pub fn sqrt_pi() -> Self {
        Self { coeff: BigRational::one(), half_pi_exp: 1, root_two: 0 }
    }

    /// `2^(e/2)` for any integer `e`.
    pub fn sqrt_two_pow(e: i32) -> Self {
        let half = Integer::div_floor(&e, &2);
        let two = BigRational::from_integer(2.into());
        let coeff = if half >= 0 {
            num_traits::pow(two, half as usize)
        } else {
            num_traits::pow(two, (-half) as usize).recip()
        };
        Self { coeff, half_pi_exp: 0, root_two: e.rem_euclid(2) as u8 }
    }

    /// The π exponent when it is an integer.
    pub fn pi_exp(&self) -> Option<i32> {
        (self.half_pi_exp % 2 == 0).then_some(self.half_pi_exp / 2)
    }

    fn normalized(mut self) -> Self {
        if self.root_two >= 2 {
            let pairs = self.root_two / 2;
            self.coeff *= BigRational::from_integer(BigInt::from(2).pow(pairs as u32));
            self.root_two %= 2;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn sign(&self) -> i32 {
        if self.coeff.is_zero() {
            0
        } else if self.coeff.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        // 1/√2 = √2/2
        let mut coeff = self.coeff.recip();
        if self.root_two == 1 {
            coeff /= BigRational::from_integer(2.into());
        }
        Self { coeff, half_pi_exp: -self.half_pi_exp, root_two: self.root_two }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::from_int(1), |acc, _| acc * self.clone())
    }

    pub fn to_f64(&self) -> f64 {
        let c = self.coeff.to_f64().unwrap_or(f64::NAN);
        let r = if self.root_two == 1 { std::f64::consts::SQRT_2 } else { 1.0 };
        c * std::f64::consts::PI.sqrt().powi(self.half_pi_exp) * r
    }

    /// Renders as `p/q·π^e` (with `√2` when present).
    pub fn render(&self) -> String {
        let mut s = format!("{}", self.coeff);
        if self.root_two == 1 {
            s.push_str("·√2");
        }
        match self.pi_exp() {
            Some(0) => {}
            Some(1) => s.push_str("·π"),
            Some(2) => s.push_str("·π²"),
            Some(e) => s.push_str(&format!("·π^{e}")),
            None => s.push_str(&format!("·π^({}/2)", self.half_pi_exp)),
        }
        s
    }
}

impl fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Mul for PiMultiple {
    type Output = PiMultiple;

    fn mul(self, rhs: PiMultiple) -> PiMultiple {
        PiMultiple {
            coeff: self.coeff * rhs.coeff,
            half_pi_exp: self.half_pi_exp + rhs.half_pi_exp,
            root_two: self.root_two + rhs.root_two,
        }
        .normalized()
    }
}

impl Div for PiMultiple {
    type Output = PiMultiple;

    fn div(self, rhs: PiMultiple) -> PiMultiple {
        self * rhs.recip()
    }
}

impl Neg for PiMultiple {
    type Output = PiMultiple;

    fn neg(self) -> PiMultiple {
        PiMultiple { coeff: -self.coeff, ..self }
    }
}

/// Exact `Γ(x)` for `x` an integer or half-integer, given as `2x`.
///
/// Returns `None` at the poles `x ∈ {0, -1, -2, …}`.
pub fn gamma_half_integer(twice_x: i64) -> Option<PiMultiple> {
    if twice_x % 2 == 0 {
        let x = twice_x / 2;
        if x <= 0 {
            return None;
        }
        return Some(PiMultiple::rational(BigRational::from_integer(factorial((x - 1) as u32))));
    }
    // Start from Γ(1/2) = √π and walk with Γ(x+1) = xΓ(x).
    let mut coeff = BigRational::one();
    let mut twice = 1i64;
    while twice < twice_x {
        coeff *= BigRational::new(twice.into(), 2.into());
        twice += 2;
    }
    while twice > twice_x {
        twice -= 2;
        coeff /= BigRational::new(twice.into(), 2.into());
    }
    Some(PiMultiple::rational(coeff) * PiMultiple::sqrt_pi())
}

/// Volume of the unit `m`-sphere, `2π^((m+1)/2)/Γ((m+1)/2)`.
pub fn sphere_volume_exact(m: u32) -> PiMultiple {
    assert!(m >= 1, "sphere dimension must be positive");
    let gamma = gamma_half_integer(m as i64 + 1).expect("positive argument");
    PiMultiple::from_int(2) * PiMultiple { coeff: BigRational::one(), half_pi_exp: m as i32 + 1, root_two: 0 }
        / gamma
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rising_factorial_values() {
        assert_eq!(rising_factorial(2, 4), BigInt::from(120));
        assert_eq!(rising_factorial(1, 4), BigInt::from(24));
        assert_eq!(rising_factorial(-3, 3), BigInt::from(-6));
        assert_eq!(rising_factorial(0, 3), BigInt::zero());
        assert_eq!(rising_factorial(7, 0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
    }

    #[test]
    fn sqrt_two_powers() {
        let a = PiMultiple::sqrt_two_pow(3);
        assert_eq!(a.coeff, q(2, 1));
        assert_eq!(a.root_two, 1);
        let b = PiMultiple::sqrt_two_pow(-1);
        assert_eq!(b.coeff, q(1, 2));
        assert_eq!(b.root_two, 1);
        assert!((b.to_f64() - 2f64.sqrt().recip()).abs() < 1e-15);
        assert_eq!(a.clone() * a, PiMultiple::rational(q(8, 1)));
    }

    #[test]
    fn gamma_at_half_integers() {
        // Γ(5/2) = 3√π/4, Γ(-3/2) = 4√π/3, Γ(5) = 24
        let g = gamma_half_integer(5).unwrap();
        assert_eq!(g.coeff, q(3, 4));
        assert_eq!(g.half_pi_exp, 1);
        assert_eq!(gamma_half_integer(-3).unwrap().coeff, q(4, 3));
        assert_eq!(gamma_half_integer(10).unwrap(), PiMultiple::from_int(24));
        assert!(gamma_half_integer(0).is_none());
        assert!(gamma_half_integer(-4).is_none());
    }

    #[test]
    fn sphere_volumes() {
        assert_eq!(sphere_volume_exact(1), PiMultiple::new(q(2, 1), 1));
        assert_eq!(sphere_volume_exact(2), PiMultiple::new(q(4, 1), 1));
        assert_eq!(sphere_volume_exact(3), PiMultiple::new(q(2, 1), 2));
        assert_eq!(sphere_volume_exact(4), PiMultiple::new(q(8, 3), 2));
    }

    #[test]
    fn recip_with_root_two() {
        let v = PiMultiple { coeff: q(3, 1), half_pi_exp: 4, root_two: 1 };
        let one = v.clone() * v.recip();
        assert_eq!(one, PiMultiple::from_int(1));
    }
}
