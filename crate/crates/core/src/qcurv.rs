//! Leading symbols on a flat background: linearized scalar, Ricci and
//! Schouten curvature, the obstruction tensor, the total Q-curvature
//! Hessian, and the Ahlfors operator.
//!
//! Derivatives map to `σ(∂ⱼ) = iξⱼ`. Every assembled operator has even
//! order, so all symbols are real, and they all go through the two entries of
//! [`conv`]: `σ(Δ) = −|ξ|²` and `σ(∇ᵢ∇ⱼ) = −ξᵢξⱼ`.

use num_rational::BigRational;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{dot, Mat};
use crate::scalar::Scalar;

/// The symbol convention table.
pub mod conv {
    use super::*;

    /// `σ(Δ) = −|ξ|²`.
    pub fn laplacian<T: Scalar>(xi: &[T]) -> T {
        -dot(xi, xi)
    }

    /// `σ(∇²) = −ξξᵀ`.
    pub fn hessian<T: Scalar>(xi: &[T]) -> Mat<T> {
        -&Mat::outer(xi, xi)
    }
}

fn check_tt<T: Scalar>(xi: &[T], k: &Mat<T>) -> Result<()> {
    if !k.is_symmetric() {
        return Err(Error::PreconditionViolation("k must be symmetric".into()));
    }
    if !k.trace().close_to(&T::zero()) {
        return Err(Error::PreconditionViolation("k must be trace-free".into()));
    }
    if !k.mul_vec(xi).iter().all(|x| x.close_to(&T::zero())) {
        return Err(Error::PreconditionViolation("k must be transverse (kξ = 0)".into()));
    }
    Ok(())
}

fn check_even(n: usize) -> Result<()> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::ParityError(format!("needs even n ≥ 4, got {n}")));
    }
    Ok(())
}

/// `σ(Scal˙) = σ(div div) k − σ(Δ) tr k = −ξᵀkξ + |ξ|² tr k`.
pub fn lin_scalar_symbol<T: Scalar>(xi: &[T], k: &Mat<T>) -> T {
    conv::hessian(xi).frobenius(k) - conv::laplacian(xi) * k.trace()
}

/// Full leading symbol of `Ric˙`:
/// `½(−σ(Δ)k + σ(∇²)k + (σ(∇²)k)ᵀ − σ(∇²) tr k)`.
pub fn lin_ricci_symbol<T: Scalar>(xi: &[T], k: &Mat<T>) -> Mat<T> {
    let h = conv::hessian(xi);
    let hk = &h * k;
    let sum = &(&k.scale(&-conv::laplacian(xi)) + &hk) + &hk.transpose();
    (&sum - &h.scale(&k.trace())).scale(&T::from_ratio(1, 2))
}

/// `P˙ = (Ric˙ − Scal˙/(2(n−1))·g)/(n−2)` at leading order, no
/// preconditions on `k`.
pub fn lin_schouten_symbol_full<T: Scalar>(xi: &[T], k: &Mat<T>) -> Mat<T> {
    let n = xi.len() as i64;
    let scal = lin_scalar_symbol(xi, k) / T::from_int(2 * (n - 1));
    let p = &lin_ricci_symbol(xi, k) - &Mat::identity(xi.len()).scale(&scal);
    p.scale(&(T::one() / T::from_int(n - 2)))
}

/// `σ(P˙) = −σ(Δ)/(2(n−2))·k` for transverse trace-free `k`.
pub fn lin_schouten_symbol<T: Scalar>(xi: &[T], k: &Mat<T>) -> Result<Mat<T>> {
    check_tt(xi, k)?;
    let n = xi.len() as i64;
    if n < 3 {
        return Err(Error::PreconditionViolation(format!("n = {n} too small")));
    }
    Ok(k.scale(&(-conv::laplacian(xi) / T::from_int(2 * (n - 2)))))
}

/// `σ(O˙) = σ(Δ)^{n/2−2}(σ(Δ)σ(P˙) − σ(∇²)σ(Scal˙)/(2(n−1)))`.
pub fn lin_obstruction_symbol<T: Scalar>(xi: &[T], k: &Mat<T>) -> Result<Mat<T>> {
    let n = xi.len();
    check_even(n)?;
    let lap = conv::laplacian(xi);
    let p = lin_schouten_symbol(xi, k)?;
    let scal = lin_scalar_symbol(xi, k) / T::from_int(2 * (n as i64 - 1));
    let inner = &p.scale(&lap) - &conv::hessian(xi).scale(&scal);
    Ok(inner.scale(&lap.pow_u((n / 2 - 2) as u32)))
}

/// `σ(−Δ^{n/2}k/(2(n−2)))`, the target of [`lin_obstruction_symbol`].
pub fn obstruction_direct<T: Scalar>(xi: &[T], k: &Mat<T>) -> Result<Mat<T>> {
    let n = xi.len();
    check_even(n)?;
    check_tt(xi, k)?;
    let c = -conv::laplacian(xi).pow_u((n / 2) as u32) / T::from_int(2 * (n as i64 - 2));
    Ok(k.scale(&c))
}

/// `σₙ(H) = (−1)^{n/2}(n−2)/2 · σ(O˙)`.
pub fn q_hessian_symbol<T: Scalar>(xi: &[T], k: &Mat<T>) -> Result<Mat<T>> {
    let n = xi.len() as i64;
    let o = lin_obstruction_symbol(xi, k)?;
    let sign = if (n / 2) % 2 == 0 { 1 } else { -1 };
    Ok(o.scale(&T::from_ratio(sign * (n - 2), 2)))
}

/// `−|ξ|ⁿ/4 · k`.
pub fn q_hessian_target<T: Scalar>(xi: &[T], k: &Mat<T>) -> Mat<T> {
    let n = xi.len();
    let norm_n = dot(xi, xi).pow_u((n / 2) as u32);
    k.scale(&(-norm_n / T::from_int(4)))
}

/// `ξXᵀ + Xξᵀ − (2/n)(ξ·X)·1`.
pub fn ahlfors_symbol<T: Scalar>(xi: &[T], x: &[T]) -> Mat<T> {
    let n = xi.len();
    let sym = &Mat::outer(xi, x) + &Mat::outer(x, xi);
    let c = T::from_int(2) * dot(xi, x) / T::from_int(n as i64);
    &sym - &Mat::identity(n).scale(&c)
}

/// Random nonzero integer covector and a transverse trace-free rational `k`,
/// entries drawn from `−bound..=bound`.
pub fn sample_transverse_traceless<R: Rng>(n: usize, bound: i64, rng: &mut R) -> (Vec<BigRational>, Mat<BigRational>) {
    let xi: Vec<BigRational> = loop {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
        if v.iter().any(|&x| x != 0) {
            break v.into_iter().map(BigRational::from_int).collect();
        }
    };
    let mut a = Mat::<BigRational>::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v = BigRational::from_int(rng.gen_range(-bound..=bound));
            a.set(i, j, v.clone());
            a.set(j, i, v);
        }
    }
    let proj = &Mat::identity(n) - &Mat::outer(&xi, &xi).scale(&(BigRational::from_int(1) / dot(&xi, &xi)));
    let k0 = &(&proj * &a) * &proj;
    let shift = k0.trace() / BigRational::from_int(n as i64 - 1);
    let k = &k0 - &proj.scale(&shift);
    (xi, k)
}
