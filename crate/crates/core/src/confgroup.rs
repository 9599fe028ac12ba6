//! Möbius action of `SO₀(n+1,1)` on `Sⁿ ⊂ ℝⁿ⁺¹`, conformal factors, the
//! `u_ν` actions on symmetric two-tensors, quadrature of the `L²` pairing,
//! and the Ahlfors operator in the stereographic chart.
//!
//! A point `y` is acted on projectively, `A·y = A(y,1)/A(y,1)ₙ₊₁`, with
//! Lorentz form `diag(1,…,1,−1)`. Two-tensors on the sphere are stored as
//! ambient `(n+1)×(n+1)` matrices annihilating the normal, so the pairing is
//! the Frobenius product and frame components are `Eᵀ k E`.

use nalgebra::{DMatrix, DVector};
use num_rational::Rational64;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

pub type Point = DVector<f64>;
pub type Tensor = DMatrix<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorTag {
    Rotation,
    Boost,
    Composite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoebiusElement {
    /// `(n+2)×(n+2)`, last coordinate timelike.
    pub matrix: DMatrix<f64>,
    pub generator_tag: GeneratorTag,
}

impl MoebiusElement {
    pub fn identity(n: usize) -> Self {
        Self { matrix: DMatrix::identity(n + 2, n + 2), generator_tag: GeneratorTag::Rotation }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows() - 2
    }

    fn plane(n: usize, i: usize, j: usize, c: f64, s: f64, sj: f64) -> DMatrix<f64> {
        let mut m = DMatrix::identity(n + 2, n + 2);
        m[(i, i)] = c;
        m[(j, j)] = c;
        m[(i, j)] = s;
        m[(j, i)] = sj;
        m
    }

    /// Rotation by `angle` in the `(i, j)` coordinate plane of `ℝⁿ⁺¹`.
    pub fn rotation(n: usize, i: usize, j: usize, angle: f64) -> Self {
        assert!(i != j && i <= n && j <= n, "rotation plane out of range");
        let (s, c) = angle.sin_cos();
        Self { matrix: Self::plane(n, i, j, c, -s, s), generator_tag: GeneratorTag::Rotation }
    }

    /// Embeds an orthogonal `(n+1)×(n+1)` matrix.
    pub fn from_orthogonal(r: &DMatrix<f64>) -> Result<Self> {
        let n1 = r.nrows();
        if r.ncols() != n1 || (r.transpose() * r - DMatrix::identity(n1, n1)).amax() > 1e-12 || r.determinant() < 0.0 {
            return Err(Error::PreconditionViolation("not a proper rotation".into()));
        }
        let mut m = DMatrix::identity(n1 + 1, n1 + 1);
        m.view_mut((0, 0), (n1, n1)).copy_from(r);
        Ok(Self { matrix: m, generator_tag: GeneratorTag::Rotation })
    }

    /// Hyperbolic boost of rapidity `t` mixing spatial axis `axis` with time.
    /// With `axis = n` it fixes the poles `±eₙ`.
    pub fn boost(n: usize, axis: usize, t: f64) -> Self {
        assert!(axis <= n, "boost axis out of range");
        let (s, c) = (t.sinh(), t.cosh());
        Self { matrix: Self::plane(n, axis, n + 1, c, s, s), generator_tag: GeneratorTag::Boost }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix * &other.matrix, generator_tag: GeneratorTag::Composite }
    }

    pub fn inverse(&self) -> Self {
        // A⁻¹ = η Aᵀ η
        let eta = lorentz_form(self.dim());
        Self { matrix: &eta * self.matrix.transpose() * &eta, generator_tag: self.generator_tag }
    }

    /// `max |AᵀηA − η|`.
    pub fn lorentz_defect(&self) -> f64 {
        let eta = lorentz_form(self.dim());
        (self.matrix.transpose() * &eta * &self.matrix - eta).amax()
    }

    fn blocks(&self, y: &Point) -> (Point, f64) {
        let n1 = y.len();
        let mut ext = y.clone().insert_row(n1, 1.0);
        ext = &self.matrix * ext;
        let last = ext[n1];
        (ext.rows(0, n1).into_owned(), last)
    }
}

pub fn lorentz_form(n: usize) -> DMatrix<f64> {
    let mut d = DVector::from_element(n + 2, 1.0);
    d[n + 1] = -1.0;
    DMatrix::from_diagonal(&d)
}

fn check_unit(y: &Point) -> Result<()> {
    if (y.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::PreconditionViolation(format!("|y| = {} is not 1", y.norm())));
    }
    Ok(())
}

/// `A·y = A(y,1)/A(y,1)ₙ₊₁`.
pub fn act(a: &MoebiusElement, y: &Point) -> Result<Point> {
    check_unit(y)?;
    let (v, last) = a.blocks(y);
    if last.abs() < 1e-300 {
        return Err(Error::Degenerate);
    }
    Ok(v / last)
}

/// `Ω` with `φ*g₀ = Ω² g₀`; equals `1/A(y,1)ₙ₊₁`.
pub fn conformal_factor(a: &MoebiusElement, y: &Point) -> Result<f64> {
    check_unit(y)?;
    let (_, last) = a.blocks(y);
    if last <= 0.0 {
        return Err(Error::Degenerate);
    }
    Ok(1.0 / last)
}

/// Ambient differential `(A_s − (A·y) cᵀ)/A(y,1)ₙ₊₁` of the extended map
/// `y ↦ A_s y + b / (cᵀy + d)`; restrict to `y^⊥` for `dφ`.
pub fn differential(a: &MoebiusElement, y: &Point) -> Result<DMatrix<f64>> {
    let n1 = y.len();
    let image = act(a, y)?;
    let (_, last) = a.blocks(y);
    let a_s = a.matrix.view((0, 0), (n1, n1));
    let c = a.matrix.view((n1, 0), (1, n1));
    Ok((a_s - &image * c) / last)
}

/// Orthonormal basis of `y^⊥` as the columns of an `(n+1)×n` matrix.
pub fn tangent_frame(y: &Point) -> DMatrix<f64> {
    let n1 = y.len();
    let mut m = DMatrix::zeros(n1, n1);
    m.set_column(0, y);
    // fill with the coordinate axes least aligned with y
    let mut axes: Vec<usize> = (0..n1).collect();
    axes.sort_by(|&i, &j| y[i].abs().partial_cmp(&y[j].abs()).unwrap());
    for (col, &ax) in axes.iter().take(n1 - 1).enumerate() {
        m[(ax, col + 1)] = 1.0;
    }
    let q = m.qr().q();
    q.columns(1, n1 - 1).into_owned()
}

/// `dφ` in the frame at `y`, by central differences along great circles.
pub fn differential_fd(a: &MoebiusElement, y: &Point, h: f64) -> Result<DMatrix<f64>> {
    let e = tangent_frame(y);
    let n = e.ncols();
    let mut out = DMatrix::zeros(y.len(), n);
    for i in 0..n {
        let u = e.column(i);
        let plus = y * h.cos() + u * h.sin();
        let minus = y * h.cos() - u * h.sin();
        out.set_column(i, &((act(a, &plus)? - act(a, &minus)?) / (2.0 * h)));
    }
    Ok(out)
}

/// `max |Gram(dφ) − Ω²·I| / Ω²` with `dφ` from finite differences.
pub fn conformality_defect(a: &MoebiusElement, y: &Point, h: f64) -> Result<f64> {
    let d = differential_fd(a, y, h)?;
    let omega2 = conformal_factor(a, y)?.powi(2);
    let gram = d.transpose() * &d;
    Ok((gram - DMatrix::identity(d.ncols(), d.ncols()) * omega2).amax() / omega2)
}

/// `ρ = n/2` and the spectral parameter `ν`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepWeight {
    pub n: i64,
    pub rho: Rational64,
    pub nu: Rational64,
}

impl RepWeight {
    pub fn new(n: i64, nu: Rational64) -> Self {
        Self { n, rho: Rational64::new(n, 2), nu }
    }

    /// `ρ + ν − 2`.
    pub fn omega_exponent(&self) -> f64 {
        (self.rho + self.nu - 2).to_f64().expect("small rational")
    }
}

/// Quadrature nodes and weights on `S²` or `S³`.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    pub n: usize,
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
}

impl SphereGrid {
    /// Product grid exact for polynomials of degree `< 2·order`:
    /// Gauss–Legendre in `cos θ` and `2·order` equispaced azimuths on `S²`,
    /// with a Chebyshev-second-kind rule in `cos χ` added on `S³`.
    pub fn new(n: usize, order: usize) -> Result<Self> {
        if !(n == 2 || n == 3) {
            return Err(Error::PreconditionViolation(format!("grids exist for n ∈ {{2, 3}}, got {n}")));
        }
        let (gx, gw) = gauss_legendre(order);
        let m = 2 * order;
        let dphi = 2.0 * std::f64::consts::PI / m as f64;
        let mut s2 = Vec::with_capacity(order * m);
        for (x, w) in gx.iter().zip(&gw) {
            let s = (1.0 - x * x).sqrt();
            for l in 0..m {
                let phi = dphi * l as f64;
                s2.push(([s * phi.cos(), s * phi.sin(), *x], w * dphi));
            }
        }
        let (nodes, weights) = if n == 2 {
            s2.iter().map(|(p, w)| (DVector::from_column_slice(p), *w)).unzip()
        } else {
            let mut nodes = Vec::new();
            let mut weights = Vec::new();
            let h = std::f64::consts::PI / (order + 1) as f64;
            for i in 1..=order {
                let chi = h * i as f64;
                let (sc, t) = chi.sin_cos();
                // ∫ f(t) √(1−t²) dt
                let wt = h * sc * sc;
                for (p, w) in &s2 {
                    nodes.push(DVector::from_column_slice(&[sc * p[0], sc * p[1], sc * p[2], t]));
                    weights.push(w * wt);
                }
            }
            (nodes, weights)
        };
        Ok(Self { n, nodes, weights })
    }

    pub fn integrate(&self, f: impl Fn(&Point) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(y, w)| w * f(y)).sum()
    }

    pub fn volume(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Symmetric two-tensor values at the nodes of a grid.
#[derive(Debug, Clone)]
pub struct SampledField {
    pub values: Vec<Tensor>,
}

impl SampledField {
    pub fn sample(grid: &SphereGrid, field: impl Fn(&Point) -> Tensor) -> Self {
        Self { values: grid.nodes.iter().map(field).collect() }
    }

    /// `Eᵀ k E` at node `i`.
    pub fn frame_components(&self, grid: &SphereGrid, i: usize) -> DMatrix<f64> {
        let e = tangent_frame(&grid.nodes[i]);
        e.transpose() * &self.values[i] * e
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { values: self.values.iter().map(|v| v * c).collect() }
    }
}

fn normal_projector(y: &Point) -> DMatrix<f64> {
    DMatrix::identity(y.len(), y.len()) - y * y.transpose()
}

/// `(u_ν(A)k)(y) = Ω_A(y)^{ρ+ν−2} (φ_A*k)(y)`.
pub fn u_action_at(w: &RepWeight, a: &MoebiusElement, field: &dyn Fn(&Point) -> Tensor, y: &Point) -> Result<Tensor> {
    let image = act(a, y)?;
    let omega = conformal_factor(a, y)?;
    let p = normal_projector(y);
    let m = differential(a, y)? * &p;
    Ok(m.transpose() * field(&image) * m * omega.powf(w.omega_exponent()))
}

pub fn u_action(w: &RepWeight, a: &MoebiusElement, field: &dyn Fn(&Point) -> Tensor, grid: &SphereGrid) -> Result<SampledField> {
    let values = grid.nodes.iter().map(|y| u_action_at(w, a, field, y)).collect::<Result<_>>()?;
    Ok(SampledField { values })
}

/// `∫ hᵢⱼ kᵢⱼ` over the sphere.
pub fn pairing(h: &SampledField, k: &SampledField, grid: &SphereGrid) -> f64 {
    h.values.iter().zip(&k.values).zip(&grid.weights).map(|((a, b), w)| w * a.dot(b)).sum()
}

/// `|⟨h,k⟩ − ⟨u_{−n/2}h, u_{n/2}k⟩|`.
pub fn check_pairing_invariance(
    h: &dyn Fn(&Point) -> Tensor,
    k: &dyn Fn(&Point) -> Tensor,
    a: &MoebiusElement,
    grid: &SphereGrid,
) -> Result<f64> {
    let n = grid.n as i64;
    let base = pairing(&SampledField::sample(grid, h), &SampledField::sample(grid, k), grid);
    let uh = u_action(&RepWeight::new(n, Rational64::new(-n, 2)), a, h, grid)?;
    let uk = u_action(&RepWeight::new(n, Rational64::new(n, 2)), a, k, grid)?;
    Ok((base - pairing(&uh, &uk, grid)).abs())
}

/// A smooth tangential field `P(S₀ + Σ yᵢSᵢ + Σ yᵢyⱼSᵢⱼ)P` with random
/// symmetric coefficients.
pub fn random_band_limited_field<R: Rng>(n: usize, rng: &mut R) -> impl Fn(&Point) -> Tensor {
    let n1 = n + 1;
    let sym = |rng: &mut R| {
        let a = DMatrix::from_fn(n1, n1, |_, _| rng.gen_range(-1.0..1.0));
        (&a + a.transpose()) * 0.5
    };
    let s0 = sym(rng);
    let s1: Vec<_> = (0..n1).map(|_| sym(rng)).collect();
    let s2: Vec<_> = (0..n1 * n1).map(|_| sym(rng)).collect();
    move |y: &Point| {
        let mut s = s0.clone();
        for i in 0..n1 {
            s += &s1[i] * y[i];
            for j in 0..n1 {
                s += &s2[i * n1 + j] * (y[i] * y[j]);
            }
        }
        let p = normal_projector(y);
        &p * s * &p
    }
}

/// Rotations with angles up to `max_angle` in random planes composed with a
/// boost of rapidity up to `max_rapidity` along a random axis.
pub fn random_moebius<R: Rng>(n: usize, max_angle: f64, max_rapidity: f64, rng: &mut R) -> MoebiusElement {
    let mut g = MoebiusElement::identity(n);
    for _ in 0..3 {
        let i = rng.gen_range(0..=n);
        let j = (i + rng.gen_range(1..=n)) % (n + 1);
        g = g.compose(&MoebiusElement::rotation(n, i, j, rng.gen_range(-max_angle..=max_angle)));
    }
    let b = MoebiusElement::boost(n, rng.gen_range(0..=n), rng.gen_range(-max_rapidity..=max_rapidity));
    g.compose(&b)
}

/// Stereographic chart from the pole `eₙ`: `x = y_{<n}/(1 − yₙ)`.
pub fn chart(y: &Point) -> Result<Point> {
    let n = y.len() - 1;
    let d = 1.0 - y[n];
    if d.abs() < 1e-14 {
        return Err(Error::DomainError("the chart pole has no image".into()));
    }
    Ok(y.rows(0, n) / d)
}

pub fn chart_inverse(x: &Point) -> Point {
    let s = 1.0 + x.norm_squared();
    let mut y = x * (2.0 / s);
    y = y.insert_row(x.len(), (s - 2.0) / s);
    y
}

fn chart_inverse_jacobian(x: &Point) -> DMatrix<f64> {
    let n = x.len();
    let s = 1.0 + x.norm_squared();
    let mut j = DMatrix::zeros(n + 1, n);
    for a in 0..n {
        for b in 0..n {
            j[(a, b)] = if a == b { 2.0 / s } else { 0.0 } - 4.0 * x[a] * x[b] / (s * s);
        }
        j[(n, a)] = 4.0 * x[a] / (s * s);
    }
    j
}

fn chart_jacobian(y: &Point) -> DMatrix<f64> {
    let n = y.len() - 1;
    let d = 1.0 - y[n];
    let mut j = DMatrix::zeros(n, n + 1);
    for a in 0..n {
        j[(a, a)] = 1.0 / d;
        j[(a, n)] = y[a] / (d * d);
    }
    j
}

/// `λ = 2/(1+|x|²)`, the round metric being `λ²δ` in the chart.
pub fn chart_lambda(x: &Point) -> f64 {
    2.0 / (1.0 + x.norm_squared())
}

/// The Möbius element seen in the chart: `x ↦ σ(A·σ⁻¹x)` with its exact
/// Jacobian.
pub fn chart_map(a: &MoebiusElement, x: &Point) -> Result<(Point, DMatrix<f64>)> {
    let y = chart_inverse(x);
    let image = act(a, &y)?;
    let jac = chart_jacobian(&image) * differential(a, &y)? * chart_inverse_jacobian(x);
    Ok((chart(&image)?, jac))
}

/// `∂ᵢXⱼ` at `x` by central differences.
pub fn chart_gradient(field: &dyn Fn(&Point) -> Point, x: &Point, h: f64) -> DMatrix<f64> {
    let n = x.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[i] += h;
        xm[i] -= h;
        let d = (field(&xp) - field(&xm)) / (2.0 * h);
        g.set_row(i, &d.transpose());
    }
    g
}

/// `S_g X = L_X g − (2/n)(div_g X) g` in chart components; with `g = λ²δ` it
/// reduces to `λ²(∂X + ∂Xᵀ − (2/n)(∂·X)·1)`.
pub fn ahlfors_chart(field: &dyn Fn(&Point) -> Point, x: &Point, h: f64) -> Tensor {
    let n = x.len();
    let d = chart_gradient(field, x, h);
    let div = d.trace();
    let s = &d + d.transpose() - DMatrix::identity(n, n) * (2.0 * div / n as f64);
    s * chart_lambda(x).powi(2)
}

/// Residual of `Ω_φ^{−2} φ*(SX) = S(φ*X)` at the chart points, with
/// `φ*X = J⁻¹ X∘φ` and `Ω_φ = λ(φx)|J|/λ(x)`.
pub fn check_ahlfors_covariance(field: &dyn Fn(&Point) -> Point, a: &MoebiusElement, points: &[Point], h: f64) -> Result<f64> {
    let pulled = |x: &Point| -> Point {
        let (fx, jac) = chart_map(a, x).expect("chart point stays finite");
        jac.lu().solve(&field(&fx)).expect("invertible Jacobian")
    };
    let mut worst: f64 = 0.0;
    for x in points {
        let (fx, jac) = chart_map(a, x)?;
        if fx.norm() > 1e3 {
            return Err(Error::DomainError("image too close to the chart pole".into()));
        }
        let stretch = jac.column(0).norm();
        let omega = chart_lambda(&fx) * stretch / chart_lambda(x);
        let lhs = jac.transpose() * ahlfors_chart(field, &fx, h) * &jac / (omega * omega);
        let rhs = ahlfors_chart(&pulled, x, h);
        worst = worst.max((lhs - rhs).amax());
    }
    Ok(worst)
}

/// The `(n+1)(n+2)/2` conformal Killing fields of `Sⁿ` in the chart:
/// chart rotations, the rotations through the pole
/// `½(1−|x|²)eᵢ + xᵢx`, the dilation `x`, and the conformal gradients
/// `½(1+|x|²)eᵢ − xᵢx`.
pub fn conformal_killing_fields(n: usize) -> Vec<Box<dyn Fn(&Point) -> Point>> {
    let mut out: Vec<Box<dyn Fn(&Point) -> Point>> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(Box::new(move |x: &Point| {
                let mut v = DVector::zeros(x.len());
                v[i] = -x[j];
                v[j] = x[i];
                v
            }));
        }
    }
    for i in 0..n {
        out.push(Box::new(move |x: &Point| {
            let mut v = x * x[i];
            v[i] += 0.5 * (1.0 - x.norm_squared());
            v
        }));
    }
    out.push(Box::new(|x: &Point| x.clone()));
    for i in 0..n {
        out.push(Box::new(move |x: &Point| {
            let mut v = -x * x[i];
            v[i] += 0.5 * (1.0 + x.norm_squared());
            v
        }));
    }
    out
}
