//! Eigenvalues of the universal Hessian intertwiner `T₀` on the K-types
//! `(2+j, q)` of trace-free symmetric two-tensors over `Sⁿ`.
//!
//! Two independent routes are provided: [`spectrum_generate`] solves the
//! spectrum-generating relation
//!
//! ```text
//! μ_γ (κ_γ − κ_β − 2ν) = μ_β (κ_γ − κ_β + 2ν),   ν = n/2,
//! ```
//!
//! over every edge of the K-type lattice, and [`t0_eigenvalue`] evaluates the
//! Gamma ratio `Γ(n+j+2)Γ(n+q−1)/(Γ(j+2)Γ(q−1))` as a product of two rising
//! factorials. Both are generic over [`Scalar`], so `BigRational` gives exact
//! tables.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::rising_factorial;
use crate::ktypes::DominantWeight;
use crate::scalar::Scalar;

/// The K-type `(2+j, q, 0, …, 0)` of `SO(n+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KType {
    pub dim_n: u32,
    pub j: i64,
    pub q: i64,
}

impl KType {
    /// `q ∈ {0,1,2}` for `n ≥ 4`, `q ∈ {−2,…,2}` for `n = 3`.
    pub fn new(dim_n: u32, j: i64, q: i64) -> Result<Self> {
        let q_ok = if dim_n == 3 { (-2..=2).contains(&q) } else { (0..=2).contains(&q) };
        if dim_n < 3 || j < 0 || !q_ok {
            return Err(Error::InvalidKType { n: dim_n, j, q });
        }
        Ok(Self { dim_n, j, q })
    }

    pub fn q_range(dim_n: u32) -> std::ops::RangeInclusive<i64> {
        if dim_n == 3 {
            -2..=2
        } else {
            0..=2
        }
    }

    pub fn weight(&self) -> DominantWeight {
        DominantWeight::new(&[2 + self.j, self.q], self.dim_n as usize + 1)
            .expect("validated K-type is dominant")
    }

    pub fn step(&self, dir: Step) -> Result<Self> {
        let (j, q) = match dir {
            Step::JUp => (self.j + 1, self.q),
            Step::QUp => (self.j, self.q + 1),
        };
        KType::new(self.dim_n, j, q).map_err(|_| Error::InvalidStep)
    }
}

impl fmt::Display for KType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", 2 + self.j, self.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    JUp,
    QUp,
}

fn kappa_int(t: &KType) -> i64 {
    let n = t.dim_n as i64;
    (n + t.j + 1) * (t.j + 2) + t.q * (n + t.q - 3)
}

/// Casimir value `κ = (n+j+1)(j+2) + q(n+q−3)`.
pub fn kappa<T: Scalar>(t: &KType) -> T {
    T::from_int(kappa_int(t))
}

/// `κ(t + step) − κ(t)`: `n+2j+4` for `JUp`, `n+2q−2` for `QUp`.
pub fn kappa_step<T: Scalar>(t: &KType, dir: Step) -> Result<T> {
    let up = t.step(dir)?;
    Ok(T::from_int(kappa_int(&up) - kappa_int(t)))
}

fn adjacent(beta: &KType, gamma: &KType) -> bool {
    beta.dim_n == gamma.dim_n && (beta.j - gamma.j).abs() + (beta.q - gamma.q).abs() == 1
}

/// `c(β, γ, ν) = ½(κ_γ − κ_β + 2ν)` for adjacent K-types.
pub fn transition_coeff<T: Scalar>(beta: &KType, gamma: &KType, nu: &T) -> Result<T> {
    if !adjacent(beta, gamma) {
        return Err(Error::NotAdjacent);
    }
    let d = T::from_int(kappa_int(gamma) - kappa_int(beta));
    Ok((d + T::from_int(2) * nu.clone()) / T::from_int(2))
}

/// One edge `β → γ` of the lattice, written as `a·μ_γ = b·μ_β`.
#[derive(Debug, Clone)]
struct Edge<T> {
    lower: KType,
    upper: KType,
    a: T,
    b: T,
}

fn edges<T: Scalar>(nodes: &[KType]) -> Vec<Edge<T>> {
    let mut out = Vec::new();
    for beta in nodes {
        let n = beta.dim_n as i64;
        for dir in [Step::JUp, Step::QUp] {
            let Ok(gamma) = beta.step(dir) else { continue };
            if !nodes.contains(&gamma) {
                continue;
            }
            let d = kappa_int(&gamma) - kappa_int(beta);
            out.push(Edge { lower: *beta, upper: gamma, a: T::from_int(d - n), b: T::from_int(d + n) });
        }
    }
    out
}

/// Eigenvalue table on the K-types `(2+j, q)`, `0 ≤ j ≤ j_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable<T> {
    pub dim_n: u32,
    pub entries: BTreeMap<KType, T>,
    pub normalization_base: KType,
    pub free_scale_note: String,
    /// K-types whose value was forced to zero by a vanishing edge factor.
    pub forced_zeros: Vec<KType>,
}

impl<T: Scalar> SpectrumTable<T> {
    pub fn get(&self, j: i64, q: i64) -> Option<&T> {
        self.entries.get(&KType { dim_n: self.dim_n, j, q })
    }

    /// Largest edge defect `|a·μ_γ − b·μ_β|`, as a float.
    pub fn max_edge_defect(&self) -> f64 {
        let nodes: Vec<KType> = self.entries.keys().copied().collect();
        edges::<T>(&nodes)
            .iter()
            .map(|e| {
                let lhs = e.a.clone() * self.entries[&e.upper].clone();
                let rhs = e.b.clone() * self.entries[&e.lower].clone();
                (lhs - rhs).to_f64_lossy().abs()
            })
            .fold(0.0, f64::max)
    }
}

fn lattice(n: u32, j_max: u32) -> Vec<KType> {
    let mut nodes = Vec::new();
    for j in 0..=j_max as i64 {
        for q in KType::q_range(n) {
            nodes.push(KType { dim_n: n, j, q });
        }
    }
    nodes
}

fn solve<T: Scalar>(n: u32, j_max: u32, seeds: &[(KType, T)]) -> Result<(BTreeMap<KType, T>, Vec<KType>)> {
    let nodes = lattice(n, j_max);
    let all_edges = edges::<T>(&nodes);
    let mut incident: BTreeMap<KType, Vec<usize>> = BTreeMap::new();
    for (i, e) in all_edges.iter().enumerate() {
        incident.entry(e.lower).or_default().push(i);
        incident.entry(e.upper).or_default().push(i);
    }

    let mut values: BTreeMap<KType, T> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut forced = Vec::new();
    for (t, v) in seeds {
        values.insert(*t, v.clone());
        queue.push_back(*t);
    }
    // a vanishing factor on one side pins the other side to zero
    for e in &all_edges {
        let pinned = if e.a.is_zero() && !e.b.is_zero() {
            Some(e.lower)
        } else if e.b.is_zero() && !e.a.is_zero() {
            Some(e.upper)
        } else {
            None
        };
        if let Some(t) = pinned {
            if let Some(v) = values.get(&t) {
                if !v.is_zero() {
                    return Err(Error::InconsistentSystem(format!("seed at {t} is forced to zero")));
                }
            } else {
                values.insert(t, T::zero());
                forced.push(t);
                queue.push_back(t);
            }
        }
    }

    while let Some(t) = queue.pop_front() {
        let known = values[&t].clone();
        for &i in incident.get(&t).map(Vec::as_slice).unwrap_or(&[]) {
            let e = &all_edges[i];
            let (other, value) = if e.lower == t {
                if e.a.is_zero() {
                    continue;
                }
                (e.upper, e.b.clone() * known.clone() / e.a.clone())
            } else {
                if e.b.is_zero() {
                    continue;
                }
                (e.lower, e.a.clone() * known.clone() / e.b.clone())
            };
            if !values.contains_key(&other) {
                values.insert(other, value);
                queue.push_back(other);
            }
        }
    }

    if let Some(t) = nodes.iter().find(|t| !values.contains_key(t)) {
        return Err(Error::InconsistentSystem(format!("value at {t} is not determined by the seeds")));
    }
    for e in &all_edges {
        let lhs = e.a.clone() * values[&e.upper].clone();
        let rhs = e.b.clone() * values[&e.lower].clone();
        if !lhs.close_to(&rhs) {
            return Err(Error::InconsistentSystem(format!(
                "edge {} → {} violated: {lhs} ≠ {rhs}",
                e.lower, e.upper
            )));
        }
    }
    Ok((values, forced))
}

/// Solves the spectrum-generating relation for `n ≥ 4` with `μ(0,2)` set to
/// `base_value`, then re-checks every edge.
pub fn spectrum_generate<T: Scalar>(n: u32, j_max: u32, base_value: T) -> Result<SpectrumTable<T>> {
    if n < 4 {
        return Err(Error::PreconditionViolation(format!(
            "n = {n}: use spectrum_generate_dim3"
        )));
    }
    let base = KType { dim_n: n, j: 0, q: 2 };
    let (entries, forced_zeros) = solve(n, j_max, &[(base, base_value)])?;
    Ok(SpectrumTable {
        dim_n: n,
        entries,
        normalization_base: base,
        free_scale_note: "one free scale, fixed by the value at (2,2)".into(),
        forced_zeros,
    })
}

/// [`spectrum_generate`] normalized so that `μ(0,2) = t0_eigenvalue(0,2)`.
pub fn spectrum_generate_normalized<T: Scalar>(n: u32, j_max: u32) -> Result<SpectrumTable<T>> {
    let base = KType::new(n, 0, 2)?;
    spectrum_generate(n, j_max, t0_eigenvalue(&base))
}

/// `n = 3`: the relation decouples at `q = −1`, leaving two free scales,
/// fixed at `(2, 2)` and `(2, −2)`.
pub fn spectrum_generate_dim3<T: Scalar>(j_max: u32, plus: T, minus: T) -> Result<SpectrumTable<T>> {
    let base = KType { dim_n: 3, j: 0, q: 2 };
    let base_minus = KType { dim_n: 3, j: 0, q: -2 };
    let (entries, forced_zeros) = solve(3, j_max, &[(base, plus), (base_minus, minus)])?;
    Ok(SpectrumTable {
        dim_n: 3,
        entries,
        normalization_base: base,
        free_scale_note: "two free scales, fixed by the values at (2,2) and (2,-2)".into(),
        forced_zeros,
    })
}

/// `Γ(n+j+2)Γ(n+q−1)/(Γ(j+2)Γ(q−1)) = rising(j+2, n)·rising(q−1, n)`.
///
/// For `n = 3` and `q < 0` this is the `T₀⁻` value, negative at `q = −2`.
pub fn t0_eigenvalue<T: Scalar>(t: &KType) -> T {
    let v = rising_factorial(t.j + 2, t.dim_n) * rising_factorial(t.q - 1, t.dim_n);
    T::from_bigint(&v)
}

/// Branch of the two-parameter family in dimension three.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// `T₀^±` on `n = 3`: the closed form on its own half `±q ≥ 0`, zero on the
/// other.
pub fn t0_branch_eigenvalue<T: Scalar>(t: &KType, branch: Branch) -> T {
    let on_branch = match branch {
        Branch::Plus => t.q >= 0,
        Branch::Minus => t.q <= 0,
    };
    if on_branch {
        t0_eigenvalue(t)
    } else {
        T::zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    PositiveSemidefinite,
    NegativeSemidefinite,
    Indefinite,
    Zero,
}

impl fmt::Display for Definiteness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Definiteness::PositiveSemidefinite => "POSITIVE_SEMIDEFINITE",
            Definiteness::NegativeSemidefinite => "NEGATIVE_SEMIDEFINITE",
            Definiteness::Indefinite => "INDEFINITE",
            Definiteness::Zero => "ZERO",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub kind: Definiteness,
    pub kernel: String,
}

/// Coefficient(s) of a Hessian in terms of `T₀`: a single scale for `n ≥ 4`,
/// `(c⁺, c⁻)` for `n = 3`.
#[derive(Debug, Clone, PartialEq)]
pub enum HessianScale<T> {
    Single(T),
    Split { plus: T, minus: T },
}

/// Definiteness of `c·T₀` (or `c⁺T₀⁺ + c⁻T₀⁻` on `S³`).
pub fn classify_hessian<T: Scalar>(n: u32, scale: &HessianScale<T>) -> Result<Classification> {
    const KERNEL: &str = "K-types with q in {0,1} (= ran S) plus conformal directions";
    const KERNEL_3: &str = "K-types with q in {-1,0,1} (= ran S) plus conformal directions";
    let kind_of = |s: i32| match s {
        1 => Definiteness::PositiveSemidefinite,
        -1 => Definiteness::NegativeSemidefinite,
        _ => Definiteness::Zero,
    };
    match (n, scale) {
        (3, HessianScale::Split { plus, minus }) => {
            // T₀⁺ > 0 at q = 2, T₀⁻ < 0 at q = −2
            let (sp, sm) = (plus.sign(), -minus.sign());
            let kind = match (sp, sm) {
                (0, 0) => Definiteness::Zero,
                (0, s) | (s, 0) => kind_of(s),
                (a, b) if a == b => kind_of(a),
                _ => Definiteness::Indefinite,
            };
            let kernel = match (sp, sm) {
                (0, 0) => "everything".to_string(),
                (0, _) => format!("{KERNEL_3} plus q = 2"),
                (_, 0) => format!("{KERNEL_3} plus q = -2"),
                _ => KERNEL_3.to_string(),
            };
            Ok(Classification { kind, kernel })
        }
        (n, HessianScale::Single(c)) if n >= 4 => {
            let kind = kind_of(c.sign());
            let kernel = if kind == Definiteness::Zero { "everything".into() } else { KERNEL.into() };
            Ok(Classification { kind, kernel })
        }
        _ => Err(Error::PreconditionViolation(format!(
            "n = {n} needs {} coefficient(s)",
            if n == 3 { "two" } else { "one" }
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn kt(n: u32, j: i64, q: i64) -> KType {
        KType::new(n, j, q).unwrap()
    }

    fn q(v: i64) -> Q {
        Q::from_int(v)
    }

    #[test]
    fn ktype_ranges() {
        assert!(KType::new(4, 0, -1).is_err());
        assert!(KType::new(3, 0, -2).is_ok());
        assert!(KType::new(3, 0, 3).is_err());
        assert!(KType::new(5, -1, 0).is_err());
        assert_eq!(kt(5, 1, 2).weight().entries, vec![3, 2, 0]);
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa::<Q>(&kt(4, 0, 0)), q(10));
        assert_eq!(kappa::<Q>(&kt(4, 0, 2)), q(16));
        assert_eq!(kappa::<Q>(&kt(3, 1, 1)), q(16));
    }

    #[test]
    fn step_examples() {
        assert_eq!(kappa_step::<Q>(&kt(4, 0, 0), Step::JUp).unwrap(), q(8));
        assert_eq!(kappa_step::<Q>(&kt(4, 0, 0), Step::QUp).unwrap(), q(2));
        assert_eq!(kappa_step::<Q>(&kt(5, 3, 1), Step::JUp).unwrap(), q(15));
        assert_eq!(kappa_step::<Q>(&kt(5, 0, 2), Step::QUp), Err(Error::InvalidStep));
    }

    #[test]
    fn transition_examples() {
        assert_eq!(transition_coeff(&kt(4, 0, 0), &kt(4, 1, 0), &q(2)).unwrap(), q(6));
        assert_eq!(transition_coeff(&kt(4, 0, 1), &kt(4, 0, 2), &q(-2)).unwrap(), q(0));
        assert_eq!(transition_coeff(&kt(4, 0, 0), &kt(4, 1, 1), &q(0)), Err(Error::NotAdjacent));
        let half = transition_coeff(&kt(6, 2, 1), &kt(6, 2, 2), &q(0)).unwrap();
        assert_eq!(half * q(2), kappa_step::<Q>(&kt(6, 2, 1), Step::QUp).unwrap());
    }

    #[test]
    fn generate_examples() {
        let t = spectrum_generate(4, 1, q(2880)).unwrap();
        assert_eq!(t.get(0, 2), Some(&q(2880)));
        assert_eq!(t.get(1, 2), Some(&q(8640)));
        for j in 0..=1 {
            assert_eq!(t.get(j, 0), Some(&q(0)));
            assert_eq!(t.get(j, 1), Some(&q(0)));
        }
        let t = spectrum_generate(5, 0, q(1)).unwrap();
        assert_eq!(t.entries.len(), 3);
        assert_eq!(t.get(0, 1), Some(&q(0)));
        let z = spectrum_generate(6, 3, q(0)).unwrap();
        assert!(z.entries.values().all(|v| v == &q(0)));
    }

    #[test]
    fn generate_float_path() {
        let t = spectrum_generate(7, 20, 1.0f64).unwrap();
        assert!(t.max_edge_defect() < 1e-6 * t.get(20, 2).unwrap());
        let exact = spectrum_generate(7, 20, q(1)).unwrap();
        for (k, v) in &exact.entries {
            let f = t.entries[k];
            assert!((f - v.to_f64_lossy()).abs() <= 1e-12 * f.abs().max(1.0));
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(t0_eigenvalue::<Q>(&kt(4, 0, 2)), q(2880));
        assert_eq!(t0_eigenvalue::<Q>(&kt(3, 0, 2)), q(144));
        assert_eq!(t0_eigenvalue::<Q>(&kt(3, 0, -2)), q(-144));
        for n in 4..9 {
            for j in 0..5 {
                assert_eq!(t0_eigenvalue::<Q>(&kt(n, j, 1)), q(0));
            }
        }
        assert_eq!(t0_branch_eigenvalue::<Q>(&kt(3, 1, -2), Branch::Plus), q(0));
        assert!(t0_branch_eigenvalue::<Q>(&kt(3, 1, -2), Branch::Minus) < q(0));
    }

    #[test]
    fn dim3_recursion_matches_branches() {
        let t = spectrum_generate_dim3(6, q(144), q(-144)).unwrap();
        for (k, v) in &t.entries {
            assert_eq!(v, &t0_eigenvalue::<Q>(k), "at {k}");
        }
        assert!(t.forced_zeros.iter().any(|k| k.q == -1));
    }

    #[test]
    fn classification() {
        let c = classify_hessian(5, &HessianScale::Single(q(1))).unwrap();
        assert_eq!(c.kind, Definiteness::PositiveSemidefinite);
        assert!(c.kernel.contains("q in {0,1}"));
        let c = classify_hessian(3, &HessianScale::Split { plus: q(1), minus: q(-1) }).unwrap();
        assert_eq!(c.kind, Definiteness::PositiveSemidefinite);
        let c = classify_hessian(3, &HessianScale::Split { plus: q(-2), minus: q(3) }).unwrap();
        assert_eq!(c.kind, Definiteness::NegativeSemidefinite);
        let c = classify_hessian(3, &HessianScale::Split { plus: q(1), minus: q(1) }).unwrap();
        assert_eq!(c.kind, Definiteness::Indefinite);
        let c = classify_hessian(3, &HessianScale::Split { plus: q(0), minus: q(0) }).unwrap();
        assert_eq!(c.kind, Definiteness::Zero);
        assert!(classify_hessian(3, &HessianScale::Single(q(1))).is_err());
        assert!(classify_hessian(4, &HessianScale::Split { plus: q(1), minus: q(1) }).is_err());
    }
}
