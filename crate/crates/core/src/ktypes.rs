//! Dominant weights of `SO(N)`, the `SO(N) ↓ SO(N-1)` interlacing law, and
//! the K-types of the tangent and trace-free symmetric two-tensor bundles
//! over `Sⁿ = SO(n+1)/SO(n)`.

use std::fmt;

use crate::error::{Error, Result};

/// Highest weight of an irreducible representation of `SO(group_rank)`,
/// stored padded to `⌊group_rank/2⌋` entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DominantWeight {
    pub entries: Vec<i64>,
    pub group_rank: usize,
}

impl DominantWeight {
    /// Pads `entries` with zeros to the rank length. Fails if `entries` is
    /// too long or the result is not dominant.
    pub fn new(entries: &[i64], group_rank: usize) -> Result<Self> {
        let len = group_rank / 2;
        if group_rank < 2 || entries.len() > len {
            return Err(Error::PreconditionViolation(format!(
                "{entries:?} does not fit SO({group_rank})"
            )));
        }
        let mut padded = entries.to_vec();
        padded.resize(len, 0);
        let w = Self { entries: padded, group_rank };
        if !is_dominant(&w) {
            return Err(Error::PreconditionViolation(format!(
                "{:?} is not dominant for SO({group_rank})",
                w.entries
            )));
        }
        Ok(w)
    }

    /// Builds without checking dominance; use [`is_dominant`] afterwards.
    pub fn unchecked(entries: Vec<i64>, group_rank: usize) -> Self {
        Self { entries, group_rank }
    }

    pub fn trivial(group_rank: usize) -> Self {
        Self { entries: vec![0; group_rank / 2], group_rank }
    }

    /// `(k, 0, …, 0)`.
    pub fn symmetric_power(k: i64, group_rank: usize) -> Result<Self> {
        Self::new(&[k], group_rank)
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|&&e| e != 0).count()
    }
}

impl fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn is_dominant(w: &DominantWeight) -> bool {
    let e = &w.entries;
    if w.group_rank < 2 || e.len() != w.group_rank / 2 {
        return false;
    }
    if e.is_empty() {
        return true;
    }
    let even = w.group_rank % 2 == 0;
    let last = e.len() - 1;
    for i in 0..last {
        if e[i] < e[i + 1] {
            return false;
        }
    }
    if even {
        // only the last entry may be negative, bounded by its neighbour
        if last > 0 {
            e[last].abs() <= e[last - 1] && e[..last].iter().all(|&x| x >= 0)
        } else {
            true
        }
    } else {
        e.iter().all(|&x| x >= 0)
    }
}

/// Multiplicity-one test for `σ ⊂ β|SO(N-1)` with `β` of `SO(N)`.
///
/// `N` odd: `β₁ ≥ σ₁ ≥ β₂ ≥ ⋯ ≥ β_m ≥ |σ_m|`.
/// `N` even: `β₁ ≥ σ₁ ≥ β₂ ≥ ⋯ ≥ σ_{m-1} ≥ |β_m|`.
pub fn branches(beta: &DominantWeight, sigma: &DominantWeight) -> Result<bool> {
    if beta.group_rank != sigma.group_rank + 1 {
        return Err(Error::RankMismatch { beta_rank: beta.group_rank, sigma_rank: sigma.group_rank });
    }
    if !is_dominant(beta) || !is_dominant(sigma) {
        return Err(Error::PreconditionViolation("weights must be dominant".into()));
    }
    let b = &beta.entries;
    let s = &sigma.entries;
    let ok = if beta.group_rank % 2 == 1 {
        // β and σ both have m entries; σ_m may be negative
        let m = b.len();
        (0..m).all(|i| if i + 1 < m { b[i] >= s[i] && s[i] >= b[i + 1] } else { b[i] >= s[i].abs() })
    } else {
        // σ has one entry fewer; β_m may be negative
        let m = s.len();
        (0..m).all(|i| b[i] >= s[i] && if i + 1 < m { s[i] >= b[i + 1] } else { s[i] >= b[i + 1].abs() })
    };
    Ok(ok)
}

/// The fibre representations handled by [`enumerate_bundle_ktypes`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fibre {
    /// `σ = (1)`, the tangent bundle.
    Vector,
    /// `σ = (2)`, trace-free symmetric two-tensors.
    TraceFreeSymmetric,
}

impl Fibre {
    pub fn from_sigma(sigma: &DominantWeight) -> Result<Self> {
        let head = sigma.entries.first().copied().unwrap_or(0);
        let tail_zero = sigma.entries.iter().skip(1).all(|&e| e == 0);
        match (head, tail_zero) {
            (1, true) => Ok(Fibre::Vector),
            (2, true) => Ok(Fibre::TraceFreeSymmetric),
            _ => Err(Error::UnsupportedSigma(sigma.entries.clone())),
        }
    }

    pub fn degree(self) -> i64 {
        match self {
            Fibre::Vector => 1,
            Fibre::TraceFreeSymmetric => 2,
        }
    }
}

/// K-types `(d+l, r, 0, …)` of the bundle with fibre `σ = (d)` over `Sⁿ`,
/// `0 ≤ l ≤ j_max`, `0 ≤ r ≤ d`, as `SO(n+1)` weights. Requires `n ≥ 4`;
/// see [`enumerate_bundle_ktypes_dim3`] for `n = 3`.
pub fn enumerate_bundle_ktypes(sigma: &DominantWeight, n: u32, j_max: u32) -> Result<Vec<DominantWeight>> {
    if n < 4 {
        return Err(Error::PreconditionViolation(format!(
            "n = {n}: use the dimension-3 enumeration"
        )));
    }
    enumerate_family(sigma, n, j_max, false)
}

/// `n = 3` variant: `SO(4)` weights `(d+l, r)` with `-d ≤ r ≤ d`.
pub fn enumerate_bundle_ktypes_dim3(sigma: &DominantWeight, j_max: u32) -> Result<Vec<DominantWeight>> {
    enumerate_family(sigma, 3, j_max, true)
}

fn enumerate_family(sigma: &DominantWeight, n: u32, j_max: u32, signed: bool) -> Result<Vec<DominantWeight>> {
    if sigma.group_rank != n as usize {
        return Err(Error::RankMismatch { beta_rank: n as usize + 1, sigma_rank: sigma.group_rank });
    }
    let d = Fibre::from_sigma(sigma)?.degree();
    let rank = n as usize + 1;
    let r_min = if signed { -d } else { 0 };
    let mut out = Vec::new();
    for l in 0..=j_max as i64 {
        for r in r_min..=d {
            out.push(DominantWeight::new(&[d + l, r], rank)?);
        }
    }
    Ok(out)
}

/// All dominant weights of `SO(group_rank)` with entries bounded by `bound`
/// in absolute value, in lexicographic order.
pub fn dominant_weights_bounded(group_rank: usize, bound: i64) -> Vec<DominantWeight> {
    let len = group_rank / 2;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    fill(&mut current, len, bound, group_rank, &mut out);
    out
}

fn fill(current: &mut Vec<i64>, len: usize, bound: i64, rank: usize, out: &mut Vec<DominantWeight>) {
    if current.len() == len {
        let w = DominantWeight::unchecked(current.clone(), rank);
        if is_dominant(&w) {
            out.push(w);
        }
        return;
    }
    let hi = current.last().copied().unwrap_or(bound);
    let last_slot = current.len() + 1 == len;
    let lo = if rank % 2 == 0 && last_slot { -hi } else { 0 };
    for v in lo..=hi {
        current.push(v);
        fill(current, len, bound, rank, out);
        current.pop();
    }
}
