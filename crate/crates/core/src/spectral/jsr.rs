use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::eigen::{operator_norm, spectral_radius};
use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::rng;
use crate::scalar::Scalar;

/// Finite set of equal-size square matrices, none identically zero.
#[derive(Clone, Debug, Serialize)]
pub struct MatrixSet<T> {
    dim: usize,
    mats: Vec<Matrix<T>>,
}

impl<T: Scalar> MatrixSet<T> {
    pub fn new(mats: Vec<Matrix<T>>) -> Result<Self> {
        let Some(first) = mats.first() else {
            return Err(Error::PreconditionViolated("empty matrix set".into()));
        };
        let dim = first.dim();
        if mats.iter().any(|m| m.dim() != dim) {
            return Err(Error::PreconditionViolated("matrices of unequal dimension".into()));
        }
        if mats.iter().any(Matrix::is_zero) {
            return Err(Error::PreconditionViolated("zero matrix in set".into()));
        }
        Ok(MatrixSet { dim, mats })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn matrices(&self) -> &[Matrix<T>] {
        &self.mats
    }
}

/// `count` matrices of size `dim` with entries uniform in `[lo, hi]`.
pub fn random_matrix_set<T: Scalar>(seed: u64, stream: u64, count: usize, dim: usize, lo: f64, hi: f64) -> MatrixSet<T> {
    let mut r = rng::stream(seed, stream);
    let mats = (0..count)
        .map(|_| {
            let data = (0..dim * dim).map(|_| T::cst(r.gen_range(lo..=hi))).collect();
            Matrix::from_row_major(dim, data).expect("square")
        })
        .collect();
    MatrixSet::new(mats).expect("nonzero with probability one")
}

/// Certified interval `[lower, upper]` for a limit, with the depth used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SandwichEstimate<T> {
    pub lower: T,
    pub upper: T,
    pub depth: usize,
}

impl<T: Scalar> SandwichEstimate<T> {
    pub fn contains(&self, x: T, tol: T) -> bool {
        self.lower - tol <= x && x <= self.upper + tol
    }

    pub fn width(&self) -> T {
        self.upper - self.lower
    }
}

fn product_count(k: usize, depth: usize) -> Option<usize> {
    let mut total: usize = 0;
    let mut level: usize = 1;
    for _ in 0..depth {
        level = level.checked_mul(k)?;
        total = total.checked_add(level)?;
    }
    Some(total)
}

#[derive(Clone)]
struct Levels<T> {
    norm: Vec<T>,
    rho: Vec<T>,
}

impl<T: Scalar> Levels<T> {
    fn new(depth: usize) -> Self {
        Levels { norm: vec![T::zero(); depth], rho: vec![T::zero(); depth] }
    }

    fn merge(mut self, o: Levels<T>) -> Self {
        for (a, b) in self.norm.iter_mut().zip(o.norm) {
            *a = a.max(b);
        }
        for (a, b) in self.rho.iter_mut().zip(o.rho) {
            *a = a.max(b);
        }
        self
    }
}

fn dfs<T: Scalar>(set: &[Matrix<T>], prefix: &Matrix<T>, level: usize, depth: usize, norms: bool, acc: &mut Levels<T>) -> Result<()> {
    if norms {
        acc.norm[level] = acc.norm[level].max(operator_norm(prefix));
    }
    acc.rho[level] = acc.rho[level].max(spectral_radius(prefix)?);
    if level + 1 < depth {
        for m in set {
            dfs(set, &prefix.mul(m), level + 1, depth, norms, acc)?;
        }
    }
    Ok(())
}

/// Per-length maxima of norm and spectral radius over all products of length 1..=depth.
fn exhaustive_levels<T: Scalar>(set: &MatrixSet<T>, depth: usize, norms: bool) -> Result<Levels<T>> {
    let parts: Vec<Result<Levels<T>>> = set
        .mats
        .par_iter()
        .map(|m| {
            let mut acc = Levels::new(depth);
            dfs(&set.mats, m, 0, depth, norms, &mut acc)?;
            Ok(acc)
        })
        .collect();
    let mut out = Levels::new(depth);
    for p in parts {
        out = out.merge(p?);
    }
    Ok(out)
}

/// Sandwich for the joint spectral radius from all products up to `depth`:
/// upper = min_n (max ‖A‖)^(1/n), lower = max_n (max λ₁(A))^(1/n).
pub fn jsr_estimate<T: Scalar>(set: &MatrixSet<T>, depth: usize, budget: usize) -> Result<SandwichEstimate<T>> {
    if depth == 0 {
        return Err(Error::PreconditionViolated("depth must be positive".into()));
    }
    match product_count(set.len(), depth) {
        Some(c) if c <= budget => {}
        _ => return Err(Error::BudgetExceeded { budget }),
    }
    let lv = exhaustive_levels(set, depth, true)?;
    let mut upper = T::infinity();
    let mut lower = T::zero();
    for n in 0..depth {
        let e = T::of_usize(n + 1).recip();
        upper = upper.min(lv.norm[n].powf(e));
        lower = lower.max(lv.rho[n].powf(e));
    }
    // λ₁(A) ≤ ‖A‖ holds exactly; only rounding can invert the pair
    if lower > upper && lower - upper <= T::cst(1e-12) * upper {
        lower = upper;
    }
    Ok(SandwichEstimate { lower, upper, depth })
}

pub fn default_c_m<T: Scalar>(m: usize) -> T {
    T::cst(8.0) * T::LN_2() + T::cst(5.0) * T::of_usize(m).ln()
}

pub fn default_d_m(m: usize) -> usize {
    2 * m * m * m
}

#[derive(Clone, Debug, Serialize)]
pub struct BochiReport<T> {
    /// e^{c_m} · max_{j ≤ d_m} max_{A ∈ S^j} λ₁(A)^{1/j}
    pub value: T,
    pub c_m: T,
    pub d_m: usize,
    pub max_root: T,
    pub argmax_length: usize,
    /// Lengths up to this one were enumerated completely.
    pub exhaustive_through: usize,
    /// False when some lengths were subsampled: the value is then a
    /// randomized lower estimate of the right-hand side.
    pub exhaustive: bool,
    pub samples_per_level: usize,
}

/// Right-hand side of Bochi's inequality 𝔐(S) ≤ e^{c_m} max_j max_{S^j} λ₁^{1/j}.
pub fn bochi_bound<T: Scalar>(
    set: &MatrixSet<T>,
    c_m: Option<T>,
    d_m: Option<usize>,
    budget: usize,
    seed: u64,
) -> Result<BochiReport<T>> {
    let m = set.dim();
    let c_m = c_m.unwrap_or_else(|| default_c_m(m));
    let d_m = d_m.unwrap_or_else(|| default_d_m(m));
    if d_m == 0 {
        return Err(Error::PreconditionViolated("d_m must be at least 1".into()));
    }
    let mut full = 0;
    while full < d_m && product_count(set.len(), full + 1).is_some_and(|c| c <= budget) {
        full += 1;
    }
    if full == 0 {
        return Err(Error::BudgetExceeded { budget });
    }
    let lv = exhaustive_levels(set, full, false)?;
    let mut roots: Vec<T> = (0..full).map(|n| lv.rho[n].powf(T::of_usize(n + 1).recip())).collect();
    let samples = if full < d_m { (budget / (d_m - full)).max(1000) } else { 0 };
    for j in full + 1..=d_m {
        let mut r = rng::stream(seed, j as u64);
        let words: Vec<Vec<usize>> = (0..samples).map(|_| (0..j).map(|_| r.gen_range(0..set.len())).collect()).collect();
        let rhos: Vec<Result<T>> = words
            .par_iter()
            .map(|w| {
                let mut p = set.mats[w[0]].clone();
                for &i in &w[1..] {
                    p = p.mul(&set.mats[i]);
                }
                spectral_radius(&p)
            })
            .collect();
        let mut best = T::zero();
        for x in rhos {
            best = best.max(x?);
        }
        roots.push(best.powf(T::of_usize(j).recip()));
    }
    let (mut argmax, mut max_root) = (1, T::zero());
    for (i, &x) in roots.iter().enumerate() {
        if x > max_root {
            max_root = x;
            argmax = i + 1;
        }
    }
    Ok(BochiReport {
        value: c_m.exp() * max_root,
        c_m,
        d_m,
        max_root,
        argmax_length: argmax,
        exhaustive_through: full,
        exhaustive: full == d_m,
        samples_per_level: samples,
    })
}
