//! Γ-invariant distance-like functions `d(o, ·)` on F_k with translation
//! length estimators, threshold generating sets, coned-off distances and
//! an empirical hyperbolicity estimate.

mod coned;
mod delta;
mod genset;
mod threshold;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

pub use coned::coned_off_distance;
pub use delta::estimate_delta;
pub use genset::GeneratingSet;
pub(crate) use genset::Engine;
pub use threshold::{threshold_generating_set, verify_sandwich, ThresholdSet};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::{operator_norm, smallest_modulus, spectral_radius, Representation};
use crate::words::{peel, Automorphism, CyclicWord, SubgroupGraph, Word};

/// Certified interval for a stable translation length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LengthBracket<T> {
    pub lower: T,
    pub upper: T,
    /// Powers used; 0 for an exact value.
    pub n_used: usize,
}

impl<T: Scalar> LengthBracket<T> {
    pub fn exact(v: T) -> Self {
        LengthBracket { lower: v, upper: v, n_used: 0 }
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn contains(&self, x: T, tol: T) -> bool {
        self.lower - tol <= x && x <= self.upper + tol
    }

    pub fn mid(&self) -> T {
        (self.lower + self.upper) / T::cst(2.0)
    }
}

pub struct WordMetric {
    pub(crate) set: GeneratingSet,
    pub(crate) engine: Engine,
}

pub struct ConedOff {
    pub(crate) set: GeneratingSet,
    pub(crate) subgroup: SubgroupGraph,
    memo: Mutex<HashMap<Word, u32>>,
}

pub enum MetricKind<T: Scalar> {
    Word(WordMetric),
    PulledBack { phi: Automorphism, inner: Arc<MetricHandle<T>> },
    Combination(Vec<(T, Arc<MetricHandle<T>>)>),
    MatrixLogNorm(Representation<T>),
    SymmetrizedMatrixLogNorm(Representation<T>),
    ConedOff(ConedOff),
}

/// An evaluatable distance-like function with its hyperbolicity constant δ
/// and rough-geodesic constant α. Distance memos are grow-only and shared
/// across threads.
pub struct MetricHandle<T: Scalar> {
    name: String,
    rank: usize,
    kind: MetricKind<T>,
    delta: T,
    alpha_rg: T,
    budget: usize,
}

pub const DEFAULT_BUDGET: usize = 4_000_000;

impl<T: Scalar> fmt::Debug for MetricHandle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricHandle")
            .field("name", &self.name)
            .field("rank", &self.rank)
            .field("delta", &self.delta)
            .field("alpha_rg", &self.alpha_rg)
            .field("budget", &self.budget)
            .finish_non_exhaustive()
    }
}

impl<T: Scalar> MetricHandle<T> {
    fn wrap(name: &str, rank: usize, kind: MetricKind<T>, delta: T, alpha_rg: T) -> Self {
        MetricHandle { name: name.to_string(), rank, kind, delta, alpha_rg, budget: DEFAULT_BUDGET }
    }

    /// Word metric. δ = α = 0 for the standard basis, otherwise user supplied
    /// through [`with_delta`](Self::with_delta).
    pub fn word(set: GeneratingSet) -> Self {
        let rank = set.rank();
        let engine = Engine::for_set(&set);
        Self::wrap("word", rank, MetricKind::Word(WordMetric { set, engine }), T::zero(), T::zero())
    }

    pub fn standard(rank: usize) -> Self {
        Self::word(GeneratingSet::standard(rank)).named("S")
    }

    /// `d^φ(o, x) = d(o, φ(x))`.
    pub fn pulled_back(phi: Automorphism, inner: Arc<MetricHandle<T>>) -> Result<Self> {
        if phi.rank() != inner.rank {
            return Err(Error::PreconditionViolated("automorphism and metric ranks differ".into()));
        }
        let (d, a, r) = (inner.delta, inner.alpha_rg, inner.rank);
        Ok(Self::wrap("pulled-back", r, MetricKind::PulledBack { phi, inner }, d, a))
    }

    /// `Σ cᵢ dᵢ` with non-negative coefficients, not all zero.
    pub fn combination(terms: Vec<(T, Arc<MetricHandle<T>>)>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::PreconditionViolated("empty combination".into()));
        };
        let rank = first.1.rank;
        if terms.iter().any(|(c, m)| *c < T::zero() || m.rank != rank) || terms.iter().all(|(c, _)| *c == T::zero()) {
            return Err(Error::PreconditionViolated("coefficients must be non-negative and not all zero, ranks equal".into()));
        }
        let delta = terms.iter().map(|(c, m)| *c * m.delta).sum();
        let alpha = terms.iter().map(|(c, m)| *c * m.alpha_rg).sum();
        Ok(Self::wrap("combination", rank, MetricKind::Combination(terms), delta, alpha))
    }

    /// `ψ(o, x) = log ‖ρ(x)‖`.
    pub fn matrix_log_norm(rep: Representation<T>) -> Self {
        let r = rep.rank();
        Self::wrap("matrix-log-norm", r, MetricKind::MatrixLogNorm(rep), T::zero(), T::zero())
    }

    /// `log ‖ρ(x)‖ + log ‖ρ(x⁻¹)‖`.
    pub fn symmetrized_matrix_log_norm(rep: Representation<T>) -> Self {
        let r = rep.rank();
        Self::wrap("symmetrized-matrix-log-norm", r, MetricKind::SymmetrizedMatrixLogNorm(rep), T::zero(), T::zero())
    }

    /// Word metric of `set` with every left coset of `subgroup` coned off.
    pub fn coned_off(set: GeneratingSet, subgroup: SubgroupGraph) -> Result<Self> {
        if set.rank() != subgroup.rank() {
            return Err(Error::PreconditionViolated("subgroup and generating set ranks differ".into()));
        }
        let r = set.rank();
        Ok(Self::wrap("coned-off", r, MetricKind::ConedOff(ConedOff { set, subgroup, memo: Mutex::new(HashMap::new()) }), T::zero(), T::zero()))
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn with_delta(mut self, delta: T) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_alpha_rg(mut self, alpha: T) -> Self {
        self.alpha_rg = alpha;
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kind(&self) -> &MetricKind<T> {
        &self.kind
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn alpha_rg(&self) -> T {
        self.alpha_rg
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn is_standard_basis(&self) -> bool {
        matches!(&self.kind, MetricKind::Word(w) if w.set.is_standard_basis())
    }

    /// Word metric of the given set, if that is what this handle is.
    pub fn generating_set(&self) -> Option<&GeneratingSet> {
        match &self.kind {
            MetricKind::Word(w) => Some(&w.set),
            _ => None,
        }
    }

    /// `d(o, x) = d(o, x⁻¹)` holds by construction.
    pub fn is_symmetric(&self) -> bool {
        match &self.kind {
            MetricKind::Word(_) | MetricKind::SymmetrizedMatrixLogNorm(_) | MetricKind::ConedOff(_) => true,
            MetricKind::PulledBack { inner, .. } => inner.is_symmetric(),
            MetricKind::Combination(t) => t.iter().all(|(_, m)| m.is_symmetric()),
            MetricKind::MatrixLogNorm(_) => false,
        }
    }

    /// `d(o, x)`.
    pub fn distance(&self, x: &Word) -> Result<T> {
        match &self.kind {
            MetricKind::Word(w) => Ok(T::from_u32(w.engine.distance(&w.set, x, self.budget)?).unwrap()),
            MetricKind::PulledBack { phi, inner } => inner.distance(&phi.apply(x)),
            MetricKind::Combination(terms) => {
                let mut s = T::zero();
                for (c, m) in terms {
                    s = s + *c * m.distance(x)?;
                }
                Ok(s)
            }
            MetricKind::MatrixLogNorm(rep) => Ok(operator_norm(&rep.eval(x)).ln()),
            MetricKind::SymmetrizedMatrixLogNorm(rep) => {
                Ok(operator_norm(&rep.eval(x)).ln() + operator_norm(&rep.eval(&x.inverse())).ln())
            }
            MetricKind::ConedOff(c) => {
                if let Some(&d) = c.memo.lock().expect("memo poisoned").get(x) {
                    return Ok(T::from_u32(d).unwrap());
                }
                let d = coned_off_distance(&c.set, &c.subgroup, x, self.budget)?;
                c.memo.lock().expect("memo poisoned").insert(x.clone(), d);
                Ok(T::from_u32(d).unwrap())
            }
        }
    }

    /// `d(x, y) = d(o, x⁻¹y)`.
    pub fn distance_between(&self, x: &Word, y: &Word) -> Result<T> {
        self.distance(&x.inverse().multiply(y))
    }

    /// Exact stable translation length of the class of `x`, when this kind of
    /// metric admits one: the free basis, factor-closed generating sets, pullbacks
    /// and combinations of those, and matrix log-norms (log λ₁, log λ₁/λ_m).
    pub fn translation_length(&self, x: &Word) -> Result<Option<T>> {
        match &self.kind {
            MetricKind::Word(w) => {
                let (core, _) = peel(x);
                Ok(w.engine.translation_length(core.letters()).map(T::cst))
            }
            MetricKind::PulledBack { phi, inner } => inner.translation_length(&phi.apply(x)),
            MetricKind::Combination(terms) => {
                let mut s = T::zero();
                for (c, m) in terms {
                    match m.translation_length(x)? {
                        Some(l) => s = s + *c * l,
                        None => return Ok(None),
                    }
                }
                Ok(Some(s))
            }
            MetricKind::MatrixLogNorm(rep) => Ok(Some(spectral_radius(&rep.eval(x))?.ln())),
            MetricKind::SymmetrizedMatrixLogNorm(rep) => {
                let m = rep.eval(x);
                Ok(Some(spectral_radius(&m)?.ln() - smallest_modulus(&m)?.ln()))
            }
            MetricKind::ConedOff(_) => Ok(None),
        }
    }

    /// Fekete/displacement bracket from the powers x, x², …, x^N:
    /// upper = min d(o,xⁿ)/n, lower = max (d(o,x²ⁿ) − d(o,xⁿ) − 2δ)/n over n ≤ N/2.
    /// Powers whose distance exceeds the budget are dropped.
    pub fn translation_length_bracket(&self, x: &Word, n: usize) -> Result<LengthBracket<T>> {
        if n < 2 {
            return Err(Error::PreconditionViolated("bracket needs N >= 2".into()));
        }
        if x.is_empty() {
            return Ok(LengthBracket { lower: T::zero(), upper: T::zero(), n_used: n });
        }
        // Powers beyond the budget are dropped; `n_used` records what was used.
        let mut d: Vec<T> = Vec::with_capacity(n);
        for k in 1..=n {
            match self.distance(&x.pow(k as i64)) {
                Ok(v) => d.push(v),
                Err(Error::BudgetExceeded { .. }) if k > 1 => break,
                Err(e) => return Err(e),
            }
        }
        let n = d.len();
        let mut upper = T::infinity();
        for (k, &v) in d.iter().enumerate() {
            upper = upper.min(v / T::of_usize(k + 1));
        }
        let two = T::cst(2.0);
        let mut lower = T::zero();
        for k in 1..=n / 2 {
            lower = lower.max((d[2 * k - 1] - d[k - 1] - two * self.delta) / T::of_usize(k));
        }
        upper = upper.max(T::zero());
        Ok(LengthBracket { lower: lower.min(upper), upper, n_used: n })
    }

    /// Exact value when available, otherwise the depth-`n` bracket.
    pub fn length_bracket(&self, x: &Word, n: usize) -> Result<LengthBracket<T>> {
        match self.translation_length(x)? {
            Some(v) => Ok(LengthBracket::exact(v)),
            None => self.translation_length_bracket(x, n),
        }
    }
}

/// ℓ_S for the free basis: the cyclically reduced length.
pub fn translation_length_exact<T: Scalar>(m: &MetricHandle<T>, c: &CyclicWord) -> Result<T> {
    if !m.is_standard_basis() {
        return Err(Error::NotABasis);
    }
    Ok(T::of_usize(c.len()))
}
