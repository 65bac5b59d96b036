use rayon::prelude::*;

use super::jsr::SandwichEstimate;
use crate::error::{Error, Result};
use crate::metrics::MetricHandle;
use crate::scalar::Scalar;
use crate::words::Word;

const BRACKET_DEPTH: usize = 8;

/// Sandwich for lim ψ(o, Sⁿ)/n over the semigroup generated by `set`:
/// upper = min over n ≤ N of max over Sⁿ of ψ(o,w)/n, and
/// lower = max over j ≤ N and w ∈ Sʲ of ℓ_ψ(w)/j (lower end of the bracket).
pub fn joint_translation_length<T: Scalar>(
    m: &MetricHandle<T>,
    set: &[Word],
    depth: usize,
    budget: usize,
) -> Result<SandwichEstimate<T>> {
    if set.is_empty() || depth == 0 {
        return Err(Error::PreconditionViolated("need a nonempty set and depth >= 1".into()));
    }
    let total: f64 = (1..=depth).map(|n| (set.len() as f64).powi(n as i32)).sum();
    if total > budget as f64 {
        return Err(Error::BudgetExceeded { budget });
    }
    let mut upper = T::infinity();
    let mut lower = T::zero();
    let mut level: Vec<Word> = vec![Word::identity()];
    for n in 1..=depth {
        level = level.par_iter().flat_map_iter(|w| set.iter().map(move |s| w.multiply(s))).collect();
        let stats: Vec<Result<(T, T)>> = level
            .par_iter()
            .map(|w| Ok((m.distance(w)?, m.length_bracket(w, BRACKET_DEPTH)?.lower)))
            .collect();
        let nn = T::of_usize(n);
        let mut dmax = T::neg_infinity();
        for s in stats {
            let (d, l) = s?;
            dmax = dmax.max(d);
            lower = lower.max(l / nn);
        }
        upper = upper.min(dmax / nn);
    }
    Ok(SandwichEstimate { lower: lower.min(upper), upper, depth })
}
