use super::{GeneratingSet, MetricHandle, MetricKind};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::words::Word;

/// S_n = {x ≠ o : ψ(o,x) ≤ n} together with its word metric.
pub struct ThresholdSet<T: Scalar> {
    pub set: GeneratingSet,
    pub metric: MetricHandle<T>,
    /// The search provably covered every x with ψ(o,x) ≤ n.
    pub certified: bool,
    pub searched_word_length: usize,
}

/// Constant κ with |x| ≤ κ ψ(o,x), when one is known.
fn length_factor<T: Scalar>(m: &MetricHandle<T>) -> Option<f64> {
    match m.kind() {
        MetricKind::Word(w) => Some(w.set.max_len() as f64),
        MetricKind::PulledBack { phi, inner } => {
            let back = phi.inverse_images().iter().map(Word::len).max().unwrap_or(1) as f64;
            length_factor(inner).map(|k| k * back)
        }
        MetricKind::Combination(terms) => terms
            .iter()
            .filter(|(c, _)| *c > T::zero())
            .filter_map(|(c, t)| length_factor(t).map(|k| k / c.f64()))
            .min_by(|a, b| a.partial_cmp(b).unwrap()),
        _ => None,
    }
}

const PATIENCE: usize = 3;

pub fn threshold_generating_set<T: Scalar>(m: &MetricHandle<T>, n: T) -> Result<ThresholdSet<T>> {
    let min = m.alpha_rg() + T::one();
    if !(n > min) {
        return Err(Error::ThresholdTooSmall { n: n.f64(), min: min.f64() });
    }
    let cap = length_factor(m).map(|k| (k * n.f64()).floor() as usize);
    let k = 2 * m.rank();
    let mut found = Vec::new();
    let mut layer = vec![Word::identity()];
    let mut visited = 1usize;
    let mut quiet = 0;
    let mut len = 0;
    loop {
        if cap.is_some_and(|c| len >= c) || (cap.is_none() && quiet >= PATIENCE) {
            break;
        }
        len += 1;
        let mut next = Vec::with_capacity(layer.len() * (k - 1));
        for x in &layer {
            for l in 0..k as u8 {
                if x.last() != Some(l ^ 1) {
                    next.push(x.times_letter(l));
                }
            }
        }
        visited += next.len();
        if visited > m.budget() {
            return Err(Error::BudgetExceeded { budget: m.budget() });
        }
        let before = found.len();
        for x in &next {
            if m.distance(x)? <= n {
                found.push(x.clone());
            }
        }
        quiet = if found.len() == before { quiet + 1 } else { 0 };
        layer = next;
    }
    let set = GeneratingSet::new(m.rank(), &found)?;
    let metric = MetricHandle::word(set.clone());
    Ok(ThresholdSet { set, metric, certified: cap.is_some(), searched_word_length: len })
}

/// (n − α − 1)|x|_{S_n} − (n − 1) ≤ ψ(o,x) ≤ n|x|_{S_n}.
pub fn verify_sandwich<T: Scalar>(m: &MetricHandle<T>, s: &ThresholdSet<T>, n: T, x: &Word) -> Result<bool> {
    let psi = m.distance(x)?;
    let k = s.metric.distance(x)?;
    let slack = T::cst(1e-9) * T::one().max(psi.abs());
    let lo = (n - m.alpha_rg() - T::one()) * k - (n - T::one());
    Ok(lo <= psi + slack && psi <= n * k + slack)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_two_ball() {
        let m = MetricHandle::<f64>::standard(2);
        let s = threshold_generating_set(&m, 2.0).unwrap();
        assert_eq!(s.set.len(), 16);
        assert!(s.certified);
        assert!(!s.set.contains(&Word::identity()));
        assert!(s.set.elements().iter().all(|x| s.set.contains(&x.inverse())));
    }

    #[test]
    fn sandwich_holds_exhaustively() {
        let m = MetricHandle::<f64>::standard(2);
        let s = threshold_generating_set(&m, 3.0).unwrap();
        let mut layer = vec![Word::identity()];
        for _ in 0..8 {
            let mut next = Vec::new();
            for x in &layer {
                assert!(verify_sandwich(&m, &s, 3.0, x).unwrap(), "{x}");
                for l in 0..4u8 {
                    if x.last() != Some(l ^ 1) {
                        next.push(x.times_letter(l));
                    }
                }
            }
            layer = next;
        }
    }

    #[test]
    fn threshold_too_small() {
        let m = MetricHandle::<f64>::standard(2).with_alpha_rg(1.0);
        assert!(matches!(threshold_generating_set(&m, 2.0), Err(Error::ThresholdTooSmall { .. })));
    }

    #[test]
    fn matrix_metric_uses_patience() {
        let rep = crate::spectral::Representation::<f64>::schottky(4.0, std::f64::consts::FRAC_PI_4);
        let m = MetricHandle::symmetrized_matrix_log_norm(rep);
        let s = threshold_generating_set(&m, 3.0).unwrap();
        assert!(!s.certified);
        assert!(s.set.contains(&Word::parse("a").unwrap()));
    }
}
