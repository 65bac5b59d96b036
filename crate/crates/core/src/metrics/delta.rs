use rand::Rng;

use super::MetricHandle;
use crate::error::{Error, Result};
use crate::rng;
use crate::scalar::Scalar;
use crate::words::Word;

/// Largest four-point defect over `quadruples` random quadruples drawn from
/// `points`: half the gap between the two largest of the three pair sums.
/// A lower bound for the true δ; zero on a tree.
pub fn estimate_delta<T: Scalar>(m: &MetricHandle<T>, points: &[Word], quadruples: usize, seed: u64) -> Result<T> {
    if points.len() < 4 {
        return Err(Error::PreconditionViolated("need at least four sample points".into()));
    }
    let mut r = rng::stream(seed, 0x5eed_de17a);
    let mut worst = T::zero();
    for _ in 0..quadruples {
        let q: [&Word; 4] = std::array::from_fn(|_| &points[r.gen_range(0..points.len())]);
        let d = |i: usize, j: usize| m.distance_between(q[i], q[j]);
        let mut s = [d(0, 1)? + d(2, 3)?, d(0, 2)? + d(1, 3)?, d(0, 3)? + d(1, 2)?];
        s.sort_by(|a, b| b.partial_cmp(a).unwrap());
        worst = worst.max((s[0] - s[1]) / T::cst(2.0));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::GeneratingSet;
    use std::sync::Arc;

    fn ball(r: usize) -> Vec<Word> {
        let mut out = vec![Word::identity()];
        let mut layer = vec![Word::identity()];
        for _ in 0..r {
            let mut next = Vec::new();
            for x in &layer {
                for l in 0..4u8 {
                    if x.last() != Some(l ^ 1) {
                        next.push(x.times_letter(l));
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn tree_is_zero_hyperbolic() {
        let s = MetricHandle::<f64>::standard(2);
        assert_eq!(estimate_delta(&s, &ball(4), 2000, 1).unwrap(), 0.0);
    }

    #[test]
    fn pulled_back_matches_inner_on_images() {
        let phi = crate::words::Automorphism::new(
            vec![Word::parse("a").unwrap(), Word::parse("ba").unwrap()],
            vec![Word::parse("a").unwrap(), Word::parse("bA").unwrap()],
        )
        .unwrap();
        let sp = Arc::new(MetricHandle::<f64>::word(
            GeneratingSet::new(2, &[Word::parse("a").unwrap(), Word::parse("b").unwrap(), Word::parse("ab").unwrap()]).unwrap(),
        ));
        let pb = MetricHandle::pulled_back(phi.clone(), sp.clone()).unwrap();
        let pts = ball(3);
        let images: Vec<Word> = pts.iter().map(|x| phi.apply(x)).collect();
        assert_eq!(estimate_delta(&pb, &pts, 500, 9).unwrap(), estimate_delta(&sp, &images, 500, 9).unwrap());
    }

    #[test]
    fn combination_defect_is_controlled() {
        let s = Arc::new(MetricHandle::<f64>::standard(2));
        let sp = Arc::new(MetricHandle::<f64>::word(
            GeneratingSet::new(2, &[Word::parse("a").unwrap(), Word::parse("b").unwrap(), Word::parse("ab").unwrap()]).unwrap(),
        ));
        let pts = ball(3);
        let d1 = estimate_delta(&s, &pts, 800, 2).unwrap();
        let d2 = estimate_delta(&sp, &pts, 800, 2).unwrap();
        let c = MetricHandle::combination(vec![(1.0, s), (0.5, sp)]).unwrap();
        let dc = estimate_delta(&c, &pts, 800, 2).unwrap();
        assert!(dc <= d1 + 0.5 * d2 + 1.0, "{dc} vs {d1} {d2}");
    }
}
