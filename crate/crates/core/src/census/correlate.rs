use rayon::prelude::*;
use serde::Serialize;

use super::conj::ConjCensus;
use super::element::ElementCensus;
use super::filter::Filter;
use crate::error::{Error, Result};
use crate::metrics::MetricHandle;
use crate::scalar::Scalar;
use crate::words::{cyclic_reduce, inv, Letter, Word};

#[derive(Clone, Copy, Debug)]
pub enum CorrelationMode<T> {
    /// v·ℓ = v*·ℓ* up to a relative tolerance.
    Equality { tol: T },
    /// |ℓ − ℓ*| ≤ c·ℓ^p.
    Tolerance { c: T, p: T },
}

/// Counting sequence of classes whose two lengths are correlated.
pub fn correlation_census<T: Scalar>(c: &ConjCensus<T>, v: T, v_star: T, mode: CorrelationMode<T>) -> Result<Vec<(T, T)>> {
    let f = match mode {
        CorrelationMode::Equality { tol } => Filter::Equality { v, v_star, tol },
        CorrelationMode::Tolerance { c, p } => Filter::tolerance(c, p)?,
    };
    c.filtered_counts(&f)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugateCount<T> {
    pub x: Word,
    pub radius: T,
    pub count: u64,
    pub ell: T,
    /// log(count), −∞ when no conjugate lies in the ball.
    pub lhs: T,
    /// log(ℓ + C) + v(T − ℓ)/2 + C.
    pub rhs: T,
    pub holds: bool,
}

fn rotations(c: &Word) -> Vec<Vec<Letter>> {
    let l = c.letters();
    let mut out: Vec<Vec<Letter>> = (0..l.len()).map(|i| [&l[i..], &l[..i]].concat()).collect();
    out.sort();
    out.dedup();
    out
}

/// Counts the conjugates y of x with d(o,y) ≤ T and tests
/// log(count) ≤ log(ℓ + C) + v(T − ℓ)/2 + C.
///
/// Conjugates are enumerated in normal form y = g·c'·g⁻¹ (c' a rotation of
/// the cyclic core, no cancellation), which lists each element of the orbit
/// exactly once. A word metric with pieces of length ≤ L has |y| ≤ L·d(o,y),
/// which bounds |g|.
pub fn conjugate_count_bound_check<T: Scalar>(m: &MetricHandle<T>, x: &Word, radius: T, c: T, v: T) -> Result<ConjugateCount<T>> {
    let set = m
        .generating_set()
        .ok_or_else(|| Error::Unsupported("conjugate counts need a word metric".into()))?;
    let ell = m.translation_length(x)?.ok_or(Error::RequiresExactLengths)?;
    let (core, _) = cyclic_reduce(x);
    let core = core.into_word();
    let max_word = (radius.max(T::zero()) * T::of_usize(set.max_len())).floor().to_usize().unwrap_or(0);
    let k = 2 * m.rank();
    let mut count = 0u64;
    if core.is_empty() {
        count = 1;
    } else if max_word >= core.len() {
        let g_max = (max_word - core.len()) / 2;
        let est = rotations(&core).len() as f64 * ((k - 1) as f64).powi(g_max as i32) * 2.0;
        if est > m.budget() as f64 {
            return Err(Error::BudgetExceeded { budget: m.budget() });
        }
        let rots = rotations(&core);
        let counts: Vec<Result<u64>> = rots
            .par_iter()
            .map(|r| {
                let (first, last) = (r[0], r[r.len() - 1]);
                let mut n = 0u64;
                // g is built right to left: its last letter touches c'.
                let mut stack: Vec<Vec<Letter>> = vec![Vec::new()];
                while let Some(g_rev) = stack.pop() {
                    let mut y: Vec<Letter> = g_rev.iter().rev().copied().collect();
                    y.extend_from_slice(r);
                    y.extend(g_rev.iter().map(|&l| inv(l)));
                    if m.distance(&Word::from_reduced(y))? <= radius {
                        n += 1;
                    }
                    if g_rev.len() < g_max {
                        for l in 0..k as Letter {
                            let ok = match g_rev.last() {
                                None => l != inv(first) && l != last,
                                Some(&p) => l != inv(p),
                            };
                            if ok {
                                let mut h = g_rev.clone();
                                h.push(l);
                                stack.push(h);
                            }
                        }
                    }
                }
                Ok(n)
            })
            .collect();
        for n in counts {
            count += n?;
        }
    }
    let lhs = if count == 0 { T::neg_infinity() } else { T::of_u64(count).ln() };
    let rhs = (ell + c).ln() + v * (radius - ell) / T::cst(2.0) + c;
    Ok(ConjugateCount { x: x.clone(), radius, count, ell, lhs, rhs, holds: count == 0 || lhs <= rhs })
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectionNumber<T> {
    pub radius: T,
    pub tau: T,
    /// Same statistic one step earlier.
    pub tau_prev: T,
}

/// τ(T) = (1/#{d ≤ T}) Σ_{d(o,x) ≤ T} d*(o,x)/T at the largest integer T.
pub fn intersection_number<T: Scalar>(c: &ElementCensus<T>) -> Result<IntersectionNumber<T>> {
    let t = c.radius.floor();
    if c.is_empty() || t < T::one() {
        return Err(Error::EmptyCensus);
    }
    let at = |r: T| -> Result<T> {
        let mut s = T::zero();
        let mut n = 0usize;
        for row in c.rows.iter().filter(|row| row.d <= r) {
            s = s + row.d_star.ok_or_else(|| Error::PreconditionViolated("intersection number needs a joint census".into()))?;
            n += 1;
        }
        Ok(s / T::of_usize(n) / r)
    };
    let tau = at(t)?;
    let tau_prev = if t >= T::cst(2.0) { at(t - T::one())? } else { tau };
    Ok(IntersectionNumber { radius: t, tau, tau_prev })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{enumerate_conjugacy, enumerate_elements};
    use crate::words::Automorphism;
    use std::collections::HashSet;
    use std::sync::Arc;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn orbit(x: &Word, r: usize, t: usize) -> usize {
        let s = MetricHandle::<f64>::standard(2);
        let ball = enumerate_elements(&s, r as f64).unwrap();
        let ys: HashSet<Word> = ball.rows.iter().map(|u| x.conjugate_by(&u.element)).filter(|y| y.len() <= t).collect();
        ys.len()
    }

    #[test]
    fn conjugates_of_a() {
        let s = MetricHandle::<f64>::standard(2);
        let v = 3f64.ln();
        let r = conjugate_count_bound_check(&s, &w("a"), 6.0, 2.0, v).unwrap();
        assert_eq!(r.count as usize, orbit(&w("a"), 7, 6));
        // y = g·a·g⁻¹ with |g| ≤ 2 and g ending in b or B.
        assert_eq!(r.count, 1 + 2 + 6);
        assert!(r.holds);
        let r8 = conjugate_count_bound_check(&s, &w("a"), 8.0, 2.0, v).unwrap();
        assert_eq!(r8.count, 27);
        let none = conjugate_count_bound_check(&s, &w("abab"), 3.0, 2.0, v).unwrap();
        assert_eq!(none.count, 0);
        assert!(none.holds);
    }

    #[test]
    fn orbit_enumeration_agrees() {
        let s = MetricHandle::<f64>::standard(2);
        for x in ["aab", "abAB", "abab", "bAAb"] {
            let x = w(x);
            let r = conjugate_count_bound_check(&s, &x, 7.0, 2.0, 1.0).unwrap();
            assert_eq!(r.count as usize, orbit(&x, x.len() + 7, 7), "{x}");
        }
    }

    #[test]
    fn count_is_monotone() {
        let s = MetricHandle::<f64>::standard(2);
        let mut prev = 0;
        for t in 0..9 {
            let n = conjugate_count_bound_check(&s, &w("ab"), t as f64, 2.0, 1.0).unwrap().count;
            assert!(n >= prev);
            prev = n;
        }
    }

    #[test]
    fn correlation_modes() {
        let s = Arc::new(MetricHandle::<f64>::standard(2));
        let c = enumerate_conjugacy(&s, 6.0).unwrap().with_star(&s, 8).unwrap();
        let v = 3f64.ln();
        let eq = correlation_census(&c, v, v, CorrelationMode::Equality { tol: 1e-9 }).unwrap();
        assert_eq!(eq, c.counts());
        let inf = correlation_census(&c, v, v, CorrelationMode::Tolerance { c: f64::INFINITY, p: 0.5 }).unwrap();
        assert_eq!(inf, c.counts());

        let phi = Automorphism::new(vec![w("a"), w("ba")], vec![w("a"), w("bA")]).unwrap();
        let pb = MetricHandle::pulled_back(phi, s.clone()).unwrap();
        let joint = enumerate_conjugacy(&s, 6.0).unwrap().with_star(&pb, 8).unwrap();
        let fixed = correlation_census(&joint, v, v, CorrelationMode::Equality { tol: 1e-9 }).unwrap();
        assert!(fixed.iter().skip(1).all(|p| p.1 > 0.0));
    }

    #[test]
    fn intersection_number_scaling() {
        let s = MetricHandle::<f64>::standard(2);
        let c = enumerate_elements(&s, 12.0).unwrap().with_star(&s).unwrap();
        let tau = intersection_number(&c).unwrap();
        assert!(tau.tau >= 0.9 && tau.tau <= 1.0);
        assert!(tau.tau_prev < tau.tau);
        let mut scaled = c.clone();
        for r in &mut scaled.rows {
            r.d_star = r.d_star.map(|x| 2.0 * x);
        }
        let t2 = intersection_number(&scaled).unwrap();
        assert!((t2.tau - 2.0 * tau.tau).abs() < 1e-12);
        assert!(matches!(intersection_number(&enumerate_elements(&s, 0.0).unwrap()), Err(Error::EmptyCensus)));
    }
}
