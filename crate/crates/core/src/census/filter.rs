use std::sync::Arc;

use super::conj::ConjRow;
use super::element::ElementRow;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::words::{abelianize, SubgroupGraph, Word};

/// Row predicates for restricted counts. Group-theoretic filters read only
/// the word; the tolerance and equality filters need a joint census.
#[derive(Clone, Debug)]
pub enum Filter<T> {
    All,
    /// Elements (or classes) with the given abelianization.
    HomologyClass(Vec<i64>),
    /// Elements of [F, F], i.e. abelianization zero.
    CommutatorSubgroup,
    /// Elements of the subgroup; for classes, classes meeting it.
    Subgroup(Arc<SubgroupGraph>),
    /// |d − d*| ≤ c·d^p (classes: ℓ in place of d), with 0 ≤ p < 1.
    Tolerance { c: T, p: T },
    /// |v·d − v*·d*| ≤ tol·max(1, v·d).
    Equality { v: T, v_star: T, tol: T },
}

impl<T: Scalar> Filter<T> {
    pub fn tolerance(c: T, p: T) -> Result<Self> {
        if !(p >= T::zero() && p < T::one()) || c < T::zero() {
            return Err(Error::PreconditionViolated(format!("tolerance needs c >= 0 and 0 <= p < 1, got c = {c}, p = {p}")));
        }
        Ok(Filter::Tolerance { c, p })
    }

    pub fn subgroup(rank: usize, gens: &[Word]) -> Result<Self> {
        Ok(Filter::Subgroup(Arc::new(SubgroupGraph::build(rank, gens)?)))
    }

    fn word_ok(&self, x: &Word, class: bool) -> Option<bool> {
        match self {
            Filter::All => Some(true),
            Filter::HomologyClass(v) => Some(&abelianize(x, v.len()) == v),
            Filter::CommutatorSubgroup => Some(abelianize(x, 26).iter().all(|&e| e == 0)),
            Filter::Subgroup(g) => Some(if class { g.class_meets(x) } else { g.contains(x) }),
            _ => None,
        }
    }

    fn f(c: T, p: T, t: T) -> T {
        if c.is_infinite() {
            return c;
        }
        c * t.max(T::zero()).powf(p)
    }

    pub fn accepts_element(&self, row: &ElementRow<T>) -> Result<bool> {
        if let Some(ok) = self.word_ok(&row.element, false) {
            return Ok(ok);
        }
        let ds = row.d_star.ok_or_else(|| Error::PreconditionViolated("filter needs a joint census".into()))?;
        Ok(match *self {
            Filter::Tolerance { c, p } => (row.d - ds).abs() <= Self::f(c, p, row.d),
            Filter::Equality { v, v_star, tol } => (v * row.d - v_star * ds).abs() <= tol * (v * row.d).max(T::one()),
            _ => unreachable!(),
        })
    }

    pub fn accepts_class(&self, row: &ConjRow<T>) -> Result<bool> {
        if let Some(ok) = self.word_ok(&row.class, true) {
            return Ok(ok);
        }
        let ls = row.ell_star.as_ref().ok_or_else(|| Error::PreconditionViolated("filter needs a joint census".into()))?;
        match *self {
            Filter::Tolerance { c, p } => {
                // Smallest possible |ℓ − ℓ*| over the two brackets.
                let gap = (row.ell.lower - ls.upper).max(ls.lower - row.ell.upper).max(T::zero());
                Ok(gap <= Self::f(c, p, row.ell.upper))
            }
            Filter::Equality { v, v_star, tol } => {
                if !row.ell.is_exact() || !ls.is_exact() {
                    return Err(Error::RequiresExactLengths);
                }
                Ok((v * row.ell.lower - v_star * ls.lower).abs() <= tol * (v * row.ell.lower).max(T::one()))
            }
            _ => unreachable!(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::LengthBracket;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn erow(s: &str, d: f64, ds: Option<f64>) -> ElementRow<f64> {
        ElementRow { element: w(s), d, d_star: ds }
    }

    #[test]
    fn tolerance_rejects_linear_exponent() {
        assert!(Filter::<f64>::tolerance(1.0, 1.0).is_err());
        assert!(Filter::<f64>::tolerance(-1.0, 0.5).is_err());
        assert!(Filter::<f64>::tolerance(1.0, 0.5).is_ok());
    }

    #[test]
    fn group_filters() {
        assert!(Filter::<f64>::CommutatorSubgroup.accepts_element(&erow("abAB", 4.0, None)).unwrap());
        assert!(!Filter::<f64>::CommutatorSubgroup.accepts_element(&erow("ab", 2.0, None)).unwrap());
        let h = Filter::<f64>::HomologyClass(vec![1, -1]);
        assert!(h.accepts_element(&erow("aB", 2.0, None)).unwrap());
        let g = Filter::<f64>::subgroup(2, &[w("a")]).unwrap();
        assert!(g.accepts_element(&erow("aaa", 3.0, None)).unwrap());
        assert!(!g.accepts_element(&erow("bab", 3.0, None)).unwrap());
        let class = ConjRow { class: w("a"), ell: LengthBracket::exact(1.0), ell_star: None, straddles: false };
        assert!(g.accepts_class(&class).unwrap());
    }

    #[test]
    fn joint_filters() {
        let t = Filter::tolerance(1.0, 0.5).unwrap();
        assert!(t.accepts_element(&erow("aaaa", 4.0, Some(5.9))).unwrap());
        assert!(!t.accepts_element(&erow("aaaa", 4.0, Some(6.1))).unwrap());
        assert!(t.accepts_element(&erow("a", 1.0, None)).is_err());
        let e = Filter::Equality { v: 1.0, v_star: 1.0, tol: 1e-9 };
        let bracketed = ConjRow {
            class: w("a"),
            ell: LengthBracket { lower: 0.5, upper: 1.0, n_used: 8 },
            ell_star: Some(LengthBracket::exact(1.0)),
            straddles: false,
        };
        assert!(matches!(e.accepts_class(&bracketed), Err(Error::RequiresExactLengths)));
    }
}
