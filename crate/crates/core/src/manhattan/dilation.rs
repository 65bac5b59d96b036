use serde::Serialize;

use crate::census::ConjCensus;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::words::Word;

/// Census suprema of ℓ/ℓ* and ℓ*/ℓ. `dil_ab` and `dil_ba` use bracket ends
/// conservatively (lower/upper), so they are lower bounds for the true Dil;
/// the `_upper` fields use the opposite ends.
#[derive(Clone, Debug, Serialize)]
pub struct DilationReport<T> {
    pub dil_ab: T,
    pub dil_ab_upper: T,
    pub witness_ab: Word,
    pub dil_ba: T,
    pub dil_ba_upper: T,
    pub witness_ba: Word,
    /// log(dil_ab · dil_ba).
    pub delta: T,
    pub classes: usize,
}

fn ratio<T: Scalar>(num: T, den: T) -> T {
    if den > T::zero() {
        num / den
    } else if num > T::zero() {
        T::infinity()
    } else {
        T::one()
    }
}

pub fn dilation<T: Scalar>(c: &ConjCensus<T>) -> Result<DilationReport<T>> {
    let rows: Vec<_> = c.rows.iter().filter(|r| !r.class.is_empty()).collect();
    if rows.is_empty() {
        return Err(Error::EmptyCensus);
    }
    let mut ab = (T::neg_infinity(), T::neg_infinity(), 0usize);
    let mut ba = (T::neg_infinity(), T::neg_infinity(), 0usize);
    for (i, r) in rows.iter().enumerate() {
        let s = r
            .ell_star
            .as_ref()
            .ok_or_else(|| Error::PreconditionViolated("dilation needs a joint census".into()))?;
        let lo_ab = ratio(r.ell.lower, s.upper);
        if lo_ab > ab.0 {
            ab.0 = lo_ab;
            ab.2 = i;
        }
        ab.1 = ab.1.max(ratio(r.ell.upper, s.lower));
        let lo_ba = ratio(s.lower, r.ell.upper);
        if lo_ba > ba.0 {
            ba.0 = lo_ba;
            ba.2 = i;
        }
        ba.1 = ba.1.max(ratio(s.upper, r.ell.lower));
    }
    Ok(DilationReport {
        dil_ab: ab.0,
        dil_ab_upper: ab.1,
        witness_ab: rows[ab.2].class.clone(),
        dil_ba: ba.0,
        dil_ba_upper: ba.1,
        witness_ba: rows[ba.2].class.clone(),
        delta: (ab.0 * ba.0).ln(),
        classes: rows.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::enumerate_conjugacy;
    use crate::metrics::{GeneratingSet, MetricHandle};

    #[test]
    fn same_metric() {
        let s = MetricHandle::<f64>::standard(2);
        let c = enumerate_conjugacy(&s, 5.0).unwrap().with_star(&s, 8).unwrap();
        let d = dilation(&c).unwrap();
        assert_eq!((d.dil_ab, d.dil_ba, d.delta), (1.0, 1.0, 0.0));
    }

    #[test]
    fn basis_against_basis_with_ab() {
        let w = |x: &str| Word::parse(x).unwrap();
        let s = MetricHandle::<f64>::standard(2);
        let sp = MetricHandle::<f64>::word(GeneratingSet::new(2, &[w("a"), w("b"), w("ab")]).unwrap());
        let c = enumerate_conjugacy(&s, 6.0).unwrap().with_star(&sp, 8).unwrap();
        let d = dilation(&c).unwrap();
        assert_eq!(d.dil_ab, 2.0);
        assert_eq!(d.witness_ab, w("ab"));
        assert_eq!(d.dil_ba, 1.0);
        assert!((d.delta - 2f64.ln()).abs() < 1e-12);
        assert!(d.delta >= 0.0);
    }

    #[test]
    fn empty() {
        let c = ConjCensus::<f64> { radius: 1.0, rows: vec![], complete: true, metric: "S".into(), star_metric: None };
        assert!(matches!(dilation(&c), Err(Error::EmptyCensus)));
    }
}
