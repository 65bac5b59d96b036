use serde::Serialize;

use super::beta::BetaReport;
use crate::census::{ConjCensus, Filter};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    /// The inequality fails for an exactly known Δ.
    Violated,
    /// The inequality fails for a census Δ̂, which under-estimates Δ.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck<T> {
    pub delta: Option<T>,
    pub delta_exact: bool,
    /// tanh(Δ/4), the upper bound for β̄.
    pub tanh_bound: Option<T>,
    pub beta_bar: T,
    pub beta_check: Outcome,
    /// 2/(e^{Δ/2} + 1), the lower bound for αSym.
    pub alpha_bound: Option<T>,
    pub alpha_sym: T,
    pub alpha_check: Outcome,
}

const CHECK_TOL: f64 = 1e-6;

/// Tests β̄ ≤ tanh(Δ/4) and αSym ≥ 2/(e^{Δ/2}+1). With `exact_delta` the
/// supplied Δ is used and failures are violations; otherwise the census Δ̂
/// attached to the report is used and failures are inconclusive.
pub fn check_bounds<T: Scalar>(r: &BetaReport<T>, exact_delta: Option<T>) -> BoundCheck<T> {
    let (delta, exact) = match exact_delta {
        Some(d) => (Some(d), true),
        None => (r.delta_thurston, false),
    };
    let tol = T::cst(CHECK_TOL);
    let fail = if exact { Outcome::Violated } else { Outcome::Inconclusive };
    let (tanh_bound, beta_check, alpha_bound, alpha_check) = match delta {
        Some(d) => {
            let tb = (d / T::cst(4.0)).tanh();
            let ab = T::cst(2.0) / ((d / T::cst(2.0)).exp() + T::one());
            let bc = if r.beta_bar <= tb + tol { Outcome::Pass } else { fail };
            let ac = if r.alpha_sym >= ab - tol { Outcome::Pass } else { fail };
            (Some(tb), bc, Some(ab), ac)
        }
        None => (None, Outcome::Inconclusive, None, Outcome::Inconclusive),
    };
    BoundCheck {
        delta,
        delta_exact: exact,
        tanh_bound,
        beta_bar: r.beta_bar,
        beta_check,
        alpha_bound,
        alpha_sym: r.alpha_sym,
        alpha_check,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EtaBracket<T> {
    /// Largest η₁ with η₁ℓ − f(ℓ) ≤ ℓ* on the rows used.
    pub eta1: T,
    /// Smallest η₂ with ℓ* ≤ η₂ℓ + f(ℓ) on the rows used.
    pub eta2: T,
    pub tau: T,
    pub rows: usize,
    pub holds: bool,
}

/// Tightest η₁, η₂ for the two-sided comparison with f(t) = c·t^p on the
/// classes passing `e`, and whether η₁ ≤ τ ≤ η₂ (within `tol`).
pub fn eta_bracket<T: Scalar>(census: &ConjCensus<T>, e: &Filter<T>, c: T, p: T, tau: T, tol: T) -> Result<EtaBracket<T>> {
    let mut eta1 = T::infinity();
    let mut eta2 = T::neg_infinity();
    let mut rows = 0;
    for r in &census.rows {
        if !e.accepts_class(r)? {
            continue;
        }
        let s = r.ell_star.as_ref().ok_or_else(|| Error::PreconditionViolated("η bracket needs a joint census".into()))?;
        if !r.ell.is_exact() || !s.is_exact() {
            return Err(Error::RequiresExactLengths);
        }
        let (l, ls) = (r.ell.lower, s.lower);
        if l <= T::zero() {
            continue;
        }
        let f = c * l.powf(p);
        eta1 = eta1.min((ls + f) / l);
        eta2 = eta2.max((ls - f) / l);
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::EmptyFilter);
    }
    let holds = eta1 - tol <= tau && tau <= eta2.max(eta1) + tol;
    Ok(EtaBracket { eta1, eta2, tau, rows, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{enumerate_conjugacy, enumerate_elements, intersection_number};
    use crate::manhattan::DilationReport;
    use crate::metrics::MetricHandle;
    use crate::words::Word;

    fn report(beta_bar: f64, alpha_sym: f64) -> BetaReport<f64> {
        BetaReport {
            beta: beta_bar,
            beta_bar,
            xi: 0.25,
            alpha_sym,
            rough_similarity: beta_bar <= 0.01,
            dil_ab: None,
            dil_ba: None,
            delta_thurston: None,
            tanh_bound: None,
            dilation: None,
        }
    }

    #[test]
    fn zero_passes() {
        let r = report(0.0, 1.0).with_dilation(DilationReport {
            dil_ab: 1.0,
            dil_ab_upper: 1.0,
            witness_ab: Word::parse("a").unwrap(),
            dil_ba: 1.0,
            dil_ba_upper: 1.0,
            witness_ba: Word::parse("a").unwrap(),
            delta: 0.0,
            classes: 1,
        });
        let c = check_bounds(&r, None);
        assert_eq!((c.beta_check, c.alpha_check), (Outcome::Pass, Outcome::Pass));
        assert_eq!(c.tanh_bound, Some(0.0));
    }

    #[test]
    fn synthetic_pair_is_not_realizable() {
        let r = report(0.5, 0.5);
        let c = check_bounds(&r, Some(4f64.ln()));
        assert!((c.tanh_bound.unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(c.beta_check, Outcome::Violated);
        // 2/(2 + 1) = 2/3 > 0.5.
        assert_eq!(c.alpha_check, Outcome::Violated);
        let mut census = r.clone();
        census.delta_thurston = Some(4f64.ln());
        assert_eq!(check_bounds(&census, None).beta_check, Outcome::Inconclusive);
        assert_eq!(check_bounds(&report(0.5, 0.5), None).beta_check, Outcome::Inconclusive);
    }

    #[test]
    fn eta_contains_tau_for_identical_lengths() {
        let s = MetricHandle::<f64>::standard(2);
        let c = enumerate_conjugacy(&s, 6.0).unwrap().with_star(&s, 8).unwrap();
        let tau = intersection_number(&enumerate_elements(&s, 10.0).unwrap().with_star(&s).unwrap()).unwrap().tau;
        let e = eta_bracket(&c, &Filter::All, 0.0, 0.5, 1.0, 1e-9).unwrap();
        assert_eq!((e.eta1, e.eta2), (1.0, 1.0));
        assert!(e.holds);
        assert!(tau <= 1.0);
    }
}
