use serde::Serialize;

use super::conj::ConjCensus;
use super::element::ElementCensus;
use super::filter::Filter;
use crate::error::{Error, Result};
use crate::scalar::{least_squares, Scalar};

/// Number of top radii averaged by the annulus-ratio estimator.
pub const DEFAULT_WINDOW: usize = 4;
const MAX_WIDTH: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthMethod {
    AnnulusRatio,
    LinearFit,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthEstimate<T> {
    /// Primary estimate (annulus ratio).
    pub rate: T,
    pub method: GrowthMethod,
    /// Least-squares slope of log N against T over the same window.
    pub fit_rate: T,
    pub window: (T, T),
    /// Max deviation of log N from the fitted line over the window.
    pub residual: T,
    /// Annulus width in sample steps (widened when thin annuli are empty).
    pub width: usize,
    pub degenerate: bool,
}

/// Growth rate of a counting sequence N(T).
///
/// With annuli A_i = N_i − N_{i−h}, the rate is the mean of
/// log(A_i / A_{i−h}) / (h·step) over the top `DEFAULT_WINDOW` radii. The width
/// h starts at one step and grows (up to four) while some annulus is empty,
/// which handles parity-supported sequences.
pub fn growth_rate<T: Scalar>(counts: &[(T, T)]) -> Result<GrowthEstimate<T>> {
    growth_rate_window(counts, DEFAULT_WINDOW)
}

pub fn growth_rate_window<T: Scalar>(counts: &[(T, T)], window: usize) -> Result<GrowthEstimate<T>> {
    let start = counts.iter().position(|&(_, n)| n > T::zero()).unwrap_or(counts.len());
    let pts = &counts[start..];
    if pts.len() < 3 {
        return Err(Error::PreconditionViolated(format!("growth needs >= 3 points with N > 0, got {}", pts.len())));
    }
    if window == 0 {
        return Err(Error::PreconditionViolated("window must be positive".into()));
    }
    let step = pts[1].0 - pts[0].0;
    let tol = T::cst(1e-9) * step.abs().max(T::one());
    for p in pts.windows(2) {
        if !(p[1].0 > p[0].0) || (p[1].0 - p[0].0 - step).abs() > tol {
            return Err(Error::PreconditionViolated("sample points must be strictly increasing and evenly spaced".into()));
        }
        if p[1].1 < p[0].1 {
            return Err(Error::PreconditionViolated("counts must be non-decreasing".into()));
        }
    }
    let n = pts.len();
    let ln_n: Vec<T> = pts.iter().map(|p| p.1.ln()).collect();

    let w_fit = window.max(3).min(n);
    let xs: Vec<T> = pts[n - w_fit..].iter().map(|p| p.0).collect();
    let (fit, icpt, _) = least_squares(&xs, &ln_n[n - w_fit..]);
    let residual = xs.iter().zip(&ln_n[n - w_fit..]).fold(T::zero(), |m, (&x, &y)| m.max((y - icpt - fit * x).abs()));

    let degenerate_est = |width| GrowthEstimate {
        rate: T::zero(),
        method: GrowthMethod::AnnulusRatio,
        fit_rate: fit.max(T::zero()),
        window: (pts[0].0, pts[n - 1].0),
        residual,
        width,
        degenerate: true,
    };
    if pts.iter().all(|p| p.1 == pts[0].1) {
        return Ok(degenerate_est(1));
    }

    for h in 1..=MAX_WIDTH {
        if n < 2 * h + 1 {
            break;
        }
        let avail = n - 2 * h;
        let w = window.min(avail);
        let annulus = |i: usize| pts[i].1 - pts[i - h].1;
        let idx: Vec<usize> = (n - w..n).collect();
        if idx.iter().any(|&i| annulus(i) <= T::zero() || annulus(i - h) <= T::zero()) {
            continue;
        }
        let hs = T::of_usize(h) * step;
        let mut sum = T::zero();
        for &i in &idx {
            sum = sum + (annulus(i) / annulus(i - h)).ln() / hs;
        }
        let rate = sum / T::of_usize(w);
        return Ok(GrowthEstimate {
            rate: rate.max(T::zero()),
            method: GrowthMethod::AnnulusRatio,
            fit_rate: fit.max(T::zero()),
            window: (pts[n - w].0, pts[n - 1].0),
            residual,
            width: h,
            degenerate: false,
        });
    }
    // Annuli stay empty at the top: the set is finite at this scale.
    Ok(degenerate_est(MAX_WIDTH))
}

/// Censuses whose rows can be counted under a filter.
pub trait Census<T: Scalar> {
    fn filtered(&self, f: &Filter<T>) -> Result<Vec<(T, T)>>;
}

impl<T: Scalar> Census<T> for ElementCensus<T> {
    fn filtered(&self, f: &Filter<T>) -> Result<Vec<(T, T)>> {
        self.filtered_counts(f)
    }
}

impl<T: Scalar> Census<T> for ConjCensus<T> {
    fn filtered(&self, f: &Filter<T>) -> Result<Vec<(T, T)>> {
        self.filtered_counts(f)
    }
}

/// Growth of the rows passing `f`.
pub fn restricted_growth<T: Scalar, C: Census<T>>(c: &C, f: &Filter<T>) -> Result<GrowthEstimate<T>> {
    let counts = c.filtered(f)?;
    if counts.last().map_or(true, |p| p.1 == T::zero()) {
        return Err(Error::EmptyFilter);
    }
    growth_rate(&counts)
}
