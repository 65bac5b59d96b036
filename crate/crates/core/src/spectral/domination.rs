use serde::Serialize;

use super::eigen::{eigenvalue_moduli, singular_values};
use super::matrix::Representation;
use crate::census::ElementCensus;
use crate::scalar::{least_squares, Scalar};

#[derive(Clone, Debug, Serialize)]
pub struct DominationReport<T> {
    /// Least-squares slope of log(σ₁/σ₂) against word length.
    pub slope: T,
    pub intercept: T,
    /// Smallest log(σ₁/σ₂) over nontrivial elements.
    pub min_log_ratio: T,
    pub samples: usize,
    /// Elements with |λ₁| = |λ₂| (up to 1e−9 relative), e.g. parabolics.
    pub nonloxodromic: usize,
    pub dominated: bool,
}

/// Singular-value gap profile of ρ over a census. A diagnostic only.
pub fn domination_profile<T: Scalar>(rep: &Representation<T>, census: &ElementCensus<T>) -> DominationReport<T> {
    let tol = T::cst(1e-9);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut nonlox = 0;
    for row in census.rows.iter().filter(|r| !r.element.is_empty()) {
        let m = rep.eval(&row.element);
        let sv = singular_values(&m);
        let gap = if rep.dim() < 2 || sv[1] <= T::zero() { T::infinity() } else { (sv[0] / sv[1]).ln() };
        xs.push(T::of_usize(row.element.len()));
        ys.push(gap.min(T::cst(1e300)));
        if rep.dim() >= 2 {
            if let Ok(ev) = eigenvalue_moduli(&m) {
                if ev[0] - ev[1] <= tol * ev[0].max(T::one()) {
                    nonlox += 1;
                }
            }
        }
    }
    if xs.len() < 2 {
        return DominationReport {
            slope: T::zero(),
            intercept: T::zero(),
            min_log_ratio: ys.first().copied().unwrap_or(T::zero()),
            samples: xs.len(),
            nonloxodromic: nonlox,
            dominated: false,
        };
    }
    let (slope, intercept, _) = least_squares(&xs, &ys);
    let min = ys.iter().copied().fold(T::infinity(), T::min);
    DominationReport {
        slope,
        intercept,
        min_log_ratio: min,
        samples: xs.len(),
        nonloxodromic: nonlox,
        dominated: slope > tol && nonlox == 0 && min > tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::enumerate_elements;
    use crate::metrics::MetricHandle;
    use crate::spectral::Matrix;

    #[test]
    fn schottky_is_dominated() {
        let rep = Representation::<f64>::schottky(4.0, std::f64::consts::FRAC_PI_4);
        let c = enumerate_elements(&MetricHandle::standard(2), 8.0).unwrap();
        let d = domination_profile(&rep, &c);
        assert!(d.slope > 0.0 && d.dominated, "{d:?}");
    }

    #[test]
    fn trivial_and_parabolic_are_flagged() {
        let c = enumerate_elements(&MetricHandle::standard(2), 4.0).unwrap();
        let id = Representation::<f64>::new(vec![Matrix::identity(2), Matrix::identity(2)]).unwrap();
        let d = domination_profile(&id, &c);
        assert_eq!(d.slope, 0.0);
        assert!(!d.dominated);
        let p = Matrix::from_row_major(2, vec![1.0, 2.0, 0.0, 1.0]).unwrap();
        let rep = Representation::<f64>::new(vec![p, Matrix::diag(&[2.0, 0.5])]).unwrap();
        let d = domination_profile(&rep, &c);
        assert!(d.nonloxodromic > 0 && !d.dominated);
    }
}
