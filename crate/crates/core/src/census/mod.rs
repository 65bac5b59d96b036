//! Element and conjugacy-class censuses under one or two metrics, growth
//! estimation, filters, correlation counts and the intersection number.

mod automaton;
mod conj;
mod correlate;
mod element;
mod filter;
mod growth;
mod stream;

use std::io::Write;

pub use automaton::ball_counts;
pub use conj::{enumerate_conjugacy, enumerate_conjugacy_with, necklaces, ConjCensus, ConjRow};
pub use correlate::{
    conjugate_count_bound_check, correlation_census, intersection_number, ConjugateCount, CorrelationMode, IntersectionNumber,
};
pub use element::{enumerate_elements, ElementCensus, ElementRow};
pub use filter::Filter;
pub use growth::{growth_rate, growth_rate_window, restricted_growth, Census, GrowthEstimate, GrowthMethod, DEFAULT_WINDOW};
pub use stream::basis_sphere_counts;

use crate::error::Result;
use crate::scalar::Scalar;

/// Writes a counting sequence as CSV with header `T,N`.
pub fn write_counts_csv<T: Scalar, W: Write>(out: W, counts: &[(T, T)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["T", "N"])?;
    for (t, n) in counts {
        w.write_record([t.to_string(), n.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Cumulative counts `(t, #{v ≤ t})` for t = 0, 1, …, ⌊radius⌋.
pub(crate) fn cumulative<T: Scalar>(values: impl Iterator<Item = T>, radius: T) -> Vec<(T, T)> {
    let top = radius.floor().to_usize().unwrap_or(0);
    let mut hist = vec![0u64; top + 1];
    let eps = T::cst(1e-9);
    for v in values {
        let k = (v - eps).ceil().max(T::zero()).to_usize().unwrap_or(usize::MAX);
        if k <= top {
            hist[k] += 1;
        }
    }
    let mut acc = 0u64;
    hist.iter()
        .enumerate()
        .map(|(t, &h)| {
            acc += h;
            (T::of_usize(t), T::of_u64(acc))
        })
        .collect()
}
