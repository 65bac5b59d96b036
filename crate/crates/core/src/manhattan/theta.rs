use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::census::ElementCensus;
use crate::error::{Error, Result};
use crate::scalar::{least_squares, log_sum_exp, Scalar};

/// Annuli used by the θ regression.
pub const MIN_ANNULI: usize = 6;

#[derive(Clone, Debug, Serialize)]
pub struct CurveSamples<T> {
    pub grid: Vec<T>,
    pub theta: Vec<T>,
    pub stderr: Vec<T>,
    pub v: T,
    pub v_star: T,
    /// Radius of the census the curve came from.
    pub radius: T,
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    if n < 2 {
        return vec![lo];
    }
    let step = (hi - lo) / T::of_usize(n - 1);
    (0..n).map(|i| if i == n - 1 { hi } else { lo + step * T::of_usize(i) }).collect()
}

/// Per annulus T − 1 < d ≤ T: the distinct d* values with multiplicities,
/// in increasing d* order.
fn annulus_histograms<T: Scalar>(c: &ElementCensus<T>) -> Result<Vec<Vec<(T, u64)>>> {
    let top = c.radius.floor().to_usize().unwrap_or(0);
    let eps = T::cst(1e-9);
    let mut buckets: Vec<Vec<T>> = vec![Vec::new(); top + 1];
    for r in &c.rows {
        let ds = r.d_star.ok_or_else(|| Error::PreconditionViolated("θ needs a joint census".into()))?;
        let k = (r.d - eps).ceil().max(T::zero()).to_usize().unwrap_or(usize::MAX);
        if (1..=top).contains(&k) {
            buckets[k].push(ds);
        }
    }
    Ok(buckets
        .into_par_iter()
        .map(|mut b| {
            b.sort_by(|x, y| x.partial_cmp(y).expect("finite d*"));
            let mut h: Vec<(T, u64)> = Vec::new();
            for x in b {
                match h.last_mut() {
                    Some((y, n)) if *y == x => *n += 1,
                    _ => h.push((x, 1)),
                }
            }
            h
        })
        .collect())
}

/// θ(a) for each grid value: least-squares slope of log W_a(T) over the top
/// `MIN_ANNULI` annuli, where W_a(T) = Σ_{T−1 < d ≤ T} e^{−a·d*}.
pub fn sample_theta<T: Scalar>(c: &ElementCensus<T>, grid: &[T], v: T, v_star: T) -> Result<CurveSamples<T>> {
    let hist = annulus_histograms(c)?;
    let have = hist.iter().skip(1).filter(|h| !h.is_empty()).count();
    let top = hist.len() - 1;
    if top < MIN_ANNULI || hist[top + 1 - MIN_ANNULI..].iter().any(Vec::is_empty) {
        return Err(Error::InsufficientAnnuli { need: MIN_ANNULI, have });
    }
    let window = &hist[top + 1 - MIN_ANNULI..];
    let xs: Vec<T> = (top + 1 - MIN_ANNULI..=top).map(T::of_usize).collect();
    let fits: Vec<(T, T)> = grid
        .par_iter()
        .map(|&a| {
            let ys: Vec<T> = window
                .iter()
                .map(|h| {
                    let terms: Vec<T> = h.iter().map(|&(ds, n)| T::of_u64(n).ln() - a * ds).collect();
                    log_sum_exp(&terms)
                })
                .collect();
            let (slope, _, se) = least_squares(&xs, &ys);
            (slope, se)
        })
        .collect();
    Ok(CurveSamples {
        grid: grid.to_vec(),
        theta: fits.iter().map(|f| f.0).collect(),
        stderr: fits.iter().map(|f| f.1).collect(),
        v,
        v_star,
        radius: c.radius,
    })
}

impl<T: Scalar> CurveSamples<T> {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Piecewise-linear θ at `a`, extrapolating linearly past the ends.
    pub fn interpolate(&self, a: T) -> T {
        let g = &self.grid;
        let n = g.len();
        if n == 1 {
            return self.theta[0];
        }
        let j = match g.iter().position(|&x| x >= a) {
            Some(0) => 1,
            Some(j) => j,
            None => n - 1,
        };
        let t = (a - g[j - 1]) / (g[j] - g[j - 1]);
        self.theta[j - 1] + t * (self.theta[j] - self.theta[j - 1])
    }

    /// θ(b) minus the chord through its neighbours, per interior point.
    /// Positive entries are convexity violations.
    pub fn convexity_defects(&self) -> Vec<T> {
        (1..self.len().saturating_sub(1))
            .map(|i| {
                let (a0, a1, a2) = (self.grid[i - 1], self.grid[i], self.grid[i + 1]);
                let t = (a1 - a0) / (a2 - a0);
                self.theta[i] - (self.theta[i - 1] + t * (self.theta[i + 1] - self.theta[i - 1]))
            })
            .collect()
    }

    /// Largest increase θ(a_{i+1}) − θ(a_i) (positive means non-monotone).
    pub fn max_increase(&self) -> T {
        self.theta.windows(2).map(|w| w[1] - w[0]).fold(T::neg_infinity(), T::max)
    }

    /// (v − (v/v*)·a) − θ(a): distance below the straight line.
    pub fn line_gap(&self, a: T) -> T {
        self.v - self.v / self.v_star * a - self.interpolate(a)
    }

    /// −θ′ at the two grid ends (one-sided differences).
    pub fn end_slopes(&self) -> (T, T) {
        let n = self.len();
        let s0 = -(self.theta[1] - self.theta[0]) / (self.grid[1] - self.grid[0]);
        let s1 = -(self.theta[n - 1] - self.theta[n - 2]) / (self.grid[n - 1] - self.grid[n - 2]);
        (s0, s1)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["a", "theta", "stderr"])?;
        for i in 0..self.len() {
            w.write_record([self.grid[i].to_string(), self.theta[i].to_string(), self.stderr[i].to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::enumerate_elements;
    use crate::metrics::{GeneratingSet, MetricHandle};
    use crate::words::Word;

    #[test]
    fn same_metric_gives_the_line() {
        let s = MetricHandle::<f64>::standard(2);
        let c = enumerate_elements(&s, 9.0).unwrap().with_star(&s).unwrap();
        let v = 3f64.ln();
        let grid = uniform_grid(0.0, v, 11);
        let curve = sample_theta(&c, &grid, v, v).unwrap();
        for (a, t) in grid.iter().zip(&curve.theta) {
            assert!((t - (v - a)).abs() < 1e-9, "{a} {t}");
        }
        assert!(curve.stderr.iter().all(|&e| e < 1e-9));
    }

    #[test]
    fn too_few_annuli() {
        let s = MetricHandle::<f64>::standard(2);
        let c = enumerate_elements(&s, 5.0).unwrap().with_star(&s).unwrap();
        assert!(matches!(sample_theta(&c, &[0.0], 1.0, 1.0), Err(Error::InsufficientAnnuli { need: 6, have: 5 })));
        let plain = enumerate_elements(&s, 7.0).unwrap();
        assert!(sample_theta(&plain, &[0.0], 1.0, 1.0).is_err());
    }

    #[test]
    fn convex_below_line_for_a_nonsimilar_pair() {
        let s = MetricHandle::<f64>::standard(2);
        let w = |x: &str| Word::parse(x).unwrap();
        let sp = MetricHandle::<f64>::word(GeneratingSet::new(2, &[w("a"), w("b"), w("ab")]).unwrap());
        let c = enumerate_elements(&s, 10.0).unwrap().with_star(&sp).unwrap();
        let v = 3f64.ln();
        let grid = uniform_grid(0.0, 1.5, 16);
        let curve = sample_theta(&c, &grid, v, 1.5).unwrap();
        assert!(curve.max_increase() < 0.0);
        assert!(curve.convexity_defects().iter().all(|&d| d < 1e-3 + 2.0 * 0.01));
        assert!((curve.theta[0] - v).abs() < 0.05);
    }

    #[test]
    fn grid_and_interpolation() {
        let g: Vec<f64> = uniform_grid(0.0, 1.0, 5);
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let c = CurveSamples { grid: g, theta: vec![1.0, 0.5, 0.25, 0.1, 0.0], stderr: vec![0.0; 5], v: 1.0, v_star: 1.0, radius: 0.0 };
        assert!((c.interpolate(0.125) - 0.75).abs() < 1e-12);
        assert_eq!(c.end_slopes(), (2.0, 0.4));
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("a,theta,stderr\n0,1,0\n"));
    }
}
