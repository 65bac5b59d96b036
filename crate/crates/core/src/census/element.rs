use std::collections::HashSet;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::filter::Filter;
use crate::error::{Error, Result};
use crate::metrics::{Engine, MetricHandle, MetricKind};
use crate::scalar::Scalar;
use crate::words::{inv, shortlex_cmp, Letter, Word};

#[derive(Clone, Debug, Serialize)]
pub struct ElementRow<T> {
    pub element: Word,
    pub d: T,
    pub d_star: Option<T>,
}

/// Exactly the ball {x : d(o,x) ≤ T}, rows in shortlex order, optionally
/// carrying a second distance d*.
#[derive(Clone, Debug)]
pub struct ElementCensus<T> {
    pub radius: T,
    pub rows: Vec<ElementRow<T>>,
    pub metric: String,
    pub star_metric: Option<String>,
}

fn basis_ball_size(rank: usize, r: usize) -> Option<usize> {
    let q = 2 * rank - 1;
    let mut sphere = 2 * rank;
    let mut total = 1usize;
    for _ in 0..r {
        total = total.checked_add(sphere)?;
        sphere = sphere.checked_mul(q)?;
    }
    Some(total)
}

fn extend_layer(layer: &[Word], k: usize) -> Vec<Word> {
    layer
        .par_iter()
        .flat_map_iter(|x| (0..k as Letter).filter(move |&l| x.last() != Some(inv(l))).map(move |l| x.times_letter(l)))
        .collect()
}

fn basis_ball(rank: usize, r: usize, budget: usize) -> Result<Vec<(Word, u32)>> {
    match basis_ball_size(rank, r) {
        Some(n) if n <= budget => {}
        _ => return Err(Error::BudgetExceeded { budget }),
    }
    let mut out = vec![(Word::identity(), 0)];
    let mut layer = vec![Word::identity()];
    for d in 1..=r {
        layer = extend_layer(&layer, 2 * rank);
        out.extend(layer.iter().map(|w| (w.clone(), d as u32)));
    }
    Ok(out)
}

/// Depth-first search over reduced words with the segmentation DP carried
/// along the path. Prefix distances never exceed the full distance for a
/// factor-closed set, so pruning at `r` is exact.
fn segment_ball(pieces: &HashSet<Vec<Letter>>, max_len: usize, rank: usize, r: u32, budget: usize) -> Result<Vec<(Word, u32)>> {
    fn go(
        pieces: &HashSet<Vec<Letter>>,
        max_len: usize,
        k: usize,
        r: u32,
        path: &mut Vec<Letter>,
        dp: &mut Vec<u32>,
        out: &mut Vec<(Word, u32)>,
        budget: usize,
    ) -> Result<()> {
        if out.len() > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        for l in 0..k as Letter {
            if path.last() == Some(&inv(l)) {
                continue;
            }
            path.push(l);
            let i = path.len();
            let mut best = u32::MAX;
            for len in 1..=max_len.min(i) {
                let prev = dp[i - len];
                if prev != u32::MAX && prev + 1 < best && pieces.contains(&path[i - len..i]) {
                    best = prev + 1;
                }
            }
            if best <= r {
                dp.push(best);
                out.push((Word::from_reduced(path.clone()), best));
                go(pieces, max_len, k, r, path, dp, out, budget)?;
                dp.pop();
            }
            path.pop();
        }
        Ok(())
    }
    let k = 2 * rank;
    let parts: Vec<Result<Vec<(Word, u32)>>> = (0..k as Letter)
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let mut path = vec![first];
            if pieces.contains(&path[..]) && r >= 1 {
                let mut dp = vec![0, 1];
                out.push((Word::from_reduced(path.clone()), 1));
                go(pieces, max_len, k, r, &mut path, &mut dp, &mut out, budget)?;
            }
            Ok(out)
        })
        .collect();
    let mut all = vec![(Word::identity(), 0)];
    for p in parts {
        all.extend(p?);
        if all.len() > budget {
            return Err(Error::BudgetExceeded { budget });
        }
    }
    Ok(all)
}

/// Ball rows `(x, d(o,x))` for word-type metrics, shortlex sorted.
pub(crate) fn ball<T: Scalar>(m: &MetricHandle<T>, radius: T) -> Result<Vec<(Word, T)>> {
    let r = radius.floor().to_usize().unwrap_or(0);
    let budget = m.budget();
    let mut rows: Vec<(Word, T)> = match m.kind() {
        MetricKind::Word(w) => {
            let raw = match &w.engine {
                Engine::Basis => basis_ball(m.rank(), r, budget)?,
                Engine::FactorClosed { pieces, max_len } => segment_ball(pieces, *max_len, m.rank(), r as u32, budget)?,
                Engine::Bfs(_) => w
                    .engine
                    .bfs_layers(&w.set, r, budget)?
                    .into_iter()
                    .enumerate()
                    .flat_map(|(d, l)| l.into_iter().map(move |x| (x, d as u32)))
                    .collect(),
            };
            raw.into_iter().map(|(x, d)| (x, T::from_u32(d).unwrap())).collect()
        }
        MetricKind::PulledBack { phi, inner } => {
            let inner_rows = ball(inner, radius)?;
            inner_rows.into_par_iter().map(|(x, d)| (phi.apply_inverse(&x), d)).collect()
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "ball enumeration under a {} metric; enumerate under a word metric and attach this one as d*",
                m.name()
            )))
        }
    };
    rows.par_sort_by(|a, b| shortlex_cmp(&a.0, &b.0));
    Ok(rows)
}

/// The ball {x : d(o,x) ≤ radius} for word metrics and their pullbacks.
pub fn enumerate_elements<T: Scalar>(m: &MetricHandle<T>, radius: T) -> Result<ElementCensus<T>> {
    let rows = ball(m, radius)?.into_iter().map(|(element, d)| ElementRow { element, d, d_star: None }).collect();
    Ok(ElementCensus { radius, rows, metric: m.name().to_string(), star_metric: None })
}

impl<T: Scalar> ElementCensus<T> {
    /// Attaches d*(o,x) to every row.
    pub fn with_star(mut self, m: &MetricHandle<T>) -> Result<Self> {
        let ds: Vec<Result<T>> = self.rows.par_iter().map(|r| m.distance(&r.element)).collect();
        for (row, d) in self.rows.iter_mut().zip(ds) {
            row.d_star = Some(d?);
        }
        self.star_metric = Some(m.name().to_string());
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_joint(&self) -> bool {
        self.rows.iter().all(|r| r.d_star.is_some())
    }

    /// `(t, #{x : d(o,x) ≤ t})` for integer t up to the radius.
    pub fn counts(&self) -> Vec<(T, T)> {
        super::cumulative(self.rows.iter().map(|r| r.d), self.radius)
    }

    pub fn filtered_counts(&self, f: &Filter<T>) -> Result<Vec<(T, T)>> {
        let keep: Vec<Result<bool>> = self.rows.par_iter().map(|r| f.accepts_element(r)).collect();
        let mut ds = Vec::new();
        for (r, k) in self.rows.iter().zip(keep) {
            if k? {
                ds.push(r.d);
            }
        }
        Ok(super::cumulative(ds.into_iter(), self.radius))
    }

    /// Rows with d(o,x) ≤ t (shortlex order is preserved).
    pub fn restrict(&self, t: T) -> ElementCensus<T> {
        ElementCensus {
            radius: t,
            rows: self.rows.iter().filter(|r| r.d <= t).cloned().collect(),
            metric: self.metric.clone(),
            star_metric: self.star_metric.clone(),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["element", "d", "d_star"])?;
        for r in &self.rows {
            let ds = r.d_star.map(|x| x.to_string()).unwrap_or_default();
            w.write_record([r.element.to_string(), r.d.to_string(), ds])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::GeneratingSet;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn ball_sizes_closed_form() {
        let s = MetricHandle::<f64>::standard(2);
        let c = enumerate_elements(&s, 8.0).unwrap();
        assert_eq!(c.len(), 2 * 3usize.pow(8) - 1);
        for (t, n) in c.counts() {
            assert_eq!(n as usize, 2 * 3usize.pow(t as u32) - 1);
        }
        assert_eq!(enumerate_elements(&s, 0.0).unwrap().rows.len(), 1);
        assert!(c.rows.windows(2).all(|p| shortlex_cmp(&p[0].element, &p[1].element).is_lt()));
    }

    #[test]
    fn factor_closed_ball_matches_bfs() {
        let set = GeneratingSet::new(2, &[w("a"), w("b"), w("ab")]).unwrap();
        let fc = MetricHandle::<f64>::word(set.clone());
        let fast = enumerate_elements(&fc, 5.0).unwrap();
        let slow_engine = Engine::bfs();
        let layers = slow_engine.bfs_layers(&set, 5, 1 << 22).unwrap();
        let mut slow: Vec<(Word, f64)> =
            layers.into_iter().enumerate().flat_map(|(d, l)| l.into_iter().map(move |x| (x, d as f64))).collect();
        slow.sort_by(|a, b| shortlex_cmp(&a.0, &b.0));
        assert_eq!(fast.rows.len(), slow.len());
        for (r, (x, d)) in fast.rows.iter().zip(&slow) {
            assert_eq!((&r.element, r.d), (x, *d));
        }
    }

    #[test]
    fn budget_guard() {
        let s = MetricHandle::<f64>::standard(2).with_budget(100);
        assert!(matches!(enumerate_elements(&s, 6.0), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn pulled_back_ball_is_preimage() {
        let phi = crate::words::Automorphism::new(vec![w("a"), w("ba")], vec![w("a"), w("bA")]).unwrap();
        let pb = MetricHandle::<f64>::pulled_back(phi.clone(), std::sync::Arc::new(MetricHandle::standard(2))).unwrap();
        let c = enumerate_elements(&pb, 5.0).unwrap();
        assert_eq!(c.len(), 2 * 3usize.pow(5) - 1);
        for r in &c.rows {
            assert_eq!(phi.apply(&r.element).len() as f64, r.d);
        }
    }

    #[test]
    fn joint_rows_and_restriction() {
        let s = MetricHandle::<f64>::standard(2);
        let sp = MetricHandle::<f64>::word(GeneratingSet::new(2, &[w("a"), w("b"), w("ab")]).unwrap());
        let c = enumerate_elements(&s, 4.0).unwrap().with_star(&sp).unwrap();
        assert!(c.is_joint());
        let small = c.restrict(2.0);
        assert_eq!(small.len(), 17);
        let mut buf = Vec::new();
        small.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("element,d,d_star\n1,0,0\na,1,1\n"));
    }
}
