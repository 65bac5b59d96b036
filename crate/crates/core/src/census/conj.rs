use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::element::ball;
use super::filter::Filter;
use crate::error::{Error, Result};
use crate::metrics::{Engine, LengthBracket, MetricHandle, MetricKind};
use crate::scalar::Scalar;
use crate::words::{canonical, inv, shortlex_cmp, Letter, Word};

#[derive(Clone, Debug, Serialize)]
pub struct ConjRow<T> {
    /// Canonical representative: least rotation of the cyclically reduced core.
    pub class: Word,
    pub ell: LengthBracket<T>,
    pub ell_star: Option<LengthBracket<T>>,
    /// True when the bracket straddles the census radius.
    pub straddles: bool,
}

/// Nontrivial conjugacy classes with ℓ ≤ T, in shortlex order of their
/// canonical representatives. `complete` is true when every such class is
/// provably listed.
#[derive(Clone, Debug)]
pub struct ConjCensus<T> {
    pub radius: T,
    pub rows: Vec<ConjRow<T>>,
    pub complete: bool,
    pub metric: String,
    pub star_metric: Option<String>,
}

const DEFAULT_BRACKET_DEPTH: usize = 8;

fn necklace_bound(rank: usize, max_len: usize) -> f64 {
    let q = (2 * rank - 1) as f64;
    (1..=max_len).map(|n| (q.powi(n as i32) + 2.0 * rank as f64) / n as f64).sum::<f64>() * 2.0
}

/// All canonical cyclically reduced words of length 1..=max_len, shortlex.
///
/// Depth-first over prenecklaces: a letter may extend a prefix with period p
/// only if it is ≥ the letter p places back; the word is a necklace when its
/// length is a multiple of the final period.
pub fn necklaces(rank: usize, max_len: usize) -> Vec<Word> {
    fn go(k: usize, n: usize, a: &mut Vec<Letter>, p: usize, out: &mut Vec<Word>) {
        let t = a.len();
        if t == n {
            if n % p == 0 && a[n - 1] != inv(a[0]) {
                out.push(Word::from_reduced(a.clone()));
            }
            return;
        }
        let lo = a[t - p];
        for c in lo..k as Letter {
            if c == inv(a[t - 1]) {
                continue;
            }
            a.push(c);
            go(k, n, a, if c == lo { p } else { t + 1 }, out);
            a.pop();
        }
    }
    let k = 2 * rank;
    let mut tasks = Vec::new();
    for n in 1..=max_len {
        for f in 0..k as Letter {
            tasks.push((n, f));
        }
    }
    let parts: Vec<Vec<Word>> = tasks
        .into_par_iter()
        .map(|(n, f)| {
            let mut out = Vec::new();
            let mut a = vec![f];
            go(k, n, &mut a, 1, &mut out);
            out
        })
        .collect();
    let mut all: Vec<Word> = parts.into_iter().flatten().collect();
    all.par_sort_by(shortlex_cmp);
    all
}

fn exact_classes<T: Scalar>(m: &MetricHandle<T>, radius: T) -> Result<Option<Vec<(Word, T)>>> {
    let r = radius.floor().to_usize().unwrap_or(0);
    let eps = T::cst(1e-9);
    let guard = |len: usize| {
        if necklace_bound(m.rank(), len) > m.budget() as f64 {
            Err(Error::BudgetExceeded { budget: m.budget() })
        } else {
            Ok(())
        }
    };
    match m.kind() {
        MetricKind::Word(w) => match &w.engine {
            Engine::Basis => {
                guard(r)?;
                Ok(Some(necklaces(m.rank(), r).into_iter().map(|c| (c.clone(), T::of_usize(c.len()))).collect()))
            }
            Engine::FactorClosed { max_len, .. } => {
                guard(r * max_len)?;
                let cands = necklaces(m.rank(), r * max_len);
                let rows: Vec<(Word, T)> = cands
                    .into_par_iter()
                    .filter_map(|c| {
                        let l = T::cst(w.engine.translation_length(c.letters()).expect("factor-closed"));
                        (l <= radius + eps).then_some((c, l))
                    })
                    .collect();
                Ok(Some(rows))
            }
            Engine::Bfs(_) => Ok(None),
        },
        MetricKind::PulledBack { phi, inner } => match exact_classes(inner, radius)? {
            Some(rows) => {
                let mut out: Vec<(Word, T)> =
                    rows.into_par_iter().map(|(c, l)| (canonical(&phi.apply_inverse(&c)), l)).collect();
                out.par_sort_by(|a, b| shortlex_cmp(&a.0, &b.0));
                Ok(Some(out))
            }
            None => Ok(None),
        },
        _ => Ok(None),
    }
}

/// Conjugacy census with the default bracket depth for non-exact metrics.
pub fn enumerate_conjugacy<T: Scalar>(m: &MetricHandle<T>, radius: T) -> Result<ConjCensus<T>> {
    enumerate_conjugacy_with(m, radius, DEFAULT_BRACKET_DEPTH)
}

/// Conjugacy census. Basis and factor-closed word metrics (and their
/// pullbacks) are enumerated through necklaces and are complete. Other word
/// metrics derive classes from the element ball and bracket ℓ with powers up
/// to `depth`; those censuses are marked incomplete.
pub fn enumerate_conjugacy_with<T: Scalar>(m: &MetricHandle<T>, radius: T, depth: usize) -> Result<ConjCensus<T>> {
    if let Some(rows) = exact_classes(m, radius)? {
        let rows = rows
            .into_iter()
            .map(|(class, l)| ConjRow { class, ell: LengthBracket::exact(l), ell_star: None, straddles: false })
            .collect();
        return Ok(ConjCensus { radius, rows, complete: true, metric: m.name().to_string(), star_metric: None });
    }
    let elems = ball(m, radius)?;
    let mut classes: Vec<Word> = elems.into_par_iter().map(|(x, _)| canonical(&x)).filter(|c| !c.is_empty()).collect();
    classes.par_sort_by(shortlex_cmp);
    classes.dedup();
    let brackets: Vec<Result<LengthBracket<T>>> = classes.par_iter().map(|c| m.length_bracket(c, depth)).collect();
    let mut rows = Vec::new();
    for (class, b) in classes.into_iter().zip(brackets) {
        let ell = b?;
        if ell.lower <= radius {
            let straddles = ell.upper > radius;
            rows.push(ConjRow { class, ell, ell_star: None, straddles });
        }
    }
    Ok(ConjCensus { radius, rows, complete: false, metric: m.name().to_string(), star_metric: None })
}

impl<T: Scalar> ConjCensus<T> {
    /// Attaches ℓ* (exact when available, else a bracket of the given depth).
    pub fn with_star(mut self, m: &MetricHandle<T>, depth: usize) -> Result<Self> {
        let ls: Vec<Result<LengthBracket<T>>> = self.rows.par_iter().map(|r| m.length_bracket(&r.class, depth)).collect();
        for (row, l) in self.rows.iter_mut().zip(ls) {
            row.ell_star = Some(l?);
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

    pub fn is_exact(&self) -> bool {
        self.rows.iter().all(|r| r.ell.is_exact())
    }

    /// `(t, #{[x] : ℓ(x) ≤ t})`; bracketed rows count at their upper end.
    pub fn counts(&self) -> Vec<(T, T)> {
        super::cumulative(self.rows.iter().map(|r| r.ell.upper), self.radius)
    }

    pub fn filtered_counts(&self, f: &Filter<T>) -> Result<Vec<(T, T)>> {
        let keep: Vec<Result<bool>> = self.rows.par_iter().map(|r| f.accepts_class(r)).collect();
        let mut ls = Vec::new();
        for (r, k) in self.rows.iter().zip(keep) {
            if k? {
                ls.push(r.ell.upper);
            }
        }
        Ok(super::cumulative(ls.into_iter(), self.radius))
    }

    pub fn restrict(&self, t: T) -> ConjCensus<T> {
        ConjCensus {
            radius: t,
            rows: self.rows.iter().filter(|r| r.ell.lower <= t).cloned().collect(),
            complete: self.complete,
            metric: self.metric.clone(),
            star_metric: self.star_metric.clone(),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["class", "ell_lower", "ell_upper", "ell_star_lower", "ell_star_upper", "straddles"])?;
        for r in &self.rows {
            let (sl, su) = match &r.ell_star {
                Some(b) => (b.lower.to_string(), b.upper.to_string()),
                None => (String::new(), String::new()),
            };
            w.write_record([r.class.to_string(), r.ell.lower.to_string(), r.ell.upper.to_string(), sl, su, r.straddles.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::GeneratingSet;
    use crate::words::is_least_rotation;
    use std::collections::BTreeSet;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn brute(rank: usize, n: usize) -> BTreeSet<Word> {
        let mut words = vec![Vec::<Letter>::new()];
        for _ in 0..n {
            words = words
                .into_iter()
                .flat_map(|p| {
                    (0..2 * rank as Letter).filter_map(move |l| {
                        (p.last() != Some(&inv(l))).then(|| {
                            let mut q = p.clone();
                            q.push(l);
                            q
                        })
                    })
                })
                .collect();
        }
        words.into_iter().map(|p| canonical(&Word::from_reduced(p))).filter(|c| c.len() == n).collect()
    }

    #[test]
    fn necklaces_match_brute_force() {
        let all = necklaces(2, 7);
        for n in 1..=7 {
            let got: BTreeSet<Word> = all.iter().filter(|c| c.len() == n).cloned().collect();
            assert_eq!(got, brute(2, n), "length {n}");
        }
        assert!(all.iter().all(|c| is_least_rotation(c.letters())));
        let small = necklaces(3, 3);
        assert_eq!(small.iter().filter(|c| c.len() == 3).count(), brute(3, 3).len());
    }

    #[test]
    fn length_two_classes() {
        let c: Vec<String> = necklaces(2, 2).iter().filter(|c| c.len() == 2).map(|c| c.to_string()).collect();
        assert_eq!(c.len(), 8);
        for s in ["aa", "ab", "aB", "Ab", "AB", "AA", "bb", "BB"] {
            assert!(c.contains(&canonical(&w(s)).to_string()), "{s}");
        }
    }

    #[test]
    fn factor_closed_census_is_complete_and_exact() {
        let set = GeneratingSet::new(2, &[w("a"), w("b"), w("ab")]).unwrap();
        let m = MetricHandle::<f64>::word(set);
        let c = enumerate_conjugacy(&m, 3.0).unwrap();
        assert!(c.complete && c.is_exact());
        // ℓ(ab) = 1, ℓ(abab) = 2, and ℓ ≥ |c|/2 rules out long classes.
        let get = |s: &str| c.rows.iter().find(|r| r.class.to_string() == s).map(|r| r.ell.lower);
        assert_eq!(get("ab"), Some(1.0));
        assert_eq!(get("abab"), Some(2.0));
        assert_eq!(get("aB"), Some(2.0));
        assert!(c.rows.iter().all(|r| r.ell.lower <= 3.0));
    }

    #[test]
    fn generic_census_brackets() {
        let set = GeneratingSet::new(2, &[w("a"), w("b"), w("aB"), w("abb")]).unwrap();
        let m = MetricHandle::<f64>::word(set).with_budget(200_000);
        let c = enumerate_conjugacy(&m, 3.0).unwrap();
        assert!(!c.complete);
        assert!(c.rows.iter().all(|r| r.ell.lower <= r.ell.upper));
        assert!(c.rows.iter().any(|r| r.class == w("a") && r.ell.upper == 1.0));
    }

    #[test]
    fn pulled_back_classes_match_images() {
        let phi = crate::words::Automorphism::new(vec![w("a"), w("ba")], vec![w("a"), w("bA")]).unwrap();
        let inner = std::sync::Arc::new(MetricHandle::<f64>::standard(2));
        let pb = MetricHandle::pulled_back(phi.clone(), inner).unwrap();
        let c = enumerate_conjugacy(&pb, 4.0).unwrap();
        assert_eq!(c.len(), necklaces(2, 4).len());
        for r in &c.rows {
            assert_eq!(canonical(&phi.apply(&r.class)).len() as f64, r.ell.lower);
        }
    }
}
