use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::metrics::{Engine, MetricHandle, MetricKind};
use crate::scalar::Scalar;
use crate::words::{inv, Letter};

/// Reading state: the last L−1 letters and the offsets dp[i] − dp[i−j],
/// j = 1..L−1, of the segmentation DP.
type State = (Vec<Letter>, Vec<u32>);

fn segment_spheres(pieces: &HashSet<Vec<Letter>>, max_len: usize, k: usize, radius: usize) -> Vec<u128> {
    let mut spheres = vec![0u128; radius + 1];
    spheres[0] = 1;
    let mut layer: BTreeMap<State, Vec<u128>> = BTreeMap::new();
    let mut start = vec![0u128; radius + 1];
    start[0] = 1;
    layer.insert((Vec::new(), Vec::new()), start);
    let mut buf = Vec::with_capacity(max_len);
    while !layer.is_empty() {
        let mut next: BTreeMap<State, Vec<u128>> = BTreeMap::new();
        for ((tail, offs), counts) in &layer {
            for c in 0..k as Letter {
                if tail.last() == Some(&inv(c)) {
                    continue;
                }
                buf.clear();
                buf.extend_from_slice(tail);
                buf.push(c);
                // dp grows by min over pieces ending here of 1 − (dp[i] − dp[start]).
                let mut best: i64 = 1;
                for len in 2..=buf.len() {
                    if pieces.contains(&buf[buf.len() - len..]) {
                        best = best.min(1 - offs[len - 2] as i64);
                    }
                }
                let best = best.max(0) as u32;
                let mut new_offs = Vec::with_capacity(max_len - 1);
                if max_len > 1 {
                    new_offs.push(best);
                    for &o in offs.iter().take(max_len - 2) {
                        new_offs.push(best + o);
                    }
                }
                let keep = buf.len().min(max_len - 1);
                let new_tail = buf[buf.len() - keep..].to_vec();
                let entry = next.entry((new_tail, new_offs)).or_insert_with(|| vec![0u128; radius + 1]);
                for (d, &n) in counts.iter().enumerate() {
                    if n == 0 {
                        continue;
                    }
                    let nd = d + best as usize;
                    if nd <= radius {
                        entry[nd] += n;
                        spheres[nd] += n;
                    }
                }
            }
        }
        next.retain(|_, v| v.iter().any(|&n| n > 0));
        layer = next;
    }
    spheres
}

/// Ball counts `(t, N(t))`, t = 0..=radius, for word metrics that admit a
/// finite-state count (free basis, factor-closed sets, and their pullbacks),
/// computed without listing the ball.
pub fn ball_counts<T: Scalar>(m: &MetricHandle<T>, radius: usize) -> Result<Vec<(T, T)>> {
    match m.kind() {
        MetricKind::Word(w) => match &w.engine {
            Engine::Basis => {
                // |S(t)| = 2r(2r − 1)^(t−1)
                let k = 2 * m.rank() as u128;
                let mut out = vec![(T::zero(), T::one())];
                let (mut sphere, mut acc) = (k, 1u128);
                for t in 1..=radius {
                    acc = acc.checked_add(sphere).ok_or_else(|| Error::Unsupported("ball count overflows u128".into()))?;
                    out.push((T::of_usize(t), T::cst(acc as f64)));
                    sphere = sphere.saturating_mul(k - 1);
                }
                Ok(out)
            }
            Engine::FactorClosed { pieces, max_len } => {
                let spheres = segment_spheres(pieces, *max_len, 2 * m.rank(), radius);
                let mut acc = 0u128;
                Ok(spheres
                    .into_iter()
                    .enumerate()
                    .map(|(t, s)| {
                        acc += s;
                        (T::of_usize(t), T::cst(acc as f64))
                    })
                    .collect())
            }
            Engine::Bfs(_) => Err(Error::Unsupported("finite-state counts need a factor-closed set".into())),
        },
        MetricKind::PulledBack { inner, .. } => ball_counts(inner, radius),
        _ => Err(Error::Unsupported(format!("finite-state counts for {}", m.name()))),
    }
}
