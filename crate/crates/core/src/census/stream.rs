use rayon::prelude::*;

use super::filter::Filter;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::words::{inv, Letter, SubgroupGraph};

struct Ctx<'a> {
    k: usize,
    radius: usize,
    target: Option<Vec<i64>>,
    graph: Option<&'a SubgroupGraph>,
}

impl Ctx<'_> {
    fn accepts(&self, ab: &[i64], state: Option<u32>) -> bool {
        self.target.as_ref().map_or(true, |t| t[..] == ab[..]) && self.graph.map_or(true, |g| state == Some(g.base()))
    }

    fn hopeless(&self, ab: &[i64], depth: usize) -> bool {
        match &self.target {
            Some(t) => t.iter().zip(ab).map(|(a, b)| (a - b).unsigned_abs() as usize).sum::<usize>() > self.radius - depth,
            None => false,
        }
    }

    fn dfs(&self, last: Letter, depth: usize, ab: &mut [i64], state: Option<u32>, spheres: &mut [u64]) {
        if self.accepts(ab, state) {
            spheres[depth] += 1;
        }
        if depth == self.radius || self.hopeless(ab, depth) {
            return;
        }
        for l in 0..self.k as Letter {
            if l == inv(last) {
                continue;
            }
            let next = match (self.graph, state) {
                (Some(g), Some(s)) => match g.step(s, l) {
                    Some(t) => Some(t),
                    None => continue,
                },
                (Some(_), None) => continue,
                (None, _) => None,
            };
            let i = (l >> 1) as usize;
            let e = if l & 1 == 0 { 1 } else { -1 };
            ab[i] += e;
            self.dfs(l, depth + 1, ab, next, spheres);
            ab[i] -= e;
        }
    }
}

/// Ball counts `(t, N(t))`, t = 0..=radius, for the free basis of the given
/// rank restricted to a word filter, without materializing the ball.
/// Only filters that read the word alone are accepted.
pub fn basis_sphere_counts<T: Scalar>(rank: usize, radius: usize, filter: &Filter<T>) -> Result<Vec<(T, T)>> {
    if !(2..=26).contains(&rank) {
        return Err(Error::RankTooSmall(rank));
    }
    let (target, graph) = match filter {
        Filter::All => (None, None),
        Filter::HomologyClass(v) => {
            if v.len() != rank {
                return Err(Error::PreconditionViolated("homology class has the wrong rank".into()));
            }
            (Some(v.clone()), None)
        }
        Filter::CommutatorSubgroup => (Some(vec![0; rank]), None),
        Filter::Subgroup(g) => (None, Some(&**g)),
        _ => return Err(Error::PreconditionViolated("streaming counts take word filters only".into())),
    };
    let ctx = Ctx { k: 2 * rank, radius, target, graph };
    let base = graph.map(|g| g.base());
    let mut spheres = vec![0u64; radius + 1];
    if ctx.accepts(&vec![0; rank], base) {
        spheres[0] = 1;
    }
    if radius > 0 {
        let parts: Vec<Vec<u64>> = (0..ctx.k as Letter)
            .into_par_iter()
            .map(|l| {
                let mut sp = vec![0u64; radius + 1];
                let next = match (graph, base) {
                    (Some(g), Some(s)) => match g.step(s, l) {
                        Some(t) => Some(t),
                        None => return sp,
                    },
                    _ => None,
                };
                let mut ab = vec![0i64; rank];
                ab[(l >> 1) as usize] += if l & 1 == 0 { 1 } else { -1 };
                ctx.dfs(l, 1, &mut ab, next, &mut sp);
                sp
            })
            .collect();
        for p in parts {
            for (s, v) in spheres.iter_mut().zip(p) {
                *s += v;
            }
        }
    }
    let mut acc = 0u64;
    Ok(spheres
        .into_iter()
        .enumerate()
        .map(|(t, s)| {
            acc += s;
            (T::of_usize(t), T::of_u64(acc))
        })
        .collect())
}
