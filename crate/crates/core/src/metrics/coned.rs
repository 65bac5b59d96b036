use std::collections::{HashMap, VecDeque};

use super::genset::{Engine, GeneratingSet};
use crate::error::{Error, Result};
use crate::words::{SubgroupGraph, Word};

/// Distance in the coned-off Cayley graph Cay(F_k, S, H), computed inside the
/// S-ball of radius |x|_S. Elements of one left coset gH are joined through a
/// cone point at distance 1 from each of them. The truncation can only
/// lengthen paths, so the value is an upper bound, exact whenever some
/// geodesic stays in the ball.
pub fn coned_off_distance(set: &GeneratingSet, h: &SubgroupGraph, x: &Word, budget: usize) -> Result<u32> {
    if x.is_empty() {
        return Ok(0);
    }
    let engine = Engine::for_set(set);
    let r = engine.distance(set, x, budget)? as usize;
    // universe: S-ball of radius r
    let mut index: HashMap<Word, u32> = HashMap::from([(Word::identity(), 0)]);
    let mut elems = vec![Word::identity()];
    let mut frontier = vec![0u32];
    for _ in 0..r {
        let mut next = Vec::new();
        for &i in &frontier {
            for s in set.elements() {
                let u = elems[i as usize].multiply(s);
                if !index.contains_key(&u) {
                    if elems.len() >= budget {
                        return Err(Error::BudgetExceeded { budget });
                    }
                    index.insert(u.clone(), elems.len() as u32);
                    next.push(elems.len() as u32);
                    elems.push(u);
                }
            }
        }
        frontier = next;
    }
    let n = elems.len();
    let mut cone_of = Vec::with_capacity(n);
    let mut cones: HashMap<(u32, Word), u32> = HashMap::new();
    let mut members: Vec<Vec<u32>> = Vec::new();
    for (i, e) in elems.iter().enumerate() {
        let key = h.left_coset_key(e);
        let c = *cones.entry(key).or_insert_with(|| {
            members.push(Vec::new());
            (members.len() - 1) as u32
        });
        members[c as usize].push(i as u32);
        cone_of.push(c);
    }
    let target = index[x];
    let mut dist = vec![u32::MAX; n + members.len()];
    dist[0] = 0;
    let mut q = VecDeque::from([0usize]);
    while let Some(v) = q.pop_front() {
        let dv = dist[v];
        if v == target as usize {
            return Ok(dv);
        }
        let mut visit = |u: usize, q: &mut VecDeque<usize>| {
            if dist[u] == u32::MAX {
                dist[u] = dv + 1;
                q.push_back(u);
            }
        };
        if v < n {
            for s in set.elements() {
                if let Some(&u) = index.get(&elems[v].multiply(s)) {
                    visit(u as usize, &mut q);
                }
            }
            visit(n + cone_of[v] as usize, &mut q);
        } else {
            for &u in &members[v - n] {
                visit(u as usize, &mut q);
            }
        }
    }
    Ok(r as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn powers_of_coned_generator() {
        let s = GeneratingSet::standard(2);
        let h = SubgroupGraph::build(2, &[w("a")]).unwrap();
        assert_eq!(coned_off_distance(&s, &h, &Word::identity(), 100).unwrap(), 0);
        assert_eq!(coned_off_distance(&s, &h, &w("a"), 100).unwrap(), 1);
        for n in 2..7 {
            assert_eq!(coned_off_distance(&s, &h, &w("a").pow(n), 1 << 20).unwrap(), 2);
        }
        // b aⁿ: cone from o to ... b then cone inside bH
        assert_eq!(coned_off_distance(&s, &h, &w("baaaa"), 1 << 20).unwrap(), 3);
    }

    #[test]
    fn never_exceeds_word_length() {
        let s = GeneratingSet::standard(2);
        let h = SubgroupGraph::build(2, &[w("ab")]).unwrap();
        for x in ["abab", "bbab", "abAB", "ababa", "Ba"] {
            let x = w(x);
            assert!(coned_off_distance(&s, &h, &x, 1 << 20).unwrap() as usize <= x.len());
        }
    }
}
