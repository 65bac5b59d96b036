use std::collections::VecDeque;

use serde::Serialize;

use super::word::{inv, Letter, Word};
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

/// Folded Stallings graph of a finitely generated subgroup H < F_k.
/// State 0 is the base; membership is reading a closed loop at the base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupGraph {
    rank: usize,
    states: usize,
    trans: Vec<u32>,
    generators: Vec<Word>,
}

struct Dsu(Vec<u32>);

impl Dsu {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let p = self.0[x as usize];
            self.0[x as usize] = self.0[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.0[hi as usize] = lo;
        }
    }
}

impl SubgroupGraph {
    /// Wedge of loops, one per generator, folded to a deterministic automaton.
    pub fn build(rank: usize, gens: &[Word]) -> Result<Self> {
        if rank < 2 {
            return Err(Error::RankTooSmall(rank));
        }
        let nl = 2 * rank;
        let mut edges: Vec<(u32, Letter, u32)> = Vec::new();
        let mut n: u32 = 1;
        for g in gens {
            if g.letters().iter().any(|&l| l as usize >= nl) {
                return Err(Error::InvalidWord { word: g.to_string(), reason: format!("letter outside rank {rank}") });
            }
            let m = g.len();
            let mut cur = 0u32;
            for (i, &l) in g.letters().iter().enumerate() {
                let next = if i + 1 == m {
                    0
                } else {
                    n += 1;
                    n - 1
                };
                edges.push((cur, l, next));
                cur = next;
            }
        }
        let mut dsu = Dsu((0..n).collect());
        loop {
            let mut table = vec![NONE; n as usize * nl];
            let mut changed = false;
            for &(p, l, q) in &edges {
                let (p, q) = (dsu.find(p), dsu.find(q));
                for (s, lab, t) in [(p, l, q), (q, inv(l), p)] {
                    let s = dsu.find(s);
                    let t = dsu.find(t);
                    let slot = s as usize * nl + lab as usize;
                    if table[slot] == NONE {
                        table[slot] = t;
                    } else {
                        let t0 = dsu.find(table[slot]);
                        if t0 != t {
                            dsu.union(t0, t);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        // renumber roots breadth first from the base, letters in order
        let mut adj = vec![NONE; n as usize * nl];
        for &(p, l, q) in &edges {
            let (p, q) = (dsu.find(p), dsu.find(q));
            adj[p as usize * nl + l as usize] = q;
            adj[q as usize * nl + inv(l) as usize] = p;
        }
        let mut index = vec![NONE; n as usize];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([0u32]);
        index[0] = 0;
        order.push(0u32);
        while let Some(s) = queue.pop_front() {
            for l in 0..nl {
                let t = adj[s as usize * nl + l];
                if t != NONE && index[t as usize] == NONE {
                    index[t as usize] = order.len() as u32;
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        let mut trans = vec![NONE; order.len() * nl];
        for (i, &s) in order.iter().enumerate() {
            for l in 0..nl {
                let t = adj[s as usize * nl + l];
                if t != NONE {
                    trans[i * nl + l] = index[t as usize];
                }
            }
        }
        Ok(SubgroupGraph { rank, states: order.len(), trans, generators: gens.to_vec() })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn base(&self) -> u32 {
        0
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    #[inline]
    pub fn step(&self, s: u32, l: Letter) -> Option<u32> {
        let t = self.trans[s as usize * 2 * self.rank + l as usize];
        (t != NONE).then_some(t)
    }

    /// Reads as far as possible from `from`: `(state reached, letters consumed)`.
    pub fn read(&self, from: u32, w: &Word) -> (u32, usize) {
        let mut s = from;
        for (i, &l) in w.letters().iter().enumerate() {
            match self.step(s, l) {
                Some(t) => s = t,
                None => return (s, i),
            }
        }
        (s, w.len())
    }

    pub fn contains(&self, w: &Word) -> bool {
        let (s, k) = self.read(0, w);
        k == w.len() && s == 0
    }

    /// Canonical key of the right coset `H w`: the point of the Schreier graph
    /// reached by `w`, written as (last core state, remaining suffix).
    pub fn right_coset_key(&self, w: &Word) -> (u32, Word) {
        let (s, k) = self.read(0, w);
        (s, Word::from_reduced(w.letters()[k..].to_vec()))
    }

    /// Canonical key of the left coset `g H`, via `(gH)⁻¹ = H g⁻¹`.
    pub fn left_coset_key(&self, g: &Word) -> (u32, Word) {
        self.right_coset_key(&g.inverse())
    }

    /// Whether the conjugacy class of the cyclically reduced `c` meets H.
    pub fn class_meets(&self, c: &Word) -> bool {
        if c.is_empty() {
            return true;
        }
        (0..self.states as u32).any(|s| {
            let (t, k) = self.read(s, c);
            k == c.len() && t == s
        })
    }

    /// Whether H = F_k, i.e. every generator of the ambient group is a member.
    pub fn is_whole_group(&self) -> bool {
        (0..self.rank).all(|i| self.contains(&Word::letter((2 * i) as Letter)))
    }
}

pub fn stallings_build(rank: usize, gens: &[Word]) -> Result<SubgroupGraph> {
    SubgroupGraph::build(rank, gens)
}

pub fn membership(g: &SubgroupGraph, w: &Word) -> bool {
    g.contains(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn a_squared_and_b() {
        let g = SubgroupGraph::build(2, &[w("aa"), w("b")]).unwrap();
        assert_eq!(g.states(), 2);
        assert!(g.contains(&w("aa")));
        assert!(!g.contains(&w("a")));
        assert!(g.contains(&w("aabAAB")));
    }

    #[test]
    fn cyclic_subgroup() {
        let g = SubgroupGraph::build(2, &[w("a")]).unwrap();
        for n in -5..=5 {
            assert!(g.contains(&w("a").pow(n)));
        }
        assert!(!g.contains(&w("b")));
    }

    #[test]
    fn folding_merges() {
        // ab and ac share the a-edge; a b b⁻¹ ... fold gives three states
        let g = SubgroupGraph::build(3, &[w("abA"), w("acA")]).unwrap();
        assert_eq!(g.states(), 2);
        assert!(g.contains(&w("abcA")));
        assert!(!g.contains(&w("b")));
    }

    #[test]
    fn whole_group_detected() {
        assert!(SubgroupGraph::build(2, &[w("a"), w("ab")]).unwrap().is_whole_group());
        assert!(!SubgroupGraph::build(2, &[w("a"), w("bab")]).unwrap().is_whole_group());
    }

    #[test]
    fn cosets() {
        let g = SubgroupGraph::build(2, &[w("a")]).unwrap();
        assert_eq!(g.left_coset_key(&w("aaa")), g.left_coset_key(&Word::identity()));
        assert_ne!(g.left_coset_key(&w("b")), g.left_coset_key(&Word::identity()));
        assert_eq!(g.left_coset_key(&w("ba")), g.left_coset_key(&w("bA")));
        assert_eq!(g.right_coset_key(&w("ab")), g.right_coset_key(&w("b")));
    }

    #[test]
    fn class_meets_subgroup() {
        let g = SubgroupGraph::build(2, &[w("a"), w("baB")]).unwrap();
        assert!(g.class_meets(&w("a")));
        assert!(!g.class_meets(&w("b")));
        assert!(g.class_meets(&w("aa")));
    }
}
