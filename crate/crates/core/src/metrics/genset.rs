use std::collections::{HashMap, HashSet};
use std::sync::Mutex;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{shortlex_cmp, Letter, SubgroupGraph, Word};

/// Finite symmetric generating set of F_k without the identity.
#[derive(Clone, Debug, Serialize)]
pub struct GeneratingSet {
    rank: usize,
    elements: Vec<Word>,
    max_len: usize,
    factor_closed: bool,
    basis: bool,
}

impl GeneratingSet {
    /// Adds inverses, sorts shortlex, and checks that the set generates F_k
    /// (every basis letter is read as a loop by the folded graph of the set).
    pub fn new(rank: usize, gens: &[Word]) -> Result<Self> {
        let mut elements: Vec<Word> = Vec::with_capacity(2 * gens.len());
        for g in gens {
            if g.is_empty() {
                return Err(Error::InvalidGeneratingSet("identity is not allowed".into()));
            }
            if g.letters().iter().any(|&l| l as usize >= 2 * rank) {
                return Err(Error::InvalidGeneratingSet(format!("{g} uses a letter outside rank {rank}")));
            }
            elements.push(g.clone());
            elements.push(g.inverse());
        }
        elements.sort_by(shortlex_cmp);
        elements.dedup();
        if !SubgroupGraph::build(rank, &elements)?.is_whole_group() {
            return Err(Error::InvalidGeneratingSet("does not generate the free group".into()));
        }
        let max_len = elements.iter().map(Word::len).max().unwrap_or(0);
        let set: HashSet<&[Letter]> = elements.iter().map(|w| w.letters()).collect();
        let factor_closed = elements.iter().all(|w| {
            let l = w.letters();
            (0..l.len()).all(|i| (i + 1..=l.len()).all(|j| set.contains(&l[i..j])))
        });
        let basis = max_len == 1 && elements.len() == 2 * rank;
        Ok(GeneratingSet { rank, elements, max_len, factor_closed, basis })
    }

    pub fn standard(rank: usize) -> Self {
        let gens: Vec<Word> = (0..rank).map(|i| Word::letter((2 * i) as Letter)).collect();
        Self::new(rank, &gens).expect("basis generates")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn elements(&self) -> &[Word] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Every nonempty factor of every element is again an element.
    pub fn is_factor_closed(&self) -> bool {
        self.factor_closed
    }

    pub fn is_standard_basis(&self) -> bool {
        self.basis
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.elements.binary_search_by(|e| shortlex_cmp(e, w)).is_ok()
    }
}

/// How a word metric is evaluated.
///
/// For a factor-closed set the distance is the least number of pieces in a
/// segmentation of the reduced word into elements: the reduced form of a
/// product of reduced words is a concatenation of one factor from each.
pub(crate) enum Engine {
    Basis,
    FactorClosed { pieces: HashSet<Vec<Letter>>, max_len: usize },
    Bfs(Mutex<BfsBall>),
}

pub(crate) struct BfsBall {
    pub dist: HashMap<Word, u32>,
    pub layers: Vec<Vec<Word>>,
}

impl BfsBall {
    fn new() -> Self {
        let id = Word::identity();
        BfsBall { dist: HashMap::from([(id.clone(), 0)]), layers: vec![vec![id]] }
    }

    /// Worst-case size after one more layer.
    fn next_bound(&self, gens: &[Word]) -> usize {
        self.dist.len() + self.layers.last().map_or(0, Vec::len) * gens.len()
    }

    fn grow(&mut self, gens: &[Word]) {
        let r = self.layers.len() as u32;
        let mut next = Vec::new();
        for w in self.layers.last().expect("nonempty") {
            for s in gens {
                let u = w.multiply(s);
                if !self.dist.contains_key(&u) {
                    self.dist.insert(u.clone(), r);
                    next.push(u);
                }
            }
        }
        self.layers.push(next);
    }
}

impl Engine {
    /// Generic breadth-first engine regardless of the set's shape.
    #[cfg(test)]
    pub fn bfs() -> Self {
        Engine::Bfs(Mutex::new(BfsBall::new()))
    }

    pub fn for_set(s: &GeneratingSet) -> Self {
        if s.is_standard_basis() {
            Engine::Basis
        } else if s.is_factor_closed() {
            Engine::FactorClosed { pieces: s.elements.iter().map(|w| w.letters().to_vec()).collect(), max_len: s.max_len }
        } else {
            Engine::Bfs(Mutex::new(BfsBall::new()))
        }
    }

    pub fn distance(&self, s: &GeneratingSet, x: &Word, budget: usize) -> Result<u32> {
        match self {
            Engine::Basis => Ok(x.len() as u32),
            Engine::FactorClosed { pieces, max_len } => Ok(segment(pieces, *max_len, x.letters())),
            Engine::Bfs(ball) => {
                let mut b = ball.lock().expect("memo poisoned");
                loop {
                    if let Some(&d) = b.dist.get(x) {
                        return Ok(d);
                    }
                    if b.next_bound(&s.elements) > budget {
                        return Err(Error::BudgetExceeded { budget });
                    }
                    b.grow(&s.elements);
                }
            }
        }
    }

    /// BFS layers through `radius`; only for the generic engine.
    pub fn bfs_layers(&self, s: &GeneratingSet, radius: usize, budget: usize) -> Result<Vec<Vec<Word>>> {
        let Engine::Bfs(ball) = self else {
            return Err(Error::Unsupported("layers are only kept for the generic engine".into()));
        };
        let mut b = ball.lock().expect("memo poisoned");
        while b.layers.len() <= radius {
            if b.next_bound(&s.elements) > budget {
                return Err(Error::BudgetExceeded { budget });
            }
            b.grow(&s.elements);
        }
        if b.layers[..=radius].iter().map(Vec::len).sum::<usize>() > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        Ok(b.layers[..=radius].to_vec())
    }

    /// Exact stable translation length when the engine admits one.
    pub fn translation_length(&self, core: &[Letter]) -> Option<f64> {
        match self {
            Engine::Basis => Some(core.len() as f64),
            Engine::FactorClosed { pieces, max_len } => Some(cyclic_segment_ratio(pieces, *max_len, core)),
            Engine::Bfs(_) => None,
        }
    }
}

/// Minimum number of pieces covering `x` (factor-closed sets always contain
/// every single letter that can occur, so the value is finite).
pub(crate) fn segment(pieces: &HashSet<Vec<Letter>>, max_len: usize, x: &[Letter]) -> u32 {
    let n = x.len();
    let mut dp = vec![u32::MAX; n + 1];
    dp[0] = 0;
    for i in 1..=n {
        for len in 1..=max_len.min(i) {
            let prev = dp[i - len];
            if prev != u32::MAX && prev + 1 < dp[i] && pieces.contains(&x[i - len..i]) {
                dp[i] = prev + 1;
            }
        }
    }
    dp[n]
}

/// lim |cⁿ|/n for a cyclically reduced `c`: the minimum ratio of pieces to
/// windings over closed segmentation walks on positions mod |c|. A simple
/// cycle winds at most `max_len` times, so checking `m ≤ max_len` windings
/// from every start position is exhaustive.
pub(crate) fn cyclic_segment_ratio(pieces: &HashSet<Vec<Letter>>, max_len: usize, c: &[Letter]) -> f64 {
    let p = c.len();
    if p == 0 {
        return 0.0;
    }
    let span = p * max_len;
    let mut best = f64::INFINITY;
    let mut text = Vec::with_capacity(span);
    for s in 0..p {
        text.clear();
        text.extend((0..span).map(|i| c[(s + i) % p]));
        let n = text.len();
        let mut dp = vec![u32::MAX; n + 1];
        dp[0] = 0;
        for i in 1..=n {
            for len in 1..=max_len.min(i) {
                let prev = dp[i - len];
                if prev != u32::MAX && prev + 1 < dp[i] && pieces.contains(&text[i - len..i]) {
                    dp[i] = prev + 1;
                }
            }
        }
        for m in 1..=max_len {
            if dp[m * p] != u32::MAX {
                best = best.min(dp[m * p] as f64 / m as f64);
            }
        }
    }
    best
}
