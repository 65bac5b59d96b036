use serde::Serialize;

use super::word::{inv, multiply, Letter, Word};

/// `w = g · core · g⁻¹` with `core` cyclically reduced (no rotation applied).
pub fn peel(w: &Word) -> (Word, Word) {
    let l = w.letters();
    let n = l.len();
    let mut k = 0;
    while 2 * k + 1 < n && l[k] == inv(l[n - 1 - k]) {
        k += 1;
    }
    (Word::from_reduced(l[k..n - k].to_vec()), Word::from_reduced(l[..k].to_vec()))
}

/// Booth's algorithm: start index of the lexicographically least rotation.
pub fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let d: Vec<Letter> = s.iter().chain(s.iter()).copied().collect();
    let mut f = vec![-1isize; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = d[j];
        let mut i = f[j - k - 1];
        while i != -1 && sj != d[k + (i + 1) as usize] {
            if sj < d[k + (i + 1) as usize] {
                k = j - (i as usize) - 1;
            }
            i = f[i as usize];
        }
        if sj != d[k + (i + 1) as usize] {
            if sj < d[k] {
                k = j;
            }
            f[j - k] = -1;
        } else {
            f[j - k] = i + 1;
        }
    }
    k % n
}

/// True when no rotation of `s` is strictly smaller. Quadratic worst case but
/// exits early on almost all inputs, which is what necklace enumeration needs.
pub fn is_least_rotation(s: &[Letter]) -> bool {
    let n = s.len();
    'rot: for r in 1..n {
        for i in 0..n {
            let a = s[(r + i) % n];
            let b = s[i];
            if a != b {
                if a < b {
                    return false;
                }
                continue 'rot;
            }
        }
    }
    true
}

/// Canonical representative of the conjugacy class of `w`: the least
/// rotation of its cyclically reduced core.
pub fn canonical(w: &Word) -> Word {
    let (core, _) = peel(w);
    let l = core.letters();
    let k = least_rotation(l);
    let mut v = Vec::with_capacity(l.len());
    v.extend_from_slice(&l[k..]);
    v.extend_from_slice(&l[..k]);
    Word::from_reduced(v)
}

/// A conjugacy class, stored by its canonical cyclically reduced representative.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct CyclicWord(Word);

impl CyclicWord {
    pub fn of(w: &Word) -> Self {
        cyclic_reduce(w).0
    }

    /// Trusts that `w` is already the canonical representative.
    pub fn from_canonical(w: Word) -> Self {
        debug_assert!(w.is_cyclically_reduced() && is_least_rotation(w.letters()));
        CyclicWord(w)
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn into_word(self) -> Word {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}]", self.0)
    }
}

/// Canonical class representative `c` and conjugator `g` with `w = g c g⁻¹`.
pub fn cyclic_reduce(w: &Word) -> (CyclicWord, Word) {
    let (core, g) = peel(w);
    let k = least_rotation(core.letters());
    let l = core.letters();
    let mut v = Vec::with_capacity(l.len());
    v.extend_from_slice(&l[k..]);
    v.extend_from_slice(&l[..k]);
    // core = p · rot · p⁻¹ with p = core[..k]
    let p = Word::from_reduced(l[..k].to_vec());
    (CyclicWord(Word::from_reduced(v)), multiply(&g, &p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn brute_least(s: &[Letter]) -> Vec<Letter> {
        (0..s.len().max(1))
            .map(|r| s.iter().cycle().skip(r).take(s.len()).copied().collect::<Vec<_>>())
            .min()
            .unwrap_or_default()
    }

    #[test]
    fn one_step_peel() {
        let (c, g) = cyclic_reduce(&w("abA"));
        assert_eq!(c.word(), &w("b"));
        assert_eq!(g, w("a"));
    }

    #[test]
    fn identity_class() {
        let (c, g) = cyclic_reduce(&Word::identity());
        assert!(c.is_empty() && g.is_empty());
    }

    #[test]
    fn first_last_inverse_pair_peels() {
        // A·bab·a: the outer letters cancel cyclically, so the core has length 3
        let x = w("Ababa");
        let (c, g) = cyclic_reduce(&x);
        assert_eq!(c.len(), 3);
        assert_eq!(c.word(), &w("abb"));
        assert_eq!(multiply(&multiply(&g, c.word()), &g.inverse()), x);
    }

    #[test]
    fn already_cyclically_reduced_keeps_length() {
        let x = w("Abaab");
        let (c, g) = cyclic_reduce(&x);
        assert_eq!(c.len(), 5);
        assert_eq!(multiply(&multiply(&g, c.word()), &g.inverse()), x);
    }

    #[test]
    fn rotations_share_canonical() {
        assert_eq!(canonical(&w("ab")), canonical(&w("ba")));
        assert_eq!(canonical(&w("ba")), w("ab"));
        assert_eq!(canonical(&w("b")), w("b"));
        assert_eq!(canonical(&w("BAba")), w("aBAb"));
    }

    #[test]
    fn booth_matches_brute_force() {
        let cases: [&[Letter]; 6] = [&[0, 0, 1], &[3, 2, 3, 2], &[2, 0, 2, 0, 0], &[1], &[0, 2, 0, 3, 0, 2], &[3, 3, 2, 3]];
        for s in cases {
            let k = least_rotation(s);
            let rot: Vec<Letter> = s[k..].iter().chain(&s[..k]).copied().collect();
            assert_eq!(rot, brute_least(s), "{s:?}");
            assert!(is_least_rotation(&rot));
        }
    }
}
