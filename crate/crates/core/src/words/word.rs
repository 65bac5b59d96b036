use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Letter = u8;

/// Formal inverse of a letter.
#[inline]
pub fn inv(l: Letter) -> Letter {
    l ^ 1
}

/// Ambient free group F_k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Alphabet {
    rank: usize,
}

impl Alphabet {
    pub fn new(rank: usize) -> Result<Self> {
        if rank < 2 {
            return Err(Error::RankTooSmall(rank));
        }
        if rank > 26 {
            return Err(Error::InvalidWord { word: String::new(), reason: format!("rank {rank} exceeds 26 letters") });
        }
        Ok(Alphabet { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of letters, generators and inverses.
    pub fn size(&self) -> usize {
        2 * self.rank
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..(2 * self.rank) as Letter
    }

    pub fn parse(&self, s: &str) -> Result<Word> {
        let w = Word::parse(s)?;
        self.check(&w)?;
        Ok(w)
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        match w.0.iter().find(|&&l| l as usize >= 2 * self.rank) {
            Some(_) => Err(Error::InvalidWord { word: w.to_string(), reason: format!("letter outside rank {}", self.rank) }),
            None => Ok(()),
        }
    }

    /// The free basis a_1 .. a_k as words.
    pub fn basis(&self) -> Vec<Word> {
        (0..self.rank).map(|i| Word(vec![(2 * i) as Letter])).collect()
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word(pub(crate) Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(it: I) -> Self {
        let mut out = Vec::new();
        for l in it {
            push_reduce(&mut out, l);
        }
        Word(out)
    }

    /// Wraps letters the caller knows to be reduced.
    pub(crate) fn from_reduced(v: Vec<Letter>) -> Self {
        debug_assert!(v.windows(2).all(|p| p[0] != inv(p[1])));
        Word(v)
    }

    /// Parses `a`..`z` (generators) and `A`..`Z` (inverses); `1`, `ε` or the
    /// empty string denote the identity. The result is freely reduced.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() || t == "1" || t == "ε" {
            return Ok(Word::identity());
        }
        let mut v = Vec::with_capacity(t.len());
        for c in t.chars() {
            let l = match c {
                'a'..='z' => 2 * (c as u8 - b'a'),
                'A'..='Z' => 2 * (c as u8 - b'A') + 1,
                _ => return Err(Error::InvalidWord { word: s.to_string(), reason: format!("unexpected character {c:?}") }),
            };
            v.push(l);
        }
        Ok(Word::from_letters(v))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| inv(l)).collect())
    }

    pub fn multiply(&self, other: &Word) -> Word {
        multiply(self, other)
    }

    /// Appends one letter with cancellation.
    pub fn times_letter(&self, l: Letter) -> Word {
        let mut v = self.0.clone();
        push_reduce(&mut v, l);
        Word(v)
    }

    /// `g⁻¹ self g`.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        multiply(&multiply(&g.inverse(), self), g)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&f), Some(&l)) => self.0.len() == 1 || f != inv(l),
            _ => true,
        }
    }

    /// `self^n`, negative exponents allowed.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let n = n.unsigned_abs() as usize;
        if n == 0 || base.is_empty() {
            return Word::identity();
        }
        let (core, g) = super::cyclic::peel(&base);
        let mut v = Vec::with_capacity(2 * g.len() + n * core.len());
        v.extend_from_slice(&g.0);
        for _ in 0..n {
            v.extend_from_slice(&core.0);
        }
        v.extend(g.0.iter().rev().map(|&l| inv(l)));
        Word(v)
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }
}

#[inline]
pub(crate) fn push_reduce(v: &mut Vec<Letter>, l: Letter) {
    if v.last() == Some(&inv(l)) {
        v.pop();
    } else {
        v.push(l);
    }
}

/// Group law: free reduction of `u v` for reduced `u`, `v`.
pub fn multiply(u: &Word, v: &Word) -> Word {
    let (a, b) = (&u.0, &v.0);
    let mut k = 0;
    while k < a.len() && k < b.len() && a[a.len() - 1 - k] == inv(b[k]) {
        k += 1;
    }
    let mut out = Vec::with_capacity(a.len() + b.len() - 2 * k);
    out.extend_from_slice(&a[..a.len() - k]);
    out.extend_from_slice(&b[k..]);
    Word(out)
}

/// Image in Z^rank: exponent sum of each generator.
pub fn abelianize(w: &Word, rank: usize) -> Vec<i64> {
    let mut v = vec![0i64; rank];
    for &l in &w.0 {
        let i = (l >> 1) as usize;
        if i < rank {
            v[i] += if l & 1 == 0 { 1 } else { -1 };
        }
    }
    v
}

/// Shortlex order: by length, then lexicographically in the letter order.
pub fn shortlex_cmp(u: &Word, v: &Word) -> Ordering {
    u.0.len().cmp(&v.0.len()).then_with(|| u.0.cmp(&v.0))
}

pub(crate) fn letter_char(l: Letter) -> char {
    let base = if l & 1 == 0 { b'a' } else { b'A' };
    (base + (l >> 1)) as char
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for &l in &self.0 {
            write!(f, "{}", letter_char(l))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::str::FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn inverse_cancels() {
        assert_eq!(multiply(&w("a"), &w("A")), Word::identity());
    }

    #[test]
    fn identity_law() {
        assert_eq!(multiply(&Word::identity(), &w("abB")), w("a"));
        assert_eq!(multiply(&w("bab"), &Word::identity()), w("bab"));
    }

    #[test]
    fn middle_pair_cancels() {
        assert_eq!(multiply(&w("ab"), &w("Ba")), w("aa"));
    }

    #[test]
    fn parse_reduces_and_prints() {
        assert_eq!(w("aAbBa").to_string(), "a");
        assert_eq!(Word::identity().to_string(), "1");
        assert!(Word::parse("a1").is_err());
        assert_eq!(w("abAB").letters(), &[0, 2, 1, 3]);
    }

    #[test]
    fn abelianization_counts() {
        assert_eq!(abelianize(&w("abAB"), 2), vec![0, 0]);
        assert_eq!(abelianize(&w("aab"), 2), vec![2, 1]);
    }

    #[test]
    fn powers() {
        assert_eq!(w("aba").pow(0), Word::identity());
        assert_eq!(w("abA").pow(3), w("abbbA"));
        assert_eq!(w("ab").pow(-2), w("BABA"));
        let x = w("abaBaaB");
        let mut acc = Word::identity();
        for k in 1..6 {
            acc = multiply(&acc, &x);
            assert_eq!(x.pow(k), acc);
        }
    }

    #[test]
    fn alphabet_bounds() {
        assert!(Alphabet::new(1).is_err());
        let al = Alphabet::new(2).unwrap();
        assert!(al.parse("abc").is_err());
        assert_eq!(al.letters().count(), 4);
    }

    #[test]
    fn shortlex() {
        assert_eq!(shortlex_cmp(&w("b"), &w("aa")), Ordering::Less);
        assert_eq!(shortlex_cmp(&w("aB"), &w("Ab")), Ordering::Less);
    }
}
