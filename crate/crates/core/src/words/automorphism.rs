use serde::Serialize;

use super::word::{inv, push_reduce, Word};
use crate::error::{Error, Result};

/// Automorphism of F_k given by generator images together with the images
/// of its inverse. The pair is checked to compose to the identity both ways.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Automorphism {
    images: Vec<Word>,
    inverse_images: Vec<Word>,
}

fn substitute(images: &[Word], w: &Word) -> Word {
    let mut out = Vec::with_capacity(w.len() * 2);
    for &l in w.letters() {
        let img = images[(l >> 1) as usize].letters();
        if l & 1 == 0 {
            for &m in img {
                push_reduce(&mut out, m);
            }
        } else {
            for &m in img.iter().rev() {
                push_reduce(&mut out, inv(m));
            }
        }
    }
    Word::from_reduced(out)
}

impl Automorphism {
    pub fn new(images: Vec<Word>, inverse_images: Vec<Word>) -> Result<Self> {
        let k = images.len();
        if k < 2 || inverse_images.len() != k {
            return Err(Error::NotAnAutomorphism(format!("{k} images but {} inverse images", inverse_images.len())));
        }
        let limit = (2 * k) as u8;
        if images.iter().chain(&inverse_images).any(|w| w.letters().iter().any(|&l| l >= limit)) {
            return Err(Error::NotAnAutomorphism(format!("image uses a letter outside rank {k}")));
        }
        for i in 0..k {
            let g = Word::letter((2 * i) as u8);
            let there = substitute(&inverse_images, &substitute(&images, &g));
            let back = substitute(&images, &substitute(&inverse_images, &g));
            if there != g || back != g {
                return Err(Error::NotAnAutomorphism(format!("round trip fails on generator {g}: {there} / {back}")));
            }
        }
        Ok(Automorphism { images, inverse_images })
    }

    pub fn identity(rank: usize) -> Self {
        let id: Vec<Word> = (0..rank).map(|i| Word::letter((2 * i) as u8)).collect();
        Automorphism { images: id.clone(), inverse_images: id }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[Word] {
        &self.inverse_images
    }

    pub fn apply(&self, w: &Word) -> Word {
        substitute(&self.images, w)
    }

    pub fn apply_inverse(&self, w: &Word) -> Word {
        substitute(&self.inverse_images, w)
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism { images: self.inverse_images.clone(), inverse_images: self.images.clone() }
    }

    /// Longest generator image, a Lipschitz constant for word length.
    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Word::len).max().unwrap_or(0)
    }
}

pub fn apply_automorphism(phi: &Automorphism, w: &Word) -> Word {
    phi.apply(w)
}
