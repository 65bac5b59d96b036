//! Free group combinatorics: reduced words, conjugacy normal forms,
//! abelianization, automorphisms and Stallings graphs.
//!
//! Letters are small integers: generator `i` is `2i` and its inverse `2i+1`,
//! so the fixed order is a < A < b < B < ... and inversion is `l ^ 1`.
//! Strings use lowercase for generators and uppercase for inverses.

mod automorphism;
mod cyclic;
mod stallings;
mod word;

pub use automorphism::{apply_automorphism, Automorphism};
pub use cyclic::{canonical, cyclic_reduce, is_least_rotation, least_rotation, peel, CyclicWord};
pub use stallings::{membership, stallings_build, SubgroupGraph};
pub use word::{abelianize, inv, multiply, shortlex_cmp, Alphabet, Letter, Word};
