//! Marked length spectrum invariants on free groups.
//!
//! Words and subgroups live in [`words`], distance-like functions in [`metrics`],
//! ball and conjugacy-class enumeration in [`census`], Manhattan curves and the
//! rigidity constant in [`manhattan`], and the matrix kernel with the explicit
//! bound formulas in [`spectral`].
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! at the crate root fix `f64`.

pub mod census;
pub mod error;
pub mod manhattan;
pub mod metrics;
pub mod rng;
pub mod scalar;
pub mod spectral;
pub mod words;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use words::{
    abelianize, apply_automorphism, canonical, cyclic_reduce, membership, multiply,
    stallings_build, Alphabet, Automorphism, CyclicWord, Letter, SubgroupGraph, Word,
};

pub type Metric = metrics::MetricHandle<f64>;
pub type Bracket = metrics::LengthBracket<f64>;
pub type Elements = census::ElementCensus<f64>;
pub type Classes = census::ConjCensus<f64>;
pub type Growth = census::GrowthEstimate<f64>;
pub type Curve = manhattan::CurveSamples<f64>;
pub type Beta = manhattan::BetaReport<f64>;
pub type Mat = spectral::Matrix<f64>;
pub type Matrices = spectral::MatrixSet<f64>;
pub type Rep = spectral::Representation<f64>;
pub type Sandwich = spectral::SandwichEstimate<f64>;
