//! Manhattan curves of metric pairs: θ sampling from joint censuses, the
//! rigidity constant β with ξ and αSym, census dilations, and the bound checks.

mod beta;
mod checks;
mod dilation;
mod theta;

pub use beta::{beta, BetaReport, SIMILARITY_TOL};
pub use checks::{check_bounds, eta_bracket, BoundCheck, EtaBracket, Outcome};
pub use dilation::{dilation, DilationReport};
pub use theta::{sample_theta, uniform_grid, CurveSamples, MIN_ANNULI};
