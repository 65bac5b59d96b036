//! Run configuration: a TOML file with top-level keys and one section per
//! subcommand. Metrics are declared by name and may refer to each other.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use mls_core::census::Filter;
use mls_core::metrics::{GeneratingSet, MetricHandle};
use mls_core::spectral::{Matrix, MatrixSet, Representation};
use mls_core::{Automorphism, SubgroupGraph, Word};
use serde::Deserialize;

use crate::CliError;

pub const OUT_DIR_ENV: &str = "MLS_OUT_DIR";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_rank")]
    pub rank: usize,
    #[serde(default)]
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    #[serde(default)]
    pub metrics: BTreeMap<String, MetricSpec>,
    pub census: Option<CensusSpec>,
    pub growth: Option<GrowthSpec>,
    pub curve: Option<CurveSpec>,
    pub correlate: Option<CorrelateSpec>,
    pub tau: Option<TauSpec>,
    pub beta: Option<BetaSpec>,
    pub matrices: Option<MatrixSource>,
    pub jsr: Option<JsrSpec>,
    pub bochi: Option<BochiSpec>,
    pub jtl: Option<JtlSpec>,
    pub bound: Option<BoundSpec>,
    pub acceptance: Option<AcceptanceSpec>,
}

fn default_rank() -> usize {
    2
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSpec {
    /// word | pullback | combination | matrix-log-norm | symmetrized-matrix-log-norm | coned-off
    pub kind: String,
    pub generators: Option<Vec<String>>,
    pub images: Option<Vec<String>>,
    pub inverse_images: Option<Vec<String>>,
    pub inner: Option<String>,
    pub terms: Option<Vec<TermSpec>>,
    /// Row-major generator matrices.
    pub matrices: Option<Vec<Vec<f64>>>,
    pub schottky: Option<SchottkySpec>,
    pub subgroup: Option<Vec<String>>,
    pub delta: Option<f64>,
    pub alpha_rg: Option<f64>,
    pub budget: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coef: f64,
    pub metric: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchottkySpec {
    pub stretch: f64,
    /// Radians.
    pub angle: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CensusSpec {
    pub metric: String,
    pub star: Option<String>,
    pub radius: f64,
    #[serde(default = "default_bracket_depth")]
    pub bracket_depth: usize,
}

fn default_bracket_depth() -> usize {
    8
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterSpec {
    /// all | homology | commutator | subgroup | tolerance | equality
    pub kind: String,
    pub class: Option<Vec<i64>>,
    pub generators: Option<Vec<String>>,
    pub c: Option<f64>,
    pub p: Option<f64>,
    pub v: Option<f64>,
    pub v_star: Option<f64>,
    pub tol: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthSpec {
    /// elements | classes | stream
    #[serde(default = "default_source")]
    pub source: String,
    pub filter: Option<FilterSpec>,
    #[serde(default = "default_window")]
    pub window: usize,
}

fn default_source() -> String {
    "elements".into()
}

fn default_window() -> usize {
    mls_core::census::DEFAULT_WINDOW
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default)]
    pub a_min: f64,
    /// Defaults to v*.
    pub a_max: Option<f64>,
    pub v: Option<f64>,
    pub v_star: Option<f64>,
}

fn default_points() -> usize {
    21
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaSpec {
    /// Treat this Δ as exact in the bound checks.
    pub exact_delta: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelateSpec {
    /// equality | tolerance
    #[serde(default = "default_mode")]
    pub mode: String,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "one")]
    pub c: f64,
    #[serde(default = "half")]
    pub p: f64,
    pub v: Option<f64>,
    pub v_star: Option<f64>,
}

fn default_mode() -> String {
    "equality".into()
}

fn default_tol() -> f64 {
    1e-9
}

fn one() -> f64 {
    1.0
}

fn half() -> f64 {
    0.5
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauSpec {
    /// Tolerance function for the η bracket, f(t) = c·t^p.
    pub c: Option<f64>,
    pub p: Option<f64>,
    /// Radius of the conjugacy census used for η (defaults to the census radius).
    pub class_radius: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSource {
    pub dim: usize,
    /// Explicit row-major matrices; otherwise `random_sets` seeded sets.
    pub explicit: Option<Vec<Vec<f64>>>,
    #[serde(default = "default_sets")]
    pub random_sets: usize,
    #[serde(default = "default_set_size")]
    pub set_size: usize,
    #[serde(default = "neg_one")]
    pub lo: f64,
    #[serde(default = "one")]
    pub hi: f64,
}

fn default_sets() -> usize {
    1
}

fn default_set_size() -> usize {
    3
}

fn neg_one() -> f64 {
    -1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsrSpec {
    #[serde(default = "default_jsr_depth")]
    pub depth: usize,
    #[serde(default = "default_budget")]
    pub budget: usize,
}

fn default_jsr_depth() -> usize {
    8
}

fn default_budget() -> usize {
    4_000_000
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BochiSpec {
    pub c_m: Option<f64>,
    pub d_m: Option<usize>,
    #[serde(default = "default_budget")]
    pub budget: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JtlSpec {
    pub metric: String,
    pub set: Vec<String>,
    #[serde(default = "default_jtl_depth")]
    pub depth: usize,
    #[serde(default = "default_budget")]
    pub budget: usize,
}

fn default_jtl_depth() -> usize {
    6
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundSpec {
    pub formula: String,
    #[serde(default)]
    pub values: BTreeMap<String, f64>,
}

/// Knobs for `scenario acceptance`; the defaults are the documented radii.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcceptanceSpec {
    #[serde(default = "default_true")]
    pub determinism_check: bool,
    #[serde(default = "default_check_workers")]
    pub check_workers: Vec<usize>,
}

fn default_true() -> bool {
    true
}

fn default_check_workers() -> Vec<usize> {
    vec![1, 8]
}

impl Default for AcceptanceSpec {
    fn default() -> Self {
        AcceptanceSpec { determinism_check: true, check_workers: default_check_workers() }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Output directory: config, then the environment, then `mls-out`.
    pub fn out_dir(&self) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("mls-out"))
    }

    pub fn section<'a, S>(&self, s: &'a Option<S>, name: &str) -> Result<&'a S, CliError> {
        s.as_ref().ok_or_else(|| CliError::Config(format!("missing [{name}] section")))
    }

    pub fn census(&self) -> Result<&CensusSpec, CliError> {
        self.section(&self.census, "census")
    }

    pub fn metric(&self, name: &str) -> Result<Arc<MetricHandle<f64>>, CliError> {
        self.build_metric(name, &mut Vec::new())
    }

    fn build_metric(&self, name: &str, stack: &mut Vec<String>) -> Result<Arc<MetricHandle<f64>>, CliError> {
        let field = |f: &str| format!("metrics.{name}.{f}");
        if stack.iter().any(|s| s == name) {
            return Err(CliError::Config(format!("metrics.{name}: circular reference via {}", stack.join(" -> "))));
        }
        let spec = self
            .metrics
            .get(name)
            .ok_or_else(|| CliError::Config(format!("unknown metric '{name}'")))?;
        stack.push(name.to_string());
        let need = |v: &Option<Vec<String>>, f: &str| -> Result<Vec<Word>, CliError> {
            let v = v.as_ref().ok_or_else(|| CliError::Config(format!("{}: required for kind '{}'", field(f), spec.kind)))?;
            words(v, self.rank).map_err(|e| CliError::Config(format!("{}: {e}", field(f))))
        };
        let m = match spec.kind.as_str() {
            "word" => {
                let g = need(&spec.generators, "generators")?;
                MetricHandle::word(GeneratingSet::new(self.rank, &g)?)
            }
            "pullback" => {
                let images = need(&spec.images, "images")?;
                let inverse = need(&spec.inverse_images, "inverse_images")?;
                let inner_name =
                    spec.inner.as_ref().ok_or_else(|| CliError::Config(format!("{}: required", field("inner"))))?;
                let inner = self.build_metric(inner_name, stack)?;
                MetricHandle::pulled_back(Automorphism::new(images, inverse)?, inner)?
            }
            "combination" => {
                let terms = spec.terms.as_ref().ok_or_else(|| CliError::Config(format!("{}: required", field("terms"))))?;
                let mut built = Vec::new();
                for t in terms {
                    built.push((t.coef, self.build_metric(&t.metric, stack)?));
                }
                MetricHandle::combination(built)?
            }
            "matrix-log-norm" => MetricHandle::matrix_log_norm(self.representation(name, spec)?),
            "symmetrized-matrix-log-norm" => MetricHandle::symmetrized_matrix_log_norm(self.representation(name, spec)?),
            "coned-off" => {
                let g = need(&spec.generators, "generators")?;
                let h = need(&spec.subgroup, "subgroup")?;
                MetricHandle::coned_off(GeneratingSet::new(self.rank, &g)?, SubgroupGraph::build(self.rank, &h)?)?
            }
            other => return Err(CliError::Config(format!("{}: unknown kind '{other}'", field("kind")))),
        };
        stack.pop();
        let mut m = m.named(name);
        if let Some(d) = spec.delta {
            m = m.with_delta(d);
        }
        if let Some(a) = spec.alpha_rg {
            m = m.with_alpha_rg(a);
        }
        if let Some(b) = spec.budget {
            if b == 0 {
                return Err(CliError::Config(format!("{}: must be positive", field("budget"))));
            }
            m = m.with_budget(b);
        }
        Ok(Arc::new(m))
    }

    fn representation(&self, name: &str, spec: &MetricSpec) -> Result<Representation<f64>, CliError> {
        if let Some(s) = &spec.schottky {
            if self.rank != 2 {
                return Err(CliError::Config(format!("metrics.{name}.schottky: rank must be 2")));
            }
            return Ok(Representation::schottky(s.stretch, s.angle));
        }
        let rows = spec
            .matrices
            .as_ref()
            .ok_or_else(|| CliError::Config(format!("metrics.{name}: needs 'matrices' or 'schottky'")))?;
        if rows.len() != self.rank {
            return Err(CliError::Config(format!("metrics.{name}.matrices: expected {} matrices", self.rank)));
        }
        let mats = rows.iter().map(|r| square(r)).collect::<Result<Vec<_>, _>>()?;
        Ok(Representation::new(mats)?)
    }

    pub fn filter(&self, f: &FilterSpec) -> Result<Filter<f64>, CliError> {
        let req = |v: Option<f64>, k: &str| v.ok_or_else(|| CliError::Config(format!("filter.{k}: required for kind '{}'", f.kind)));
        Ok(match f.kind.as_str() {
            "all" => Filter::All,
            "commutator" => Filter::CommutatorSubgroup,
            "homology" => {
                let c = f.class.clone().ok_or_else(|| CliError::Config("filter.class: required".into()))?;
                if c.len() != self.rank {
                    return Err(CliError::Config(format!("filter.class: expected {} entries", self.rank)));
                }
                Filter::HomologyClass(c)
            }
            "subgroup" => {
                let g = f.generators.as_ref().ok_or_else(|| CliError::Config("filter.generators: required".into()))?;
                Filter::subgroup(self.rank, &words(g, self.rank).map_err(|e| CliError::Config(format!("filter.generators: {e}")))?)?
            }
            "tolerance" => Filter::tolerance(f.c.unwrap_or(1.0), f.p.unwrap_or(0.5))?,
            "equality" => Filter::Equality { v: req(f.v, "v")?, v_star: req(f.v_star, "v_star")?, tol: f.tol.unwrap_or(1e-9) },
            other => return Err(CliError::Config(format!("filter.kind: unknown '{other}'"))),
        })
    }

    pub fn matrix_sets(&self) -> Result<Vec<MatrixSet<f64>>, CliError> {
        let src = self.section(&self.matrices, "matrices")?;
        if let Some(rows) = &src.explicit {
            let mats = rows.iter().map(|r| square(r)).collect::<Result<Vec<_>, _>>()?;
            if mats.iter().any(|m| m.dim() != src.dim) {
                return Err(CliError::Config(format!("matrices.explicit: expected {0}x{0} matrices", src.dim)));
            }
            return Ok(vec![MatrixSet::new(mats)?]);
        }
        Ok((0..src.random_sets)
            .map(|i| mls_core::spectral::random_matrix_set(self.seed, i as u64, src.set_size, src.dim, src.lo, src.hi))
            .collect())
    }
}

fn words(v: &[String], rank: usize) -> Result<Vec<Word>, mls_core::Error> {
    let alphabet = mls_core::Alphabet::new(rank)?;
    v.iter().map(|s| alphabet.parse(s)).collect()
}

fn square(r: &[f64]) -> Result<Matrix<f64>, CliError> {
    let n = (r.len() as f64).sqrt().round() as usize;
    Matrix::from_row_major(n, r.to_vec()).map_err(|e| CliError::Config(format!("matrix: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metrics_resolve_by_name() {
        let cfg = RunConfig::parse(
            r#"
            [metrics.S]
            kind = "word"
            generators = ["a", "b"]
            [metrics.phi]
            kind = "pullback"
            images = ["a", "ba"]
            inverse_images = ["a", "bA"]
            inner = "S"
            [metrics.mix]
            kind = "combination"
            terms = [{ coef = 1.0, metric = "S" }, { coef = 0.5, metric = "phi" }]
            "#,
        )
        .unwrap();
        let m = cfg.metric("mix").unwrap();
        assert_eq!(m.distance(&Word::parse("b").unwrap()).unwrap(), 2.0);
        assert_eq!(m.name(), "mix");
    }

    #[test]
    fn diagnostics_name_the_field() {
        let err = RunConfig::parse("[metrics.S]\nkind = \"word\"\n").unwrap().metric("S").unwrap_err();
        assert!(err.to_string().contains("metrics.S.generators"), "{err}");
        let err = RunConfig::parse("rank = 2\nbogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
        let err = RunConfig::parse("[metrics.a]\nkind = \"pullback\"\nimages=[\"a\",\"b\"]\ninverse_images=[\"a\",\"b\"]\ninner=\"a\"\n")
            .unwrap()
            .metric("a")
            .unwrap_err();
        assert!(err.to_string().contains("circular"), "{err}");
    }

    #[test]
    fn out_dir_precedence() {
        let cfg = RunConfig::parse("out_dir = \"x\"").unwrap();
        assert_eq!(cfg.out_dir(), PathBuf::from("x"));
    }
}
