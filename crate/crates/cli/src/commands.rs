use std::collections::BTreeMap;
use std::sync::Arc;

use mls_core::census::{
    ball_counts, basis_sphere_counts, correlation_census, enumerate_conjugacy_with, enumerate_elements,
    growth_rate_window, intersection_number, ConjCensus, CorrelationMode, ElementCensus, Filter, GrowthEstimate,
};
use mls_core::manhattan::{beta, check_bounds, dilation, eta_bracket, sample_theta, uniform_grid, CurveSamples};
use mls_core::metrics::MetricHandle;
use mls_core::spectral::{
    bochi_bound, butt_constants, geometry_bounds, joint_translation_length, jsr_estimate, rigidity_bound_anosov,
    rigidity_bound_hyperbolic, ButtInputs, GeometryInputs, DEFAULT_K,
};
use mls_core::Error;
use serde::Serialize;
use serde_json::json;

use crate::config::{BoundSpec, RunConfig};
use crate::{acceptance, CliError, Outputs};

/// Radius of the exact (automaton) ball counts used to estimate v when the
/// metric supports them.
const AUTOMATON_RADIUS: usize = 40;

type Handle = Arc<MetricHandle<f64>>;

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Ball,
    Conj,
    Growth,
    Curve,
    Beta,
    Dilation,
    Tau,
    Correlate,
    Jsr,
    Bochi,
    Jtl,
    Bound,
    Scenario(String),
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Scenario(s) => format!("scenario {s}"),
            other => format!("{other:?}").to_lowercase(),
        }
    }
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<Outputs, CliError> {
    match cmd {
        Command::Ball => ball(cfg),
        Command::Conj => conj(cfg),
        Command::Growth => growth(cfg),
        Command::Curve => curve(cfg).map(|(o, _)| o),
        Command::Beta => beta_cmd(cfg),
        Command::Dilation => dilation_cmd(cfg),
        Command::Tau => tau(cfg),
        Command::Correlate => correlate(cfg),
        Command::Jsr => jsr(cfg),
        Command::Bochi => bochi(cfg),
        Command::Jtl => jtl(cfg),
        Command::Bound => bound(cfg.section(&cfg.bound, "bound")?),
        Command::Scenario(name) if name == "acceptance" => acceptance::run(cfg),
        Command::Scenario(name) => Err(CliError::Config(format!("unknown scenario '{name}' (known: acceptance)"))),
    }
}

fn metrics(cfg: &RunConfig) -> Result<(Handle, Option<Handle>), CliError> {
    let c = cfg.census()?;
    let star = c.star.as_ref().map(|s| cfg.metric(s)).transpose()?;
    Ok((cfg.metric(&c.metric)?, star))
}

fn need_star(star: Option<Handle>) -> Result<Handle, CliError> {
    star.ok_or_else(|| CliError::Config("census.star: required for this subcommand".into()))
}

fn elements(cfg: &RunConfig) -> Result<ElementCensus<f64>, CliError> {
    let (m, star) = metrics(cfg)?;
    let c = enumerate_elements(&m, cfg.census()?.radius)?;
    Ok(match star {
        Some(s) => c.with_star(&s)?,
        None => c,
    })
}

fn classes(cfg: &RunConfig) -> Result<ConjCensus<f64>, CliError> {
    let (m, star) = metrics(cfg)?;
    let spec = cfg.census()?;
    let c = enumerate_conjugacy_with(&m, spec.radius, spec.bracket_depth)?;
    Ok(match star {
        Some(s) => c.with_star(&s, spec.bracket_depth)?,
        None => c,
    })
}

/// Growth rate of a metric: exact finite-state ball counts when available,
/// otherwise the element census at `radius`.
pub fn metric_growth(m: &MetricHandle<f64>, radius: f64) -> Result<GrowthEstimate<f64>, CliError> {
    match ball_counts::<f64>(m, AUTOMATON_RADIUS) {
        Ok(counts) => Ok(growth_rate_window(&counts, mls_core::census::DEFAULT_WINDOW)?),
        Err(Error::Unsupported(_)) => Ok(growth_rate_window(&enumerate_elements(m, radius)?.counts(), mls_core::census::DEFAULT_WINDOW)?),
        Err(e) => Err(e.into()),
    }
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> mls_core::Result<()>) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn ball(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let c = elements(cfg)?;
    let mut out = Outputs::default();
    out.raw("census.csv", csv_bytes(|b| c.write_csv(b))?);
    out.counts("counts.csv", &c.counts())?;
    out.summary = format!("ball: {} elements with d <= {}", c.len(), c.radius);
    Ok(out)
}

fn conj(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let c = classes(cfg)?;
    let mut out = Outputs::default();
    out.raw("classes.csv", csv_bytes(|b| c.write_csv(b))?);
    out.counts("counts.csv", &c.counts())?;
    out.summary = format!(
        "conj: {} classes with length <= {} ({})",
        c.len(),
        c.radius,
        if c.complete { "complete" } else { "bracketed" }
    );
    Ok(out)
}

fn growth(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let g = cfg.section(&cfg.growth, "growth")?;
    let spec = cfg.census()?;
    let filter = g.filter.as_ref().map(|f| cfg.filter(f)).transpose()?.unwrap_or(Filter::All);
    let counts = match g.source.as_str() {
        "elements" => elements(cfg)?.filtered_counts(&filter)?,
        "classes" => classes(cfg)?.filtered_counts(&filter)?,
        "stream" => {
            if !cfg.metric(&spec.metric)?.is_standard_basis() {
                return Err(Error::NotABasis.into());
            }
            basis_sphere_counts(cfg.rank, spec.radius.floor() as usize, &filter)?
        }
        "automaton" => {
            if !matches!(filter, Filter::All) {
                return Err(CliError::Config("growth.filter: the automaton source counts whole balls only".into()));
            }
            ball_counts(&*cfg.metric(&spec.metric)?, spec.radius.floor() as usize)?
        }
        other => return Err(CliError::Config(format!("growth.source: unknown '{other}'"))),
    };
    let est = growth_rate_window(&counts, g.window)?;
    let mut out = Outputs::default();
    out.counts("counts.csv", &counts)?;
    out.json("growth.json", &json!({ "source": g.source, "estimate": est }))?;
    out.summary = format!("growth: rate {:.12} ({} source, width {})", est.rate, g.source, est.width);
    Ok(out)
}

fn curve(cfg: &RunConfig) -> Result<(Outputs, CurveSamples<f64>), CliError> {
    let spec = cfg.section(&cfg.curve, "curve")?;
    let (m, star) = metrics(cfg)?;
    let star = need_star(star)?;
    let radius = cfg.census()?.radius;
    let v = match spec.v {
        Some(v) => v,
        None => metric_growth(&m, radius)?.rate,
    };
    let v_star = match spec.v_star {
        Some(v) => v,
        None => metric_growth(&star, radius)?.rate,
    };
    if spec.points < 3 {
        return Err(CliError::Config("curve.points: need at least 3".into()));
    }
    let grid = uniform_grid(spec.a_min, spec.a_max.unwrap_or(v_star), spec.points);
    let c = enumerate_elements(&m, radius)?.with_star(&star)?;
    let samples = sample_theta(&c, &grid, v, v_star)?;
    let mut out = Outputs::default();
    out.raw("curve.csv", csv_bytes(|b| samples.write_csv(b))?);
    let defect = samples.convexity_defects().into_iter().fold(f64::NEG_INFINITY, f64::max);
    out.json("curve.json", &json!({ "v": v, "v_star": v_star, "radius": radius, "max_convexity_defect": defect }))?;
    out.summary = format!("curve: {} points, v = {v:.6}, v* = {v_star:.6}", samples.len());
    Ok((out, samples))
}

fn beta_cmd(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let (mut out, samples) = curve(cfg)?;
    let d = dilation(&classes(cfg)?)?;
    let report = beta(&samples)?.with_dilation(d);
    let exact = cfg.beta.as_ref().and_then(|b| b.exact_delta);
    let check = check_bounds(&report, exact);
    out.json("beta.json", &json!({ "report": report, "check": check }))?;
    out.summary = format!("beta: {:.6} (normalized {:.6}), alpha_sym {:.6}", report.beta, report.beta_bar, report.alpha_sym);
    Ok(out)
}

fn dilation_cmd(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let c = classes(cfg)?;
    if c.rows.first().is_some_and(|r| r.ell_star.is_none()) {
        return Err(CliError::Config("census.star: required for this subcommand".into()));
    }
    let d = dilation(&c)?;
    let mut out = Outputs::default();
    out.json("dilation.json", &d)?;
    out.summary = format!("dilation: Dil(d,d*) >= {:.6}, Dil(d*,d) >= {:.6}, Delta >= {:.6}", d.dil_ab, d.dil_ba, d.delta);
    Ok(out)
}

fn tau(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let (_, star) = metrics(cfg)?;
    need_star(star)?;
    let tau = intersection_number(&elements(cfg)?)?;
    let mut out = Outputs::default();
    let mut report = json!({ "intersection": tau });
    if let Some(t) = &cfg.tau {
        if let (Some(c), Some(p)) = (t.c, t.p) {
            let classes = classes(cfg)?;
            let eta = eta_bracket(&classes, &Filter::All, c, p, tau.tau, 1e-9)?;
            report["eta"] = serde_json::to_value(&eta).map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    out.json("tau.json", &report)?;
    out.summary = format!("tau: {:.6} at T = {} ({:.6} one step earlier)", tau.tau, tau.radius, tau.tau_prev);
    Ok(out)
}

fn correlate(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let spec = cfg.section(&cfg.correlate, "correlate")?;
    let (m, star) = metrics(cfg)?;
    let star = need_star(star)?;
    let radius = cfg.census()?.radius;
    let v = match spec.v {
        Some(v) => v,
        None => metric_growth(&m, radius)?.rate,
    };
    let v_star = match spec.v_star {
        Some(v) => v,
        None => metric_growth(&star, radius)?.rate,
    };
    let mode = match spec.mode.as_str() {
        "equality" => CorrelationMode::Equality { tol: spec.tol },
        "tolerance" => CorrelationMode::Tolerance { c: spec.c, p: spec.p },
        other => return Err(CliError::Config(format!("correlate.mode: unknown '{other}'"))),
    };
    let counts = correlation_census(&classes(cfg)?, v, v_star, mode)?;
    let est = growth_rate_window(&counts, cfg.growth.as_ref().map_or(mls_core::census::DEFAULT_WINDOW, |g| g.window))?;
    let mut out = Outputs::default();
    out.counts("counts.csv", &counts)?;
    out.json("correlate.json", &json!({ "mode": spec.mode, "v": v, "v_star": v_star, "estimate": est }))?;
    out.summary = format!("correlate: growth of the correlated classes {:.6} (v = {v:.6})", est.rate);
    Ok(out)
}

fn jsr(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let spec = cfg.section(&cfg.jsr, "jsr")?;
    let sets = cfg.matrix_sets()?;
    let mut rows = Vec::new();
    let mut csv = String::from("set,lower,upper\n");
    for (i, s) in sets.iter().enumerate() {
        let e = jsr_estimate(s, spec.depth, spec.budget)?;
        csv.push_str(&format!("{i},{},{}\n", e.lower, e.upper));
        rows.push(e);
    }
    let mut out = Outputs::default();
    out.raw("jsr.csv", csv.into_bytes());
    out.json("jsr.json", &rows)?;
    out.summary = format!("jsr: {} sets at depth {}", rows.len(), spec.depth);
    Ok(out)
}

fn bochi(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let spec = cfg.section(&cfg.bochi, "bochi")?;
    let depth = cfg.jsr.as_ref().map_or(8, |j| j.depth);
    let sets = cfg.matrix_sets()?;
    let mut rows = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        let b = bochi_bound(s, spec.c_m, spec.d_m, spec.budget, cfg.seed.wrapping_add(i as u64))?;
        let j = jsr_estimate(s, depth, spec.budget)?;
        rows.push(json!({ "set": i, "jsr": j, "bochi": b, "holds": b.value >= j.upper - 1e-9 }));
    }
    let subsampled = rows.iter().filter(|r| r["bochi"]["exhaustive"] == false).count();
    let mut out = Outputs::default();
    out.json("bochi.json", &rows)?;
    out.summary = format!("bochi: {} sets, {subsampled} with a subsampled right-hand side", rows.len());
    Ok(out)
}

fn jtl(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let spec = cfg.section(&cfg.jtl, "jtl")?;
    let m = cfg.metric(&spec.metric)?;
    let alphabet = mls_core::Alphabet::new(cfg.rank)?;
    let set = spec
        .set
        .iter()
        .map(|s| alphabet.parse(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Config(format!("jtl.set: {e}")))?;
    let e = joint_translation_length(&m, &set, spec.depth, spec.budget)?;
    let mut out = Outputs::default();
    out.json("jtl.json", &e)?;
    out.summary = format!("jtl: [{:.6}, {:.6}] at depth {}", e.lower, e.upper, e.depth);
    Ok(out)
}

/// Parses `key=value` pairs given after the formula name.
pub fn inline_bound(formula: &str, pairs: &[String]) -> Result<BoundSpec, CliError> {
    let mut values = BTreeMap::new();
    for p in pairs {
        let (k, v) = p.split_once('=').ok_or_else(|| CliError::Config(format!("bound: expected key=value, got '{p}'")))?;
        let x: f64 = v.parse().map_err(|_| CliError::Config(format!("bound.{k}: not a number: '{v}'")))?;
        values.insert(k.to_string(), x);
    }
    Ok(BoundSpec { formula: formula.to_string(), values })
}

#[derive(Serialize)]
struct Report<V: Serialize> {
    formula: String,
    inputs: BTreeMap<String, f64>,
    value: V,
}

pub fn bound(spec: &BoundSpec) -> Result<Outputs, CliError> {
    let known: &[&str] = match spec.formula.as_str() {
        "rigidity-hyperbolic" => &["L", "eta", "alpha", "delta", "K"],
        "rigidity-anosov" => &["L", "eta", "alpha", "m", "c_m", "d_m"],
        "geometry" => &["n", "simplicial_volume", "lambda", "Lambda", "i_g", "C_n"],
        "butt" => &["n", "simplicial_volume", "lambda", "Lambda", "i_g", "C_n", "eps0", "K", "R"],
        other => {
            return Err(CliError::Config(format!(
                "bound.formula: unknown '{other}' (known: rigidity-hyperbolic, rigidity-anosov, geometry, butt)"
            )))
        }
    };
    if let Some(k) = spec.values.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(CliError::Config(format!("bound.{k}: not an input of '{}' (inputs: {})", spec.formula, known.join(", "))));
    }
    let get = |k: &str| spec.values.get(k).copied().ok_or_else(|| CliError::Config(format!("bound.{k}: required")));
    let int = |k: &str| -> Result<usize, CliError> {
        let x = get(k)?;
        if x < 0.0 || x.fract() != 0.0 {
            return Err(CliError::Config(format!("bound.{k}: must be a non-negative integer")));
        }
        Ok(x as usize)
    };
    let geometry = || -> Result<GeometryInputs<f64>, CliError> {
        Ok(GeometryInputs {
            n: int("n")?,
            simplicial_volume: get("simplicial_volume")?,
            lambda: get("lambda")?,
            big_lambda: get("Lambda")?,
            i_g: get("i_g")?,
            c_n: get("C_n")?,
        })
    };
    let mut out = Outputs::default();
    let mut inputs = spec.values.clone();
    let value = match spec.formula.as_str() {
        "rigidity-hyperbolic" => {
            let k = spec.values.get("K").copied().unwrap_or(DEFAULT_K);
            inputs.insert("K".into(), k);
            let r = rigidity_bound_hyperbolic(get("L")?, get("eta")?, get("alpha")?, get("delta")?, k)?;
            serde_json::to_value(r.value)
        }
        "rigidity-anosov" => {
            let d_m = if spec.values.contains_key("d_m") { Some(int("d_m")?) } else { None };
            let r = rigidity_bound_anosov(get("L")?, get("eta")?, get("alpha")?, int("m")?, spec.values.get("c_m").copied(), d_m)?;
            for nv in &r.inputs {
                inputs.insert(nv.name.clone(), nv.value);
            }
            serde_json::to_value(r.value)
        }
        "geometry" => serde_json::to_value(geometry_bounds(&geometry()?)?),
        _ => {
            let b = ButtInputs { geometry: geometry()?, eps0: get("eps0")?, k: get("K")?, r: get("R")? };
            serde_json::to_value(butt_constants(&b)?)
        }
    }
    .map_err(|e| CliError::Io(e.to_string()))?;
    out.summary = format!("bound {}: {}", spec.formula, value);
    out.json("bound.json", &Report { formula: spec.formula.clone(), inputs, value })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_hyperbolic_bound_is_two() {
        let spec = inline_bound("rigidity-hyperbolic", &["L=4", "eta=1", "alpha=0", "delta=0", "K=38"].map(String::from)).unwrap();
        let out = bound(&spec).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&out.files["bound.json"]).unwrap();
        assert_eq!(v["value"].as_f64(), Some(2.0));
        assert!(inline_bound("rigidity-hyperbolic", &["L4".into()]).is_err());
        let bad = inline_bound("rigidity-hyperbolic", &["L=4".into(), "x=1".into()]).unwrap();
        assert_eq!(bound(&bad).unwrap_err().exit_code(), 1);
        let pre = inline_bound("rigidity-hyperbolic", &["L=2", "eta=1", "alpha=0", "delta=0"].map(String::from)).unwrap();
        assert_eq!(bound(&pre).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn growth_of_the_basis_ball() {
        let cfg = RunConfig::parse(
            r#"
            [metrics.S]
            kind = "word"
            generators = ["a", "b"]
            [census]
            metric = "S"
            radius = 8
            [growth]
            source = "elements"
            "#,
        )
        .unwrap();
        let out = run(&Command::Growth, &cfg).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&out.files["growth.json"]).unwrap();
        assert!((v["estimate"]["rate"].as_f64().unwrap() - 3f64.ln()).abs() < 1e-9);
        assert!(String::from_utf8(out.files["counts.csv"].clone()).unwrap().starts_with("T,N\n"));
    }

    #[test]
    fn budget_maps_to_exit_three() {
        let cfg = RunConfig::parse(
            r#"
            [metrics.S]
            kind = "word"
            generators = ["a", "b"]
            budget = 100
            [census]
            metric = "S"
            radius = 10
            "#,
        )
        .unwrap();
        assert_eq!(run(&Command::Ball, &cfg).unwrap_err().exit_code(), 3);
    }
}
