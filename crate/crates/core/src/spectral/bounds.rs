use serde::Serialize;

use super::jsr::{default_c_m, default_d_m};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Placeholder for the universal constant of the hyperbolic rigidity
/// estimate, which has no published numeric value. Always overridable.
pub const DEFAULT_K: f64 = 38.0;

#[derive(Clone, Debug, Serialize)]
pub struct NamedValue<T> {
    pub name: String,
    pub value: T,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport<T> {
    pub formula: String,
    pub inputs: Vec<NamedValue<T>>,
    pub value: T,
}

fn named<T: Scalar>(pairs: &[(&str, T)]) -> Vec<NamedValue<T>> {
    pairs.iter().map(|&(n, v)| NamedValue { name: n.to_string(), value: v }).collect()
}

fn positive<T: Scalar>(name: &str, x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::PreconditionViolated(format!("{name} must be positive and finite, got {x}")))
    }
}

/// Projective Anosov approximate rigidity:
/// c_m d_m / (L − d_m(α+1)) + η L / (L − d_m(α+1)).
pub fn rigidity_bound_anosov<T: Scalar>(
    l: T,
    eta: T,
    alpha_rg: T,
    m: usize,
    c_m: Option<T>,
    d_m: Option<usize>,
) -> Result<BoundReport<T>> {
    let c = c_m.unwrap_or_else(|| default_c_m(m));
    let d = T::of_usize(d_m.unwrap_or_else(|| default_d_m(m)));
    positive("eta", eta)?;
    if alpha_rg < T::zero() {
        return Err(Error::PreconditionViolated("alpha_rg must be non-negative".into()));
    }
    let gap = l - d * (alpha_rg + T::one());
    if !(gap > T::zero()) {
        return Err(Error::PreconditionViolated(format!("L = {l} must exceed d_m(alpha+1) = {}", d * (alpha_rg + T::one()))));
    }
    Ok(BoundReport {
        formula: "rigidity-anosov".into(),
        inputs: named(&[("L", l), ("eta", eta), ("alpha", alpha_rg), ("m", T::of_usize(m)), ("c_m", c), ("d_m", d)]),
        value: c * d / gap + eta * l / gap,
    })
}

/// Hyperbolic approximate rigidity: 2Kδ/(L − 2(α+1)) + η L/(L − 2(α+1)).
pub fn rigidity_bound_hyperbolic<T: Scalar>(l: T, eta: T, alpha_rg: T, delta: T, k: T) -> Result<BoundReport<T>> {
    positive("eta", eta)?;
    if alpha_rg < T::zero() || delta < T::zero() || k < T::zero() {
        return Err(Error::PreconditionViolated("alpha, delta and K must be non-negative".into()));
    }
    let two = T::cst(2.0);
    let gap = l - two * (alpha_rg + T::one());
    if !(gap > T::zero()) {
        return Err(Error::PreconditionViolated(format!("L = {l} must exceed 2(alpha+1) = {}", two * (alpha_rg + T::one()))));
    }
    Ok(BoundReport {
        formula: "rigidity-hyperbolic".into(),
        inputs: named(&[("L", l), ("eta", eta), ("alpha", alpha_rg), ("delta", delta), ("K", k)]),
        value: two * k * delta / gap + eta * l / gap,
    })
}

/// Geometric data of a closed negatively curved manifold with sectional
/// curvature in [−Λ², −λ²].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GeometryInputs<T> {
    pub n: usize,
    pub simplicial_volume: T,
    pub lambda: T,
    pub big_lambda: T,
    pub i_g: T,
    pub c_n: T,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GeometryBounds<T> {
    pub volume: T,
    pub diameter: T,
    /// Rough-geodesic constant of the orbit metric, 2·diameter + 1.
    pub roughness: T,
    pub growth_lower: T,
    pub growth_upper: T,
    pub delta: T,
    pub alpha_rg: T,
}

fn check_geometry<T: Scalar>(g: &GeometryInputs<T>) -> Result<()> {
    if g.n < 2 {
        return Err(Error::PreconditionViolated("dimension n must be at least 2".into()));
    }
    positive("simplicial_volume", g.simplicial_volume)?;
    positive("lambda", g.lambda)?;
    positive("Lambda", g.big_lambda)?;
    positive("i_g", g.i_g)?;
    positive("C_n", g.c_n)?;
    if g.big_lambda < g.lambda {
        return Err(Error::PreconditionViolated("Lambda must be at least lambda".into()));
    }
    Ok(())
}

pub fn geometry_bounds<T: Scalar>(g: &GeometryInputs<T>) -> Result<GeometryBounds<T>> {
    check_geometry(g)?;
    let n = T::of_usize(g.n);
    let vol = g.c_n * g.simplicial_volume * g.lambda.powf(-n);
    let diam = vol * g.i_g.powf(T::one() - n);
    let rough = T::cst(2.0) * diam + T::one();
    Ok(GeometryBounds {
        volume: vol,
        diameter: diam,
        roughness: rough,
        growth_lower: g.lambda / g.c_n,
        growth_upper: g.big_lambda * (n - T::one()),
        delta: g.big_lambda / g.lambda * (n - T::one()) * T::LN_2(),
        alpha_rg: g.big_lambda * (n - T::one()) * rough,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ButtInputs<T> {
    pub geometry: GeometryInputs<T>,
    pub eps0: T,
    pub k: T,
    pub r: T,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ButtConstants<T> {
    pub l_hat_star: T,
    pub l_hat: T,
    pub p: T,
    pub c_lower: T,
    pub c_upper: T,
    pub c: T,
    pub l0: T,
}

/// Constants of the approximate marked length spectrum rigidity for
/// negatively curved manifolds. `l_hat` uses the injectivity radius exponent
/// n − 1 exactly as printed in the source formula.
pub fn butt_constants<T: Scalar>(b: &ButtInputs<T>) -> Result<ButtConstants<T>> {
    let g = &b.geometry;
    check_geometry(g)?;
    if !(b.eps0 > T::zero() && b.eps0 < T::one()) {
        return Err(Error::PreconditionViolated(format!("eps0 must lie in (0,1), got {}", b.eps0)));
    }
    positive("R", b.r)?;
    if b.k < T::zero() {
        return Err(Error::PreconditionViolated("K must be non-negative".into()));
    }
    let one = T::one();
    let two = T::cst(2.0);
    let n = T::of_usize(g.n);
    let base = two * g.c_n * g.simplicial_volume * g.lambda.powf(-n);
    let l_hat_star = base * ((one - b.eps0) * g.i_g).powf(one - n) + two;
    let l_hat = base * g.i_g.powf(n - one) + two;
    let k_term = two * b.k / g.lambda * T::LN_2();
    let c_lower = two * (l_hat_star / (one - b.eps0) + k_term);
    let c_upper = two * b.r * (l_hat * (one + b.eps0) + k_term);
    let p = (one - b.eps0).recip() + c_lower / (two * l_hat_star);
    let l0 = two * (b.r * l_hat).max(l_hat_star).max((one - b.eps0) * g.i_g) + one;
    Ok(ButtConstants { l_hat_star, l_hat, p, c_lower, c_upper, c: c_lower.max(c_upper), l0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_geometry() -> GeometryInputs<f64> {
        GeometryInputs { n: 2, simplicial_volume: 1.0, lambda: 1.0, big_lambda: 1.0, i_g: 1.0, c_n: 1.0 }
    }

    #[test]
    fn hyperbolic_plug_ins() {
        let r = rigidity_bound_hyperbolic::<f64>(4.0, 1.0, 0.0, 0.0, 38.0).unwrap();
        assert_eq!(r.value, 2.0);
        let r = rigidity_bound_hyperbolic::<f64>(100.0, 1.0, 0.0, 0.0, 38.0).unwrap();
        assert!((r.value - 100.0 / 98.0).abs() < 1e-15);
        assert!(rigidity_bound_hyperbolic(2.0, 1.0, 0.0, 0.0, 38.0).is_err());
    }

    #[test]
    fn anosov_plug_in() {
        let r = rigidity_bound_anosov(32.0, 1.0, 0.0, 2, None, None).unwrap();
        assert!((r.value - (13.0 * 2f64.ln() + 2.0)).abs() < 1e-12);
        let far = rigidity_bound_anosov(1e6, 1e-9, 0.0, 2, None, None).unwrap();
        assert!(far.value < 1e-3);
        assert!(rigidity_bound_anosov(16.0, 1.0, 0.0, 2, None, None).is_err());
    }

    #[test]
    fn bounds_dominate_eta() {
        for l in [40.0, 80.0, 1000.0] {
            assert!(rigidity_bound_anosov(l, 0.7, 0.5, 2, None, None).unwrap().value > 0.7);
            assert!(rigidity_bound_hyperbolic(l, 0.7, 0.5, 1.0, 38.0).unwrap().value > 0.7);
        }
    }

    #[test]
    fn geometry_unit_case() {
        let g = geometry_bounds(&unit_geometry()).unwrap();
        assert!((g.delta - 2f64.ln()).abs() < 1e-15);
        assert_eq!(g.alpha_rg, 3.0);
        assert_eq!((g.growth_lower, g.growth_upper), (1.0, 1.0));
        assert_eq!((g.volume, g.diameter, g.roughness), (1.0, 1.0, 3.0));
    }

    #[test]
    fn geometry_scaling_and_monotonicity() {
        let mut g = unit_geometry();
        g.n = 3;
        let a = geometry_bounds(&g).unwrap();
        g.lambda = 2.0;
        g.big_lambda = 2.0;
        let b = geometry_bounds(&g).unwrap();
        assert!((a.delta - b.delta).abs() < 1e-15);
        let mut h = unit_geometry();
        h.n = 3;
        h.i_g = 0.5;
        assert!(geometry_bounds(&h).unwrap().alpha_rg > a.alpha_rg);
    }

    #[test]
    fn butt_plug_in() {
        let b = ButtInputs { geometry: unit_geometry(), eps0: 0.5, k: 1.0, r: 1.0 };
        let c = butt_constants(&b).unwrap();
        // n = 2: L̂* = 2·(0.5)^(-1) + 2 = 6, L̂ = 2·1 + 2 = 4
        assert!((c.l_hat_star - 6.0).abs() < 1e-12);
        assert!((c.l_hat - 4.0).abs() < 1e-12);
        let kt = 2.0 * 2f64.ln();
        assert!((c.c_lower - 2.0 * (12.0 + kt)).abs() < 1e-12);
        assert!((c.c_upper - 2.0 * (6.0 + kt)).abs() < 1e-12);
        assert_eq!(c.c, c.c_lower);
        assert!((c.l0 - 13.0).abs() < 1e-12);
        assert!((c.p - (2.0 + (12.0 + kt) / 6.0)).abs() < 1e-12);
        assert!(c.l0 > c.l_hat_star);
    }

    #[test]
    fn butt_c_lower_increases_in_eps0() {
        let mut prev = 0.0;
        for e in [0.05, 0.2, 0.5, 0.9] {
            let c = butt_constants(&ButtInputs { geometry: unit_geometry(), eps0: e, k: 38.0, r: 2.0 }).unwrap();
            assert!(c.c_lower > prev);
            prev = c.c_lower;
        }
    }
}
