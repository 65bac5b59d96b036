use serde::Serialize;

use super::dilation::DilationReport;
use super::theta::CurveSamples;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// β̄ at or below this counts as rough similarity; also the boundary tolerance
/// behind `GridTooCoarse`.
pub const SIMILARITY_TOL: f64 = 0.01;

#[derive(Clone, Debug, Serialize)]
pub struct BetaReport<T> {
    pub beta: T,
    pub beta_bar: T,
    /// Maximizer in original units, ξ ∈ [0, v*].
    pub xi: T,
    /// ξ + θ(ξ) after rescaling both metrics to unit growth.
    pub alpha_sym: T,
    pub rough_similarity: bool,
    pub dil_ab: Option<T>,
    pub dil_ba: Option<T>,
    pub delta_thurston: Option<T>,
    pub tanh_bound: Option<T>,
    pub dilation: Option<DilationReport<T>>,
}

/// Cubic Hermite interpolant through (x_i, y_i) with centered-difference slopes.
struct Hermite<T> {
    x: Vec<T>,
    y: Vec<T>,
    m: Vec<T>,
}

impl<T: Scalar> Hermite<T> {
    fn new(x: Vec<T>, y: Vec<T>) -> Self {
        let n = x.len();
        let m = (0..n)
            .map(|i| {
                let (a, b) = (i.saturating_sub(1), (i + 1).min(n - 1));
                (y[b] - y[a]) / (x[b] - x[a])
            })
            .collect();
        Hermite { x, y, m }
    }

    fn eval(&self, t: T) -> T {
        let n = self.x.len();
        let j = self.x.iter().position(|&x| x >= t).unwrap_or(n - 1).clamp(1, n - 1);
        let h = self.x[j] - self.x[j - 1];
        let s = ((t - self.x[j - 1]) / h).max(T::zero()).min(T::one());
        let (s2, s3) = (s * s, s * s * s);
        let two = T::cst(2.0);
        let three = T::cst(3.0);
        let h00 = two * s3 - three * s2 + T::one();
        let h10 = s3 - two * s2 + s;
        let h01 = three * s2 - two * s3;
        let h11 = s3 - s2;
        h00 * self.y[j - 1] + h10 * h * self.m[j - 1] + h01 * self.y[j] + h11 * h * self.m[j]
    }

    /// Golden-section maximization on [lo, hi].
    fn argmax(&self, mut lo: T, mut hi: T) -> T {
        let r = (T::cst(5.0).sqrt() - T::one()) / T::cst(2.0);
        let mut c = hi - r * (hi - lo);
        let mut d = lo + r * (hi - lo);
        let (mut fc, mut fd) = (self.eval(c), self.eval(d));
        for _ in 0..200 {
            if hi - lo <= T::cst(1e-12) {
                break;
            }
            if fc >= fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - r * (hi - lo);
                fc = self.eval(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + r * (hi - lo);
                fd = self.eval(d);
            }
        }
        (lo + hi) / T::cst(2.0)
    }
}

/// β from a sampled curve, in the normalized form: with s = a/v* and
/// θ̃(s) = θ(a)/v, β̄ = sup over s ∈ [0,1] of 1 − s − θ̃(s), β = v·β̄.
/// The sup is located on the grid and refined on a cubic interpolant;
/// αSym = ξ̃ + θ̃(ξ̃) = 1 − β̄ at the maximizer.
pub fn beta<T: Scalar>(curve: &CurveSamples<T>) -> Result<BetaReport<T>> {
    let (v, vs) = (curve.v, curve.v_star);
    if !(v > T::zero() && vs > T::zero()) {
        return Err(Error::PreconditionViolated("growth rates must be positive".into()));
    }
    let eps = T::cst(1e-9);
    if curve.len() < 3 || curve.grid[0].abs() > eps || *curve.grid.last().unwrap() < vs - eps {
        return Err(Error::PreconditionViolated(format!("grid must cover [0, v*] = [0, {vs}] with at least 3 points")));
    }
    let (mut s, mut g) = (Vec::new(), Vec::new());
    for (&a, &th) in curve.grid.iter().zip(&curve.theta) {
        if a <= vs + eps {
            let si = (a / vs).min(T::one());
            s.push(si);
            g.push(T::one() - si - th / v);
        }
    }
    let n = s.len();
    let mut best = 0;
    for i in 1..n {
        if g[i] > g[best] {
            best = i;
        }
    }
    let tol = T::cst(SIMILARITY_TOL);
    let at_edge = best == 0 || best == n - 1;
    if at_edge && g[best] > tol {
        return Err(Error::GridTooCoarse);
    }
    let interp = Hermite::new(s.clone(), g.clone());
    let (lo, hi) = (s[best.saturating_sub(1)], s[(best + 1).min(n - 1)]);
    let mut xi = interp.argmax(lo, hi);
    let mut gx = interp.eval(xi);
    if gx < g[best] {
        xi = s[best];
        gx = g[best];
    }
    let beta_bar = gx.max(T::zero());
    Ok(BetaReport {
        beta: v * beta_bar,
        beta_bar,
        xi: xi * vs,
        alpha_sym: T::one() - gx,
        rough_similarity: beta_bar <= tol,
        dil_ab: None,
        dil_ba: None,
        delta_thurston: None,
        tanh_bound: None,
        dilation: None,
    })
}

impl<T: Scalar> BetaReport<T> {
    /// Attaches census dilations and the derived Δ̂ and tanh(Δ̂/4).
    pub fn with_dilation(mut self, d: DilationReport<T>) -> Self {
        self.dil_ab = Some(d.dil_ab);
        self.dil_ba = Some(d.dil_ba);
        self.delta_thurston = Some(d.delta);
        self.tanh_bound = Some((d.delta / T::cst(4.0)).tanh());
        self.dilation = Some(d);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manhattan::uniform_grid;

    fn curve(f: impl Fn(f64) -> f64, v: f64, vs: f64, n: usize) -> CurveSamples<f64> {
        let grid = uniform_grid(0.0, vs, n);
        let theta = grid.iter().map(|&a| f(a)).collect();
        CurveSamples { grid, theta, stderr: vec![0.0; n], v, v_star: vs, radius: 0.0 }
    }

    #[test]
    fn synthetic_square_root_curve() {
        let c = curve(|t| (1.0 - t.sqrt()).powi(2), 1.0, 1.0, 201);
        let b = beta(&c).unwrap();
        assert!((b.beta - 0.5).abs() < 1e-4, "{b:?}");
        assert!((b.xi - 0.25).abs() < 1e-3);
        assert!((b.alpha_sym - 0.5).abs() < 1e-4);
        assert!(!b.rough_similarity);
    }

    #[test]
    fn straight_line_is_similar() {
        let c = curve(|t| 2.0 - 2.0 * t / 3.0, 2.0, 3.0, 31);
        let b = beta(&c).unwrap();
        assert!(b.beta.abs() < 1e-12 && b.rough_similarity);
        assert!((b.alpha_sym - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scaling_invariance() {
        let c1 = curve(|t| (1.0 - t.sqrt()).powi(2), 1.0, 1.0, 101);
        let c2 = curve(|a| 3.0 * (1.0 - (a / 2.0).sqrt()).powi(2), 3.0, 2.0, 101);
        let (b1, b2) = (beta(&c1).unwrap(), beta(&c2).unwrap());
        assert!((b1.beta_bar - b2.beta_bar).abs() < 1e-9);
        assert!((b2.beta - 3.0 * b1.beta).abs() < 1e-9);
        assert!((b2.xi - 2.0 * b1.xi).abs() < 1e-9);
    }

    #[test]
    fn boundary_argmax_is_too_coarse() {
        // 1 − s − θ̃ increasing all the way to s = 1.
        let c = curve(|t| 1.0 - 1.2 * t, 1.0, 1.0, 11);
        assert!(matches!(beta(&c), Err(Error::GridTooCoarse)));
        let short = CurveSamples { grid: vec![0.0, 0.5], theta: vec![1.0, 0.5], stderr: vec![0.0; 2], v: 1.0, v_star: 1.0, radius: 0.0 };
        assert!(beta(&short).is_err());
    }
}
