use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the numeric code is generic over.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + Send
    + Sync
    + serde::Serialize
    + 'static
{
    #[inline]
    fn cst(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn of_u64(n: u64) -> Self {
        Self::from_u64(n).expect("u64 representable")
    }

    #[inline]
    fn f64(self) -> f64 {
        self.to_f64().expect("finite conversion")
    }

    /// Machine-precision scaled tolerance used by iterative kernels.
    #[inline]
    fn tiny() -> Self {
        Self::epsilon() * Self::cst(16.0)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `log(sum(exp(xs)))` summed in slice order.
pub fn log_sum_exp<T: Scalar>(xs: &[T]) -> T {
    let m = xs.iter().copied().fold(T::neg_infinity(), T::max);
    if m == T::neg_infinity() {
        return m;
    }
    let mut s = T::zero();
    for &x in xs {
        s = s + (x - m).exp();
    }
    m + s.ln()
}

/// Ordinary least squares of `ys` on `xs`: `(slope, intercept, stderr_of_slope)`.
pub fn least_squares<T: Scalar>(xs: &[T], ys: &[T]) -> (T, T, T) {
    let n = T::of_usize(xs.len());
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ys.iter().copied().sum::<T>() / n;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        sxx = sxx + (x - mx) * (x - mx);
        sxy = sxy + (x - mx) * (y - my);
    }
    if sxx == T::zero() {
        return (T::zero(), my, T::zero());
    }
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let stderr = if xs.len() > 2 {
        let mut ssr = T::zero();
        for (&x, &y) in xs.iter().zip(ys) {
            let r = y - (icpt + slope * x);
            ssr = ssr + r * r;
        }
        (ssr / (n - T::cst(2.0)) / sxx).sqrt()
    } else {
        T::zero()
    };
    (slope, icpt, stderr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lse_matches_direct() {
        let xs = [0.5f64, -1.0, 2.0];
        let direct = xs.iter().map(|x| x.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(&xs) - direct).abs() < 1e-14);
        assert_eq!(log_sum_exp::<f64>(&[]), f64::NEG_INFINITY);
    }

    #[test]
    fn lse_f32() {
        let xs = [100.0f32, 100.0];
        assert!((log_sum_exp(&xs) - (100.0 + 2f32.ln())).abs() < 1e-4);
    }

    #[test]
    fn ols_exact_line() {
        let xs: Vec<f64> = (0..6).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        let (s, c, e) = least_squares(&xs, &ys);
        assert!((s - 3.0).abs() < 1e-12 && (c + 1.0).abs() < 1e-12 && e < 1e-12);
    }
}
