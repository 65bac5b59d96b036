use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::matrix::Matrix;

/// Moduli of the roots of λ² + bλ + c, largest first.
fn quadratic_moduli<T: Scalar>(b: T, c: T) -> [T; 2] {
    let two = T::cst(2.0);
    let disc = b * b / T::cst(4.0) - c;
    if disc >= T::zero() {
        let s = disc.sqrt();
        let big = -b / two + if b > T::zero() { -s } else { s };
        let small = if big != T::zero() { c / big } else { T::zero() };
        let (x, y) = (big.abs(), small.abs());
        if x >= y { [x, y] } else { [y, x] }
    } else {
        let m = c.abs().sqrt();
        [m, m]
    }
}

/// Moduli of the roots of λ³ + p2 λ² + p1 λ + p0, largest first.
fn cubic_moduli<T: Scalar>(p2: T, p1: T, p0: T) -> [T; 3] {
    let three = T::cst(3.0);
    let p = p1 - p2 * p2 / three;
    let q = T::cst(2.0) * p2 * p2 * p2 / T::cst(27.0) - p2 * p1 / three + p0;
    let d = q * q / T::cst(4.0) + p * p * p / T::cst(27.0);
    let t = if d > T::zero() {
        let s = d.sqrt();
        (-q / T::cst(2.0) + s).cbrt() + (-q / T::cst(2.0) - s).cbrt()
    } else if p == T::zero() {
        (-q).cbrt()
    } else {
        let r = T::cst(2.0) * (-p / three).sqrt();
        let arg = (three * q / (T::cst(2.0) * p) * (-three / p).sqrt()).max(-T::one()).min(T::one());
        r * (arg.acos() / three).cos()
    };
    let mut x = t - p2 / three;
    for _ in 0..4 {
        let f = ((x + p2) * x + p1) * x + p0;
        let df = (three * x + T::cst(2.0) * p2) * x + p1;
        if df == T::zero() {
            break;
        }
        let nx = x - f / df;
        if !nx.is_finite() {
            break;
        }
        x = nx;
    }
    let b = p2 + x;
    let c = p1 + x * b;
    let [m1, m2] = quadratic_moduli(b, c);
    let mut v = [x.abs(), m1, m2];
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

/// Moduli of all eigenvalues, largest first, for dimension at most 3.
pub fn eigenvalue_moduli<T: Scalar>(a: &Matrix<T>) -> Result<Vec<T>> {
    match a.dim() {
        1 => Ok(vec![a.get(0, 0).abs()]),
        2 => Ok(quadratic_moduli(-a.trace(), a.det()).to_vec()),
        3 => {
            let g = |i, j| a.get(i, j);
            let minors = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0) + g(0, 0) * g(2, 2) - g(0, 2) * g(2, 0) + g(1, 1) * g(2, 2)
                - g(1, 2) * g(2, 1);
            Ok(cubic_moduli(-a.trace(), minors, -a.det()).to_vec())
        }
        n => Err(Error::Unsupported(format!("closed-form eigenvalues for dimension {n}"))),
    }
}

/// Spectral radius λ₁. Closed form up to dimension 3; beyond that the Gelfand
/// limit ‖A^(2^k)‖^(2^-k) by repeated squaring in log scale.
pub fn spectral_radius<T: Scalar>(a: &Matrix<T>) -> Result<T> {
    if a.dim() <= 3 {
        return Ok(eigenvalue_moduli(a)?[0]);
    }
    let mut b = a.clone();
    let mut s = T::zero();
    let mut pow = T::one();
    let mut prev: Option<T> = None;
    for _ in 0..64 {
        let f = b.frobenius();
        if f == T::zero() {
            return Ok(T::zero());
        }
        let est = (s + f.ln()) / pow;
        if let Some(p) = prev {
            if (est - p).abs() <= T::cst(1e-10) * T::one().max(est.abs()) {
                return Ok(est.exp());
            }
        }
        prev = Some(est);
        let bn = b.scale(f.recip());
        b = bn.mul(&bn);
        s = T::cst(2.0) * (s + f.ln());
        pow = pow * T::cst(2.0);
    }
    Err(Error::NoConvergence(format!("Gelfand estimate stalled near {}", prev.unwrap_or(T::zero()).exp())))
}

/// Smallest eigenvalue modulus λ_m.
pub fn smallest_modulus<T: Scalar>(a: &Matrix<T>) -> Result<T> {
    if a.dim() <= 3 {
        return Ok(*eigenvalue_moduli(a)?.last().unwrap());
    }
    match a.inverse() {
        Ok(i) => Ok(spectral_radius(&i)?.recip()),
        Err(_) => Ok(T::zero()),
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, largest first.
pub fn symmetric_eigenvalues<T: Scalar>(a: &Matrix<T>) -> Vec<T> {
    let n = a.dim();
    let mut m: Vec<T> = a.data().to_vec();
    let two = T::cst(2.0);
    for _ in 0..100 {
        let mut off = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                off = off + m[i * n + j] * m[i * n + j];
            }
        }
        let total = m.iter().map(|&x| x * x).sum::<T>();
        if off <= T::epsilon() * T::epsilon() * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = (t * t + T::one()).sqrt().recip();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<T> = (0..n).map(|i| m[i * n + i]).collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ev
}

/// Singular values, largest first.
pub fn singular_values<T: Scalar>(a: &Matrix<T>) -> Vec<T> {
    let b = a.transpose().mul(a);
    symmetric_eigenvalues(&b).into_iter().map(|x| x.max(T::zero()).sqrt()).collect()
}

/// Operator (spectral) norm σ₁. Closed form in dimension 2; otherwise the
/// Jacobi eigenvalue of AᵀA polished by power iteration to 1e-12.
pub fn operator_norm<T: Scalar>(a: &Matrix<T>) -> T {
    match a.dim() {
        1 => a.get(0, 0).abs(),
        2 => {
            let s = a.data().iter().map(|&x| x * x).sum::<T>();
            let d = a.det();
            let disc = (s * s - T::cst(4.0) * d * d).max(T::zero());
            ((s + disc.sqrt()) / T::cst(2.0)).sqrt()
        }
        n => {
            let b = a.transpose().mul(a);
            let jac = symmetric_eigenvalues(&b)[0];
            let col = (0..n)
                .max_by(|&i, &j| {
                    let ci: T = (0..n).map(|k| b.get(k, i) * b.get(k, i)).sum();
                    let cj: T = (0..n).map(|k| b.get(k, j) * b.get(k, j)).sum();
                    ci.partial_cmp(&cj).unwrap()
                })
                .unwrap();
            let mut v: Vec<T> = (0..n).map(|k| b.get(k, col)).collect();
            let mut rq = T::zero();
            for _ in 0..500 {
                let nv = v.iter().map(|&x| x * x).sum::<T>().sqrt();
                if nv == T::zero() {
                    break;
                }
                v.iter_mut().for_each(|x| *x = *x / nv);
                let w: Vec<T> = (0..n).map(|i| (0..n).map(|k| b.get(i, k) * v[k]).sum()).collect();
                let r: T = w.iter().zip(&v).map(|(&x, &y)| x * y).sum();
                let done = (r - rq).abs() <= T::cst(1e-12) * r.abs().max(T::min_positive_value());
                rq = r;
                v = w;
                if done {
                    break;
                }
            }
            jac.max(rq).max(T::zero()).sqrt()
        }
    }
}
