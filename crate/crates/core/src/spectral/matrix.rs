use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::words::Word;

/// Dense square matrix, row major.
#[derive(Clone, PartialEq, Serialize)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn from_row_major(n: usize, data: Vec<T>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::PreconditionViolated(format!("{} entries do not form a {n}x{n} matrix", data.len())));
        }
        Ok(Matrix { n, data })
    }

    /// Infers the dimension from a row-major list of length m².
    pub fn from_flat(data: Vec<T>) -> Result<Self> {
        let n = (data.len() as f64).sqrt().round() as usize;
        Self::from_row_major(n, data)
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::PreconditionViolated("rows of unequal length".into()));
        }
        Self::from_row_major(n, rows.concat())
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = T::one();
        }
        Matrix { n, data }
    }

    pub fn diag(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m.data[i * d.len() + i] = x;
        }
        m
    }

    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![T::zero(); n * n] }
    }

    /// Rotation of the plane by `t` radians.
    pub fn rotation(t: T) -> Self {
        let (s, c) = t.sin_cos();
        Matrix { n: 2, data: vec![c, -s, s, c] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn mul(&self, o: &Matrix<T>) -> Matrix<T> {
        let n = self.n;
        let mut out = vec![T::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = out[i * n + j] + a * o.data[k * n + j];
                }
            }
        }
        Matrix { n, data: out }
    }

    pub fn transpose(&self) -> Matrix<T> {
        let n = self.n;
        let mut out = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.data[i * n + j];
            }
        }
        Matrix { n, data: out }
    }

    pub fn scale(&self, s: T) -> Matrix<T> {
        Matrix { n: self.n, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn trace(&self) -> T {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().map(|&x| x * x).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == T::zero())
    }

    /// Determinant by partial-pivot elimination.
    pub fn det(&self) -> T {
        match self.n {
            1 => self.data[0],
            2 => self.data[0] * self.data[3] - self.data[1] * self.data[2],
            _ => {
                let n = self.n;
                let mut a = self.data.clone();
                let mut det = T::one();
                for c in 0..n {
                    let p = (c..n).max_by(|&i, &j| a[i * n + c].abs().partial_cmp(&a[j * n + c].abs()).unwrap()).unwrap();
                    if a[p * n + c] == T::zero() {
                        return T::zero();
                    }
                    if p != c {
                        for j in 0..n {
                            a.swap(p * n + j, c * n + j);
                        }
                        det = -det;
                    }
                    let piv = a[c * n + c];
                    det = det * piv;
                    for i in c + 1..n {
                        let f = a[i * n + c] / piv;
                        for j in c..n {
                            a[i * n + j] = a[i * n + j] - f * a[c * n + j];
                        }
                    }
                }
                det
            }
        }
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Matrix<T>> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut b = Matrix::identity(n).data;
        let scale = self.max_abs();
        for c in 0..n {
            let p = (c..n).max_by(|&i, &j| a[i * n + c].abs().partial_cmp(&a[j * n + c].abs()).unwrap()).unwrap();
            if a[p * n + c].abs() <= scale * T::tiny() {
                return Err(Error::PreconditionViolated("singular matrix".into()));
            }
            for j in 0..n {
                a.swap(p * n + j, c * n + j);
                b.swap(p * n + j, c * n + j);
            }
            let piv = a[c * n + c];
            for j in 0..n {
                a[c * n + j] = a[c * n + j] / piv;
                b[c * n + j] = b[c * n + j] / piv;
            }
            for i in 0..n {
                if i != c {
                    let f = a[i * n + c];
                    if f != T::zero() {
                        for j in 0..n {
                            a[i * n + j] = a[i * n + j] - f * a[c * n + j];
                            b[i * n + j] = b[i * n + j] - f * b[c * n + j];
                        }
                    }
                }
            }
        }
        Ok(Matrix { n, data: b })
    }

    pub fn max_diff(&self, o: &Matrix<T>) -> T {
        self.data.iter().zip(&o.data).fold(T::zero(), |m, (&x, &y)| m.max((x - y).abs()))
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self.data[i * self.n + j])?;
            }
        }
        write!(f, "]")
    }
}

/// Linear representation of F_k: one matrix per letter, inverses included.
#[derive(Clone, Debug, Serialize)]
pub struct Representation<T> {
    letters: Vec<Matrix<T>>,
    dim: usize,
    normalized: bool,
}

impl<T: Scalar> Representation<T> {
    /// Generator matrices; inverses are computed and checked.
    pub fn new(gens: Vec<Matrix<T>>) -> Result<Self> {
        let inverses = gens.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
        Self::with_inverses(gens, inverses)
    }

    pub fn with_inverses(gens: Vec<Matrix<T>>, inverses: Vec<Matrix<T>>) -> Result<Self> {
        if gens.len() < 2 || inverses.len() != gens.len() {
            return Err(Error::PreconditionViolated("need one matrix and one inverse per generator, rank at least 2".into()));
        }
        let dim = gens[0].dim();
        if gens.iter().chain(&inverses).any(|m| m.dim() != dim) {
            return Err(Error::PreconditionViolated("matrices of unequal dimension".into()));
        }
        let id = Matrix::identity(dim);
        for (i, (g, h)) in gens.iter().zip(&inverses).enumerate() {
            let tol = T::cst(1e-10) * T::one().max(g.max_abs() * h.max_abs());
            if g.mul(h).max_diff(&id) > tol || h.mul(g).max_diff(&id) > tol {
                return Err(Error::PreconditionViolated(format!("generator {i}: supplied inverse is not an inverse")));
            }
        }
        let normalized = gens.iter().all(|g| (g.det().abs() - T::one()).abs() <= T::cst(1e-10));
        let mut letters = Vec::with_capacity(2 * gens.len());
        for (g, h) in gens.into_iter().zip(inverses) {
            letters.push(g);
            letters.push(h);
        }
        Ok(Representation { letters, dim, normalized })
    }

    /// `a = diag(s, 1/s)` and `b = R a R⁻¹` with `R` the rotation by `angle`.
    pub fn schottky(s: T, angle: T) -> Self {
        let a = Matrix::diag(&[s, s.recip()]);
        let r = Matrix::rotation(angle);
        let b = r.mul(&a).mul(&r.transpose());
        Self::new(vec![a, b]).expect("invertible")
    }

    pub fn rank(&self) -> usize {
        self.letters.len() / 2
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn letter(&self, l: u8) -> &Matrix<T> {
        &self.letters[l as usize]
    }

    pub fn eval(&self, w: &Word) -> Matrix<T> {
        let mut m = Matrix::identity(self.dim);
        for &l in w.letters() {
            m = m.mul(&self.letters[l as usize]);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let m = Matrix::<f64>::from_rows(&[vec![2.0, 1.0, 0.0], vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 1.0]]).unwrap();
        assert!((m.det() - 5.0).abs() < 1e-12);
        let i = m.inverse().unwrap();
        assert!(m.mul(&i).max_diff(&Matrix::identity(3)) < 1e-12);
    }

    #[test]
    fn representation_evaluates_words() {
        let r = Representation::<f64>::schottky(4.0, std::f64::consts::FRAC_PI_4);
        let w = Word::parse("abAB").unwrap();
        let m = r.eval(&w);
        let inv = r.eval(&w.inverse());
        assert!(m.mul(&inv).max_diff(&Matrix::identity(2)) < 1e-10);
        assert!(r.is_normalized());
    }

    #[test]
    fn rejects_wrong_inverse() {
        let a = Matrix::<f64>::diag(&[2.0, 0.5]);
        assert!(Representation::with_inverses(vec![a.clone(), a.clone()], vec![a.clone(), a]).is_err());
    }
}
