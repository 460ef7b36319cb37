//! Small dense complex matrices: products, Kronecker products, leg
//! embeddings and numerically ranked elimination.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use num_traits::{Float, Zero};

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn frobenius(&self) -> f64 {
        Float::sqrt(self.data.iter().map(|x| x.norm_sqr()).sum::<f64>())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Whether `self = lambda * I` for some `lambda`, within `tol`; returns `lambda`.
    pub fn as_scalar(&self, tol: f64) -> Option<Complex64> {
        if self.rows != self.cols || self.rows == 0 {
            return None;
        }
        let lambda = self[(0, 0)];
        let dev = &Self::identity(self.rows).scale(lambda) - self;
        (dev.max_abs() <= tol).then_some(lambda)
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.nullspace_rref(tol).0
    }

    /// Basis of `{x : self x = 0}`, one vector per free column.
    pub fn nullspace(&self, tol: f64) -> Vec<Vec<Complex64>> {
        self.nullspace_rref(tol).1
    }

    /// Gaussian elimination with partial pivoting; a pivot counts when its
    /// modulus exceeds `tol` times the largest entry.
    fn nullspace_rref(&self, tol: f64) -> (usize, Vec<Vec<Complex64>>) {
        let mut m = self.clone();
        let scale = m.max_abs().max(f64::MIN_POSITIVE);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let (p, best) = (r..m.rows).map(|i| (i, m[(i, c)].norm())).fold((r, -1.0), |a, b| if b.1 > a.1 { b } else { a });
            if best <= tol * scale {
                continue;
            }
            for k in 0..m.cols {
                m.data.swap(r * m.cols + k, p * m.cols + k);
            }
            let inv = m[(r, c)].inv();
            for k in 0..m.cols {
                m[(r, k)] *= inv;
            }
            for i in 0..m.rows {
                if i != r {
                    let f = m[(i, c)];
                    if f != Complex64::zero() {
                        for k in 0..m.cols {
                            let t = f * m[(r, k)];
                            m[(i, k)] -= t;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut x = vec![Complex64::zero(); m.cols];
                x[f] = Complex64::new(1.0, 0.0);
                for (row, &pc) in pivots.iter().enumerate() {
                    x[pc] = -m[(row, f)];
                }
                x
            })
            .collect();
        (pivots.len(), basis)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shapes differ");
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shapes differ");
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

/// Places an operator on `(C^n)^{(x) 2}` on legs `(p, q)` of `(C^n)^{(x) 3}`,
/// identity on the remaining leg. Basis index of `|a1 a2 a3>` is `a1 n^2 + a2 n + a3`.
pub fn embed_two_legs(r: &CMatrix, n: usize, p: usize, q: usize) -> CMatrix {
    assert!(p < 3 && q < 3 && p != q, "legs must be distinct and below 3");
    assert_eq!(r.rows(), n * n, "expected an n^2 x n^2 matrix");
    let k = 3 - p - q;
    let digits = |x: usize| [x / (n * n), (x / n) % n, x % n];
    CMatrix::from_fn(n * n * n, n * n * n, |row, col| {
        let a = digits(row);
        let b = digits(col);
        if a[k] != b[k] {
            return Complex64::zero();
        }
        r[(a[p] * n + a[q], b[p] * n + b[q])]
    })
}

/// The flip `P(x (x) y) = y (x) x` on `C^n (x) C^n`.
pub fn flip(n: usize) -> CMatrix {
    CMatrix::from_fn(n * n, n * n, |row, col| {
        if row / n == col % n && row % n == col / n {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::zero()
        }
    })
}
