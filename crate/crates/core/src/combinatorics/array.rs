use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::composition::Composition;
use super::matrix::{enumerate_matrices, IntMatrix};
use crate::error::{Error, Result};

/// An `n x n x n` array of non-negative integers `t_ijk`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransferArray {
    n: usize,
    entries: Vec<u32>,
}

/// Which pair of indices a marginal keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Marginal {
    /// `T^12_ij = sum_k t_ijk`
    M12,
    /// `T^23_jk = sum_i t_ijk`
    M23,
    /// `T^13_ik = sum_j t_ijk`
    M13,
}

impl TransferArray {
    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![0; n * n * n] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> u32 {
        self.entries[(i * self.n + j) * self.n + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: u32) {
        let n = self.n;
        self.entries[(i * n + j) * n + k] = value;
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn total(&self) -> u32 {
        self.entries.iter().sum()
    }

    pub fn marginal(&self, which: Marginal) -> IntMatrix {
        let n = self.n;
        let mut m = IntMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let t = self.get(i, j, k);
                    let (r, c) = match which {
                        Marginal::M12 => (i, j),
                        Marginal::M23 => (j, k),
                        Marginal::M13 => (i, k),
                    };
                    m.set(r, c, m.get(r, c) + t);
                }
            }
        }
        m
    }

    pub fn t12(&self) -> IntMatrix {
        self.marginal(Marginal::M12)
    }

    pub fn t23(&self) -> IntMatrix {
        self.marginal(Marginal::M23)
    }

    pub fn t13(&self) -> IntMatrix {
        self.marginal(Marginal::M13)
    }
}

/// All arrays `T` with `T^12 = A` and `T^23 = B`, sorted.
///
/// The slice `t_{.j.}` is a matrix with row sums the `j`-th column of `A`
/// and column sums the `j`-th row of `B`, and the slices are independent.
pub fn transfer_arrays(a: &IntMatrix, b: &IntMatrix) -> Result<Vec<TransferArray>> {
    let n = a.size();
    if b.size() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.size() });
    }
    if a.col_sums() != b.row_sums() {
        return Err(Error::MarginalMismatch(format!(
            "column sums {} of A differ from row sums {} of B",
            a.col_sums(),
            b.row_sums()
        )));
    }
    let mut slices = Vec::with_capacity(n);
    for j in 0..n {
        let col = Composition::new((0..n).map(|i| a.get(i, j)).collect())?;
        let row = Composition::new((0..n).map(|k| b.get(j, k)).collect())?;
        slices.push(enumerate_matrices(&col, &row)?);
    }
    let mut out = Vec::new();
    let mut current = TransferArray::zeros(n);
    product(&slices, 0, &mut current, &mut out);
    out.sort();
    Ok(out)
}

fn product(slices: &[Vec<IntMatrix>], j: usize, current: &mut TransferArray, out: &mut Vec<TransferArray>) {
    let n = current.n;
    if j == n {
        out.push(current.clone());
        return;
    }
    for m in &slices[j] {
        for i in 0..n {
            for k in 0..n {
                current.set(i, j, k, m.get(i, k));
            }
        }
        product(slices, j + 1, current, out);
    }
}
