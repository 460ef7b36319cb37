use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::composition::Composition;
use super::permutation::Permutation;
use crate::error::{Error, Result};

/// An `n x n` matrix of non-negative integers, stored row-major.
///
/// Ordering is lexicographic on `(n, entries)`, which is the canonical
/// order used for enumeration and serialization.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<u32>,
}

impl IntMatrix {
    pub fn new(n: usize, entries: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("matrix size must be positive".into()));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: entries.len() });
        }
        Ok(Self { n, entries })
    }

    pub fn from_rows<R: AsRef<[u32]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            entries.extend_from_slice(row);
        }
        Self::new(n, entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![0; n * n] }
    }

    pub fn diag(v: &Composition) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, v.get(i));
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u32) {
        self.entries[i * self.n + j] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.entries.chunks(self.n)
    }

    pub fn total(&self) -> u32 {
        self.entries.iter().sum()
    }

    pub fn row_sums(&self) -> Composition {
        let parts = self.rows().map(|r| r.iter().sum()).collect();
        Composition::new(parts).expect("n >= 1")
    }

    pub fn col_sums(&self) -> Composition {
        let parts = (0..self.n).map(|j| (0..self.n).map(|i| self.get(i, j)).sum()).collect();
        Composition::new(parts).expect("n >= 1")
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j) == 0))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == 0))
    }

    pub fn diagonal(&self) -> Composition {
        Composition::new((0..self.n).map(|i| self.get(i, i)).collect()).expect("n >= 1")
    }

    /// `self + delta * E_ij`, failing if an entry would become negative.
    pub fn add_unit(&self, i: usize, j: usize, delta: i64) -> Result<Self> {
        let mut out = self.clone();
        let value = i64::from(self.get(i, j)) + delta;
        if value < 0 {
            return Err(Error::InvalidInput(format!(
                "entry ({},{}) would become negative",
                i + 1,
                j + 1
            )));
        }
        out.set(i, j, value as u32);
        Ok(out)
    }

    /// Sum of the block `rows x cols` (inclusive ranges).
    fn corner(&self, rows: core::ops::RangeInclusive<usize>, cols: core::ops::RangeInclusive<usize>) -> u32 {
        let mut s = 0;
        for r in rows {
            for c in cols.clone() {
                s += self.get(r, c);
            }
        }
        s
    }

    /// The north-east corner sums `sum_{r<=i, s>=j} a_rs` for `i < j`,
    /// then the south-west sums `sum_{r>=i, s<=j} a_rs` for `j < i`.
    pub fn corner_sums(&self) -> Vec<u32> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                out.push(self.corner(0..=i, j..=n - 1));
            }
        }
        for i in 0..n {
            for j in 0..i {
                out.push(self.corner(i..=n - 1, 0..=j));
            }
        }
        out
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

fn check_pair(v1: &Composition, v2: &Composition) -> Result<()> {
    if v1.len() != v2.len() {
        return Err(Error::DimensionMismatch { expected: v1.len(), found: v2.len() });
    }
    if v1.total() != v2.total() {
        return Err(Error::MarginalMismatch(format!("{v1} and {v2} have different totals")));
    }
    Ok(())
}

/// All matrices with row sums `v1` and column sums `v2`, in row-major
/// lexicographic order.
pub fn enumerate_matrices(v1: &Composition, v2: &Composition) -> Result<Vec<IntMatrix>> {
    check_pair(v1, v2)?;
    let n = v1.len();
    let mut out = Vec::new();
    let mut entries = vec![0u32; n * n];
    let mut col_left: Vec<u32> = v2.parts().to_vec();
    fill_matrix(v1.parts(), 0, v1.get(0), &mut col_left, &mut entries, n, &mut out);
    Ok(out)
}

fn fill_matrix(
    rows: &[u32],
    pos: usize,
    row_left: u32,
    col_left: &mut [u32],
    entries: &mut [u32],
    n: usize,
    out: &mut Vec<IntMatrix>,
) {
    if pos == n * n {
        out.push(IntMatrix { n, entries: entries.to_vec() });
        return;
    }
    let (i, j) = (pos / n, pos % n);
    if j + 1 == n {
        // Last column of a row is forced.
        let x = row_left;
        if x > col_left[j] {
            return;
        }
        if i + 1 == n && col_left.iter().enumerate().any(|(c, &l)| c != j && l != 0) {
            return;
        }
        entries[pos] = x;
        col_left[j] -= x;
        fill_matrix(rows, pos + 1, rows.get(i + 1).copied().unwrap_or(0), col_left, entries, n, out);
        col_left[j] += x;
        entries[pos] = 0;
        return;
    }
    let hi = row_left.min(col_left[j]);
    for x in 0..=hi {
        entries[pos] = x;
        col_left[j] -= x;
        fill_matrix(rows, pos + 1, row_left - x, col_left, entries, n, out);
        col_left[j] += x;
    }
    entries[pos] = 0;
}

/// `m^sigma_ij = #{alpha in [v1]_i : sigma(alpha) in [v2]_j}`.
pub fn matrix_of_permutation(sigma: &Permutation, v1: &Composition, v2: &Composition) -> Result<IntMatrix> {
    check_pair(v1, v2)?;
    let d = v1.total() as usize;
    if sigma.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: sigma.len() });
    }
    let n = v1.len();
    let mut m = IntMatrix::zeros(n);
    for alpha in 0..d {
        let i = v1.segment_of(alpha);
        let j = v2.segment_of(sigma.image(alpha));
        m.entries[i * n + j] += 1;
    }
    Ok(m)
}

/// The closed-form partial order on each `M(v1, v2)`; matrices with
/// different marginals are incomparable.
pub fn preceq(a: &IntMatrix, b: &IntMatrix) -> bool {
    if a.n != b.n || a.row_sums() != b.row_sums() || a.col_sums() != b.col_sums() {
        return false;
    }
    a.corner_sums().iter().zip(b.corner_sums()).all(|(x, y)| *x <= y)
}

/// `l(C) = sum_{i != j} binom(|i-j|+1, 2) c_ij`.
pub fn length_statistic(c: &IntMatrix) -> u64 {
    let n = c.n;
    let mut l = 0u64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let k = i.abs_diff(j) as u64 + 1;
                l += k * (k - 1) / 2 * u64::from(c.get(i, j));
            }
        }
    }
    l
}

/// `A_ij(v) = diag(v_1, ..., v_j - 1, ..., v_n) + E_ij` (0-based `i`, `j`).
///
/// The column sums of the result equal `v`; the row sums are `v` with one
/// unit moved from position `j` to position `i`.
pub fn generator_matrix(v: &Composition, i: usize, j: usize) -> Result<IntMatrix> {
    let n = v.len();
    if i >= n || j >= n {
        return Err(Error::InvalidInput(format!("index out of range for n = {n}")));
    }
    if i == j {
        return Err(Error::InvalidInput("generator matrices need i != j".into()));
    }
    if v.get(j) == 0 {
        return Err(Error::Hypothesis(format!("part {} of {v} is zero", j + 1)));
    }
    let mut m = IntMatrix::diag(v);
    m.set(j, j, v.get(j) - 1);
    m.set(i, j, 1);
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::composition::enumerate_compositions;

    fn comp(p: &[u32]) -> Composition {
        Composition::new(p.to_vec()).unwrap()
    }

    fn mat(rows: &[&[u32]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn enumerate_small_cases() {
        let list = enumerate_matrices(&comp(&[1, 1]), &comp(&[1, 1])).unwrap();
        assert_eq!(list, vec![mat(&[&[0, 1], &[1, 0]]), mat(&[&[1, 0], &[0, 1]])]);
        let list = enumerate_matrices(&comp(&[2, 0]), &comp(&[1, 1])).unwrap();
        assert_eq!(list, vec![mat(&[&[1, 1], &[0, 0]])]);
    }

    /// Brute force over every 2x2 grid with entries up to d.
    #[test]
    fn count_matches_grid_search() {
        let (v1, v2) = (comp(&[2, 1]), comp(&[2, 1]));
        let mut count = 0;
        for a in 0..=3u32 {
            for b in 0..=3 {
                for c in 0..=3 {
                    for d in 0..=3 {
                        if a + b == 2 && c + d == 1 && a + c == 2 && b + d == 1 {
                            count += 1;
                        }
                    }
                }
            }
        }
        // Only [[2,0],[0,1]] and [[1,1],[1,0]]; S_2 x S_1 \ S_3 / S_2 x S_1 has two cosets.
        assert_eq!(count, 2);
        assert_eq!(enumerate_matrices(&v1, &v2).unwrap().len(), count);
    }

    #[test]
    fn enumeration_is_sorted_and_exact() {
        for n in 1..4 {
            for d in 0..4 {
                for v1 in enumerate_compositions(n, d) {
                    for v2 in enumerate_compositions(n, d) {
                        let list = enumerate_matrices(&v1, &v2).unwrap();
                        assert!(list.windows(2).all(|w| w[0] < w[1]));
                        for m in &list {
                            assert_eq!(m.row_sums(), v1);
                            assert_eq!(m.col_sums(), v2);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mismatched_marginals_are_rejected() {
        assert!(enumerate_matrices(&comp(&[1, 1]), &comp(&[1, 1, 0])).is_err());
        assert!(enumerate_matrices(&comp(&[1, 1]), &comp(&[1, 2])).is_err());
    }

    #[test]
    fn permutation_matrices() {
        let v = comp(&[2, 1]);
        let id = Permutation::identity(3);
        assert_eq!(matrix_of_permutation(&id, &v, &v).unwrap(), mat(&[&[2, 0], &[0, 1]]));
        let swap = Permutation::new(vec![0, 2, 1]).unwrap();
        assert_eq!(matrix_of_permutation(&swap, &v, &v).unwrap(), mat(&[&[1, 1], &[1, 0]]));
    }

    #[test]
    fn preceq_examples() {
        let id = mat(&[&[1, 0], &[0, 1]]);
        let anti = mat(&[&[0, 1], &[1, 0]]);
        assert!(preceq(&id, &anti));
        assert!(!preceq(&anti, &id));
        assert!(preceq(&id, &id));
        assert!(!preceq(&id, &mat(&[&[2, 0], &[0, 0]])));
    }

    #[test]
    fn length_examples() {
        assert_eq!(length_statistic(&mat(&[&[2, 0], &[0, 1]])), 0);
        assert_eq!(length_statistic(&mat(&[&[0, 1], &[1, 0]])), 2);
        assert_eq!(length_statistic(&mat(&[&[0, 0, 1], &[0, 0, 0], &[1, 0, 0]])), 6);
    }

    #[test]
    fn generator_examples() {
        assert_eq!(generator_matrix(&comp(&[1, 1]), 0, 1).unwrap(), mat(&[&[1, 1], &[0, 0]]));
        assert_eq!(generator_matrix(&comp(&[0, 2]), 0, 1).unwrap(), mat(&[&[0, 1], &[0, 1]]));
        assert_eq!(generator_matrix(&comp(&[2, 1]), 1, 0).unwrap(), mat(&[&[1, 0], &[1, 1]]));
        assert!(generator_matrix(&comp(&[1, 0]), 0, 1).is_err());
        let a = generator_matrix(&comp(&[1, 2, 0]), 2, 1).unwrap();
        assert_eq!(a.col_sums(), comp(&[1, 2, 0]));
        assert_eq!(a.row_sums(), comp(&[1, 1, 1]));
    }

    /// Corner sums determine the length statistic.
    #[test]
    fn length_is_sum_of_corner_sums() {
        for v1 in enumerate_compositions(3, 3) {
            for v2 in enumerate_compositions(3, 3) {
                for m in enumerate_matrices(&v1, &v2).unwrap() {
                    let s: u64 = m.corner_sums().iter().map(|&x| u64::from(x)).sum();
                    assert_eq!(s, length_statistic(&m));
                }
            }
        }
    }
}
