//! Pairs of partial flags in `F_q^d` and their relative position.
//!
//! Vectors are rows of residues mod `q`; subspaces are stored by their
//! reduced row echelon basis, which is canonical.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::combinatorics::{enumerate_compositions, Composition, IntMatrix};
use crate::error::{Error, Result};

/// Largest `n`, `d` accepted by [`orbit_census`].
pub const CENSUS_MAX_N: usize = 3;
pub const CENSUS_MAX_D: u32 = 3;

/// The prime field `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    q: u8,
}

impl PrimeField {
    pub fn new(q: u8) -> Result<Self> {
        if !matches!(q, 2 | 3 | 5 | 7) {
            return Err(Error::InvalidInput(format!("{q} is not a supported prime")));
        }
        Ok(Self { q })
    }

    pub fn order(&self) -> u8 {
        self.q
    }

    fn add(&self, a: u8, b: u8) -> u8 {
        (a + b) % self.q
    }

    fn mul(&self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.q as u16) as u8
    }

    fn neg(&self, a: u8) -> u8 {
        (self.q - a) % self.q
    }

    fn inv(&self, a: u8) -> u8 {
        (1..self.q).find(|&b| self.mul(a, b) == 1).expect("nonzero element of a prime field")
    }

    /// All vectors of `F_q^d` in lexicographic order.
    pub fn vectors(&self, d: usize) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::new()];
        for _ in 0..d {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..self.q).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// Reduced row echelon form with zero rows removed.
    pub fn rref(&self, rows: &[Vec<u8>]) -> Vec<Vec<u8>> {
        let mut m: Vec<Vec<u8>> = rows.to_vec();
        let cols = m.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
            m.swap(r, p);
            let inv = self.inv(m[r][c]);
            for x in m[r].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for i in 0..m.len() {
                if i != r && m[i][c] != 0 {
                    let f = self.neg(m[i][c]);
                    for k in 0..cols {
                        let t = self.mul(f, m[r][k]);
                        m[i][k] = self.add(m[i][k], t);
                    }
                }
            }
            r += 1;
        }
        m.truncate(r);
        m
    }

    pub fn rank(&self, rows: &[Vec<u8>]) -> usize {
        self.rref(rows).len()
    }

    /// `v * g` for a row vector `v` and a square matrix `g` given by rows.
    pub fn apply(&self, v: &[u8], g: &[Vec<u8>]) -> Vec<u8> {
        let d = v.len();
        (0..d)
            .map(|j| (0..d).fold(0, |acc, k| self.add(acc, self.mul(v[k], g[k][j]))))
            .collect()
    }
}

/// A subspace of `F_q^d`, stored by its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subspace {
    d: usize,
    basis: Vec<Vec<u8>>,
}

impl Subspace {
    pub fn span(field: &PrimeField, d: usize, rows: &[Vec<u8>]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != d || r.iter().any(|&x| x >= field.q)) {
            return Err(Error::InvalidInput(format!("rows must be vectors of F_{}^{d}", field.q)));
        }
        Ok(Self { d, basis: field.rref(rows) })
    }

    pub fn zero(d: usize) -> Self {
        Self { d, basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    pub fn contains(&self, field: &PrimeField, other: &Subspace) -> bool {
        self.sum(field, other).dim() == self.dim()
    }

    pub fn sum(&self, field: &PrimeField, other: &Subspace) -> Subspace {
        let rows: Vec<Vec<u8>> = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace { d: self.d, basis: field.rref(&rows) }
    }

    /// `dim(U cap W) = dim U + dim W - dim(U + W)`.
    pub fn intersection_dim(&self, field: &PrimeField, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.sum(field, other).dim()
    }

    pub fn transform(&self, field: &PrimeField, g: &[Vec<u8>]) -> Subspace {
        let rows: Vec<Vec<u8>> = self.basis.iter().map(|r| field.apply(r, g)).collect();
        Subspace { d: self.d, basis: field.rref(&rows) }
    }
}

/// `0 = D_0 <= D_1 <= ... <= D_n = F_q^d` with `dim D_i - dim D_{i-1} = v_i`.
/// Only `D_1, ..., D_n` are stored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Flag {
    jumps: Composition,
    spaces: Vec<Subspace>,
}

impl Flag {
    pub fn new(field: &PrimeField, spaces: Vec<Subspace>) -> Result<Self> {
        let Some(last) = spaces.last() else {
            return Err(Error::InvalidInput("a flag needs at least one step".into()));
        };
        let d = last.d;
        if last.dim() != d {
            return Err(Error::InvalidInput("the last step must be the whole space".into()));
        }
        let mut jumps = Vec::with_capacity(spaces.len());
        let mut prev = Subspace::zero(d);
        for s in &spaces {
            if s.d != d || !s.contains(field, &prev) {
                return Err(Error::InvalidInput("flag steps are not nested".into()));
            }
            jumps.push((s.dim() - prev.dim()) as u32);
            prev = s.clone();
        }
        Ok(Self { jumps: Composition::new(jumps)?, spaces })
    }

    pub fn jumps(&self) -> &Composition {
        &self.jumps
    }

    pub fn spaces(&self) -> &[Subspace] {
        &self.spaces
    }

    pub fn transform(&self, field: &PrimeField, g: &[Vec<u8>]) -> Flag {
        Flag { jumps: self.jumps.clone(), spaces: self.spaces.iter().map(|s| s.transform(field, g)).collect() }
    }
}

/// A pair of flags in the same space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagPair {
    pub first: Flag,
    pub second: Flag,
}

impl FlagPair {
    pub fn new(first: Flag, second: Flag) -> Result<Self> {
        if first.spaces.len() != second.spaces.len() {
            return Err(Error::DimensionMismatch { expected: first.spaces.len(), found: second.spaces.len() });
        }
        if first.jumps.total() != second.jumps.total() {
            return Err(Error::DimensionMismatch {
                expected: first.jumps.total() as usize,
                found: second.jumps.total() as usize,
            });
        }
        Ok(Self { first, second })
    }
}

/// The matrix `A` with `sum_{r <= i, s <= j} a_rs = dim(D_i cap D'_j)`.
pub fn orbit_matrix(field: &PrimeField, fp: &FlagPair) -> Result<IntMatrix> {
    let n = fp.first.spaces.len();
    let d = fp.first.jumps.total() as usize;
    let rank = |i: usize, j: usize| -> i64 {
        if i == 0 || j == 0 {
            return 0;
        }
        fp.first.spaces[i - 1].intersection_dim(field, &fp.second.spaces[j - 1]) as i64
    };
    let mut entries = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            let a = rank(i, j) - rank(i - 1, j) - rank(i, j - 1) + rank(i - 1, j - 1);
            if a < 0 {
                return Err(Error::InvalidInput(format!("inconsistent intersection ranks in F_{}^{d}", field.q)));
            }
            entries.push(a as u32);
        }
    }
    IntMatrix::new(n, entries)
}

/// All subspaces of `F_q^d` of dimension `k`, sorted.
pub fn subspaces(field: &PrimeField, d: usize, k: usize) -> Vec<Subspace> {
    let vectors = field.vectors(d);
    let mut found = BTreeSet::new();
    let mut idx = vec![0usize; k];
    loop {
        let rows: Vec<Vec<u8>> = idx.iter().map(|&i| vectors[i].clone()).collect();
        let basis = field.rref(&rows);
        if basis.len() == k {
            found.insert(Subspace { d, basis });
        }
        // Odometer over non-decreasing index tuples.
        let mut p = k;
        loop {
            if p == 0 {
                return found.into_iter().collect();
            }
            p -= 1;
            if idx[p] + 1 < vectors.len() {
                idx[p] += 1;
                for r in p + 1..k {
                    idx[r] = idx[p];
                }
                break;
            }
        }
    }
}

/// All flags of the given type, sorted.
pub fn flags(field: &PrimeField, v: &Composition) -> Vec<Flag> {
    let d = v.total() as usize;
    let by_dim: Vec<Vec<Subspace>> = (0..=d).map(|k| subspaces(field, d, k)).collect();
    let mut out = Vec::new();
    let mut chain = Vec::new();
    extend_chain(field, v, &by_dim, &Subspace::zero(d), &mut chain, &mut out);
    out
}

fn extend_chain(
    field: &PrimeField,
    v: &Composition,
    by_dim: &[Vec<Subspace>],
    prev: &Subspace,
    chain: &mut Vec<Subspace>,
    out: &mut Vec<Flag>,
) {
    let i = chain.len();
    if i == v.len() {
        out.push(Flag { jumps: v.clone(), spaces: chain.clone() });
        return;
    }
    let k = prev.dim() + v.get(i) as usize;
    for s in &by_dim[k] {
        if s.contains(field, prev) {
            chain.push(s.clone());
            extend_chain(field, v, by_dim, s, chain, out);
            chain.pop();
        }
    }
}

/// Flag pairs per relative position, over all flag types with `n` steps in `F_q^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub n: usize,
    pub d: u32,
    pub q: u8,
    pub counts: BTreeMap<IntMatrix, u64>,
    /// Number of flags, all types together.
    pub flags: u64,
}

impl Census {
    pub fn total_pairs(&self) -> u64 {
        self.counts.values().sum()
    }
}

pub fn orbit_census(n: usize, d: u32, q: u8) -> Result<Census> {
    if n == 0 || n > CENSUS_MAX_N {
        return Err(Error::BoundExceeded { what: "n", limit: CENSUS_MAX_N, got: n });
    }
    if d > CENSUS_MAX_D {
        return Err(Error::BoundExceeded { what: "d", limit: CENSUS_MAX_D as usize, got: d as usize });
    }
    if q > 3 {
        return Err(Error::BoundExceeded { what: "q", limit: 3, got: q as usize });
    }
    let field = PrimeField::new(q)?;
    let all: Vec<Flag> = enumerate_compositions(n, d).iter().flat_map(|v| flags(&field, v)).collect();
    let mut counts = BTreeMap::new();
    for f1 in &all {
        for f2 in &all {
            let a = orbit_matrix(&field, &FlagPair { first: f1.clone(), second: f2.clone() })?;
            *counts.entry(a).or_insert(0u64) += 1;
        }
    }
    Ok(Census { n, d, q, counts, flags: all.len() as u64 })
}

/// The permutation read off a permutation matrix: row `i` has its one in column `sigma(i)`.
pub fn permutation_of_matrix(a: &IntMatrix) -> Option<crate::combinatorics::Permutation> {
    let n = a.size();
    let mut images = Vec::with_capacity(n);
    for i in 0..n {
        let row: Vec<usize> = (0..n).filter(|&j| a.get(i, j) != 0).collect();
        if row.len() != 1 || a.get(i, row[0]) != 1 {
            return None;
        }
        images.push(row[0]);
    }
    crate::combinatorics::Permutation::new(images).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[u32]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn full_flag(f: &PrimeField, rows: &[Vec<u8>]) -> Flag {
        let spaces = (1..=rows.len()).map(|k| Subspace::span(f, rows.len(), &rows[..k]).unwrap()).collect();
        Flag::new(f, spaces).unwrap()
    }

    #[test]
    fn subspace_counts() {
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(subspaces(&f2, 3, 1).len(), 7);
        assert_eq!(subspaces(&f2, 3, 2).len(), 7);
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(subspaces(&f3, 2, 1).len(), 4);
        assert_eq!(flags(&f2, &Composition::new(vec![1, 1, 1]).unwrap()).len(), 21);
    }

    #[test]
    fn same_and_transverse_flags() {
        let f = PrimeField::new(2).unwrap();
        let e = full_flag(&f, &[vec![1, 0], vec![0, 1]]);
        let e2 = full_flag(&f, &[vec![0, 1], vec![1, 0]]);
        let same = FlagPair::new(e.clone(), e.clone()).unwrap();
        assert_eq!(orbit_matrix(&f, &same).unwrap(), mat(&[&[1, 0], &[0, 1]]));
        let transverse = FlagPair::new(e, e2).unwrap();
        assert_eq!(orbit_matrix(&f, &transverse).unwrap(), mat(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn rejects_non_nested_steps() {
        let f = PrimeField::new(2).unwrap();
        let a = Subspace::span(&f, 2, &[vec![1, 0]]).unwrap();
        let b = Subspace::span(&f, 2, &[vec![0, 1]]).unwrap();
        assert!(Flag::new(&f, vec![a, b]).is_err());
    }
}
