use alloc::format;
use alloc::vec::Vec;

use super::composition::Composition;
use super::matrix::{matrix_of_permutation, IntMatrix};
use crate::error::{Error, Result};

/// Largest `d` for which [`bruhat_leq`] enumerates `S_d`.
pub const BRUHAT_ENUMERATION_CAP: usize = 8;

/// A permutation of `{0, ..., d-1}` given by its list of images.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = alloc::vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return Err(Error::InvalidInput(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(d: usize) -> Self {
        Self { images: (0..d).collect() }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, a: usize) -> usize {
        self.images[a]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let d = self.images.len();
        let mut inv = 0;
        for a in 0..d {
            for b in a + 1..d {
                if self.images[a] > self.images[b] {
                    inv += 1;
                }
            }
        }
        inv
    }

    /// `(self o other)(a) = self(other(a))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&a| self.images[a]).collect() }
    }

    /// Bruhat order via the rank criterion:
    /// `#{a <= i : s(a) >= k} <= #{a <= i : t(a) >= k}` for all `i, k`.
    pub fn bruhat_le(&self, other: &Permutation) -> bool {
        let d = self.len();
        if other.len() != d {
            return false;
        }
        for i in 0..d {
            for k in 0..d {
                let s = self.images[..=i].iter().filter(|&&x| x >= k).count();
                let t = other.images[..=i].iter().filter(|&&x| x >= k).count();
                if s > t {
                    return false;
                }
            }
        }
        true
    }
}

/// All permutations of `{0, ..., d-1}` in lexicographic order of images.
pub fn permutations(d: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..d).collect();
    loop {
        out.push(Permutation { images: current.clone() });
        // next lexicographic permutation
        let Some(i) = (1..d).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..d).rev().find(|&j| current[j] > current[i - 1]).expect("pivot exists");
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

/// The minimal-length permutation `sigma` with `m^sigma = A`, found by scanning `S_d`.
pub fn minimal_representative(a: &IntMatrix) -> Result<Permutation> {
    let (v1, v2) = (a.row_sums(), a.col_sums());
    let d = v1.total() as usize;
    if d > BRUHAT_ENUMERATION_CAP {
        return Err(Error::BoundExceeded { what: "d for permutation enumeration", limit: BRUHAT_ENUMERATION_CAP, got: d });
    }
    let mut best: Option<(usize, Permutation)> = None;
    for sigma in permutations(d) {
        if &matrix_of_permutation(&sigma, &v1, &v2)? == a {
            let l = sigma.length();
            if best.as_ref().map_or(true, |(bl, _)| l < *bl) {
                best = Some((l, sigma));
            }
        }
    }
    Ok(best.expect("m is surjective onto M(v1, v2)").1)
}

/// The minimal double-coset representative built directly from `A`: the
/// letters of each row segment are sent, in increasing order, first to
/// column segment 1, then 2, and so on, each column segment being filled
/// from the bottom.
pub fn minimal_representative_direct(a: &IntMatrix) -> Permutation {
    let n = a.size();
    let v2 = a.col_sums();
    let mut next: Vec<usize> = (0..n).map(|j| v2.segment(j).start).collect();
    let mut images = Vec::with_capacity(a.total() as usize);
    for i in 0..n {
        for j in 0..n {
            for _ in 0..a.get(i, j) {
                images.push(next[j]);
                next[j] += 1;
            }
        }
    }
    Permutation { images }
}

/// `A <= B` in the Bruhat order transported from `S_d` through minimal
/// double-coset representatives.
pub fn bruhat_leq(a: &IntMatrix, b: &IntMatrix) -> Result<bool> {
    if a.size() != b.size() || a.row_sums() != b.row_sums() || a.col_sums() != b.col_sums() {
        return Err(Error::MarginalMismatch(format!("{a} and {b} lie in different M(v1, v2)")));
    }
    let sa = minimal_representative(a)?;
    let sb = minimal_representative(b)?;
    Ok(sa.bruhat_le(&sb))
}

/// The Young subgroup `S_v` as a list of permutations preserving each segment.
pub fn young_subgroup(v: &Composition) -> Vec<Permutation> {
    let d = v.total() as usize;
    permutations(d)
        .into_iter()
        .filter(|p| (0..d).all(|a| v.segment_of(p.image(a)) == v.segment_of(a)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::composition::enumerate_compositions;
    use crate::combinatorics::matrix::{enumerate_matrices, preceq};
    use alloc::collections::BTreeSet;
    use alloc::vec;

    fn mat(rows: &[&[u32]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn permutation_counts() {
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(permutations(4).len(), 24);
        let all = permutations(4);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![2, 0]).is_err());
    }

    #[test]
    fn bruhat_examples() {
        let id = mat(&[&[1, 0], &[0, 1]]);
        let anti = mat(&[&[0, 1], &[1, 0]]);
        assert!(bruhat_leq(&id, &anti).unwrap());
        assert!(!bruhat_leq(&anti, &id).unwrap());
    }

    #[test]
    fn bruhat_cap_is_enforced() {
        let big = IntMatrix::diag(&Composition::new(vec![5, 4]).unwrap());
        assert!(matches!(bruhat_leq(&big, &big), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn image_of_s2_is_all_of_m() {
        let v = Composition::new(vec![1, 1]).unwrap();
        let image: BTreeSet<IntMatrix> =
            permutations(2).iter().map(|s| matrix_of_permutation(s, &v, &v).unwrap()).collect();
        let all: BTreeSet<IntMatrix> = enumerate_matrices(&v, &v).unwrap().into_iter().collect();
        assert_eq!(image, all);
    }

    /// Enumeration and the direct construction give the same representative,
    /// and double cosets are exactly the fibres of `m`.
    #[test]
    fn double_cosets_d_le_4() {
        for d in 0..=4u32 {
            for n in 1..=3 {
                for v1 in enumerate_compositions(n, d) {
                    let y1 = young_subgroup(&v1);
                    for v2 in enumerate_compositions(n, d) {
                        let y2 = young_subgroup(&v2);
                        let mut seen = BTreeSet::new();
                        let mut cosets = 0;
                        for sigma in permutations(d as usize) {
                            if seen.contains(&sigma) {
                                continue;
                            }
                            cosets += 1;
                            let m = matrix_of_permutation(&sigma, &v1, &v2).unwrap();
                            for w2 in &y2 {
                                for w1 in &y1 {
                                    let tau = w2.compose(&sigma).compose(w1);
                                    assert_eq!(matrix_of_permutation(&tau, &v1, &v2).unwrap(), m);
                                    seen.insert(tau);
                                }
                            }
                        }
                        let mats = enumerate_matrices(&v1, &v2).unwrap();
                        assert_eq!(mats.len(), cosets);
                        for a in &mats {
                            assert_eq!(minimal_representative(a).unwrap(), minimal_representative_direct(a));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bruhat_implies_preceq_d_le_4() {
        for d in 0..=4u32 {
            for n in 1..=3 {
                for v1 in enumerate_compositions(n, d) {
                    for v2 in enumerate_compositions(n, d) {
                        let mats = enumerate_matrices(&v1, &v2).unwrap();
                        for a in &mats {
                            for b in &mats {
                                if bruhat_leq(a, b).unwrap() {
                                    assert!(preceq(a, b), "{a} <= {b}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn preceq_is_a_partial_order_d_le_4() {
        for v1 in enumerate_compositions(3, 4) {
            for v2 in enumerate_compositions(3, 4) {
                let mats = enumerate_matrices(&v1, &v2).unwrap();
                for a in &mats {
                    assert!(preceq(a, a));
                    for b in &mats {
                        if a != b && preceq(a, b) {
                            assert!(!preceq(b, a));
                        }
                        for c in &mats {
                            if preceq(a, b) && preceq(b, c) {
                                assert!(preceq(a, c));
                            }
                        }
                    }
                }
            }
        }
    }
}
