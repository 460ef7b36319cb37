//! Compositions, integer matrices, transfer arrays and the two partial
//! orders on `M(v1, v2)`.

mod array;
mod composition;
mod matrix;
mod permutation;
mod splitting;

pub use array::{transfer_arrays, Marginal, TransferArray};
pub use composition::{enumerate_compositions, Composition};
pub use matrix::{
    enumerate_matrices, generator_matrix, length_statistic, matrix_of_permutation, preceq, IntMatrix,
};
pub use permutation::{
    bruhat_leq, minimal_representative, minimal_representative_direct, permutations, young_subgroup,
    Permutation, BRUHAT_ENUMERATION_CAP,
};
pub use splitting::{leading_array, splitting_set, Side};

/// All matrices with `n` rows and total `d`, sorted.
pub fn all_matrices(n: usize, d: u32) -> alloc::vec::Vec<IntMatrix> {
    let comps = enumerate_compositions(n, d);
    let mut out = alloc::vec::Vec::new();
    for v1 in &comps {
        for v2 in &comps {
            out.extend(enumerate_matrices(v1, v2).expect("same n and d"));
        }
    }
    out.sort();
    out
}
