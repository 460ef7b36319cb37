use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::combinatorics::{all_matrices, transfer_arrays, IntMatrix};
use crate::error::Result;

/// `c^C_AB = sum_{T in T(A,B), T^13 = C} prod_{i,k} (sum_j t_ijk)! / prod_j t_ijk!`.
pub type StructureConstants = BTreeMap<(IntMatrix, IntMatrix, IntMatrix), BigUint>;

fn factorial(k: u32) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, x| acc * x)
}

/// The full multiplication table of the Schur algebra `S(n, d)`; only
/// nonzero constants are stored.
pub fn schur_structure_constants(n: usize, d: u32) -> Result<StructureConstants> {
    let basis = all_matrices(n, d);
    let mut table = StructureConstants::new();
    for a in &basis {
        for b in &basis {
            if a.col_sums() != b.row_sums() {
                continue;
            }
            for t in transfer_arrays(a, b)? {
                let mut weight = BigUint::one();
                for i in 0..n {
                    for k in 0..n {
                        let mut total = 0;
                        let mut denom = BigUint::one();
                        for j in 0..n {
                            total += t.get(i, j, k);
                            denom *= factorial(t.get(i, j, k));
                        }
                        weight *= factorial(total) / denom;
                    }
                }
                *table.entry((a.clone(), b.clone(), t.t13())).or_default() += weight;
            }
        }
    }
    Ok(table)
}

/// `sum_E c^E_AB c^D_EC == sum_F c^D_AF c^F_BC` for every quadruple.
///
/// Only composable triples can give nonzero sides, so the check walks
/// those and compares the two products as sparse vectors.
pub fn is_associative(n: usize, d: u32, table: &StructureConstants) -> bool {
    let mut rows: BTreeMap<(IntMatrix, IntMatrix), Vec<(IntMatrix, BigUint)>> = BTreeMap::new();
    for ((a, b, c), k) in table {
        rows.entry((a.clone(), b.clone())).or_default().push((c.clone(), k.clone()));
    }
    let product = |x: &IntMatrix, y: &IntMatrix| rows.get(&(x.clone(), y.clone())).map(Vec::as_slice).unwrap_or(&[]);
    let basis = all_matrices(n, d);
    for a in &basis {
        for b in basis.iter().filter(|b| b.row_sums() == a.col_sums()) {
            for c in basis.iter().filter(|c| c.row_sums() == b.col_sums()) {
                let mut lhs: BTreeMap<&IntMatrix, BigUint> = BTreeMap::new();
                for (e, k) in product(a, b) {
                    for (dd, m) in product(e, c) {
                        *lhs.entry(dd).or_default() += k * m;
                    }
                }
                let mut rhs: BTreeMap<&IntMatrix, BigUint> = BTreeMap::new();
                for (f, k) in product(b, c) {
                    for (dd, m) in product(a, f) {
                        *rhs.entry(dd).or_default() += k * m;
                    }
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}
