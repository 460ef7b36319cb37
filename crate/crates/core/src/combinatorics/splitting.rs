use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::array::{transfer_arrays, TransferArray};
use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Position of the single off-diagonal entry of `A`: `(p, p+1)` or `(p, p-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

impl Side {
    /// The neighbour row `p +- 1`, if it exists.
    fn neighbour(self, p: usize, n: usize) -> Option<usize> {
        match self {
            Side::Upper => (p + 1 < n).then_some(p + 1),
            Side::Lower => p.checked_sub(1),
        }
    }
}

fn check_shape(a: &IntMatrix, b: &IntMatrix, p: usize, side: Side) -> Result<usize> {
    let n = a.size();
    let q = side
        .neighbour(p, n)
        .ok_or_else(|| Error::Shape(format!("no neighbour of row {} on the {side:?} side", p + 1)))?;
    for i in 0..n {
        for j in 0..n {
            if i != j && (i, j) != (p, q) && a.get(i, j) != 0 {
                return Err(Error::Shape(format!("{a} has an off-diagonal entry at ({},{})", i + 1, j + 1)));
            }
        }
    }
    if b.size() != n || a.col_sums() != b.row_sums() {
        return Err(Error::MarginalMismatch(format!("{a} and {b} are not composable")));
    }
    Ok(q)
}

/// `T(s)` for a splitting tuple `s`: the array that routes `s_k` points of
/// the `(p, q)` block of `A` into column `k`.
fn array_of(a: &IntMatrix, b: &IntMatrix, p: usize, q: usize, s: &[u32]) -> TransferArray {
    let n = a.size();
    let mut t = TransferArray::zeros(n);
    for j in 0..n {
        for k in 0..n {
            if j == q {
                t.set(p, q, k, s[k]);
                t.set(q, q, k, b.get(q, k) - s[k]);
            } else {
                t.set(j, j, k, b.get(j, k));
            }
        }
    }
    t
}

fn bounded_tuples(bounds: &[u32], total: u32) -> Vec<Vec<u32>> {
    fn go(bounds: &[u32], left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == bounds.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in 0..=bounds[cur.len()].min(left) {
            cur.push(x);
            go(bounds, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(bounds, total, &mut Vec::new(), &mut out);
    out
}

/// All tuples `s` with `0 <= s_k <= b_{q,k}`, `sum s = a_{p,q}` (where
/// `q = p +- 1`), each paired with its array `T(s)`.
///
/// Checks `T(s)^13 = B + sum_k s_k (E_pk - E_qk)` and that the arrays are
/// exactly `transfer_arrays(A, B)`.
pub fn splitting_set(a: &IntMatrix, b: &IntMatrix, p: usize, side: Side) -> Result<Vec<(Vec<u32>, TransferArray)>> {
    let q = check_shape(a, b, p, side)?;
    let n = a.size();
    let bounds: Vec<u32> = (0..n).map(|k| b.get(q, k)).collect();
    let mut out = Vec::new();
    for s in bounded_tuples(&bounds, a.get(p, q)) {
        let t = array_of(a, b, p, q, &s);
        let mut expected = b.clone();
        for k in 0..n {
            expected.set(p, k, expected.get(p, k) + s[k]);
            expected.set(q, k, expected.get(q, k) - s[k]);
        }
        if t.t13() != expected {
            return Err(Error::Hypothesis(format!("T(s)^13 differs from the moved matrix for s = {s:?}")));
        }
        out.push((s, t));
    }
    let ours: BTreeSet<&TransferArray> = out.iter().map(|(_, t)| t).collect();
    let all = transfer_arrays(a, b)?;
    if ours.len() != out.len() || all.len() != out.len() || !all.iter().all(|t| ours.contains(t)) {
        return Err(Error::Hypothesis("splitting set is not in bijection with T(A, B)".into()));
    }
    Ok(out)
}

/// The leading array of a product `Delta(A, .) Delta(B, .)` and its matrix
/// `C = B + a (E_pm - E_qm)`, where `m` is the last (upper case) or first
/// (lower case) nonzero column of row `q = p +- 1` of `B`.
pub fn leading_array(a: &IntMatrix, b: &IntMatrix, p: usize, side: Side) -> Result<(TransferArray, IntMatrix)> {
    let q = check_shape(a, b, p, side)?;
    let n = a.size();
    let mass = a.get(p, q);
    let mut cols = (0..n).filter(|&k| b.get(q, k) != 0);
    let m = match side {
        Side::Upper => cols.next_back(),
        Side::Lower => cols.next(),
    };
    let Some(m) = m else {
        if mass == 0 {
            let s = vec![0; n];
            return Ok((array_of(a, b, p, q, &s), b.clone()));
        }
        return Err(Error::Hypothesis(format!("row {} of {b} is zero", q + 1)));
    };
    if b.get(q, m) < mass {
        return Err(Error::Hypothesis(format!(
            "b_({},{}) = {} is smaller than a_({},{}) = {mass}",
            q + 1,
            m + 1,
            b.get(q, m),
            p + 1,
            q + 1
        )));
    }
    let mut s = vec![0; n];
    s[m] = mass;
    let c = b.add_unit(p, m, i64::from(mass))?.add_unit(q, m, -i64::from(mass))?;
    Ok((array_of(a, b, p, q, &s), c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::composition::{enumerate_compositions, Composition};
    use crate::combinatorics::matrix::{enumerate_matrices, preceq};

    fn mat(rows: &[&[u32]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn worked_example() {
        let a = mat(&[&[0, 1], &[0, 1]]);
        let b = mat(&[&[0, 0], &[1, 1]]);
        let set = splitting_set(&a, &b, 0, Side::Upper).unwrap();
        let tuples: BTreeSet<Vec<u32>> = set.into_iter().map(|(s, _)| s).collect();
        assert_eq!(tuples, [vec![1, 0], vec![0, 1]].into_iter().collect());
        let (t, c) = leading_array(&a, &b, 0, Side::Upper).unwrap();
        assert_eq!(c, mat(&[&[0, 1], &[1, 0]]));
        assert_eq!(t.t13(), c);
    }

    #[test]
    fn zero_mass_moves_nothing() {
        let a = mat(&[&[1, 0], &[0, 1]]);
        let b = mat(&[&[0, 1], &[1, 0]]);
        let set = splitting_set(&a, &b, 0, Side::Upper).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set[0].0, vec![0, 0]);
        assert_eq!(set[0].1.t13(), b);
        assert_eq!(leading_array(&a, &b, 0, Side::Upper).unwrap().1, b);
    }

    #[test]
    fn shape_is_checked() {
        let a = mat(&[&[0, 1], &[1, 0]]);
        let b = mat(&[&[1, 0], &[0, 1]]);
        assert!(matches!(splitting_set(&a, &b, 0, Side::Upper), Err(Error::Shape(_))));
        assert!(matches!(splitting_set(&b, &b, 1, Side::Upper), Err(Error::Shape(_))));
    }

    #[test]
    fn hypothesis_is_checked() {
        let a = mat(&[&[0, 2], &[0, 0]]);
        let b = mat(&[&[0, 0], &[1, 1]]);
        assert!(matches!(leading_array(&a, &b, 0, Side::Upper), Err(Error::Hypothesis(_))));
    }

    /// Every qualifying pair with n = 3, d <= 3, both sides.
    #[test]
    fn exhaustive_dominance() {
        let n = 3;
        for d in 0..=3 {
            for v in enumerate_compositions(n, d) {
                for p in 0..n {
                    for side in [Side::Upper, Side::Lower] {
                        let Some(q) = side.neighbour(p, n) else { continue };
                        for mass in 0..=v.get(p) {
                            let mut a = IntMatrix::diag(&v);
                            a.set(p, p, v.get(p) - mass);
                            a.set(p, q, mass);
                            let w: Composition = a.col_sums();
                            for u in enumerate_compositions(n, d) {
                                for b in enumerate_matrices(&w, &u).unwrap() {
                                    let set = splitting_set(&a, &b, p, side).unwrap();
                                    let Ok((_, c)) = leading_array(&a, &b, p, side) else { continue };
                                    for (_, t) in &set {
                                        let other = t.t13();
                                        assert!(preceq(&other, &c), "{other} vs {c}");
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
