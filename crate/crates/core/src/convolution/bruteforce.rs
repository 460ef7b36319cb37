//! Literal fibre sums over configurations of distinct points: the oracle
//! for [`compose`](super::compose).

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use super::operator::ConvOperator;
use crate::combinatorics::{enumerate_compositions, Composition, IntMatrix};
use crate::error::{Error, Result};
use crate::funcspace::{configurations, is_distinct, BlockShape, Config, FinitePoints, Ground};
use crate::Rational;

/// A state: a tuple of pairwise disjoint point sets `(I_1, ..., I_n)`,
/// stored as sorted index lists.
pub type State = Vec<Vec<u16>>;

/// All states of total size `d` with `n` labelled blocks over `N` points.
#[derive(Clone, Debug)]
pub struct StateSpace {
    n: usize,
    states: Vec<State>,
    index: BTreeMap<State, usize>,
}

impl StateSpace {
    pub fn new(n: usize, d: u32, num_points: usize) -> Self {
        let mut states = Vec::new();
        for v in enumerate_compositions(n, d) {
            let shape = BlockShape::of_composition(&v);
            for c in configurations(&shape, num_points) {
                if is_distinct(&c) {
                    states.push(split(&shape, &c));
                }
            }
        }
        states.sort();
        let index = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Self { n, states, index }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn index_of(&self, s: &State) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

fn split(shape: &BlockShape, c: &[u16]) -> State {
    shape.ranges().into_iter().map(|r| c[r].to_vec()).collect()
}

/// Sparse matrix with exact entries; `(row, col)` keys, zeros dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    entries: BTreeMap<(usize, usize), Rational>,
}

impl SparseMatrix {
    pub fn entries(&self) -> &BTreeMap<(usize, usize), Rational> {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_entry(&mut self, r: usize, c: usize, v: Rational) {
        if v.is_zero() {
            return;
        }
        let e = self.entries.entry((r, c)).or_insert_with(Rational::zero);
        *e += v;
        if e.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    /// `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut by_row: BTreeMap<usize, Vec<(usize, &Rational)>> = BTreeMap::new();
        for ((r, c), v) in &other.entries {
            by_row.entry(*r).or_default().push((*c, v));
        }
        let mut out = Self::default();
        for ((r, k), a) in &self.entries {
            if let Some(row) = by_row.get(k) {
                for (c, b) in row {
                    out.add_entry(*r, *c, a * *b);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self { entries: self.entries.iter().map(|((r, c), v)| ((*c, *r), v.clone())).collect() }
    }
}

/// The matrix of an operator on functions on the state space:
/// `(Delta psi)(K) = sum_{J : pr2 J = K} f(J) psi(pr1 J)`, entry `[K][I]`.
pub fn operator_matrix(op: &ConvOperator, space: &StateSpace) -> Result<SparseMatrix> {
    let points = match op.ground() {
        Ground::FiniteSet(p) => p.clone(),
        _ => return Err(Error::Unsupported("the brute-force oracle needs a finite ground set")),
    };
    let mut m = SparseMatrix::default();
    for (a, f) in op.terms() {
        if a.size() != space.n {
            return Err(Error::DimensionMismatch { expected: space.n, found: a.size() });
        }
        let shape = BlockShape::of_matrix(a);
        let table = f.table().ok_or(Error::Unsupported("finite ground without a table"))?;
        for j in configurations(&shape, points.len()) {
            if !is_distinct(&j) {
                continue;
            }
            let (src, tgt) = projections(a, &shape, &j);
            let (Some(col), Some(row)) = (space.index_of(&src), space.index_of(&tgt)) else {
                return Err(Error::DimensionMismatch { expected: space.len(), found: 0 });
            };
            m.add_entry(row, col, table.get(&shape, &j));
        }
    }
    Ok(m)
}

/// `(pr1 J, pr2 J)`: union along rows and along columns.
fn projections(a: &IntMatrix, shape: &BlockShape, j: &Config) -> (State, State) {
    let n = a.size();
    let ranges = shape.ranges();
    let mut rows = alloc::vec![Vec::new(); n];
    let mut cols = alloc::vec![Vec::new(); n];
    for r in 0..n {
        for c in 0..n {
            let pts = &j[ranges[r * n + c].clone()];
            rows[r].extend_from_slice(pts);
            cols[c].extend_from_slice(pts);
        }
    }
    for s in rows.iter_mut().chain(cols.iter_mut()) {
        s.sort_unstable();
    }
    (rows, cols)
}

/// The oracle product: matrices multiply as `M2 * M1` since `op1` acts first.
pub fn compose_bruteforce(op1: &ConvOperator, op2: &ConvOperator, space: &StateSpace) -> Result<SparseMatrix> {
    Ok(operator_matrix(op2, space)?.mul(&operator_matrix(op1, space)?))
}

/// Convenience: the state space matching an operator's finite ground.
pub fn state_space_for(n: usize, d: u32, points: &FinitePoints) -> StateSpace {
    StateSpace::new(n, d, points.len())
}

/// The component of a state.
pub fn composition_of(state: &State) -> Composition {
    Composition::new(state.iter().map(|s| s.len() as u32).collect()).expect("n >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_constant_is_identity_on_its_component() {
        let pts = FinitePoints::range(4);
        let g = Ground::FiniteSet(pts.clone());
        let v = Composition::new(alloc::vec![1, 1]).unwrap();
        let space = state_space_for(2, 2, &pts);
        let m = operator_matrix(&ConvOperator::constant(IntMatrix::diag(&v), &g), &space).unwrap();
        let count = space.states().iter().filter(|s| composition_of(s) == v).count();
        assert_eq!(m.entries().len(), count);
        assert!(m.entries().iter().all(|((r, c), x)| r == c && *x == Rational::from_integer(1.into())));
    }

    #[test]
    fn incompatible_pair_gives_zero() {
        let pts = FinitePoints::range(4);
        let g = Ground::FiniteSet(pts.clone());
        let space = state_space_for(2, 2, &pts);
        let a = ConvOperator::constant(IntMatrix::from_rows(&[[2u32, 0], [0, 0]]).unwrap(), &g);
        let b = ConvOperator::constant(IntMatrix::from_rows(&[[0u32, 0], [0, 2]]).unwrap(), &g);
        assert!(compose_bruteforce(&a, &b, &space).unwrap().entries().is_empty());
    }
}
