use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use super::bruteforce::{SparseMatrix, State, StateSpace};
use super::operator::ConvOperator;
use crate::combinatorics::{enumerate_compositions, generator_matrix, IntMatrix};
use crate::error::{Error, Result};
use crate::funcspace::{lift_pii, lift_pij, BlockSymFunction, FinitePoints};
use crate::Rational;

/// Image of `E_ij (x) f1` in the degree-`d` convolution algebra:
/// `sum_{v_j >= 1} Delta(A_ij(v), p_ij^* f1)` for `i != j` and
/// `sum_v Delta(diag v, p_ii^* f1)` for `i == j`.
pub fn tau(i: usize, j: usize, f1: &BlockSymFunction, n: usize, d: u32) -> Result<ConvOperator> {
    if i >= n || j >= n {
        return Err(Error::InvalidInput(alloc::format!("indices must be below n = {n}")));
    }
    let mut op = ConvOperator::zero(f1.ground().clone());
    for v in enumerate_compositions(n, d) {
        if i == j {
            op.add_term(IntMatrix::diag(&v), lift_pii(f1, &v, i)?)?;
        } else if v.get(j) >= 1 {
            let a = generator_matrix(&v, i, j)?;
            let f = lift_pij(f1, &a, i, j)?;
            op.add_term(a, f)?;
        }
    }
    Ok(op)
}

/// `[x, y] = x y - y x` with products read left-acts-first, as in `compose`.
pub fn commutator(x: &ConvOperator, y: &ConvOperator) -> Result<ConvOperator> {
    super::compose(x, y)?.sub(&super::compose(y, x)?)
}

/// A formal combination of basis vectors `e_I`, `I = (I_1, ..., I_n)` a
/// labelled partition of a fixed set of point indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorState {
    terms: BTreeMap<State, Rational>,
}

impl TensorState {
    pub fn basis(state: State) -> Self {
        let mut terms = BTreeMap::new();
        let mut state = state;
        for b in &mut state {
            b.sort_unstable();
        }
        terms.insert(state, Rational::from_integer(1.into()));
        Self { terms }
    }

    pub fn terms(&self) -> &BTreeMap<State, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&mut self, s: State, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(s.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&s);
        }
    }
}

/// `E_ij(f) e_I = sum_{nu in I_j} f(nu) e_{I'}` where `I'` moves `nu` from
/// `I_j` to `I_i`; for `i == j` it is the diagonal action `sum_{nu in I_i} f(nu) e_I`.
pub fn apply_to_tensor(
    i: usize,
    j: usize,
    f1: impl Fn(&Rational) -> Rational,
    points: &FinitePoints,
    state: &TensorState,
) -> TensorState {
    let mut out = TensorState::default();
    for (s, c) in &state.terms {
        for &nu in &s[j] {
            let w = f1(&points.points()[nu as usize]) * c;
            let mut t = s.clone();
            if i != j {
                t[j].retain(|&x| x != nu);
                t[i].push(nu);
                t[i].sort_unstable();
            }
            out.add(t, w);
        }
    }
    out
}

/// The matrix of `E_ij(f)` on the span of the states using exactly the
/// point set `support`, entry `[I'][I]`, indexed through `space`.
pub fn tensor_matrix(
    i: usize,
    j: usize,
    f1: impl Fn(&Rational) -> Rational + Copy,
    points: &FinitePoints,
    space: &StateSpace,
    support: &[u16],
) -> SparseMatrix {
    let mut m = SparseMatrix::default();
    for (col, s) in space.states().iter().enumerate() {
        if !uses_exactly(s, support) {
            continue;
        }
        let image = apply_to_tensor(i, j, f1, points, &TensorState::basis(s.clone()));
        for (t, c) in image.terms() {
            let row = space.index_of(t).expect("moves preserve the point set");
            m.add_entry(row, col, c.clone());
        }
    }
    m
}

pub fn uses_exactly(s: &State, support: &[u16]) -> bool {
    let mut all: Vec<u16> = s.iter().flatten().copied().collect();
    all.sort_unstable();
    let mut sup = support.to_vec();
    sup.sort_unstable();
    all == sup
}

/// Restriction of an operator matrix to rows and columns whose states use
/// exactly `support`.
pub fn restrict_to_support(m: &SparseMatrix, space: &StateSpace, support: &[u16]) -> SparseMatrix {
    let keep = |k: usize| uses_exactly(&space.states()[k], support);
    let mut out = SparseMatrix::default();
    for ((r, c), v) in m.entries() {
        if keep(*r) && keep(*c) {
            out.add_entry(*r, *c, v.clone());
        }
    }
    out
}
