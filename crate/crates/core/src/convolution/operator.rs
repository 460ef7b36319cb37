use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::combinatorics::{enumerate_compositions, transfer_arrays, IntMatrix, Marginal};
use crate::error::{Error, Result};
use crate::funcspace::{BlockShape, BlockSymFunction, FinitePoints, Ground, MergeMap};
use crate::Rational;

/// A finite sum of convolution operators `Delta(A, f)`, one function per matrix.
///
/// `Delta(A, f)` sends functions on `X^(rowSums A)` to functions on
/// `X^(colSums A)`. Zero terms are pruned, so equal operators compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvOperator {
    ground: Ground,
    terms: BTreeMap<IntMatrix, BlockSymFunction>,
}

impl ConvOperator {
    pub fn zero(ground: Ground) -> Self {
        Self { ground, terms: BTreeMap::new() }
    }

    /// `Delta(A, f)`.
    pub fn single(a: IntMatrix, f: BlockSymFunction) -> Result<Self> {
        let mut op = Self::zero(f.ground().clone());
        op.add_term(a, f)?;
        Ok(op)
    }

    /// `Delta(A, 1)`.
    pub fn constant(a: IntMatrix, ground: &Ground) -> Self {
        let f = BlockSymFunction::one(BlockShape::of_matrix(&a), ground);
        Self::single(a, f).expect("shape matches")
    }

    /// The unit `sum_v Delta(diag v, 1)` of the degree-`d` algebra.
    pub fn identity(n: usize, d: u32, ground: &Ground) -> Self {
        let mut op = Self::zero(ground.clone());
        for v in enumerate_compositions(n, d) {
            let a = IntMatrix::diag(&v);
            let f = BlockSymFunction::one(BlockShape::of_matrix(&a), ground);
            op.add_term(a, f).expect("shape matches");
        }
        op
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn terms(&self) -> &BTreeMap<IntMatrix, BlockSymFunction> {
        &self.terms
    }

    pub fn term(&self, a: &IntMatrix) -> Option<&BlockSymFunction> {
        self.terms.get(a)
    }

    pub fn support(&self) -> Vec<IntMatrix> {
        self.terms.keys().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, a: IntMatrix, f: BlockSymFunction) -> Result<()> {
        if f.ground() != &self.ground {
            return Err(Error::GroundMismatch);
        }
        if f.shape() != &BlockShape::of_matrix(&a) {
            return Err(Error::ShapeMismatch(alloc::format!("function does not live on X^(A) for A = {a}")));
        }
        let sum = match self.terms.remove(&a) {
            Some(g) => g.add(&f)?,
            None => f,
        };
        if !sum.is_zero() {
            self.terms.insert(a, sum);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch);
        }
        let mut out = self.clone();
        for (a, f) in &other.terms {
            out.add_term(a.clone(), f.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.ground.clone());
        for (a, f) in &self.terms {
            out.add_term(a.clone(), f.scale(c)).expect("same shape");
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&Rational::from_integer((-1).into())))
    }

    pub fn scale_complex(&self, c: Complex64) -> Result<Self> {
        let mut out = Self::zero(self.ground.clone());
        for (a, f) in &self.terms {
            out.add_term(a.clone(), f.scale_complex(c)?)?;
        }
        Ok(out)
    }

    /// Restriction of a polynomial operator to a finite set of points.
    pub fn to_finite(&self, points: &FinitePoints) -> Result<Self> {
        let mut out = Self::zero(Ground::FiniteSet(points.clone()));
        for (a, f) in &self.terms {
            out.add_term(a.clone(), f.to_finite(points)?)?;
        }
        Ok(out)
    }

    /// Keep only the terms with the given source composition (row sums).
    pub fn restrict_source(&self, v: &crate::combinatorics::Composition) -> Self {
        let terms = self.terms.iter().filter(|(a, _)| &a.row_sums() == v).map(|(a, f)| (a.clone(), f.clone())).collect();
        Self { ground: self.ground.clone(), terms }
    }
}

/// `Delta(A, f) Delta(B, g) = sum_{T in T(A, B)} Delta(T^13, pr13_*(pr12^* f . pr23^* g))`,
/// extended bilinearly; pairs with `colSums A != rowSums B` contribute zero.
///
/// The left operand is applied first.
pub fn compose(op1: &ConvOperator, op2: &ConvOperator) -> Result<ConvOperator> {
    if op1.ground != op2.ground {
        return Err(Error::GroundMismatch);
    }
    let mut out = ConvOperator::zero(op1.ground.clone());
    for (a, f) in &op1.terms {
        let middle = a.col_sums();
        for (b, g) in &op2.terms {
            if a.size() != b.size() || b.row_sums() != middle {
                continue;
            }
            for t in transfer_arrays(a, b)? {
                let p12 = MergeMap::projection(&t, Marginal::M12);
                let p23 = MergeMap::projection(&t, Marginal::M23);
                let p13 = MergeMap::projection(&t, Marginal::M13);
                let prod = f.pullback(&p12)?.multiply(&g.pullback(&p23)?)?;
                out.add_term(t.t13(), prod.transfer(&p13)?)?;
            }
        }
    }
    Ok(out)
}

/// The map `X^(B) -> X^(rowSums B)`, landing in the diagonal shape `X^(diag v)`.
fn row_merge_to_diagonal(b: &IntMatrix) -> MergeMap {
    let n = b.size();
    let assign = (0..n * n).map(|blk| (blk / n) * n + blk / n).collect();
    let target = BlockShape::of_matrix(&IntMatrix::diag(&b.row_sums()));
    MergeMap::new(BlockShape::of_matrix(b), target, assign).expect("row sums are additive")
}

/// Composition when every term of `op1` is diagonal:
/// `Delta(diag v, f) Delta(B, g) = Delta(B, g . p_2^* f)`.
pub fn compose_diagonal(op1: &ConvOperator, op2: &ConvOperator) -> Result<ConvOperator> {
    if op1.ground != op2.ground {
        return Err(Error::GroundMismatch);
    }
    let mut out = ConvOperator::zero(op1.ground.clone());
    for (a, f) in &op1.terms {
        if !a.is_diagonal() {
            return Err(Error::Shape(alloc::format!("{a} is not diagonal")));
        }
        let v = a.diagonal();
        for (b, g) in &op2.terms {
            if b.size() != a.size() || b.row_sums() != v {
                continue;
            }
            let h = g.multiply(&f.pullback(&row_merge_to_diagonal(b))?)?;
            out.add_term(b.clone(), h)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::Composition;
    use alloc::vec;

    fn mat(rows: &[&[u32]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn schur_worked_product() {
        let g = Ground::ExactLine;
        let a = ConvOperator::constant(mat(&[&[0, 1], &[0, 1]]), &g);
        let b = ConvOperator::constant(mat(&[&[0, 0], &[1, 1]]), &g);
        let expected = ConvOperator::constant(mat(&[&[1, 0], &[0, 1]]), &g)
            .add(&ConvOperator::constant(mat(&[&[0, 1], &[1, 0]]), &g))
            .unwrap();
        assert_eq!(compose(&a, &b).unwrap(), expected);
    }

    #[test]
    fn identity_is_a_unit() {
        let g = Ground::ExactLine;
        let one = ConvOperator::identity(2, 2, &g);
        let op = ConvOperator::constant(mat(&[&[0, 1], &[1, 0]]), &g);
        assert_eq!(compose(&op, &one).unwrap(), op);
        assert_eq!(compose(&one, &op).unwrap(), op);
    }

    #[test]
    fn incompatible_terms_vanish() {
        let g = Ground::ExactLine;
        let a = ConvOperator::constant(mat(&[&[2, 0], &[0, 0]]), &g);
        let b = ConvOperator::constant(mat(&[&[0, 0], &[0, 2]]), &g);
        assert!(compose(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn diagonal_shortcut_matches() {
        let g = Ground::ExactLine;
        let v = Composition::new(vec![1, 2]).unwrap();
        let d = IntMatrix::diag(&v);
        let shape = BlockShape::of_matrix(&d);
        let f = crate::funcspace::Poly::power_sum(&shape, 3, 1);
        let op1 = ConvOperator::single(d, BlockSymFunction::from_poly(shape, f)).unwrap();
        let op2 = ConvOperator::constant(mat(&[&[0, 1], &[2, 0]]), &g);
        assert_eq!(compose(&op1, &op2).unwrap(), compose_diagonal(&op1, &op2).unwrap());
    }
}
