//! Writing `Delta(C, h)` as a noncommutative polynomial in the images
//! `tau(E_ij (x) x^k)`, by induction on the length statistic.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::operator::{compose, ConvOperator};
use super::tau::tau;
use crate::combinatorics::{length_statistic, preceq, Composition, IntMatrix};
use crate::error::{Error, Result};
use crate::funcspace::{lift_pij, power_function, power_sum_expansion, BlockShape, BlockSymFunction, Ground, Poly, DEFAULT_DEGREE_CAP};
use crate::Rational;

/// An expression over the generators; products apply their left factor first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorExpr {
    /// `tau(E_ij (x) x^k)`.
    Tau { i: usize, j: usize, k: u32 },
    /// The unit `sum_v Delta(diag v, 1)`.
    Unit,
    Product(Vec<GeneratorExpr>),
    Sum(Vec<GeneratorExpr>),
    Scale(Rational, Box<GeneratorExpr>),
}

impl GeneratorExpr {
    fn scaled(self, c: Rational) -> Self {
        if c.is_one() {
            self
        } else {
            GeneratorExpr::Scale(c, Box::new(self))
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            GeneratorExpr::Tau { .. } | GeneratorExpr::Unit => 1,
            GeneratorExpr::Product(v) | GeneratorExpr::Sum(v) => 1 + v.iter().map(Self::size).sum::<usize>(),
            GeneratorExpr::Scale(_, e) => 1 + e.size(),
        }
    }

    /// Whether every leaf is a generator or the unit.
    pub fn leaves_are_generators(&self) -> bool {
        match self {
            GeneratorExpr::Tau { .. } | GeneratorExpr::Unit => true,
            GeneratorExpr::Product(v) | GeneratorExpr::Sum(v) => v.iter().all(Self::leaves_are_generators),
            GeneratorExpr::Scale(_, e) => e.leaves_are_generators(),
        }
    }
}

/// Evaluates expressions in the degree-`d` algebra with `n` blocks, caching subresults.
pub struct Evaluator {
    n: usize,
    d: u32,
    ground: Ground,
    cache: BTreeMap<GeneratorExpr, ConvOperator>,
}

impl Evaluator {
    pub fn new(n: usize, d: u32, ground: Ground) -> Self {
        Self { n, d, ground, cache: BTreeMap::new() }
    }

    pub fn eval(&mut self, e: &GeneratorExpr) -> Result<ConvOperator> {
        if let Some(op) = self.cache.get(e) {
            return Ok(op.clone());
        }
        let op = match e {
            GeneratorExpr::Tau { i, j, k } => tau(*i, *j, &power_function(*k, &self.ground), self.n, self.d)?,
            GeneratorExpr::Unit => ConvOperator::identity(self.n, self.d, &self.ground),
            GeneratorExpr::Product(factors) => {
                let mut acc = ConvOperator::identity(self.n, self.d, &self.ground);
                for f in factors {
                    let x = self.eval(f)?;
                    acc = compose(&acc, &x)?;
                }
                acc
            }
            GeneratorExpr::Sum(parts) => {
                let mut acc = ConvOperator::zero(self.ground.clone());
                for p in parts {
                    acc = acc.add(&self.eval(p)?)?;
                }
                acc
            }
            GeneratorExpr::Scale(c, inner) => self.eval(inner)?.scale(c),
        };
        self.cache.insert(e.clone(), op.clone());
        Ok(op)
    }
}

/// Result of [`express_in_generators`].
#[derive(Clone, Debug)]
pub struct Expression {
    pub expr: GeneratorExpr,
    /// Longest chain of recursive steps; at most `l(C)`.
    pub depth: usize,
    /// Number of `(C, h)` pairs expanded.
    pub steps: usize,
}

/// Upper bound on expanded `(C, h)` pairs before giving up.
pub const ITERATION_BUDGET: usize = 200_000;

struct Ctx {
    n: usize,
    steps: usize,
    memo: BTreeMap<(IntMatrix, Poly), (GeneratorExpr, usize)>,
    power_sums: BTreeMap<(Vec<u32>, u32), Vec<(Vec<u32>, Rational)>>,
}

impl Ctx {
    fn expansion(&mut self, kappa: &[u32], m: u32) -> Result<Vec<(Vec<u32>, Rational)>> {
        let key = (kappa.to_vec(), m);
        if let Some(e) = self.power_sums.get(&key) {
            return Ok(e.clone());
        }
        let shape = BlockShape::single(m);
        let p = Poly::monomial(&shape, kappa.to_vec(), Rational::one())?;
        let e = power_sum_expansion(&p, m)?;
        self.power_sums.insert(key, e.clone());
        Ok(e)
    }
}

/// Expresses `Delta(C, h)` through generators. `h` must be a polynomial
/// on `X^(C)`.
pub fn express_in_generators(c: &IntMatrix, h: &BlockSymFunction) -> Result<Expression> {
    let poly = match (h.ground(), h.poly()) {
        (Ground::ExactLine, Some(p)) => p.clone(),
        _ => return Err(Error::Unsupported("generation needs a polynomial function")),
    };
    if h.shape() != &BlockShape::of_matrix(c) {
        return Err(Error::ShapeMismatch(format!("function does not live on X^(C) for C = {c}")));
    }
    if poly.max_degree() > DEFAULT_DEGREE_CAP {
        return Err(Error::DegreeCap { cap: DEFAULT_DEGREE_CAP, got: poly.max_degree() });
    }
    let mut ctx = Ctx { n: c.size(), steps: 0, memo: BTreeMap::new(), power_sums: BTreeMap::new() };
    let (expr, depth) = express(&mut ctx, c, &poly)?;
    if depth as u64 > length_statistic(c) {
        return Err(Error::Hypothesis(format!("recursion depth {depth} exceeds l(C)")));
    }
    Ok(Expression { expr, depth, steps: ctx.steps })
}

/// `1_v = Delta(diag v, 1)`, as a product of `(tau(E_ii (x) 1) - k) / (v_i - k)`.
pub fn idempotent(v: &Composition) -> GeneratorExpr {
    let d = v.total();
    let mut factors = Vec::new();
    for i in 0..v.len() {
        for k in 0..=d {
            if k == v.get(i) {
                continue;
            }
            let shifted = GeneratorExpr::Sum(vec![
                GeneratorExpr::Tau { i, j: i, k: 0 },
                GeneratorExpr::Unit.scaled(Rational::from_integer((-i64::from(k)).into())),
            ]);
            let denom = i64::from(v.get(i)) - i64::from(k);
            factors.push(shifted.scaled(Rational::new(1.into(), denom.into())));
        }
    }
    GeneratorExpr::Product(factors)
}

fn express(ctx: &mut Ctx, c: &IntMatrix, h: &Poly) -> Result<(GeneratorExpr, usize)> {
    if let Some(hit) = ctx.memo.get(&(c.clone(), h.clone())) {
        return Ok(hit.clone());
    }
    ctx.steps += 1;
    if ctx.steps > ITERATION_BUDGET {
        return Err(Error::IterationBudget(ITERATION_BUDGET));
    }
    let out = if c.is_diagonal() {
        (express_diagonal(ctx, c, h)?, 0)
    } else {
        express_step(ctx, c, h)?
    };
    ctx.memo.insert((c.clone(), h.clone()), out.clone());
    Ok(out)
}

/// `Delta(diag v, h)` from products of `tau(E_ii (x) x^k)` restricted to `X^(v)`.
fn express_diagonal(ctx: &mut Ctx, c: &IntMatrix, h: &Poly) -> Result<GeneratorExpr> {
    let n = ctx.n;
    let v = c.diagonal();
    let shape = BlockShape::of_matrix(c);
    let ranges = shape.ranges();
    // power-sum monomial as a sorted list of (i, k) -> coefficient
    let mut acc: BTreeMap<Vec<(usize, u32)>, Rational> = BTreeMap::new();
    for (key, coef) in h.terms() {
        let mut partial: Vec<(Vec<(usize, u32)>, Rational)> = vec![(Vec::new(), coef.clone())];
        for i in 0..n {
            let r = ranges[i * n + i].clone();
            let exp = ctx.expansion(&key[r], v.get(i))?;
            let mut next = Vec::new();
            for (word, c0) in &partial {
                for (rho, c1) in &exp {
                    let mut w = word.clone();
                    w.extend(rho.iter().map(|&k| (i, k)));
                    next.push((w, c0 * c1));
                }
            }
            partial = next;
        }
        for (w, c0) in partial {
            *acc.entry(w).or_insert_with(Rational::zero) += c0;
        }
    }
    let idem = idempotent(&v);
    let mut parts = Vec::new();
    for (word, coef) in acc {
        if coef.is_zero() {
            continue;
        }
        let mut factors = vec![idem.clone()];
        factors.extend(word.into_iter().map(|(i, k)| GeneratorExpr::Tau { i, j: i, k }));
        parts.push(GeneratorExpr::Product(factors).scaled(coef));
    }
    Ok(GeneratorExpr::Sum(parts))
}

/// One induction step for non-diagonal `C`.
fn express_step(ctx: &mut Ctx, c: &IntMatrix, h: &Poly) -> Result<(GeneratorExpr, usize)> {
    let n = ctx.n;
    // (p, q): right-lexicographic maximum of the upper support, else the
    // first nonzero lower column and its first row.
    let upper = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| c.get(i, j) > 0).max_by_key(|&(i, j)| (j, i));
    let (p, q, nb) = match upper {
        Some((p, q)) => (p, q, p + 1),
        None => {
            let (p, q) = (0..n)
                .flat_map(|i| (0..i).map(move |j| (i, j)))
                .filter(|&(i, j)| c.get(i, j) > 0)
                .min_by_key(|&(i, j)| (j, i))
                .expect("C is not diagonal");
            (p, q, p - 1)
        }
    };
    let mass = c.get(p, q);
    let v1 = c.row_sums();
    let b = c.add_unit(nb, q, i64::from(mass))?.add_unit(p, q, -i64::from(mass))?;
    let a = IntMatrix::diag(&v1).add_unit(p, nb, i64::from(mass))?.add_unit(p, p, -i64::from(mass))?;

    let shape_c = BlockShape::of_matrix(c);
    let shape_b = BlockShape::of_matrix(&b);
    let x_shape = BlockShape::single(mass);
    let rc = shape_c.ranges();
    let rb = shape_b.ranges();
    let (xb, yb) = (p * n + q, nb * n + q);
    let y_size = c.get(nb, q);

    // h = sum_mu m_mu(X) G_mu(X u Y, rest)
    let mut g: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
    for (key, coef) in h.terms() {
        let lambda = &key[rc[xb].clone()];
        let kappa = &key[rc[yb].clone()];
        let mut rest_key = vec![0u32; shape_b.d()];
        for blk in 0..n * n {
            if blk != xb && blk != yb {
                rest_key[rb[blk].clone()].copy_from_slice(&key[rc[blk].clone()]);
            }
        }
        let rest = Poly::monomial(&shape_b, rest_key, Rational::one())?;
        let m_lambda = Poly::monomial(&x_shape, lambda.to_vec(), Rational::one())?;
        for (rho, a_rho) in ctx.expansion(kappa, y_size)? {
            // p_k(Y) = p_k(X u Y) - p_k(X)
            for mask in 0u32..(1 << rho.len()) {
                let mut x_part = m_lambda.clone();
                let mut b_part = rest.clone();
                let mut sign = Rational::one();
                for (t, &k) in rho.iter().enumerate() {
                    if mask & (1 << t) != 0 {
                        x_part = x_part.multiply(&Poly::power_sum(&x_shape, 0, k), &x_shape, DEFAULT_DEGREE_CAP)?;
                        sign = -sign;
                    } else {
                        b_part = b_part.multiply(&Poly::power_sum(&shape_b, yb, k), &shape_b, DEFAULT_DEGREE_CAP)?;
                    }
                }
                let scale = coef * &a_rho * sign;
                for (mu, e_mu) in x_part.terms() {
                    let entry = g.entry(mu.clone()).or_default();
                    *entry = entry.add(&b_part.scale(&(&scale * e_mu)));
                }
            }
        }
    }

    let ground = Ground::ExactLine;
    let idem = idempotent(&v1);
    let mut parts = Vec::new();
    let mut product = ConvOperator::zero(ground.clone());
    let mut depth = 0;
    for (mu, g_mu) in g {
        if g_mu.is_zero() {
            continue;
        }
        let f_mu = lift_pij(&BlockSymFunction::from_poly(x_shape.clone(), Poly::monomial(&x_shape, mu.clone(), Rational::one())?), &a, p, nb)?;
        let left = ConvOperator::single(a.clone(), f_mu)?;
        let right = ConvOperator::single(b.clone(), BlockSymFunction::from_poly(shape_b.clone(), g_mu.clone()))?;
        product = product.add(&compose(&left, &right)?)?;

        let mut leaf = vec![idem.clone()];
        leaf.extend(mu.iter().map(|&k| GeneratorExpr::Tau { i: p, j: nb, k }));
        let (sub, sub_depth) = express(ctx, &b, &g_mu)?;
        depth = depth.max(sub_depth + 1);
        parts.push(GeneratorExpr::Product(vec![GeneratorExpr::Product(leaf).scaled(multiplicity_factor(&mu)), sub]));
    }

    let target = ConvOperator::single(c.clone(), BlockSymFunction::from_poly(shape_c, h.clone()))?;
    let remainder = product.sub(&target)?;
    for (c2, f2) in remainder.terms() {
        if c2 == c || !preceq(c2, c) {
            return Err(Error::Hypothesis(format!("remainder term {c2} is not strictly below {c}")));
        }
        let (sub, sub_depth) = express(ctx, c2, f2.poly().expect("exact ground"))?;
        depth = depth.max(sub_depth + 1);
        parts.push(sub.scaled(Rational::from_integer((-1).into())));
    }
    Ok((GeneratorExpr::Sum(parts), depth))
}

/// `1 / prod_k mult_k!` over the multiplicities of the exponent values (zeros included).
fn multiplicity_factor(mu: &[u32]) -> Rational {
    let mut denom = num_bigint::BigInt::one();
    let mut run = 1u64;
    for w in mu.windows(2) {
        if w[0] == w[1] {
            run += 1;
            denom *= run;
        } else {
            run = 1;
        }
    }
    Rational::new(1.into(), denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[u32]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn idempotent_selects_component() {
        let v = Composition::new(vec![1, 1]).unwrap();
        let mut ev = Evaluator::new(2, 2, Ground::ExactLine);
        let op = ev.eval(&idempotent(&v)).unwrap();
        assert_eq!(op, ConvOperator::constant(IntMatrix::diag(&v), &Ground::ExactLine));
    }

    #[test]
    fn antidiagonal_constant() {
        let c = mat(&[&[0, 1], &[1, 0]]);
        let h = BlockSymFunction::one(BlockShape::of_matrix(&c), &Ground::ExactLine);
        let e = express_in_generators(&c, &h).unwrap();
        assert!(e.depth as u64 <= length_statistic(&c));
        let op = Evaluator::new(2, 2, Ground::ExactLine).eval(&e.expr).unwrap();
        assert_eq!(op, ConvOperator::single(c, h).unwrap());
    }

    #[test]
    fn finite_input_is_rejected() {
        let c = mat(&[&[1, 0], &[0, 1]]);
        let g = Ground::FiniteSet(crate::funcspace::FinitePoints::range(3));
        let h = BlockSymFunction::one(BlockShape::of_matrix(&c), &g);
        assert!(matches!(express_in_generators(&c, &h), Err(Error::Unsupported(_))));
    }
}
