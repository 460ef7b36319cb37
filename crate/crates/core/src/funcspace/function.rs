use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::poly::{Poly, DEFAULT_DEGREE_CAP};
use super::sampled::Sampled;
use super::shape::{BlockShape, MergeMap};
use super::table::{FinitePoints, Table};
use crate::combinatorics::{Composition, IntMatrix};
use crate::error::{Error, Result};
use crate::Rational;

/// The concrete model of the curve.
#[derive(Clone, Debug, PartialEq)]
pub enum Ground {
    /// The affine line over the rationals; functions are polynomials.
    ExactLine,
    /// A finite set of distinct rational points; functions are tables.
    FiniteSet(FinitePoints),
    /// `C / (Z + tau Z)`; functions are evaluation trees.
    TorusSampled { tau: Complex64 },
}

impl Ground {
    pub fn torus(tau: Complex64) -> Result<Self> {
        if !(tau.im > 0.0) {
            return Err(Error::InvalidInput(format!("Im(tau) must be positive, got {}", tau.im)));
        }
        Ok(Ground::TorusSampled { tau })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Ground::ExactLine => "exact_line",
            Ground::FiniteSet(_) => "finite_set",
            Ground::TorusSampled { .. } => "torus_sampled",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Payload {
    Poly(Poly),
    Table(Table),
    Sampled(Sampled),
}

/// A function on `prod_b X^(m_b)`, symmetric inside every block.
#[derive(Clone, Debug)]
pub struct BlockSymFunction {
    shape: BlockShape,
    ground: Ground,
    payload: Payload,
}

impl PartialEq for BlockSymFunction {
    /// Exact equality for polynomial and table payloads; evaluation trees
    /// compare equal only if both are the same constant.
    fn eq(&self, other: &Self) -> bool {
        if self.shape != other.shape || self.ground != other.ground {
            return false;
        }
        match (&self.payload, &other.payload) {
            (Payload::Poly(a), Payload::Poly(b)) => a == b,
            (Payload::Table(a), Payload::Table(b)) => a == b,
            (Payload::Sampled(a), Payload::Sampled(b)) => {
                matches!((a.as_constant(), b.as_constant()), (Some(x), Some(y)) if x == y)
            }
            _ => false,
        }
    }
}

fn to_complex(c: &Rational) -> Complex64 {
    Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)
}

impl BlockSymFunction {
    pub fn from_poly(shape: BlockShape, poly: Poly) -> Self {
        Self { shape, ground: Ground::ExactLine, payload: Payload::Poly(poly) }
    }

    pub fn from_table(shape: BlockShape, points: FinitePoints, table: Table) -> Self {
        Self { shape, ground: Ground::FiniteSet(points), payload: Payload::Table(table) }
    }

    pub fn from_sampled(shape: BlockShape, tau: Complex64, f: Sampled) -> Self {
        Self { shape, ground: Ground::TorusSampled { tau }, payload: Payload::Sampled(f) }
    }

    pub fn constant(shape: BlockShape, ground: &Ground, c: Rational) -> Self {
        let payload = match ground {
            Ground::ExactLine => Payload::Poly(Poly::constant(&shape, c)),
            Ground::FiniteSet(p) => Payload::Table(Table::constant(&shape, p, c)),
            Ground::TorusSampled { .. } => Payload::Sampled(Sampled::constant(to_complex(&c))),
        };
        Self { shape, ground: ground.clone(), payload }
    }

    pub fn one(shape: BlockShape, ground: &Ground) -> Self {
        Self::constant(shape, ground, Rational::from_integer(1.into()))
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn poly(&self) -> Option<&Poly> {
        match &self.payload {
            Payload::Poly(p) => Some(p),
            _ => None,
        }
    }

    pub fn table(&self) -> Option<&Table> {
        match &self.payload {
            Payload::Table(t) => Some(t),
            _ => None,
        }
    }

    pub fn sampled(&self) -> Option<&Sampled> {
        match &self.payload {
            Payload::Sampled(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.payload {
            Payload::Poly(p) => p.is_zero(),
            Payload::Table(t) => t.is_zero(),
            Payload::Sampled(s) => s.as_constant() == Some(Complex64::zero()),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch);
        }
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", self.shape.sizes(), other.shape.sizes())));
        }
        Ok(())
    }

    fn with_payload(&self, shape: BlockShape, payload: Payload) -> Self {
        Self { shape, ground: self.ground.clone(), payload }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let payload = match (&self.payload, &other.payload) {
            (Payload::Poly(a), Payload::Poly(b)) => Payload::Poly(a.add(b)),
            (Payload::Table(a), Payload::Table(b)) => Payload::Table(a.add(b)),
            (Payload::Sampled(a), Payload::Sampled(b)) => Payload::Sampled(a.add(b)),
            _ => return Err(Error::GroundMismatch),
        };
        Ok(self.with_payload(self.shape.clone(), payload))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let payload = match &self.payload {
            Payload::Poly(p) => Payload::Poly(p.scale(c)),
            Payload::Table(t) => Payload::Table(t.scale(c)),
            Payload::Sampled(s) => Payload::Sampled(s.scale(to_complex(c))),
        };
        self.with_payload(self.shape.clone(), payload)
    }

    /// Complex scaling; only evaluation trees accept it.
    pub fn scale_complex(&self, c: Complex64) -> Result<Self> {
        match &self.payload {
            Payload::Sampled(s) => Ok(self.with_payload(self.shape.clone(), Payload::Sampled(s.scale(c)))),
            _ => Err(Error::Unsupported("complex scaling needs a torus ground")),
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.multiply_with_cap(other, DEFAULT_DEGREE_CAP)
    }

    pub fn multiply_with_cap(&self, other: &Self, cap: u32) -> Result<Self> {
        self.check_same(other)?;
        let payload = match (&self.payload, &other.payload) {
            (Payload::Poly(a), Payload::Poly(b)) => Payload::Poly(a.multiply(b, &self.shape, cap)?),
            (Payload::Table(a), Payload::Table(b)) => Payload::Table(a.multiply(b)),
            (Payload::Sampled(a), Payload::Sampled(b)) => Payload::Sampled(a.multiply(b)),
            _ => return Err(Error::GroundMismatch),
        };
        Ok(self.with_payload(self.shape.clone(), payload))
    }

    /// `f o m` for `f` on `m.target()`.
    pub fn pullback(&self, m: &MergeMap) -> Result<Self> {
        if &self.shape != m.target() {
            return Err(Error::ShapeMismatch("pullback: function does not live on the target".into()));
        }
        let payload = match (&self.payload, &self.ground) {
            (Payload::Poly(p), _) => Payload::Poly(p.pullback(m)),
            (Payload::Table(t), Ground::FiniteSet(pts)) => Payload::Table(t.pullback(m, pts)),
            (Payload::Sampled(s), _) => Payload::Sampled(s.gather(m.gather().to_vec())),
            _ => return Err(Error::GroundMismatch),
        };
        Ok(self.with_payload(m.source().clone(), payload))
    }

    /// Coset-sum pushforward for `f` on `m.source()`.
    pub fn transfer(&self, m: &MergeMap) -> Result<Self> {
        if &self.shape != m.source() {
            return Err(Error::ShapeMismatch("transfer: function does not live on the source".into()));
        }
        let payload = match (&self.payload, &self.ground) {
            (Payload::Poly(p), _) => Payload::Poly(p.transfer(m)),
            (Payload::Table(t), Ground::FiniteSet(pts)) => Payload::Table(t.transfer(m, pts)),
            (Payload::Sampled(s), _) => Payload::Sampled(s.coset_sum(m.coset_maps())),
            _ => return Err(Error::GroundMismatch),
        };
        Ok(self.with_payload(m.target().clone(), payload))
    }

    /// The table of a polynomial function on a finite set of points.
    pub fn to_finite(&self, points: &FinitePoints) -> Result<Self> {
        match &self.payload {
            Payload::Poly(p) => Ok(Self::from_table(self.shape.clone(), points.clone(), Table::from_poly(p, &self.shape, points))),
            Payload::Table(_) if self.ground == Ground::FiniteSet(points.clone()) => Ok(self.clone()),
            _ => Err(Error::Unsupported("only polynomial functions restrict to a finite set")),
        }
    }

    /// Value at a configuration of exact points (one per variable).
    pub fn evaluate_exact(&self, point: &[Rational]) -> Result<Rational> {
        match (&self.payload, &self.ground) {
            (Payload::Poly(p), _) => Ok(p.evaluate(&self.shape, point)),
            (Payload::Table(t), Ground::FiniteSet(pts)) => {
                let idx: Option<Vec<u16>> = point
                    .iter()
                    .map(|x| pts.points().iter().position(|p| p == x).map(|i| i as u16))
                    .collect();
                let idx = idx.ok_or_else(|| Error::InvalidInput("point outside the finite ground set".into()))?;
                Ok(t.get(&self.shape, &idx))
            }
            _ => Err(Error::Unsupported("exact evaluation of a sampled function")),
        }
    }

    /// Value at complex coordinates (sampled functions; polynomials are
    /// evaluated by converting coefficients to floating point).
    pub fn evaluate_complex(&self, z: &[Complex64]) -> Result<Complex64> {
        match &self.payload {
            Payload::Sampled(s) => Ok(s.eval(z)),
            Payload::Poly(p) => {
                let mut total = Complex64::zero();
                for (key, c) in p.terms() {
                    for mono in super::poly::orbit(&self.shape, key) {
                        let mut v = to_complex(c);
                        for (x, &e) in z.iter().zip(&mono) {
                            v *= x.powu(e);
                        }
                        total += v;
                    }
                }
                Ok(total)
            }
            Payload::Table(_) => Err(Error::Unsupported("complex evaluation of a table")),
        }
    }

    /// Translate every variable by `shift` (torus ground).
    pub fn translate(&self, shift: Complex64) -> Result<Self> {
        match &self.payload {
            Payload::Sampled(s) => Ok(self.with_payload(self.shape.clone(), Payload::Sampled(s.translate(shift)))),
            _ => Err(Error::Unsupported("translation needs a torus ground")),
        }
    }

    /// The same function read on a shape with relabelled blocks of equal sizes.
    pub fn relabel(&self, shape: BlockShape, perm: &[usize]) -> Result<Self> {
        if shape.num_blocks() != perm.len() || (0..perm.len()).any(|b| shape.size(perm[b]) != self.shape.size(b)) {
            return Err(Error::ShapeMismatch("relabelling must preserve block sizes".into()));
        }
        let m = MergeMap::new(self.shape.clone(), shape, perm.to_vec())?;
        self.transfer(&m)
    }

    pub fn is_block_symmetric(&self) -> bool {
        match &self.payload {
            Payload::Poly(p) => p.is_block_symmetric(&self.shape),
            _ => true,
        }
    }
}

/// `p_ij^* f1`: the single-block function `f1` read on the `(i, j)` block of `X^(A)`.
pub fn lift_pij(f1: &BlockSymFunction, a: &IntMatrix, i: usize, j: usize) -> Result<BlockSymFunction> {
    let n = a.size();
    if i >= n || j >= n || i == j {
        return Err(Error::InvalidInput(format!("lift_pij needs distinct indices below {n}")));
    }
    if f1.shape.num_blocks() != 1 || f1.shape.size(0) != a.get(i, j) {
        return Err(Error::ShapeMismatch(format!("expected one block of size {}", a.get(i, j))));
    }
    let shape = BlockShape::of_matrix(a);
    embed(f1, shape, i * n + j)
}

fn embed(f1: &BlockSymFunction, shape: BlockShape, b: usize) -> Result<BlockSymFunction> {
    let range = shape.range(b);
    let payload = match (&f1.payload, &f1.ground) {
        (Payload::Poly(p), _) => {
            let mut out = Poly::zero();
            for (k, c) in p.terms() {
                let mut key = alloc::vec![0; shape.d()];
                key[range.clone()].copy_from_slice(k);
                out.add_term(key, c.clone());
            }
            Payload::Poly(out)
        }
        (Payload::Table(t), Ground::FiniteSet(pts)) => {
            Payload::Table(Table::from_fn(&shape, pts, |c| t.get(&f1.shape, &c[range.clone()])))
        }
        (Payload::Sampled(s), _) => Payload::Sampled(s.select(range.collect())),
        _ => return Err(Error::GroundMismatch),
    };
    Ok(BlockSymFunction { shape, ground: f1.ground.clone(), payload })
}

/// `p_ii^* f1 = sum_{x in I_i} f1(x)` on `X^(v)` (as the diagonal component `X^(diag v)`).
pub fn lift_pii(f1: &BlockSymFunction, v: &Composition, i: usize) -> Result<BlockSymFunction> {
    if i >= v.len() {
        return Err(Error::InvalidInput(format!("index {} out of range", i + 1)));
    }
    if f1.shape.num_blocks() != 1 || f1.shape.size(0) != 1 {
        return Err(Error::ShapeMismatch("lift_pii needs a function of one variable".into()));
    }
    let diag = IntMatrix::diag(v);
    let shape = BlockShape::of_matrix(&diag);
    let b = i * v.len() + i;
    let range = shape.range(b);
    let payload = match (&f1.payload, &f1.ground) {
        (Payload::Poly(p), _) => {
            let mut out = Poly::zero();
            for (k, c) in p.terms() {
                out = out.add(&Poly::power_sum(&shape, b, k[0]).scale(c));
            }
            Payload::Poly(out)
        }
        (Payload::Table(t), Ground::FiniteSet(pts)) => Payload::Table(Table::from_fn(&shape, pts, |c| {
            range.clone().map(|p| t.get(&f1.shape, &[c[p]])).fold(Rational::zero(), |a, b| a + b)
        })),
        (Payload::Sampled(s), _) => Payload::Sampled(s.block_sum(range.collect())),
        _ => return Err(Error::GroundMismatch),
    };
    Ok(BlockSymFunction { shape, ground: f1.ground.clone(), payload })
}

/// `x^k` as a function of one variable on the given ground.
pub fn power_function(k: u32, ground: &Ground) -> BlockSymFunction {
    let shape = BlockShape::single(1);
    let poly = Poly::monomial(&shape, alloc::vec![k], Rational::from_integer(1.into())).expect("one variable");
    match ground {
        Ground::ExactLine => BlockSymFunction::from_poly(shape, poly),
        Ground::FiniteSet(pts) => {
            let t = Table::from_poly(&poly, &shape, pts);
            BlockSymFunction::from_table(shape, pts.clone(), t)
        }
        Ground::TorusSampled { tau } => {
            BlockSymFunction::from_sampled(shape, *tau, Sampled::rule(format!("x^{k}"), move |z| z[0].powu(k)))
        }
    }
}
