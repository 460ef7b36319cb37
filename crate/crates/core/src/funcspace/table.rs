//! Functions on `prod_b X^(m_b)` for a finite ground set, as value tables.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Zero;

use super::poly::Poly;
use super::shape::{BlockShape, MergeMap};
use crate::error::{Error, Result};
use crate::Rational;

/// A configuration: one point index per variable, non-decreasing in each block.
pub type Config = Vec<u16>;

/// Finite list of pairwise distinct exact points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinitePoints(Arc<Vec<Rational>>);

impl FinitePoints {
    pub fn new(points: Vec<Rational>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::InvalidInput("finite ground points must be distinct".into()));
            }
        }
        if points.len() > u16::MAX as usize {
            return Err(Error::BoundExceeded { what: "number of ground points", limit: u16::MAX as usize, got: points.len() });
        }
        Ok(Self(Arc::new(points)))
    }

    /// The points `1, 2, ..., n`.
    pub fn range(n: usize) -> Self {
        Self::new((1..=n as i64).map(|k| Rational::from_integer(k.into())).collect()).expect("distinct")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn points(&self) -> &[Rational] {
        &self.0
    }

    pub fn values(&self, config: &[u16]) -> Vec<Rational> {
        config.iter().map(|&i| self.0[i as usize].clone()).collect()
    }
}

/// All multiset configurations of `shape` over `n` points, in lexicographic order.
pub fn configurations(shape: &BlockShape, n: usize) -> Vec<Config> {
    let mut out = alloc::vec![Vec::with_capacity(shape.d())];
    for &m in shape.sizes() {
        let blocks = multisets(n, m as usize);
        let mut next = Vec::with_capacity(out.len() * blocks.len());
        for c in &out {
            for b in &blocks {
                let mut c = c.clone();
                c.extend_from_slice(b);
                next.push(c);
            }
        }
        out = next;
    }
    out
}

fn multisets(n: usize, m: usize) -> Vec<Vec<u16>> {
    fn go(n: usize, m: usize, start: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i as u16);
            go(n, m, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, m, 0, &mut Vec::new(), &mut out);
    out
}

fn sort_blocks(shape: &BlockShape, c: &mut [u16]) {
    for r in shape.ranges() {
        c[r].sort_unstable();
    }
}

/// Whether all points of a configuration are distinct.
pub fn is_distinct(c: &[u16]) -> bool {
    let mut s = c.to_vec();
    s.sort_unstable();
    s.windows(2).all(|w| w[0] != w[1])
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Table {
    values: BTreeMap<Config, Rational>,
}

impl Table {
    pub fn from_fn(shape: &BlockShape, points: &FinitePoints, mut f: impl FnMut(&Config) -> Rational) -> Self {
        let values = configurations(shape, points.len()).into_iter().map(|c| {
            let v = f(&c);
            (c, v)
        });
        Self { values: values.collect() }
    }

    pub fn constant(shape: &BlockShape, points: &FinitePoints, c: Rational) -> Self {
        Self::from_fn(shape, points, |_| c.clone())
    }

    pub fn from_poly(p: &Poly, shape: &BlockShape, points: &FinitePoints) -> Self {
        Self::from_fn(shape, points, |c| p.evaluate(shape, &points.values(c)))
    }

    pub fn values(&self) -> &BTreeMap<Config, Rational> {
        &self.values
    }

    /// Value at a configuration; blocks need not be sorted.
    pub fn get(&self, shape: &BlockShape, config: &[u16]) -> Rational {
        let mut c = config.to_vec();
        sort_blocks(shape, &mut c);
        self.values.get(&c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(Zero::is_zero)
    }

    fn zip(&self, other: &Self, op: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let values = self.values.iter().map(|(k, a)| (k.clone(), op(a, &other.values[k]))).collect();
        Self { values }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn multiply(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { values: self.values.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn pullback(&self, m: &MergeMap, points: &FinitePoints) -> Self {
        let gather = m.gather();
        Self::from_fn(m.source(), points, |c| {
            let y: Vec<u16> = gather.iter().map(|&s| c[s]).collect();
            self.get(m.target(), &y)
        })
    }

    /// Positional coset sum. At configurations with repeated points this
    /// counts every choice of positions, which matches the polynomial
    /// transfer evaluated there.
    pub fn transfer(&self, m: &MergeMap, points: &FinitePoints) -> Self {
        let maps = m.coset_maps();
        Self::from_fn(m.target(), points, |y| {
            let mut total = Rational::zero();
            for map in &maps {
                let x: Vec<u16> = map.iter().map(|&t| y[t]).collect();
                total += self.get(m.source(), &x);
            }
            total
        })
    }

    /// Literal sum over the fibre of the union map at a distinct-point
    /// configuration: all ways to distribute the points of each target
    /// block among its source blocks as sets.
    pub fn fibre_sum(&self, m: &MergeMap, y: &[u16]) -> Rational {
        let mut total = Rational::zero();
        let mut seen = alloc::collections::BTreeSet::new();
        for map in m.coset_maps() {
            let mut x: Vec<u16> = map.iter().map(|&t| y[t]).collect();
            sort_blocks(m.source(), &mut x);
            if seen.insert(x.clone()) {
                total += self.get(m.source(), &x);
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn distinct_points_required() {
        let one = Rational::from_integer(1.into());
        assert!(FinitePoints::new(vec![one.clone(), one]).is_err());
    }

    #[test]
    fn configuration_counts() {
        let shape = BlockShape::new(vec![(vec![0], 2), (vec![1], 1)]).unwrap();
        assert_eq!(configurations(&shape, 4).len(), 10 * 4);
    }
}
