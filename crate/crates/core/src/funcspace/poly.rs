//! Block-symmetric polynomials in the orbit-sum basis.
//!
//! A key is an exponent vector with one entry per variable, sorted in
//! decreasing order inside each block; it stands for the sum of the
//! distinct monomials in its orbit under the product of the block
//! symmetric groups.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::shape::{BlockShape, MergeMap};
use crate::error::{Error, Result};
use crate::Rational;

/// Default bound on the total degree of any orbit-sum key.
pub const DEFAULT_DEGREE_CAP: u32 = 8;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    terms: BTreeMap<Vec<u32>, Rational>,
}

pub fn degree(key: &[u32]) -> u32 {
    key.iter().sum()
}

/// Sort every block of `exps` in decreasing order.
pub fn canonicalize(shape: &BlockShape, exps: &mut [u32]) {
    for r in shape.ranges() {
        exps[r].sort_unstable_by(|a, b| b.cmp(a));
    }
}

pub fn is_canonical(shape: &BlockShape, exps: &[u32]) -> bool {
    shape.ranges().into_iter().all(|r| exps[r].windows(2).all(|w| w[0] >= w[1]))
}

/// Distinct rearrangements of `block` (given in decreasing order).
fn block_arrangements(block: &[u32]) -> Vec<Vec<u32>> {
    let mut cur: Vec<u32> = block.to_vec();
    cur.sort_unstable();
    let mut out = Vec::new();
    loop {
        out.push(cur.clone());
        let len = cur.len();
        let Some(i) = (1..len).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..len).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// All distinct monomials in the orbit of `key`.
pub fn orbit(shape: &BlockShape, key: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![key.to_vec()];
    for r in shape.ranges() {
        if r.len() < 2 {
            continue;
        }
        let arrangements = block_arrangements(&key[r.clone()]);
        let mut next = Vec::with_capacity(out.len() * arrangements.len());
        for m in &out {
            for a in &arrangements {
                let mut m = m.clone();
                m[r.clone()].copy_from_slice(a);
                next.push(m);
            }
        }
        out = next;
    }
    out
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(shape: &BlockShape, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![0; shape.d()], c);
        p
    }

    /// `c * m_key`; `key` is canonicalized.
    pub fn monomial(shape: &BlockShape, mut key: Vec<u32>, c: Rational) -> Result<Self> {
        if key.len() != shape.d() {
            return Err(Error::DimensionMismatch { expected: shape.d(), found: key.len() });
        }
        canonicalize(shape, &mut key);
        let mut p = Self::zero();
        p.add_term(key, c);
        Ok(p)
    }

    /// The power sum `p_k` of block `b` (for `k = 0` the block size).
    pub fn power_sum(shape: &BlockShape, b: usize, k: u32) -> Self {
        let r = shape.range(b);
        if k == 0 || r.is_empty() {
            return Self::constant(shape, Rational::from_integer(r.len().into()));
        }
        let mut key = vec![0; shape.d()];
        key[r.start] = k;
        let mut p = Self::zero();
        p.add_term(key, Rational::one());
        p
    }

    pub fn from_terms(terms: BTreeMap<Vec<u32>, Rational>) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &[u32]) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|k| degree(k)).max().unwrap_or(0)
    }

    /// Adds `c * m_key` for an already canonical `key`.
    pub fn add_term(&mut self, key: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn multiply(&self, other: &Self, shape: &BlockShape, cap: u32) -> Result<Self> {
        let mut out = Self::zero();
        let mut orbits_b: BTreeMap<&Vec<u32>, Vec<Vec<u32>>> = BTreeMap::new();
        for kb in other.terms.keys() {
            orbits_b.insert(kb, orbit(shape, kb));
        }
        for (ka, ca) in &self.terms {
            let oa = orbit(shape, ka);
            for (kb, cb) in &other.terms {
                let got = degree(ka) + degree(kb);
                if got > cap {
                    return Err(Error::DegreeCap { cap, got });
                }
                let coef = ca * cb;
                let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
                for a in &oa {
                    for b in &orbits_b[kb] {
                        let s: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        if is_canonical(shape, &s) {
                            *counts.entry(s).or_insert(0) += 1;
                        }
                    }
                }
                for (k, m) in counts {
                    out.add_term(k, &coef * Rational::from_integer(m.into()));
                }
            }
        }
        Ok(out)
    }

    /// Precomposition with the union map `m`; `self` lives on `m.target()`.
    pub fn pullback(&self, m: &MergeMap) -> Self {
        let scatter = m.scatter();
        let mut out = Self::zero();
        for (key, c) in &self.terms {
            for y in orbit(m.target(), key) {
                let x: Vec<u32> = scatter.iter().map(|&t| y[t]).collect();
                if is_canonical(m.source(), &x) {
                    out.add_term(x, c.clone());
                }
            }
        }
        out
    }

    /// Coset-sum pushforward along `m`; `self` lives on `m.source()`.
    pub fn transfer(&self, m: &MergeMap) -> Self {
        self.transfer_with(m, &m.coset_maps())
    }

    pub(crate) fn transfer_with(&self, m: &MergeMap, maps: &[Vec<usize>]) -> Self {
        let gather = m.gather();
        let mut candidates = BTreeSet::new();
        for key in self.terms.keys() {
            let mut y: Vec<u32> = gather.iter().map(|&s| key[s]).collect();
            canonicalize(m.target(), &mut y);
            candidates.insert(y);
        }
        let mut out = Self::zero();
        for mu in candidates {
            let mut total = Rational::zero();
            for map in maps {
                let mut x: Vec<u32> = map.iter().map(|&t| mu[t]).collect();
                canonicalize(m.source(), &mut x);
                if let Some(c) = self.terms.get(&x) {
                    total += c;
                }
            }
            out.add_term(mu, total);
        }
        out
    }

    /// Value at a point given variable by variable.
    pub fn evaluate(&self, shape: &BlockShape, point: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for (key, c) in &self.terms {
            let mut s = Rational::zero();
            for mono in orbit(shape, key) {
                let mut v = Rational::one();
                for (x, &e) in point.iter().zip(&mono) {
                    if e > 0 {
                        v *= num_traits::pow(x.clone(), e as usize);
                    }
                }
                s += v;
            }
            total += c * s;
        }
        total
    }

    /// Whether every transposition inside a block fixes the expanded polynomial.
    pub fn is_block_symmetric(&self, shape: &BlockShape) -> bool {
        let expanded: BTreeMap<Vec<u32>, Rational> = self
            .terms
            .iter()
            .flat_map(|(k, c)| orbit(shape, k).into_iter().map(move |m| (m, c.clone())))
            .collect();
        for r in shape.ranges() {
            for i in r.clone() {
                if i + 1 >= r.end {
                    break;
                }
                for (m, c) in &expanded {
                    let mut s = m.clone();
                    s.swap(i, i + 1);
                    if expanded.get(&s) != Some(c) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Expansion of a symmetric polynomial in one block of `m` variables as a
/// combination of power-sum products `p_rho` (nonzero parts, decreasing).
///
/// Reduces along the key with the most nonzero parts: `p_rho` contains
/// `m_rho` with coefficient `prod mult_i!` and otherwise only keys with
/// fewer nonzero parts.
pub fn power_sum_expansion(p: &Poly, m: u32) -> Result<Vec<(Vec<u32>, Rational)>> {
    let shape = BlockShape::single(m);
    let mut rest = p.clone();
    let mut out: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    let cap = p.max_degree().max(1);
    while let Some(key) = rest.terms.keys().max_by_key(|k| (k.iter().filter(|&&e| e > 0).count(), (*k).clone())).cloned() {
        let c = rest.coeff(&key);
        let rho: Vec<u32> = key.iter().copied().filter(|&e| e > 0).collect();
        let mut lead = Rational::one();
        let mut run = 1u64;
        for w in rho.windows(2) {
            if w[0] == w[1] {
                run += 1;
                lead *= Rational::from_integer(run.into());
            } else {
                run = 1;
            }
        }
        let mut prod = Poly::constant(&shape, Rational::one());
        for &k in &rho {
            prod = prod.multiply(&Poly::power_sum(&shape, 0, k), &shape, cap)?;
        }
        let coef = &c / &lead;
        if prod.coeff(&key) != lead {
            return Err(Error::Hypothesis("power-sum leading coefficient mismatch".into()));
        }
        rest = rest.add(&prod.scale(&-coef.clone()));
        *out.entry(rho).or_insert_with(Rational::zero) += coef;
    }
    Ok(out.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn shape(sizes: &[u32]) -> BlockShape {
        BlockShape::new(sizes.iter().enumerate().map(|(i, &s)| (vec![i as u8], s)).collect()).unwrap()
    }

    #[test]
    fn p1_squared() {
        let s = shape(&[2]);
        let p1 = Poly::power_sum(&s, 0, 1);
        let sq = p1.multiply(&p1, &s, 8).unwrap();
        assert_eq!(sq.coeff(&[2, 0]), q(1));
        assert_eq!(sq.coeff(&[1, 1]), q(2));
        assert_eq!(sq.terms().len(), 2);
    }

    #[test]
    fn unit_law() {
        let s = shape(&[2, 1]);
        let f = Poly::monomial(&s, vec![0, 2, 1], q(3)).unwrap();
        let one = Poly::constant(&s, q(1));
        assert_eq!(f.multiply(&one, &s, 8).unwrap(), f);
    }

    #[test]
    fn degree_cap_is_an_error() {
        let s = shape(&[2]);
        let f = Poly::monomial(&s, vec![5, 0], q(1)).unwrap();
        assert_eq!(f.multiply(&f, &s, 8), Err(Error::DegreeCap { cap: 8, got: 10 }));
    }

    #[test]
    fn transfer_examples() {
        let src = shape(&[1, 1]);
        let tgt = shape(&[2]);
        let m = MergeMap::new(src.clone(), tgt.clone(), vec![0, 0]).unwrap();
        let x1 = Poly::monomial(&src, vec![1, 0], q(1)).unwrap();
        assert_eq!(x1.transfer(&m), Poly::power_sum(&tgt, 0, 1));
        let src = shape(&[2, 1, 1]);
        let m = MergeMap::new(src.clone(), shape(&[4]), vec![0, 0, 0]).unwrap();
        assert_eq!(Poly::constant(&src, q(1)).transfer(&m), Poly::constant(m.target(), q(12)));
    }

    #[test]
    fn pullback_relabels() {
        let tgt = shape(&[2]);
        let src = shape(&[1, 1]);
        let m = MergeMap::new(src.clone(), tgt.clone(), vec![0, 0]).unwrap();
        let p = Poly::power_sum(&tgt, 0, 1).pullback(&m);
        assert_eq!(p.coeff(&[1, 0]), q(1));
        assert_eq!(p.coeff(&[0, 1]), q(1));
        let c = Poly::constant(&tgt, q(7));
        assert_eq!(c.pullback(&m), Poly::constant(&src, q(7)));
    }

    #[test]
    fn power_sums_of_elementary() {
        // e_2 = (p_1^2 - p_2) / 2
        let p = Poly::monomial(&BlockShape::single(3), vec![1, 1, 0], q(1)).unwrap();
        let exp = power_sum_expansion(&p, 3).unwrap();
        assert_eq!(exp, vec![(vec![1, 1], Rational::new(1.into(), 2.into())), (vec![2], Rational::new((-1).into(), 2.into()))]);
        let one = Poly::constant(&BlockShape::single(2), q(5));
        assert_eq!(power_sum_expansion(&one, 2).unwrap(), vec![(vec![], q(5))]);
    }
}
