use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::error::{Error, Result};

/// An ordered tuple `(v_1, ..., v_n)` of non-negative integers summing to `d`.
///
/// Parts are not required to be monotone: the marginals of a matrix depend
/// on their order, so these are compositions rather than partitions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidInput("a composition needs at least one part".into()));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The sum `d` of the parts.
    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.parts[i]
    }

    /// The `i`-th segment of `{0, ..., d-1}`: consecutive positions of length `v_i`.
    pub fn segment(&self, i: usize) -> Range<usize> {
        let start: u32 = self.parts[..i].iter().sum();
        start as usize..(start + self.parts[i]) as usize
    }

    /// Index of the segment containing `position`.
    pub fn segment_of(&self, position: usize) -> usize {
        let mut end = 0usize;
        for (i, &p) in self.parts.iter().enumerate() {
            end += p as usize;
            if position < end {
                return i;
            }
        }
        panic!("position {position} outside a composition of {}", self.total());
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// All compositions of `d` into `n` parts, in lexicographic order.
pub fn enumerate_compositions(n: usize, d: u32) -> Vec<Composition> {
    assert!(n >= 1, "compositions need at least one part");
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fill(n, d, &mut current, &mut out);
    out
}

fn fill(n: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Composition>) {
    if current.len() + 1 == n {
        current.push(remaining);
        out.push(Composition { parts: current.clone() });
        current.pop();
        return;
    }
    for first in 0..=remaining {
        current.push(first);
        fill(n, remaining - first, current, out);
        current.pop();
    }
}
