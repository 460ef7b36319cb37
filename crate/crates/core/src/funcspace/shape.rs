use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::combinatorics::{Composition, IntMatrix, Marginal, TransferArray};
use crate::error::{Error, Result};

/// Block label: `(i)`, `(i, j)` or `(i, j, k)`, 0-based. The single block
/// of a one-block shape has the empty label.
pub type Label = Vec<u8>;

/// An ordered list of labelled blocks; a point of `prod_b X^(m_b)`.
///
/// Variables are numbered consecutively through the blocks, so block `b`
/// owns the positions `offset(b) .. offset(b) + m_b`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockShape {
    labels: Vec<Label>,
    sizes: Vec<u32>,
}

impl BlockShape {
    pub fn new(blocks: Vec<(Label, u32)>) -> Result<Self> {
        let mut labels = Vec::with_capacity(blocks.len());
        let mut sizes = Vec::with_capacity(blocks.len());
        for (label, size) in blocks {
            if labels.contains(&label) {
                return Err(Error::ShapeMismatch(format!("duplicate block label {label:?}")));
            }
            labels.push(label);
            sizes.push(size);
        }
        Ok(Self { labels, sizes })
    }

    /// One unlabelled block of size `m`.
    pub fn single(m: u32) -> Self {
        Self { labels: vec![Vec::new()], sizes: vec![m] }
    }

    /// `X^(v)`: block `(i)` of size `v_i`.
    pub fn of_composition(v: &Composition) -> Self {
        Self { labels: (0..v.len()).map(|i| vec![i as u8]).collect(), sizes: v.parts().to_vec() }
    }

    /// `X^(A)`: block `(i, j)` of size `a_ij`, row-major.
    pub fn of_matrix(a: &IntMatrix) -> Self {
        let n = a.size();
        let mut labels = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                labels.push(vec![i as u8, j as u8]);
            }
        }
        Self { labels, sizes: a.entries().to_vec() }
    }

    /// `X^(T)`: block `(i, j, k)` of size `t_ijk`.
    pub fn of_array(t: &TransferArray) -> Self {
        let n = t.size();
        let mut labels = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    labels.push(vec![i as u8, j as u8, k as u8]);
                }
            }
        }
        Self { labels, sizes: t.entries().to_vec() }
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn size(&self, b: usize) -> u32 {
        self.sizes[b]
    }

    pub fn label(&self, b: usize) -> &Label {
        &self.labels[b]
    }

    pub fn block_of(&self, label: &[u8]) -> Option<usize> {
        self.labels.iter().position(|l| l.as_slice() == label)
    }

    /// Total number of variables `d`.
    pub fn d(&self) -> usize {
        self.sizes.iter().map(|&s| s as usize).sum()
    }

    pub fn offset(&self, b: usize) -> usize {
        self.sizes[..b].iter().map(|&s| s as usize).sum()
    }

    pub fn range(&self, b: usize) -> Range<usize> {
        let o = self.offset(b);
        o..o + self.sizes[b] as usize
    }

    pub fn ranges(&self) -> Vec<Range<usize>> {
        let mut out = Vec::with_capacity(self.sizes.len());
        let mut o = 0;
        for &s in &self.sizes {
            out.push(o..o + s as usize);
            o += s as usize;
        }
        out
    }
}

/// A surjection of source blocks onto target blocks with additive sizes:
/// the "union of multisets" map between products of symmetric powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeMap {
    source: BlockShape,
    target: BlockShape,
    assign: Vec<usize>,
    /// `gather[t]` is the source position feeding target position `t` in
    /// the reference identification (source blocks concatenated in order).
    gather: Vec<usize>,
}

impl MergeMap {
    pub fn new(source: BlockShape, target: BlockShape, assign: Vec<usize>) -> Result<Self> {
        if assign.len() != source.num_blocks() {
            return Err(Error::DimensionMismatch { expected: source.num_blocks(), found: assign.len() });
        }
        let mut sums = vec![0u32; target.num_blocks()];
        for (s, &t) in assign.iter().enumerate() {
            if t >= target.num_blocks() {
                return Err(Error::ShapeMismatch(format!("source block {s} maps outside the target")));
            }
            sums[t] += source.size(s);
        }
        if sums != target.sizes {
            return Err(Error::ShapeMismatch("target sizes are not sums of source sizes".into()));
        }
        let ranges = source.ranges();
        let mut gather = Vec::with_capacity(target.d());
        for t in 0..target.num_blocks() {
            for (s, &ts) in assign.iter().enumerate() {
                if ts == t {
                    gather.extend(ranges[s].clone());
                }
            }
        }
        Ok(Self { source, target, assign, gather })
    }

    /// `pr_lm : X^(T) -> X^(T^lm)`.
    pub fn projection(t: &TransferArray, which: Marginal) -> Self {
        let n = t.size();
        let mut assign = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (r, c) = match which {
                        Marginal::M12 => (i, j),
                        Marginal::M23 => (j, k),
                        Marginal::M13 => (i, k),
                    };
                    assign.push(r * n + c);
                }
            }
        }
        let target = BlockShape::of_matrix(&t.marginal(which));
        Self::new(BlockShape::of_array(t), target, assign).expect("marginals are additive")
    }

    /// `X^(A) -> X^(v)` merging row `i` (`rows == true`) or column `j` blocks.
    pub fn matrix_to_composition(a: &IntMatrix, rows: bool) -> Self {
        let n = a.size();
        let assign = (0..n * n).map(|b| if rows { b / n } else { b % n }).collect();
        let v = if rows { a.row_sums() } else { a.col_sums() };
        Self::new(BlockShape::of_matrix(a), BlockShape::of_composition(&v), assign).expect("marginals are additive")
    }

    pub fn source(&self) -> &BlockShape {
        &self.source
    }

    pub fn target(&self) -> &BlockShape {
        &self.target
    }

    pub fn assign(&self) -> &[usize] {
        &self.assign
    }

    pub fn gather(&self) -> &[usize] {
        &self.gather
    }

    /// Inverse of `gather`: target position of each source position.
    pub fn scatter(&self) -> Vec<usize> {
        let mut out = vec![0; self.gather.len()];
        for (t, &s) in self.gather.iter().enumerate() {
            out[s] = t;
        }
        out
    }

    /// Coset representatives of `prod_t S_{c_t} / prod_s S_{m_s}`, each as a
    /// map from source position to target position. Within every source
    /// block positions are sent in increasing order, so the count is the
    /// product of multinomials.
    pub fn coset_maps(&self) -> Vec<Vec<usize>> {
        let src = self.source.ranges();
        let tgt = self.target.ranges();
        let mut per_target: Vec<Vec<Vec<(usize, usize)>>> = Vec::with_capacity(tgt.len());
        for (t, range) in tgt.iter().enumerate() {
            let members: Vec<usize> = (0..self.assign.len()).filter(|&s| self.assign[s] == t).collect();
            let mut out = Vec::new();
            let free: Vec<usize> = range.clone().collect();
            split(&members, &src, &free, &mut Vec::new(), &mut out);
            per_target.push(out);
        }
        let mut maps = vec![vec![0usize; self.source.d()]];
        for options in per_target {
            let mut next = Vec::with_capacity(maps.len() * options.len());
            for m in &maps {
                for opt in &options {
                    let mut m = m.clone();
                    for &(s, t) in opt {
                        m[s] = t;
                    }
                    next.push(m);
                }
            }
            maps = next;
        }
        maps
    }
}

fn split(
    members: &[usize],
    src: &[Range<usize>],
    free: &[usize],
    acc: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    let Some((&first, rest)) = members.split_first() else {
        out.push(acc.clone());
        return;
    };
    let need = src[first].len();
    for chosen in combinations(free.len(), need) {
        let mark = acc.len();
        for (slot, &idx) in chosen.iter().enumerate() {
            acc.push((src[first].start + slot, free[idx]));
        }
        let remaining: Vec<usize> =
            free.iter().enumerate().filter(|(i, _)| !chosen.contains(i)).map(|(_, &p)| p).collect();
        split(rest, src, &remaining, acc, out);
        acc.truncate(mark);
    }
}

/// All `k`-subsets of `0..n` as increasing index lists, lexicographically.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(n, k, 0, &mut Vec::new(), &mut out);
    }
    out
}
