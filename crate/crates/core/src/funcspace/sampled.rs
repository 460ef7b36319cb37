//! Functions on products of symmetric powers of an elliptic curve, given as
//! composable evaluation trees over complex coordinates.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

/// A rule evaluating a function at a configuration (one coordinate per variable).
pub type Rule = Arc<dyn Fn(&[Complex64]) -> Complex64 + Send + Sync>;

#[derive(Clone)]
enum Node {
    Const(Complex64),
    Rule { name: String, rule: Rule },
    Add(Sampled, Sampled),
    Mul(Sampled, Sampled),
    Scale(Complex64, Sampled),
    /// Precompose with `y[t] = x[gather[t]]`.
    Gather(Vec<usize>, Sampled),
    /// Sum over maps `x[s] = y[map[s]]`.
    CosetSum(Vec<Vec<usize>>, Sampled),
    /// Restrict to the listed positions.
    Select(Vec<usize>, Sampled),
    /// `sum_{p in positions} f(x_p)` for a one-variable `f`.
    BlockSum(Vec<usize>, Sampled),
    /// Precompose with a translation of every coordinate.
    Translate(Complex64, Sampled),
}

/// An evaluation tree; cloning is cheap.
#[derive(Clone)]
pub struct Sampled(Arc<Node>);

impl Sampled {
    pub fn constant(c: Complex64) -> Self {
        Self(Arc::new(Node::Const(c)))
    }

    pub fn rule(name: impl Into<String>, rule: impl Fn(&[Complex64]) -> Complex64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(Node::Rule { name: name.into(), rule: Arc::new(rule) }))
    }

    pub fn as_constant(&self) -> Option<Complex64> {
        match &*self.0 {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(Arc::new(Node::Add(self.clone(), other.clone())))
    }

    pub fn multiply(&self, other: &Self) -> Self {
        match (self.as_constant(), other.as_constant()) {
            (Some(a), Some(b)) => Self::constant(a * b),
            _ => Self(Arc::new(Node::Mul(self.clone(), other.clone()))),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        match self.as_constant() {
            Some(a) => Self::constant(a * c),
            None => Self(Arc::new(Node::Scale(c, self.clone()))),
        }
    }

    pub fn gather(&self, gather: Vec<usize>) -> Self {
        match self.as_constant() {
            Some(_) => self.clone(),
            None => Self(Arc::new(Node::Gather(gather, self.clone()))),
        }
    }

    pub fn coset_sum(&self, maps: Vec<Vec<usize>>) -> Self {
        match self.as_constant() {
            Some(c) => Self::constant(c * maps.len() as f64),
            None => Self(Arc::new(Node::CosetSum(maps, self.clone()))),
        }
    }

    pub fn select(&self, positions: Vec<usize>) -> Self {
        match self.as_constant() {
            Some(_) => self.clone(),
            None => Self(Arc::new(Node::Select(positions, self.clone()))),
        }
    }

    pub fn block_sum(&self, positions: Vec<usize>) -> Self {
        match self.as_constant() {
            Some(c) => Self::constant(c * positions.len() as f64),
            None => Self(Arc::new(Node::BlockSum(positions, self.clone()))),
        }
    }

    pub fn translate(&self, shift: Complex64) -> Self {
        match self.as_constant() {
            Some(_) => self.clone(),
            None => Self(Arc::new(Node::Translate(shift, self.clone()))),
        }
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        match &*self.0 {
            Node::Const(c) => *c,
            Node::Rule { rule, .. } => rule(x),
            Node::Add(a, b) => a.eval(x) + b.eval(x),
            Node::Mul(a, b) => a.eval(x) * b.eval(x),
            Node::Scale(c, a) => c * a.eval(x),
            Node::Gather(g, a) => {
                let y: Vec<Complex64> = g.iter().map(|&s| x[s]).collect();
                a.eval(&y)
            }
            Node::CosetSum(maps, a) => maps
                .iter()
                .map(|m| {
                    let y: Vec<Complex64> = m.iter().map(|&t| x[t]).collect();
                    a.eval(&y)
                })
                .sum(),
            Node::Select(p, a) => {
                let y: Vec<Complex64> = p.iter().map(|&s| x[s]).collect();
                a.eval(&y)
            }
            Node::BlockSum(p, a) => p.iter().map(|&s| a.eval(&[x[s]])).sum(),
            Node::Translate(shift, a) => {
                let y: Vec<Complex64> = x.iter().map(|z| z + shift).collect();
                a.eval(&y)
            }
        }
    }

    /// Human-readable provenance of the tree.
    pub fn describe(&self) -> String {
        match &*self.0 {
            Node::Const(c) => format!("{c}"),
            Node::Rule { name, .. } => name.clone(),
            Node::Add(a, b) => format!("({} + {})", a.describe(), b.describe()),
            Node::Mul(a, b) => format!("{} * {}", a.describe(), b.describe()),
            Node::Scale(c, a) => format!("{c} * {}", a.describe()),
            Node::Gather(_, a) => format!("pullback({})", a.describe()),
            Node::CosetSum(m, a) => format!("transfer[{}]({})", m.len(), a.describe()),
            Node::Select(p, a) => format!("select{p:?}({})", a.describe()),
            Node::BlockSum(p, a) => format!("sum{p:?}({})", a.describe()),
            Node::Translate(s, a) => format!("translate[{s}]({})", a.describe()),
        }
    }
}

impl fmt::Debug for Sampled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}
