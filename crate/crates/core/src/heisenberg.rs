//! The finite Heisenberg group `H_n`, its charge-`c` clock/shift
//! representation, and the functional model on `M_c(Gamma)`.
//!
//! Roots of unity are carried as exponents of `omega = exp(2 pi i / n)`;
//! complex matrices appear only when converting for numeric work.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Measured: `I01 I10 = omega^CLOCK_SHIFT_SIGN I10 I01`.
pub const CLOCK_SHIFT_SIGN: i32 = 1;

/// Measured: `T_c(a) T_c(b) T_c(a)^-1 T_c(b)^-1 = <a, b>^(COMMUTATOR_SIGN * c)`.
pub const COMMUTATOR_SIGN: i32 = -1;

/// Largest `n` accepted by [`commutant_dimension`].
pub const COMMUTANT_MAX_N: u32 = 8;

/// Rank tolerance for the numeric linear solves of this module.
pub const RANK_TOL: f64 = 1e-9;

/// `omega^k` as a complex number.
pub fn root_of_unity(n: u32, k: i64) -> Complex64 {
    let k = k.rem_euclid(n as i64);
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

/// An element `(a1, a2)` of `(Z/n)^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorsionPoint {
    n: u32,
    a1: u32,
    a2: u32,
}

impl TorsionPoint {
    pub fn new(n: u32, a1: i64, a2: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be positive".into()));
        }
        let m = n as i64;
        Ok(Self { n, a1: a1.rem_euclid(m) as u32, a2: a2.rem_euclid(m) as u32 })
    }

    pub fn zero(n: u32) -> Self {
        Self { n, a1: 0, a2: 0 }
    }

    /// All of `(Z/n)^2`, `a1` major.
    pub fn all(n: u32) -> Vec<Self> {
        (0..n).flat_map(|a1| (0..n).map(move |a2| Self { n, a1, a2 })).collect()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a1(&self) -> u32 {
        self.a1
    }

    pub fn a2(&self) -> u32 {
        self.a2
    }

    pub fn is_zero(&self) -> bool {
        self.a1 == 0 && self.a2 == 0
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_n(self, other)?;
        Self::new(self.n, (self.a1 + other.a1) as i64, (self.a2 + other.a2) as i64)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.n, -(self.a1 as i64), -(self.a2 as i64)).expect("n > 0")
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(self.n, k * self.a1 as i64, k * self.a2 as i64).expect("n > 0")
    }
}

fn same_n(a: &TorsionPoint, b: &TorsionPoint) -> Result<()> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch { expected: a.n as usize, found: b.n as usize });
    }
    Ok(())
}

/// `<a, b> = omega^(a1 b2 - a2 b1)`, returned as the exponent mod `n`.
pub fn weil_pairing(a: &TorsionPoint, b: &TorsionPoint) -> Result<u32> {
    same_n(a, b)?;
    let n = a.n as i64;
    Ok((a.a1 as i64 * b.a2 as i64 - a.a2 as i64 * b.a1 as i64).rem_euclid(n) as u32)
}

/// `(alpha, zeta)` with `zeta = omega^central`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HeisenbergElement {
    pub point: TorsionPoint,
    pub central: u32,
}

impl HeisenbergElement {
    pub fn new(point: TorsionPoint, central: i64) -> Self {
        let central = central.rem_euclid(point.n as i64) as u32;
        Self { point, central }
    }

    pub fn of_point(point: TorsionPoint) -> Self {
        Self { point, central: 0 }
    }

    /// `(a, z)(b, x) = (a + b, <a, b> z x)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let point = self.point.add(&other.point)?;
        let e = weil_pairing(&self.point, &other.point)? + self.central + other.central;
        Ok(Self::new(point, e as i64))
    }
}

/// A square matrix with one nonzero entry per row and column, each a power
/// of `omega`: row `i` holds `omega^phases[i]` in column `cols[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialMatrix {
    n: u32,
    cols: Vec<usize>,
    phases: Vec<u32>,
}

impl MonomialMatrix {
    pub fn new(n: u32, cols: Vec<usize>, phases: Vec<i64>) -> Result<Self> {
        let size = cols.len();
        let mut seen = vec![false; size];
        for &c in &cols {
            if c >= size || seen[c] {
                return Err(Error::InvalidInput("columns must form a permutation".into()));
            }
            seen[c] = true;
        }
        if phases.len() != size {
            return Err(Error::DimensionMismatch { expected: size, found: phases.len() });
        }
        let phases = phases.into_iter().map(|p| p.rem_euclid(n as i64) as u32).collect();
        Ok(Self { n, cols, phases })
    }

    pub fn identity(n: u32, size: usize) -> Self {
        Self { n, cols: (0..size).collect(), phases: vec![0; size] }
    }

    pub fn size(&self) -> usize {
        self.cols.len()
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    /// `Some(k)` when `self = omega^k * I`.
    pub fn as_scalar(&self) -> Option<u32> {
        let k = *self.phases.first()?;
        (self.cols.iter().enumerate().all(|(i, &c)| c == i) && self.phases.iter().all(|&p| p == k)).then_some(k)
    }

    /// Exponent of the entry at `(i, j)`, `None` for a zero entry.
    pub fn entry(&self, i: usize, j: usize) -> Option<u32> {
        (self.cols[i] == j).then_some(self.phases[i])
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.n, self.size()), (other.n, other.size()), "monomial matrices of different type");
        let cols = self.cols.iter().map(|&c| other.cols[c]).collect();
        let phases = self.phases.iter().zip(&self.cols).map(|(&a, &c)| (a + other.phases[c]) % self.n).collect();
        Self { n: self.n, cols, phases }
    }

    pub fn inverse(&self) -> Self {
        let size = self.size();
        let mut cols = vec![0; size];
        let mut phases = vec![0; size];
        for (i, (&c, &p)) in self.cols.iter().zip(&self.phases).enumerate() {
            cols[c] = i;
            phases[c] = (self.n - p) % self.n;
        }
        Self { n: self.n, cols, phases }
    }

    pub fn kron(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "different roots of unity");
        let s = other.size();
        let mut cols = Vec::with_capacity(self.size() * s);
        let mut phases = Vec::with_capacity(self.size() * s);
        for i in 0..self.size() {
            for k in 0..s {
                cols.push(self.cols[i] * s + other.cols[k]);
                phases.push((self.phases[i] + other.phases[k]) % self.n);
            }
        }
        Self { n: self.n, cols, phases }
    }

    pub fn scale(&self, k: i64) -> Self {
        let phases = self.phases.iter().map(|&p| (p as i64 + k).rem_euclid(self.n as i64) as u32).collect();
        Self { n: self.n, cols: self.cols.clone(), phases }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(self.n, self.size()), |acc, _| acc.mul(self))
    }

    pub fn to_complex(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.size(), self.size());
        for (i, (&c, &p)) in self.cols.iter().zip(&self.phases).enumerate() {
            m[(i, c)] = root_of_unity(self.n, p as i64);
        }
        m
    }
}

/// `I10 = diag(1, omega, ..., omega^(n-1))`.
pub fn clock(n: u32) -> MonomialMatrix {
    MonomialMatrix { n, cols: (0..n as usize).collect(), phases: (0..n).collect() }
}

/// `I01`: ones at `(k, k + 1 mod n)`.
pub fn shift(n: u32) -> MonomialMatrix {
    MonomialMatrix { n, cols: (0..n as usize).map(|k| (k + 1) % n as usize).collect(), phases: vec![0; n as usize] }
}

/// A representation matrix together with its origin.
#[derive(Clone, Debug, PartialEq)]
pub struct RepMatrix {
    pub n: u32,
    pub c: i64,
    pub element: HeisenbergElement,
    pub exact: MonomialMatrix,
    pub matrix: CMatrix,
}

impl RepMatrix {
    fn new(c: i64, element: HeisenbergElement, exact: MonomialMatrix) -> Self {
        let matrix = exact.to_complex();
        Self { n: element.point.n, c, element, exact, matrix }
    }
}

/// `T_c(alpha, zeta) = zeta^c I10^(c alpha1) I01^alpha2`, exactly.
pub fn rep_exact(h: &HeisenbergElement, c: i64) -> MonomialMatrix {
    let n = h.point.n;
    let k = (c * h.point.a1 as i64).rem_euclid(n as i64) as u32;
    clock(n).pow(k).mul(&shift(n).pow(h.point.a2)).scale(c * h.central as i64)
}

pub fn rep_matrix(h: &HeisenbergElement, c: i64) -> RepMatrix {
    RepMatrix::new(c, *h, rep_exact(h, c))
}

/// `T_c(alpha) = T_c(alpha, 1)`.
pub fn rep_of_point(alpha: &TorsionPoint, c: i64) -> MonomialMatrix {
    rep_exact(&HeisenbergElement::of_point(*alpha), c)
}

/// The `k` with `I01 I10 = omega^k I10 I01`, as a sign when `k = +-1`.
pub fn measure_clock_shift_sign(n: u32) -> Option<i32> {
    let lhs = shift(n).mul(&clock(n));
    let rhs = clock(n).mul(&shift(n));
    let k = lhs.mul(&rhs.inverse()).as_scalar()?;
    sign_of_exponent(n, k as i64)
}

fn sign_of_exponent(n: u32, k: i64) -> Option<i32> {
    let k = k.rem_euclid(n as i64);
    if k == 1 % n as i64 {
        Some(1)
    } else if k == (n as i64 - 1) % n as i64 {
        Some(-1)
    } else {
        None
    }
}

/// Exponent of the scalar `T_c(a) T_c(b) T_c(a)^-1 T_c(b)^-1`; `None` if not scalar.
pub fn commutator_exponent(a: &TorsionPoint, b: &TorsionPoint, c: i64) -> Option<u32> {
    let ta = rep_of_point(a, c);
    let tb = rep_of_point(b, c);
    ta.mul(&tb).mul(&ta.inverse()).mul(&tb.inverse()).as_scalar()
}

/// The signs `eps` with commutator exponent `= eps * c * <a, b>` for all `a, b`.
pub fn consistent_commutator_signs(n: u32, c: i64) -> Vec<i32> {
    let pts = TorsionPoint::all(n);
    [1, -1]
        .into_iter()
        .filter(|&eps| {
            pts.iter().all(|a| {
                pts.iter().all(|b| {
                    let w = weil_pairing(a, b).expect("same n") as i64;
                    commutator_exponent(a, b, c)
                        .is_some_and(|k| k as i64 == (eps as i64 * c * w).rem_euclid(n as i64))
                })
            })
        })
        .collect()
}

/// Generators of `E_n` as group elements with trivial central part.
fn generators(n: u32) -> [HeisenbergElement; 2] {
    [
        HeisenbergElement::of_point(TorsionPoint { n, a1: 1 % n, a2: 0 }),
        HeisenbergElement::of_point(TorsionPoint { n, a1: 0, a2: 1 % n }),
    ]
}

/// Rows of the linear system `X A_g - B_g X = 0` in the entries of `X` (row-major).
fn intertwining_system(pairs: &[(CMatrix, CMatrix)], n: usize) -> CMatrix {
    let mut sys = CMatrix::zeros(pairs.len() * n * n, n * n);
    for (g, (a, b)) in pairs.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let row = g * n * n + i * n + j;
                for k in 0..n {
                    sys[(row, i * n + k)] += a[(k, j)];
                    sys[(row, k * n + j)] -= b[(i, k)];
                }
            }
        }
    }
    sys
}

/// `dim {X : X T_c(g) = T_c(g) X for all g}`.
pub fn commutant_dimension(n: u32, c: i64) -> Result<usize> {
    if n == 0 || n > COMMUTANT_MAX_N {
        return Err(Error::BoundExceeded { what: "n", limit: COMMUTANT_MAX_N as usize, got: n as usize });
    }
    let pairs: Vec<(CMatrix, CMatrix)> = generators(n)
        .iter()
        .map(|g| {
            let t = rep_matrix(g, c).matrix;
            (t.clone(), t)
        })
        .collect();
    let sys = intertwining_system(&pairs, n as usize);
    Ok(n as usize * n as usize - sys.rank(RANK_TOL))
}

/// Dimension of `M_c(Gamma) = {f : f(a + g) = <a, g>^c f(a), g in Gamma}`,
/// `Gamma = Z/n (+) 0`, from the constraint system on `(Z/n)^2`.
pub fn functional_space_dimension(n: u32, c: i64) -> usize {
    let size = (n * n) as usize;
    let idx = |p: &TorsionPoint| (p.a1 * n + p.a2) as usize;
    let mut rows = Vec::new();
    for a in TorsionPoint::all(n) {
        for g1 in 0..n {
            let g = TorsionPoint { n, a1: g1, a2: 0 };
            let w = weil_pairing(&a, &g).expect("same n") as i64;
            let mut row = vec![Complex64::new(0.0, 0.0); size];
            row[idx(&a.add(&g).expect("same n"))] += Complex64::new(1.0, 0.0);
            row[idx(&a)] -= root_of_unity(n, c * w);
            rows.push(row);
        }
    }
    let sys = CMatrix::from_fn(rows.len(), size, |i, j| rows[i][j]);
    size - sys.rank(RANK_TOL)
}

/// Basis function `f_k(j, m) = delta_mk omega^(-c j k)` as exponents (`None` = 0).
fn basis_function(c: i64, k: u32) -> impl Fn(&TorsionPoint) -> Option<i64> {
    move |p: &TorsionPoint| (p.a2 == k).then(|| -c * p.a1 as i64 * k as i64)
}

/// The matrix of `(beta, zeta) . f (alpha) = zeta^c <alpha, beta>^c f(alpha + beta)`
/// on the basis `f_0, ..., f_(n-1)` of `M_c(Gamma)`; column `k` is the image of `f_k`.
pub fn functional_model(beta: &HeisenbergElement, c: i64) -> Result<RepMatrix> {
    let n = beta.point.n;
    let mut cols = vec![usize::MAX; n as usize];
    let mut phases = vec![0i64; n as usize];
    for k in 0..n {
        let f = basis_function(c, k);
        let image = |a: &TorsionPoint| -> Option<i64> {
            let w = weil_pairing(a, &beta.point).expect("same n") as i64;
            f(&a.add(&beta.point).expect("same n")).map(|e| e + c * (beta.central as i64 + w))
        };
        // The coefficient of f_m is the value at (0, m); exactly one m is hit.
        let hits: Vec<(u32, i64)> =
            (0..n).filter_map(|m| image(&TorsionPoint { n, a1: 0, a2: m }).map(|e| (m, e))).collect();
        let [(m, e)] = hits[..] else {
            return Err(Error::InvalidInput(format!("image of f_{k} is not a single basis vector")));
        };
        let fm = basis_function(c, m);
        for a in TorsionPoint::all(n) {
            let expected = fm(&a).map(|x| (x + e).rem_euclid(n as i64));
            if image(&a).map(|x| x.rem_euclid(n as i64)) != expected {
                return Err(Error::InvalidInput(format!("image of f_{k} leaves M_c(Gamma)")));
            }
        }
        // Entry (m, k); stored by rows.
        cols[m as usize] = k as usize;
        phases[m as usize] = e;
    }
    let exact = MonomialMatrix::new(n, cols, phases)?;
    Ok(RepMatrix::new(c, *beta, exact))
}

/// Outcome of the search for `X` with `X F(g) = T(g) X`.
#[derive(Clone, Debug)]
pub struct Intertwiner {
    /// Dimension of the solution space.
    pub solutions: usize,
    /// A solution of full rank, when one exists.
    pub matrix: Option<CMatrix>,
}

/// Intertwiners from the functional model to the clock/shift model at charge `c`.
pub fn intertwiner(n: u32, c: i64) -> Result<Intertwiner> {
    let mut pairs = Vec::new();
    for g in generators(n) {
        pairs.push((functional_model(&g, c)?.matrix, rep_matrix(&g, c).matrix));
    }
    let sys = intertwining_system(&pairs, n as usize);
    let basis = sys.nullspace(RANK_TOL);
    // A generic combination is invertible iff some solution is.
    let mut x = vec![Complex64::new(0.0, 0.0); (n * n) as usize];
    for (k, v) in basis.iter().enumerate() {
        let w = Complex64::from_polar(1.0, 0.7 * (k + 1) as f64);
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi += w * vi;
        }
    }
    let m = CMatrix::from_fn(n as usize, n as usize, |i, j| x[i * n as usize + j]);
    let matrix = (!basis.is_empty() && m.rank(RANK_TOL) == n as usize).then_some(m);
    Ok(Intertwiner { solutions: basis.len(), matrix })
}

/// An element of `Z[omega]`, reduced modulo the `n`-th cyclotomic polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    n: u32,
    coeffs: Vec<i64>,
}

/// Coefficients of `Phi_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            p = divide_exact(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

fn divide_exact(p: &[i64], q: &[i64]) -> Vec<i64> {
    let mut r = p.to_vec();
    let dq = q.len() - 1;
    let mut out = vec![0i64; r.len() - dq];
    for k in (0..out.len()).rev() {
        let c = r[k + dq];
        out[k] = c;
        for (i, &qi) in q.iter().enumerate() {
            r[k + i] -= c * qi;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0), "division was not exact");
    out
}

impl Cyclotomic {
    /// `sum_k coeffs[k] omega^k` for `coeffs` indexed mod `n`.
    pub fn from_powers(n: u32, coeffs: &[i64]) -> Self {
        let phi = cyclotomic_polynomial(n);
        let deg = phi.len() - 1;
        let mut r = coeffs.to_vec();
        for k in (deg..r.len()).rev() {
            let c = r[k];
            if c != 0 {
                for (i, &pi) in phi.iter().enumerate() {
                    r[k - deg + i] -= c * pi;
                }
            }
        }
        r.truncate(deg);
        Self { n, coeffs: r }
    }

    pub fn integer(n: u32, k: i64) -> Self {
        let mut c = vec![0; n as usize];
        c[0] = k;
        Self::from_powers(n, &c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }
}

/// `sum_{alpha in E_n} T_c(alpha) (x) T_c(alpha)^-1`, entrywise in `Z[omega]`.
pub fn tensor_sum_exact(n: u32, c: i64) -> Vec<Vec<Cyclotomic>> {
    let size = (n * n) as usize;
    let mut acc = vec![vec![vec![0i64; n as usize]; size]; size];
    for a in TorsionPoint::all(n) {
        let t = rep_of_point(&a, c);
        let m = t.kron(&t.inverse());
        for i in 0..size {
            let j = m.cols[i];
            acc[i][j][m.phases[i] as usize] += 1;
        }
    }
    acc.into_iter().map(|row| row.into_iter().map(|e| Cyclotomic::from_powers(n, &e)).collect()).collect()
}

/// Whether [`tensor_sum_exact`] equals `n P`, `P` the flip.
pub fn tensor_sum_is_n_flip(n: u32, c: i64) -> bool {
    let s = tensor_sum_exact(n, c);
    let zero = Cyclotomic::integer(n, 0);
    let n_int = Cyclotomic::integer(n, n as i64);
    let nu = n as usize;
    s.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, e)| {
            let is_flip = i / nu == j % nu && i % nu == j / nu;
            *e == if is_flip { n_int.clone() } else { zero.clone() }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(n: u32, a1: i64, a2: i64) -> TorsionPoint {
        TorsionPoint::new(n, a1, a2).unwrap()
    }

    #[test]
    fn weil_examples() {
        assert_eq!(weil_pairing(&pt(2, 1, 0), &pt(2, 0, 1)).unwrap(), 1);
        assert_eq!(weil_pairing(&pt(5, 2, 3), &pt(5, 2, 3)).unwrap(), 0);
        assert!(weil_pairing(&pt(2, 1, 0), &pt(3, 1, 0)).is_err());
    }

    #[test]
    fn printed_matrices_at_n_2() {
        let t = rep_matrix(&HeisenbergElement::of_point(pt(2, 1, 0)), 1).matrix;
        let expected = CMatrix::from_fn(2, 2, |i, j| if i == j { Complex64::new(1.0 - 2.0 * i as f64, 0.0) } else { 0.0.into() });
        assert!((&t - &expected).max_abs() < 1e-15);
        let s = rep_matrix(&HeisenbergElement::of_point(pt(2, 0, 1)), 1).matrix;
        let expected = CMatrix::from_fn(2, 2, |i, j| if i != j { 1.0.into() } else { 0.0.into() });
        assert_eq!(s, expected);
    }

    #[test]
    fn central_elements_are_scalars() {
        for n in 1..=6 {
            for c in 0..n as i64 {
                for z in 0..n as i64 {
                    let h = HeisenbergElement::new(TorsionPoint::zero(n), z);
                    assert_eq!(rep_exact(&h, c).as_scalar(), Some(((c * z) % n as i64) as u32));
                }
            }
        }
    }

    #[test]
    fn signs_are_pinned() {
        assert_eq!(measure_clock_shift_sign(3), Some(CLOCK_SHIFT_SIGN));
        assert_eq!(consistent_commutator_signs(3, 1), vec![COMMUTATOR_SIGN]);
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(Cyclotomic::from_powers(3, &[1, 1, 1]), Cyclotomic::integer(3, 0));
    }

    #[test]
    fn commutant_examples() {
        assert_eq!(commutant_dimension(3, 1).unwrap(), 1);
        assert_eq!(commutant_dimension(2, 1).unwrap(), 1);
        assert!(commutant_dimension(4, 2).unwrap() > 1);
        assert!(commutant_dimension(9, 1).is_err());
    }

    #[test]
    fn functional_model_is_multiplicative() {
        for n in 1..=5u32 {
            for c in 1..n.max(2) as i64 {
                let all = TorsionPoint::all(n);
                for a in &all {
                    for b in &all {
                        let g = HeisenbergElement::of_point(*a);
                        let h = HeisenbergElement::new(*b, 1);
                        let lhs = functional_model(&g, c).unwrap().exact.mul(&functional_model(&h, c).unwrap().exact);
                        let rhs = functional_model(&g.mul(&h).unwrap(), c).unwrap().exact;
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}
