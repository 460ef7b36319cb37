//! Theta functions with characteristics, the functions `w_alpha`, the
//! elliptic r-matrix `r_{n,c}` and numeric checks of its identities.
//!
//! Torsion point `(a1, a2)` sits at `(a1 + a2 tau) / n`. Tensor legs follow
//! the row-major Kronecker convention: basis `e_i (x) e_j` has index `i n + j`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// Needed where core lacks inherent float math.
#[allow(unused_imports)]
use num_traits::Float;

use crate::combinatorics::IntMatrix;
use crate::convolution::ConvOperator;
use crate::error::{Error, Result};
use crate::funcspace::{BlockShape, BlockSymFunction, Ground, Sampled};
use crate::heisenberg::{rep_of_point, root_of_unity, weil_pairing, TorsionPoint};
use crate::linalg::{embed_two_legs, flip, CMatrix};

/// Arguments closer than this to a pole are rejected.
pub const POLE_GUARD: f64 = 1e-3;
/// Tolerance on both defining conditions of `w_alpha`.
pub const CALIBRATION_TOL: f64 = 1e-9;
/// Step of the residue extrapolation.
pub const RESIDUE_STEP: f64 = 5e-3;
/// Points on the contour used to cross-check residues.
pub const CONTOUR_POINTS: usize = 128;
/// Cap on the number of series terms; unreachable for `Im tau > 0`.
pub const MAX_SERIES_TERMS: usize = 100_000;

/// Series truncation: keep every term within `scale * R + 1` of the peak,
/// where the Gaussian tail beyond `R` is below `rel_tol` of the peak term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncation {
    pub rel_tol: f64,
    pub scale: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        Self { rel_tol: 1e-16, scale: 1.0 }
    }
}

impl Truncation {
    /// Twice the window, for stability studies.
    pub fn doubled(&self) -> Self {
        Self { rel_tol: self.rel_tol, scale: 2.0 * self.scale }
    }
}

/// `E = C / (Z + tau Z)` with a truncation rule for theta series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lattice {
    tau: Complex64,
    trunc: Truncation,
}

impl Lattice {
    pub fn new(tau: Complex64) -> Result<Self> {
        Self::with_truncation(tau, Truncation::default())
    }

    pub fn with_truncation(tau: Complex64, trunc: Truncation) -> Result<Self> {
        if !(tau.im > 0.0) || !tau.re.is_finite() {
            return Err(Error::InvalidInput(format!("Im(tau) must be positive, got {tau}")));
        }
        if !(trunc.rel_tol > 0.0 && trunc.rel_tol < 1.0 && trunc.scale > 0.0) {
            return Err(Error::InvalidInput("truncation needs 0 < rel_tol < 1 and scale > 0".into()));
        }
        Ok(Self { tau, trunc })
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn ground(&self) -> Ground {
        Ground::TorusSampled { tau: self.tau }
    }

    /// `(a1 + a2 tau) / n`.
    pub fn point(&self, alpha: &TorsionPoint) -> Complex64 {
        (Complex64::new(alpha.a1() as f64, 0.0) + self.tau * alpha.a2() as f64) / alpha.n() as f64
    }

    /// Distance from `u` to the nearest point of `(1/n)(Z + tau Z)`.
    pub fn distance_to_torsion(&self, u: Complex64, n: u32) -> f64 {
        let x = u * n as f64;
        let t = x.im / self.tau.im;
        let s = x.re - t * self.tau.re;
        let (s0, t0) = (s.round(), t.round());
        let mut best = f64::INFINITY;
        for ds in -1..=1 {
            for dt in -1..=1 {
                let p = Complex64::new(s0 + ds as f64, 0.0) + self.tau * (t0 + dt as f64);
                best = best.min((x - p).norm());
            }
        }
        best / n as f64
    }

    fn guard(&self, u: Complex64, n: u32) -> Result<()> {
        let distance = self.distance_to_torsion(u, n);
        if distance < POLE_GUARD {
            return Err(Error::PoleProximity { distance, radius: POLE_GUARD });
        }
        Ok(())
    }

    /// Up to `count` points of the fundamental domain at distance at least
    /// `min_distance` from the `n`-torsion, from a two-dimensional Kronecker sequence.
    pub fn sample_points(&self, n: u32, count: usize, min_distance: f64) -> Vec<Complex64> {
        const G1: f64 = 0.754_877_666_246_692_8;
        const G2: f64 = 0.569_840_290_998_053_3;
        let mut out = Vec::with_capacity(count);
        let mut k = 0u32;
        while out.len() < count && k < 100 * count as u32 + 100 {
            k += 1;
            let s = (0.5 + k as f64 * G1).fract();
            let t = (0.5 + k as f64 * G2).fract();
            let u = Complex64::new(s, 0.0) + self.tau * t;
            if self.distance_to_torsion(u, n) >= min_distance {
                out.push(u);
            }
        }
        out
    }
}

/// `theta[a, b](z, tau) = sum_m exp(pi i (m + a)^2 tau + 2 pi i (m + a)(z + b))`.
pub fn theta_char(a: f64, b: f64, z: Complex64, lattice: &Lattice) -> Result<Complex64> {
    let tau = lattice.tau;
    let trunc = lattice.trunc;
    // |term| = exp(-pi Im(tau) (m + a - u*)^2 + const), peaked at u*.
    let peak = -z.im / tau.im;
    let radius = (-trunc.rel_tol.ln() / (PI * tau.im)).sqrt();
    let half = trunc.scale * radius + 1.0;
    let lo = (peak - a - half).ceil();
    let hi = (peak - a + half).floor();
    let count = hi - lo + 1.0;
    if !count.is_finite() || count > MAX_SERIES_TERMS as f64 {
        return Err(Error::NonConvergence(format!("{count} terms needed at z = {z}")));
    }
    let i = Complex64::new(0.0, 1.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut m = lo;
    while m <= hi {
        let ma = m + a;
        sum += (i * PI * ma * ma * tau + 2.0 * i * PI * ma * (z + b)).exp();
        m += 1.0;
    }
    Ok(sum)
}

/// `lim_{u -> 0} u f(u)`: Richardson extrapolation in `h^2` of the even part
/// of `u f(u)` at `u = +-h, +-h/2, +-h/4`.
pub fn residue_at_zero<T, F>(f: F, h: f64) -> Result<T>
where
    F: Fn(Complex64) -> Result<T>,
    T: Clone + core::ops::Add<Output = T> + core::ops::Sub<Output = T> + core::ops::Mul<f64, Output = T>,
    T: core::ops::Mul<Complex64, Output = T>,
{
    let even = |t: f64| -> Result<T> {
        let u = Complex64::new(t, 0.0);
        Ok((f(u)? * u + f(-u)? * (-u)) * 0.5)
    };
    let (g0, g1, g2) = (even(h)?, even(h / 2.0)?, even(h / 4.0)?);
    let r1 = (g1.clone() * 4.0 - g0) * (1.0 / 3.0);
    let r2 = (g2 * 4.0 - g1) * (1.0 / 3.0);
    Ok((r2 * 16.0 - r1) * (1.0 / 15.0))
}

/// `(1 / 2 pi i) \oint f` over the circle `|u| = radius`, trapezoid rule.
pub fn contour_residue(f: impl Fn(Complex64) -> Result<Complex64>, radius: f64, points: usize) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..points {
        let u = Complex64::from_polar(radius, 2.0 * PI * k as f64 / points as f64);
        sum += f(u)? * u;
    }
    Ok(sum / points as f64)
}

/// Which theta quotient the calibration settled on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ansatz {
    /// `theta[1/2 + a1/n, 1/2 + a2/n](u) / theta[1/2, 1/2](u)`.
    Printed,
    /// `theta[1/2 + a1/n, 1/2 + a2/n](n u) / theta[1/2, 1/2](n u)`.
    Scaled,
    /// `theta[1/2 + a2/n, 1/2 + a1/n](n u) / theta[1/2, 1/2](n u)`.
    ScaledSwapped,
}

impl Ansatz {
    const ALL: [Ansatz; 3] = [Ansatz::Printed, Ansatz::Scaled, Ansatz::ScaledSwapped];

    pub fn name(&self) -> &'static str {
        match self {
            Ansatz::Printed => "theta[1/2+a1/n,1/2+a2/n](u)",
            Ansatz::Scaled => "theta[1/2+a1/n,1/2+a2/n](nu)",
            Ansatz::ScaledSwapped => "theta[1/2+a2/n,1/2+a1/n](nu)",
        }
    }

    fn parts(&self, alpha: &TorsionPoint) -> (f64, f64, f64) {
        let n = alpha.n() as f64;
        let (x1, x2) = (alpha.a1() as f64 / n, alpha.a2() as f64 / n);
        match self {
            Ansatz::Printed => (0.5 + x1, 0.5 + x2, 1.0),
            Ansatz::Scaled => (0.5 + x1, 0.5 + x2, n),
            Ansatz::ScaledSwapped => (0.5 + x2, 0.5 + x1, n),
        }
    }
}

/// What calibration measured for one `w_alpha`.
#[derive(Clone, Debug, PartialEq)]
pub struct CalibrationReport {
    pub ansatz: Ansatz,
    /// Branch `k` of the logarithm fixing `lambda`.
    pub branch: i64,
    pub lambda: Complex64,
    pub constant: Complex64,
    /// Extrapolated residue after normalization.
    pub residue: Complex64,
    /// Residue from the contour integral.
    pub residue_contour: Complex64,
    /// Max relative quasi-periodicity defect over the samples and all of `E_n`.
    pub quasi_periodicity: f64,
    /// Max of `|residue - 1|` (both methods) and the quasi-periodicity defect.
    pub residual: f64,
}

/// `w_alpha(u) = K e^(lambda u) theta[..](s u) / theta[1/2, 1/2](s u)`; `w_0 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct WFunction {
    alpha: TorsionPoint,
    lattice: Lattice,
    form: Option<(Ansatz, Complex64, Complex64)>,
    report: Option<CalibrationReport>,
}

impl WFunction {
    pub fn alpha(&self) -> &TorsionPoint {
        &self.alpha
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn report(&self) -> Option<&CalibrationReport> {
        self.report.as_ref()
    }

    /// Value at `u`, rejecting arguments near the `n`-torsion.
    pub fn eval(&self, u: Complex64) -> Result<Complex64> {
        match self.form {
            None => Ok(Complex64::new(1.0, 0.0)),
            Some(_) => {
                self.lattice.guard(u, self.alpha.n())?;
                self.eval_unguarded(u)
            }
        }
    }

    fn eval_unguarded(&self, u: Complex64) -> Result<Complex64> {
        match self.form {
            None => Ok(Complex64::new(1.0, 0.0)),
            Some((ansatz, lambda, k)) => Ok(k * (lambda * u).exp() * raw_quotient(ansatz, &self.alpha, &self.lattice, u)?),
        }
    }
}

fn raw_quotient(ansatz: Ansatz, alpha: &TorsionPoint, lattice: &Lattice, u: Complex64) -> Result<Complex64> {
    let (a, b, s) = ansatz.parts(alpha);
    Ok(theta_char(a, b, u * s, lattice)? / theta_char(0.5, 0.5, u * s, lattice)?)
}

/// Fits `lambda` and `K` to quasi-periodicity under `E_n` and unit residue at 0.
pub fn calibrate_w(alpha: &TorsionPoint, lattice: &Lattice) -> Result<WFunction> {
    if alpha.is_zero() {
        return Ok(WFunction { alpha: *alpha, lattice: *lattice, form: None, report: None });
    }
    let n = alpha.n();
    let samples = lattice.sample_points(n, 16, 0.1 / n as f64);
    let e1 = TorsionPoint::new(n, 1, 0)?;
    let target = root_of_unity(n, weil_pairing(&e1, alpha)? as i64);
    let u0 = samples[0];
    let mut best: Option<WFunction> = None;
    for ansatz in Ansatz::ALL {
        let ratio = raw_quotient(ansatz, alpha, lattice, u0 + lattice.point(&e1))? / raw_quotient(ansatz, alpha, lattice, u0)?;
        let base = (target / ratio).ln();
        for branch in -(n as i64)..=(n as i64) {
            let lambda = (base + Complex64::new(0.0, 2.0 * PI * branch as f64)) * n as f64;
            let unit = WFunction { alpha: *alpha, lattice: *lattice, form: Some((ansatz, lambda, Complex64::new(1.0, 0.0))), report: None };
            let raw_residue = residue_at_zero(|u| unit.eval_unguarded(u), RESIDUE_STEP)?;
            let k = raw_residue.inv();
            let mut w = WFunction { form: Some((ansatz, lambda, k)), ..unit };
            let report = measure(&mut w, ansatz, branch, lambda, k, &samples)?;
            let better = best.as_ref().and_then(|b| b.report.as_ref()).map_or(true, |b| report.residual < b.residual);
            let done = report.residual < CALIBRATION_TOL;
            w.report = Some(report);
            if better {
                best = Some(w);
            }
            if done {
                return Ok(best.expect("just stored"));
            }
        }
    }
    let residual = best.and_then(|b| b.report).map_or(f64::INFINITY, |r| r.residual);
    Err(Error::Calibration { residual, tolerance: CALIBRATION_TOL })
}

fn measure(
    w: &mut WFunction,
    ansatz: Ansatz,
    branch: i64,
    lambda: Complex64,
    constant: Complex64,
    samples: &[Complex64],
) -> Result<CalibrationReport> {
    let n = w.alpha.n();
    let residue = residue_at_zero(|u| w.eval_unguarded(u), RESIDUE_STEP)?;
    let radius = 0.3 * nearest_nonzero_torsion(&w.lattice, n);
    let residue_contour = contour_residue(|u| w.eval_unguarded(u), radius, CONTOUR_POINTS)?;
    let quasi_periodicity = quasi_periodicity_defect(w, samples)?;
    let one = Complex64::new(1.0, 0.0);
    let residual = (residue - one).norm().max((residue_contour - one).norm()).max(quasi_periodicity);
    let residual = if residual.is_finite() { residual } else { f64::INFINITY };
    Ok(CalibrationReport { ansatz, branch, lambda, constant, residue, residue_contour, quasi_periodicity, residual })
}

fn nearest_nonzero_torsion(lattice: &Lattice, n: u32) -> f64 {
    TorsionPoint::all(n)
        .iter()
        .filter(|p| !p.is_zero())
        .flat_map(|p| {
            let z = lattice.point(p);
            [z, z - 1.0, z - lattice.tau, z - 1.0 - lattice.tau]
        })
        .map(|z| z.norm())
        .fold(f64::INFINITY, f64::min)
}

/// `max |w(u + beta) - <beta, alpha> w(u)| / |w(u)|` over `beta in E_n` and the samples.
pub fn quasi_periodicity_defect(w: &WFunction, samples: &[Complex64]) -> Result<f64> {
    let n = w.alpha.n();
    let mut worst: f64 = 0.0;
    for u in samples {
        let base = w.eval_unguarded(*u)?;
        for beta in TorsionPoint::all(n) {
            let phase = root_of_unity(n, weil_pairing(&beta, &w.alpha)? as i64);
            let shifted = w.eval_unguarded(u + w.lattice.point(&beta))?;
            let d = (shifted - phase * base).norm() / base.norm();
            worst = if d.is_finite() { worst.max(d) } else { f64::INFINITY };
        }
    }
    Ok(worst)
}

/// The r-matrix with its calibrated `w_alpha` and the tensors `T(alpha) (x) T(alpha)^-1`.
#[derive(Clone, Debug)]
pub struct RMatrix {
    n: u32,
    c: i64,
    lattice: Lattice,
    parts: Vec<(WFunction, CMatrix)>,
}

/// `r_{n,c}(u)` at one argument.
#[derive(Clone, Debug)]
pub struct RMatrixValue {
    pub n: u32,
    pub c: i64,
    pub tau: Complex64,
    pub u: Complex64,
    pub matrix: CMatrix,
}

impl RMatrix {
    pub fn new(n: u32, c: i64, lattice: &Lattice) -> Result<Self> {
        if n == 0 || gcd(n as i64, c) != 1 {
            return Err(Error::InvalidInput(format!("need gcd(c, n) = 1, got n = {n}, c = {c}")));
        }
        let mut parts = Vec::new();
        for alpha in TorsionPoint::all(n).into_iter().filter(|a| !a.is_zero()) {
            let w = calibrate_w(&alpha, lattice)?;
            let t = rep_of_point(&alpha, c);
            parts.push((w, t.kron(&t.inverse()).to_complex()));
        }
        Ok(Self { n, c, lattice: *lattice, parts })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn w_functions(&self) -> impl Iterator<Item = &WFunction> {
        self.parts.iter().map(|(w, _)| w)
    }

    /// `sum_{alpha != 0} w_alpha(u) T(alpha) (x) T(alpha)^-1`.
    pub fn eval(&self, u: Complex64) -> Result<RMatrixValue> {
        self.lattice.guard(u, self.n)?;
        let matrix = self.eval_unguarded(u)?;
        Ok(RMatrixValue { n: self.n, c: self.c, tau: self.lattice.tau, u, matrix })
    }

    /// `r(u, v) = r(u - v)`.
    pub fn eval_pair(&self, u: Complex64, v: Complex64) -> Result<RMatrixValue> {
        self.eval(u - v)
    }

    fn eval_unguarded(&self, u: Complex64) -> Result<CMatrix> {
        let size = (self.n * self.n) as usize;
        let mut m = CMatrix::zeros(size, size);
        for (w, t) in &self.parts {
            m = &m + &t.scale(w.eval_unguarded(u)?);
        }
        Ok(m)
    }

    /// `lim u r(u)`, extrapolated.
    pub fn residue(&self) -> Result<CMatrix> {
        residue_at_zero(|u| self.eval_unguarded(u).map(Wrap), RESIDUE_STEP).map(|w| w.0)
    }
}

/// Arithmetic wrapper so that matrices fit [`residue_at_zero`].
#[derive(Clone)]
struct Wrap(CMatrix);

impl core::ops::Add for Wrap {
    type Output = Wrap;
    fn add(self, o: Wrap) -> Wrap {
        Wrap(&self.0 + &o.0)
    }
}

impl core::ops::Sub for Wrap {
    type Output = Wrap;
    fn sub(self, o: Wrap) -> Wrap {
        Wrap(&self.0 - &o.0)
    }
}

impl core::ops::Mul<f64> for Wrap {
    type Output = Wrap;
    fn mul(self, s: f64) -> Wrap {
        Wrap(self.0.scale(Complex64::new(s, 0.0)))
    }
}

impl core::ops::Mul<Complex64> for Wrap {
    type Output = Wrap;
    fn mul(self, s: Complex64) -> Wrap {
        Wrap(self.0.scale(s))
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `r_{n,c}(u)`; calibrates afresh, prefer [`RMatrix`] for repeated use.
pub fn r_matrix(u: Complex64, n: u32, c: i64, lattice: &Lattice) -> Result<RMatrixValue> {
    RMatrix::new(n, c, lattice)?.eval(u)
}

/// `n P - I`, the expected residue of `r_{n,c}` at 0.
pub fn expected_residue(n: u32) -> CMatrix {
    let size = (n * n) as usize;
    &flip(n as usize).scale(Complex64::new(n as f64, 0.0)) - &CMatrix::identity(size)
}

/// Residuals of the classical Yang-Baxter equation at one `(u, v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CybeResidual {
    /// `|| [r13(u+v), r23(v) - r12(u)] - [r23(v), r12(u)] ||_F / || r12(u) ||_F`.
    pub printed: f64,
    /// The same form with `(u, v)` replaced by `(-u, -v)`.
    pub reversed: f64,
}

/// Checks `[r13(u+v), r23(v) - r12(u)] = [r23(v), r12(u)]` on `(C^n)^(x)3`.
pub fn cybe_residual(r: &RMatrix, u: Complex64, v: Complex64) -> Result<CybeResidual> {
    let printed = cybe_form(r, u, v)?;
    let reversed = cybe_form(r, -u, -v)?;
    Ok(CybeResidual { printed, reversed })
}

fn cybe_form(r: &RMatrix, u: Complex64, v: Complex64) -> Result<f64> {
    let n = r.n as usize;
    let r12 = embed_two_legs(&r.eval(u)?.matrix, n, 0, 1);
    let r13 = embed_two_legs(&r.eval(u + v)?.matrix, n, 0, 2);
    let r23 = embed_two_legs(&r.eval(v)?.matrix, n, 1, 2);
    let lhs = r13.commutator(&(&r23 - &r12));
    let rhs = r23.commutator(&r12);
    Ok((&lhs - &rhs).frobenius() / r12.frobenius())
}

/// A matrix-valued function of one torus variable.
pub type MatrixFunction<'a> = &'a dyn Fn(Complex64) -> Result<CMatrix>;

/// `max ||A(x + alpha) - T(alpha) A(x) T(alpha)^-1|| / ||A(x)||` over `alpha in E_n`, `x` in `samples`.
pub fn automorphy_deviation(a: MatrixFunction<'_>, n: u32, c: i64, lattice: &Lattice, samples: &[Complex64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for x in samples {
        let ax = a(*x)?;
        for alpha in TorsionPoint::all(n) {
            let t = rep_of_point(&alpha, c);
            let conj = &(&t.to_complex() * &ax) * &t.inverse().to_complex();
            let shifted = a(x + lattice.point(&alpha))?;
            worst = worst.max((&shifted - &conj).frobenius() / ax.frobenius());
        }
    }
    Ok(worst)
}

/// `A(x) = w_gamma(x) T(beta)`.
pub fn section(w: &WFunction, beta: &TorsionPoint, c: i64) -> impl Fn(Complex64) -> Result<CMatrix> {
    let t = rep_of_point(beta, c).to_complex();
    let w = w.clone();
    move |x| Ok(t.scale(w.eval(x)?))
}

/// Automorphy of the basis sections built on `T(beta)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionReport {
    pub beta: TorsionPoint,
    /// Deviation of the naive section `w_beta T(beta)`.
    pub naive_deviation: f64,
    /// `k` with `A(x + alpha) = <alpha, beta>^k T(alpha) A(x) T(alpha)^-1` for the naive section.
    pub exponent: Option<u32>,
    /// The corrected index `gamma = (1 - k) beta`.
    pub gamma: Option<TorsionPoint>,
    /// Deviation of `w_gamma T(beta)`.
    pub corrected_deviation: f64,
}

/// Measures how `w_beta T(beta)` fails automorphy and repairs it.
pub fn section_report(beta: &TorsionPoint, c: i64, lattice: &Lattice, samples: &[Complex64]) -> Result<SectionReport> {
    let n = beta.n();
    let w = calibrate_w(beta, lattice)?;
    let naive = section(&w, beta, c);
    let naive_deviation = automorphy_deviation(&naive, n, c, lattice, samples)?;
    let exponent = measure_exponent(&naive, beta, c, lattice, samples)?;
    let (gamma, corrected_deviation) = match exponent {
        Some(k) => {
            let gamma = beta.scale(1 - k as i64);
            let wg = calibrate_w(&gamma, lattice)?;
            let dev = automorphy_deviation(&section(&wg, beta, c), n, c, lattice, samples)?;
            (Some(gamma), dev)
        }
        None => (None, f64::INFINITY),
    };
    Ok(SectionReport { beta: *beta, naive_deviation, exponent, gamma, corrected_deviation })
}

fn measure_exponent(
    a: MatrixFunction<'_>,
    beta: &TorsionPoint,
    c: i64,
    lattice: &Lattice,
    samples: &[Complex64],
) -> Result<Option<u32>> {
    let n = beta.n();
    let mut candidates: Vec<u32> = (0..n).collect();
    for x in samples {
        let ax = a(*x)?;
        for alpha in TorsionPoint::all(n) {
            let t = rep_of_point(&alpha, c);
            let conj = &(&t.to_complex() * &ax) * &t.inverse().to_complex();
            let shifted = a(x + lattice.point(&alpha))?;
            let pair = weil_pairing(&alpha, beta)? as i64;
            candidates.retain(|&k| {
                let target = conj.scale(root_of_unity(n, k as i64 * pair));
                (&shifted - &target).frobenius() <= 1e-6 * ax.frobenius()
            });
        }
    }
    Ok(candidates.first().copied())
}

/// `alpha . op`: block `(i, j)` moves to `(i + a2, j - a2)`, every variable is
/// translated by the torsion point of `alpha`, and the term of `A` picks up
/// `omega^(c a1 sum_ij a_ij (i - j))`.
pub fn en_action(op: &ConvOperator, alpha: &TorsionPoint, c: i64, lattice: &Lattice) -> Result<ConvOperator> {
    match op.ground() {
        Ground::TorusSampled { tau } if *tau == lattice.tau => {}
        Ground::TorusSampled { .. } => return Err(Error::InvalidInput("lattice differs from the operator's torus".into())),
        _ => return Err(Error::GroundMismatch),
    }
    let n = alpha.n() as usize;
    let (a1, a2) = (alpha.a1() as usize, alpha.a2() as usize);
    let shift = lattice.point(alpha);
    let mut out = ConvOperator::zero(op.ground().clone());
    for (a, f) in op.terms() {
        if a.size() != n {
            return Err(Error::DimensionMismatch { expected: n, found: a.size() });
        }
        let mut moved = IntMatrix::zeros(n);
        let mut perm = vec![0; n * n];
        let mut weight: i64 = 0;
        for i in 0..n {
            for j in 0..n {
                let (i2, j2) = ((i + a2) % n, (j + n - a2) % n);
                moved.set(i2, j2, a.get(i, j));
                perm[i * n + j] = i2 * n + j2;
                weight += a.get(i, j) as i64 * (i as i64 - j as i64);
            }
        }
        let phase = root_of_unity(alpha.n(), c * a1 as i64 * weight);
        let g = f.relabel(BlockShape::of_matrix(&moved), &perm)?.translate(shift)?.scale_complex(phase)?;
        out.add_term(moved, g)?;
    }
    Ok(out)
}

/// The degree-one operator `sum_ij Delta(E_ij, A_ij)` of a matrix function.
pub fn operator_of_section(a: Arc<dyn Fn(Complex64) -> Result<CMatrix> + Send + Sync>, n: usize, lattice: &Lattice) -> Result<ConvOperator> {
    let mut op = ConvOperator::zero(lattice.ground());
    for i in 0..n {
        for j in 0..n {
            let mut e = IntMatrix::zeros(n);
            e.set(i, j, 1);
            let a = a.clone();
            let f = Sampled::rule(format!("A[{}][{}]", i + 1, j + 1), move |x| {
                a(x[0]).map_or(Complex64::new(f64::NAN, f64::NAN), |m| m[(i, j)])
            });
            op.add_term(e.clone(), BlockSymFunction::from_sampled(BlockShape::of_matrix(&e), lattice.tau, f))?;
        }
    }
    Ok(op)
}

/// `max |f - g|` over the union of supports, at the given configurations
/// (one coordinate list of length `d` each).
pub fn operator_deviation(x: &ConvOperator, y: &ConvOperator, configs: &[Vec<Complex64>]) -> Result<f64> {
    let mut keys: Vec<IntMatrix> = x.support();
    keys.extend(y.support());
    keys.sort();
    keys.dedup();
    let mut worst: f64 = 0.0;
    for a in &keys {
        for z in configs {
            let fx = x.term(a).map_or(Ok(Complex64::new(0.0, 0.0)), |f| f.evaluate_complex(z))?;
            let fy = y.term(a).map_or(Ok(Complex64::new(0.0, 0.0)), |f| f.evaluate_complex(z))?;
            let d = (fx - fy).norm();
            worst = if d.is_finite() { worst.max(d) } else { f64::INFINITY };
        }
    }
    Ok(worst)
}

/// Name of the calibrated theta quotient, for reports.
pub fn describe(w: &WFunction) -> String {
    match &w.report {
        None => "1".into(),
        Some(r) => format!("{} e^({} u) {}", r.constant, r.lambda, r.ansatz.name()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn theta_examples() {
        let l = Lattice::new(c(0.0, 1.0)).unwrap();
        assert!(theta_char(0.5, 0.5, c(0.0, 0.0), &l).unwrap().norm() < 1e-12);
        let v = theta_char(0.0, 0.0, c(0.0, 0.0), &l).unwrap();
        assert!((v - c(1.086_434_811_213_308, 0.0)).norm() < 1e-14);
        let z = c(0.21, -0.37);
        let (a, b) = (1.0 / 3.0, 0.25);
        let shifted = theta_char(a, b, z + 1.0, &l).unwrap();
        let expected = Complex64::from_polar(1.0, 2.0 * PI * a) * theta_char(a, b, z, &l).unwrap();
        assert!((shifted - expected).norm() < 1e-12);
    }

    #[test]
    fn zero_torsion_gives_one() {
        let l = Lattice::new(c(0.0, 1.0)).unwrap();
        let w = calibrate_w(&TorsionPoint::zero(3), &l).unwrap();
        assert_eq!(w.eval(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn pole_guard_rejects() {
        let l = Lattice::new(c(0.0, 1.0)).unwrap();
        let w = calibrate_w(&TorsionPoint::new(2, 1, 0).unwrap(), &l).unwrap();
        assert!(matches!(w.eval(c(0.5, 5e-4)), Err(Error::PoleProximity { .. })));
        assert!(w.eval(c(0.3, 0.1)).is_ok());
    }

    #[test]
    fn calibration_settles_on_swapped_quotient() {
        let l = Lattice::new(c(0.3, 1.1)).unwrap();
        let w = calibrate_w(&TorsionPoint::new(3, 1, 2).unwrap(), &l).unwrap();
        let r = w.report().unwrap();
        assert_eq!(r.ansatz, Ansatz::ScaledSwapped);
        assert_eq!(r.branch, 0);
        assert!(r.residual < CALIBRATION_TOL);
    }

    #[test]
    fn rejects_non_coprime_charge() {
        let l = Lattice::new(c(0.0, 1.0)).unwrap();
        assert!(RMatrix::new(4, 2, &l).is_err());
    }
}
