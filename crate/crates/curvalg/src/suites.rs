//! The verification suites behind `curvalg verify`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use curvalg_core::combinatorics::{all_matrices, bruhat_leq, enumerate_compositions, enumerate_matrices, length_statistic, preceq, IntMatrix};
use curvalg_core::convolution::{
    commutator, compose, express_in_generators, operator_matrix, restrict_to_support, tau, tensor_matrix, ConvOperator, Evaluator,
    StateSpace,
};
use curvalg_core::elliptic::{
    automorphy_deviation, calibrate_w, cybe_residual, en_action, expected_residue, operator_deviation, operator_of_section,
    quasi_periodicity_defect, section, section_report, Lattice, RMatrix, Truncation,
};
use curvalg_core::funcspace::{power_function, BlockShape, BlockSymFunction, FinitePoints, Ground, Poly};
use curvalg_core::heisenberg::{
    commutant_dimension, consistent_commutator_signs, intertwiner, measure_clock_shift_sign, tensor_sum_is_n_flip, TorsionPoint,
    CLOCK_SHIFT_SIGN, COMMUTATOR_SIGN,
};
use curvalg_core::orbits::{flags, orbit_census, PrimeField};
use curvalg_core::Rational;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::report::{Check, Parameters, TruncationInfo};

pub const SUITES: &[&str] = &["tau", "express", "bruhat", "orbits", "heisenberg", "w", "cybe", "automorphy", "en"];

/// Parameters of a run. Unset fields take per-suite defaults.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: Option<usize>,
    pub d: Option<u32>,
    pub c: Option<i64>,
    pub tau: Option<[f64; 2]>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub trunc: Option<f64>,
}

impl RunConfig {
    /// Fields set in `other` win.
    pub fn overlay(&self, other: &RunConfig) -> RunConfig {
        RunConfig {
            n: other.n.or(self.n),
            d: other.d.or(self.d),
            c: other.c.or(self.c),
            tau: other.tau.or(self.tau),
            seed: other.seed.or(self.seed),
            tol: other.tol.or(self.tol),
            trunc: other.trunc.or(self.trunc),
        }
    }
}

#[derive(Debug)]
pub enum SuiteError {
    /// Bad or missing arguments.
    Usage(String),
    /// Arguments outside what the suite supports, or a computation that
    /// rejected its input.
    Consistency(String),
}

impl std::fmt::Display for SuiteError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SuiteError::Usage(m) | SuiteError::Consistency(m) => f.write_str(m),
        }
    }
}

impl From<curvalg_core::Error> for SuiteError {
    fn from(e: curvalg_core::Error) -> Self {
        SuiteError::Consistency(e.to_string())
    }
}

type Result<T> = std::result::Result<T, SuiteError>;

pub struct Outcome {
    pub parameters: Parameters,
    pub tolerances: BTreeMap<&'static str, f64>,
    pub truncation: Option<TruncationInfo>,
    pub checks: Vec<Check>,
}

pub fn run(suite: &str, cfg: &RunConfig) -> Result<Outcome> {
    if let Some(t) = cfg.tol {
        if !(t > 0.0) {
            return Err(SuiteError::Usage(format!("--tol must be positive, got {t}")));
        }
    }
    if let Some(t) = cfg.trunc {
        if !(t > 0.0 && t < 1.0) {
            return Err(SuiteError::Usage(format!("--trunc must lie in (0, 1), got {t}")));
        }
    }
    match suite {
        "tau" => tau_suite(cfg),
        "express" => express_suite(cfg),
        "bruhat" => bruhat_suite(cfg),
        "orbits" => orbits_suite(cfg),
        "heisenberg" => heisenberg_suite(cfg),
        "w" => w_suite(cfg),
        "cybe" => cybe_suite(cfg),
        "automorphy" => automorphy_suite(cfg),
        "en" => en_suite(cfg),
        other => Err(SuiteError::Usage(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", ")))),
    }
}

fn bounded<T: PartialOrd + std::fmt::Display + Copy>(what: &str, value: T, lo: T, hi: T) -> Result<T> {
    if value < lo || value > hi {
        return Err(SuiteError::Consistency(format!("{what} = {value} outside the supported range {lo}..={hi}")));
    }
    Ok(value)
}

fn exact_outcome(parameters: Parameters, checks: Vec<Check>) -> Outcome {
    Outcome { parameters, tolerances: BTreeMap::from([("exact", 0.0)]), truncation: None, checks }
}

fn q(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn tau_suite(cfg: &RunConfig) -> Result<Outcome> {
    let n = bounded("n", cfg.n.unwrap_or(2), 1, 3)?;
    let d = bounded("d", cfg.d.unwrap_or(2), 0, 3)?;
    let g = Ground::ExactLine;
    let mut cache: BTreeMap<(usize, usize, u32), ConvOperator> = BTreeMap::new();
    let mut t = |i: usize, j: usize, k: u32| -> Result<ConvOperator> {
        if let Some(op) = cache.get(&(i, j, k)) {
            return Ok(op.clone());
        }
        let op = tau(i, j, &power_function(k, &g), n, d)?;
        cache.insert((i, j, k), op.clone());
        Ok(op)
    };
    let (mut total, mut bad, mut first_bad) = (0, 0, String::new());
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    for a in 0..=2u32 {
                        for b in 0..=2u32 {
                            let lhs = commutator(&t(i, j, a)?, &t(k, l, b)?)?;
                            let mut rhs = ConvOperator::zero(g.clone());
                            if j == k {
                                rhs = rhs.add(&t(i, l, a + b)?)?;
                            }
                            if l == i {
                                rhs = rhs.sub(&t(k, j, a + b)?)?;
                            }
                            total += 1;
                            if lhs != rhs {
                                bad += 1;
                                if first_bad.is_empty() {
                                    first_bad = format!("first failure: [E{}{} x^{a}, E{}{} x^{b}]", i + 1, j + 1, k + 1, l + 1);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let mut checks = vec![Check::exact("commutators", "tau turns matrix commutators into operator commutators", bad)
        .detail(if bad == 0 { format!("{total} generator pairs, f, g in {{1, x, x^2}}") } else { first_bad })];

    let pts = FinitePoints::range(d as usize + 1);
    let fg = Ground::FiniteSet(pts.clone());
    let space = StateSpace::new(n, d, pts.len());
    let supports: Vec<Vec<u16>> = (0..=d as u16).map(|skip| (0..=d as u16).filter(|&x| x != skip).collect()).collect();
    let (mut total, mut bad) = (0, 0);
    for i in 0..n {
        for j in 0..n {
            for k in 0..=2u32 {
                let m = operator_matrix(&tau(i, j, &power_function(k, &fg), n, d)?, &space)?;
                for s in &supports {
                    let f = move |x: &Rational| num_traits::Pow::pow(x.clone(), k);
                    total += 1;
                    if restrict_to_support(&m, &space, s).transpose() != tensor_matrix(i, j, f, &pts, &space, s) {
                        bad += 1;
                    }
                }
            }
        }
    }
    checks.push(
        Check::exact("tensor action", "tau agrees with the action on tensor powers of the standard representation", bad)
            .detail(format!("{total} matrices on {} points", pts.len())),
    );
    Ok(exact_outcome(Parameters { n: Some(n), d: Some(d), ..Default::default() }, checks))
}

fn monomials_up_to(shape: &BlockShape, deg: u32) -> Result<Vec<Poly>> {
    let mut keys: BTreeSet<Vec<u32>> = BTreeSet::from([vec![0; shape.d()]]);
    for _ in 0..deg {
        let mut next = keys.clone();
        for k in &keys {
            for i in 0..shape.d() {
                let mut k2 = k.clone();
                k2[i] += 1;
                next.insert(k2);
            }
        }
        keys = next;
    }
    let mut out: Vec<Poly> = Vec::new();
    for k in keys {
        let p = Poly::monomial(shape, k, q(1))?;
        if !out.contains(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

fn express_suite(cfg: &RunConfig) -> Result<Outcome> {
    let n = bounded("n", cfg.n.unwrap_or(2), 1, 3)?;
    let d = bounded("d", cfg.d.unwrap_or(2), 0, 3)?;
    let g = Ground::ExactLine;
    let mut eval = Evaluator::new(n, d, g.clone());
    let (mut count, mut wrong, mut deep, mut max_depth) = (0, 0, 0, 0);
    for c in all_matrices(n, d) {
        let shape = BlockShape::of_matrix(&c);
        for h in monomials_up_to(&shape, 2)? {
            let h = BlockSymFunction::from_poly(shape.clone(), h);
            let target = ConvOperator::single(c.clone(), h.clone())?;
            let e = express_in_generators(&c, &h)?;
            if !e.expr.leaves_are_generators() || !eval.eval(&e.expr)?.sub(&target)?.is_zero() {
                wrong += 1;
            }
            if e.depth as u64 > length_statistic(&c) {
                deep += 1;
            }
            max_depth = max_depth.max(e.depth);
            count += 1;
        }
    }
    let checks = vec![
        Check::exact("generator expressions", "every Delta(C, h) is a combination of products of tau-images", wrong)
            .detail(format!("{count} pairs (C, h), h a monomial of degree <= 2")),
        Check::exact("recursion depth", "the recursion descends along the length statistic", deep)
            .detail(format!("max depth {max_depth}")),
    ];
    Ok(exact_outcome(Parameters { n: Some(n), d: Some(d), ..Default::default() }, checks))
}

fn bruhat_suite(cfg: &RunConfig) -> Result<Outcome> {
    let n = bounded("n", cfg.n.unwrap_or(4), 1, 4)?;
    let d = bounded("d", cfg.d.unwrap_or(4), 0, 4)?;
    let (mut pairs, mut bad, mut first_bad) = (0, 0, String::new());
    for v1 in enumerate_compositions(n, d) {
        for v2 in enumerate_compositions(n, d) {
            let ms = enumerate_matrices(&v1, &v2)?;
            for a in &ms {
                for b in &ms {
                    pairs += 1;
                    if bruhat_leq(a, b)? && !preceq(a, b) {
                        bad += 1;
                        if first_bad.is_empty() {
                            first_bad = format!("first failure: {a} <= {b}");
                        }
                    }
                }
            }
        }
    }
    let checks = vec![Check::exact("monotonicity", "Bruhat order on double cosets implies the corner-sum order", bad)
        .detail(if bad == 0 { format!("{pairs} pairs") } else { first_bad })];
    Ok(exact_outcome(Parameters { n: Some(n), d: Some(d), ..Default::default() }, checks))
}

fn orbits_suite(cfg: &RunConfig) -> Result<Outcome> {
    let n = bounded("n", cfg.n.unwrap_or(2), 1, 3)?;
    let d = bounded("d", cfg.d.unwrap_or(2), 0, 3)?;
    let qq = 2u8;
    let f = PrimeField::new(qq)?;
    let census = orbit_census(n, d, qq)?;
    let expected: BTreeSet<IntMatrix> = all_matrices(n, d).into_iter().collect();
    let got: BTreeSet<IntMatrix> = census.counts.keys().cloned().collect();
    let mut bad_marginals = 0;
    for v1 in enumerate_compositions(n, d) {
        for v2 in enumerate_compositions(n, d) {
            let pairs: u64 = census.counts.iter().filter(|(a, _)| a.row_sums() == v1 && a.col_sums() == v2).map(|(_, c)| c).sum();
            if pairs != (flags(&f, &v1).len() * flags(&f, &v2).len()) as u64 {
                bad_marginals += 1;
            }
        }
    }
    let checks = vec![
        Check::exact("realized matrices", "orbits of flag pairs are indexed by the matrices with the given marginals", got.symmetric_difference(&expected).count())
            .detail(format!("{} orbits", got.len())),
        Check::exact("total count", "the orbits partition all pairs of flags", usize::from(census.total_pairs() != census.flags * census.flags))
            .detail(format!("{} flags", census.flags)),
        Check::exact("marginal counts", "each marginal pair accounts for the product of the flag counts", bad_marginals),
    ];
    Ok(exact_outcome(Parameters { n: Some(n), d: Some(d), q: Some(qq), ..Default::default() }, checks))
}

fn heisenberg_suite(cfg: &RunConfig) -> Result<Outcome> {
    let n = bounded("n", cfg.n.unwrap_or(3), 1, 6)? as u32;
    let c = cfg.c.unwrap_or(1).rem_euclid(n as i64);
    let coprime = gcd(n as i64, c) == 1;
    let mut checks = Vec::new();
    if n >= 3 {
        let sign = measure_clock_shift_sign(n);
        checks.push(
            Check::exact("clock and shift", "clock and shift commute up to a primitive root of unity", usize::from(sign != Some(CLOCK_SHIFT_SIGN)))
                .detail(format!("measured sign {sign:?}, expected {CLOCK_SHIFT_SIGN}")),
        );
    }
    if coprime && n >= 3 {
        let signs = consistent_commutator_signs(n, c);
        checks.push(
            Check::exact("commutator sign", "the group commutator is a fixed power of the pairing", usize::from(!signs.contains(&COMMUTATOR_SIGN)))
                .detail(format!("consistent signs {signs:?}, expected {COMMUTATOR_SIGN}")),
        );
    }
    let mut bad = 0;
    for cc in 0..n as i64 {
        let dim = commutant_dimension(n, cc)?;
        if (dim == 1) != (gcd(n as i64, cc) == 1) {
            bad += 1;
        }
    }
    checks.push(Check::exact("commutant", "the representation is irreducible exactly for charge prime to n", bad).detail(format!("charges 0..{n}")));
    if coprime {
        checks.push(Check::exact("tensor sum", "the sum of T(a) x T(a)^-1 over the torsion points is n times the flip", usize::from(!tensor_sum_is_n_flip(n, c))));
        let x = intertwiner(n, c)?;
        checks.push(
            Check::exact("functional model", "the functional model is isomorphic to the clock and shift model", usize::from(x.matrix.is_none()))
                .detail(format!("solution space of dimension {}", x.solutions)),
        );
    }
    Ok(exact_outcome(Parameters { n: Some(n as usize), c: Some(c), ..Default::default() }, checks))
}

/// Common setup for the numeric suites.
struct Numeric {
    n: u32,
    c: i64,
    lattice: Lattice,
    rng: ChaCha8Rng,
    tol: f64,
    parameters: Parameters,
    truncation: TruncationInfo,
}

fn numeric(cfg: &RunConfig, max_n: usize, default_tol: f64) -> Result<Numeric> {
    let n = bounded("n", cfg.n.unwrap_or(2), 1, max_n)? as u32;
    let c = cfg.c.unwrap_or(1);
    if gcd(n as i64, c) != 1 {
        return Err(SuiteError::Consistency(format!("charge c = {c} must be prime to n = {n}")));
    }
    let seed = cfg.seed.ok_or_else(|| SuiteError::Usage("this suite samples random points and needs --seed".into()))?;
    let [re, im] = cfg.tau.unwrap_or([0.0, 1.0]);
    let trunc = Truncation { rel_tol: cfg.trunc.unwrap_or(Truncation::default().rel_tol), ..Truncation::default() };
    let lattice = Lattice::with_truncation(Complex64::new(re, im), trunc)?;
    Ok(Numeric {
        n,
        c,
        lattice,
        rng: ChaCha8Rng::seed_from_u64(seed),
        tol: cfg.tol.unwrap_or(default_tol),
        parameters: Parameters { n: Some(n as usize), c: Some(c), tau: Some([re, im]), seed: Some(seed), ..Default::default() },
        truncation: TruncationInfo { rel_tol: trunc.rel_tol, scale: trunc.scale },
    })
}

impl Numeric {
    /// Uniform points of the fundamental domain at least `min` away from the n-torsion.
    fn points(&mut self, count: usize, min: f64) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let u = Complex64::new(self.rng.gen(), 0.0) + self.lattice.tau() * self.rng.gen::<f64>();
            if self.lattice.distance_to_torsion(u, self.n) >= min {
                out.push(u);
            }
        }
        out
    }

    fn finish(self, tolerances: BTreeMap<&'static str, f64>, checks: Vec<Check>) -> Outcome {
        Outcome { parameters: self.parameters, tolerances, truncation: Some(self.truncation), checks }
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("({:.6}, {:.6})", z.re, z.im)
}

fn w_suite(cfg: &RunConfig) -> Result<Outcome> {
    let mut s = numeric(cfg, 4, 1e-9)?;
    s.parameters.c = None;
    let samples = s.points(8, 0.1 / s.n as f64);
    let mut checks = Vec::new();
    for alpha in TorsionPoint::all(s.n).into_iter().filter(|a| !a.is_zero()) {
        let name = format!("alpha = ({}, {})", alpha.a1() + 1, alpha.a2() + 1);
        let w = calibrate_w(&alpha, &s.lattice)?;
        let r = w.report().expect("nonzero torsion point is calibrated");
        let qp = quasi_periodicity_defect(&w, &samples)?;
        let res = (r.residue - 1.0).norm().max((r.residue_contour - 1.0).norm());
        let finite = samples.iter().all(|u| w.eval(*u).map(|x| x.is_finite()).unwrap_or(false));
        checks.push(
            Check::new(format!("quasi-periodicity {name}"), "w_alpha is periodic in 1 and picks up exp(2 pi i a/n) under tau", qp, s.tol)
                .detail(format!("{} ansatz, {} samples{}", r.ansatz.name(), samples.len(), if finite { "" } else { ", non-finite values" })),
        );
        checks.push(Check::new(format!("residue {name}"), "w_alpha has a simple pole of residue 1 at the origin", res, s.tol));
    }
    let one = calibrate_w(&TorsionPoint::zero(s.n), &s.lattice)?.eval(Complex64::new(0.1, 0.2))?;
    checks.push(Check::new("alpha = 0", "w_0 is the constant 1", (one - 1.0).norm(), 0.0));
    let tol = s.tol;
    Ok(s.finish(BTreeMap::from([("quasi_periodicity", tol), ("residue", tol)]), checks))
}

fn cybe_suite(cfg: &RunConfig) -> Result<Outcome> {
    const PAIRS: usize = 20;
    const DOUBLING_TOL: f64 = 1e-12;
    const RESIDUE_TOL: f64 = 1e-6;
    let mut s = numeric(cfg, 4, 1e-8)?;
    let r = RMatrix::new(s.n, s.c, &s.lattice)?;
    let doubled = Lattice::with_truncation(s.lattice.tau(), s.lattice.truncation().doubled())?;
    let r2 = RMatrix::new(s.n, s.c, &doubled)?;
    let mut checks = Vec::new();
    let mut shift: f64 = 0.0;
    let mut k = 0;
    while k < PAIRS {
        let pts = s.points(2, 0.02);
        let (u, v) = (pts[0], pts[1]);
        if s.lattice.distance_to_torsion(u + v, s.n) < 0.02 {
            continue;
        }
        k += 1;
        let a = cybe_residual(&r, u, v)?;
        let b = cybe_residual(&r2, u, v)?;
        shift = shift.max((a.printed - b.printed).abs());
        let mut detail = format!("u = {}, v = {}", fmt_c(u), fmt_c(v));
        if a.printed > s.tol && a.reversed <= s.tol {
            detail.push_str(&format!("; the form with (u, v) -> (-u, -v) holds, residual {:e}", a.reversed));
        }
        checks.push(Check::new(format!("pair {k}"), "r satisfies the classical Yang-Baxter equation", a.printed, s.tol).detail(detail));
    }
    checks.push(Check::new("truncation doubling", "the residuals do not move when the theta windows double", shift, DOUBLING_TOL));
    let dev = (&r.residue()? - &expected_residue(s.n)).max_abs();
    checks.push(Check::new("residue", "u r(u) tends to n P - I at the origin", dev, RESIDUE_TOL));
    let tol = s.tol;
    Ok(s.finish(BTreeMap::from([("cybe", tol), ("doubling", DOUBLING_TOL), ("residue", RESIDUE_TOL)]), checks))
}

fn automorphy_suite(cfg: &RunConfig) -> Result<Outcome> {
    const CONTROL: f64 = 0.1;
    let mut s = numeric(cfg, 4, 1e-9)?;
    let samples = s.points(8, 0.1 / s.n as f64);
    let mut checks = Vec::new();
    let mut control = f64::INFINITY;
    for beta in TorsionPoint::all(s.n).into_iter().filter(|b| !b.is_zero()) {
        let rep = section_report(&beta, s.c, &s.lattice, &samples)?;
        let label = format!("({}, {})", beta.a1() + 1, beta.a2() + 1);
        let detail = match (rep.exponent, rep.gamma) {
            (Some(k), Some(g)) => format!(
                "naive section deviation {:.3e}; discrepancy <alpha, beta>^{k}; corrected index ({}, {})",
                rep.naive_deviation,
                g.a1() + 1,
                g.a2() + 1
            ),
            _ => format!("naive section deviation {:.3e}; no power of the pairing fits", rep.naive_deviation),
        };
        checks.push(
            Check::new(format!("section beta = {label}"), "w T(beta) with corrected index is automorphic under T(alpha) conjugation", rep.corrected_deviation, s.tol)
                .detail(detail),
        );
        if let Some(g) = rep.gamma {
            let w = calibrate_w(&g, &s.lattice)?;
            let wrong = TorsionPoint::new(s.n, beta.a1() as i64 + 1, beta.a2() as i64)?;
            control = control.min(automorphy_deviation(&section(&w, &wrong, s.c), s.n, s.c, &s.lattice, &samples)?);
        }
    }
    if control.is_finite() {
        checks.push(Check::control("negative control", "a mismatched section is not automorphic", control, CONTROL));
    }
    let tol = s.tol;
    Ok(s.finish(BTreeMap::from([("automorphy", tol), ("control", CONTROL)]), checks))
}

fn en_suite(cfg: &RunConfig) -> Result<Outcome> {
    const CONTROL: f64 = 0.1;
    let mut s = numeric(cfg, 3, 1e-9)?;
    let (n, c, l) = (s.n, s.c, s.lattice);
    let samples = s.points(8, 0.1 / n as f64);
    let configs: Vec<Vec<Complex64>> = samples.iter().map(|z| vec![*z]).collect();
    let mut ops = Vec::new();
    let mut control = f64::INFINITY;
    for beta in TorsionPoint::all(n).into_iter().filter(|b| !b.is_zero()) {
        let rep = section_report(&beta, c, &l, &samples)?;
        let gamma = rep.gamma.ok_or_else(|| SuiteError::Consistency(format!("no automorphic section for beta = {beta:?}")))?;
        let w = calibrate_w(&gamma, &l)?;
        ops.push(operator_of_section(Arc::new(section(&w, &beta, c)), n as usize, &l)?);
        let wrong = TorsionPoint::new(n, beta.a1() as i64 + 1, beta.a2() as i64)?;
        let bad = operator_of_section(Arc::new(section(&w, &wrong, c)), n as usize, &l)?;
        let mut moved: f64 = 0.0;
        for alpha in TorsionPoint::all(n) {
            moved = moved.max(operator_deviation(&en_action(&bad, &alpha, c, &l)?, &bad, &configs)?);
        }
        control = control.min(moved);
    }
    let (mut action, mut fixed, mut equiv): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for op in &ops {
        for a in TorsionPoint::all(n) {
            let img = en_action(op, &a, c, &l)?;
            fixed = fixed.max(operator_deviation(&img, op, &configs)?);
            for b in TorsionPoint::all(n) {
                let lhs = en_action(&en_action(op, &b, c, &l)?, &a, c, &l)?;
                let rhs = en_action(op, &a.add(&b)?, c, &l)?;
                action = action.max(operator_deviation(&lhs, &rhs, &configs)?);
            }
            for other in &ops {
                let lhs = en_action(&compose(op, other)?, &a, c, &l)?;
                let rhs = compose(&img, &en_action(other, &a, c, &l)?)?;
                equiv = equiv.max(operator_deviation(&lhs, &rhs, &configs)?);
            }
        }
    }
    let tol = s.tol;
    let checks = vec![
        Check::new("group action", "acting by a then b equals acting by a + b", action, tol),
        Check::new("invariance", "operators built from automorphic sections are E_n-invariant", fixed, tol),
        Check::new("compose equivariance", "the action commutes with composition", equiv, tol),
        Check::control("negative control", "an operator from a mismatched section moves", control, CONTROL),
    ];
    s.parameters.d = Some(1);
    Ok(s.finish(BTreeMap::from([("en", tol), ("control", CONTROL)]), checks))
}
