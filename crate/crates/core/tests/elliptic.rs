use std::sync::Arc;

use curvalg_core::convolution::compose;
use curvalg_core::elliptic::*;
use curvalg_core::heisenberg::{rep_of_point, TorsionPoint};
use curvalg_core::linalg::CMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn lattices() -> [Lattice; 2] {
    [Lattice::new(c(0.0, 1.0)).unwrap(), Lattice::new(c(0.3, 1.1)).unwrap()]
}

/// Random points of the fundamental domain with `u`, `v` and `u + v` kept away from the torsion.
fn random_pairs(l: &Lattice, n: u32, count: usize, seed: u64) -> Vec<(Complex64, Complex64)> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let mut pick = || c(rng.gen::<f64>(), 0.0) + l.tau() * rng.gen::<f64>();
        let (u, v) = (pick(), pick());
        if [u, v, u + v].iter().all(|z| l.distance_to_torsion(*z, n) > 0.05) {
            out.push((u, v));
        }
    }
    out
}

#[test]
fn theta_truncation_is_stable() {
    let l = Lattice::new(c(0.0, 1.0)).unwrap();
    let l2 = Lattice::with_truncation(c(0.0, 1.0), Truncation::default().doubled()).unwrap();
    for z in [c(0.0, 0.0), c(0.3, 0.4), c(-0.2, -0.9)] {
        let a = theta_char(0.0, 0.0, z, &l).unwrap();
        let b = theta_char(0.0, 0.0, z, &l2).unwrap();
        assert!((a - b).norm() < 1e-14 * a.norm().max(1.0));
    }
}

#[test]
fn w_conditions_hold() {
    for l in lattices() {
        for n in [2, 3] {
            let samples = l.sample_points(n, 8, 0.1 / n as f64);
            for alpha in TorsionPoint::all(n).into_iter().filter(|a| !a.is_zero()) {
                let w = calibrate_w(&alpha, &l).unwrap();
                let r = w.report().unwrap();
                assert!((r.residue - 1.0).norm() < 1e-9);
                assert!((r.residue_contour - 1.0).norm() < 1e-9);
                assert!(quasi_periodicity_defect(&w, &samples).unwrap() < 1e-9);
                for u in &samples {
                    assert!(w.eval(*u).unwrap().is_finite());
                }
            }
        }
    }
}

#[test]
fn r_matrix_examples() {
    let l = Lattice::new(c(0.0, 1.0)).unwrap();
    let v = r_matrix(c(0.3, 0.0), 2, 1, &l).unwrap();
    assert!(v.matrix.data().iter().all(|x| x.is_finite()));
    assert!(v.matrix.frobenius() > 0.0);

    let r = RMatrix::new(2, 1, &l).unwrap();
    let (u, w) = (c(0.41, 0.2), c(0.1, -0.13));
    assert_eq!(r.eval_pair(u, w).unwrap().matrix, r.eval(u - w).unwrap().matrix);
    assert!(r.eval(c(0.5, 2e-4)).is_err());

    let res = cybe_residual(&r, c(0.23, 0.11), c(0.37, -0.05)).unwrap();
    assert!(res.printed < 1e-8, "{res:?}");
}

#[test]
fn cybe_sweep_n3() {
    let l = Lattice::new(c(0.3, 1.1)).unwrap();
    let r = RMatrix::new(3, 1, &l).unwrap();
    let worst = random_pairs(&l, 3, 20, 3)
        .into_iter()
        .map(|(u, v)| cybe_residual(&r, u, v).unwrap().printed)
        .fold(0.0, f64::max);
    assert!(worst < 1e-8, "{worst}");
}

#[test]
fn residue_is_n_flip_minus_identity() {
    for l in lattices() {
        for (n, ch) in [(2, 1), (3, 1), (3, 2)] {
            let r = RMatrix::new(n, ch, &l).unwrap();
            let dev = (&r.residue().unwrap() - &expected_residue(n)).max_abs();
            assert!(dev < 1e-6, "n = {n}: {dev}");
        }
    }
}

#[test]
fn automorphy_of_sections() {
    let l = lattices()[1];
    let scalar = |_: Complex64| Ok(CMatrix::identity(3).scale(c(2.0, -1.0)));
    let samples = l.sample_points(3, 8, 0.1 / 3.0);
    assert!(automorphy_deviation(&scalar, 3, 1, &l, &samples).unwrap() < 1e-10);
    for (n, ch) in [(2u32, 1i64), (3, 1), (3, 2)] {
        let samples = l.sample_points(n, 8, 0.1 / n as f64);
        for beta in TorsionPoint::all(n).into_iter().filter(|a| !a.is_zero()) {
            let rep = section_report(&beta, ch, &l, &samples).unwrap();
            // The corrected index is -c beta in every case measured.
            assert_eq!(rep.gamma, Some(beta.scale(-ch)));
            assert!(rep.corrected_deviation < 1e-9);
        }
    }
}

#[test]
fn wrong_section_is_not_automorphic() {
    let l = lattices()[0];
    let samples = l.sample_points(3, 8, 0.1 / 3.0);
    let beta = TorsionPoint::new(3, 1, 0).unwrap();
    let w = calibrate_w(&beta.scale(-1), &l).unwrap();
    let wrong = section(&w, &TorsionPoint::new(3, 1, 1).unwrap(), 1);
    assert!(automorphy_deviation(&wrong, 3, 1, &l, &samples).unwrap() > 0.1);
}

#[test]
fn en_action_at_degree_one() {
    let (n, ch) = (2u32, 1i64);
    let l = lattices()[0];
    let configs: Vec<Vec<Complex64>> = l.sample_points(n, 8, 0.1 / n as f64).into_iter().map(|z| vec![z]).collect();
    let ops: Vec<_> = TorsionPoint::all(n)
        .into_iter()
        .filter(|b| !b.is_zero())
        .map(|b| {
            let w = calibrate_w(&b.scale(-ch), &l).unwrap();
            operator_of_section(Arc::new(section(&w, &b, ch)), n as usize, &l).unwrap()
        })
        .collect();
    for op in &ops {
        for a in TorsionPoint::all(n) {
            let img = en_action(op, &a, ch, &l).unwrap();
            assert!(operator_deviation(&img, op, &configs).unwrap() < 1e-9);
            for b in TorsionPoint::all(n) {
                let lhs = en_action(&en_action(op, &b, ch, &l).unwrap(), &a, ch, &l).unwrap();
                let rhs = en_action(op, &a.add(&b).unwrap(), ch, &l).unwrap();
                assert!(operator_deviation(&lhs, &rhs, &configs).unwrap() < 1e-10);
            }
            for other in &ops {
                let lhs = en_action(&compose(op, other).unwrap(), &a, ch, &l).unwrap();
                let rhs = compose(&img, &en_action(other, &a, ch, &l).unwrap()).unwrap();
                assert!(operator_deviation(&lhs, &rhs, &configs).unwrap() < 1e-9);
            }
        }
    }
}

#[test]
fn section_operator_matches_matrix() {
    let l = lattices()[1];
    let beta = TorsionPoint::new(2, 1, 1).unwrap();
    let w = calibrate_w(&beta, &l).unwrap();
    let op = operator_of_section(Arc::new(section(&w, &beta, 1)), 2, &l).unwrap();
    let t = rep_of_point(&beta, 1).to_complex();
    let z = c(0.31, 0.42);
    for a in op.support() {
        let (i, j) = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).find(|&(i, j)| a.get(i, j) == 1).unwrap();
        let v = op.term(&a).unwrap().evaluate_complex(&[z]).unwrap();
        assert!((v - w.eval(z).unwrap() * t[(i, j)]).norm() < 1e-14);
    }
}
