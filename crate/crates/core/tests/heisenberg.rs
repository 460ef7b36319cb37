use curvalg_core::heisenberg::*;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = (u32, i64, i64, i64, i64)> {
    (1u32..=6).prop_flat_map(|n| (Just(n), 0..n as i64, 0..n as i64, 0..n as i64, 0..n as i64))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairing_is_skew((n, a1, a2, b1, b2) in point()) {
        let a = TorsionPoint::new(n, a1, a2).unwrap();
        let b = TorsionPoint::new(n, b1, b2).unwrap();
        let ab = weil_pairing(&a, &b).unwrap();
        let ba = weil_pairing(&b, &a).unwrap();
        prop_assert_eq!((ab + ba) % n, 0);
        prop_assert_eq!(weil_pairing(&a, &a).unwrap(), 0);
    }

    #[test]
    fn rep_matrices_are_monomial_and_unitary((n, a1, a2, z, c) in point()) {
        let h = HeisenbergElement::new(TorsionPoint::new(n, a1, a2).unwrap(), z);
        let m = rep_matrix(&h, c).matrix;
        for x in m.data() {
            let r = x.norm();
            prop_assert!((r * (r - 1.0)).abs() < 1e-14);
        }
        let gram = &m.adjoint() * &m;
        prop_assert!((&gram - &curvalg_core::linalg::CMatrix::identity(n as usize)).max_abs() < 1e-12);
    }

    #[test]
    fn commutator_is_pairing_power((n, a1, a2, b1, b2) in point(), c in 1i64..6) {
        let a = TorsionPoint::new(n, a1, a2).unwrap();
        let b = TorsionPoint::new(n, b1, b2).unwrap();
        let k = commutator_exponent(&a, &b, c).unwrap() as i64;
        let w = weil_pairing(&a, &b).unwrap() as i64;
        prop_assert_eq!(k, (COMMUTATOR_SIGN as i64 * c * w).rem_euclid(n as i64));
    }
}

#[test]
fn commutant_is_trivial_iff_coprime() {
    for n in 1..=6u32 {
        for c in 0..n as i64 {
            let coprime = num_integer_gcd(n as i64, c) == 1;
            assert_eq!(commutant_dimension(n, c).unwrap() == 1, coprime, "n = {n}, c = {c}");
        }
    }
}

fn num_integer_gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a } else { num_integer_gcd(b, a % b) }
}

#[test]
fn tensor_sum_is_exact_flip() {
    for n in 1..=5 {
        for c in (1..=n as i64).filter(|&c| num_integer_gcd(n as i64, c) == 1) {
            assert!(tensor_sum_is_n_flip(n, c), "n = {n}, c = {c}");
        }
    }
}

#[test]
fn functional_space_has_dimension_n() {
    for n in 1..=6u32 {
        for c in (1..=n as i64).filter(|&c| num_integer_gcd(n as i64, c) == 1) {
            assert_eq!(functional_space_dimension(n, c), n as usize);
        }
    }
}

/// The printed cocycle has commutator `<a, b>^2`, the matrices `<a, b>^-c`:
/// the two models agree only when `n` divides 3.
#[test]
fn intertwiner_exists_exactly_when_commutators_match() {
    for n in 1..=5u32 {
        let found = intertwiner(n, 1).unwrap().matrix.is_some();
        assert_eq!(found, 3 % n == 0, "n = {n}");
    }
}
