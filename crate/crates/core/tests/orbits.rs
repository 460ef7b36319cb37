use std::collections::BTreeSet;

use curvalg_core::combinatorics::{all_matrices, bruhat_leq, enumerate_compositions, Composition, IntMatrix};
use curvalg_core::orbits::*;
use rand::{Rng, SeedableRng};

fn random_invertible(f: &PrimeField, d: usize, rng: &mut impl Rng) -> Vec<Vec<u8>> {
    loop {
        let g: Vec<Vec<u8>> = (0..d).map(|_| (0..d).map(|_| rng.gen_range(0..f.order())).collect()).collect();
        if f.rank(&g) == d {
            return g;
        }
    }
}

#[test]
fn orbit_matrix_is_invariant() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
    for q in [2u8, 3] {
        let f = PrimeField::new(q).unwrap();
        let v1 = Composition::new(vec![1, 1, 1]).unwrap();
        let v2 = Composition::new(vec![2, 0, 1]).unwrap();
        let (a, b) = (flags(&f, &v1), flags(&f, &v2));
        for _ in 0..20 {
            let g = random_invertible(&f, 3, &mut rng);
            let x = a[rng.gen_range(0..a.len())].clone();
            let y = b[rng.gen_range(0..b.len())].clone();
            let before = orbit_matrix(&f, &FlagPair::new(x.clone(), y.clone()).unwrap()).unwrap();
            let after = orbit_matrix(&f, &FlagPair::new(x.transform(&f, &g), y.transform(&f, &g)).unwrap()).unwrap();
            assert_eq!(before, after);
            assert_eq!(before.row_sums(), v1);
            assert_eq!(before.col_sums(), v2);
        }
    }
}

#[test]
fn census_realizes_exactly_m() {
    for n in 1..=3 {
        for d in 0..=3 {
            let census = orbit_census(n, d, 2).unwrap();
            let expected: BTreeSet<IntMatrix> = all_matrices(n, d).into_iter().collect();
            let got: BTreeSet<IntMatrix> = census.counts.keys().cloned().collect();
            assert_eq!(got, expected, "n = {n}, d = {d}");
            assert_eq!(census.total_pairs(), census.flags * census.flags);
        }
    }
    let census = orbit_census(2, 2, 3).unwrap();
    assert_eq!(census.counts.len(), all_matrices(2, 2).len());
    assert!(orbit_census(4, 2, 2).is_err());
}

#[test]
fn diagonal_classes_hold_equal_flags() {
    let f = PrimeField::new(2).unwrap();
    for v in enumerate_compositions(3, 3) {
        for x in flags(&f, &v) {
            let a = orbit_matrix(&f, &FlagPair::new(x.clone(), x).unwrap()).unwrap();
            assert_eq!(a, IntMatrix::diag(&v));
        }
    }
}

fn inversions(p: &[usize]) -> usize {
    (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count()
}

/// Bruhat order on `S_d` as the transitive closure of `u < u t` for
/// transpositions `t` raising the inversion count.
fn bruhat_by_transpositions(d: usize) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    let mut perms: Vec<Vec<usize>> = vec![(0..d).collect()];
    let mut k = 0;
    while k < perms.len() {
        let p = perms[k].clone();
        for i in 0..d {
            for j in i + 1..d {
                let mut t = p.clone();
                t.swap(i, j);
                if !perms.contains(&t) {
                    perms.push(t);
                }
            }
        }
        k += 1;
    }
    let mut rel: BTreeSet<(Vec<usize>, Vec<usize>)> = perms.iter().map(|p| (p.clone(), p.clone())).collect();
    loop {
        let mut grown = rel.clone();
        for (u, w) in &rel {
            for i in 0..d {
                for j in i + 1..d {
                    let mut t = w.clone();
                    t.swap(i, j);
                    if inversions(&t) > inversions(w) {
                        grown.insert((u.clone(), t));
                    }
                }
            }
        }
        if grown.len() == rel.len() {
            return rel;
        }
        rel = grown;
    }
}

#[test]
fn order_on_full_flags_is_bruhat_order() {
    for d in 1..=3u32 {
        let ones = Composition::new(vec![1; d as usize]).unwrap();
        let perm_mats: Vec<IntMatrix> = all_matrices(d as usize, d)
            .into_iter()
            .filter(|a| a.row_sums() == ones && a.col_sums() == ones)
            .collect();
        let reference = bruhat_by_transpositions(d as usize);
        for a in &perm_mats {
            for b in &perm_mats {
                let pa = permutation_of_matrix(a).unwrap().images().to_vec();
                let pb = permutation_of_matrix(b).unwrap().images().to_vec();
                assert_eq!(bruhat_leq(b, a).unwrap(), reference.contains(&(pb, pa)), "{b} vs {a}");
            }
        }
    }
}
