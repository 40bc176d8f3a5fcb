use apnforge::field::{BinaryField, Gf};
use apnforge::poly::{self, gcd, CubicBranch};
use proptest::prelude::*;

#[test]
fn good_alphas_exist_for_every_coprime_k() {
    for m in 2..=12 {
        let f = Gf::with_degree(m).unwrap();
        for k in (1..m).filter(|&k| gcd(k, m) == 1) {
            let good = poly::find_good_alphas(&f, k).unwrap();
            assert!(!good.is_empty(), "m={m} k={k}");
            assert!(good.iter().all(|&a| a != 0));
        }
    }
}

#[test]
fn good_alphas_match_direct_root_scan() {
    for m in [3, 4, 5, 6] {
        let f = Gf::with_degree(m).unwrap();
        for k in (1..m).filter(|&k| gcd(k, m) == 1) {
            let good = poly::find_good_alphas(&f, k).unwrap();
            let direct: Vec<u32> = f
                .elements()
                .filter(|&a| !poly::phi_has_root(&f, k, a).unwrap())
                .collect();
            assert_eq!(good, direct);
        }
    }
}

#[test]
fn one_is_good_iff_three_coprime_to_m() {
    for m in 2..=12 {
        let f = Gf::with_degree(m).unwrap();
        for k in (1..m).filter(|&k| gcd(k, m) == 1) {
            assert_eq!(
                !poly::phi_has_root(&f, k, 1).unwrap(),
                gcd(3, m) == 1,
                "m={m} k={k}"
            );
        }
    }
}

#[test]
fn rootless_phi_iff_linearized_permutation() {
    for m in 2..=8 {
        let f = Gf::with_degree(m).unwrap();
        for k in [1, 2, 3].into_iter().filter(|&k| gcd(k, m) == 1) {
            for alpha in f.elements() {
                assert_eq!(
                    poly::phi_has_root(&f, k, alpha).unwrap(),
                    !poly::linearized_is_permutation(&f, 1, 1, alpha, k).unwrap(),
                    "m={m} k={k} alpha={alpha}"
                );
            }
        }
    }
}

#[test]
fn f2_condition_matches_f1_condition_at_k1() {
    for m in 2..=10 {
        let f = Gf::with_degree(m).unwrap();
        let good = poly::find_good_alphas(&f, 1).unwrap();
        for alpha in f.elements().skip(1) {
            let rootless = poly::cubic_roots(&f, 1, alpha).unwrap().root_count == 0;
            assert_eq!(rootless, good.contains(&alpha));
        }
    }
}

#[test]
fn cubic_roots_on_large_field() {
    let f = Gf::with_degree(15).unwrap();
    let r = poly::cubic_roots(&f, 0, 1).unwrap();
    // m odd: cubing permutes F_{2^m}, z^3 = 1 has the single root 1
    assert_eq!(r.roots, vec![1]);
    assert_eq!(r.branch, CubicBranch::OneRoot);
}

proptest! {
    #[test]
    fn cubic_prediction_matches_scan(m in 2u32..=10, a in any::<u32>(), b in any::<u32>()) {
        let f = Gf::with_degree(m).unwrap();
        let mask = (1u32 << m) - 1;
        let (a, b) = (a & mask, (b & mask).max(1));
        let report = poly::cubic_roots(&f, a, b).unwrap();
        let brute = f.elements().filter(|&z| f.pow(z, 3) ^ f.mul(a, z) ^ b == 0).count();
        prop_assert_eq!(report.root_count, brute);
        prop_assert_eq!(report.branch.predicted_count(), brute);
        for &z in &report.roots {
            prop_assert_eq!(f.pow(z, 3) ^ f.mul(a, z) ^ b, 0);
        }
    }
}
