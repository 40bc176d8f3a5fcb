mod common;

use apnforge::families::{self, FamilyId, FamilyParams};
use apnforge::field::{BinaryField, Gf, QuadExt};
use apnforge::vbf::{self, TruthTable};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn is_apn_agrees_with_uniformity_on_random_quadratics() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let tt = common::random_quadratic(8, &mut rng);
        assert!(vbf::is_quadratic(&tt));
        assert_eq!(vbf::is_apn(&tt), vbf::differential_uniformity(&tt).delta == 2);
    }
}

#[test]
fn is_apn_agrees_with_uniformity_on_random_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let values = (0..64).map(|_| rand::Rng::gen_range(&mut rng, 0..64)).collect();
        let tt = TruthTable::new(6, values).unwrap();
        let s = vbf::differential_uniformity(&tt);
        assert_eq!(vbf::is_apn(&tt), s.delta == 2);
        assert!(s.delta % 2 == 0 && s.delta >= 2);
        assert!(s.worst_pairs.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn uniformity_is_affine_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f6 = Gf::with_degree(6).unwrap();
    let samples = [
        vbf::univariate_evaluate(&Gf::with_degree(8).unwrap(), &[(5, 1)]),
        families::f1(&f6, 1, 6).unwrap().evaluate(&f6),
        common::random_quadratic(8, &mut rng),
    ];
    for tt in &samples {
        let delta = vbf::differential_uniformity(tt).delta;
        for _ in 0..5 {
            let ea = common::random_ea_transform(tt, &mut rng);
            assert_eq!(vbf::differential_uniformity(&ea).delta, delta);
        }
    }
}

#[test]
fn constructed_instances_have_linear_derivatives() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for m in 3..=6 {
        let f = Gf::with_degree(m).unwrap();
        let alpha = apnforge::poly::find_good_alphas(&f, 1).unwrap()[0];
        for tt in [
            families::f1(&f, 1, alpha).unwrap().evaluate(&f),
            families::f2(&f, alpha).unwrap().evaluate(&f),
        ] {
            for _ in 0..8 {
                let a = rand::Rng::gen_range(&mut rng, 1..tt.len() as u32);
                assert!(vbf::derivative_is_linear(&tt, a));
            }
        }
    }
}

#[test]
fn bivariate_matches_univariate_view() {
    // F1 at m = 4 read through the tower identification F_{2^8} = F_16 × F_16
    let f = Gf::with_degree(4).unwrap();
    let ext = QuadExt::new(f.clone());
    let pair = families::f1(&f, 1, 1).unwrap();
    let tt = pair.evaluate(&f);
    let via_embed = TruthTable::from_fn(8, |z| {
        let (x, y) = ext.split(z);
        let eval = |terms: &[vbf::Term]| {
            terms.iter().fold(0, |acc, t| {
                acc ^ f.mul(t.c, f.mul(f.pow(x, t.i), f.pow(y, t.j)))
            })
        };
        ext.embed(eval(&pair.f), eval(&pair.g))
    })
    .unwrap();
    assert_eq!(tt, via_embed);

    // Gold x^3 evaluated in the tower is APN like in polynomial basis
    let gold_tower = vbf::univariate_evaluate(&ext, &[(3, 1)]);
    assert!(vbf::is_apn(&gold_tower));
}

#[test]
fn f1_zero_row() {
    let params = FamilyParams::new(FamilyId::F1, 4).with_k(1).with_alpha(1);
    let inst = families::build(&params).unwrap();
    // x = 0: f = α y^{q+1}, g = α y^{q²+1}; at y = 1 both are α
    assert_eq!(inst.table.get(1 << 4), (1 << 4) | 1);
}

#[test]
fn preimage_profile_of_f1() {
    let f = Gf::with_degree(6).unwrap();
    let alpha = apnforge::poly::find_good_alphas(&f, 1).unwrap()[0];
    let tt = families::f1(&f, 1, alpha).unwrap().evaluate(&f);
    let profile = vbf::preimage_profile(&tt);
    assert_eq!(profile.get(&1), Some(&1));
    assert_eq!(profile.get(&3), Some(&((4096 - 1) / 3)));
    assert_eq!(profile.len(), 2);
}
