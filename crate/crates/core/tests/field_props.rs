mod common;

use apnforge::field::{clmul_reduce, BinaryField, FieldSpec, Gf, QuadExt};
use proptest::prelude::*;

#[test]
fn mul_matches_schoolbook_exhaustively() {
    for m in 2..=6 {
        let f = Gf::with_degree(m).unwrap();
        let red = f.spec().reduction();
        for a in f.elements() {
            for b in f.elements() {
                let expected = common::schoolbook_mul(a, b, m, red);
                assert_eq!(f.mul(a, b), expected, "m={m} a={a} b={b}");
                assert_eq!(clmul_reduce(a, b, m, red), expected);
            }
        }
    }
}

#[test]
fn small_field_values_from_schoolbook() {
    // x * x^2 = x^3 = x + 1 mod x^3 + x + 1
    assert_eq!(common::schoolbook_mul(0b010, 0b100, 3, 0b1011), 0b011);
    // inverse of x in F_8 by exhaustive search
    let inv = (1..8)
        .find(|&c| common::schoolbook_mul(0b010, c, 3, 0b1011) == 1)
        .unwrap();
    assert_eq!(inv, 0b101);
    let f = Gf::with_degree(3).unwrap();
    assert_eq!(f.inv(0b010).unwrap(), inv);
}

#[test]
fn inverse_for_every_nonzero_element() {
    for m in [2, 5, 8, 11, 16] {
        let f = Gf::with_degree(m).unwrap();
        for a in f.elements().skip(1).step_by(1 + (f.size() >> 10)) {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }
}

#[test]
fn multiplicative_group_is_cyclic() {
    for m in 2..=8 {
        for spec in [FieldSpec::default_for(m).unwrap()] {
            let f = Gf::new(spec);
            let g = f.generator();
            let mut seen = vec![false; f.size()];
            let mut x = 1;
            for _ in 0..f.size() - 1 {
                assert!(!seen[x as usize]);
                seen[x as usize] = true;
                x = common::schoolbook_mul(x, g, m, spec.reduction());
            }
            assert_eq!(x, 1);
        }
    }
}

#[test]
fn non_default_reduction_works() {
    // x^6 + x^3 + 1 is irreducible but not primitive
    let f = Gf::new(FieldSpec::new(6, 0x49).unwrap());
    assert_ne!(f.generator(), 2);
    for a in f.elements() {
        for b in f.elements() {
            assert_eq!(f.mul(a, b), common::schoolbook_mul(a, b, 6, 0x49));
        }
    }
}

fn field_and_triple() -> impl Strategy<Value = (u32, u32, u32, u32)> {
    (2u32..=16).prop_flat_map(|m| {
        let top = 1u32 << m;
        (Just(m), 0..top, 0..top, 0..top)
    })
}

proptest! {
    #[test]
    fn distributive((m, a, b, c) in field_and_triple()) {
        let f = Gf::with_degree(m).unwrap();
        prop_assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
    }

    #[test]
    fn frobenius_is_automorphism((m, a, b, k) in field_and_triple()) {
        let f = Gf::with_degree(m).unwrap();
        let k = k % 20;
        prop_assert_eq!(f.pow_q(f.mul(a, b), k), f.mul(f.pow_q(a, k), f.pow_q(b, k)));
        prop_assert_eq!(f.pow_q(a ^ b, k), f.pow_q(a, k) ^ f.pow_q(b, k));
        prop_assert_eq!(f.pow_q(a, m), a);
    }

    #[test]
    fn trace_properties((m, a, b, _c) in field_and_triple()) {
        let f = Gf::with_degree(m).unwrap();
        prop_assert_eq!(f.trace(f.square(a)), f.trace(a));
        prop_assert_eq!(f.trace(a ^ b), f.trace(a) ^ f.trace(b));
        prop_assert_eq!(f.trace(1), m % 2);
    }

    #[test]
    fn extension_agrees_with_pow((m, a, b, _c) in (2u32..=8).prop_flat_map(|m| {
        let top = 1u32 << (2 * m);
        (Just(m), 0..top, 0..top, Just(0u32))
    })) {
        let ext = QuadExt::new(Gf::with_degree(m).unwrap());
        prop_assert_eq!(ext.mul(a, b), ext.mul(b, a));
        // every element of F_{2^{2m}} satisfies z^{2^{2m}} = z
        prop_assert_eq!(ext.pow_q(a, 2 * m), a);
        // the relative trace lands in the base field
        let t = ext.rel_trace(a, m).unwrap();
        prop_assert_eq!(ext.split(t).1, 0);
    }
}
