use eiscong::{CyclotomicNumber, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;

const ORDERS: [u64; 9] = [1, 3, 4, 5, 6, 8, 12, 15, 21];

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn element(order: u64) -> impl Strategy<Value = CyclotomicNumber> {
    prop::collection::vec((0..order, rational()), 0..6)
        .prop_map(move |terms| CyclotomicNumber::from_exponents(order, terms))
}

fn triple() -> impl Strategy<Value = (CyclotomicNumber, CyclotomicNumber, CyclotomicNumber)> {
    prop::sample::select(ORDERS.to_vec()).prop_flat_map(|m| (element(m), element(m), element(m)))
}

proptest! {
    #[test]
    fn ring_axioms((a, b, c) in triple()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn promotion_is_an_embedding((a, b, _) in triple(), factor in 1u64..=4) {
        let target = a.order() * factor;
        let pa = a.promote(target).unwrap();
        let pb = b.promote(target).unwrap();
        prop_assert_eq!(a.mul(&b).promote(target).unwrap(), pa.mul(&pb));
        prop_assert_eq!(a.add(&b).promote(target).unwrap(), pa.add(&pb));
        prop_assert_eq!(pa.demote(a.order()), Some(a.clone()));
    }

    #[test]
    fn inverse_is_exact((a, _, _) in triple()) {
        prop_assume!(!a.is_zero());
        let inv = a.inv().unwrap();
        prop_assert_eq!(a.mul(&inv), CyclotomicNumber::one(a.order()));
    }

    #[test]
    fn embedding_is_a_homomorphism((a, b, _) in triple()) {
        let prod = a.mul(&b).embed();
        let split = a.embed() * b.embed();
        prop_assert!((prod - split).norm() < 1e-9 * (1.0 + split.norm()));
        let sum = a.add(&b).embed();
        prop_assert!((sum - (a.embed() + b.embed())).norm() < 1e-9 * (1.0 + sum.norm()));
    }

    #[test]
    fn galois_action_is_multiplicative((a, b, _) in triple(), s in 1u64..60) {
        let m = a.order().max(2);
        prop_assume!(num_integer::gcd(s, m) == 1);
        prop_assert_eq!(a.mul(&b).galois(s), a.galois(s).mul(&b.galois(s)));
        let conj = a.conj().embed();
        prop_assert!((conj - a.embed().conj()).norm() < 1e-9 * (1.0 + conj.norm()));
    }
}

#[test]
fn roots_of_unity() {
    let z = CyclotomicNumber::root_of_unity(12, 1);
    assert_eq!(z.pow(12), CyclotomicNumber::one(12));
    assert_ne!(z.pow(6), CyclotomicNumber::one(12));
    assert_eq!(z.pow(6), CyclotomicNumber::from_integer(12, -1));
    // 1 + zeta_3 + zeta_3^2 = 0
    let w = CyclotomicNumber::root_of_unity(3, 1);
    assert!(CyclotomicNumber::one(3).add(&w).add(&w.pow(2)).is_zero());
    // The inverse of 1 + zeta_3 is -zeta_3.
    let inv = CyclotomicNumber::one(3).add(&w).inv().unwrap();
    assert_eq!(inv, w.neg());
}

#[test]
fn mixed_orders_multiply_in_the_compositum() {
    let i = CyclotomicNumber::root_of_unity(4, 1);
    let w = CyclotomicNumber::root_of_unity(3, 1);
    let p = i.mul(&w);
    assert_eq!(p.order(), 12);
    assert_eq!(p, CyclotomicNumber::root_of_unity(12, 7));
}

#[test]
fn low_precision_embedding_is_rejected() {
    let x = CyclotomicNumber::root_of_unity(5, 2);
    assert!(x.embed_with_precision(53).is_ok());
    assert!(x.embed_with_precision(10).is_err());
}
