use asdlab_core::ring::cyclotomic::SUPPORTED_ORDERS;
use asdlab_core::ring::rational::{format_rational, parse_rational, rational};
use asdlab_core::ring::{is_prime, sqrt_mod, CyclotomicInt, FiniteField, SqrtMod};
use proptest::prelude::*;

fn cyclo(m: u32) -> impl Strategy<Value = CyclotomicInt> {
    prop::collection::vec(-50i128..50, 4).prop_map(move |c| CyclotomicInt::new(m, c).unwrap())
}

fn odd_prime() -> impl Strategy<Value = u64> {
    (3u64..200).prop_filter("prime", |&p| is_prime(p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn cyclotomic_ring_laws((a, b, c) in prop::sample::select(SUPPORTED_ORDERS.to_vec()).prop_flat_map(|m| (cyclo(m), cyclo(m), cyclo(m)))) {
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!((a.clone() * b.clone()).conj(), a.conj() * b.conj());
        if let (Some(x), Some(y)) = (a.norm_sq(), b.norm_sq()) {
            prop_assert_eq!((a.clone() * b.clone()).norm_sq(), Some(x * y));
        }
        if a.order() != 12 {
            prop_assert!(a.norm_sq().is_some());
        }
        let abs2 = a.abs() * a.abs();
        prop_assert!((abs2 - (a.clone() * a.conj()).to_complex().0).abs() <= 1e-6 * abs2.max(1.0));
    }

    #[test]
    fn sqrt_mod_squares_back(p in odd_prime(), k in 1u32..6, d in -10_000i64..10_000) {
        prop_assume!(d.rem_euclid(p as i64) != 0);
        match sqrt_mod(d, p, k).unwrap() {
            SqrtMod::Root(s) => {
                let ring = s.ring();
                prop_assert_eq!(s * s, ring.from_i64(d));
            }
            SqrtMod::Inert => {
                let e = (p - 1) / 2;
                let mut acc = 1u64;
                for _ in 0..e {
                    acc = acc * d.rem_euclid(p as i64) as u64 % p;
                }
                prop_assert_eq!(acc, p - 1);
            }
        }
    }

    #[test]
    fn frobenius_has_order_r(p in prop::sample::select(vec![3u64, 5, 7, 11, 13]), r in 1u32..4, idx in any::<u64>()) {
        let f = FiniteField::new(p, r).unwrap();
        let x = f.exp(idx % (f.q() - 1));
        let mut y = x;
        for _ in 0..r {
            y = f.frobenius(y);
        }
        prop_assert_eq!(y, x);
        prop_assert_eq!(f.pow(x, f.q()), x);
        prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
    }

    #[test]
    fn rational_strings_round_trip(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
        let x = rational(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }
}
