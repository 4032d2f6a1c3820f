use asdlab_core::modforms::{basis_h, e2_series, eta4z6, hauptmodul};
use asdlab_core::ring::is_prime;
use asdlab_core::series::{Rationals, TruncatedSeries, Zmod};
use proptest::prelude::*;
use std::collections::BTreeSet;

const PREC: usize = 120;

fn group_and_index() -> impl Strategy<Value = (u64, u64)> {
    prop::sample::select(vec![2u64, 3, 4, 6]).prop_flat_map(|n| (Just(n), 1..n))
}

fn modulus_prime() -> impl Strategy<Value = u64> {
    (7u64..80).prop_filter("prime", |&p| is_prime(p))
}

/// `E1^(n-j) E2^j = t^(n-j) E2^n` in `x`, rewritten in `w = x^(1/n)`.
fn power_target(r: &Zmod, n: u64, j: u64, prec_w: usize) -> TruncatedSeries<Zmod> {
    let px = prec_w / n as usize + 2;
    let t = hauptmodul(r, px).unwrap();
    let e2 = e2_series(r, px);
    t.pow(n - j).unwrap().mul(&e2.pow(n).unwrap()).unwrap().substitute_power(n as usize)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn nth_power_recovers_eisenstein_product((n, j) in group_and_index(), p in modulus_prime()) {
        let r = Zmod::new(p, 3).unwrap();
        let h = basis_h(&r, n, j, PREC).unwrap().series;
        let lhs = h.pow(n).unwrap();
        let rhs = power_target(&r, n, j, PREC);
        let top = lhs.precision().min(rhs.precision());
        prop_assert!(top >= PREC);
        prop_assert_eq!(lhs.truncate(top).dense(), rhs.truncate(top).dense());
    }

    #[test]
    fn basis_lives_in_one_class((n, j) in group_and_index()) {
        let h = basis_h(&Rationals, n, j, PREC).unwrap().series;
        prop_assert_eq!(h.support_classes(n), BTreeSet::from([n - j]));
        prop_assert_eq!(h.valuation() as u64, n - j);
    }

    #[test]
    fn exact_and_modular_paths_agree((n, j) in group_and_index(), p in modulus_prime()) {
        let exact = basis_h(&Rationals, n, j, 80).unwrap().series;
        prop_assume!(exact.denominators_divide_power_of(n));
        let r = Zmod::new(p, 3).unwrap();
        let modular = basis_h(&r, n, j, 80).unwrap().series;
        prop_assert_eq!(exact.reduce(&r).unwrap().dense(), modular.dense());
    }
}

#[test]
fn eta_form_vanishes_off_one_mod_four() {
    let c = eta4z6(&Rationals, 400).unwrap().to_i64s().unwrap();
    for (m, v) in c.iter().enumerate() {
        if m % 4 != 1 {
            assert_eq!(*v, 0, "coefficient {m}");
        }
    }
    for p in asdlab_core::ring::primes_between(3, 400) {
        if p % 4 == 3 {
            assert_eq!(c[p as usize], 0, "p = {p}");
        }
    }
}
