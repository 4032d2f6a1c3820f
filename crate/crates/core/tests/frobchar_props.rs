use std::sync::OnceLock;

use asdlab_core::frobchar::FrobEngine;
use asdlab_core::ring::{gcd, order_mod, primes_between};
use asdlab_core::surface::cache::FiberCache;
use asdlab_core::surface::CountBudget;

/// One engine for the whole binary, so each trace table is counted once.
fn engine() -> &'static FrobEngine {
    static ENGINE: OnceLock<FrobEngine> = OnceLock::new();
    ENGINE.get_or_init(|| FrobEngine::new(CountBudget::default(), FiberCache::disabled()))
}

fn mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[test]
fn conjugate_indices_give_conjugate_factors() {
    let e = engine();
    for n in [3u64, 4, 6] {
        for p in primes_between(5, 31) {
            for j in (1..n).filter(|&j| gcd(j, n) == 1) {
                let f = e.charpoly_lj(n, j, p).unwrap();
                let g = e.charpoly_lj(n, n - j, p).unwrap();
                assert_eq!(f.poly.conj(), g.poly, "n = {n}, p = {p}, j = {j}");
            }
        }
    }
}

#[test]
fn full_space_for_six_splits_into_old_and_new() {
    let e = engine();
    for p in primes_between(5, 19) {
        let full = e.charpoly_full(6, p).unwrap().coefficients.unwrap();
        let two = e.charpoly_full(2, p).unwrap().coefficients.unwrap();
        let three = e.charpoly_full(3, p).unwrap().coefficients.unwrap();
        let new = e.charpoly_wnew(6, p).unwrap().coefficients.unwrap();
        assert_eq!(full, mul(&mul(&two, &three), &new), "p = {p}");
    }
}

#[test]
fn new_parts_are_rational_in_t_to_the_r_up_to_53() {
    let e = engine();
    for n in [2u64, 3, 4, 6] {
        let phi = (1..n).filter(|&j| gcd(j, n) == 1).count() as u32;
        for p in primes_between(5, 53) {
            let r = order_mod(p, n).unwrap() as usize;
            let c = e.charpoly_wnew(n, p).unwrap().coefficients.unwrap();
            let deg = c.len() - 1;
            assert_eq!(deg, 2 * phi as usize, "n = {n}, p = {p}");
            assert!(c.iter().enumerate().all(|(k, v)| *v == 0 || k % r == 0), "n = {n}, p = {p}: {c:?}");
            if p % n != 1 {
                assert_eq!(c[deg - 1], 0, "n = {n}, p = {p}");
            }
            assert_eq!(c[0].abs(), (p as i128).pow(2 * phi), "n = {n}, p = {p}");
        }
    }
}
