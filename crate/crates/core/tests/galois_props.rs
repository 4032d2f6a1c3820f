use asdlab_core::galois::{discriminant, factor_type, monic_quartic, GaussianInt, ResidueField};
use asdlab_core::ring::{is_prime, FiniteField, Fq};
use proptest::prelude::*;

type Poly = Vec<Fq>;

fn trim(f: &FiniteField, mut a: Poly) -> Poly {
    while a.last().is_some_and(|&c| c == f.zero()) {
        a.pop();
    }
    a
}

fn rem(f: &FiniteField, a: &[Fq], b: &[Fq]) -> Poly {
    let mut a = trim(f, a.to_vec());
    let lead = f.inv(*b.last().unwrap()).unwrap();
    while a.len() >= b.len() {
        let c = f.mul(*a.last().unwrap(), lead);
        let shift = a.len() - b.len();
        for (k, &bk) in b.iter().enumerate() {
            a[shift + k] = f.sub(a[shift + k], f.mul(c, bk));
        }
        a = trim(f, a);
    }
    a
}

fn mulmod(f: &FiniteField, a: &[Fq], b: &[Fq], m: &[Fq]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    rem(f, &out, m)
}

fn gcd_degree(f: &FiniteField, a: &[Fq], b: &[Fq]) -> usize {
    let (mut a, mut b) = (trim(f, a.to_vec()), trim(f, b.to_vec()));
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    a.len() - 1
}

/// `Res(a, b)` by the Euclidean recurrence.
fn resultant(f: &FiniteField, a: &[Fq], b: &[Fq]) -> Fq {
    let (m, n) = (a.len() - 1, b.len() - 1);
    if n == 0 {
        return f.pow(b[0], m as u64);
    }
    let r = rem(f, a, b);
    if r.is_empty() {
        return f.zero();
    }
    let k = r.len() - 1;
    let sign = if (m * n) % 2 == 1 { f.neg(f.one()) } else { f.one() };
    f.mul(sign, f.mul(f.pow(*b.last().unwrap(), (m - k) as u64), resultant(f, b, &r)))
}

/// Roots of `g` in `F_{q^k}` for `k = 1..=4`, as `deg gcd(g, x^(q^k) - x)`.
fn root_counts(f: &FiniteField, g: &[Fq], q: u64) -> [usize; 4] {
    let mut frob = vec![f.zero(), f.one()];
    let mut out = [0; 4];
    for slot in &mut out {
        let (mut acc, mut base, mut e) = (vec![f.one()], frob.clone(), q);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(f, &acc, &base, g);
            }
            base = mulmod(f, &base, &base, g);
            e >>= 1;
        }
        frob = acc;
        let mut diff = frob.clone();
        diff.resize(diff.len().max(2), f.zero());
        diff[1] = f.sub(diff[1], f.one());
        *slot = if trim(f, diff.clone()).is_empty() { g.len() - 1 } else { gcd_degree(f, g, &diff) };
    }
    out
}

fn gaussian_prime() -> impl Strategy<Value = GaussianInt> {
    (-12i64..12, 0i64..12).prop_filter_map("odd Gaussian prime", |(a, b)| {
        let n = (a * a + b * b) as u64;
        if b != 0 && is_prime(n) && n % 4 == 1 {
            Some(GaussianInt::new(a, b))
        } else if b == 0 && a > 0 && is_prime(a as u64) && a % 4 == 3 && a < 12 {
            Some(GaussianInt::new(a, 0))
        } else {
            None
        }
    })
}

fn gaussian() -> impl Strategy<Value = GaussianInt> {
    (-9i64..10, -9i64..10).prop_map(|(a, b)| GaussianInt::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn discriminant_reduces_like_the_polynomial(c3 in gaussian(), c2 in gaussian(), c1 in gaussian(), c0 in gaussian(), v in gaussian_prime()) {
        let poly = monic_quartic(c3, c2, c1, c0);
        let rf = ResidueField::new(&v).unwrap();
        let f = &rf.big;
        let red: Poly = poly.iter().map(|c| rf.reduce(c)).collect();
        let deriv: Poly = (1..red.len()).map(|k| f.mul(f.from_int(k as i64), red[k])).collect();
        // degree 4: (-1)^(4*3/2) = 1
        let want = resultant(f, &red, &deriv);
        prop_assert_eq!(rf.reduce(&discriminant(&poly).unwrap()), want);
    }

    #[test]
    fn factor_pattern_matches_gcd_degrees(c3 in gaussian(), c2 in gaussian(), c1 in gaussian(), c0 in gaussian(), v in gaussian_prime()) {
        let poly = monic_quartic(c3, c2, c1, c0);
        let ft = factor_type(&poly, &v).unwrap();
        prop_assert_eq!(ft.pattern.iter().sum::<u32>(), 4);
        let rf = ResidueField::new(&v).unwrap();
        let red: Poly = poly.iter().map(|c| rf.reduce(c)).collect();
        let counts = root_counts(&rf.big, &red, rf.size());
        prop_assert_eq!(ft.squarefree, rf.reduce(&discriminant(&poly).unwrap()) != rf.big.zero());
        if ft.squarefree {
            let linear = counts[0];
            let quadratic = (counts[1] - counts[0]) / 2;
            let cubic = (counts[2] - counts[0]) / 3;
            let quartic = usize::from(counts[3] == 4 && counts[1] == 0 && counts[0] == 0);
            let mut expected = vec![4; quartic];
            expected.extend(vec![3; cubic]);
            expected.extend(vec![2; quadratic]);
            expected.extend(vec![1; linear]);
            prop_assert_eq!(ft.pattern.iter().map(|&d| d as usize).collect::<Vec<_>>(), expected);
            let order = (1..=4).find(|&k| counts[k - 1] == 4).unwrap() as u32;
            prop_assert_eq!(ft.frobenius_order, Some(order));
            prop_assert_eq!(order == 4, ft.pattern == vec![4]);
        }
    }
}
