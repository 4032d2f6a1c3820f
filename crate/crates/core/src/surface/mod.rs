//! The elliptic surface `Y^2 = X^3 + A(T) X + B(T)` with
//! `A = -c4(T) / 48`, `B = c6(T) / 864`, fiber by fiber over finite fields.

pub mod bsgs;
pub mod cache;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ring::ffield::LOG_ZERO;
use crate::ring::{FiniteField, Fq};

pub use bsgs::trace_bsgs;

/// `c4(T)`, low degree first.
pub const C4: [i64; 5] = [1, 12, 14, -12, 1];
/// `c6(T) = 1 + 18T + 75T^2 + 75T^4 - 18T^5 + T^6`.
pub const C6: [i64; 7] = [1, 18, 75, 0, 75, -18, 1];
pub const A_DENOMINATOR: i64 = 48;
pub const B_DENOMINATOR: i64 = 864;

/// `c4^3 - c6^2 = 1728 T^5 (T^2 - 11T - 1)`; singular fibers off the cusp
/// sit over the roots of this quadratic.
pub const DISCRIMINANT_FACTOR: [i64; 3] = [-1, -11, 1];

/// Short Weierstrass fiber over `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiberCurve {
    pub t: Fq,
    pub a: Fq,
    pub b: Fq,
    pub singular: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Naive,
    Bsgs,
}

/// Size limits for the two counting methods.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountBudget {
    /// Naive counting of a whole table is allowed while `q^2` stays below this.
    pub naive_q2_cap: u64,
    /// Baby-step giant-step is allowed while `q` stays below this.
    pub bsgs_q_cap: u64,
}

impl Default for CountBudget {
    fn default() -> Self {
        CountBudget { naive_q2_cap: 1_000_000_000, bsgs_q_cap: 1_000_000 }
    }
}

impl CountBudget {
    /// Cheapest admissible method for a full table over `F_q`.
    pub fn choose(&self, q: u64) -> Result<CountMethod> {
        if q.saturating_mul(q) <= self.naive_q2_cap {
            Ok(CountMethod::Naive)
        } else if q <= self.bsgs_q_cap {
            Ok(CountMethod::Bsgs)
        } else {
            Err(Error::BudgetExceeded { q, budget: self.bsgs_q_cap })
        }
    }

    pub fn allows(&self, q: u64, method: CountMethod) -> bool {
        match method {
            CountMethod::Naive => q.saturating_mul(q) <= self.naive_q2_cap,
            CountMethod::Bsgs => q <= self.bsgs_q_cap,
        }
    }
}

fn eval_int_poly(field: &FiniteField, coeffs: &[i64], t: Fq) -> Fq {
    coeffs.iter().rev().fold(field.zero(), |acc, &c| field.add(field.mul(acc, t), field.from_int(c)))
}

/// The fiber over `t`.
pub fn fiber_at(field: &FiniteField, t: Fq) -> Result<FiberCurve> {
    if field.p() <= 3 {
        return Err(Error::InvalidInput(format!("characteristic {} is not allowed", field.p())));
    }
    if t == field.zero() {
        return Err(Error::CuspFiber);
    }
    let inv48 = field.inv(field.from_int(A_DENOMINATOR)).expect("p > 3");
    let inv864 = field.inv(field.from_int(B_DENOMINATOR)).expect("p > 3");
    let a = field.neg(field.mul(eval_int_poly(field, &C4, t), inv48));
    let b = field.mul(eval_int_poly(field, &C6, t), inv864);
    Ok(FiberCurve { t, a, b, singular: is_singular(field, a, b) })
}

/// `4A^3 + 27B^2 = 0`.
pub fn is_singular(field: &FiniteField, a: Fq, b: Fq) -> bool {
    let a3 = field.pow(a, 3);
    let d = field.add(field.mul(field.from_int(4), a3), field.mul(field.from_int(27), field.mul(b, b)));
    d == field.zero()
}

/// `-sum_x chi_2(x^3 + A x + B)`, i.e. `q + 1 - #E(F_q)`; on a singular
/// fiber this is the same character sum.
pub fn trace_naive(field: &FiniteField, a: Fq, b: Fq) -> i64 {
    let n = field.q() - 1;
    let la = field.log(a);
    let lb = field.log(b);
    let mut s: i64 = -(field.quadratic_character(b) as i64);
    for lx in 0..n {
        let l3 = ((3 * lx) % n) as u32;
        let lax = if la == LOG_ZERO { LOG_ZERO } else { ((la as u64 + lx) % n) as u32 };
        let v = field.log_add(field.log_add(l3, lax), lb);
        if v != LOG_ZERO {
            s += if v % 2 == 0 { -1 } else { 1 };
        }
    }
    s
}

/// Trace of Frobenius on one fiber by the requested method. Singular fibers
/// and unresolved baby-step giant-step runs go through the naive sum.
pub fn trace_a(field: &FiniteField, curve: &FiberCurve, method: CountMethod) -> i64 {
    match method {
        CountMethod::Naive => trace_naive(field, curve.a, curve.b),
        CountMethod::Bsgs if curve.singular => trace_naive(field, curve.a, curve.b),
        CountMethod::Bsgs => match trace_bsgs(field, curve.a, curve.b) {
            Ok(a) => a,
            Err(e) => {
                log::debug!("falling back to naive count over F_{}: {e}", field.q());
                trace_naive(field, curve.a, curve.b)
            }
        },
    }
}

/// Trace over `F_q` of a nonsingular curve with `A, B` in the subfield
/// `F_{p^d}`: the subfield character sum, lifted by `s_e = a s_(e-1) - p^d s_(e-2)`.
pub fn trace_from_subfield(field: &FiniteField, a: Fq, b: Fq, d: u32) -> i64 {
    let n = field.q() - 1;
    let qd = field.p().pow(d);
    let step = n / (qd - 1);
    let chi_sub = |l: u32| -> i64 {
        if l == LOG_ZERO {
            0
        } else if (l as u64 / step) % 2 == 0 {
            1
        } else {
            -1
        }
    };
    let la = field.log(a);
    let lb = field.log(b);
    let mut s = -chi_sub(lb);
    for k in 0..qd - 1 {
        let lx = k * step;
        let l3 = ((3 * lx) % n) as u32;
        let lax = if la == LOG_ZERO { LOG_ZERO } else { ((la as u64 + lx) % n) as u32 };
        s -= chi_sub(field.log_add(field.log_add(l3, lax), lb));
    }
    let (mut prev, mut cur) = (2i128, s as i128);
    for _ in 1..field.r() / d {
        let next = s as i128 * cur - qd as i128 * prev;
        prev = cur;
        cur = next;
    }
    cur as i64
}

/// `a_t` for every `t` in `F_q^*`, indexed by the element index of `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberTraceTable {
    pub p: u64,
    pub r: u32,
    pub q: u64,
    pub modulus: Vec<u64>,
    pub generator: u32,
    pub method: CountMethod,
    /// `traces[i]` is `a_t` for the element with index `i`; entry 0 is unused.
    pub traces: Vec<i64>,
    pub checksum: String,
}

pub fn traces_checksum(traces: &[i64]) -> String {
    let mut h = Sha256::new();
    for v in traces {
        h.update(v.to_le_bytes());
    }
    hex::encode(h.finalize())
}

impl FiberTraceTable {
    pub fn trace(&self, t: Fq) -> i64 {
        self.traces[t.0 as usize]
    }

    /// `sum_{t in F_q^*} a_t`.
    pub fn total(&self) -> i64 {
        self.traces.iter().skip(1).sum()
    }

    pub fn checksum_ok(&self) -> bool {
        traces_checksum(&self.traces) == self.checksum
    }

    /// Whether the table was made over the same field presentation.
    pub fn matches_field(&self, field: &FiniteField) -> bool {
        self.p == field.p() && self.r == field.r() && self.modulus == field.modulus() && self.generator == field.generator().0
    }
}

/// Counts every fiber over `F_q^*`, once per Frobenius orbit.
pub fn count_all_fibers(field: &FiniteField, method: CountMethod, budget: &CountBudget) -> Result<FiberTraceTable> {
    let q = field.q();
    if !budget.allows(q, method) {
        return Err(Error::BudgetExceeded {
            q,
            budget: match method {
                CountMethod::Naive => budget.naive_q2_cap,
                CountMethod::Bsgs => budget.bsgs_q_cap,
            },
        });
    }
    if field.p() <= 3 {
        return Err(Error::InvalidInput(format!("characteristic {} is not allowed", field.p())));
    }
    let n = q - 1;
    let p = field.p();
    // Orbit representatives in the log domain: l is a representative when it
    // is the least element of {l p^i mod n}; the orbit size d says t lies in
    // F_{p^d}.
    let reps: Vec<(u64, u32)> = (0..n)
        .filter_map(|l| {
            let mut x = l;
            for i in 1..=field.r() {
                x = (x as u128 * p as u128 % n as u128) as u64;
                if x == l {
                    return Some((l, i));
                }
                if x < l {
                    return None;
                }
            }
            unreachable!("x^(p^r) = x")
        })
        .collect();
    let values: Vec<(u64, i64)> = reps
        .par_iter()
        .map(|&(l, d)| {
            let t = field.exp(l);
            let curve = fiber_at(field, t).expect("t != 0 and p > 3");
            let a = if d < field.r() && !curve.singular {
                trace_from_subfield(field, curve.a, curve.b, d)
            } else {
                trace_a(field, &curve, method)
            };
            (l, a)
        })
        .collect();
    let mut traces = vec![0i64; q as usize];
    for (l, a) in values {
        let mut x = l;
        for _ in 0..field.r() {
            traces[field.exp(x).0 as usize] = a;
            x = (x as u128 * p as u128 % n as u128) as u64;
        }
    }
    let checksum = traces_checksum(&traces);
    Ok(FiberTraceTable {
        p,
        r: field.r(),
        q,
        modulus: field.modulus().to_vec(),
        generator: field.generator().0,
        method,
        traces,
        checksum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
        let mut c = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        c
    }

    #[test]
    fn discriminant_identity() {
        let c4: Vec<i128> = C4.iter().map(|&v| v as i128).collect();
        let c6: Vec<i128> = C6.iter().map(|&v| v as i128).collect();
        let lhs: Vec<i128> = {
            let a = poly_mul(&poly_mul(&c4, &c4), &c4);
            let b = poly_mul(&c6, &c6);
            a.iter().zip(&b).map(|(x, y)| x - y).collect()
        };
        let mut rhs = vec![0i128; 5];
        rhs.extend(DISCRIMINANT_FACTOR.iter().map(|&v| 1728 * v as i128));
        rhs.resize(lhs.len(), 0);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn legendre_curve_over_f5() {
        let f = FiniteField::new(5, 1).unwrap();
        assert_eq!(trace_naive(&f, f.from_int(-1), f.zero()), -2);
    }

    #[test]
    fn singular_fibers_over_f7_follow_the_quadratic() {
        let f = FiniteField::new(7, 1).unwrap();
        for t in 1..7 {
            let c = fiber_at(&f, f.from_int(t)).unwrap();
            let v = DISCRIMINANT_FACTOR.iter().rev().fold(0i64, |acc, &k| (acc * t + k).rem_euclid(7));
            assert_eq!(c.singular, v == 0);
        }
        let f13 = FiniteField::new(13, 1).unwrap();
        let sing: Vec<i64> = (1..13).filter(|&t| fiber_at(&f13, f13.from_int(t)).unwrap().singular).collect();
        let roots: Vec<i64> = (1i64..13).filter(|&t| (t * t - 11 * t - 1).rem_euclid(13) == 0).collect();
        assert_eq!(sing, roots);
    }

    #[test]
    fn cusp_and_characteristic_errors() {
        let f = FiniteField::new(7, 1).unwrap();
        assert!(matches!(fiber_at(&f, f.zero()), Err(Error::CuspFiber)));
        let f3 = FiniteField::new(3, 1).unwrap();
        assert!(fiber_at(&f3, f3.one()).is_err());
    }

    #[test]
    fn hasse_and_singular_range() {
        let f = FiniteField::new(13, 2).unwrap();
        let table = count_all_fibers(&f, CountMethod::Naive, &CountBudget::default()).unwrap();
        for t in f.iter().skip(1) {
            let c = fiber_at(&f, t).unwrap();
            let a = table.trace(t);
            if c.singular {
                assert!(a.abs() <= 1);
            } else {
                assert!((a * a) as u64 <= 4 * f.q());
            }
            assert_eq!(a, table.trace(f.frobenius(t)));
        }
        assert!(table.checksum_ok());
    }

    #[test]
    fn base_change_identity() {
        let f5 = FiniteField::new(5, 1).unwrap();
        let f25 = FiniteField::new(5, 2).unwrap();
        let t5 = count_all_fibers(&f5, CountMethod::Naive, &CountBudget::default()).unwrap();
        let t25 = count_all_fibers(&f25, CountMethod::Naive, &CountBudget::default()).unwrap();
        for t in 1..5u64 {
            let a = t5.trace(f5.scalar(t));
            let c = fiber_at(&f5, f5.scalar(t)).unwrap();
            if !c.singular {
                assert_eq!(t25.trace(f25.scalar(t)), a * a - 10);
            }
        }
    }

    #[test]
    fn subfield_shortcut_matches_direct_counts() {
        for (p, r) in [(7u64, 2u32), (5, 4), (11, 2)] {
            let f = FiniteField::new(p, r).unwrap();
            let table = count_all_fibers(&f, CountMethod::Naive, &CountBudget::default()).unwrap();
            for t in f.iter().skip(1) {
                let c = fiber_at(&f, t).unwrap();
                assert_eq!(table.trace(t), trace_naive(&f, c.a, c.b), "p = {p}, r = {r}");
            }
        }
    }
}
