//! Characteristic polynomials of Frobenius on the eigenspaces `W_j` and on
//! `W^new`, from character-twisted sums of fiber traces.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::golden;
use crate::modforms::eta4z6_coefficients;
use crate::ring::{gcd, inv_mod, is_prime, order_mod, pow_mod, CycloPoly, CyclotomicInt, FiniteField, Fq};
use crate::surface::cache::FiberCache;
use crate::surface::{count_all_fibers, CountBudget, FiberTraceTable};

/// Sign and additive correction relating twisted sums to traces:
/// `Tr(F_q | W_j) = -epsilon * sum_t chi_j(t) a_t - correction` for `j != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Calibration {
    pub epsilon: i64,
    pub correction: i64,
}

/// Output of [`calibrate`], frozen here.
pub const FROZEN_CALIBRATION: Calibration = Calibration { epsilon: 1, correction: 0 };

/// `chi_4(p)` for odd `p`: `1` if `p = 1 mod 4`, else `-1`.
pub fn chi_minus4(p: u64) -> i64 {
    if p % 4 == 1 {
        1
    } else {
        -1
    }
}

/// An order-`m` character of `F_q^*`: `chi(t) = w_m^k` where
/// `t^((q-1)/m) = zeta^k` for a fixed primitive `m`-th root `zeta`.
///
/// `zeta` is the least integer primitive root when one lies in `F_p`, so the
/// character on `F_{q^2}` restricts compatibly; otherwise every choice is a
/// Frobenius conjugate of every other.
#[derive(Clone, Copy, Debug)]
struct PowerResidue {
    m: u64,
    c_inv: u64,
}

impl PowerResidue {
    fn new(field: &FiniteField, m: u64) -> Result<Self> {
        let q = field.q();
        if (q - 1) % m != 0 {
            return Err(Error::InvalidInput(format!("{m} does not divide {q} - 1")));
        }
        if m == 1 {
            return Ok(PowerResidue { m, c_inv: 0 });
        }
        let p = field.p();
        let step = (q - 1) / m;
        let zeta: Fq = if (p - 1) % m == 0 {
            let z = (2..p)
                .find(|&z| pow_mod(z, m, p) == 1 && (1..m).all(|e| pow_mod(z, e, p) != 1))
                .expect("m | p - 1");
            field.scalar(z)
        } else {
            field.exp(step)
        };
        let c = field.log(zeta) as u64 / step;
        let c_inv = inv_mod(c % m, m).expect("zeta is primitive");
        Ok(PowerResidue { m, c_inv })
    }

    /// Exponent `k` with `chi(t) = w_m^k`.
    fn index(&self, field: &FiniteField, t: Fq) -> u64 {
        if self.m == 1 {
            0
        } else {
            field.log(t) as u64 % self.m * self.c_inv % self.m
        }
    }
}

/// `sum_{t in F_q^*} chi_j(t) a_t` as an element of `Z[w_n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedSum {
    pub n: u64,
    pub j: u64,
    pub q: u64,
    pub value: CyclotomicInt,
}

/// Twisted sum of a trace table by `chi^j`, with `chi` of order `n`.
pub fn twisted_sum(field: &FiniteField, table: &FiberTraceTable, n: u64, j: u64) -> Result<TwistedSum> {
    if !table.matches_field(field) {
        return Err(Error::InvalidInput("trace table belongs to a different field".into()));
    }
    let n32 = u32::try_from(n).map_err(|_| Error::InvalidInput(format!("n = {n}")))?;
    let j = j % n;
    let d = gcd(j, n);
    let m = n / d;
    let chi = PowerResidue::new(field, m)?;
    let mut class = vec![0i128; m as usize];
    for t in field.iter().skip(1) {
        class[chi.index(field, t) as usize] += table.trace(t) as i128;
    }
    let jj = j / d;
    let mut value = CyclotomicInt::zero(n32);
    for (k, &s) in class.iter().enumerate() {
        if s != 0 {
            // w_m^(jj k) = w_n^(j k)
            value = value + CyclotomicInt::omega_pow(n32, (d * jj * k as u64) as i64).scale(s);
        }
    }
    Ok(TwistedSum { n, j, q: field.q(), value })
}

/// Which subspace a [`CharPolyReport`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Subspace {
    /// `Char(W_j, F_p^r)(T^r)`, i.e. `Char(L_{j,p}, F_p)`.
    Lj(u64),
    Wnew,
    /// All of `W = W_1 + ... + W_{n-1}`.
    Full,
}

/// One `<p>`-orbit factor `T^(2r) - A T^r + B`.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitFactor {
    pub j: u64,
    pub orbit: Vec<u64>,
    pub r: u32,
    pub a: CyclotomicInt,
    pub b: CyclotomicInt,
    /// `true` when `B` came from the `F_{p^(2r)}` sum, `false` when forced.
    pub b_computed: bool,
    #[serde(serialize_with = "ser_display")]
    pub poly: CycloPoly,
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct CharPolyReport {
    pub n: u64,
    pub p: u64,
    /// `O_n(p)`.
    pub r: u32,
    pub subspace: Subspace,
    pub factors: Vec<OrbitFactor>,
    /// Integer coefficients, low degree first, when the product is rational.
    pub coefficients: Option<Vec<i128>>,
    pub calibration: Calibration,
    /// Checksums of the trace tables that were used.
    pub provenance: Vec<String>,
}

impl CharPolyReport {
    pub fn integer_coefficients(&self) -> Result<&[i128]> {
        self.coefficients
            .as_deref()
            .ok_or_else(|| Error::Structure(format!("Char polynomial for n = {}, p = {} is not integral", self.n, self.p)))
    }

    /// `T^4 - 3409T^2 + 53^4`-style rendering of the integer polynomial.
    pub fn display_integer(&self) -> Option<String> {
        self.coefficients.as_ref().map(|c| format_int_poly(c))
    }
}

pub fn format_int_poly(c: &[i128]) -> String {
    let cp = CycloPoly::new(1, c.iter().map(|&v| CyclotomicInt::from_int(1, v)).collect());
    cp.to_string()
}

/// Smallest element of each `<p>`-orbit on the residues `js` mod `n`.
pub fn orbit_representatives(n: u64, p: u64, js: impl IntoIterator<Item = u64>) -> Vec<(u64, Vec<u64>)> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for j in js {
        if seen.contains(&j) {
            continue;
        }
        let mut orbit = vec![j];
        let mut x = j * p % n;
        while x != j {
            orbit.push(x);
            x = x * p % n;
        }
        orbit.sort();
        seen.extend(orbit.iter().copied());
        out.push((orbit[0], orbit));
    }
    out.sort();
    out
}

type TableMap = HashMap<(u64, u32), (Arc<FiniteField>, Arc<FiberTraceTable>)>;

/// Point-count backed engine with a per-field memo.
pub struct FrobEngine {
    budget: CountBudget,
    cache: FiberCache,
    calibration: Calibration,
    tables: Mutex<TableMap>,
    counted: AtomicUsize,
}

impl FrobEngine {
    pub fn new(budget: CountBudget, cache: FiberCache) -> Self {
        Self::with_calibration(budget, cache, FROZEN_CALIBRATION)
    }

    pub fn with_calibration(budget: CountBudget, cache: FiberCache, calibration: Calibration) -> Self {
        FrobEngine { budget, cache, calibration, tables: Mutex::new(HashMap::new()), counted: AtomicUsize::new(0) }
    }

    pub fn budget(&self) -> &CountBudget {
        &self.budget
    }

    pub fn calibration(&self) -> Calibration {
        self.calibration
    }

    pub fn cache(&self) -> &FiberCache {
        &self.cache
    }

    /// Number of trace tables this engine had to count (cache misses).
    pub fn tables_counted(&self) -> usize {
        self.counted.load(Ordering::Relaxed)
    }

    /// Whether the full table over `F_{p^r}` is within budget.
    pub fn can_count(&self, p: u64, r: u32) -> bool {
        p.checked_pow(r).is_some_and(|q| self.budget.choose(q).is_ok())
    }

    /// Field and fiber traces over `F_{p^r}`, from memory, disk, or counting.
    pub fn table(&self, p: u64, r: u32) -> Result<(Arc<FiniteField>, Arc<FiberTraceTable>)> {
        if let Some(hit) = self.tables.lock().expect("poisoned").get(&(p, r)) {
            return Ok(hit.clone());
        }
        let q = p.checked_pow(r).ok_or(Error::BudgetExceeded { q: u64::MAX, budget: self.budget.bsgs_q_cap })?;
        self.budget.choose(q)?;
        let field = FiniteField::with_budget(p, r, self.budget.bsgs_q_cap.max(q))?;
        let table = match self.cache.load(&field) {
            Some(t) => t,
            None => {
                self.counted.fetch_add(1, Ordering::Relaxed);
                let t = count_all_fibers(&field, self.budget.choose(q)?, &self.budget)?;
                self.cache.store(&t)?;
                t
            }
        };
        let entry = (Arc::new(field), Arc::new(table));
        self.tables.lock().expect("poisoned").insert((p, r), entry.clone());
        Ok(entry)
    }

    /// `Tr(F_{p^r} | W_j)` after calibration.
    pub fn trace_wj(&self, n: u64, j: u64, p: u64, r: u32) -> Result<(CyclotomicInt, String)> {
        let (field, table) = self.table(p, r)?;
        let s = twisted_sum(&field, &table, n, j)?;
        let c = self.calibration;
        let n32 = n as u32;
        let v = s.value.scale(-(c.epsilon as i128)) - CyclotomicInt::from_int(n32, c.correction as i128);
        Ok((v, table.checksum.clone()))
    }

    /// `Char(W_j, F_p^r)(T^r)` for the orbit of `j`, with `r` the orbit size.
    pub fn charpoly_lj(&self, n: u64, j: u64, p: u64) -> Result<OrbitFactor> {
        check_good(n, p)?;
        if j == 0 || j >= n {
            return Err(Error::InvalidInput(format!("j = {j} outside 1..{n}")));
        }
        let (_, orbit) = orbit_representatives(n, p, [j]).remove(0);
        let r = orbit.len() as u32;
        let n32 = n as u32;
        let (a, _) = self.trace_wj(n, j, p, r)?;
        let pr = (p as i128).pow(r);
        let (b, b_computed) = if self.can_count(p, 2 * r) {
            let (t2, _) = self.trace_wj(n, j, p, 2 * r)?;
            let twice = a.clone() * a.clone() - t2;
            if twice.coords().iter().any(|c| c % 2 != 0) {
                return Err(Error::Structure(format!("A^2 - Tr(F^2) is odd for n = {n}, j = {j}, p = {p}")));
            }
            (CyclotomicInt::new(n32, twice.coords().iter().map(|c| c / 2).collect())?, true)
        } else {
            (CyclotomicInt::from_int(n32, forced_unit(p, r) as i128 * pr * pr), false)
        };
        let mut coeffs = vec![CyclotomicInt::zero(n32); 2 * r as usize + 1];
        coeffs[0] = b.clone();
        coeffs[r as usize] = -a.clone();
        coeffs[2 * r as usize] = CyclotomicInt::one(n32);
        let poly = CycloPoly::new(n32, coeffs);
        Ok(OrbitFactor { j, orbit, r, a, b, b_computed, poly })
    }

    fn product_report(&self, n: u64, p: u64, js: Vec<u64>, subspace: Subspace) -> Result<CharPolyReport> {
        check_good(n, p)?;
        let r = order_mod(p, n)?;
        let mut factors = Vec::new();
        let mut prod = CycloPoly::one(n as u32);
        for (j, _) in orbit_representatives(n, p, js) {
            let f = self.charpoly_lj(n, j, p)?;
            prod = &prod * &f.poly;
            factors.push(f);
        }
        let mut provenance: Vec<String> = Vec::new();
        for f in &factors {
            for rr in [f.r, 2 * f.r] {
                if let Some((_, t)) = self.tables.lock().expect("poisoned").get(&(p, rr)) {
                    if !provenance.contains(&t.checksum) {
                        provenance.push(t.checksum.clone());
                    }
                }
            }
        }
        Ok(CharPolyReport {
            n,
            p,
            r,
            subspace,
            factors,
            coefficients: prod.to_integers(),
            calibration: self.calibration,
            provenance,
        })
    }

    /// `Char(W_j, F_p^r)(T^r)` as a report.
    pub fn charpoly_wj(&self, n: u64, j: u64, p: u64) -> Result<CharPolyReport> {
        self.product_report(n, p, vec![j], Subspace::Lj(j))
    }

    /// Product over `<p>`-orbits of `(Z/n)^*`.
    pub fn charpoly_wnew(&self, n: u64, p: u64) -> Result<CharPolyReport> {
        let js = (1..n).filter(|&j| gcd(j, n) == 1).collect();
        self.product_report(n, p, js, Subspace::Wnew)
    }

    /// Product over `<p>`-orbits of `1..n-1`.
    pub fn charpoly_full(&self, n: u64, p: u64) -> Result<CharPolyReport> {
        self.product_report(n, p, (1..n).collect(), Subspace::Full)
    }
}

/// Unit `u` in a forced `B = u p^(2r)`: `chi_4(p^r)`, the value every
/// in-budget computation produces for this family.
pub fn forced_unit(p: u64, r: u32) -> i64 {
    if r % 2 == 0 {
        1
    } else {
        chi_minus4(p)
    }
}

fn check_good(n: u64, p: u64) -> Result<()> {
    if !is_prime(p) || p <= 3 || n % p == 0 {
        return Err(Error::InvalidInput(format!("p = {p} is not a good prime for n = {n}")));
    }
    if ![2, 3, 4, 6].contains(&n) {
        return Err(Error::InvalidInput(format!("group index n = {n} is not one of 2, 3, 4, 6")));
    }
    Ok(())
}

/// Which square root `beta` involves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Irrationality {
    /// `beta = m i`
    I,
    /// `beta = m sqrt(-3)`
    SqrtMinus3,
}

/// `T^4 + c2 T^2 + p^4 = (T^2 - beta T - p^2)(T^2 + beta T - p^2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitQuartic {
    pub m: i128,
    pub kind: Irrationality,
    #[serde(serialize_with = "ser_display")]
    pub beta: CyclotomicInt,
}

pub fn split_quartic(coeffs: &[i128], p: u64) -> Result<SplitQuartic> {
    let p2 = (p as i128).pow(2);
    let shape_ok = coeffs.len() == 5 && coeffs[1] == 0 && coeffs[3] == 0 && coeffs[4] == 1 && coeffs[0] == p2 * p2;
    if !shape_ok {
        return Err(Error::Structure(format!("not of the form T^4 + c T^2 + p^4: {coeffs:?}")));
    }
    let beta_sq = -coeffs[2] - 2 * p2;
    let isqrt = |v: i128| -> Option<i128> {
        if v < 0 {
            return None;
        }
        let r = (v as f64).sqrt().round() as i128;
        (r - 1..=r + 1).find(|x| *x >= 0 && x * x == v)
    };
    let i = CyclotomicInt::sqrt_minus_one(12)?;
    let s3 = CyclotomicInt::sqrt_minus_three(12)?;
    let (m, kind, unit) = if let Some(m) = isqrt(-beta_sq) {
        (m, Irrationality::I, i)
    } else if -beta_sq % 3 == 0 {
        match isqrt(-beta_sq / 3) {
            Some(m) => (m, Irrationality::SqrtMinus3, s3),
            None => return Err(Error::Structure(format!("beta^2 = {beta_sq} is neither -m^2 nor -3m^2"))),
        }
    } else {
        return Err(Error::Structure(format!("beta^2 = {beta_sq} is neither -m^2 nor -3m^2")));
    };
    let beta = unit.scale(m);
    let pp = CyclotomicInt::from_int(12, p2);
    let f1 = CycloPoly::new(12, vec![-pp.clone(), -beta.clone(), CyclotomicInt::one(12)]);
    let f2 = CycloPoly::new(12, vec![-pp, beta.clone(), CyclotomicInt::one(12)]);
    if (&f1 * &f2).to_integers().as_deref() != Some(coeffs) {
        return Err(Error::Structure("split factors do not recover the quartic".into()));
    }
    Ok(SplitQuartic { m, kind, beta })
}

/// One anchor comparison made during calibration.
#[derive(Clone, Debug, Serialize)]
pub struct AnchorCheck {
    pub label: String,
    pub expected: String,
    pub got: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CalibrationRecord {
    pub chosen: Calibration,
    pub tried: Vec<(Calibration, bool)>,
    pub anchors: Vec<AnchorCheck>,
}

/// Finds the unique `(epsilon, correction)` for which the `n = 2` traces
/// equal the coefficients of `eta(4z)^6` at `p <= 17` and the `n = 6`
/// polynomials match the reference rows at `p = 5, 7, 13`.
pub fn calibrate(budget: CountBudget, cache: FiberCache) -> Result<CalibrationRecord> {
    let eta = eta4z6_coefficients(18)?;
    let mut tried = Vec::new();
    let mut passing = Vec::new();
    let mut chosen_anchors = Vec::new();
    for epsilon in [1i64, -1] {
        for correction in [-1i64, 0, 1] {
            let cal = Calibration { epsilon, correction };
            let engine = FrobEngine::with_calibration(budget, cache.clone(), cal);
            let mut anchors = Vec::new();
            for p in [5u64, 7, 11, 13, 17] {
                let (a, _) = engine.trace_wj(2, 1, p, 1)?;
                let want = eta[p as usize] as i128;
                anchors.push(AnchorCheck {
                    label: format!("n=2 p={p}"),
                    expected: want.to_string(),
                    got: a.to_string(),
                    ok: a.as_integer() == Some(want),
                });
            }
            for p in [5u64, 7, 13] {
                let want = golden::table2_integer_poly(p)?;
                let got = engine.charpoly_wnew(6, p)?;
                anchors.push(AnchorCheck {
                    label: format!("n=6 p={p}"),
                    expected: format_int_poly(&want),
                    got: got.display_integer().unwrap_or_else(|| "non-integral".into()),
                    ok: got.coefficients.as_deref() == Some(&want[..]),
                });
            }
            let ok = anchors.iter().all(|a| a.ok);
            tried.push((cal, ok));
            if ok {
                passing.push(cal);
                chosen_anchors = anchors;
            }
        }
    }
    match passing.as_slice() {
        [one] => Ok(CalibrationRecord { chosen: *one, tried, anchors: chosen_anchors }),
        [] => Err(Error::Calibration(format!("no convention satisfies the anchors; tried {tried:?}"))),
        _ => Err(Error::Calibration(format!("anchors do not pin a unique convention: {passing:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine() -> FrobEngine {
        FrobEngine::new(CountBudget::default(), FiberCache::disabled())
    }

    #[test]
    fn table2_row_13() {
        let e = engine();
        let f = e.charpoly_lj(6, 1, 13).unwrap();
        assert_eq!(f.poly.to_integers().unwrap(), vec![169, 20, 1]);
        assert!(f.b_computed);
    }

    #[test]
    fn n2_matches_eta() {
        let e = engine();
        let eta = eta4z6_coefficients(30).unwrap();
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29] {
            let (a, _) = e.trace_wj(2, 1, p, 1).unwrap();
            assert_eq!(a.as_integer(), Some(eta[p as usize] as i128), "p = {p}");
        }
    }

    #[test]
    fn conjugation_symmetry() {
        let e = engine();
        let (f, t) = e.table(13, 1).unwrap();
        for j in 1..6 {
            let a = twisted_sum(&f, &t, 6, j).unwrap().value;
            let b = twisted_sum(&f, &t, 6, 6 - j).unwrap().value;
            assert_eq!(a.conj(), b);
        }
        let zero = twisted_sum(&f, &t, 6, 0).unwrap().value;
        assert_eq!(zero.as_integer(), Some(t.total() as i128));
    }

    #[test]
    fn split_examples() {
        let s = split_quartic(&[625, 0, -1, 0, 1], 5).unwrap();
        assert_eq!((s.m, s.kind), (7, Irrationality::I));
        let p4 = 23i128.pow(4);
        let s = split_quartic(&[p4, 0, -1046, 0, 1], 23).unwrap();
        assert_eq!((s.m, s.kind), (2, Irrationality::SqrtMinus3));
        let p4 = 17i128.pow(4);
        assert_eq!(split_quartic(&[p4, 0, -514, 0, 1], 17).unwrap().m, 8);
        assert!(split_quartic(&[625, 0, -3, 0, 1], 5).is_err());
    }

    #[test]
    fn orbits() {
        assert_eq!(orbit_representatives(6, 5, [1, 5]), vec![(1, vec![1, 5])]);
        assert_eq!(orbit_representatives(6, 7, [1, 5]), vec![(1, vec![1]), (5, vec![5])]);
        assert_eq!(orbit_representatives(4, 3, 1..4), vec![(1, vec![1, 3]), (2, vec![2])]);
    }
}
