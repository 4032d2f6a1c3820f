//! p-adic Hecke operators, eigenvalue extraction, the canonical modification
//! of eigenvalues, and verification of three-term ASD congruences.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frobchar::{chi_minus4, split_quartic, CharPolyReport, Irrationality};
use crate::modforms::basis_h;
use crate::ring::{balanced, hensel_sqrt, inv_mod, mul_mod, ord_p, pow_mod, reduce_i64, CyclotomicInt, PadicElement, PadicRing};
use crate::series::{CoeffRing, TruncatedSeries, Zmod};

/// `s(p)`: `+1` for `p = 1 mod 12`, else `-1`.
pub fn hecke_sign(p: u64) -> i64 {
    if p % 12 == 1 {
        1
    } else {
        -1
    }
}

/// `T_p = U_p + s p^2 V_p` in weight 3.
pub fn hecke_tp<R: CoeffRing>(f: &TruncatedSeries<R>, p: u64, s: i64) -> Result<TruncatedSeries<R>> {
    let m = f.precision();
    if m < p as usize {
        return Err(Error::PrecisionShortfall { needed: p as usize, have: m });
    }
    let ring = f.ring();
    let newp = m / p as usize;
    let pp = ring.from_i64(s * (p * p) as i64);
    let coeffs = (0..newp)
        .map(|i| {
            let v = f.coeff(i * p as usize);
            if i % p as usize == 0 {
                ring.add(&v, &ring.mul(&pp, &f.coeff(i / p as usize)))
            } else {
                v
            }
        })
        .collect();
    Ok(TruncatedSeries::from_coeffs(ring.clone(), coeffs, newp, f.var_den()))
}

/// `c` with `source|T_p = c * target mod p^k`.
#[derive(Clone, Debug, Serialize)]
pub struct Eigenvalue {
    pub p: u64,
    pub k: u32,
    /// Balanced representative mod `p^k`.
    pub c: i64,
    /// Indices coprime to `p`, in the target's support classes mod 6, at
    /// which the relation was confirmed.
    pub checked: usize,
}

/// Extracts the eigenvalue of `T_p` from `source` onto `target`, both over
/// `Z/p^K` with `K >= k`.
pub fn extract_eigenvalue(source: &TruncatedSeries<Zmod>, target: &TruncatedSeries<Zmod>, p: u64, k: u32) -> Result<Eigenvalue> {
    let ring = *source.ring();
    if ring.p() != p || target.ring() != source.ring() || k == 0 || k > 2 || k > ring.k() {
        return Err(Error::InvalidInput(format!("cannot extract mod {p}^{k} over {}", ring.tag())));
    }
    let modk = p.pow(k);
    let tp = hecke_tp(source, p, hecke_sign(p))?;
    let i0 = target.valuation();
    if i0 >= tp.precision() {
        return Err(Error::PrecisionShortfall { needed: (i0 + 1) * p as usize, have: source.precision() });
    }
    let lead = target.coeff(i0) % modk;
    let lead_inv = inv_mod(lead, modk).ok_or_else(|| Error::NotEigen("target leading coefficient is not a unit".into()))?;
    let c = mul_mod(tp.coeff(i0) % modk, lead_inv, modk);
    let classes = target.support_classes(6);
    let mut checked = 0;
    for m in (1..tp.precision()).filter(|m| m % p as usize != 0 && *m != i0) {
        let got = tp.coeff(m) % modk;
        let want = mul_mod(c, target.coeff(m) % modk, modk);
        if got != want {
            return Err(Error::NotEigen(format!("T_{p} relation breaks at index {m} mod {p}^{k}")));
        }
        if classes.contains(&(m as u64 % 6)) {
            checked += 1;
        }
    }
    if checked < 10 {
        return Err(Error::PrecisionShortfall { needed: source.precision() * 2, have: source.precision() });
    }
    Ok(Eigenvalue { p, k, c: balanced(c, modk), checked })
}

/// The divisor `c_1` applied by [`modify_c`], as a balanced residue mod `p^k`.
pub fn modification_divisor(p: u64, k: u32) -> Result<i64> {
    if p <= 3 || p % 2 == 0 {
        return Err(Error::InvalidInput(format!("modification needs p > 3, got {p}")));
    }
    let modk = p.pow(k);
    let m3 = reduce_i64(-3, p);
    let (root, square) = match p % 12 {
        1 => return Ok(balanced(pow_mod(m3, (p - 1) / 4, p), p)),
        5 => ((p - pow_mod(m3, (p - 1) / 4, p)) % p, -1),
        7 => (pow_mod(m3, (p + 1) / 4, p), -3),
        _ => (pow_mod(m3, (p + 1) / 4, p), 3),
    };
    if root == 0 {
        return Err(Error::NotInvertible { ring: format!("Z/{p}"), what: "c_1".into() });
    }
    let lifted = hensel_sqrt(reduce_i64(square, modk), root, p, modk);
    Ok(balanced(lifted, modk))
}

/// Canonical modification of a balanced eigenvalue `c mod p^k`.
pub fn modify_c(c: i64, p: u64, k: u32) -> Result<i64> {
    let modk = p.pow(k);
    let d = modification_divisor(p, k)?;
    let di = inv_mod(reduce_i64(d, modk), modk).ok_or_else(|| Error::NotInvertible { ring: format!("Z/{p}^{k}"), what: "c_1".into() })?;
    Ok(balanced(mul_mod(reduce_i64(c, modk), di, modk), modk))
}

/// `(source j, target j)` whose `T_p` eigenvalue the modified table records:
/// the form landing on `h_5`.
pub fn table1_pair(p: u64) -> (u64, u64) {
    if p % 6 == 1 {
        (5, 5)
    } else {
        (1, 5)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1Row {
    pub p: u64,
    pub p_mod_12: u64,
    pub source: u64,
    pub target: u64,
    pub c: i64,
    pub divisor: i64,
    pub modified: i64,
}

/// Series precision (in `w`) giving at least ten usable indices after
/// `T_p`: the forms are supported on one class mod 6.
pub fn table1_precision(p: u64) -> usize {
    1500.max(72 * p as usize)
}

/// One row of the modified eigenvalue table, from `h_1, h_5` at series
/// precision `prec` over `Z/p^3`.
pub fn table1_row(p: u64, prec: usize) -> Result<Table1Row> {
    let ring = Zmod::new(p, 3)?;
    let (sj, tj) = table1_pair(p);
    let source = basis_h(&ring, 6, sj, prec)?.series;
    let target = if sj == tj { source.clone() } else { basis_h(&ring, 6, tj, prec)?.series };
    let e = extract_eigenvalue(&source, &target, p, 2)?;
    Ok(Table1Row {
        p,
        p_mod_12: p % 12,
        source: sj,
        target: tj,
        c: e.c,
        divisor: modification_divisor(p, 2)?,
        modified: modify_c(e.c, p, 2)?,
    })
}

/// A relation `a(m p^r) - A a(m) + B a(m / p^r)` on the combination
/// `sum coeff_j h_j^[n]`. Coefficients live in `Z[w_12]`.
#[derive(Clone, Debug, Serialize)]
pub struct AsdRelation {
    pub n: u64,
    pub p: u64,
    pub r: u32,
    pub a: CyclotomicInt,
    pub b: CyclotomicInt,
    pub combo: Vec<ComboTerm>,
    pub label: String,
}

/// `coeff * h_j` inside a combination.
#[derive(Clone, Debug, Serialize)]
pub struct ComboTerm {
    pub j: u64,
    #[serde(serialize_with = "ser_display")]
    pub coeff: CyclotomicInt,
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl AsdRelation {
    pub fn new(n: u64, p: u64, r: u32, a: CyclotomicInt, b: CyclotomicInt, combo: Vec<(u64, CyclotomicInt)>, label: impl Into<String>) -> Result<Self> {
        let rel = AsdRelation {
            n,
            p,
            r,
            a: a.embed(12)?,
            b: b.embed(12)?,
            combo: combo.into_iter().map(|(j, c)| c.embed(12).map(|coeff| ComboTerm { j, coeff })).collect::<Result<_>>()?,
            label: label.into(),
        };
        Ok(rel)
    }

    /// `A` as `m sqrt(d)` for `d` in `{1, -1, -3, 3}`.
    pub fn a_quad(&self) -> Option<(i128, i64)> {
        quad_form(&self.a)
    }

    /// `A` moved by one unit along its own direction.
    pub fn perturbed(&self) -> Result<Self> {
        let unit = match self.a_quad() {
            Some((_, d)) => quad_unit(d)?,
            None => CyclotomicInt::one(12),
        };
        let mut out = self.clone();
        out.a = self.a.clone() + unit;
        out.label = format!("{} (A perturbed)", self.label);
        Ok(out)
    }

    /// `v(m) = 2 (1 + ord_p m)`.
    pub fn required_valuation(&self, m: u64) -> u32 {
        2 * (1 + ord_p(m, self.p))
    }
}

/// `sqrt(d)` in `Z[w_12]`.
pub fn quad_unit(d: i64) -> Result<CyclotomicInt> {
    match d {
        1 => Ok(CyclotomicInt::one(12)),
        -1 => CyclotomicInt::sqrt_minus_one(12),
        -3 => CyclotomicInt::sqrt_minus_three(12),
        3 => Ok(CyclotomicInt::sqrt_three()),
        _ => Err(Error::InvalidInput(format!("no square root of {d} in use"))),
    }
}

/// Recognizes `m sqrt(d)`, `d` in `{1, -1, -3, 3}`, with `m >= 0` unless
/// `d = 1`.
pub fn quad_form(z: &CyclotomicInt) -> Option<(i128, i64)> {
    let z = z.embed(12).ok()?;
    if let Some(v) = z.as_integer() {
        return Some((v, 1));
    }
    for d in [-1i64, -3, 3] {
        let u = quad_unit(d).ok()?;
        // z = m u  <=>  z * u = m d
        if let Some(v) = (z.clone() * u).as_integer() {
            if v % d as i128 == 0 {
                return Some((v / d as i128, d));
            }
        }
    }
    None
}

/// The outcome at one embedding `w_12 -> root`.
#[derive(Clone, Debug, Serialize)]
pub struct PlaceOutcome {
    /// Balanced coordinates of the image of `w_12`.
    pub root: (i64, i64),
    pub passed: bool,
    pub first_failure: Option<u64>,
    /// Least `achieved - required` over the tested indices.
    pub min_slack: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexValuation {
    pub m: u64,
    pub achieved: u32,
    pub required: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub relation: AsdRelation,
    pub ring: String,
    pub max_index: usize,
    /// Indices `m` run over `1..=m_max`.
    pub m_max: u64,
    pub places: Vec<PlaceOutcome>,
    /// The first passing place, if any.
    pub passing_root: Option<(i64, i64)>,
    /// Per-index valuations at the passing place, or the first place.
    pub valuations: Vec<IndexValuation>,
    pub passed: bool,
}

/// Working precision `K = 2 + 2 max ord_p(m) + 1` for indices `m <= max_m`.
pub fn working_precision(p: u64, max_m: u64) -> u32 {
    let mut e = 0;
    let mut q = p;
    while q <= max_m {
        e += 1;
        q *= p;
    }
    3 + 2 * e
}

/// Ring in which every primitive 12th root of unity lives.
fn place_ring(p: u64, k: u32) -> Result<PadicRing> {
    if p % 12 == 1 {
        PadicRing::new(p, k)
    } else {
        PadicRing::unramified(p, k)
    }
}

/// Checks `rel` on the given basis forms `h_j` over `Z/p^K` for all
/// `m p^r <= max_index`.
pub fn verify_asd(forms: &BTreeMap<u64, TruncatedSeries<Zmod>>, rel: &AsdRelation, max_index: usize) -> Result<VerificationReport> {
    let p = rel.p;
    let step = p.pow(rel.r) as usize;
    let m_max = (max_index / step) as u64;
    let k = working_precision(p, m_max);
    for ComboTerm { j, .. } in &rel.combo {
        let f = forms.get(j).ok_or_else(|| Error::InvalidInput(format!("form h_{j} not supplied")))?;
        if f.ring().p() != p || f.ring().k() < k {
            return Err(Error::RingMismatch { left: f.ring().tag(), right: format!("Zp:{p},{k}") });
        }
        if f.precision() <= max_index {
            return Err(Error::PrecisionShortfall { needed: max_index + 1, have: f.precision() });
        }
    }
    let ring = place_ring(p, k)?;
    let roots = ring.primitive_roots_of_unity(12);
    if roots.len() != 4 {
        return Err(Error::Construction(format!("found {} primitive 12th roots over {ring}", roots.len())));
    }
    let outcomes: Vec<(PlaceOutcome, Vec<IndexValuation>)> = roots
        .par_iter()
        .map(|&root| run_place(forms, rel, ring, root, max_index, m_max))
        .collect();
    let passing = outcomes.iter().position(|(o, _)| o.passed);
    let valuations = outcomes[passing.unwrap_or(0)].1.clone();
    Ok(VerificationReport {
        relation: rel.clone(),
        ring: ring.tag(),
        max_index,
        m_max,
        passing_root: passing.map(|i| outcomes[i].0.root),
        places: outcomes.into_iter().map(|(o, _)| o).collect(),
        valuations,
        passed: passing.is_some(),
    })
}

fn run_place(
    forms: &BTreeMap<u64, TruncatedSeries<Zmod>>,
    rel: &AsdRelation,
    ring: PadicRing,
    root: PadicElement,
    max_index: usize,
    m_max: u64,
) -> (PlaceOutcome, Vec<IndexValuation>) {
    let step = rel.p.pow(rel.r) as usize;
    let mut a = vec![ring.zero(); max_index + 1];
    for ComboTerm { j, coeff } in &rel.combo {
        let cv = coeff.eval_at(root);
        let f = &forms[j];
        for (i, slot) in a.iter_mut().enumerate() {
            let v = f.coeff(i);
            if v != 0 {
                *slot = *slot + cv * ring.element(v);
            }
        }
    }
    let av = rel.a.eval_at(root);
    let bv = rel.b.eval_at(root);
    let mut vals = Vec::with_capacity(m_max as usize);
    let mut first_failure = None;
    let mut min_slack = i64::MAX;
    for m in 1..=m_max {
        let mi = m as usize;
        let mut e = a[mi * step] - av * a[mi];
        if mi % step == 0 {
            e = e + bv * a[mi / step];
        }
        let achieved = e.valuation().min(ring.k());
        let required = rel.required_valuation(m);
        let slack = achieved as i64 - required as i64;
        min_slack = min_slack.min(slack);
        if slack < 0 && first_failure.is_none() {
            first_failure = Some(m);
        }
        vals.push(IndexValuation { m, achieved, required });
    }
    let outcome = PlaceOutcome { root: root.balanced(), passed: first_failure.is_none(), first_failure, min_slack };
    (outcome, vals)
}

/// `A` for the new part at `p`: the `T` coefficient of the `j = 1` factor
/// when `r = 1`, else `beta` from the split quartic.
pub fn asd_a(frob: &CharPolyReport) -> Result<(CyclotomicInt, CyclotomicInt)> {
    if frob.n != 6 {
        return Err(Error::InvalidInput(format!("expected an n = 6 report, got n = {}", frob.n)));
    }
    let p = frob.p;
    let p2 = (p as i128).pow(2);
    if frob.r == 1 {
        let f = frob.factors.iter().find(|f| f.j == 1).ok_or_else(|| Error::Structure("no j = 1 factor".into()))?;
        return Ok((f.a.embed(12)?, f.b.embed(12)?));
    }
    let split = split_quartic(frob.integer_coefficients()?, p)?;
    Ok((split.beta, CyclotomicInt::from_int(12, -p2)))
}

/// Which reading of the residue-class combinations to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Reading {
    /// `h_1 +- h_5` at `p = 5 mod 12`, `h_1`, `h_5` separately at `p = 7 mod 12`.
    Corrected,
    /// The combinations as listed per residue class, without the swap.
    Literal,
}

/// Relations for `<h_1, h_5>` at `p` per residue class mod 12.
pub fn three_term_data(p: u64, frob: &CharPolyReport, reading: Reading) -> Result<Vec<AsdRelation>> {
    if frob.p != p || p % 2 == 0 || p % 3 == 0 {
        return Err(Error::InvalidInput(format!("bad prime {p} for this report")));
    }
    let (a, b) = asd_a(frob)?;
    let one = CyclotomicInt::one(12);
    let i = CyclotomicInt::sqrt_minus_one(12)?;
    let single = |label: &str| -> Result<Vec<AsdRelation>> {
        Ok(vec![
            AsdRelation::new(6, p, 1, a.clone(), b.clone(), vec![(1, one.clone())], format!("h1 {label}"))?,
            AsdRelation::new(6, p, 1, a.conj(), b.clone(), vec![(5, one.clone())], format!("h5 {label}"))?,
        ])
    };
    let pair = |c: &CyclotomicInt, name: &str, r: u32| -> Result<Vec<AsdRelation>> {
        Ok(vec![
            AsdRelation::new(6, p, r, a.clone(), b.clone(), vec![(1, one.clone()), (5, c.clone())], format!("h1+{name}h5"))?,
            AsdRelation::new(6, p, r, -a.clone(), b.clone(), vec![(1, one.clone()), (5, -c.clone())], format!("h1-{name}h5"))?,
        ])
    };
    match (p % 12, reading) {
        (1, _) => single("rational"),
        (5, Reading::Corrected) => pair(&one, "", 1),
        (5, Reading::Literal) => single("literal"),
        (7, Reading::Corrected) => single("sqrt(-3)"),
        (7, Reading::Literal) => pair(&one, "", 1),
        (_, _) => pair(&i, "i*", 1),
    }
}

/// `h_3^[6]` against `eta(4z)^6`, whose `q`-coefficients are `eta`:
/// `A = a_p` and `B = chi_4(p) p^2`, or `B = p^2` under the literal reading.
pub fn eta_anchor(p: u64, eta: &[i64], reading: Reading) -> Result<AsdRelation> {
    let a = *eta.get(p as usize).ok_or(Error::PrecisionShortfall { needed: p as usize + 1, have: eta.len() })?;
    let p2 = (p as i128).pow(2);
    let b = match reading {
        Reading::Corrected => chi_minus4(p) as i128 * p2,
        Reading::Literal => p2,
    };
    let label = match reading {
        Reading::Corrected => "h3 eta(4z)^6",
        Reading::Literal => "h3 eta(4z)^6 literal",
    };
    AsdRelation::new(6, p, 1, CyclotomicInt::from_int(12, a as i128), CyclotomicInt::from_int(12, b), vec![(3, CyclotomicInt::one(12))], label)
}

/// `h_1^[6]`, `h_3^[6]`, `h_5^[6]` over `Z/p^K` sized for `max_index`.
pub fn forms_for(n: u64, js: &[u64], p: u64, max_index: usize, r: u32) -> Result<BTreeMap<u64, TruncatedSeries<Zmod>>> {
    let k = working_precision(p, (max_index / p.pow(r) as usize) as u64);
    let ring = Zmod::new(p, k)?;
    js.par_iter()
        .map(|&j| Ok((j, basis_h(&ring, n, j, max_index + 1)?.series)))
        .collect()
}

/// `h_j^[n]` against `Char(W_j, F_p^r)(T^r)` from point counts.
pub fn verify_general_n(engine: &crate::frobchar::FrobEngine, n: u64, j: u64, p: u64, max_index: usize) -> Result<VerificationReport> {
    if p <= n || p % 2 == 0 || p % 3 == 0 {
        return Err(Error::InvalidInput(format!("need p > n and p coprime to 6, got n = {n}, p = {p}")));
    }
    let f = engine.charpoly_lj(n, j, p)?;
    let rel = AsdRelation::new(n, p, f.r, f.a.clone(), f.b.clone(), vec![(j, CyclotomicInt::one(12))], format!("h_{j}^[{n}]"))?;
    let forms = forms_for(n, &[j], p, max_index, f.r)?;
    verify_asd(&forms, &rel, max_index)
}

/// `|A(p)|` as the non-negative `m` in `A = m sqrt(d)`.
pub fn a_magnitude(a: &CyclotomicInt) -> Result<i128> {
    quad_form(a).map(|(m, _)| m.abs()).ok_or_else(|| Error::Structure(format!("A = {a} is not m*sqrt(d)")))
}

/// The square root appearing in `A(p)` for the given residue class.
pub fn expected_irrationality(p: u64) -> Option<Irrationality> {
    match p % 12 {
        5 => Some(Irrationality::I),
        7 | 11 => Some(Irrationality::SqrtMinus3),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hecke_definition() {
        let z = Zmod::new(5, 3).unwrap();
        let coeffs: Vec<u64> = (0..60).collect();
        let f = TruncatedSeries::from_coeffs(z, coeffs, 60, 1);
        let t = hecke_tp(&f, 5, 1).unwrap();
        assert_eq!(t.precision(), 12);
        assert_eq!(t.coeff(1), 5);
        assert_eq!(t.coeff(5), 25 + 25);
        assert!(hecke_tp(&f.truncate(3), 5, 1).is_err());
    }

    #[test]
    fn modification_divisors() {
        // (-3)^3 = -27 = -1 mod 13
        assert_eq!(modification_divisor(13, 2).unwrap(), -1);
        let c7 = modification_divisor(7, 2).unwrap();
        assert_eq!((c7 * c7 + 3).rem_euclid(49), 0);
        let c11 = modification_divisor(11, 2).unwrap();
        assert_eq!((c11 * c11 - 3).rem_euclid(121), 0);
        let c5 = modification_divisor(5, 2).unwrap();
        assert_eq!((c5 * c5 + 1).rem_euclid(25), 0);
    }

    #[test]
    fn quad_forms() {
        let i = CyclotomicInt::sqrt_minus_one(12).unwrap();
        assert_eq!(quad_form(&i.scale(7)), Some((7, -1)));
        let s = CyclotomicInt::sqrt_minus_three(6).unwrap();
        assert_eq!(quad_form(&s.scale(-5)), Some((-5, -3)));
        assert_eq!(quad_form(&CyclotomicInt::from_int(4, 20)), Some((20, 1)));
        assert_eq!(quad_form(&CyclotomicInt::one(6).scale(2).add_omega()), None);
    }

    trait AddOmega {
        fn add_omega(self) -> Self;
    }
    impl AddOmega for CyclotomicInt {
        fn add_omega(self) -> Self {
            let m = self.order();
            self + CyclotomicInt::omega_pow(m, 1)
        }
    }

    #[test]
    fn table1_small_rows() {
        for (p, want) in [(5u64, 7i64), (7, 5), (11, -5), (13, 20)] {
            assert_eq!(table1_row(p, table1_precision(p)).unwrap().modified, want, "p = {p}");
        }
    }
}
