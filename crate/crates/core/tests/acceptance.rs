//! Acceptance suite. Prints one PASS/FAIL line per criterion, with notes
//! indented below it, and exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use asdlab_core::frobchar::FrobEngine;
use asdlab_core::modforms::{basis_h, classical_j_times_q, constants::MODEL_PARAMETER_SIGN, eta4z6, eta4z6_coefficients, hauptmodul, j_oracle};
use asdlab_core::pipeline::{cmd_compare, cmd_galois_table, cmd_table1, cmd_table2, verify_prime, Expect, RunConfig, VerifyRow};
use asdlab_core::ring::{gcd, is_prime, order_mod, FiniteField, Fq};
use asdlab_core::series::{CoeffRing, Rationals, TruncatedSeries, Zmod};
use asdlab_core::surface::bsgs::trace_bsgs;
use asdlab_core::surface::cache::FiberCache;
use asdlab_core::surface::{fiber_at, trace_naive, CountBudget};
use asdlab_core::Result;

struct Outcome {
    passed: bool,
    summary: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, summary: impl Into<String>) -> Self {
        Outcome { passed, summary: summary.into(), notes: Vec::new() }
    }
}

struct Ctx {
    engine: FrobEngine,
    /// Suite rows for every prime 5..=53, shared by criteria 3 and 4.
    suite: Vec<VerifyRow>,
}

fn primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&p| p > 3 && is_prime(p)).collect()
}

fn table2(ctx: &Ctx) -> Result<Outcome> {
    let rep = cmd_table2(&ctx.engine)?;
    let good = rep.rows.iter().filter(|r| r.passed).count();
    let mut out = Outcome::new(rep.passed, format!("{good}/{} new-part Frobenius polynomials match", rep.rows.len()));
    for r in rep.rows.iter().filter(|r| !r.passed) {
        out.notes.push(format!("p = {}: expected {}, got {} {}", r.p, r.expected, r.computed, r.error.clone().unwrap_or_default()));
    }
    Ok(out)
}

fn table1() -> Result<Outcome> {
    let rep = cmd_table1(&RunConfig { prec: 1500, ..RunConfig::default() })?;
    let good = rep.rows.iter().filter(|r| r.passed).count();
    let mut out = Outcome::new(rep.passed, format!("{good}/{} modified Hecke eigenvalues match (p = 5..71, precision >= 1500, Z/p^3)", rep.rows.len()));
    for r in rep.rows.iter().filter(|r| !r.passed) {
        out.notes.push(format!("p = {}: expected {}, got {} {}", r.p, r.expected, r.computed, r.error.clone().unwrap_or_default()));
    }
    Ok(out)
}

fn congruences(ctx: &Ctx) -> Result<Outcome> {
    let rows: Vec<&VerifyRow> = ctx.suite.iter().filter(|r| !r.label.starts_with("h3")).collect();
    let combos: Vec<_> = rows.iter().filter(|r| r.expect == Expect::Pass).collect();
    let perturbed: Vec<_> = rows.iter().filter(|r| r.expect == Expect::Fail).collect();
    let errors: Vec<_> = rows.iter().filter(|r| r.error.is_some()).collect();
    let passed = errors.is_empty() && !combos.is_empty() && combos.iter().all(|r| r.ok) && perturbed.iter().all(|r| r.ok);
    let mut out = Outcome::new(
        passed,
        format!(
            "{}/{} residue-class combinations pass, {}/{} perturbed A(p)+1 relations fail (5 <= p <= 53, indices <= 1200)",
            combos.iter().filter(|r| r.ok).count(),
            combos.len(),
            perturbed.iter().filter(|r| r.ok).count(),
            perturbed.len()
        ),
    );
    for r in rows.iter().filter(|r| !r.ok) {
        out.notes.push(format!("p = {} {}: passed = {} {}", r.p, r.label, r.passed, r.error.clone().unwrap_or_default()));
    }
    let literal: Vec<_> = rows.iter().filter(|r| r.expect == Expect::Info).collect();
    let lit_fail: Vec<String> = literal.iter().filter(|r| !r.passed).map(|r| format!("{}@{}", r.label.replace(" literal", ""), r.p)).collect();
    out.notes.push(format!(
        "unswapped combinations at p = 5, 7 mod 12 (informational): {}/{} fail, e.g. {}",
        lit_fail.len(),
        literal.len(),
        lit_fail.iter().take(4).cloned().collect::<Vec<_>>().join(", ")
    ));
    Ok(out)
}

fn eta_anchor(ctx: &Ctx) -> Result<Outcome> {
    let eta = eta4z6_coefficients(201)?;
    let cm_bad: Vec<u64> = primes(3, 200).into_iter().filter(|&p| p % 4 == 3 && eta[p as usize] != 0).collect();
    let rows: Vec<&VerifyRow> = ctx.suite.iter().filter(|r| r.label.starts_with("h3")).collect();
    let anchor: Vec<_> = rows.iter().filter(|r| r.expect == Expect::Pass).collect();
    let passed = cm_bad.is_empty() && anchor.len() == primes(5, 53).len() && anchor.iter().all(|r| r.ok);
    let mut out = Outcome::new(
        passed,
        format!(
            "h3 with A = a_p(eta(4z)^6), B = chi_-4(p) p^2: {}/{} primes pass; a_p = 0 for all p = 3 mod 4 up to 200: {}",
            anchor.iter().filter(|r| r.ok).count(),
            anchor.len(),
            cm_bad.is_empty()
        ),
    );
    if !cm_bad.is_empty() {
        out.notes.push(format!("nonzero a_p at {cm_bad:?}"));
    }
    let lit: Vec<u64> = rows.iter().filter(|r| r.expect == Expect::Info && !r.passed).map(|r| r.p).collect();
    out.notes.push(format!("B = +p^2 at p = 3 mod 4 (informational): fails at p = {lit:?}"));
    Ok(out)
}

fn structure(ctx: &Ctx) -> Result<Outcome> {
    let mut checked = 0;
    let mut problems = Vec::new();
    let mut signed = Vec::new();
    let mut forced = 0;
    for n in [2u64, 3, 4, 6] {
        let phi = (1..n).filter(|&j| gcd(j, n) == 1).count() as u32;
        for p in primes(5, 37) {
            let rep = ctx.engine.charpoly_wnew(n, p)?;
            checked += 1;
            forced += rep.factors.iter().filter(|f| !f.b_computed).count();
            let r = order_mod(p, n)? as usize;
            let Some(c) = rep.coefficients.clone() else {
                problems.push(format!("n = {n}, p = {p}: coefficients not rational"));
                continue;
            };
            let deg = c.len() - 1;
            if c.iter().enumerate().any(|(k, v)| *v != 0 && k % r != 0) {
                problems.push(format!("n = {n}, p = {p}: not in Z[T^{r}]"));
            }
            if p % n != 1 && c[deg - 1] != 0 {
                problems.push(format!("n = {n}, p = {p}: trace term {}", c[deg - 1]));
            }
            let target = (p as i128).pow(2 * phi);
            if c[0].abs() != target {
                problems.push(format!("n = {n}, p = {p}: constant term {}", c[0]));
            } else if c[0] != target {
                signed.push(format!("n={n},p={p}"));
            }
            let bound = 4 * (p as i128).pow(2 * r as u32);
            for f in &rep.factors {
                if f.a.norm_sq().map_or(f.a.abs().powi(2) > bound as f64 + 0.5, |v| v > bound) {
                    problems.push(format!("n = {n}, p = {p}, j = {}: |A| = {:.1} > 2p^r", f.j, f.a.abs()));
                }
            }
        }
    }
    let mut out = Outcome::new(
        problems.is_empty(),
        format!("{checked} polynomials (n in 2,3,4,6; p <= 37): rational, in Z[T^r], trace term vanishes off p = 1 mod n, |constant| = p^(2 phi(n)), |A_j| <= 2p^r"),
    );
    out.notes.extend(problems);
    out.notes.push(format!("constant term is -p^(2 phi(n)) rather than +p^(2 phi(n)) at: {}", signed.join(" ")));
    out.notes.push(format!("{forced} orbit factors used the forced B (counts over F_p^(2r) beyond budget)"));
    Ok(out)
}

fn newform(ctx: &Ctx) -> Result<Outcome> {
    let rep = cmd_compare(&ctx.engine, 199, 101)?;
    let stored_ok = rep.stored.iter().filter(|c| c.matches).count();
    let sweep_ok = rep.sweep.iter().filter(|r| r.ok()).count();
    let mut out = Outcome::new(
        rep.passed,
        format!(
            "stored coefficients: {stored_ok}/{} match |A(p)|; sweep p <= 199 (p = 1 mod 6), p <= 101 (p = 5 mod 6): {sweep_ok}/{} consistent",
            rep.stored.len() + rep.stored_errors.len(),
            rep.sweep.len()
        ),
    );
    out.notes.extend(rep.stored_errors.iter().cloned());
    for r in rep.sweep.iter().filter(|r| !r.ok()) {
        out.notes.push(format!("{r:?}"));
    }
    Ok(out)
}

fn quartics() -> Result<Outcome> {
    let rep = cmd_galois_table()?;
    let mut out = Outcome::new(rep.passed, "quartic discriminants, order-4 Frobenius at each v, cubic factorization claims");
    for r in &rep.rows {
        out.notes.push(format!("{}: disc {} = {} ({}), order {:?} at {}", r.equation, r.discriminant, r.stated, r.disc_ok, r.factorization.frobenius_order, r.v));
    }
    for c in &rep.cubic {
        out.notes.push(format!("{} mod {}: pattern {:?} ({})", c.poly, c.v, c.factorization.pattern, c.ok));
    }
    Ok(out)
}

fn random_series<R: CoeffRing>(ring: &R, rng: &mut ChaCha8Rng, prec: usize) -> TruncatedSeries<R> {
    let mut c = vec![1i64];
    c.extend((1..prec).map(|_| rng.random_range(-9..=9)));
    TruncatedSeries::from_i64s(ring.clone(), &c, prec, 1)
}

fn oracles() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut notes = Vec::new();
    let mut passed = true;

    let fields = [(11, 2), (13, 2), (101, 1), (5, 4), (1009, 1), (29, 2), (7, 4), (4001, 1), (97, 2), (9973, 1)];
    let mut agree = 0;
    for (p, r) in fields {
        let field = FiniteField::new(p, r)?;
        let mut done = 0;
        while done < 100 {
            let t = Fq(rng.random_range(1..field.q()) as u32);
            let curve = fiber_at(&field, t)?;
            if curve.singular {
                continue;
            }
            done += 1;
            match trace_bsgs(&field, curve.a, curve.b) {
                Ok(v) if v == trace_naive(&field, curve.a, curve.b) => agree += 1,
                other => {
                    passed = false;
                    notes.push(format!("F_{p}^{r}, t = {t:?}: naive {} vs bsgs {other:?}", trace_naive(&field, curve.a, curve.b)));
                }
            }
        }
    }
    notes.push(format!("naive = bsgs on {agree}/{} random fibers over {} fields (121 <= q <= 9973)", 100 * fields.len(), fields.len()));

    let z = Zmod::new(13, 4)?;
    let mut roots = 0;
    for k in 0..100 {
        let e = 2 + (k % 5) as u64;
        let ok = if k % 2 == 0 {
            let f = random_series(&Rationals, &mut rng, 24);
            f.pow(e)?.nth_root(e)? == f
        } else {
            let f = random_series(&z, &mut rng, 60);
            f.pow(e)?.nth_root(e)? == f
        };
        roots += ok as usize;
    }
    passed &= roots == 100;
    notes.push(format!("nth_root(f^e) = f on {roots}/100 random unit series"));

    let mut pipes = 0;
    let mut total = 0;
    for p in [7u64, 13] {
        let zp = Zmod::new(p, 3)?;
        for j in 1..6 {
            total += 1;
            let exact = basis_h(&Rationals, 6, j, 400)?.series.reduce(&zp)?;
            pipes += (exact == basis_h(&zp, 6, j, 400)?.series) as usize;
        }
        total += 1;
        pipes += (eta4z6(&Rationals, 400)?.reduce(&zp)? == eta4z6(&zp, 400)?) as usize;
    }
    passed &= pipes == total;
    notes.push(format!("exact vs Z/p^3 series agree after reduction: {pipes}/{total} (p = 7, 13; precision 400)"));

    Ok(Outcome { passed, summary: "point counts, nth roots, and exact vs modular series agree".into(), notes })
}

fn j_expansion() -> Result<Outcome> {
    let t = hauptmodul(&Rationals, 160)?.scale(&Rationals.from_i64(MODEL_PARAMETER_SIGN));
    let res = j_oracle(&t, 160)?;
    let flipped = j_oracle(&t.neg(), 160)?;
    let terms = res.precision() / 5;
    let passed = res.is_zero() && terms >= 30 && !flipped.is_zero() && classical_j_times_q(3)?.to_i64s() == Some(vec![1, 744, 196884]);
    let mut out = Outcome::new(passed, format!("model j(T) equals the classical j-expansion through {terms} terms"));
    out.notes.push(format!("opposite sign of T disagrees at x^{}", flipped.valuation()));
    Ok(out)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let engine = FrobEngine::new(CountBudget::default(), FiberCache::disabled());
    let eta = eta4z6_coefficients(60).expect("eta coefficients");
    let suite = primes(5, 53).into_iter().flat_map(|p| verify_prime(&engine, p, 1200, &eta)).collect();
    println!("shared congruence suite computed in {:.1?}", start.elapsed());
    let ctx = Ctx { engine, suite };

    type Criterion<'a> = Box<dyn Fn() -> Result<Outcome> + 'a>;
    let criteria: Vec<(&str, Criterion)> = vec![
        ("new-part Frobenius polynomials", Box::new(|| table2(&ctx))),
        ("modified Hecke eigenvalues", Box::new(table1)),
        ("congruence suite on <h1, h5>", Box::new(|| congruences(&ctx))),
        ("eta(4z)^6 anchor", Box::new(|| eta_anchor(&ctx))),
        ("structural properties", Box::new(|| structure(&ctx))),
        ("newform comparison", Box::new(|| newform(&ctx))),
        ("Gaussian quartic table", Box::new(quartics)),
        ("oracle equivalences", Box::new(oracles)),
        ("j-expansion oracle", Box::new(j_expansion)),
    ];
    let mut all = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = run().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        all &= out.passed;
        let tag = if out.passed { "PASS" } else { "FAIL" };
        println!("criterion {}: {tag} {name}: {} [{:.1?}]", k + 1, out.summary, t.elapsed());
        for n in &out.notes {
            println!("    {n}");
        }
    }
    println!("acceptance: {} in {:.1?}", if all { "PASS" } else { "FAIL" }, start.elapsed());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
