//! Acceptance suite. Each criterion prints one `[PASS]` or `[FAIL]` line;
//! run with `cargo test --test acceptance -- --nocapture` to see them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quintic_descent::arith::{gcd, PowerShape};
use quintic_descent::certify::n5_gcd_classify;
use quintic_descent::certify::{certify_all, BranchId, Expectation, SuiteBounds};
use quintic_descent::descent::{
    enumerate_primitive, oracle_enumerate, parametrize, quartic_x, quartic_y, UVPair,
};
use quintic_descent::newform::{has_newforms, n7_level_set};
use quintic_descent::search::{theorem_search_with, Hit, SearchConfig, DEFAULT_N_VALUES};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// x² + y² = z⁵ for the quintic parametrization over a box of (u, v).
fn ac1_parametrization_identity() -> Outcome {
    let mut checked = 0;
    for u in -50i64..=50 {
        for v in -50i64..=50 {
            let (u, v) = (big(u), big(v));
            let x = &u * quartic_x(&u, &v);
            let y = &v * quartic_y(&u, &v);
            let z = &u * &u + &v * &v;
            ensure(&x * &x + &y * &y == z.pow(5), || format!("identity fails at u={u}, v={v}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} pairs with |u|, |v| <= 50"))
}

/// The worked example (u, v) = (1, 2) and the N = 1 solution it produces.
fn ac2_worked_example() -> Outcome {
    let sol = parametrize(&UVPair::new(1, 2).map_err(|e| e.to_string())?);
    ensure((sol.x.clone(), sol.y.clone(), sol.z.clone()) == (big(41), big(-38), big(5)), || {
        format!("parametrize(1, 2) = {sol}")
    })?;
    let report = theorem_search_with(&SearchConfig::new(5, &[1])).map_err(|e| e.to_string())?;
    let expected = Hit {
        n: 1,
        x: big(41),
        z: big(5),
        shape: PowerShape::new(1, 0, 1, Some(big(19))).map_err(|e| e.to_string())?,
    };
    ensure(report.hits == vec![expected], || format!("hits for Z <= 5, N = 1: {:?}", report.hits))?;
    ensure(report.counterexamples.is_empty(), || "N = 1 hit flagged as counterexample".into())?;
    Ok("(41, -38, 5) and 41² + 2²·19² = 5⁵ found once".into())
}

/// The parametrized enumeration equals brute force on primitive solutions.
fn ac3_completeness() -> Outcome {
    let z_max = big(30);
    let param = enumerate_primitive(&z_max).map_err(|e| e.to_string())?;
    let oracle = oracle_enumerate(&z_max).map_err(|e| e.to_string())?;
    ensure(param == oracle, || format!("parametrized {param:?} vs oracle {oracle:?}"))?;
    ensure(!param.is_empty(), || "no solutions enumerated".into())?;
    Ok(format!("{} canonical solutions with z <= 30 on both sides", param.len()))
}

/// No counterexample for N > 1 and results independent of worker count.
fn ac4_search() -> Outcome {
    let single = SearchConfig::new(200, &DEFAULT_N_VALUES);
    let multi = SearchConfig { workers: 4, chunk: 7, ..single.clone() };
    let a = theorem_search_with(&single).map_err(|e| e.to_string())?;
    let b = theorem_search_with(&multi).map_err(|e| e.to_string())?;
    ensure(a.counterexamples.is_empty(), || format!("counterexamples: {:?}", a.counterexamples))?;
    ensure(a.hits == b.hits && a.pairs_scanned == b.pairs_scanned, || {
        "1-worker and 4-worker searches disagree".into()
    })?;
    ensure(a.verify_all(), || "a reported hit does not verify".into())?;
    Ok(format!("Z <= 200, N in {DEFAULT_N_VALUES:?}: 0 counterexamples, {} pairs", a.pairs_scanned))
}

/// Every certificate meets its expectation and the whole suite is reproducible.
fn ac5_certificates() -> Outcome {
    let suite = certify_all(SuiteBounds::default()).map_err(|e| e.to_string())?;
    ensure(suite.failures().is_empty(), || format!("failed branches: {:?}", suite.failures()))?;
    for cert in &suite.certificates {
        match cert.branch_id.expectation() {
            Expectation::Unsat => ensure(!cert.satisfiable && cert.witnesses.is_empty(), || {
                format!("{} should be unsatisfiable", cert.branch_id)
            })?,
            Expectation::Constraint(c) => {
                ensure(cert.derived_constraint.as_deref() == Some(c), || {
                    format!("{} derived {:?}, expected {c}", cert.branch_id, cert.derived_constraint)
                })?
            }
        }
    }
    let ids: Vec<BranchId> = suite.certificates.iter().map(|c| c.branch_id).collect();
    ensure(ids == BranchId::ALL, || format!("branches out of order: {ids:?}"))?;
    let again = certify_all(SuiteBounds::default()).map_err(|e| e.to_string())?;
    ensure(suite.to_lines() == again.to_lines(), || "two runs differ".into())?;
    ensure(suite.to_lines() == include_str!("golden/certify_all.jsonl"), || {
        "output differs from tests/golden/certify_all.jsonl".into()
    })?;
    Ok(format!("{} certificates byte-identical to the golden file", suite.certificates.len()))
}

/// The N = 7 levels lie in {1, 2, 5, 10}, none of which carry newforms.
fn ac6_levels() -> Outcome {
    let levels = n7_level_set(25, 25).map_err(|e| e.to_string())?;
    let allowed: Vec<BigInt> = [1, 2, 5, 10].into_iter().map(big).collect();
    ensure(levels.iter().all(|l| allowed.contains(l)), || format!("levels: {levels:?}"))?;
    for l in &allowed {
        ensure(!has_newforms(l).map_err(|e| e.to_string())?, || format!("level {l} has newforms"))?;
    }
    Ok(format!("levels {:?} for 1 <= α, k <= 25, all without newforms",
        levels.iter().map(ToString::to_string).collect::<Vec<_>>()))
}

/// The two gcd facts behind the descent step.
fn ac7_gcd_contracts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut sampled = 0;
    while sampled < 10_000 {
        let x = big(2 * rng.gen_range(-5_000i64..5_000) + 1);
        let z = big(2 * rng.gen_range(-5_000i64..5_000) + 1);
        if !gcd(&x, &z).unwrap().is_one() || (&z - &x * &x).is_zero() {
            continue;
        }
        let g = n5_gcd_classify(&x, &z).map_err(|e| e.to_string())?;
        let want = if (&z - &x * &x).mod_floor(&big(5)).is_zero() { big(5) } else { BigInt::one() };
        ensure(g == want, || format!("gcd class {g} for x={x}, z={z}"))?;
        sampled += 1;
    }
    let mut pairs = 0;
    for u in (-99i64..=99).step_by(2) {
        for v in (-100i64..=100).step_by(2) {
            let (u, v) = (big(u), big(v));
            if !gcd(&u, &v).unwrap().is_one() {
                continue;
            }
            let lhs = gcd(&v, &quartic_y(&u, &v)).unwrap();
            let rhs = gcd(&v, &big(5)).unwrap();
            ensure(lhs == rhs, || format!("gcd(v, quartic) = {lhs} at u={u}, v={v}"))?;
            pairs += 1;
        }
    }
    Ok(format!("{sampled} seeded (x, z) pairs and {pairs} (u, v) pairs"))
}

/// 5(u² − v²)² − (v⁴ − 10u²v² + 5u⁴) = 4v⁴.
fn ac8_quartic_identity() -> Outcome {
    let mut checked = 0;
    for u in -100i64..=100 {
        for v in -100i64..=100 {
            let (u, v) = (big(u), big(v));
            let d = &u * &u - &v * &v;
            let lhs = big(5) * &d * &d - quartic_y(&u, &v);
            ensure(lhs == big(4) * v.pow(4), || format!("identity fails at u={u}, v={v}"))?;
            ensure(quartic_x(&u, &v) == quartic_y(&v, &u), || "quartic symmetry fails".into())?;
            ensure(!lhs.is_negative(), || "negative square difference".into())?;
            checked += 1;
        }
    }
    Ok(format!("{checked} pairs with |u|, |v| <= 100"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 8] = [
        ("AC1 parametrization identity", ac1_parametrization_identity),
        ("AC2 worked example", ac2_worked_example),
        ("AC3 enumeration completeness", ac3_completeness),
        ("AC4 bounded search", ac4_search),
        ("AC5 residue certificates", ac5_certificates),
        ("AC6 N = 7 levels", ac6_levels),
        ("AC7 gcd contracts", ac7_gcd_contracts),
        ("AC8 quartic identity", ac8_quartic_identity),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(why) => {
                println!("[FAIL] {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
