//! Trace-level invariants of the theorem harness on random inputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use sumprod_core::arith::{dilate, dilate_intersection_size, product_set, sumset};
use sumprod_core::harness::*;
use sumprod_core::{build_dlog, make_field, set_from_elements, FpSet};

const PRIMES: [u64; 6] = [211, 401, 1009, 2003, 4099, 8191];

fn random_set(rng: &mut Xoshiro256PlusPlus) -> FpSet {
    let p = PRIMES[rng.random_range(0..PRIMES.len())];
    let cap = ((p as f64).sqrt() as usize - 1).min(20);
    let n = rng.random_range(2..=cap);
    // bias toward structured sets so both cases and non-degenerate traces show up
    let f = build_dlog(&make_field(p).unwrap());
    let mut xs = std::collections::BTreeSet::new();
    match rng.random_range(0..3) {
        0 => {
            while xs.len() < n {
                xs.insert(rng.random_range(1..p as u32));
            }
        }
        1 => {
            let g = rng.random_range(2..p as u32);
            let mut x = rng.random_range(1..p as u32);
            while xs.len() < n {
                xs.insert(x);
                x = f.mul(x, g);
                if xs.contains(&x) {
                    x = rng.random_range(1..p as u32);
                }
            }
        }
        _ => {
            let half = n / 2;
            let start = rng.random_range(1..p as u32 / 2);
            xs.extend((0..half as u32).map(|i| start + i));
            let mut x = 1u32;
            while xs.len() < n {
                xs.insert(x);
                x = f.mul(x, 3);
            }
        }
    }
    set_from_elements(&f, xs).unwrap()
}

fn traces(seed: u64, count: usize) -> Vec<(FpSet, ProofTrace)> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let a = random_set(&mut rng);
            let t = run_theorem(&a).unwrap();
            (a, t)
        })
        .collect()
}

fn ratio(s: &CertificateStep) -> BigRational {
    &s.lhs / &s.rhs
}

fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[test]
fn exact_steps_always_hold() {
    for (a, t) in traces(1, 150) {
        let failed: Vec<_> = t.exact_failures().map(|s| s.name.clone()).collect();
        assert!(failed.is_empty(), "{a:?}: {failed:?}");
    }
}

#[test]
fn pigeonhole_row_and_guarantees() {
    for (a, t) in traces(2, 100) {
        let ph = &t.pigeonhole;
        for &(x, v) in &ph.row {
            assert_eq!(v, dilate_intersection_size(ph.b0, x, &a).unwrap() as u64);
        }
        for x in ph.a1.iter() {
            let v = dilate_intersection_size(ph.b0, x, &a).unwrap() as u64;
            assert!(ph.level <= v && v < 2 * ph.level);
        }
        let n = a.card() as u64;
        let l = ph.level_count as u64;
        assert_eq!(l, 64 - n.leading_zeros() as u64);
        let aa = product_set(&a, &a).unwrap().card() as u64;
        assert!(ph.row_sum * aa >= n.pow(3));
        assert!(ph.a1.card() as u64 * 2 * ph.level * l >= ph.row_sum);
        // N >= |A|^2 / (2L|AA|) and |A1| N >= |A|^3 / (2L|AA|)
        assert!(2 * l * aa * ph.level >= n * n);
        assert!(2 * l * aa * ph.level * ph.a1.card() as u64 >= n.pow(3));
    }
}

#[test]
fn case_specific_invariants() {
    let (mut full, mut nonfull) = (0, 0);
    for (_, t) in traces(3, 200) {
        let a1 = &t.pigeonhole.a1;
        let m = a1.card();
        match t.case {
            TraceCase::Nonfull => {
                nonfull += 1;
                let r = t.refinement.as_ref().unwrap();
                assert!(2 * r.subset.card() > m);
                let g = t.step("gk.lower").unwrap();
                assert!(g.holds);
            }
            TraceCase::Full => {
                full += 1;
                let q = t.quadruple.as_ref().unwrap();
                let s = sumset(a1, &dilate(q.xi, a1).unwrap()).unwrap().card();
                assert!(2 * s >= m * m);
            }
            TraceCase::Degenerate => {
                assert!(m < 2);
                assert_eq!(t.steps.len(), 2);
            }
        }
    }
    assert!(full > 0 && nonfull > 0, "full {full} nonfull {nonfull}");
}

#[test]
fn chain_recomputes_from_cardinalities() {
    for (_, t) in traces(4, 200) {
        if t.case == TraceCase::Degenerate {
            continue;
        }
        let n = t.input.card_a as u64;
        let s = t.input.card_sumset as u64;
        let pp = t.input.card_productset as u64;
        let nn = t.pigeonhole.level;
        let m = t.pigeonhole.a1.card() as u64;
        let l = t.pigeonhole.level_count as u64;
        let pow = |b: u64, e: usize| num_traits::pow(int(b), e);

        // pivot bound is the product of the dilate factors over |b0 A|^3
        let factors: Vec<&CertificateStep> = (1..=4)
            .map(|i| t.step(&format!("cor16.factor.{i}")).unwrap())
            .collect();
        let cor14 = t.step("cor14.apply").unwrap();
        let prod: BigRational = factors.iter().map(|f| f.lhs.clone()).product();
        assert_eq!(cor14.rhs, prod / pow(n, 3));
        let bound_prod: BigRational = factors.iter().map(|f| f.rhs.clone()).product();
        assert!(bound_prod <= pow(s, 8) / pow(nn, 4));

        let chain = t.step("chain.product").unwrap();
        match t.case {
            TraceCase::Full => {
                assert_eq!(chain.lhs, pow(m, 2) * pow(nn, 4) * pow(n, 3));
                assert_eq!(chain.rhs, pow(s, 8));
                assert!(ratio(chain) <= int(2));
                let e3 = t.step("eq2.3").unwrap();
                assert_eq!(e3.lhs, pow(nn, 2) * pow(n, 9));
                assert_eq!(e3.rhs, pow(s, 8) * pow(pp, 2));
                assert!(ratio(e3) <= int(4 * l * l) * ratio(chain));
                let e4 = t.step("eq2.4").unwrap();
                assert_eq!(e4.lhs, pow(n, 13));
                assert_eq!(e4.rhs, pow(s, 8) * pow(pp, 4));
                assert!(ratio(e4) <= int(4 * l * l) * ratio(e3));
            }
            TraceCase::Nonfull => {
                assert_eq!(chain.lhs, pow(m, 3) * pow(nn, 4) * pow(n, 3));
                assert_eq!(chain.rhs, pow(s, 9));
                let c15 = t.step("cor15.bound").unwrap();
                assert!(ratio(chain) <= int(4) * ratio(c15));
                if t.refinement.as_ref().unwrap().all_exhaustive() {
                    // exhaustive extraction keeps the refinement constant below 2^(k+1)
                    assert!(ratio(c15) <= int(8));
                }
                let e5 = t.step("eq2.5").unwrap();
                assert_eq!(e5.lhs, int(nn) * pow(n, 12));
                assert_eq!(e5.rhs, pow(s, 9) * pow(pp, 3));
                assert!(ratio(e5) <= int(8 * l * l * l) * ratio(chain));
                let e6 = t.step("eq2.6").unwrap();
                assert_eq!(e6.lhs, pow(n, 14));
                assert_eq!(e6.rhs, pow(s, 9) * pow(pp, 4));
                assert!(ratio(e6) <= int(2 * l) * ratio(e5));
            }
            TraceCase::Degenerate => unreachable!(),
        }
    }
}

#[test]
fn step_order_matches_the_argument() {
    let full_order = [
        "pigeonhole.2.1",
        "pigeonhole.2.2",
        "gk.lower",
        "embed.dilates",
        "cor14.apply",
        "cor16.factor.1",
        "cor16.factor.2",
        "cor16.factor.3",
        "cor16.factor.4",
        "chain.product",
        "eq2.3",
        "eq2.4",
    ];
    let nonfull_order = [
        "pigeonhole.2.1",
        "pigeonhole.2.2",
        "cor15.refine",
        "cor15.bound",
        "gk.lower",
        "embed.refined",
        "embed.dilates",
        "cor14.apply",
        "cor16.factor.1",
        "cor16.factor.2",
        "cor16.factor.3",
        "cor16.factor.4",
        "chain.product",
        "eq2.5",
        "eq2.6",
    ];
    for (_, t) in traces(5, 100) {
        let names: Vec<&str> = t.steps.iter().map(|s| s.name.as_str()).collect();
        match t.case {
            TraceCase::Full => assert_eq!(names, full_order),
            TraceCase::Nonfull => assert_eq!(names, nonfull_order),
            TraceCase::Degenerate => assert_eq!(names, full_order[..2]),
        }
    }
}

#[test]
fn traces_are_deterministic() {
    let a = traces(6, 20);
    let b = traces(6, 20);
    for ((_, x), (_, y)) in a.iter().zip(&b) {
        assert_eq!(x.to_json(), y.to_json());
    }
}

#[test]
fn json_schema() {
    let f = make_field(101).unwrap();
    let t = run_theorem(&set_from_elements(&f, [1u32, 2, 4, 8, 16]).unwrap()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
    assert_eq!(v["input"]["p"], 101);
    assert_eq!(v["input"]["cardA"], 5);
    assert_eq!(v["input"]["cardSumset"], 15);
    assert_eq!(v["input"]["cardProductset"], 9);
    assert!(matches!(
        v["case"].as_str(),
        Some("FULL" | "NONFULL" | "DEGENERATE")
    ));
    for key in ["b0", "N", "cardA1", "L", "rowSum"] {
        assert!(v["pigeonhole"].get(key).is_some(), "{key}");
    }
    for step in v["steps"].as_array().unwrap() {
        for key in ["name", "lhs", "rhs", "constant", "holds", "paperEq"] {
            assert!(step.get(key).is_some(), "{key}");
        }
    }
    let fe = v["finalExponent"].as_f64().unwrap();
    assert!((fe - 15f64.ln() / 5f64.ln()).abs() < 1e-9);
    assert!((v["targetExponent"].as_f64().unwrap() - 14.0 / 13.0).abs() < 1e-15);
}

#[test]
fn aggregation_splits_by_case() {
    let ts: Vec<ProofTrace> = traces(7, 100).into_iter().map(|(_, t)| t).collect();
    let r = aggregate_constants(&ts).unwrap();
    assert_eq!(r.traces, 100);
    assert_eq!(r.exact_failures, 0);
    let per_case: usize = r.by_case.values().map(|c| c.traces).sum();
    assert_eq!(per_case, 100);
    if let Some(full) = r.by_case.get("FULL") {
        assert!(full.steps.contains_key("eq2.4") && !full.steps.contains_key("eq2.6"));
    }
    if let Some(nonfull) = r.by_case.get("NONFULL") {
        assert!(nonfull.steps.contains_key("eq2.6") && !nonfull.steps.contains_key("eq2.4"));
    }
    let s = &r.steps["pigeonhole.2.1"];
    assert_eq!(s.count, 100);
    assert!(s.min <= s.median && s.median <= s.max && s.exact);
}
