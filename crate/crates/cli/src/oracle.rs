//! `oracle-suite`: seeded randomized batteries checking fast kernels against
//! enumeration and the exact inequalities on random instances.

use std::collections::BTreeSet;
use std::io::Write;

use anyhow::{ensure, Result};
use clap::Args;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use sumprod_core::arith::{
    additive_energy_cross, difference_set, dilate, dilate_intersection_size, multiplicative_energy,
    product_set, ratio_of_differences, ratio_representation_count, sumset,
};
use sumprod_core::field::is_prime;
use sumprod_core::gk::{find_quadruple_full, find_quadruple_nonfull, verify_gk_lower_bound};
use sumprod_core::harness::pigeonhole_decomposition;
use sumprod_core::plunnecke::{
    cor14_bound, cor16_bounds, find_plunneke_witness_exhaustive, find_plunneke_witness_greedy,
    integer, product_bound, rational, refine_large_subset_with, ruzsa_triangle_check, FinderMode,
    RefinementResult, EXHAUSTIVE_BOUND,
};
use sumprod_core::{naive, set_from_elements, Field, FpSet};

use crate::family::derive_seed;
use crate::{field_with_dlog, with_pool, EXIT_FAILURE, EXIT_OK, THREADS_ENV};

/// Largest modulus the suite draws from; keeps per-instance table builds cheap.
pub const MAX_P_CAP: u64 = 1 << 16;
/// Cap on `|A1|` for the quadruple batteries, whose scans are quartic.
const GK_MAX_CARD: usize = 12;
/// Cap on the number of extra sets `B_i`.
const MAX_K: usize = 3;

pub const BATTERIES: &[&str] = &[
    "sumset_kernel",
    "difference_kernel",
    "product_kernel",
    "dilate_intersection",
    "multiplicative_energy",
    "additive_energy_cross",
    "ratio_representation",
    "ratio_set",
    "cauchy_davenport",
    "dilation_invariance",
    "energy_identity",
    "gk_uniqueness",
    "ruzsa_triangle",
    "cor14",
    "cor14_monotone",
    "cor16_sum",
    "cor16_diff",
    "plunnecke_exhaustive",
    "plunnecke_greedy_dominated",
    "refinement",
    "gk_nonfull",
    "gk_full",
    "pigeonhole",
];

#[derive(Args, Clone, Debug)]
pub struct OracleArgs {
    /// Number of random instances; each feeds every applicable battery.
    #[arg(long, default_value_t = 1000)]
    pub instances: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest prime drawn (at least 5, at most 65536).
    #[arg(long, default_value_t = 101)]
    pub max_p: u64,
    /// Largest set size drawn (at least 1, at most 20).
    #[arg(long, default_value_t = 12)]
    pub max_card: usize,
    /// Worker threads (default: $SUMPROD_THREADS, else one per core).
    #[arg(long, env = THREADS_ENV)]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub passed: u64,
    pub total: u64,
}

impl Tally {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summary {
    pub batteries: Vec<(&'static str, Tally)>,
}

impl Summary {
    pub fn get(&self, name: &str) -> Tally {
        self.batteries
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| *t)
            .unwrap_or_default()
    }

    pub fn all_pass(&self) -> bool {
        self.batteries.iter().all(|(_, t)| t.ok())
    }

    pub fn render(&self) -> String {
        self.batteries
            .iter()
            .map(|(n, t)| format!("{n}: {}/{}\n", t.passed, t.total))
            .collect()
    }
}

struct Draw(SplitMix64);

impl Draw {
    fn below(&mut self, n: u64) -> u64 {
        self.0.next_u64() % n
    }

    /// Uniform in `lo..=hi`.
    fn between(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below((hi - lo + 1) as u64) as usize
    }

    fn nonzero(&mut self, p: u32) -> u32 {
        1 + self.below(p as u64 - 1) as u32
    }

    /// Distinct elements of `F_p` (or `F_p*` when `nonzero`).
    fn set(&mut self, f: &Field, size: usize, nonzero: bool) -> FpSet {
        let p = f.p();
        let mut out = BTreeSet::new();
        while out.len() < size {
            let x = if nonzero {
                self.nonzero(p)
            } else {
                self.below(p as u64) as u32
            };
            out.insert(x);
        }
        set_from_elements(f, out).expect("elements in range")
    }
}

type Outcomes = Vec<Option<bool>>;

struct Instance<'a> {
    draw: Draw,
    f: &'a Field,
    cap: usize,
    out: Outcomes,
}

impl Instance<'_> {
    fn record(&mut self, name: &str, ok: bool) {
        let i = BATTERIES
            .iter()
            .position(|b| *b == name)
            .expect("known battery");
        // an instance counts once per battery; a single failing check fails it
        self.out[i] = Some(self.out[i].unwrap_or(true) && ok);
    }

    fn any_set(&mut self) -> FpSet {
        let size = self.draw.between(1, self.cap);
        self.draw.set(self.f, size, false)
    }

    fn nonzero_set(&mut self, lo: usize, hi: usize) -> FpSet {
        let size = self.draw.between(lo, hi);
        self.draw.set(self.f, size, true)
    }
}

fn same(set: &FpSet, reference: &BTreeSet<u32>) -> bool {
    set.card() == reference.len() && set.iter().eq(reference.iter().copied())
}

fn kernels(it: &mut Instance) -> Result<()> {
    let f = it.f.clone();
    let p = f.p();
    let (a, b) = (it.any_set(), it.any_set());
    let cap = it.cap;
    let (an, bn) = (it.nonzero_set(1, cap), it.nonzero_set(1, cap));

    let s = sumset(&a, &b)?;
    it.record("sumset_kernel", same(&s, &naive::sumset(&a, &b)));
    it.record(
        "difference_kernel",
        same(&difference_set(&a, &b)?, &naive::difference_set(&a, &b)),
    );
    it.record(
        "product_kernel",
        same(&product_set(&an, &bn)?, &naive::product_set(&an, &bn)),
    );
    it.record(
        "product_kernel",
        same(&product_set(&a, &b)?, &naive::product_set(&a, &b)),
    );

    let (c, d) = (it.draw.nonzero(p), it.draw.nonzero(p));
    it.record(
        "dilate_intersection",
        dilate_intersection_size(c, d, &an)? == naive::dilate_intersection_size(c, d, &an),
    );
    it.record(
        "multiplicative_energy",
        multiplicative_energy(&an)? == naive::multiplicative_energy(&an),
    );
    let xi = it.draw.nonzero(p);
    it.record(
        "additive_energy_cross",
        additive_energy_cross(&a, xi)? == naive::additive_energy_cross(&a, xi),
    );
    if a.card() >= 2 {
        it.record(
            "ratio_representation",
            ratio_representation_count(&a, xi)? == naive::ratio_representation_count(&a, xi),
        );
        it.record(
            "ratio_set",
            same(&ratio_of_differences(&a)?, &naive::ratio_of_differences(&a)),
        );
    }

    let cd = (a.card() + b.card() - 1).min(p as usize);
    it.record("cauchy_davenport", s.card() >= cd);
    let c = it.draw.nonzero(p);
    let (ca, cb) = (dilate(c, &a)?, dilate(c, &b)?);
    it.record(
        "dilation_invariance",
        ca.card() == a.card() && sumset(&ca, &cb)?.card() == s.card(),
    );

    let mut total = 0u64;
    for x in an.iter() {
        for y in an.iter() {
            total += dilate_intersection_size(x, y, &an)? as u64;
        }
    }
    it.record("energy_identity", total == multiplicative_energy(&an)?);

    if an.card() >= 2 {
        let ratios = ratio_of_differences(&an)?;
        if !ratios.is_full() {
            let outside: Vec<u32> = (0..p).filter(|&x| !ratios.contains(x)).collect();
            let xi = outside[it.draw.below(outside.len() as u64) as usize];
            let n = an.card();
            it.record(
                "gk_uniqueness",
                sumset(&an, &dilate(xi, &an)?)?.card() == n * n,
            );
        }
    }
    Ok(())
}

fn extra_sets(it: &mut Instance) -> Vec<FpSet> {
    let k = it.draw.between(1, MAX_K);
    (0..k).map(|_| it.any_set()).collect()
}

fn lemmas(it: &mut Instance) -> Result<()> {
    let f = it.f.clone();
    let p = f.p();
    let (x, y, z) = (it.any_set(), it.any_set(), it.any_set());
    it.record("ruzsa_triangle", ruzsa_triangle_check(&x, &y, &z)?.holds);

    let bs = extra_sets(it);
    it.record("cor14", cor14_bound(&x, &bs)?.holds);
    let mut grown = bs.clone();
    let i = it.draw.below(grown.len() as u64) as usize;
    let extra = FpSet::singleton(&f, it.draw.below(p as u64) as u32)?;
    grown[i] = grown[i].union(&extra)?;
    it.record(
        "cor14_monotone",
        product_bound(&x, &grown)? >= product_bound(&x, &bs)?,
    );

    let cap = it.cap;
    let an = it.nonzero_set(1, cap);
    let e = an.elements();
    let (a, b) = (
        e[it.draw.below(e.len() as u64) as usize],
        e[it.draw.below(e.len() as u64) as usize],
    );
    let c = cor16_bounds(a, b, &an)?;
    it.record("cor16_sum", c.sum_bound_holds);
    it.record("cor16_diff", c.diff_bound_holds);

    let xs = it.draw.between(1, cap.min(EXHAUSTIVE_BOUND));
    let x = it.draw.set(&f, xs, false);
    let bs = extra_sets(it);
    let w = find_plunneke_witness_exhaustive(&x, &bs)?;
    it.record("plunnecke_exhaustive", w.measured_constant <= integer(1));
    let g = find_plunneke_witness_greedy(&x, &bs)?;
    it.record(
        "plunnecke_greedy_dominated",
        g.measured_constant >= w.measured_constant,
    );

    let r = refine_large_subset_with(&x, &bs, FinderMode::Exhaustive)?;
    it.record("refinement", refinement_ok(&x, &r, bs.len())?);
    Ok(())
}

fn refinement_ok(x: &FpSet, r: &RefinementResult, k: usize) -> Result<bool> {
    let mut covered = 0;
    let mut union = FpSet::empty(x.field());
    for piece in &r.pieces {
        covered += piece.card();
        union = union.union(piece)?;
    }
    Ok(2 * r.subset.card() > x.card()
        && covered == union.card()
        && union == r.subset
        && r.subset.is_subset(x)
        && r.measured_constant <= RefinementResult::constant_envelope(k))
}

fn quadruples(it: &mut Instance) -> Result<()> {
    let f = it.f.clone();
    let p = f.p();
    let hi = it.cap.min(GK_MAX_CARD);
    if hi < 2 {
        return Ok(());
    }
    let a1 = it.nonzero_set(2, hi);
    let n = a1.card();
    let ratios = ratio_of_differences(&a1)?;
    if !ratios.is_full() {
        let q = find_quadruple_nonfull(&a1)?;
        let exact = sumset(&a1, &dilate(q.xi, &a1)?)?.card() == n * n;
        let x = dilate(q.da(), &a1)?;
        let bs = [x.clone(), dilate(q.db(), &a1)?];
        let refined = refine_large_subset_with(&x, &bs, FinderMode::Auto)?;
        let a_prime = dilate(f.inv(q.da()).unwrap(), &refined.subset)?;
        let lower = verify_gk_lower_bound(&a_prime, &q)?.holds;
        it.record("gk_nonfull", exact && lower && 2 * a_prime.card() > n);
    } else if (n * n) < p as usize {
        let q = find_quadruple_full(&a1)?;
        let reps = q.representations.unwrap_or(0);
        let two = sumset(&a1, &dilate(q.xi, &a1)?)?.card();
        let nn = (n * n) as u64;
        it.record(
            "gk_full",
            2 * two as u64 >= nn && reps <= nn && additive_energy_cross(&a1, q.xi)? == nn + reps,
        );
    }

    let a = it.nonzero_set(2, it.cap.max(2).min(p as usize - 1));
    let ph = pigeonhole_decomposition(&a)?;
    let m = product_set(&a, &a)?.card() as u64;
    let l2 = 2 * ph.level_count as u64;
    let n = a.card() as u64;
    let level = integer(ph.level);
    let ok = rational(n * n, l2 * m) <= level
        && rational(n * n * n, l2 * m) <= level * integer(ph.a1.card() as u64)
        && !ph.a1.is_empty();
    it.record("pigeonhole", ok);
    Ok(())
}

fn run_instance(args: &OracleArgs, primes: &[u32], index: u64) -> Result<Outcomes> {
    let mut draw = Draw(SplitMix64::seed_from_u64(derive_seed(args.seed, index)));
    let p = primes[draw.below(primes.len() as u64) as usize];
    let f = field_with_dlog(p as u64)?;
    let mut it = Instance {
        draw,
        f: &f,
        cap: args.max_card.min(p as usize - 1),
        out: vec![None; BATTERIES.len()],
    };
    kernels(&mut it)?;
    lemmas(&mut it)?;
    quadruples(&mut it)?;
    Ok(it.out)
}

pub fn run_suite(args: &OracleArgs) -> Result<Summary> {
    ensure!(args.instances >= 1, "--instances must be at least 1");
    ensure!(
        (5..=MAX_P_CAP).contains(&args.max_p),
        "--max-p must lie in 5..={MAX_P_CAP}"
    );
    ensure!(
        (1..=EXHAUSTIVE_BOUND).contains(&args.max_card),
        "--max-card must lie in 1..={EXHAUSTIVE_BOUND}"
    );
    let primes: Vec<u32> = (5..=args.max_p)
        .filter(|&q| is_prime(q))
        .map(|q| q as u32)
        .collect();
    let outcomes = with_pool(args.threads, || {
        (0..args.instances)
            .into_par_iter()
            .map(|i| run_instance(args, &primes, i))
            .collect::<Result<Vec<_>>>()
    })??;
    let mut tallies = vec![Tally::default(); BATTERIES.len()];
    for o in &outcomes {
        for (t, r) in tallies.iter_mut().zip(o) {
            if let Some(ok) = r {
                t.total += 1;
                t.passed += *ok as u64;
            }
        }
    }
    Ok(Summary {
        batteries: BATTERIES.iter().copied().zip(tallies).collect(),
    })
}

pub fn run(args: &OracleArgs, out: &mut dyn Write) -> Result<i32> {
    let summary = run_suite(args)?;
    out.write_all(summary.render().as_bytes())?;
    Ok(if summary.all_pass() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}
