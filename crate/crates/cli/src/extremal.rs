//! `extremal`: local search for sets with small `max(|A+A|, |AA|)`.

use std::io::Write;

use anyhow::{ensure, Result};
use clap::Args;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;
use sumprod_core::arith::{product_set, sumset};
use sumprod_core::harness::sum_product_exponent;
use sumprod_core::{set_from_elements, Field, FpSet};

use crate::family::random_nonzero;
use crate::{field_with_dlog, EXIT_OK};

#[derive(Args, Clone, Debug)]
pub struct ExtremalArgs {
    /// Field modulus (prime below 2^31).
    #[arg(long)]
    pub p: u64,
    /// Set size; requires 2 <= n and n^2 < p.
    #[arg(long)]
    pub n: usize,
    /// Number of swap moves tried.
    #[arg(long, default_value_t = 1000)]
    pub iters: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Scored {
    pub elements: Vec<u32>,
    pub card_sumset: usize,
    pub card_productset: usize,
    pub objective: usize,
    pub exponent: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Improvement {
    pub iter: u64,
    pub objective: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtremalReport {
    pub p: u32,
    pub n: usize,
    pub iters: u64,
    pub seed: u64,
    pub initial: Scored,
    pub best: Scored,
    /// Objective of the progression `{1, ..., n}`, for comparison.
    pub progression_objective: usize,
    pub accepted_moves: u64,
    pub improvements: Vec<Improvement>,
}

fn score(a: &FpSet) -> Result<Scored> {
    let s = sumset(a, a)?.card();
    let m = product_set(a, a)?.card();
    Ok(Scored {
        elements: a.elements().to_vec(),
        card_sumset: s,
        card_productset: m,
        objective: s.max(m),
        exponent: sum_product_exponent(a.card(), s, m).expect("n >= 2"),
    })
}

fn objective(a: &FpSet) -> Result<usize> {
    Ok(sumset(a, a)?.card().max(product_set(a, a)?.card()))
}

pub fn search(field: &Field, n: usize, iters: u64, seed: u64) -> Result<ExtremalReport> {
    let p = field.p();
    ensure!(n >= 2, "--n must be at least 2");
    ensure!(
        (n as u64) * (n as u64) < p as u64,
        "need n^2 < p, got n = {n}, p = {p}"
    );
    let mut rng = SplitMix64::seed_from_u64(seed);
    let start = set_from_elements(field, random_nonzero(p, n, rng.next_u64()))?;
    let progression = set_from_elements(field, 1..=n as u64)?;

    let mut current = start.clone();
    let mut current_obj = objective(&current)?;
    let mut best = current.clone();
    let mut best_obj = current_obj;
    let mut accepted = 0;
    let mut improvements = Vec::new();
    for iter in 0..iters {
        let out = current.elements()[(rng.next_u64() % n as u64) as usize];
        let incoming = loop {
            let y = 1 + (rng.next_u64() % (p as u64 - 1)) as u32;
            if !current.contains(y) {
                break y;
            }
        };
        let candidate = set_from_elements(
            field,
            current.iter().filter(|&x| x != out).chain([incoming]),
        )?;
        let obj = objective(&candidate)?;
        // sideways moves are accepted so the search can cross plateaus
        if obj <= current_obj {
            current = candidate;
            current_obj = obj;
            accepted += 1;
            if obj < best_obj {
                best = current.clone();
                best_obj = obj;
                improvements.push(Improvement {
                    iter,
                    objective: obj,
                });
            }
        }
    }
    Ok(ExtremalReport {
        p,
        n,
        iters,
        seed,
        initial: score(&start)?,
        best: score(&best)?,
        progression_objective: objective(&progression)?,
        accepted_moves: accepted,
        improvements,
    })
}

pub fn run(args: &ExtremalArgs, out: &mut dyn Write) -> Result<i32> {
    let field = field_with_dlog(args.p)?;
    let report = search(&field, args.n, args.iters, args.seed)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    Ok(EXIT_OK)
}
