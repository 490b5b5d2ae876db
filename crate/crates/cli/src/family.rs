//! Deterministic set-family generators.
//!
//! RANDOM draws from SplitMix64 so the same seed reproduces the same set in any
//! language: element candidates are `1 + next_u64() mod (p - 1)`, duplicates
//! skipped, until `n` distinct values are collected.

use std::collections::BTreeSet;
use std::fmt;

use anyhow::{bail, ensure, Result};
use clap::ValueEnum;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use sumprod_core::{set_from_elements, Field, FpSet};

const PHI: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum)]
pub enum FamilyKind {
    Ap,
    Gp,
    Random,
    Subgroup,
    ApUnionGp,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Ap => "ap",
            FamilyKind::Gp => "gp",
            FamilyKind::Random => "random",
            FamilyKind::Subgroup => "subgroup",
            FamilyKind::ApUnionGp => "ap-union-gp",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub n: usize,
    pub start: u64,
    pub step: u64,
    pub base: u64,
    pub seed: u64,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, n: usize) -> Self {
        Self {
            kind,
            n,
            start: 1,
            step: 1,
            base: 2,
            seed: 0,
        }
    }
}

/// The `index`-th output of the SplitMix64 stream seeded with `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    SplitMix64::seed_from_u64(seed.wrapping_add(index.wrapping_mul(PHI))).next_u64()
}

/// `n` distinct nonzero elements drawn with SplitMix64.
pub fn random_nonzero(p: u32, n: usize, seed: u64) -> Vec<u32> {
    assert!(n < p as usize);
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = 1 + (rng.next_u64() % (p as u64 - 1)) as u32;
        if seen.insert(x) {
            out.push(x);
        }
    }
    out
}

/// Nonzero terms of `start, start + step, ...`, skipping 0, until `n` are collected.
fn progression(p: u32, start: u64, step: u64, n: usize, taken: &mut BTreeSet<u32>) {
    let p64 = p as u64;
    let mut x = start % p64;
    for _ in 0..p64 {
        if taken.len() >= n {
            return;
        }
        if x != 0 {
            taken.insert(x as u32);
        }
        x = (x + step) % p64;
    }
}

pub fn generate(spec: &FamilySpec, field: &Field) -> Result<FpSet> {
    let p = field.p();
    let n = spec.n;
    ensure!(n >= 1, "family size must be at least 1");
    ensure!(n < p as usize, "family size {n} must be below p = {p}");
    let elems: Vec<u32> = match spec.kind {
        FamilyKind::Ap => {
            ensure!(
                !spec.step.is_multiple_of(p as u64),
                "progression step must be nonzero mod p"
            );
            let mut taken = BTreeSet::new();
            progression(p, spec.start, spec.step, n, &mut taken);
            taken.into_iter().collect()
        }
        FamilyKind::Gp => {
            let base = (spec.base % p as u64) as u32;
            ensure!(base != 0, "geometric base must be nonzero mod p");
            let mut out = Vec::with_capacity(n);
            let mut x = 1u32;
            for _ in 0..n {
                if out.contains(&x) {
                    bail!("base {base} has multiplicative order below {n} in F_{p}");
                }
                out.push(x);
                x = field.mul(x, base);
            }
            out
        }
        FamilyKind::Random => random_nonzero(p, n, spec.seed),
        FamilyKind::Subgroup => {
            let order = p as usize - 1;
            ensure!(
                order.is_multiple_of(n),
                "no subgroup of order {n} in F_{p}*: {n} does not divide {order}"
            );
            let root = field
                .root()
                .unwrap_or_else(|| sumprod_core::build_dlog(field).root().unwrap());
            let g = field.pow(root, (order / n) as u64);
            (0..n as u64).map(|i| field.pow(g, i)).collect()
        }
        FamilyKind::ApUnionGp => {
            ensure!(
                !spec.step.is_multiple_of(p as u64),
                "progression step must be nonzero mod p"
            );
            let base = (spec.base % p as u64) as u32;
            ensure!(base != 0, "geometric base must be nonzero mod p");
            let mut taken = BTreeSet::new();
            progression(p, spec.start, spec.step, n.div_ceil(2), &mut taken);
            let mut x = 1u32;
            for _ in 0..p {
                if taken.len() >= n {
                    break;
                }
                taken.insert(x);
                x = field.mul(x, base);
            }
            // short orbit: keep extending the progression
            progression(p, spec.start, spec.step, n, &mut taken);
            taken.into_iter().collect()
        }
    };
    debug_assert_eq!(elems.len(), n);
    Ok(set_from_elements(field, elems)?)
}
