//! `sweep`: sum-product exponents across families and sizes as CSV.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{ensure, Context, Result};
use clap::Args;
use rayon::prelude::*;
use sumprod_core::arith::{product_set, sumset};
use sumprod_core::harness::{aggregate_constants, run_theorem, sum_product_exponent, ProofTrace};

use crate::family::{derive_seed, generate, FamilyKind, FamilySpec};
use crate::{field_with_dlog, with_pool, EXIT_OK, THREADS_ENV};

pub const CSV_COLUMNS: [&str; 9] = [
    "p",
    "family",
    "n",
    "seed",
    "cardSumset",
    "cardProductset",
    "maxCard",
    "exponent",
    "caseTag",
];

#[derive(Args, Clone, Debug)]
pub struct SweepArgs {
    /// Field modulus (prime below 2^31).
    #[arg(long)]
    pub p: u64,
    /// Families to sweep.
    #[arg(long, value_enum, value_delimiter = ',', num_args = 1.., required = true)]
    pub families: Vec<FamilyKind>,
    /// Set sizes to sweep.
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub sizes: Vec<usize>,
    /// Trials per size for the random family; other families are deterministic and run once.
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Master seed; trial `i` uses the `i`-th SplitMix64 output of this seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: $SUMPROD_THREADS, else one per core).
    #[arg(long, env = THREADS_ENV)]
    pub threads: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub start: u64,
    #[arg(long, default_value_t = 1)]
    pub step: u64,
    #[arg(long, default_value_t = 2)]
    pub base: u64,
    /// Write per-step implied-constant statistics of all theorem runs here as JSON.
    #[arg(long)]
    pub constants: Option<PathBuf>,
}

struct Row {
    record: [String; 9],
    trace: Option<ProofTrace>,
}

fn sweep_row(p: u32, spec: &FamilySpec, field: &sumprod_core::Field) -> Result<Row> {
    let a = generate(spec, field)?;
    let n = a.card();
    let s = sumset(&a, &a)?.card();
    let m = product_set(&a, &a)?.card();
    let exponent = sum_product_exponent(n, s, m)
        .map(|e| e.to_string())
        .unwrap_or_default();
    // theorem runs need |A|^2 < p; smaller or larger sets still get a row
    let trace = if n >= 2 && (n as u64) * (n as u64) < p as u64 {
        Some(run_theorem(&a)?)
    } else {
        None
    };
    let tag = trace.as_ref().map(|t| t.case.as_str()).unwrap_or("");
    let seed = if spec.kind == FamilyKind::Random {
        spec.seed.to_string()
    } else {
        String::new()
    };
    let record = [
        p.to_string(),
        spec.kind.to_string(),
        n.to_string(),
        seed,
        s.to_string(),
        m.to_string(),
        s.max(m).to_string(),
        exponent,
        tag.to_string(),
    ];
    Ok(Row { record, trace })
}

pub fn run(args: &SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let field = field_with_dlog(args.p)?;
    let p = field.p();
    ensure!(args.trials >= 1, "--trials must be at least 1");
    for &n in &args.sizes {
        ensure!(n >= 1 && n < p as usize, "size {n} outside 1..{p}");
    }
    let mut specs = Vec::new();
    for &kind in &args.families {
        for &n in &args.sizes {
            let trials = if kind == FamilyKind::Random {
                args.trials
            } else {
                1
            };
            for t in 0..trials {
                specs.push(FamilySpec {
                    kind,
                    n,
                    start: args.start,
                    step: args.step,
                    base: args.base,
                    seed: if kind == FamilyKind::Random {
                        derive_seed(args.seed, t)
                    } else {
                        0
                    },
                });
            }
        }
    }
    let rows: Vec<Row> = with_pool(args.threads, || {
        specs
            .par_iter()
            .map(|spec| sweep_row(p, spec, &field))
            .collect::<Result<Vec<_>>>()
    })??;

    let mut csv = csv::Writer::from_writer(&mut *out);
    csv.write_record(CSV_COLUMNS)?;
    for r in &rows {
        csv.write_record(&r.record)?;
    }
    csv.flush()?;
    drop(csv);
    if let Some(path) = &args.constants {
        let traces: Vec<ProofTrace> = rows.into_iter().filter_map(|r| r.trace).collect();
        ensure!(
            !traces.is_empty(),
            "no sweep row satisfied 2 <= n and n^2 < p; no constants to report"
        );
        let report = aggregate_constants(&traces)?;
        let json = serde_json::to_string_pretty(&report)? + "\n";
        std::fs::write(path, json).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(EXIT_OK)
}
