//! `bench`: median wall times of the fast kernels against direct enumeration.

use std::hint::black_box;
use std::io::Write;
use std::time::{Duration, Instant};

use anyhow::{ensure, Result};
use clap::Args;
use sumprod_core::arith::{multiplicative_energy, product_set, product_set_naive, sumset};
use sumprod_core::{build_dlog, make_field, naive, set_from_elements, FpSet};

use crate::family::random_nonzero;
use crate::{EXIT_FAILURE, EXIT_OK};

/// Naive kernels are skipped when they would enumerate more pairings (or
/// quadruples, for energy) than this; agreement is then checked on a prefix.
pub const NAIVE_LIMIT: u64 = 10_000_000;
/// The sort-based energy count holds `|A|^2` products in memory; skipped above this.
pub const ENERGY_PRODUCT_LIMIT: u64 = 20_000_000;

#[derive(Args, Clone, Debug)]
#[command(
    after_help = "Naive enumeration is skipped above 10^7 pairings (|A|*|B| > 10^7, or \
|A|^4 > 10^7 for energy); agreement is then verified on the largest prefix of A within that limit. \
Energy counting is skipped when |A|^2 > 2*10^7."
)]
pub struct BenchArgs {
    /// Field modulus (prime below 2^31).
    #[arg(long)]
    pub p: u64,
    /// Size of the random test set.
    #[arg(long)]
    pub n: usize,
    /// Timed repetitions per kernel; the median is reported.
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct Timing {
    pub kernel: &'static str,
    pub variant: &'static str,
    /// `None` when the variant was skipped.
    pub median: Option<Duration>,
}

#[derive(Clone, Debug)]
pub struct Agreement {
    pub kernel: &'static str,
    /// Size of the set the two variants were compared on.
    pub checked_on: usize,
    pub agree: bool,
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub p: u32,
    pub n: usize,
    pub reps: usize,
    pub dlog_build: Duration,
    pub agreements: Vec<Agreement>,
    pub timings: Vec<Timing>,
}

impl BenchReport {
    pub fn all_agree(&self) -> bool {
        self.agreements.iter().all(|a| a.agree)
    }

    pub fn median(&self, kernel: &str, variant: &str) -> Option<Duration> {
        self.timings
            .iter()
            .find(|t| t.kernel == kernel && t.variant == variant)
            .and_then(|t| t.median)
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "p = {}, n = {}, reps = {}, dlog tables built in {:.3} ms\n\n",
            self.p,
            self.n,
            self.reps,
            ms(self.dlog_build)
        );
        s += "agreement:\n";
        for a in &self.agreements {
            let verdict = if a.agree { "agree" } else { "DISAGREE" };
            s += &format!("  {:<8} on |A| = {:<6} {verdict}\n", a.kernel, a.checked_on);
        }
        s += &format!("\n{:<8} {:<12} {:>12}\n", "kernel", "variant", "median ms");
        for t in &self.timings {
            let cell = t
                .median
                .map(|d| format!("{:.3}", ms(d)))
                .unwrap_or_else(|| "skipped".into());
            s += &format!("{:<8} {:<12} {:>12}\n", t.kernel, t.variant, cell);
        }
        s
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn median_time(reps: usize, mut f: impl FnMut()) -> Duration {
    let mut times: Vec<Duration> = (0..reps)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed()
        })
        .collect();
    times.sort();
    times[times.len() / 2]
}

/// Largest `k <= n` with `k^e <= NAIVE_LIMIT`.
fn naive_prefix(n: usize, e: u32) -> usize {
    let mut k = n;
    while k > 1 && (k as u64).pow(e) > NAIVE_LIMIT {
        k -= 1;
    }
    k
}

fn prefix(a: &FpSet, k: usize) -> Result<FpSet> {
    Ok(set_from_elements(
        a.field(),
        a.elements()[..k].iter().copied(),
    )?)
}

pub fn bench(p: u64, n: usize, reps: usize, seed: u64) -> Result<BenchReport> {
    ensure!(reps >= 1, "--reps must be at least 1");
    let plain = make_field(p)?;
    ensure!(n >= 1 && n < plain.p() as usize, "--n must lie in 1..{p}");
    let t = Instant::now();
    let field = build_dlog(&plain);
    let dlog_build = t.elapsed();
    let a = set_from_elements(&field, random_nonzero(field.p(), n, seed))?;

    let mut agreements = Vec::new();
    let k2 = naive_prefix(n, 2);
    let sub = prefix(&a, k2)?;
    agreements.push(Agreement {
        kernel: "sumset",
        checked_on: k2,
        agree: sumset(&sub, &sub)?.iter().eq(naive::sumset(&sub, &sub)),
    });
    agreements.push(Agreement {
        kernel: "product",
        checked_on: k2,
        agree: product_set(&sub, &sub)? == product_set_naive(&sub, &sub),
    });
    let k4 = naive_prefix(n, 4);
    let sub4 = prefix(&a, k4)?;
    agreements.push(Agreement {
        kernel: "energy",
        checked_on: k4,
        agree: multiplicative_energy(&sub4)? == naive::multiplicative_energy(&sub4),
    });

    let naive_pairs = (n as u64).pow(2) <= NAIVE_LIMIT;
    let naive_quads = (n as u64).checked_pow(4).is_some_and(|q| q <= NAIVE_LIMIT);
    let energy_ok = (n as u64).pow(2) <= ENERGY_PRODUCT_LIMIT;
    let time_if = |run: bool, f: &mut dyn FnMut()| run.then(|| median_time(reps, f));
    let timings = vec![
        Timing {
            kernel: "sumset",
            variant: "bit-vector",
            median: Some(median_time(reps, || {
                let _ = black_box(sumset(&a, &a));
            })),
        },
        Timing {
            kernel: "sumset",
            variant: "naive",
            median: time_if(naive_pairs, &mut || {
                let _ = black_box(naive::sumset(&a, &a));
            }),
        },
        Timing {
            kernel: "product",
            variant: "dlog",
            median: Some(median_time(reps, || {
                let _ = black_box(product_set(&a, &a));
            })),
        },
        Timing {
            kernel: "product",
            variant: "naive",
            median: time_if(naive_pairs, &mut || {
                let _ = black_box(product_set_naive(&a, &a));
            }),
        },
        Timing {
            kernel: "energy",
            variant: "sort-count",
            median: time_if(energy_ok, &mut || {
                let _ = black_box(multiplicative_energy(&a));
            }),
        },
        Timing {
            kernel: "energy",
            variant: "naive",
            median: time_if(naive_quads, &mut || {
                let _ = black_box(naive::multiplicative_energy(&a));
            }),
        },
    ];
    Ok(BenchReport {
        p: field.p(),
        n,
        reps,
        dlog_build,
        agreements,
        timings,
    })
}

pub fn run(args: &BenchArgs, out: &mut dyn Write) -> Result<i32> {
    // agreement is checked inside `bench` before any timing starts
    let report = bench(args.p, args.n, args.reps, args.seed)?;
    out.write_all(report.render().as_bytes())?;
    Ok(if report.all_agree() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}
