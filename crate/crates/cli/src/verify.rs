//! `verify`: run the certified argument on one set and print its JSON trace.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use sumprod_core::harness::run_theorem;
use sumprod_core::{set_from_elements, FpSet};

use crate::family::{generate, FamilyKind, FamilySpec};
use crate::{field_with_dlog, EXIT_FAILURE, EXIT_OK};

#[derive(Args, Clone, Debug)]
pub struct VerifyArgs {
    /// Field modulus (prime below 2^31).
    #[arg(long)]
    pub p: u64,
    /// Set family to generate.
    #[arg(
        long,
        value_enum,
        conflicts_with = "elements",
        required_unless_present = "elements"
    )]
    pub family: Option<FamilyKind>,
    /// Explicit comma-separated elements instead of a family.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub elements: Option<Vec<u64>>,
    /// Family size.
    #[arg(long, required_unless_present = "elements")]
    pub n: Option<usize>,
    /// First term of an arithmetic progression.
    #[arg(long, default_value_t = 1)]
    pub start: u64,
    /// Common difference of an arithmetic progression.
    #[arg(long, default_value_t = 1)]
    pub step: u64,
    /// Ratio of a geometric progression.
    #[arg(long, default_value_t = 2)]
    pub base: u64,
    /// Seed for the random family.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the trace to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn input_set(args: &VerifyArgs) -> Result<FpSet> {
    let field = field_with_dlog(args.p)?;
    match (&args.elements, args.family) {
        (Some(elems), _) => Ok(set_from_elements(&field, elems.iter().copied())?),
        (None, Some(kind)) => {
            let Some(n) = args.n else {
                bail!("--n is required with --family")
            };
            let spec = FamilySpec {
                kind,
                n,
                start: args.start,
                step: args.step,
                base: args.base,
                seed: args.seed,
            };
            generate(&spec, &field)
        }
        (None, None) => bail!("one of --family or --elements is required"),
    }
}

pub fn run(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let set = input_set(args)?;
    let trace = run_theorem(&set)?;
    let mut json = trace.to_json();
    json.push('\n');
    if let Some(path) = &args.out {
        std::fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?;
    }
    out.write_all(json.as_bytes())?;
    Ok(if trace.all_exact_hold() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}
