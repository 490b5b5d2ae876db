//! Runs the sum-product argument on a concrete set and certifies each
//! inequality it instantiates.
//!
//! Steps fall in two kinds. Exact steps are theorems with an explicit constant
//! and must hold on every input. Soft steps are the `≲` links of the chain:
//! their sides are recorded and the ratio `lhs / rhs` is reported as the
//! implied constant, but nothing is asserted about it.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{pow, ToPrimitive};
use serde::Serialize;

use crate::arith::{
    dilate, product_set, quotient_counts, ratio_of_differences, signed_combination, sumset,
    SignedDilate,
};
use crate::error::{Error, Result};
use crate::field::build_dlog;
use crate::gk::{
    find_quadruple_full_in, find_quadruple_nonfull_in, verify_gk_lower_bound, QuadrupleChoice,
};
use crate::plunnecke::{
    cor14_bound, cor16_bounds, integer, rational, refine_large_subset, RefinementResult,
};
use crate::set::FpSet;

/// Exponent the argument proves for `max(|A+A|, |AA|)` (up to log factors).
pub const TARGET_EXPONENT: f64 = 14.0 / 13.0;

/// Dyadic pigeonholing of the row `a -> |b0 A ∩ a A|`.
#[derive(Clone, Debug)]
pub struct PigeonholeResult {
    pub b0: u32,
    /// Lower end `N` of the dyadic window `[N, 2N)`.
    pub level: u64,
    pub a1: FpSet,
    /// Number of dyadic levels, `floor(log2 |A|) + 1`.
    pub level_count: u32,
    /// `sum_a |b0 A ∩ a A|`.
    pub row_sum: u64,
    /// `|b0 A ∩ a A|` for each `a` in `A`, in increasing order of `a`.
    pub row: Vec<(u32, u64)>,
}

pub fn pigeonhole_decomposition(a: &FpSet) -> Result<PigeonholeResult> {
    if a.contains_zero() {
        return Err(Error::ZeroInSet);
    }
    let n = a.card();
    if n < 2 {
        return Err(Error::SetTooSmall { need: 2, got: n });
    }
    let f = a.field();
    // |b A ∩ a A| = #{(x, y) : x = (a / b) y}
    let quotients = quotient_counts(a)?;
    let row_of = |b: u32| -> Vec<(u32, u64)> {
        let ib = f.inv(b).unwrap();
        a.iter()
            .map(|x| (x, quotients.get(&f.mul(x, ib)).copied().unwrap_or(0)))
            .collect()
    };
    let mut b0 = 0;
    let mut best = 0;
    for b in a.iter() {
        let s: u64 = row_of(b).iter().map(|&(_, v)| v).sum();
        if s > best {
            best = s;
            b0 = b;
        }
    }
    let row = row_of(b0);
    let level_count = usize::BITS - n.leading_zeros();
    let mut pick = (0u32, 0u64);
    for j in 0..level_count {
        let lo = 1u64 << j;
        let members = row.iter().filter(|&&(_, v)| lo <= v && v < 2 * lo).count() as u64;
        if members * lo >= pick.1 {
            pick = (j, members * lo);
        }
    }
    let level = 1u64 << pick.0;
    let members: Vec<u32> = row
        .iter()
        .filter(|&&(_, v)| level <= v && v < 2 * level)
        .map(|&(x, _)| x)
        .collect();
    Ok(PigeonholeResult {
        b0,
        level,
        a1: crate::set::set_from_elements(f, members)?,
        level_count,
        row_sum: best,
        row,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Lt,
}

#[derive(Clone, Debug)]
pub struct CertificateStep {
    pub name: String,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub relation: Relation,
    /// Exact steps are theorems and must hold; soft steps are only measured.
    pub exact: bool,
    /// `lhs / rhs`.
    pub constant: f64,
    pub holds: bool,
    pub formula: &'static str,
}

impl CertificateStep {
    fn new(
        name: impl Into<String>,
        lhs: BigRational,
        rhs: BigRational,
        relation: Relation,
        exact: bool,
        formula: &'static str,
    ) -> Self {
        let holds = match relation {
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
        };
        let constant = (&lhs / &rhs).to_f64().unwrap_or(f64::NAN);
        Self {
            name: name.into(),
            lhs,
            rhs,
            relation,
            exact,
            constant,
            holds,
            formula,
        }
    }

    fn exact(
        name: impl Into<String>,
        lhs: BigRational,
        rhs: BigRational,
        formula: &'static str,
    ) -> Self {
        Self::new(name, lhs, rhs, Relation::Le, true, formula)
    }

    fn soft(
        name: impl Into<String>,
        lhs: BigRational,
        rhs: BigRational,
        formula: &'static str,
    ) -> Self {
        Self::new(name, lhs, rhs, Relation::Le, false, formula)
    }

    pub fn failed(&self) -> bool {
        self.exact && !self.holds
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum TraceCase {
    Full,
    Nonfull,
    Degenerate,
}

impl TraceCase {
    pub fn as_str(self) -> &'static str {
        match self {
            TraceCase::Full => "FULL",
            TraceCase::Nonfull => "NONFULL",
            TraceCase::Degenerate => "DEGENERATE",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InputSummary {
    pub p: u32,
    pub card_a: usize,
    pub card_sumset: usize,
    pub card_productset: usize,
}

#[derive(Clone, Debug)]
pub struct ProofTrace {
    pub input: InputSummary,
    pub case: TraceCase,
    pub pigeonhole: PigeonholeResult,
    pub quadruple: Option<QuadrupleChoice>,
    /// Present in the `Nonfull` case.
    pub refinement: Option<RefinementResult>,
    pub steps: Vec<CertificateStep>,
    pub final_exponent: f64,
}

impl ProofTrace {
    pub fn step(&self, name: &str) -> Option<&CertificateStep> {
        self.steps.iter().find(|s| s.name == name)
    }

    pub fn exact_failures(&self) -> impl Iterator<Item = &CertificateStep> {
        self.steps.iter().filter(|s| s.failed())
    }

    pub fn all_exact_hold(&self) -> bool {
        self.exact_failures().next().is_none()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&TraceDoc::from(self)).expect("trace serializes")
    }
}

/// `log max(|A+A|, |AA|) / log |A|`.
pub fn sum_product_exponent(
    card_a: usize,
    card_sumset: usize,
    card_productset: usize,
) -> Option<f64> {
    if card_a < 2 {
        return None;
    }
    Some((card_sumset.max(card_productset) as f64).ln() / (card_a as f64).ln())
}

fn pow_int(base: usize, e: usize) -> BigRational {
    pow(integer(base as u64), e)
}

/// Executes the argument on `A`, which must avoid 0 and satisfy `|A|^2 < p`.
pub fn run_theorem(a: &FpSet) -> Result<ProofTrace> {
    let n = a.card();
    if a.contains_zero() {
        return Err(Error::HypothesisViolated("0 is a member of A".into()));
    }
    if n < 2 {
        return Err(Error::SetTooSmall { need: 2, got: n });
    }
    if (n as u64) * (n as u64) >= a.p() as u64 {
        return Err(Error::HypothesisViolated(format!(
            "|A|^2 = {} is not below p = {}",
            n * n,
            a.p()
        )));
    }
    let a = if a.field().has_dlog() {
        a.clone()
    } else {
        a.with_field(&build_dlog(a.field()))?
    };
    let f = a.field().clone();

    let card_sumset = sumset(&a, &a)?.card();
    let card_productset = product_set(&a, &a)?.card();
    let input = InputSummary {
        p: a.p(),
        card_a: n,
        card_sumset,
        card_productset,
    };
    let final_exponent = sum_product_exponent(n, card_sumset, card_productset).unwrap();

    let ph = pigeonhole_decomposition(&a)?;
    let big_l = ph.level_count as u64;
    let nn = ph.level;
    let m1 = ph.a1.card();
    let mut steps = vec![
        CertificateStep::exact(
            "pigeonhole.2.1",
            rational(pow_u64(n, 2), 2 * big_l * card_productset as u64),
            integer(nn),
            "|A|^2 / (2L |AA|) <= N",
        ),
        CertificateStep::exact(
            "pigeonhole.2.2",
            rational(pow_u64(n, 3), 2 * big_l * card_productset as u64),
            integer(m1 as u64 * nn),
            "|A|^3 / (2L |AA|) <= |A1| N",
        ),
    ];

    let mut trace = ProofTrace {
        input,
        case: TraceCase::Degenerate,
        pigeonhole: ph,
        quadruple: None,
        refinement: None,
        steps: Vec::new(),
        final_exponent,
    };
    if m1 < 2 {
        trace.steps = steps;
        return Ok(trace);
    }

    let a1 = trace.pigeonhole.a1.clone();
    let ratios = ratio_of_differences(&a1)?;
    let sumset_card = |m: usize| pow_int(card_sumset, m);
    let product_card = |m: usize| pow_int(card_productset, m);
    let nn_pow = |m: usize| pow(integer(nn), m);

    if ratios.is_full() {
        let q = find_quadruple_full_in(&a1, &ratios)?;
        let chain = DilateChain::compute(&a, trace.pigeonhole.b0, &q, &a1)?;
        steps.push(CertificateStep::exact(
            "gk.lower",
            rational((m1 * m1) as u64, 2),
            integer(chain.two_dilates as u64),
            "|A1|^2 / 2 <= |A1 + xi A1|",
        ));
        chain.push_steps(&mut steps);
        steps.push(CertificateStep::soft(
            "chain.product",
            pow_int(m1, 2) * nn_pow(4) * pow_int(n, 3),
            sumset_card(8),
            "|A1|^2 N^4 |A|^3 <~ |A+A|^8",
        ));
        steps.push(CertificateStep::soft(
            "eq2.3",
            nn_pow(2) * pow_int(n, 9),
            sumset_card(8) * product_card(2),
            "N^2 |A|^9 <~ |A+A|^8 |AA|^2",
        ));
        steps.push(CertificateStep::soft(
            "eq2.4",
            pow_int(n, 13),
            sumset_card(8) * product_card(4),
            "|A|^13 <~ |A+A|^8 |AA|^4",
        ));
        trace.case = TraceCase::Full;
        trace.quadruple = Some(q);
    } else {
        let q = find_quadruple_nonfull_in(&a1, &ratios)?;
        let (da, db) = (q.da(), q.db());
        let x = dilate(da, &a1)?;
        let bs = [x.clone(), dilate(db, &a1)?];
        let refined = refine_large_subset(&x, &bs)?;
        let a_prime = dilate(f.inv(da).unwrap(), &refined.subset)?;
        let chain = DilateChain::compute(&a, trace.pigeonhole.b0, &q, &a1)?;
        let gk = verify_gk_lower_bound(&a_prime, &q)?;

        steps.push(CertificateStep::new(
            "cor15.refine",
            rational(m1 as u64, 2),
            integer(refined.subset.card() as u64),
            Relation::Lt,
            true,
            "|A1| / 2 < |A'|",
        ));
        steps.push(CertificateStep::soft(
            "cor15.bound",
            integer(refined.sumset_card as u64),
            rational((card_sumset * chain.two_dilates) as u64, m1 as u64),
            "|da A' + da A1 + db A1| <~ |A+A| |da A1 + db A1| / |A1|",
        ));
        steps.push(CertificateStep::exact(
            "gk.lower",
            integer(gk.target as u64),
            integer(gk.size as u64),
            "|A'|^2 <= |da A' + da A' + db A'|",
        ));
        steps.push(CertificateStep::exact(
            "embed.refined",
            integer(gk.size as u64),
            integer(refined.sumset_card as u64),
            "|da A' + da A' + db A'| <= |da A' + da A1 + db A1|",
        ));
        chain.push_steps(&mut steps);
        steps.push(CertificateStep::soft(
            "chain.product",
            pow_int(m1, 3) * nn_pow(4) * pow_int(n, 3),
            sumset_card(9),
            "|A1|^3 N^4 |A|^3 <~ |A+A|^9",
        ));
        steps.push(CertificateStep::soft(
            "eq2.5",
            integer(nn) * pow_int(n, 12),
            sumset_card(9) * product_card(3),
            "N |A|^12 <~ |A+A|^9 |AA|^3",
        ));
        steps.push(CertificateStep::soft(
            "eq2.6",
            pow_int(n, 14),
            sumset_card(9) * product_card(4),
            "|A|^14 <~ |A+A|^9 |AA|^4",
        ));
        trace.case = TraceCase::Nonfull;
        trace.quadruple = Some(q);
        trace.refinement = Some(refined);
    }
    trace.steps = steps;
    Ok(trace)
}

fn pow_u64(base: usize, e: u32) -> u64 {
    (base as u64).pow(e)
}

/// The part of the argument common to both cases: embedding the two-dilate
/// sumset into `a1 A - a2 A + b1 A - b2 A`, bounding that with pivot `b0 A`,
/// and bounding each pivot factor by the dilate bound.
struct DilateChain {
    /// `|(a1 - a2) A1 + (b1 - b2) A1|`.
    two_dilates: usize,
    signed_card: usize,
    cor14: crate::plunnecke::BoundCheck,
    factors: Vec<(usize, BigRational)>,
}

impl DilateChain {
    fn compute(a: &FpSet, b0: u32, q: &QuadrupleChoice, a1: &FpSet) -> Result<Self> {
        let two_dilates = sumset(&dilate(q.da(), a1)?, &dilate(q.db(), a1)?)?.card();
        let terms = [
            SignedDilate::plus(q.a1, a)?,
            SignedDilate::minus(q.a2, a)?,
            SignedDilate::plus(q.b1, a)?,
            SignedDilate::minus(q.b2, a)?,
        ];
        let signed_card = signed_combination(&terms)?.card();
        let pivot = dilate(b0, a)?;
        let bs = terms
            .iter()
            .map(SignedDilate::to_set)
            .collect::<Result<Vec<_>>>()?;
        let cor14 = cor14_bound(&pivot, &bs)?;
        let mut factors = Vec::with_capacity(4);
        for t in &terms {
            let c = cor16_bounds(b0, t.coeff, a)?;
            let card = match t.sign {
                crate::arith::Sign::Plus => c.sumset_card,
                crate::arith::Sign::Minus => c.diff_card,
            };
            factors.push((card, c.bound));
        }
        Ok(Self {
            two_dilates,
            signed_card,
            cor14,
            factors,
        })
    }

    fn push_steps(&self, steps: &mut Vec<CertificateStep>) {
        steps.push(CertificateStep::exact(
            "embed.dilates",
            integer(self.two_dilates as u64),
            integer(self.signed_card as u64),
            "|da A1 + db A1| <= |a1 A - a2 A + b1 A - b2 A|",
        ));
        steps.push(CertificateStep::exact(
            "cor14.apply",
            self.cor14.lhs.clone(),
            self.cor14.rhs.clone(),
            "|a1 A - a2 A + b1 A - b2 A| <= prod |b0 A ± c A| / |b0 A|^3",
        ));
        for (i, (card, bound)) in self.factors.iter().enumerate() {
            steps.push(CertificateStep::exact(
                format!("cor16.factor.{}", i + 1),
                integer(*card as u64),
                bound.clone(),
                "|b0 A ± c A| <= |A+A|^2 / |b0 A ∩ c A|",
            ));
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TraceDoc {
    input: InputDoc,
    case: TraceCase,
    pigeonhole: PigeonholeDoc,
    quadruple: Option<QuadrupleDoc>,
    steps: Vec<StepDoc>,
    final_exponent: f64,
    target_exponent: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct InputDoc {
    p: u32,
    card_a: usize,
    card_sumset: usize,
    card_productset: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct PigeonholeDoc {
    b0: u32,
    #[serde(rename = "N")]
    n: u64,
    card_a1: usize,
    #[serde(rename = "L")]
    l: u32,
    row_sum: u64,
}

#[derive(Serialize)]
struct QuadrupleDoc {
    a1: u32,
    a2: u32,
    b1: u32,
    b2: u32,
    xi: u32,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct StepDoc {
    name: String,
    lhs: String,
    rhs: String,
    constant: f64,
    holds: bool,
    paper_eq: &'static str,
}

impl From<&ProofTrace> for TraceDoc {
    fn from(t: &ProofTrace) -> Self {
        TraceDoc {
            input: InputDoc {
                p: t.input.p,
                card_a: t.input.card_a,
                card_sumset: t.input.card_sumset,
                card_productset: t.input.card_productset,
            },
            case: t.case,
            pigeonhole: PigeonholeDoc {
                b0: t.pigeonhole.b0,
                n: t.pigeonhole.level,
                card_a1: t.pigeonhole.a1.card(),
                l: t.pigeonhole.level_count,
                row_sum: t.pigeonhole.row_sum,
            },
            quadruple: t.quadruple.as_ref().map(|q| QuadrupleDoc {
                a1: q.a1,
                a2: q.a2,
                b1: q.b1,
                b2: q.b2,
                xi: q.xi,
            }),
            steps: t
                .steps
                .iter()
                .map(|s| StepDoc {
                    name: s.name.clone(),
                    lhs: s.lhs.to_string(),
                    rhs: s.rhs.to_string(),
                    constant: s.constant,
                    holds: s.holds,
                    paper_eq: s.formula,
                })
                .collect(),
            final_exponent: t.final_exponent,
            target_exponent: TARGET_EXPONENT,
        }
    }
}

/// Spread of one step's implied constant across traces.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StepStats {
    pub count: usize,
    pub min: f64,
    pub median: f64,
    pub max: f64,
    pub exact: bool,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConstantReport {
    pub traces: usize,
    pub target_exponent: f64,
    pub exact_failures: usize,
    pub steps: BTreeMap<String, StepStats>,
    pub by_case: BTreeMap<String, CaseReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CaseReport {
    pub traces: usize,
    pub steps: BTreeMap<String, StepStats>,
}

fn step_stats<'a>(traces: impl Iterator<Item = &'a ProofTrace>) -> BTreeMap<String, StepStats> {
    let mut grouped: BTreeMap<String, (bool, usize, Vec<f64>)> = BTreeMap::new();
    for t in traces {
        for s in &t.steps {
            let e = grouped
                .entry(s.name.clone())
                .or_insert((s.exact, 0, Vec::new()));
            e.0 |= s.exact;
            e.1 += s.failed() as usize;
            e.2.push(s.constant);
        }
    }
    grouped
        .into_iter()
        .map(|(name, (exact, failures, mut cs))| {
            cs.sort_by(f64::total_cmp);
            let mid = cs.len() / 2;
            let median = if cs.len() % 2 == 1 {
                cs[mid]
            } else {
                (cs[mid - 1] + cs[mid]) / 2.0
            };
            let stats = StepStats {
                count: cs.len(),
                min: cs[0],
                median,
                max: cs[cs.len() - 1],
                exact,
                failures,
            };
            (name, stats)
        })
        .collect()
}

/// Per-step distribution of implied constants, overall and split by case.
pub fn aggregate_constants(traces: &[ProofTrace]) -> Result<ConstantReport> {
    if traces.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut by_case = BTreeMap::new();
    for case in [TraceCase::Full, TraceCase::Nonfull, TraceCase::Degenerate] {
        let members: Vec<&ProofTrace> = traces.iter().filter(|t| t.case == case).collect();
        if !members.is_empty() {
            by_case.insert(
                case.as_str().to_string(),
                CaseReport {
                    traces: members.len(),
                    steps: step_stats(members.into_iter()),
                },
            );
        }
    }
    Ok(ConstantReport {
        traces: traces.len(),
        target_exponent: TARGET_EXPONENT,
        exact_failures: traces.iter().map(|t| t.exact_failures().count()).sum(),
        steps: step_stats(traces.iter()),
        by_case,
    })
}
