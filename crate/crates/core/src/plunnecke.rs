//! Ruzsa triangle inequality, Plünnecke-type witnesses and their corollaries.
//!
//! Each check returns both sides of the inequality as exact rationals so the
//! caller can see how much room there was, not just whether it held.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{difference_set, dilate, iterated_sumset, sumset};
use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::set::FpSet;

/// Largest pivot set the exhaustive witness search accepts.
pub const EXHAUSTIVE_BOUND: usize = 20;

pub fn rational(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The two sides of `lhs <= rhs` and whether it held.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
}

impl BoundCheck {
    pub fn le(lhs: BigRational, rhs: BigRational) -> Self {
        let holds = lhs <= rhs;
        Self { lhs, rhs, holds }
    }
}

fn check_pivot(x: &FpSet) -> Result<()> {
    if x.is_empty() {
        Err(Error::EmptyPivot)
    } else {
        Ok(())
    }
}

/// `|Y - Z| <= |Y - X| |X - Z| / |X|`.
pub fn ruzsa_triangle_check(x: &FpSet, y: &FpSet, z: &FpSet) -> Result<BoundCheck> {
    check_pivot(x)?;
    x.same_field(y)?;
    x.same_field(z)?;
    let lhs = difference_set(y, z)?.card() as u64;
    let yx = difference_set(y, x)?.card() as u64;
    let xz = difference_set(x, z)?.card() as u64;
    Ok(BoundCheck::le(
        integer(lhs),
        rational(yx * xz, x.card() as u64),
    ))
}

/// `|B_1 + ... + B_k| <= prod |X + B_i| / |X|^(k-1)`.
pub fn cor14_bound(x: &FpSet, bs: &[FpSet]) -> Result<BoundCheck> {
    check_pivot(x)?;
    let lhs = iterated_sumset(bs)?.card() as u64;
    Ok(BoundCheck::le(integer(lhs), product_bound(x, bs)?))
}

/// `prod |X + B_i| / |X|^(k-1)`.
pub fn product_bound(x: &FpSet, bs: &[FpSet]) -> Result<BigRational> {
    let mut num = BigRational::one();
    for b in bs {
        num *= integer(sumset(x, b)?.card() as u64);
    }
    let den = num_traits::pow(integer(x.card() as u64), bs.len().saturating_sub(1));
    Ok(num / den)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Finder {
    Exhaustive,
    Greedy,
}

/// A subset `X_1` of `X` together with the measured Plünnecke constant
/// `|X_1 + B_1 + ... + B_k| / (alpha_1 ... alpha_k |X_1|)`, `alpha_i = |X + B_i| / |X|`.
#[derive(Clone, Debug)]
pub struct PlunnekeWitness {
    pub subset: FpSet,
    pub alphas: Vec<BigRational>,
    pub sumset_card: usize,
    pub measured_constant: BigRational,
    pub finder: Finder,
}

impl PlunnekeWitness {
    /// `alpha_1 ... alpha_k |X_1|`.
    pub fn bound(&self) -> BigRational {
        self.alphas.iter().product::<BigRational>() * integer(self.subset.card() as u64)
    }
}

fn alphas(x: &FpSet, bs: &[FpSet]) -> Result<Vec<BigRational>> {
    bs.iter()
        .map(|b| Ok(rational(sumset(x, b)?.card() as u64, x.card() as u64)))
        .collect()
}

fn witness(
    subset: FpSet,
    alphas: Vec<BigRational>,
    sumset_card: usize,
    finder: Finder,
) -> PlunnekeWitness {
    let scale = alphas.iter().product::<BigRational>() * integer(subset.card() as u64);
    let measured_constant = if sumset_card == 0 {
        BigRational::zero()
    } else {
        integer(sumset_card as u64) / scale
    };
    PlunnekeWitness {
        subset,
        alphas,
        sumset_card,
        measured_constant,
        finder,
    }
}

fn prepare(x: &FpSet, bs: &[FpSet]) -> Result<FpSet> {
    check_pivot(x)?;
    for b in bs {
        x.same_field(b)?;
    }
    iterated_sumset(bs)
}

/// Candidate `(|X_1 + S|, |X_1|, mask)`; smaller ratio wins, then larger
/// subset, then the lexicographically smaller sorted element list.
#[derive(Clone, Copy)]
struct Candidate {
    cover: usize,
    size: usize,
    mask: u32,
}

impl Candidate {
    fn beats(&self, other: &Self) -> bool {
        let lhs = self.cover as u64 * other.size as u64;
        let rhs = other.cover as u64 * self.size as u64;
        if lhs != rhs {
            return lhs < rhs;
        }
        if self.size != other.size {
            return self.size > other.size;
        }
        let diff = self.mask ^ other.mask;
        diff != 0 && self.mask >> diff.trailing_zeros() & 1 == 1
    }
}

/// Scans every nonempty subset of `X` for the one minimizing
/// `|X_1 + B_1 + ... + B_k| / |X_1|`.
pub fn find_plunneke_witness_exhaustive(x: &FpSet, bs: &[FpSet]) -> Result<PlunnekeWitness> {
    check_pivot(x)?;
    if x.card() > EXHAUSTIVE_BOUND {
        return Err(Error::SearchBoundExceeded {
            size: x.card(),
            bound: EXHAUSTIVE_BOUND,
        });
    }
    let s = prepare(x, bs)?;
    let translates: Vec<BitVec> = x
        .iter()
        .map(|e| {
            let mut t = BitVec::zeros(s.p() as usize);
            t.or_rotated(s.bits(), e as usize);
            t
        })
        .collect();
    let n = translates.len();
    let mut stack: Vec<BitVec> = vec![BitVec::zeros(s.p() as usize); n + 1];
    let mut best = Candidate {
        cover: usize::MAX,
        size: 0,
        mask: 0,
    };
    let mut first = true;

    // Depth-first over subsets: each node extends the union at its depth by one translate.
    fn visit(
        start: usize,
        depth: usize,
        mask: u32,
        translates: &[BitVec],
        stack: &mut [BitVec],
        best: &mut Candidate,
        first: &mut bool,
    ) {
        for i in start..translates.len() {
            let (lo, hi) = stack.split_at_mut(depth + 1);
            let cur = &mut hi[0];
            cur.clone_from(&lo[depth]);
            cur.or_assign(&translates[i]);
            let cand = Candidate {
                cover: cur.count_ones(),
                size: depth + 1,
                mask: mask | 1 << i,
            };
            if *first || cand.beats(best) {
                *best = cand;
                *first = false;
            }
            visit(i + 1, depth + 1, cand.mask, translates, stack, best, first);
        }
    }
    visit(0, 0, 0, &translates, &mut stack, &mut best, &mut first);

    Ok(witness(
        x.select(best.mask as u64),
        alphas(x, bs)?,
        best.cover,
        Finder::Exhaustive,
    ))
}

/// Steepest-descent single-element removal on `|Z + B_1 + ... + B_k| / |Z|`,
/// starting from `Z = X`. The reported constant may exceed 1.
pub fn find_plunneke_witness_greedy(x: &FpSet, bs: &[FpSet]) -> Result<PlunnekeWitness> {
    let s = prepare(x, bs)?;
    let mut current = x.clone();
    let mut cover = sumset(&current, &s)?.card();
    while current.card() > 1 {
        let mut best: Option<(FpSet, usize)> = None;
        for e in current.iter() {
            let mut bits = current.bits().clone();
            bits.unset(e as usize);
            let trial = FpSet::from_bits(current.field().clone(), bits);
            let c = sumset(&trial, &s)?.card();
            let (ref_size, ref_cover) = best
                .as_ref()
                .map_or((current.card(), cover), |(b, bc)| (b.card(), *bc));
            if c * ref_size < ref_cover * trial.card() {
                best = Some((trial, c));
            }
        }
        match best {
            Some((next, c)) => {
                current = next;
                cover = c;
            }
            None => break,
        }
    }
    Ok(witness(current, alphas(x, bs)?, cover, Finder::Greedy))
}

/// Which witness finder the refinement uses for each extracted piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FinderMode {
    /// Exhaustive when the remainder has at most [`EXHAUSTIVE_BOUND`] elements.
    Auto,
    Exhaustive,
    Greedy,
}

/// Union `X'` of witnesses extracted from shrinking remainders of `X`.
#[derive(Clone, Debug)]
pub struct RefinementResult {
    pub subset: FpSet,
    pub pieces: Vec<FpSet>,
    /// Finder used for each piece, in extraction order.
    pub finders: Vec<Finder>,
    /// `|X' + B_1 + ... + B_k|`.
    pub sumset_card: usize,
    /// `prod |X + B_i| / |X|^(k-1)`.
    pub bound: BigRational,
    /// `sumset_card / bound`.
    pub measured_constant: BigRational,
}

impl RefinementResult {
    pub fn all_exhaustive(&self) -> bool {
        self.finders.iter().all(|f| *f == Finder::Exhaustive)
    }

    /// Provable ceiling `2^(k+1)` on the measured constant under exhaustive extraction.
    pub fn constant_envelope(k: usize) -> BigRational {
        integer(1u64 << (k + 1))
    }
}

pub fn refine_large_subset(x: &FpSet, bs: &[FpSet]) -> Result<RefinementResult> {
    refine_large_subset_with(x, bs, FinderMode::Auto)
}

/// Repeatedly extracts a witness from what is left of `X` until the extracted
/// union holds more than half of `X`.
pub fn refine_large_subset_with(
    x: &FpSet,
    bs: &[FpSet],
    mode: FinderMode,
) -> Result<RefinementResult> {
    let s = prepare(x, bs)?;
    let mut remainder = x.clone();
    let mut union = FpSet::empty(x.field());
    let mut pieces = Vec::new();
    let mut finders = Vec::new();
    while 2 * union.card() <= x.card() {
        let w = match mode {
            FinderMode::Exhaustive => find_plunneke_witness_exhaustive(&remainder, bs)?,
            FinderMode::Greedy => find_plunneke_witness_greedy(&remainder, bs)?,
            FinderMode::Auto if remainder.card() <= EXHAUSTIVE_BOUND => {
                find_plunneke_witness_exhaustive(&remainder, bs)?
            }
            FinderMode::Auto => find_plunneke_witness_greedy(&remainder, bs)?,
        };
        union = union.union(&w.subset)?;
        remainder = remainder.difference(&w.subset)?;
        finders.push(w.finder);
        pieces.push(w.subset);
    }
    let sumset_card = sumset(&union, &s)?.card();
    let bound = product_bound(x, bs)?;
    let measured_constant = if sumset_card == 0 {
        BigRational::zero()
    } else {
        integer(sumset_card as u64) / &bound
    };
    Ok(RefinementResult {
        subset: union,
        pieces,
        finders,
        sumset_card,
        bound,
        measured_constant,
    })
}

/// Both sides of the sum and difference forms of the dilate bound
/// `|aA ± bA| <= |A + A|^2 / |aA ∩ bA|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cor16Check {
    pub intersection: usize,
    pub sumset_card: usize,
    pub diff_card: usize,
    pub bound: BigRational,
    pub sum_bound_holds: bool,
    pub diff_bound_holds: bool,
}

pub fn cor16_bounds(a: u32, b: u32, set: &FpSet) -> Result<Cor16Check> {
    let da = dilate(a, set)?;
    let db = dilate(b, set)?;
    let intersection = da.intersection_card(&db)?;
    if intersection == 0 {
        return Err(Error::EmptyIntersection);
    }
    let aa = sumset(set, set)?.card() as u64;
    let bound = rational(aa * aa, intersection as u64);
    let sumset_card = sumset(&da, &db)?.card();
    let diff_card = difference_set(&da, &db)?.card();
    Ok(Cor16Check {
        intersection,
        sumset_card,
        diff_card,
        sum_bound_holds: integer(sumset_card as u64) <= bound,
        diff_bound_holds: integer(diff_card as u64) <= bound,
        bound,
    })
}
