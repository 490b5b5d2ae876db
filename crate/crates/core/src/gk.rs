//! Quadruple selection for the two cases of the Glibichuk-Konyagin construction.
//!
//! When the ratio-of-differences set `R = (A - A)/(A - A)` misses some element,
//! a quadruple with `1 + (b1 - b2)/(a1 - a2) ∉ R` forces `|A + xi A| = |A|^2`.
//! When `R` is all of `F_p`, a ratio with few representations forces
//! `|A + xi A| >= |A|^2 / 2`.

use serde::Serialize;

use crate::arith::{
    all_ratio_representation_counts, dilate, iterated_sumset, ratio_of_differences,
};
use crate::error::{Error, Result};
use crate::set::FpSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GkCase {
    /// The ratio set is a proper subset of `F_p`.
    Nonfull,
    /// The ratio set is all of `F_p`.
    Full,
}

#[derive(Clone, Debug)]
pub struct QuadrupleChoice {
    pub a1: u32,
    pub a2: u32,
    pub b1: u32,
    pub b2: u32,
    pub case: GkCase,
    /// `1 + (b1 - b2)/(a1 - a2)` for `Nonfull`, `(a1 - a2)/(b1 - b2)` for `Full`.
    pub xi: u32,
    /// The set the quadruple was drawn from.
    pub ground: FpSet,
    /// Representation count of `xi` as a ratio of differences (`Full` only).
    pub representations: Option<u64>,
}

impl QuadrupleChoice {
    /// `a1 - a2`.
    pub fn da(&self) -> u32 {
        self.ground.field().sub(self.a1, self.a2)
    }

    /// `b1 - b2`.
    pub fn db(&self) -> u32 {
        self.ground.field().sub(self.b1, self.b2)
    }
}

fn require_two(a: &FpSet) -> Result<()> {
    if a.card() < 2 {
        Err(Error::SetTooSmall {
            need: 2,
            got: a.card(),
        })
    } else {
        Ok(())
    }
}

/// Lexicographically first `(a1, a2, b1, b2)` with `a1 != a2` and
/// `1 + (b1 - b2)/(a1 - a2)` outside the ratio set.
pub fn find_quadruple_nonfull(a1_set: &FpSet) -> Result<QuadrupleChoice> {
    require_two(a1_set)?;
    let ratios = ratio_of_differences(a1_set)?;
    find_quadruple_nonfull_in(a1_set, &ratios)
}

pub(crate) fn find_quadruple_nonfull_in(a1_set: &FpSet, ratios: &FpSet) -> Result<QuadrupleChoice> {
    if ratios.is_full() {
        return Err(Error::FullRatioSet);
    }
    let f = a1_set.field();
    let e = a1_set.elements();
    for &a1 in e {
        for &a2 in e {
            if a1 == a2 {
                continue;
            }
            let inv = f.inv(f.sub(a1, a2)).expect("nonzero difference");
            for &b1 in e {
                for &b2 in e {
                    let xi = f.add(1, f.mul(f.sub(b1, b2), inv));
                    if !ratios.contains(xi) {
                        return Ok(QuadrupleChoice {
                            a1,
                            a2,
                            b1,
                            b2,
                            case: GkCase::Nonfull,
                            xi,
                            ground: a1_set.clone(),
                            representations: None,
                        });
                    }
                }
            }
        }
    }
    unreachable!("a ratio set closed under adding 1 that contains 0 is all of F_p")
}

/// Size of the threefold set `(a1 - a2)A' + (a1 - a2)A' + (b1 - b2)A'`
/// and whether it reaches `|A'|^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkLowerBound {
    pub size: usize,
    pub target: usize,
    pub holds: bool,
}

pub fn verify_gk_lower_bound(a_prime: &FpSet, q: &QuadrupleChoice) -> Result<GkLowerBound> {
    if q.case != GkCase::Nonfull {
        return Err(Error::WrongCase);
    }
    if !a_prime.is_subset(&q.ground) {
        return Err(Error::NotSubset);
    }
    let target = a_prime.card() * a_prime.card();
    if a_prime.is_empty() {
        return Ok(GkLowerBound {
            size: 0,
            target,
            holds: true,
        });
    }
    let x = dilate(q.da(), a_prime)?;
    let y = dilate(q.db(), a_prime)?;
    let size = iterated_sumset(&[x.clone(), x, y])?.card();
    Ok(GkLowerBound {
        size,
        target,
        holds: size >= target,
    })
}

/// Ratio `xi = (a1 - a2)/(b1 - b2)` with the fewest representations, reported
/// with the lexicographically first quadruple realizing such a ratio.
pub fn find_quadruple_full(a1_set: &FpSet) -> Result<QuadrupleChoice> {
    require_two(a1_set)?;
    let ratios = ratio_of_differences(a1_set)?;
    find_quadruple_full_in(a1_set, &ratios)
}

pub(crate) fn find_quadruple_full_in(a1_set: &FpSet, ratios: &FpSet) -> Result<QuadrupleChoice> {
    if !ratios.is_full() {
        return Err(Error::NotFullRatioSet);
    }
    let n = a1_set.card();
    if (n as u64) * (n as u64) >= a1_set.p() as u64 {
        return Err(Error::SetTooLarge {
            card: n,
            p: a1_set.p(),
        });
    }
    let counts = all_ratio_representation_counts(a1_set);
    let min = counts
        .iter()
        .filter(|(&xi, _)| xi != 0)
        .map(|(_, &c)| c)
        .min()
        .expect("full ratio set has nonzero ratios");
    let f = a1_set.field();
    let e = a1_set.elements();
    for &a1 in e {
        for &a2 in e {
            if a1 == a2 {
                continue;
            }
            let num = f.sub(a1, a2);
            for &b1 in e {
                for &b2 in e {
                    if b1 == b2 {
                        continue;
                    }
                    let xi = f.div(num, f.sub(b1, b2)).expect("nonzero difference");
                    if counts[&xi] == min {
                        return Ok(QuadrupleChoice {
                            a1,
                            a2,
                            b1,
                            b2,
                            case: GkCase::Full,
                            xi,
                            ground: a1_set.clone(),
                            representations: Some(min),
                        });
                    }
                }
            }
        }
    }
    unreachable!("the minimum is attained by some realized ratio")
}
