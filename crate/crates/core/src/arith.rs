//! Set-valued and counting operations: sumsets, difference sets, product sets,
//! dilates, signed combinations, ratio-of-differences sets, energies and
//! representation counts.
//!
//! Empty operands give empty results. Operations that are multiplicative in
//! nature reject 0 as a dilation factor or set member where noted.

use std::collections::HashMap;

use crate::bits::{cyclic_sumset, BitVec};
use crate::error::{Error, Result};
use crate::set::FpSet;

/// `{a + b : a in A, b in B}`, by cyclic shift-OR of the larger operand's bits.
pub fn sumset(a: &FpSet, b: &FpSet) -> Result<FpSet> {
    a.same_field(b)?;
    let (small, large) = if a.card() <= b.card() { (a, b) } else { (b, a) };
    let bits = cyclic_sumset(small.iter().map(|x| x as usize), large.bits());
    Ok(FpSet::from_bits(a.field().clone(), bits))
}

/// `{-a : a in A}`.
pub fn negate(a: &FpSet) -> FpSet {
    let f = a.field();
    let mut bits = BitVec::zeros(f.p() as usize);
    for x in a.iter() {
        bits.set(f.neg(x) as usize);
    }
    FpSet::from_bits(f.clone(), bits)
}

/// `{a - b : a in A, b in B}`.
pub fn difference_set(a: &FpSet, b: &FpSet) -> Result<FpSet> {
    a.same_field(b)?;
    sumset(a, &negate(b))
}

/// `{c * a : a in A}` for nonzero `c`.
pub fn dilate(c: u32, a: &FpSet) -> Result<FpSet> {
    let f = a.field();
    let c = f.check(c as u64)?;
    if c == 0 {
        return Err(Error::ZeroDilate);
    }
    let mut bits = BitVec::zeros(f.p() as usize);
    for x in a.iter() {
        bits.set(f.mul(c, x) as usize);
    }
    Ok(FpSet::from_bits(f.clone(), bits))
}

/// `{a * b : a in A, b in B}`.
///
/// When either operand's field carries dlog tables, nonzero elements are mapped
/// to exponents, combined by a cyclic sumset in `Z_{p-1}` and mapped back.
/// A zero member contributes only the product 0.
pub fn product_set(a: &FpSet, b: &FpSet) -> Result<FpSet> {
    a.same_field(b)?;
    let tabled = if a.field().has_dlog() {
        a.field()
    } else if b.field().has_dlog() {
        b.field()
    } else {
        return Ok(product_set_naive(a, b));
    };
    let p = a.p() as usize;
    let mut out = if a.p() == 2 {
        BitVec::zeros(p)
    } else {
        let exps = |s: &FpSet| {
            let mut v = BitVec::zeros(p - 1);
            for x in s.iter().filter(|&x| x != 0) {
                v.set(tabled.dlog(x).unwrap() as usize);
            }
            v
        };
        let (ea, eb) = (exps(a), exps(b));
        let (small, large) = if ea.count_ones() <= eb.count_ones() {
            (ea, eb)
        } else {
            (eb, ea)
        };
        let sum = cyclic_sumset(small.iter_ones(), &large);
        let mut out = BitVec::zeros(p);
        for k in sum.iter_ones() {
            out.set(tabled.exp(k as u64).unwrap() as usize);
        }
        out
    };
    if a.p() == 2 && a.contains(1) && b.contains(1) {
        out.set(1);
    }
    if (a.contains_zero() && !b.is_empty()) || (b.contains_zero() && !a.is_empty()) {
        out.set(0);
    }
    Ok(FpSet::from_bits(a.field().clone(), out))
}

/// Pairwise product set by direct enumeration.
pub fn product_set_naive(a: &FpSet, b: &FpSet) -> FpSet {
    let f = a.field();
    let mut bits = BitVec::zeros(f.p() as usize);
    for x in a.iter() {
        for y in b.iter() {
            bits.set(f.mul(x, y) as usize);
        }
    }
    FpSet::from_bits(f.clone(), bits)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// The set `sign * coeff * base`.
#[derive(Clone, Debug)]
pub struct SignedDilate {
    pub coeff: u32,
    pub sign: Sign,
    pub base: FpSet,
}

impl SignedDilate {
    pub fn new(coeff: u32, sign: Sign, base: FpSet) -> Result<Self> {
        if coeff.is_multiple_of(base.p()) {
            return Err(Error::ZeroDilate);
        }
        Ok(Self { coeff, sign, base })
    }

    pub fn plus(coeff: u32, base: &FpSet) -> Result<Self> {
        Self::new(coeff, Sign::Plus, base.clone())
    }

    pub fn minus(coeff: u32, base: &FpSet) -> Result<Self> {
        Self::new(coeff, Sign::Minus, base.clone())
    }

    pub fn to_set(&self) -> Result<FpSet> {
        let f = self.base.field();
        let c = match self.sign {
            Sign::Plus => self.coeff % f.p(),
            Sign::Minus => f.neg(self.coeff % f.p()),
        };
        dilate(c, &self.base)
    }
}

/// Iterated sumset of signed dilates, left to right.
pub fn signed_combination(terms: &[SignedDilate]) -> Result<FpSet> {
    let (first, rest) = terms.split_first().ok_or(Error::EmptyInput)?;
    rest.iter().try_fold(first.to_set()?, |acc, t| {
        acc.same_field(&t.base)?;
        sumset(&acc, &t.to_set()?)
    })
}

/// Iterated sumset `B_1 + ... + B_k`.
pub fn iterated_sumset(sets: &[FpSet]) -> Result<FpSet> {
    let (first, rest) = sets.split_first().ok_or(Error::EmptyInput)?;
    rest.iter()
        .try_fold(first.clone(), |acc, s| sumset(&acc, s))
}

/// `(A - A) / (A - A)`: all `(a - b) / (c - d)` with `c != d`.
///
/// With dlog tables the quotient set of nonzero differences is a cyclic
/// difference set of exponents; without them it is a union of dilates.
pub fn ratio_of_differences(a: &FpSet) -> Result<FpSet> {
    if a.card() < 2 {
        return Err(Error::SetTooSmall {
            need: 2,
            got: a.card(),
        });
    }
    let f = a.field();
    let diffs = difference_set(a, a)?;
    let p = f.p() as usize;
    let mut out = if f.has_dlog() {
        let mut exps = BitVec::zeros(p - 1);
        for d in diffs.iter().filter(|&d| d != 0) {
            exps.set(f.dlog(d).unwrap() as usize);
        }
        let order = p - 1;
        let quot = cyclic_sumset(exps.iter_ones().map(|k| (order - k) % order), &exps);
        let mut out = BitVec::zeros(p);
        for k in quot.iter_ones() {
            out.set(f.exp(k as u64).unwrap() as usize);
        }
        out
    } else {
        let mut out = BitVec::zeros(p);
        for d in diffs.iter().filter(|&d| d != 0) {
            out.or_assign(dilate(f.inv(d).unwrap(), &diffs)?.bits());
        }
        out
    };
    out.set(0);
    Ok(FpSet::from_bits(f.clone(), out))
}

/// `|aA ∩ bA|` for nonzero `a`, `b`.
pub fn dilate_intersection_size(a: u32, b: u32, set: &FpSet) -> Result<usize> {
    let x = dilate(a, set)?;
    let y = dilate(b, set)?;
    x.intersection_card(&y)
}

fn reject_zero(a: &FpSet) -> Result<()> {
    if a.contains_zero() {
        Err(Error::ZeroInSet)
    } else {
        Ok(())
    }
}

fn sum_of_squares<I: IntoIterator<Item = u64>>(counts: I) -> u64 {
    counts.into_iter().map(|c| c * c).sum()
}

/// Multiset of values, returned as the multiplicity of each distinct value.
fn multiplicities(mut values: Vec<u32>) -> impl Iterator<Item = u64> {
    values.sort_unstable();
    values
        .chunk_by(|x, y| x == y)
        .map(|c| c.len() as u64)
        .collect::<Vec<_>>()
        .into_iter()
}

/// `#{(a, b, c, d) in A^4 : a c = b d}`.
pub fn multiplicative_energy(a: &FpSet) -> Result<u64> {
    reject_zero(a)?;
    let f = a.field();
    let products: Vec<u32> = a
        .iter()
        .flat_map(|x| a.iter().map(move |y| f.mul(x, y)))
        .collect();
    Ok(sum_of_squares(multiplicities(products)))
}

/// `#{(a, b, a', b') in A^4 : a + xi b = a' + xi b'}` for nonzero `xi`.
pub fn additive_energy_cross(a: &FpSet, xi: u32) -> Result<u64> {
    let f = a.field();
    let xi = f.check(xi as u64)?;
    if xi == 0 {
        return Err(Error::ZeroDilate);
    }
    let sums: Vec<u32> = a
        .iter()
        .flat_map(|x| a.iter().map(move |y| f.add(x, f.mul(xi, y))))
        .collect();
    Ok(sum_of_squares(multiplicities(sums)))
}

/// `r(d) = #{(a, a') in A^2 : a - a' = d}` for every realized difference `d`.
pub fn difference_counts(a: &FpSet) -> HashMap<u32, u64> {
    let f = a.field();
    let mut counts = HashMap::new();
    for x in a.iter() {
        for y in a.iter() {
            *counts.entry(f.sub(x, y)).or_insert(0) += 1;
        }
    }
    counts
}

/// `#{(a1, a2, b1, b2) in A^4 : a1 - a2 = xi (b1 - b2), b1 != b2}`.
pub fn ratio_representation_count(a: &FpSet, xi: u32) -> Result<u64> {
    if a.card() < 2 {
        return Err(Error::SetTooSmall {
            need: 2,
            got: a.card(),
        });
    }
    let f = a.field();
    let xi = f.check(xi as u64)?;
    let counts = difference_counts(a);
    Ok(counts
        .iter()
        .filter(|(&d, _)| d != 0)
        .map(|(&d, &r)| r * counts.get(&f.mul(xi, d)).copied().unwrap_or(0))
        .sum())
}

/// Representation counts of every nonzero ratio `xi = (a1 - a2) / (b1 - b2)`.
pub fn all_ratio_representation_counts(a: &FpSet) -> HashMap<u32, u64> {
    let f = a.field();
    let counts: Vec<(u32, u64)> = difference_counts(a)
        .into_iter()
        .filter(|&(d, _)| d != 0)
        .collect();
    let mut out = HashMap::new();
    for &(den, r_den) in &counts {
        let inv = f.inv(den).unwrap();
        for &(num, r_num) in &counts {
            *out.entry(f.mul(num, inv)).or_insert(0) += r_num * r_den;
        }
    }
    out
}

/// `t -> #{(x, y) in A^2 : x = t y}` for nonzero `A`; `|aA ∩ bA|` equals the
/// entry at `a / b`.
pub fn quotient_counts(a: &FpSet) -> Result<HashMap<u32, u64>> {
    reject_zero(a)?;
    let f = a.field();
    let mut out = HashMap::new();
    for y in a.iter() {
        let iy = f.inv(y).unwrap();
        for x in a.iter() {
            *out.entry(f.mul(x, iy)).or_insert(0) += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{build_dlog, make_field};
    use crate::set::set_from_elements;

    fn set(p: u64, xs: &[u32]) -> FpSet {
        set_from_elements(&make_field(p).unwrap(), xs.iter().copied()).unwrap()
    }

    fn tset(p: u64, xs: &[u32]) -> FpSet {
        set_from_elements(&build_dlog(&make_field(p).unwrap()), xs.iter().copied()).unwrap()
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(
            sumset(&set(7, &[1, 2]), &set(7, &[1, 2]))
                .unwrap()
                .elements(),
            &[2, 3, 4]
        );
        let s = sumset(&set(7, &[1, 2, 4]), &set(7, &[1, 2, 4])).unwrap();
        assert_eq!(s.elements(), &[1, 2, 3, 4, 5, 6]);
        let a = set(101, &[3, 50, 99]);
        assert_eq!(sumset(&a, &set(101, &[0])).unwrap(), a);
        assert!(sumset(&a, &set(101, &[])).unwrap().is_empty());
        assert!(matches!(
            sumset(&a, &set(7, &[1])),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn difference_examples() {
        let a = set(7, &[1, 2]);
        assert_eq!(difference_set(&a, &a).unwrap().elements(), &[0, 1, 6]);
        let b = set(7, &[1, 2, 4]);
        assert!(difference_set(&b, &b).unwrap().is_full());
    }

    #[test]
    fn product_examples() {
        for a in [set(7, &[1, 2, 4]), tset(7, &[1, 2, 4])] {
            assert_eq!(product_set(&a, &a).unwrap().elements(), &[1, 2, 4]);
        }
        let gp = tset(101, &[1, 2, 4, 8, 16]);
        assert_eq!(product_set(&gp, &gp).unwrap().card(), 9);
        let one = tset(101, &[1]);
        assert_eq!(product_set(&gp, &one).unwrap(), gp);
    }

    #[test]
    fn product_with_zero_member() {
        let a = tset(11, &[0, 3]);
        let b = tset(11, &[2, 5]);
        assert_eq!(product_set(&a, &b).unwrap().elements(), &[0, 4, 6]);
        assert_eq!(product_set(&a, &b).unwrap(), product_set_naive(&a, &b));
        assert!(product_set(&a, &tset(11, &[])).unwrap().is_empty());
    }

    #[test]
    fn products_in_f2() {
        let a = tset(2, &[0, 1]);
        assert_eq!(product_set(&a, &a).unwrap().elements(), &[0, 1]);
        let one = tset(2, &[1]);
        assert_eq!(product_set(&one, &one).unwrap().elements(), &[1]);
    }

    #[test]
    fn dilate_examples() {
        let a = set(7, &[1, 2, 4]);
        assert_eq!(dilate(2, &a).unwrap(), a);
        assert_eq!(dilate(1, &a).unwrap(), a);
        assert_eq!(dilate(0, &a).unwrap_err(), Error::ZeroDilate);
    }

    #[test]
    fn signed_combination_examples() {
        let a = set(7, &[1, 2]);
        assert_eq!(
            signed_combination(&[SignedDilate::plus(1, &a).unwrap()]).unwrap(),
            a
        );
        let d = signed_combination(&[
            SignedDilate::plus(1, &a).unwrap(),
            SignedDilate::minus(1, &a).unwrap(),
        ])
        .unwrap();
        assert_eq!(d.elements(), &[0, 1, 6]);

        let gp = set(101, &[1, 2, 4, 8, 16]);
        let c = signed_combination(&[
            SignedDilate::plus(1, &gp).unwrap(),
            SignedDilate::minus(2, &gp).unwrap(),
            SignedDilate::plus(4, &gp).unwrap(),
            SignedDilate::minus(8, &gp).unwrap(),
        ])
        .unwrap();
        assert!(c.card() >= gp.card());
        assert_eq!(signed_combination(&[]).unwrap_err(), Error::EmptyInput);
        assert_eq!(SignedDilate::plus(7, &a).unwrap_err(), Error::ZeroDilate);
    }

    #[test]
    fn ratio_set_examples() {
        for a in [set(7, &[1, 2]), tset(7, &[1, 2])] {
            assert_eq!(ratio_of_differences(&a).unwrap().elements(), &[0, 1, 6]);
        }
        assert!(ratio_of_differences(&tset(7, &[1, 2, 4]))
            .unwrap()
            .is_full());
        assert_eq!(
            ratio_of_differences(&set(7, &[3])).unwrap_err(),
            Error::SetTooSmall { need: 2, got: 1 }
        );
        let plain = set(257, &[5, 17, 40, 41, 200]);
        let tabled = tset(257, &[5, 17, 40, 41, 200]);
        let r = ratio_of_differences(&plain).unwrap();
        assert_eq!(r, ratio_of_differences(&tabled).unwrap());
        assert!(r.contains(0) && r.contains(1));
    }

    #[test]
    fn intersection_examples() {
        let a = set(7, &[1, 2, 4]);
        assert_eq!(dilate_intersection_size(3, 3, &a).unwrap(), 3);
        assert_eq!(dilate_intersection_size(1, 2, &a).unwrap(), 3);
        let gp = set(101, &[1, 2, 4, 8, 16]);
        assert_eq!(dilate_intersection_size(1, 2, &gp).unwrap(), 4);
        assert_eq!(
            dilate_intersection_size(0, 2, &gp).unwrap_err(),
            Error::ZeroDilate
        );
    }

    #[test]
    fn energy_examples() {
        assert_eq!(multiplicative_energy(&set(7, &[1, 2, 4])).unwrap(), 27);
        assert_eq!(multiplicative_energy(&set(7, &[5])).unwrap(), 1);
        assert_eq!(
            multiplicative_energy(&set(7, &[0, 5])).unwrap_err(),
            Error::ZeroInSet
        );
        assert_eq!(additive_energy_cross(&set(7, &[1, 2]), 2).unwrap(), 4);
        assert_eq!(
            additive_energy_cross(&set(7, &[1, 2]), 0).unwrap_err(),
            Error::ZeroDilate
        );
    }

    #[test]
    fn representation_examples() {
        let a = set(7, &[1, 2]);
        assert_eq!(ratio_representation_count(&a, 1).unwrap(), 2);
        // 2 is outside {0, 1, 6}
        assert_eq!(ratio_representation_count(&a, 2).unwrap(), 0);
        assert!(ratio_representation_count(&set(7, &[1]), 1).is_err());

        let b = set(101, &[1, 2, 4, 8, 16]);
        let n = b.card() as u64;
        let total: u64 = (0..101)
            .map(|xi| ratio_representation_count(&b, xi).unwrap())
            .sum();
        assert_eq!(total, n * n * (n * n - n));
        let all = all_ratio_representation_counts(&b);
        for xi in 1..101u32 {
            assert_eq!(
                all.get(&xi).copied().unwrap_or(0),
                ratio_representation_count(&b, xi).unwrap()
            );
        }
    }

    #[test]
    fn quotient_counts_give_intersections() {
        let a = set(101, &[1, 2, 4, 8, 16, 33]);
        let q = quotient_counts(&a).unwrap();
        let f = a.field();
        for x in a.iter() {
            for y in a.iter() {
                let want = dilate_intersection_size(x, y, &a).unwrap() as u64;
                let t = f.div(x, y).unwrap();
                assert_eq!(q.get(&t).copied().unwrap_or(0), want);
            }
        }
    }
}
