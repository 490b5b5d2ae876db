use std::fmt;
use std::sync::OnceLock;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::field::Field;

/// A subset of `F_p`.
///
/// Membership is held as a `p`-bit vector; the sorted element list is derived
/// from it on first use. Sets are immutable once built.
#[derive(Clone)]
pub struct FpSet {
    field: Field,
    bits: BitVec,
    card: usize,
    elems: OnceLock<Vec<u32>>,
}

/// Builds a set from possibly repeated elements, each required to lie in `[0, p)`.
pub fn set_from_elements<I>(field: &Field, elems: I) -> Result<FpSet>
where
    I: IntoIterator,
    I::Item: Into<u64>,
{
    let mut bits = BitVec::zeros(field.p() as usize);
    for e in elems {
        let x = field.check(e.into())?;
        bits.set(x as usize);
    }
    Ok(FpSet::from_bits(field.clone(), bits))
}

impl FpSet {
    /// The single construction path; every other constructor funnels through here.
    pub(crate) fn from_bits(field: Field, bits: BitVec) -> Self {
        debug_assert_eq!(bits.len(), field.p() as usize);
        let card = bits.count_ones();
        Self {
            field,
            bits,
            card,
            elems: OnceLock::new(),
        }
    }

    pub fn empty(field: &Field) -> Self {
        Self::from_bits(field.clone(), BitVec::zeros(field.p() as usize))
    }

    pub fn full(field: &Field) -> Self {
        Self::from_bits(field.clone(), BitVec::ones(field.p() as usize))
    }

    pub fn singleton(field: &Field, x: u32) -> Result<Self> {
        set_from_elements(field, [x])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    #[inline]
    pub fn card(&self) -> usize {
        self.card
    }

    pub fn is_empty(&self) -> bool {
        self.card == 0
    }

    pub fn is_full(&self) -> bool {
        self.card == self.p() as usize
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.bits.get(x as usize)
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    /// Members in increasing order.
    pub fn elements(&self) -> &[u32] {
        self.elems
            .get_or_init(|| self.bits.iter_ones().map(|i| i as u32).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.elements().iter().copied()
    }

    pub fn same_field(&self, other: &Self) -> Result<()> {
        if self.field.p() == other.field.p() {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field.p(),
                right: other.field.p(),
            })
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.p() == other.p() && self.bits.is_subset(&other.bits)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let mut bits = self.bits.clone();
        bits.and_assign(&other.bits);
        Ok(Self::from_bits(self.field.clone(), bits))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let mut bits = self.bits.clone();
        bits.or_assign(&other.bits);
        Ok(Self::from_bits(self.field.clone(), bits))
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let mut bits = self.bits.clone();
        bits.and_not_assign(&other.bits);
        Ok(Self::from_bits(self.field.clone(), bits))
    }

    pub fn intersection_card(&self, other: &Self) -> Result<usize> {
        self.same_field(other)?;
        Ok(self.bits.and_count(&other.bits))
    }

    /// Same members, re-homed onto `field` (for instance one carrying dlog tables).
    pub fn with_field(&self, field: &Field) -> Result<Self> {
        if field.p() != self.p() {
            return Err(Error::FieldMismatch {
                left: self.p(),
                right: field.p(),
            });
        }
        Ok(Self::from_bits(field.clone(), self.bits.clone()))
    }

    /// Subset selected by `mask` over the sorted element list.
    pub fn select(&self, mask: u64) -> Self {
        let mut bits = BitVec::zeros(self.p() as usize);
        for (i, &x) in self.elements().iter().enumerate().take(64) {
            if mask >> i & 1 == 1 {
                bits.set(x as usize);
            }
        }
        Self::from_bits(self.field.clone(), bits)
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0)
    }
}

impl PartialEq for FpSet {
    fn eq(&self, other: &Self) -> bool {
        self.p() == other.p() && self.bits == other.bits
    }
}

impl Eq for FpSet {}

impl fmt::Debug for FpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p())?;
        f.debug_set().entries(self.iter()).finish()
    }
}
