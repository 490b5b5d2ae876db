//! Prime-field arithmetic and discrete-log tables.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest admissible modulus (exclusive). Membership bit-vectors are `p` bits long.
pub const MODULUS_CAP: u64 = 1 << 31;

/// Shared handle to a field; sets hold one of these.
pub type Field = Arc<PrimeField>;

/// The field `F_p`, optionally carrying a primitive root and its log/exp tables.
#[derive(Clone)]
pub struct PrimeField {
    p: u32,
    tables: Option<DlogTables>,
}

#[derive(Clone)]
struct DlogTables {
    root: u32,
    /// `dlog[x]` for `x` in `1..p`; slot 0 is unused.
    dlog: Vec<u32>,
    /// `exp[k] = root^k` for `k` in `0..p-1`.
    exp: Vec<u32>,
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimeField")
            .field("p", &self.p)
            .field("root", &self.root())
            .finish()
    }
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Eq for PrimeField {}

/// Validates `p` and returns the field without tables.
pub fn make_field(p: u64) -> Result<Field> {
    PrimeField::new(p).map(Arc::new)
}

/// Returns a copy of `field` carrying the least primitive root and its tables.
pub fn build_dlog(field: &PrimeField) -> Field {
    Arc::new(field.clone().with_dlog())
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..MODULUS_CAP).contains(&p) {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::CompositeModulus(p));
        }
        Ok(Self {
            p: p as u32,
            tables: None,
        })
    }

    pub fn with_dlog(mut self) -> Self {
        if self.tables.is_some() {
            return self;
        }
        let root = least_primitive_root(self.p);
        let order = (self.p - 1) as usize;
        let mut dlog = vec![u32::MAX; self.p as usize];
        let mut exp = Vec::with_capacity(order);
        let mut x = 1u32;
        for k in 0..order {
            exp.push(x);
            dlog[x as usize] = k as u32;
            x = self.mul(x, root);
        }
        self.tables = Some(DlogTables { root, dlog, exp });
        self
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn root(&self) -> Option<u32> {
        self.tables.as_ref().map(|t| t.root)
    }

    pub fn has_dlog(&self) -> bool {
        self.tables.is_some()
    }

    /// Exponent of nonzero `x` base the primitive root, if tables are built.
    #[inline]
    pub fn dlog(&self, x: u32) -> Option<u32> {
        let t = self.tables.as_ref()?;
        if x == 0 || x >= self.p {
            return None;
        }
        Some(t.dlog[x as usize])
    }

    /// `root^k` for `k` reduced mod `p - 1`, if tables are built.
    #[inline]
    pub fn exp(&self, k: u64) -> Option<u32> {
        let t = self.tables.as_ref()?;
        Some(t.exp[(k % (self.p as u64 - 1)) as usize])
    }

    pub fn contains(&self, x: u64) -> bool {
        x < self.p as u64
    }

    pub fn check(&self, x: u64) -> Result<u32> {
        if self.contains(x) {
            Ok(x as u32)
        } else {
            Err(Error::ElementOutOfRange { elem: x, p: self.p })
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, base: u32, mut e: u64) -> u32 {
        let m = self.p as u64;
        let mut b = base as u64 % m;
        let mut acc = 1 % m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        acc as u32
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            return None;
        }
        if let (Some(k), Some(t)) = (self.dlog(a), self.tables.as_ref()) {
            let order = self.p - 1;
            return Some(t.exp[((order - k) % order) as usize]);
        }
        Some(self.pow(a, self.p as u64 - 2))
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact below 2^64.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &q in &BASES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn least_primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let order = p as u64 - 1;
    let factors = prime_factors(order);
    (2..p)
        .find(|&g| {
            factors
                .iter()
                .all(|&q| pow_mod(g as u64, order / q, p as u64) != 1)
        })
        .expect("every prime field has a primitive root")
}
