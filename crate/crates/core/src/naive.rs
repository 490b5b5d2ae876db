//! Reference kernels by direct enumeration over element lists.
//!
//! These never touch the bit-vector or dlog machinery and serve as the
//! agreement oracle for the fast paths.

use std::collections::{BTreeMap, BTreeSet};

use crate::set::FpSet;

fn lift(p: u32) -> impl Fn(u64) -> u32 {
    move |x| (x % p as u64) as u32
}

pub fn sumset(a: &FpSet, b: &FpSet) -> BTreeSet<u32> {
    let m = lift(a.p());
    let mut out = BTreeSet::new();
    for &x in a.elements() {
        for &y in b.elements() {
            out.insert(m(x as u64 + y as u64));
        }
    }
    out
}

pub fn difference_set(a: &FpSet, b: &FpSet) -> BTreeSet<u32> {
    let p = a.p() as u64;
    let m = lift(a.p());
    let mut out = BTreeSet::new();
    for &x in a.elements() {
        for &y in b.elements() {
            out.insert(m(x as u64 + p - y as u64));
        }
    }
    out
}

pub fn product_set(a: &FpSet, b: &FpSet) -> BTreeSet<u32> {
    let m = lift(a.p());
    let mut out = BTreeSet::new();
    for &x in a.elements() {
        for &y in b.elements() {
            out.insert(m(x as u64 * y as u64));
        }
    }
    out
}

/// `|cA ∩ dA|` by counting pairs `(x, y)` with `c x = d y` (each element of the
/// intersection has exactly one such pair when `c, d != 0`).
pub fn dilate_intersection_size(c: u32, d: u32, a: &FpSet) -> usize {
    let m = lift(a.p());
    let mut n = 0;
    for &x in a.elements() {
        for &y in a.elements() {
            if m(c as u64 * x as u64) == m(d as u64 * y as u64) {
                n += 1;
            }
        }
    }
    n
}

pub fn multiplicative_energy(a: &FpSet) -> u64 {
    let m = lift(a.p());
    let e = a.elements();
    let mut n = 0;
    for &w in e {
        for &x in e {
            for &y in e {
                for &z in e {
                    if m(w as u64 * y as u64) == m(x as u64 * z as u64) {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

pub fn additive_energy_cross(a: &FpSet, xi: u32) -> u64 {
    let m = lift(a.p());
    let e = a.elements();
    let mut n = 0;
    for &w in e {
        for &x in e {
            let lhs = m(w as u64 + xi as u64 * x as u64);
            for &y in e {
                for &z in e {
                    if lhs == m(y as u64 + xi as u64 * z as u64) {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

pub fn ratio_representation_count(a: &FpSet, xi: u32) -> u64 {
    let p = a.p() as u64;
    let m = lift(a.p());
    let e = a.elements();
    let mut n = 0;
    for &a1 in e {
        for &a2 in e {
            let lhs = m(a1 as u64 + p - a2 as u64);
            for &b1 in e {
                for &b2 in e {
                    if b1 != b2 && lhs == m(xi as u64 * m(b1 as u64 + p - b2 as u64) as u64) {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

/// `(A - A) / (A - A)` by scanning candidate quotients: `t` is present when
/// some pair of differences `u, v != 0` satisfies `u = t v`.
pub fn ratio_of_differences(a: &FpSet) -> BTreeSet<u32> {
    let m = lift(a.p());
    let diffs = difference_set(a, a);
    let nonzero: Vec<u32> = diffs.iter().copied().filter(|&d| d != 0).collect();
    let mut out = BTreeSet::new();
    if nonzero.is_empty() {
        return out;
    }
    out.insert(0);
    for t in 1..a.p() {
        if nonzero
            .iter()
            .any(|&v| diffs.contains(&m(t as u64 * v as u64)))
        {
            out.insert(t);
        }
    }
    out
}

/// Multiplicity table of `a x` over `x in A` and `b y` over `y in B`, for
/// representation-function cross checks.
pub fn representation_function(a: &FpSet, b: &FpSet) -> BTreeMap<u32, u64> {
    let m = lift(a.p());
    let mut out = BTreeMap::new();
    for &x in a.elements() {
        for &y in b.elements() {
            *out.entry(m(x as u64 + y as u64)).or_insert(0) += 1;
        }
    }
    out
}
