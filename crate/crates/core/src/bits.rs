//! Fixed-length membership bit-vectors and the cyclic shift-OR sumset kernel.

const W: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(W)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            words: vec![!0; len.div_ceil(W)],
            len,
        };
        v.clear_tail();
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        i < self.len && (self.words[i / W] >> (i % W)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / W] |= 1 << (i % W);
    }

    #[inline]
    pub fn unset(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / W] &= !(1 << (i % W));
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn and_count(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn or_assign(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn and_assign(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn and_not_assign(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    /// True when every set bit of `self` is also set in `other`.
    pub fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * W + t)
            })
        })
    }

    /// ORs in `src` rotated cyclically by `shift` positions: bit `i` of `src`
    /// lands on bit `(i + shift) mod len`.
    pub fn or_rotated(&mut self, src: &Self, shift: usize) {
        debug_assert_eq!(self.len, src.len);
        let n = self.len;
        if n == 0 {
            return;
        }
        let shift = shift % n;
        or_shl(&mut self.words, &src.words, shift);
        if shift > 0 {
            or_shr(&mut self.words, &src.words, n - shift);
        }
        self.clear_tail();
    }

    fn clear_tail(&mut self) {
        let r = self.len % W;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter_ones()).finish()
    }
}

/// `dst |= src << shift` over the shared word range; bits pushed past the end are dropped.
fn or_shl(dst: &mut [u64], src: &[u64], shift: usize) {
    let (ws, bs) = (shift / W, shift % W);
    for (k, d) in dst.iter_mut().skip(ws).enumerate() {
        let mut w = src[k] << bs;
        if bs > 0 && k > 0 {
            w |= src[k - 1] >> (W - bs);
        }
        *d |= w;
    }
}

/// `dst |= src >> shift`.
fn or_shr(dst: &mut [u64], src: &[u64], shift: usize) {
    let (ws, bs) = (shift / W, shift % W);
    for (k, d) in (ws..src.len()).zip(dst.iter_mut()) {
        let mut w = src[k] >> bs;
        if bs > 0 && k + 1 < src.len() {
            w |= src[k + 1] << (W - bs);
        }
        *d |= w;
    }
}

/// Support of the cyclic convolution of two indicator vectors in `Z_n`:
/// `{x + y mod n : x in shifts, y in base}`.
pub fn cyclic_sumset(shifts: impl IntoIterator<Item = usize>, base: &BitVec) -> BitVec {
    let mut out = BitVec::zeros(base.len());
    for s in shifts {
        out.or_rotated(base, s);
    }
    out
}
