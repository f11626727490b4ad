//! Small helpers for `u64` subset masks over carriers of at most 64 elements.

pub type Mask = u64;

#[inline]
pub fn full(n: usize) -> Mask {
    if n >= 64 {
        !0
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
pub fn bit(i: usize) -> Mask {
    1u64 << i
}

#[inline]
pub fn has(m: Mask, i: usize) -> bool {
    m >> i & 1 == 1
}

/// Indices of the set bits, ascending.
pub fn iter(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Mask {
    it.into_iter().fold(0, |m, i| m | bit(i))
}
