//! Fixed-weight bit masks in colexicographic order.
//!
//! Masks of weight `k` sorted by integer value are in colex order, and the
//! rank of a mask with set positions `c_0 < ... < c_{k-1}` is
//! `sum_i C(c_i, i + 1)`.

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial fits in u64 for n <= 64")
}

pub fn colex_rank(mask: u64) -> u64 {
    let mut rank = 0;
    let mut rest = mask;
    let mut i = 0;
    while rest != 0 {
        let c = rest.trailing_zeros() as usize;
        i += 1;
        rank += binomial(c, i);
        rest &= rest - 1;
    }
    rank
}

/// Mask of weight `k` over `n` positions with the given colex rank.
pub fn colex_unrank(mut rank: u64, n: usize, k: usize) -> u64 {
    debug_assert!(rank < binomial(n, k));
    let mut mask = 0u64;
    let mut top = n;
    for i in (1..=k).rev() {
        let mut c = top - 1;
        while binomial(c, i) > rank {
            c -= 1;
        }
        mask |= 1 << c;
        rank -= binomial(c, i);
        top = c;
    }
    mask
}

/// Next mask of the same weight (Gosper's hack).
pub fn next_same_weight(x: u64) -> Option<u64> {
    if x == 0 {
        return None;
    }
    let c = x & x.wrapping_neg();
    let (r, overflow) = x.overflowing_add(c);
    if overflow || r == 0 {
        return None;
    }
    Some((((r ^ x) >> 2) / c) | r)
}

/// Splits `[start, total)` into at most `parts` contiguous ranges of nearly
/// equal length.
pub fn split_range(start: u64, total: u64, parts: usize) -> Vec<(u64, u64)> {
    let len = total.saturating_sub(start);
    if len == 0 {
        return Vec::new();
    }
    let parts = (parts as u64).clamp(1, len);
    let base = len / parts;
    let extra = len % parts;
    let mut out = Vec::with_capacity(parts as usize);
    let mut lo = start;
    for p in 0..parts {
        let hi = lo + base + u64::from(p < extra);
        out.push((lo, hi));
        lo = hi;
    }
    out
}
