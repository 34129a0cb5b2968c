//! Periodic and aperiodic autocorrelation of ±1 rows.
//!
//! `circ(row)` is Hadamard exactly when every periodic autocorrelation at a
//! nonzero lag vanishes; that is `n I = H H*` read entrywise.

use serde::{Deserialize, Serialize};

use crate::hadamard::SignVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationKind {
    Periodic,
    Aperiodic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutocorrelationSpectrum {
    pub kind: CorrelationKind,
    /// Indexed by lag, `0..n`.
    pub values: Vec<i64>,
}

impl AutocorrelationSpectrum {
    pub fn at(&self, lag: usize) -> i64 {
        self.values[lag]
    }

    /// All nonzero lags vanish.
    pub fn is_perfect(&self) -> bool {
        self.values.iter().skip(1).all(|&v| v == 0)
    }

    /// `|value(k)| <= 1` for every `k >= 1`.
    pub fn is_barker(&self) -> bool {
        self.values.iter().skip(1).all(|v| v.abs() <= 1)
    }
}

/// `value(k) = sum_i row[i] * row[(i + k) mod n]`.
pub fn pacf(row: &SignVector) -> AutocorrelationSpectrum {
    let a = row.entries();
    let n = a.len();
    let values = (0..n)
        .map(|k| (0..n).map(|i| (a[i] * a[(i + k) % n]) as i64).sum())
        .collect();
    AutocorrelationSpectrum {
        kind: CorrelationKind::Periodic,
        values,
    }
}

/// `value(k) = sum_{i < n - k} row[i] * row[i + k]`.
pub fn apacf(row: &SignVector) -> AutocorrelationSpectrum {
    let a = row.entries();
    let n = a.len();
    let values = (0..n)
        .map(|k| (0..n - k).map(|i| (a[i] * a[i + k]) as i64).sum())
        .collect();
    AutocorrelationSpectrum {
        kind: CorrelationKind::Aperiodic,
        values,
    }
}

/// Bit `i` set means entry `i` is `+1`.
#[cfg(test)]
pub(crate) fn to_mask(row: &SignVector) -> u64 {
    row.entries()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e == 1)
        .fold(0, |m, (i, _)| m | 1 << i)
}

pub(crate) fn from_mask(mask: u64, n: usize) -> SignVector {
    SignVector::new(
        (0..n)
            .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
            .collect(),
    )
    .expect("n >= 1")
}

pub(crate) fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Bit `i` of the result is bit `(i + k) mod n` of `x`.
#[inline]
pub(crate) fn rotate(x: u64, k: usize, n: usize) -> u64 {
    if k == 0 {
        return x;
    }
    ((x >> k) | (x << (n - k))) & low_bits(n)
}

/// Periodic autocorrelation at lag `k` of a row held as a bit mask.
#[inline]
pub(crate) fn pacf_mask(x: u64, k: usize, n: usize) -> i64 {
    n as i64 - 2 * (x ^ rotate(x, k, n)).count_ones() as i64
}

#[inline]
pub(crate) fn apacf_mask(x: u64, k: usize, n: usize) -> i64 {
    let m = low_bits(n - k);
    (n - k) as i64 - 2 * ((x ^ (x >> k)) & m).count_ones() as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: &[i8]) -> SignVector {
        SignVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn periodic_examples() {
        assert_eq!(pacf(&sv(&[1, -1, -1, -1])).values, [4, 0, 0, 0]);
        assert_eq!(pacf(&sv(&[1, 1, 1, 1])).values, [4, 4, 4, 4]);
        assert!(pacf(&sv(&[1, -1, -1, -1])).is_perfect());
    }

    #[test]
    fn aperiodic_examples() {
        assert_eq!(apacf(&sv(&[1, 1, -1])).values, [3, 0, -1]);
        assert_eq!(apacf(&sv(&[1])).values, [1]);
        assert!(apacf(&sv(&[1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1])).is_barker());
    }

    #[test]
    fn mask_forms_agree() {
        for n in 1..=9 {
            for x in 0..(1u64 << n) {
                let row = from_mask(x, n);
                assert_eq!(to_mask(&row), x);
                let p = pacf(&row);
                let a = apacf(&row);
                for k in 0..n {
                    assert_eq!(pacf_mask(x, k, n), p.at(k));
                    assert_eq!(apacf_mask(x, k, n), a.at(k));
                }
            }
        }
    }

    #[test]
    fn full_width_rotation() {
        let x = 0x8000_0000_0000_0001u64;
        assert_eq!(rotate(x, 1, 64), 0xC000_0000_0000_0000);
        assert_eq!(pacf_mask(u64::MAX, 5, 64), 64);
    }
}
