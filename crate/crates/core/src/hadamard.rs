//! Hadamard predicates on circulant ±1 rows, the regular-Hadamard profile,
//! the doubly stochastic matrix built from a circulant Hadamard matrix, and
//! the catalog of known circulant Hadamard matrices.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::circulant::{integer, CirculantMatrix, Rational};
use crate::{Error, Result};

/// First row of a circulant ±1 matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("sign vector must be non-empty".into()));
        }
        if let Some(pos) = entries.iter().position(|&e| e != 1 && e != -1) {
            return Err(Error::InvalidInput(format!(
                "entry {pos} is {}, expected -1 or 1",
                entries[pos]
            )));
        }
        Ok(Self(entries))
    }

    /// Parses a comma separated list (`1,-1,-1,-1`) or a compact sign string
    /// (`+---`).
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.contains(',') || text.ends_with('1') {
            let entries = text
                .split(',')
                .map(|t| match t.trim().replace('\u{2212}', "-").as_str() {
                    "1" | "+1" => Ok(1),
                    "-1" => Ok(-1),
                    other => Err(Error::InvalidInput(format!("bad sign entry {other:?}"))),
                })
                .collect::<Result<Vec<i8>>>()?;
            return Self::new(entries);
        }
        let entries = text
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' | '\u{2212}' => Ok(-1),
                other => Err(Error::InvalidInput(format!("bad sign character {other:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::new(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    /// Number of `+1` entries.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&e| e == 1).count()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|e| -e).collect())
    }

    /// Cyclic shift to the left by `k`: entry `i` of the result is entry
    /// `(i + k) mod n` of `self`.
    pub fn shifted(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        let n = v.len();
        v.rotate_left(k % n);
        Self(v)
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    /// Multiplies entry `i` by `(-1)^i`.
    pub fn alternated(&self) -> Self {
        Self(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &e)| if i % 2 == 1 { -e } else { e })
                .collect(),
        )
    }

    pub fn to_circulant(&self) -> CirculantMatrix {
        CirculantMatrix::new(self.0.iter().map(|&e| integer(e as i64)).collect())
            .expect("sign vectors are non-empty")
    }

    pub fn compact(&self) -> String {
        self.0
            .iter()
            .map(|&e| if e == 1 { '+' } else { '-' })
            .collect()
    }
}

impl TryFrom<Vec<i8>> for SignVector {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SignVector> for Vec<i8> {
    fn from(v: SignVector) -> Self {
        v.0
    }
}

impl FromStr for SignVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Row statistics of a regular Hadamard matrix of order `4h^2`: row sum
/// `±2h`, with `2h^2 ± h` positive and `2h^2 ∓ h` negative entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegularProfile {
    pub h: u64,
    pub sum_sign: Sign,
    pub positive_count: u64,
    pub negative_count: u64,
}

impl RegularProfile {
    pub fn order(&self) -> u64 {
        4 * self.h * self.h
    }

    pub fn row_sum(&self) -> i64 {
        let s = 2 * self.h as i64;
        match self.sum_sign {
            Sign::Plus => s,
            Sign::Minus => -s,
        }
    }

    pub fn h_is_odd(&self) -> bool {
        self.h % 2 == 1
    }
}

/// `Some(h)` when `n = 4h^2` for a positive integer `h`.
pub fn order_to_h(n: usize) -> Option<u64> {
    if n == 0 || !n.is_multiple_of(4) {
        return None;
    }
    let q = (n / 4) as u64;
    let h = q.isqrt();
    (h * h == q).then_some(h)
}

fn check_regular(row: &SignVector) -> std::result::Result<RegularProfile, String> {
    let n = row.len();
    let h = order_to_h(n).ok_or_else(|| format!("order {n} is not of the form 4h^2"))?;
    let sum = row.sum();
    let two_h = 2 * h as i64;
    let sum_sign = if sum == two_h {
        Sign::Plus
    } else if sum == -two_h {
        Sign::Minus
    } else {
        return Err(format!("row sum {sum} is not ±2h = ±{two_h}"));
    };
    let positive = row.weight() as u64;
    let negative = n as u64 - positive;
    let (big, small) = (2 * h * h + h, 2 * h * h - h);
    let expected = match sum_sign {
        Sign::Plus => (big, small),
        Sign::Minus => (small, big),
    };
    if (positive, negative) != expected {
        return Err(format!(
            "entry counts ({positive} positive, {negative} negative) do not match 2h^2±h"
        ));
    }
    Ok(RegularProfile {
        h,
        sum_sign,
        positive_count: positive,
        negative_count: negative,
    })
}

/// Profile of a row of order `4h^2` whose sum is `±2h`. Order 1 is outside
/// the regular-Hadamard setting and yields `None`.
pub fn regular_profile(row: &SignVector) -> Option<RegularProfile> {
    check_regular(row).ok()
}

/// `H H* = n I`, evaluated exactly.
pub fn is_hadamard(row: &SignVector) -> bool {
    let h = row.to_circulant();
    let gram = h.mul(&h.conj_transpose()).expect("same order");
    let n = integer(row.len() as i64);
    gram == CirculantMatrix::identity(row.len())
        .expect("non-empty")
        .scale(&n)
}

/// Replaces `H` by `-H` when needed so that the row sum is positive, i.e.
/// the row has `2h^2 + h` entries equal to `+1`. Order 1 is accepted and
/// normalized to `(1)`.
pub fn normalize_sign(row: &SignVector) -> Result<SignVector> {
    if row.len() == 1 {
        return Ok(if row.sum() > 0 {
            row.clone()
        } else {
            row.negated()
        });
    }
    let profile = check_regular(row).map_err(Error::Precondition)?;
    Ok(match profile.sum_sign {
        Sign::Plus => row.clone(),
        Sign::Minus => row.negated(),
    })
}

/// `n + sqrt(n)`, which is `2(2h^2 + h)` for `n = 4h^2` and `2` for `n = 1`.
pub fn stochastic_divisor(row: &SignVector) -> Result<Rational> {
    if row.len() == 1 {
        return Ok(integer(2));
    }
    let h = check_regular(row).map_err(Error::Precondition)?.h;
    Ok(Rational::from_integer(BigInt::from(2 * (2 * h * h + h))))
}

/// `S = (H + J) / (n + sqrt(n))` for a normalized row.
pub fn build_s(row: &SignVector) -> Result<CirculantMatrix> {
    let n = row.len();
    if n == 1 {
        if row.sum() != 1 {
            return Err(Error::Precondition(
                "order-1 row must be (1); apply normalize_sign".into(),
            ));
        }
    } else {
        let profile = check_regular(row).map_err(Error::Precondition)?;
        if profile.sum_sign != Sign::Plus {
            return Err(Error::Precondition(format!(
                "row sum is {} but S needs sum +2h = {}; apply normalize_sign",
                row.sum(),
                2 * profile.h
            )));
        }
    }
    let divisor = stochastic_divisor(row)?;
    let j = CirculantMatrix::all_ones(n)?;
    let h_plus_j = row.to_circulant().add(&j)?;
    Ok(h_plus_j.scale(&(Rational::one() / divisor)))
}

/// Non-negative entries, and every row sum and every column sum equal to 1.
/// Column sums are read off the rows of `M*`.
pub fn is_doubly_stochastic(m: &CirculantMatrix) -> bool {
    let one = Rational::one();
    m.has_nonnegative_entries() && m.row_sum() == one && m.conj_transpose().row_sum() == one
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub order: usize,
    pub first_row: SignVector,
}

/// The ten known circulant Hadamard matrices `H1 ... H10`: `±circ(1)` and
/// the eight order-4 rows with a single entry of minority sign.
pub fn catalog() -> Vec<CatalogEntry> {
    let rows: [&[i8]; 10] = [
        &[1],
        &[-1],
        &[1, -1, -1, -1],
        &[-1, 1, 1, 1],
        &[-1, 1, -1, -1],
        &[1, -1, 1, 1],
        &[-1, -1, 1, -1],
        &[1, 1, -1, 1],
        &[-1, -1, -1, 1],
        &[1, 1, 1, -1],
    ];
    rows.iter()
        .enumerate()
        .map(|(k, row)| CatalogEntry {
            name: format!("H{}", k + 1),
            order: row.len(),
            first_row: SignVector::new(row.to_vec()).expect("catalog rows are ±1"),
        })
        .collect()
}
