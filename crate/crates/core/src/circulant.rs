//! Circulant matrices over exact rationals.
//!
//! A circulant matrix of order `n` is fully determined by its first row:
//! entry `(i, j)` equals `first_row[(j - i) mod n]`, so each row is the
//! previous one shifted right by one position. Sums, scalar multiples and
//! products of circulants are circulant, which lets every operation here
//! work on first rows only. The product of two circulants is the cyclic
//! convolution of their first rows.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Exact rational scalar, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Renders `p/q`, or just `p` when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::InvalidInput(format!("not a rational: {text:?}"));
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

/// Serde adapter that writes a rational as a `"p/q"` string.
pub mod ratio_str {
    use super::*;

    pub fn serialize<S: Serializer>(
        value: &Rational,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// The three constant circulants `I`, `J` and `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantKind {
    Identity,
    AllOnes,
    Zero,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CirculantMatrix {
    first_row: Vec<Rational>,
}

impl CirculantMatrix {
    /// `circ(a_1, ..., a_n)`.
    pub fn new(first_row: Vec<Rational>) -> Result<Self> {
        if first_row.is_empty() {
            return Err(Error::InvalidInput(
                "circulant first row must be non-empty".into(),
            ));
        }
        Ok(Self { first_row })
    }

    pub fn from_integers(first_row: &[i64]) -> Result<Self> {
        Self::new(first_row.iter().map(|&v| integer(v)).collect())
    }

    pub fn constant(kind: ConstantKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("order must be at least 1".into()));
        }
        let first_row = match kind {
            ConstantKind::Identity => {
                let mut row = vec![Rational::zero(); n];
                row[0] = Rational::one();
                row
            }
            ConstantKind::AllOnes => vec![Rational::one(); n],
            ConstantKind::Zero => vec![Rational::zero(); n],
        };
        Ok(Self { first_row })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::constant(ConstantKind::Identity, n)
    }

    pub fn all_ones(n: usize) -> Result<Self> {
        Self::constant(ConstantKind::AllOnes, n)
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::constant(ConstantKind::Zero, n)
    }

    pub fn order(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[Rational] {
        &self.first_row
    }

    /// Entry `(i, j)`, i.e. `first_row[(j - i) mod n]`.
    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        let n = self.order();
        &self.first_row[(j % n + n - i % n) % n]
    }

    /// Row `i` of the materialized matrix.
    pub fn row(&self, i: usize) -> Vec<Rational> {
        (0..self.order())
            .map(|j| self.entry(i, j).clone())
            .collect()
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::Dimension {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    /// Matrix product, as the cyclic convolution of the first rows:
    /// `c[k] = sum_j a[j] * b[(k - j) mod n]`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = vec![Rational::zero(); n];
        for (j, a) in self.first_row.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (m, b) in other.first_row.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[(j + m) % n] += a * b;
            }
        }
        Ok(Self { first_row: out })
    }

    /// `alpha * a + beta * b`.
    pub fn linear_combine(alpha: &Rational, a: &Self, beta: &Rational, b: &Self) -> Result<Self> {
        a.check_order(b)?;
        let first_row = a
            .first_row
            .iter()
            .zip(&b.first_row)
            .map(|(x, y)| alpha * x + beta * y)
            .collect();
        Ok(Self { first_row })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::linear_combine(&Rational::one(), self, &Rational::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Self::linear_combine(&Rational::one(), self, &-Rational::one(), other)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self {
            first_row: self.first_row.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            first_row: self.first_row.iter().map(|x| -x).collect(),
        }
    }

    /// `A*`. Entries are real, so this is the transpose:
    /// `circ(a_1, a_n, a_{n-1}, ..., a_2)`.
    pub fn conj_transpose(&self) -> Self {
        let n = self.order();
        let first_row = (0..n)
            .map(|k| self.first_row[(n - k) % n].clone())
            .collect();
        Self { first_row }
    }

    /// Sum of the entries of any row.
    pub fn row_sum(&self) -> Rational {
        self.first_row.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.first_row.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.first_row.iter().all(|x| x.is_integer())
    }

    pub fn has_nonnegative_entries(&self) -> bool {
        !self.first_row.iter().any(Signed::is_negative)
    }
}

impl fmt::Debug for CirculantMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "circ{self}")
    }
}

impl fmt::Display for CirculantMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, x) in self.first_row.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for CirculantMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.first_row.iter().map(format_rational))
    }
}

impl<'de> Deserialize<'de> for CirculantMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        let row = texts
            .iter()
            .map(|t| parse_rational(t))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Self::new(row).map_err(serde::de::Error::custom)
    }
}

/// `circ(a_1, ..., a_n)`.
pub fn circ(first_row: Vec<Rational>) -> Result<CirculantMatrix> {
    CirculantMatrix::new(first_row)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(row: &[i64]) -> CirculantMatrix {
        CirculantMatrix::from_integers(row).unwrap()
    }

    /// Plain n x n product of the materialized matrices.
    fn naive_product(a: &CirculantMatrix, b: &CirculantMatrix) -> Vec<Vec<Rational>> {
        let n = a.order();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| a.entry(i, k) * b.entry(k, j)).sum())
                    .collect()
            })
            .collect()
    }

    fn materialize(a: &CirculantMatrix) -> Vec<Vec<Rational>> {
        (0..a.order()).map(|i| a.row(i)).collect()
    }

    #[test]
    fn identity_from_first_row() {
        let id = c(&[1, 0, 0, 0]);
        assert_eq!(id, CirculantMatrix::identity(4).unwrap());
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(*id.entry(i, j), integer((i == j) as i64));
            }
        }
    }

    #[test]
    fn second_row_is_right_shift() {
        let a = circ(vec![integer(7), integer(8), integer(9)]).unwrap();
        assert_eq!(a.row(1), vec![integer(9), integer(7), integer(8)]);
        assert_eq!(a.row(2), vec![integer(8), integer(9), integer(7)]);
    }

    #[test]
    fn empty_row_rejected() {
        assert!(matches!(circ(vec![]), Err(Error::InvalidInput(_))));
        assert!(matches!(
            CirculantMatrix::zero(0),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn constants() {
        assert_eq!(CirculantMatrix::all_ones(4).unwrap(), c(&[1, 1, 1, 1]));
        assert_eq!(CirculantMatrix::identity(1).unwrap(), c(&[1]));
        assert_eq!(CirculantMatrix::zero(3).unwrap(), c(&[0, 0, 0]));
    }

    #[test]
    fn products() {
        let h3 = c(&[1, -1, -1, -1]);
        let id = CirculantMatrix::identity(4).unwrap();
        let j = CirculantMatrix::all_ones(4).unwrap();
        assert_eq!(id.mul(&h3).unwrap(), h3);
        assert_eq!(j.mul(&j).unwrap(), j.scale(&integer(4)));

        let gram = h3.mul(&h3.conj_transpose()).unwrap();
        assert_eq!(materialize(&gram), naive_product(&h3, &h3.conj_transpose()));
        assert_eq!(gram, id.scale(&integer(4)));
    }

    #[test]
    fn order_mismatch() {
        let err = c(&[1, 2]).mul(&c(&[1, 2, 3])).unwrap_err();
        assert!(matches!(err, Error::Dimension { left: 2, right: 3 }));
        let one = Rational::one();
        assert!(CirculantMatrix::linear_combine(&one, &c(&[1]), &one, &c(&[1, 2])).is_err());
    }

    #[test]
    fn linear_combinations() {
        let one = Rational::one();
        let h3 = c(&[1, -1, -1, -1]);
        let j = CirculantMatrix::all_ones(4).unwrap();
        assert_eq!(
            CirculantMatrix::linear_combine(&one, &h3, &one, &j).unwrap(),
            c(&[2, 0, 0, 0])
        );
        assert!(
            CirculantMatrix::linear_combine(&one, &h3, &-one.clone(), &h3)
                .unwrap()
                .is_zero()
        );

        let s = CirculantMatrix::linear_combine(
            &rational(1, 6),
            &c(&[0, 2, 2, 2]),
            &Rational::zero(),
            &j,
        )
        .unwrap();
        let third = rational(1, 3);
        assert_eq!(
            s.first_row(),
            &[Rational::zero(), third.clone(), third.clone(), third]
        );
        assert_eq!(s.row_sum(), Rational::one());
    }

    #[test]
    fn transpose_reverses_tail() {
        assert_eq!(c(&[1, 2, 3, 4]).conj_transpose(), c(&[1, 4, 3, 2]));
        let j = CirculantMatrix::all_ones(4).unwrap();
        assert_eq!(j.conj_transpose(), j);
        let a = c(&[5, -1, 0, 2, 9]);
        let t = a.conj_transpose();
        for i in 0..5 {
            for k in 0..5 {
                assert_eq!(t.entry(i, k), a.entry(k, i));
            }
        }
    }

    #[test]
    fn row_sums() {
        assert_eq!(CirculantMatrix::all_ones(4).unwrap().row_sum(), integer(4));
        assert_eq!(c(&[1, -1, -1, -1]).row_sum(), integer(-2));
    }

    #[test]
    fn display_and_json_use_fractions() {
        let s = circ(vec![Rational::zero(), rational(1, 3), rational(-2, 4)]).unwrap();
        assert_eq!(s.to_string(), "(0, 1/3, -1/2)");
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"["0","1/3","-1/2"]"#);
        let back: CirculantMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(parse_rational(" -6/4 ").unwrap(), rational(-3, 2));
    }
}
