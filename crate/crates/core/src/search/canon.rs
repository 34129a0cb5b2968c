//! Orbit representatives. Rows are ordered lexicographically with `-1 < +1`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::hadamard::SignVector;

/// Symmetry group used to deduplicate search output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquivalenceGroup {
    /// Cyclic shifts and global negation. Preserves periodic autocorrelation.
    ShiftNegation,
    /// Negation, reversal and alternating sign flip. Preserves the absolute
    /// values of aperiodic autocorrelations.
    NegationReversalAlternation,
}

impl EquivalenceGroup {
    pub fn orbit(self, row: &SignVector) -> BTreeSet<SignVector> {
        match self {
            EquivalenceGroup::ShiftNegation => cyclic_orbit(row),
            EquivalenceGroup::NegationReversalAlternation => barker_orbit(row),
        }
    }

    pub fn canonical_form(self, row: &SignVector) -> SignVector {
        self.orbit(row)
            .into_iter()
            .next()
            .expect("orbit contains the row")
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EquivalenceGroup::ShiftNegation => "shift-negation",
            EquivalenceGroup::NegationReversalAlternation => "negation-reversal-alternation",
        }
    }
}

pub fn cyclic_orbit(row: &SignVector) -> BTreeSet<SignVector> {
    let neg = row.negated();
    (0..row.len())
        .flat_map(|k| [row.shifted(k), neg.shifted(k)])
        .collect()
}

pub fn barker_orbit(row: &SignVector) -> BTreeSet<SignVector> {
    let mut out = BTreeSet::new();
    for base in [row.clone(), row.reversed()] {
        for v in [base.clone(), base.alternated()] {
            out.insert(v.negated());
            out.insert(v);
        }
    }
    out
}

/// Least element of the orbit of `row` under cyclic shifts and negation.
pub fn canonical_form(row: &SignVector) -> SignVector {
    let neg = row.negated();
    (0..row.len())
        .flat_map(|k| [row.shifted(k), neg.shifted(k)])
        .min()
        .expect("non-empty")
}

pub fn barker_canonical_form(row: &SignVector) -> SignVector {
    EquivalenceGroup::NegationReversalAlternation.canonical_form(row)
}

/// Canonical form under the larger group that also includes decimations
/// `i -> u*i mod n` for units `u`. Decimation preserves the circulant
/// Hadamard property; it is a secondary grouping only.
pub fn decimation_canonical_form(row: &SignVector) -> SignVector {
    let n = row.len();
    let a = row.entries();
    (1..=n)
        .filter(|&u| gcd(u, n) == 1)
        .map(|u| {
            let v = (0..n).map(|i| a[(u * i) % n]).collect();
            canonical_form(&SignVector::new(v).expect("non-empty"))
        })
        .min()
        .expect("1 is a unit")
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
