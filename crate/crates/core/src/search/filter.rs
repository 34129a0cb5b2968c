//! Order classification before any enumeration. A circulant Hadamard matrix
//! of order `n >= 4` is regular, so `n = 4h^2`, and `h` must be odd.

use serde::{Deserialize, Serialize};

use crate::hadamard::order_to_h;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterStatus {
    ExcludedShape,
    ExcludedParity,
    Candidate,
}

impl FilterStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FilterStatus::ExcludedShape => "excluded-shape",
            FilterStatus::ExcludedParity => "excluded-parity",
            FilterStatus::Candidate => "candidate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterVerdict {
    pub order: usize,
    pub status: FilterStatus,
    pub reason: String,
}

impl FilterVerdict {
    pub fn is_candidate(&self) -> bool {
        self.status == FilterStatus::Candidate
    }
}

pub fn theoretical_filter(n: usize) -> Result<FilterVerdict> {
    if n < 4 {
        return Err(Error::OutOfScope(n));
    }
    let (status, reason) = match order_to_h(n) {
        None => (
            FilterStatus::ExcludedShape,
            format!("{n} is not of the form 4h^2"),
        ),
        Some(h) if h % 2 == 0 => (
            FilterStatus::ExcludedParity,
            format!("{n} = 4*{h}^2 with h = {h} even"),
        ),
        Some(h) => (
            FilterStatus::Candidate,
            format!(
                "{n} = 4*{h}^2 with h = {h} odd; rows have weight {} or {}",
                2 * h * h + h,
                2 * h * h - h
            ),
        ),
    };
    Ok(FilterVerdict {
        order: n,
        status,
        reason,
    })
}
