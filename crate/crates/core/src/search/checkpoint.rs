//! Restartable search state, stored as JSON tagged with a format magic.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Counters, SearchMode};
use crate::hadamard::SignVector;
use crate::{Error, Result};

pub const MAGIC: &str = "CHSEARCH1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchState {
    pub magic: String,
    pub order: usize,
    pub mode: SearchMode,
    /// Weight classes of the run, in enumeration order. Empty for Barker
    /// runs.
    pub weights: Vec<usize>,
    /// Index into `weights` of the class in progress.
    pub weight_index: usize,
    /// Colex rank within the current weight class where work resumes, or the
    /// shard index for Barker runs.
    pub next_range_start: u64,
    /// Canonical survivors found so far.
    pub survivors_so_far: Vec<SignVector>,
    pub raw_count: u64,
    pub counters: Counters,
}

impl SearchState {
    pub fn new(order: usize, mode: SearchMode, weights: Vec<usize>) -> Self {
        Self {
            magic: MAGIC.to_string(),
            order,
            mode,
            weights,
            weight_index: 0,
            next_range_start: 0,
            survivors_so_far: Vec::new(),
            raw_count: 0,
            counters: Counters::default(),
        }
    }

    pub fn is_finished(&self) -> bool {
        self.weight_index >= self.weights.len()
    }

    /// Writes to a sibling temporary file and renames it over `path`.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_vec_pretty(self)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let state: Self = serde_json::from_slice(&fs::read(path)?)?;
        if state.magic != MAGIC {
            return Err(Error::Checkpoint(format!(
                "{}: bad magic {:?}, expected {MAGIC:?}",
                path.display(),
                state.magic
            )));
        }
        Ok(state)
    }

    /// Checks that a loaded state belongs to the run being resumed.
    pub fn check_compatible(
        &self,
        order: usize,
        mode: SearchMode,
        weights: &[usize],
    ) -> Result<()> {
        if self.order != order || self.mode != mode || self.weights != weights {
            return Err(Error::Checkpoint(format!(
                "checkpoint is for order {} {:?} weights {:?}, not order {order} {mode:?} weights {weights:?}",
                self.order, self.mode, self.weights
            )));
        }
        Ok(())
    }
}
