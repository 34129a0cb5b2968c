//! Exhaustive search for circulant Hadamard first rows and Barker
//! sequences.
//!
//! Both searches are depth-first over bit masks (bit `i` set means entry `i`
//! is `+1`), cut subtrees whose partially determined autocorrelations can no
//! longer reach their target, and deduplicate hits by canonical form. Work is
//! split into a fixed number of shards that does not depend on the worker
//! count, and shard results are merged in shard order, so reports are
//! identical for any number of workers.

pub mod autocorr;
mod barker;
pub mod canon;
pub mod checkpoint;
pub mod combin;
pub mod filter;
mod hadamard_search;

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

pub use autocorr::{apacf, pacf, AutocorrelationSpectrum, CorrelationKind};
pub use barker::search_barker;
pub use canon::{barker_canonical_form, canonical_form, EquivalenceGroup};
pub use checkpoint::SearchState;
pub use filter::{theoretical_filter, FilterStatus, FilterVerdict};
pub use hadamard_search::search_circulant_hadamard;

use crate::hadamard::SignVector;

/// Largest order the bit-mask engines handle.
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    CirculantHadamard,
    Barker,
}

impl SearchMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchMode::CirculantHadamard => "circulant-hadamard",
            SearchMode::Barker => "barker",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub worker_count: usize,
    /// Stop with [`crate::Error::Partial`] once this many nodes were visited.
    pub node_budget: Option<u64>,
    /// For orders the theoretical filter excludes, enumerate every weight
    /// class anyway.
    pub confirm_excluded_orders: bool,
    /// Log progress each time roughly this many more nodes were visited.
    pub emit_progress_every: Option<u64>,
    /// Partial-autocorrelation pruning. Off gives the plain enumeration.
    pub pruning: bool,
    /// State file, resumed from when present and rewritten as work
    /// completes.
    pub checkpoint: Option<PathBuf>,
    pub shard_count: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            worker_count: 1,
            node_budget: None,
            confirm_excluded_orders: false,
            emit_progress_every: None,
            pruning: true,
            checkpoint: None,
            shard_count: 256,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Counters {
    pub nodes_visited: u64,
    pub pruned_by_weight: u64,
    pub pruned_by_partial_pacf: u64,
}

impl Counters {
    pub fn absorb(&mut self, other: &Counters) {
        self.nodes_visited += other.nodes_visited;
        self.pruned_by_weight += other.pruned_by_weight;
        self.pruned_by_partial_pacf += other.pruned_by_partial_pacf;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub order: usize,
    pub mode: SearchMode,
    /// Theoretical classification of the order; absent for orders below 4
    /// and for Barker runs.
    pub filter: Option<FilterVerdict>,
    /// Weight classes actually enumerated (circulant runs).
    pub weights: Vec<usize>,
    /// The enumeration ran even though the filter excluded the order.
    pub confirmed_empirically: bool,
    /// Canonical representatives, sorted.
    pub survivors: Vec<SignVector>,
    /// Satisfying rows of length `order` before canonicalization.
    pub raw_count: u64,
    pub counters: Counters,
    pub duration_ms: u64,
    pub equivalence_group: EquivalenceGroup,
}

/// Machine-readable summary of a run. `duration_ms` is left out unless
/// requested so that repeated runs produce identical bytes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub order: usize,
    pub mode: SearchMode,
    pub survivors: Vec<SignVector>,
    pub raw_count: u64,
    pub counters: Counters,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub duration_ms: Option<u64>,
    pub equivalence_group: EquivalenceGroup,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub filter: Option<FilterVerdict>,
}

impl SearchReport {
    pub fn certificate(&self, with_duration: bool) -> Certificate {
        Certificate {
            order: self.order,
            mode: self.mode,
            survivors: self.survivors.clone(),
            raw_count: self.raw_count,
            counters: self.counters,
            duration_ms: with_duration.then_some(self.duration_ms),
            equivalence_group: self.equivalence_group,
            filter: self.filter.clone(),
        }
    }

    /// Sum of the orbit sizes of the survivors under the report's group.
    pub fn orbit_total(&self) -> u64 {
        self.survivors
            .iter()
            .map(|s| self.equivalence_group.orbit(s).len() as u64)
            .sum()
    }
}

/// Runs `job(i)` for every `i` in `0..count` on `workers` threads. Results
/// come back indexed by `i`; a job returning `None` marks an unfinished
/// shard.
pub(crate) fn run_shards<T, F>(count: usize, workers: usize, job: F) -> Vec<Option<T>>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync,
{
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..count).map(|_| None).collect());
    let worker = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        if i >= count {
            return;
        }
        if let Some(out) = job(i) {
            slots.lock().expect("shard slots")[i] = Some(out);
        }
    };
    let workers = workers.clamp(1, count.max(1));
    if workers == 1 {
        worker();
    } else {
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(worker);
            }
        });
    }
    slots.into_inner().expect("shard slots")
}

/// Node budget shared by all workers of one run.
pub(crate) struct Budget {
    limit: Option<u64>,
    used: std::sync::atomic::AtomicU64,
    exhausted: std::sync::atomic::AtomicBool,
}

impl Budget {
    pub(crate) fn new(limit: Option<u64>) -> Self {
        Self {
            limit,
            used: Default::default(),
            exhausted: Default::default(),
        }
    }

    /// Records `nodes` more visits; false once the budget is spent.
    pub(crate) fn charge(&self, nodes: u64) -> bool {
        let Some(limit) = self.limit else { return true };
        let used = self.used.fetch_add(nodes, Ordering::Relaxed) + nodes;
        if used > limit {
            self.exhausted.store(true, Ordering::Relaxed);
        }
        !self.exhausted.load(Ordering::Relaxed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shards_results_are_indexed() {
        for workers in [1, 3, 8] {
            let out = run_shards(20, workers, |i| (i % 5 != 3).then_some(i * i));
            for (i, v) in out.iter().enumerate() {
                assert_eq!(*v, (i % 5 != 3).then_some(i * i));
            }
        }
        assert!(run_shards::<u8, _>(0, 4, |_| Some(1)).is_empty());
    }

    #[test]
    fn budget() {
        let b = Budget::new(Some(10));
        assert!(b.charge(5));
        assert!(b.charge(5));
        assert!(!b.charge(1));
        assert!(!b.charge(0));
        assert!(Budget::new(None).charge(u64::MAX));
    }
}
