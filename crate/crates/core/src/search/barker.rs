use std::collections::BTreeSet;
use std::time::Instant;

use log::info;

use super::autocorr::{apacf_mask, from_mask, low_bits};
use super::canon::{barker_canonical_form, barker_orbit, EquivalenceGroup};
use super::checkpoint::SearchState;
use super::{run_shards, Budget, Counters, SearchMode, SearchOptions, SearchReport, MAX_ORDER};
use crate::hadamard::SignVector;
use crate::search::autocorr::apacf;
use crate::{Error, Result};

const BUDGET_STRIDE: u64 = 1 << 12;

/// Positions beyond the pinned first entry that each shard fixes.
const SHARD_LEVELS: usize = 8;

/// Depth-first walk over rows with `a_0 = +1`, deciding positions from both
/// ends inward (`0, n-1, 1, n-2, ...`) so that high lags are determined
/// early.
struct Engine {
    n: usize,
    pruning: bool,
    order: Vec<usize>,
    /// `pairs[t][k - 1]`: mask of `i` whose lag-`k` term `a_i a_{i+k}` is
    /// known after the first `t` positions of `order` are decided, and the
    /// count of such terms.
    pairs: Vec<Vec<(u64, i64)>>,
}

struct ShardResult {
    rows: Vec<u64>,
    counters: Counters,
}

impl Engine {
    fn new(n: usize, pruning: bool) -> Self {
        let order: Vec<usize> = (0..n)
            .map(|t| if t % 2 == 0 { t / 2 } else { n - 1 - t / 2 })
            .collect();
        let mut decided = 0u64;
        let mut pairs = vec![Vec::new()];
        for &p in &order {
            decided |= 1 << p;
            pairs.push(
                (1..n)
                    .map(|k| {
                        let mask = decided & (decided >> k) & low_bits(n - k);
                        (mask, mask.count_ones() as i64)
                    })
                    .collect(),
            );
        }
        Self {
            n,
            pruning,
            order,
            pairs,
        }
    }

    fn feasible(&self, depth: usize, x: u64) -> bool {
        self.pairs[depth]
            .iter()
            .enumerate()
            .all(|(idx, &(mask, known))| {
                let k = idx + 1;
                let partial = known - 2 * ((x ^ (x >> k)) & mask).count_ones() as i64;
                let unknown = (self.n - k) as i64 - known;
                partial.abs() - unknown <= 1
            })
    }

    fn is_barker(&self, x: u64) -> bool {
        (1..self.n).all(|k| apacf_mask(x, k, self.n).abs() <= 1)
    }

    fn shard_count(&self) -> usize {
        1 << SHARD_LEVELS.min(self.n - 1)
    }

    fn run(&self, shard: usize, budget: &Budget) -> Option<ShardResult> {
        let mut walk = Walk {
            engine: self,
            shard,
            fixed: SHARD_LEVELS.min(self.n - 1),
            budget,
            pending: 0,
            aborted: false,
            out: ShardResult {
                rows: Vec::new(),
                counters: Counters::default(),
            },
        };
        walk.visit(1, 1);
        if walk.aborted || !budget.charge(walk.pending) {
            return None;
        }
        Some(walk.out)
    }
}

struct Walk<'a> {
    engine: &'a Engine,
    shard: usize,
    fixed: usize,
    budget: &'a Budget,
    pending: u64,
    aborted: bool,
    out: ShardResult,
}

impl Walk<'_> {
    fn visit(&mut self, depth: usize, x: u64) {
        if self.aborted {
            return;
        }
        self.out.counters.nodes_visited += 1;
        self.pending += 1;
        if self.pending == BUDGET_STRIDE {
            if !self.budget.charge(self.pending) {
                self.aborted = true;
                return;
            }
            self.pending = 0;
        }
        let engine = self.engine;
        if engine.pruning && !engine.feasible(depth, x) {
            self.out.counters.pruned_by_partial_pacf += 1;
            return;
        }
        if depth == engine.n {
            if engine.is_barker(x) {
                self.out.rows.push(x);
            }
            return;
        }
        let p = engine.order[depth];
        // Levels 1..=fixed come from the shard index.
        let bits: &[u64] = if depth <= self.fixed {
            if self.shard >> (depth - 1) & 1 == 1 {
                &[1]
            } else {
                &[0]
            }
        } else {
            &[0, 1]
        };
        for &b in bits {
            self.visit(depth + 1, x | b << p);
        }
    }
}

/// Reversal, renormalized so that the first entry is `+1`.
fn reversed_normalized(row: &SignVector) -> SignVector {
    let r = row.reversed();
    if r.entries()[0] == 1 {
        r
    } else {
        r.negated()
    }
}

/// Searches ±1 sequences of length `n` whose aperiodic autocorrelations at
/// nonzero lags all lie in `{-1, 0, 1}`.
///
/// The first entry is pinned to `+1` (negation) and a row is kept only if it
/// is not larger than its normalized reversal. Survivors are canonical under
/// negation, reversal and alternating sign flip; `raw_count` counts every
/// satisfying row of length `n`.
pub fn search_barker(n: usize, options: &SearchOptions) -> Result<SearchReport> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::InvalidInput(format!(
            "length must be in 1..={MAX_ORDER}, got {n}"
        )));
    }
    let started = Instant::now();
    let engine = Engine::new(n, options.pruning);
    let budget = Budget::new(options.node_budget);
    let shards = engine.shard_count();
    let results = run_shards(shards, options.worker_count.max(1), |i| {
        engine.run(i, &budget)
    });

    let mut counters = Counters::default();
    let mut kept = Vec::new();
    for (i, result) in results.into_iter().enumerate() {
        let Some(result) = result else {
            let mut state = SearchState::new(n, SearchMode::Barker, Vec::new());
            state.next_range_start = i as u64;
            state.counters = counters;
            state.survivors_so_far = canonical_set(&kept).into_iter().collect();
            return Err(Error::Partial {
                reason: "node budget exhausted".into(),
                state: Box::new(state),
            });
        };
        counters.absorb(&result.counters);
        for x in result.rows {
            let row = from_mask(x, n);
            if row <= reversed_normalized(&row) {
                kept.push(row);
            }
        }
    }

    let mut every_row = BTreeSet::new();
    for row in &kept {
        every_row.extend(barker_orbit(row));
    }
    let survivors: Vec<SignVector> = canonical_set(&kept).into_iter().collect();
    for row in &survivors {
        if !apacf(row).is_barker() {
            return Err(Error::Verification(format!(
                "survivor ({row}) has an aperiodic sidelobe above 1"
            )));
        }
    }
    if let Some(every) = options.emit_progress_every {
        if counters.nodes_visited >= every {
            info!(
                "length {n}: {} nodes, {} survivors",
                counters.nodes_visited,
                survivors.len()
            );
        }
    }
    Ok(SearchReport {
        order: n,
        mode: SearchMode::Barker,
        filter: None,
        weights: Vec::new(),
        confirmed_empirically: false,
        survivors,
        raw_count: every_row.len() as u64,
        counters,
        duration_ms: started.elapsed().as_millis() as u64,
        equivalence_group: EquivalenceGroup::NegationReversalAlternation,
    })
}

fn canonical_set(rows: &[SignVector]) -> BTreeSet<SignVector> {
    rows.iter().map(barker_canonical_form).collect()
}
