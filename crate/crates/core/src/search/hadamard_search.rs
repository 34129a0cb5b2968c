use std::collections::BTreeSet;
use std::time::Instant;

use log::{debug, info};

use super::autocorr::{from_mask, low_bits, pacf_mask, rotate};
use super::canon::{canonical_form, EquivalenceGroup};
use super::checkpoint::SearchState;
use super::combin::{binomial, colex_unrank, split_range};
use super::filter::theoretical_filter;
use super::{run_shards, Budget, Counters, SearchMode, SearchOptions, SearchReport, MAX_ORDER};
use crate::hadamard::{is_hadamard, order_to_h, SignVector};
use crate::{Error, Result};

/// Nodes a walker visits between budget checks.
const BUDGET_STRIDE: u64 = 1 << 12;

struct ShardResult {
    hits: Vec<u64>,
    counters: Counters,
}

/// Fixed-weight depth-first walk. Positions are decided from `n - 1` down
/// to `0`, bit 0 before bit 1, so leaves come out in increasing mask order,
/// which is colex order within a weight class.
struct Engine {
    n: usize,
    pruning: bool,
    /// `pairs[free][k - 1]` is the mask of indices `i` for which the lag-`k`
    /// term `a_i a_{(i+k) mod n}` is known once positions `free..n` are
    /// decided, with the number of such terms.
    pairs: Vec<Vec<(u64, i64)>>,
    /// Record every leaf, not just perfect ones.
    #[cfg(test)]
    accept_all: bool,
}

impl Engine {
    fn new(n: usize, pruning: bool) -> Self {
        let pairs = (0..=n)
            .map(|free| {
                let decided = low_bits(n) & !low_bits(free);
                (1..=n / 2)
                    .map(|k| {
                        let mask = decided & rotate(decided, k, n);
                        (mask, mask.count_ones() as i64)
                    })
                    .collect()
            })
            .collect();
        Self {
            n,
            pruning,
            pairs,
            #[cfg(test)]
            accept_all: false,
        }
    }

    /// Every periodic sum can still reach zero: the known part of lag `k`
    /// is at most the number of unknown terms in absolute value.
    fn feasible(&self, free: usize, x: u64) -> bool {
        let n = self.n as i64;
        self.pairs[free]
            .iter()
            .enumerate()
            .all(|(idx, &(mask, known))| {
                if known == 0 {
                    return true;
                }
                let k = idx + 1;
                let partial = known - 2 * ((x ^ rotate(x, k, self.n)) & mask).count_ones() as i64;
                partial.abs() <= n - known
            })
    }

    fn is_perfect(&self, x: u64) -> bool {
        #[cfg(test)]
        if self.accept_all {
            return true;
        }
        (1..=self.n / 2).all(|k| pacf_mask(x, k, self.n) == 0)
    }

    /// Masks of weight `weight` in `[lo, hi)`.
    fn run(&self, weight: usize, lo: u128, hi: u128, budget: &Budget) -> Option<ShardResult> {
        let mut walk = Walk {
            engine: self,
            lo,
            hi,
            budget,
            pending: 0,
            aborted: false,
            out: ShardResult {
                hits: Vec::new(),
                counters: Counters::default(),
            },
        };
        walk.visit(self.n, 0, weight, false);
        if walk.aborted || !budget.charge(walk.pending) {
            return None;
        }
        Some(walk.out)
    }
}

struct Walk<'a> {
    engine: &'a Engine,
    lo: u128,
    hi: u128,
    budget: &'a Budget,
    pending: u64,
    aborted: bool,
    out: ShardResult,
}

impl Walk<'_> {
    fn visit(&mut self, free: usize, x: u64, ones: usize, inside: bool) {
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
        if engine.pruning && free < engine.n && !engine.feasible(free, x) {
            self.out.counters.pruned_by_partial_pacf += 1;
            return;
        }
        if free == 0 {
            if engine.is_perfect(x) {
                self.out.hits.push(x);
            }
            return;
        }

        let p = free - 1;
        for bit in [0usize, 1] {
            // After placing `bit` at `p`, `p` positions stay open.
            let (child, left) = if bit == 1 {
                if ones == 0 {
                    self.out.counters.pruned_by_weight += 1;
                    continue;
                }
                (x | 1 << p, ones - 1)
            } else {
                if ones > p {
                    self.out.counters.pruned_by_weight += 1;
                    continue;
                }
                (x, ones)
            };
            let mut child_inside = inside;
            if !inside {
                let fill = low_bits(left) as u128;
                let min = child as u128 | fill;
                let max = child as u128 | fill << (p - left);
                if max < self.lo || min >= self.hi {
                    continue;
                }
                child_inside = min >= self.lo && max < self.hi;
            }
            self.visit(p, child, left, child_inside);
        }
    }
}

fn multiplicity(n: usize, weight: usize) -> u64 {
    // Negation maps weight w to n - w.
    if 2 * weight == n {
        1
    } else {
        2
    }
}

/// Searches first rows of circulant Hadamard matrices of order `n`.
///
/// For a candidate order `4h^2` only the weight class `2h^2 + h` is walked;
/// negation covers `2h^2 - h`. Orders below 4 walk every weight class up to
/// `n / 2`. Orders the theoretical filter excludes give an empty report
/// unless `confirm_excluded_orders` is set, in which case every weight class
/// up to `n / 2` is walked too.
pub fn search_circulant_hadamard(n: usize, options: &SearchOptions) -> Result<SearchReport> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::InvalidInput(format!(
            "order must be in 1..={MAX_ORDER}, got {n}"
        )));
    }
    let started = Instant::now();
    let filter = if n >= 4 {
        Some(theoretical_filter(n)?)
    } else {
        None
    };
    let all_weights: Vec<usize> = (0..=n / 2).collect();
    let (weights, confirmed) = match &filter {
        None => (all_weights, false),
        Some(v) if v.is_candidate() => {
            let h = order_to_h(n).expect("candidate orders are 4h^2") as usize;
            (vec![2 * h * h + h], false)
        }
        Some(_) if options.confirm_excluded_orders => (all_weights, true),
        Some(_) => (Vec::new(), false),
    };
    if let Some(v) = &filter {
        debug!("order {n}: {} ({})", v.status.as_str(), v.reason);
    }

    let mode = SearchMode::CirculantHadamard;
    let mut state = match &options.checkpoint {
        Some(path) if path.exists() => {
            let state = SearchState::load(path)?;
            state.check_compatible(n, mode, &weights)?;
            info!(
                "resuming order {n} at weight class {} rank {}",
                state.weight_index, state.next_range_start
            );
            state
        }
        _ => SearchState::new(n, mode, weights.clone()),
    };
    let mut survivors: BTreeSet<SignVector> = state.survivors_so_far.iter().cloned().collect();

    let engine = Engine::new(n, options.pruning);
    let budget = Budget::new(options.node_budget);
    let workers = options.worker_count.max(1);
    let mut last_progress = state.counters.nodes_visited;

    while !state.is_finished() {
        let weight = state.weights[state.weight_index];
        let total = binomial(n, weight);
        let shards = split_range(state.next_range_start, total, options.shard_count);
        let wave_len = if options.checkpoint.is_some() {
            workers * 4
        } else {
            shards.len().max(1)
        };
        let bounds = |(lo, hi): (u64, u64)| {
            let lo_mask = colex_unrank(lo, n, weight) as u128;
            let hi_mask = if hi == total {
                1u128 << n
            } else {
                colex_unrank(hi, n, weight) as u128
            };
            (lo_mask, hi_mask)
        };

        for wave in shards.chunks(wave_len) {
            let results = run_shards(wave.len(), workers, |i| {
                let (lo, hi) = bounds(wave[i]);
                engine.run(weight, lo, hi, &budget)
            });
            for (&(_, hi), result) in wave.iter().zip(results) {
                let Some(result) = result else {
                    state.survivors_so_far = survivors.into_iter().collect();
                    if let Some(path) = &options.checkpoint {
                        state.save(path)?;
                    }
                    return Err(Error::Partial {
                        reason: "node budget exhausted".into(),
                        state: Box::new(state),
                    });
                };
                for &hit in &result.hits {
                    survivors.insert(canonical_form(&from_mask(hit, n)));
                }
                state.raw_count += result.hits.len() as u64 * multiplicity(n, weight);
                state.counters.absorb(&result.counters);
                state.next_range_start = hi;
            }
            if let Some(path) = &options.checkpoint {
                state.survivors_so_far = survivors.iter().cloned().collect();
                state.save(path)?;
            }
            if let Some(every) = options.emit_progress_every {
                if state.counters.nodes_visited - last_progress >= every {
                    last_progress = state.counters.nodes_visited;
                    info!(
                        "order {n} weight {weight}: rank {}/{total}, {} nodes, {} survivors",
                        state.next_range_start,
                        state.counters.nodes_visited,
                        survivors.len()
                    );
                }
            }
        }
        state.weight_index += 1;
        state.next_range_start = 0;
    }

    for row in &survivors {
        if !is_hadamard(row) {
            return Err(Error::Verification(format!(
                "survivor ({row}) fails H H* = nI"
            )));
        }
    }
    state.survivors_so_far = survivors.into_iter().collect();
    if let Some(path) = &options.checkpoint {
        state.save(path)?;
    }

    Ok(SearchReport {
        order: n,
        mode,
        filter,
        weights,
        confirmed_empirically: confirmed,
        survivors: state.survivors_so_far,
        raw_count: state.raw_count,
        counters: state.counters,
        duration_ms: started.elapsed().as_millis() as u64,
        equivalence_group: EquivalenceGroup::ShiftNegation,
    })
}
