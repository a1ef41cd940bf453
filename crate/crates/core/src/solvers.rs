//! Exact minimum-cost rearrangement search and heuristic upper bounds.
//!
//! The exact solver runs least-cost-first search over the implicit state
//! graph whose nodes are bit patterns and whose edges are legal
//! transpositions weighted by `a + b`. States are packed into `u32` masks
//! with cell 0 in the most significant position, so integer order on masks
//! is lexicographic order on cell rows. An independent value-iteration
//! oracle relaxes cost-to-target over the full `2^N` graph at the
//! `Configuration` level and deliberately shares none of the search
//! machinery.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::config::{Color, Configuration};
use crate::moves::{self, Rearrangement, Transposition};
use crate::rational::{format_rational, Rational};

/// Value-iteration oracle cap: the full `2^N` graph is materialized.
pub const ORACLE_CELL_CAP: usize = 10;

/// Hard representation cap: states are `u32` masks.
const MASK_CELL_CAP: usize = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("{cells} cells exceed the search cap of {cap}")]
    CellCapExceeded { cells: usize, cap: usize },
    #[error("state limit exceeded; frontier holds {frontier} entries")]
    StateLimitExceeded { frontier: usize },
    #[error("{cells} cells exceed the value-iteration oracle cap of {cap}")]
    OracleCapExceeded { cells: usize, cap: usize },
    #[error("run length {len} out of range 1..={cells}")]
    RunLengthOutOfRange { len: usize, cells: usize },
    #[error("no reachable configuration satisfies the target")]
    TargetUnreachable,
    #[error("cell count {0} is not a power of two")]
    NotPowerOfTwo(usize),
}

/// What the search must reach.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// A nondecreasing configuration (whites left, blacks right).
    Sorted,
    /// Some maximal run of `color` with length at least `len` cells.
    Run { color: Color, len: usize },
}

/// Resource limits for the exact search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Maximum cell count admitted to the exact solver.
    pub cell_cap: usize,
    /// Maximum number of settled states before the search aborts.
    pub state_limit: usize,
}

impl Default for SearchLimits {
    fn default() -> SearchLimits {
        SearchLimits { cell_cap: 20, state_limit: 1 << 24 }
    }
}

/// Outcome of an exact solve: the minimal cost, a witness achieving it, and
/// the number of settled states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub cost: u64,
    pub witness: Rearrangement,
    pub explored: usize,
}

impl SolveResult {
    pub fn normalized_cost(&self) -> Rational {
        Rational::new(self.cost.into(), BigInt::from(self.witness.initial.len()))
    }
}

impl Serialize for SolveResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut record = serializer.serialize_struct("SolveResult", 5)?;
        record.serialize_field("initial", &self.witness.initial)?;
        record.serialize_field("steps", &self.witness.steps)?;
        record.serialize_field("cost_cells", &self.cost)?;
        record.serialize_field("cost_normalized", &format_rational(&self.normalized_cost()))?;
        record.serialize_field("explored", &self.explored)?;
        record.end()
    }
}

fn mask_of(config: &Configuration) -> u32 {
    config
        .cells()
        .iter()
        .fold(0u32, |mask, &cell| (mask << 1) | (cell == Color::Black) as u32)
}

fn config_of(mask: u32, cells: usize) -> Configuration {
    let row = (0..cells)
        .map(|i| {
            if mask >> (cells - 1 - i) & 1 == 1 {
                Color::Black
            } else {
                Color::White
            }
        })
        .collect();
    Configuration::new(row).expect("cells >= 1")
}

/// Target check on a packed mask. Sorted means the black cells occupy
/// exactly the lowest bits; runs are detected with shift-and chains.
fn mask_satisfies(mask: u32, cells: usize, target: &Target) -> bool {
    match *target {
        Target::Sorted => mask == low_bits(mask.count_ones() as usize),
        Target::Run { color, len } => {
            let mut bits = match color {
                Color::Black => mask,
                Color::White => !mask & low_bits(cells),
            };
            for _ in 1..len {
                bits &= bits >> 1;
            }
            bits != 0
        }
    }
}

fn low_bits(count: usize) -> u32 {
    if count == 0 {
        0
    } else {
        u32::MAX >> (32 - count)
    }
}

fn config_satisfies(config: &Configuration, target: &Target) -> bool {
    match *target {
        Target::Sorted => config.is_sorted(),
        Target::Run { color, len } => config.longest_run(color) >= len,
    }
}

fn validate_target(target: &Target, cells: usize) -> Result<(), SolveError> {
    if let Target::Run { len, .. } = *target {
        if len < 1 || len > cells {
            return Err(SolveError::RunLengthOutOfRange { len, cells });
        }
    }
    Ok(())
}

/// Exact minimum cost from `config` to any state satisfying `target`,
/// by least-cost-first search. Heap ties break on the smaller mask, and
/// successors are generated in ascending `(y, a, b)` order, so witnesses
/// are deterministic.
pub fn exact_min_cost(
    config: &Configuration,
    target: &Target,
    limits: &SearchLimits,
) -> Result<SolveResult, SolveError> {
    let n = config.len();
    let cap = limits.cell_cap.min(MASK_CELL_CAP);
    if n > cap {
        return Err(SolveError::CellCapExceeded { cells: n, cap });
    }
    validate_target(target, n)?;

    let size = 1usize << n;
    let start = mask_of(config);
    let mut dist = vec![u64::MAX; size];
    let mut settled = vec![false; size];
    let mut pred_state = vec![0u32; size];
    let mut pred_move = vec![[0u8; 3]; size];
    let mut heap: BinaryHeap<Reverse<(u64, u32)>> = BinaryHeap::new();
    let mut explored = 0usize;

    dist[start as usize] = 0;
    heap.push(Reverse((0, start)));

    while let Some(Reverse((cost, state))) = heap.pop() {
        let index = state as usize;
        if settled[index] {
            continue;
        }
        settled[index] = true;
        explored += 1;

        if mask_satisfies(state, n, target) {
            let mut steps = Vec::new();
            let mut cursor = state;
            while cursor != start {
                let [y, a, b] = pred_move[cursor as usize];
                steps.push(Transposition::new(y as usize, a as usize, b as usize));
                cursor = pred_state[cursor as usize];
            }
            steps.reverse();
            return Ok(SolveResult {
                cost,
                witness: Rearrangement::new(config.clone(), steps),
                explored,
            });
        }
        if explored > limits.state_limit {
            return Err(SolveError::StateLimitExceeded { frontier: heap.len() });
        }

        // Enumerate successors: each black-to-white boundary m spawns moves
        // (y = m - a, a, b) over the adjacent run prefixes, in ascending
        // (y, a, b) order.
        let cell = |i: usize| state >> (n - 1 - i) & 1;
        let mut m = 1;
        while m < n {
            if cell(m - 1) == 1 && cell(m) == 0 {
                let mut left = 1;
                while left < m && cell(m - 1 - left) == 1 {
                    left += 1;
                }
                let mut right = 1;
                while m + right < n && cell(m + right) == 0 {
                    right += 1;
                }
                for a in (1..=left).rev() {
                    let y = m - a;
                    for b in 1..=right {
                        let width = a + b;
                        let shift = n - y - width;
                        let region = low_bits(width) << shift;
                        let successor = (state & !region) | (low_bits(a) << shift);
                        let next_cost = cost + (a + b) as u64;
                        if next_cost < dist[successor as usize] {
                            dist[successor as usize] = next_cost;
                            pred_state[successor as usize] = state;
                            pred_move[successor as usize] = [y as u8, a as u8, b as u8];
                            heap.push(Reverse((next_cost, successor)));
                        }
                    }
                }
                m += right + 1;
            } else {
                m += 1;
            }
        }
    }

    Err(SolveError::TargetUnreachable)
}

/// Cost-to-target for every `cells`-cell configuration, by value iteration:
/// repeatedly relax over all edges of the full `2^N` graph until fixpoint.
/// Entries stay `u64::MAX` when the target is unreachable. Edges come from
/// the `moves` module at the `Configuration` level, independent of the
/// packed-mask search path.
pub fn brute_force_table(cells: usize, target: &Target) -> Result<Vec<u64>, SolveError> {
    if cells > ORACLE_CELL_CAP {
        return Err(SolveError::OracleCapExceeded { cells, cap: ORACLE_CELL_CAP });
    }
    if cells == 0 {
        return Err(SolveError::OracleCapExceeded { cells, cap: ORACLE_CELL_CAP });
    }
    validate_target(target, cells)?;

    let size = 1usize << cells;
    let mut dist: Vec<u64> = Vec::with_capacity(size);
    let mut edges: Vec<Vec<(usize, u64)>> = Vec::with_capacity(size);
    for mask in 0..size {
        let config = config_of(mask as u32, cells);
        dist.push(if config_satisfies(&config, target) { 0 } else { u64::MAX });
        edges.push(
            moves::legal_transpositions(&config)
                .into_iter()
                .map(|t| {
                    let next = moves::apply(&config, t).expect("enumerated move is legal");
                    (mask_of(&next) as usize, t.cost())
                })
                .collect(),
        );
    }

    loop {
        let mut changed = false;
        for (mask, edge_list) in edges.iter().enumerate() {
            for &(next, cost) in edge_list {
                if dist[next] != u64::MAX {
                    let candidate = dist[next] + cost;
                    if candidate < dist[mask] {
                        dist[mask] = candidate;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(dist)
}

/// Oracle value for a single configuration; see [`brute_force_table`].
pub fn brute_force_min_cost(config: &Configuration, target: &Target) -> Result<u64, SolveError> {
    let table = brute_force_table(config.len(), target)?;
    match table[mask_of(config) as usize] {
        u64::MAX => Err(SolveError::TargetUnreachable),
        cost => Ok(cost),
    }
}

/// Minimum cost in cells of forcing a run of `color` with length at least
/// `len`. Tabulating over `len = 1..=S` yields the table consumed by
/// [`crate::bounds::check_v_inequalities`].
pub fn empirical_v(
    config: &Configuration,
    len: usize,
    color: Color,
    limits: &SearchLimits,
) -> Result<u64, SolveError> {
    exact_min_cost(config, &Target::Run { color, len }, limits).map(|result| result.cost)
}

/// Divide-and-conquer upper bound: sort both halves recursively, then merge
/// them with at most one transposition swapping the left half's trailing
/// black run against the right half's leading white run. Total normalized
/// cost is at most `log2(N)`. Requires a power-of-two cell count.
pub fn merge_heuristic(config: &Configuration) -> Result<Rearrangement, SolveError> {
    let n = config.len();
    if !n.is_power_of_two() {
        return Err(SolveError::NotPowerOfTwo(n));
    }
    let mut cells = config.cells().to_vec();
    let mut steps = Vec::new();
    merge_sort_segment(&mut cells, 0, n, &mut steps);
    Ok(Rearrangement::new(config.clone(), steps))
}

fn merge_sort_segment(cells: &mut [Color], lo: usize, len: usize, steps: &mut Vec<Transposition>) {
    if len <= 1 {
        return;
    }
    let half = len / 2;
    merge_sort_segment(cells, lo, half, steps);
    merge_sort_segment(cells, lo + half, half, steps);
    let mid = lo + half;
    let a = (lo..mid).rev().take_while(|&i| cells[i] == Color::Black).count();
    let b = (mid..lo + len).take_while(|&i| cells[i] == Color::White).count();
    if a > 0 && b > 0 {
        let step = Transposition::new(mid - a, a, b);
        write_swap(cells, step);
        steps.push(step);
    }
}

fn write_swap(cells: &mut [Color], t: Transposition) {
    cells[t.y..t.y + t.b].fill(Color::White);
    cells[t.y + t.b..t.y + t.b + t.a].fill(Color::Black);
}

/// Naive baseline: repeatedly swap the leftmost maximal black run against
/// the full white run that follows it, until sorted. Costs Theta(N)
/// normalized on the alternating family.
pub fn bubble_heuristic(config: &Configuration) -> Rearrangement {
    let mut cells = config.cells().to_vec();
    let n = cells.len();
    let mut steps = Vec::new();
    loop {
        let boundary = (1..n).find(|&m| cells[m - 1] == Color::Black && cells[m] == Color::White);
        let Some(m) = boundary else { break };
        let mut a = 1;
        while a < m && cells[m - 1 - a] == Color::Black {
            a += 1;
        }
        let mut b = 1;
        while m + b < n && cells[m + b] == Color::White {
            b += 1;
        }
        let step = Transposition::new(m - a, a, b);
        write_swap(&mut cells, step);
        steps.push(step);
    }
    Rearrangement::new(config.clone(), steps)
}
