//! The elementary transposition engine.
//!
//! A transposition `(y, a, b)` swaps a black block of `a` cells starting at
//! cell `y` with the white block of `b` cells that follows it, at cost
//! `a + b` cells. Blocks may be sub-blocks of maximal runs. This module owns
//! legality, application, enumeration, and total replay validation of full
//! rearrangements.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{Color, Configuration};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("transposition ({y},{a},{b}) has an empty block; both block lengths must be positive")]
    EmptyBlock { y: usize, a: usize, b: usize },
    #[error("transposition ({y},{a},{b}) is illegal at cell {position}")]
    Illegal { y: usize, a: usize, b: usize, position: usize },
}

/// A black-block/white-block swap in cell units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transposition {
    /// Leftmost cell of the swapped region.
    pub y: usize,
    /// Length of the black block `[y, y+a)`.
    pub a: usize,
    /// Length of the white block `[y+a, y+a+b)`.
    pub b: usize,
}

impl Transposition {
    pub fn new(y: usize, a: usize, b: usize) -> Transposition {
        Transposition { y, a, b }
    }

    /// Cost in cell units; divide by `N` only for display.
    pub fn cost(&self) -> u64 {
        (self.a + self.b) as u64
    }
}

/// True iff cells `[y, y+a)` are all black and `[y+a, y+a+b)` all white.
/// Out-of-range regions and empty blocks are simply illegal.
pub fn is_legal(config: &Configuration, t: Transposition) -> bool {
    first_offending_cell(config, t).is_none() && t.a >= 1 && t.b >= 1
}

fn first_offending_cell(config: &Configuration, t: Transposition) -> Option<usize> {
    let n = config.len();
    let cells = config.cells();
    let black_part = (t.y..t.y + t.a).map(|k| (k, Color::Black));
    let white_part = (t.y + t.a..t.y + t.a + t.b).map(|k| (k, Color::White));
    black_part
        .chain(white_part)
        .find(|&(k, expected)| k >= n || cells[k] != expected)
        .map(|(k, _)| k)
}

/// Apply a transposition: the region `[y, y+a+b)` becomes `b` white cells
/// followed by `a` black cells; everything else is untouched.
pub fn apply(config: &Configuration, t: Transposition) -> Result<Configuration, MoveError> {
    if t.a == 0 || t.b == 0 {
        return Err(MoveError::EmptyBlock { y: t.y, a: t.a, b: t.b });
    }
    if let Some(position) = first_offending_cell(config, t) {
        return Err(MoveError::Illegal { y: t.y, a: t.a, b: t.b, position });
    }
    let mut cells = config.cells().to_vec();
    cells[t.y..t.y + t.b].fill(Color::White);
    cells[t.y + t.b..t.y + t.b + t.a].fill(Color::Black);
    Ok(Configuration::new(cells).expect("apply preserves the cell count"))
}

/// Enumerate exactly the legal transpositions, in ascending `(y, a, b)`
/// order: scan each black-to-white boundary at cell `m` and emit every
/// `a` up to the black run ending at `m` and every `b` up to the white run
/// starting at `m`, with `y = m - a`.
pub fn legal_transpositions(config: &Configuration) -> Vec<Transposition> {
    let cells = config.cells();
    let n = cells.len();
    let mut out = Vec::new();
    let mut m = 1;
    while m < n {
        if cells[m - 1] == Color::Black && cells[m] == Color::White {
            let mut left = 1;
            while left < m && cells[m - 1 - left] == Color::Black {
                left += 1;
            }
            let mut right = 1;
            while m + right < n && cells[m + right] == Color::White {
                right += 1;
            }
            for a in (1..=left).rev() {
                for b in 1..=right {
                    out.push(Transposition::new(m - a, a, b));
                }
            }
            // The next black-to-white boundary lies beyond the white run.
            m += right + 1;
        } else {
            m += 1;
        }
    }
    out
}

/// An initial configuration together with an ordered move list. The struct
/// itself enforces nothing; [`Rearrangement::validate`] replays it totally,
/// so adversarial inputs produce reports instead of panics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rearrangement {
    pub initial: Configuration,
    pub steps: Vec<Transposition>,
}

/// Replay outcome for a rearrangement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    /// Every step was legal in sequence.
    pub valid: bool,
    /// Valid and the final configuration is sorted.
    pub complete: bool,
    /// Total cost in cells of the executed legal prefix.
    pub gamma: u64,
    /// Index of the first illegal step, when invalid.
    pub failing_step: Option<usize>,
    /// Configuration after the executed legal prefix.
    pub final_config: Configuration,
}

impl Rearrangement {
    pub fn new(initial: Configuration, steps: Vec<Transposition>) -> Rearrangement {
        Rearrangement { initial, steps }
    }

    /// Sum of `a + b` over all steps, in cells (legal or not).
    pub fn total_cost(&self) -> u64 {
        self.steps.iter().map(Transposition::cost).sum()
    }

    /// Total cost as an exact fraction of the interval.
    pub fn normalized_cost(&self) -> Rational {
        Rational::new(self.total_cost().into(), self.initial.len().into())
    }

    /// Replay every step; never fails. `gamma` covers only the legal prefix.
    pub fn validate(&self) -> ValidationReport {
        let mut current = self.initial.clone();
        let mut gamma = 0u64;
        for (index, &step) in self.steps.iter().enumerate() {
            match apply(&current, step) {
                Ok(next) => {
                    gamma += step.cost();
                    current = next;
                }
                Err(_) => {
                    return ValidationReport {
                        valid: false,
                        complete: false,
                        gamma,
                        failing_step: Some(index),
                        final_config: current,
                    };
                }
            }
        }
        let complete = current.is_sorted();
        ValidationReport {
            valid: true,
            complete,
            gamma,
            failing_step: None,
            final_config: current,
        }
    }
}
