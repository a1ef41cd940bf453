//! Shear-flow mixing on a discrete torus grid.
//!
//! An `M x M` grid of cells carries an indicator set (a [`GridMask`]).
//! Flow programs compose shear steps: per-row or per-column cyclic
//! translations, each an exact permutation of cells, so measure is
//! conserved bit for bit. The mixing scale of a mask is the smallest probe
//! radius at which every cyclic square window sees a balanced fraction of
//! the set, and the cost of a step is the total variation of its
//! displacement profile.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorusError {
    #[error("grid side must be even, got {0}")]
    OddSide(usize),
    #[error("grid side must be at least {min}, got {got}")]
    SideTooSmall { got: usize, min: usize },
    #[error("a shear program needs at least one stage")]
    ZeroStages,
    #[error("step carries {got} shifts but the grid side is {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("radius {radius} out of range 1..{half} for grid side {side}")]
    RadiusOutOfRange { radius: usize, half: usize, side: usize },
    #[error("mixing kappa must lie strictly between 0 and 1/2, got {0}")]
    KappaOutOfRange(Rational),
    #[error("empty mask")]
    EmptyMask,
    #[error("mask line {line} has {got} cells, expected {expected}")]
    RaggedMask { line: usize, got: usize, expected: usize },
    #[error("mask has {rows} rows of width {width}; the grid must be square")]
    NonSquareMask { rows: usize, width: usize },
    #[error("illegal character `{ch}` in mask at line {line}, column {column}")]
    IllegalMaskCharacter { line: usize, column: usize, ch: char },
}

/// Indicator set on the `M x M` torus grid, row-major; row 0 is the bottom
/// band `x2 in [0, 1/M)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMask {
    side: usize,
    cells: Vec<bool>,
}

impl GridMask {
    pub fn new(side: usize, cells: Vec<bool>) -> Result<GridMask, TorusError> {
        if side == 0 {
            return Err(TorusError::EmptyMask);
        }
        if cells.len() != side * side {
            return Err(TorusError::NonSquareMask { rows: cells.len() / side.max(1), width: side });
        }
        Ok(GridMask { side, cells })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.cells[row * self.side + col]
    }

    /// Number of cells in the set; invariant under every shear step.
    pub fn mass(&self) -> usize {
        self.cells.iter().filter(|&&cell| cell).count()
    }
}

impl FromStr for GridMask {
    type Err = TorusError;

    /// Parse `M` lines of `M` characters, `0` outside the set, `1` inside.
    fn from_str(text: &str) -> Result<GridMask, TorusError> {
        let lines: Vec<&str> = text.lines().collect();
        if lines.is_empty() {
            return Err(TorusError::EmptyMask);
        }
        let side = lines[0].chars().count();
        if side == 0 {
            return Err(TorusError::EmptyMask);
        }
        if lines.len() != side {
            return Err(TorusError::NonSquareMask { rows: lines.len(), width: side });
        }
        let mut cells = Vec::with_capacity(side * side);
        for (line_index, line) in lines.iter().enumerate() {
            let mut width = 0;
            for (column, ch) in line.chars().enumerate() {
                match ch {
                    '0' => cells.push(false),
                    '1' => cells.push(true),
                    _ => {
                        return Err(TorusError::IllegalMaskCharacter {
                            line: line_index,
                            column,
                            ch,
                        })
                    }
                }
                width += 1;
            }
            if width != side {
                return Err(TorusError::RaggedMask { line: line_index, got: width, expected: side });
            }
        }
        GridMask::new(side, cells)
    }
}

impl fmt::Display for GridMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in 0..self.side {
            for col in 0..self.side {
                write!(f, "{}", if self.get(row, col) { '1' } else { '0' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Which family of lines a shear translates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Row `j` translates by `shifts[j]` cells in the column direction.
    Horizontal,
    /// Column `i` translates by `shifts[i]` cells in the row direction.
    Vertical,
}

impl Serialize for Axis {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(match self {
            Axis::Horizontal => "H",
            Axis::Vertical => "V",
        })
    }
}

impl<'de> Deserialize<'de> for Axis {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Axis, D::Error> {
        let text = String::deserialize(deserializer)?;
        match text.as_str() {
            "H" => Ok(Axis::Horizontal),
            "V" => Ok(Axis::Vertical),
            other => Err(de::Error::custom(format!("axis must be `H` or `V`, got `{other}`"))),
        }
    }
}

/// One unit-time slab of the flow: a per-line cyclic translation. Any shift
/// vector of the right length is a bijection of grid cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShearStep {
    pub axis: Axis,
    pub shifts: Vec<i64>,
}

impl ShearStep {
    pub fn horizontal(shifts: Vec<i64>) -> ShearStep {
        ShearStep { axis: Axis::Horizontal, shifts }
    }

    pub fn vertical(shifts: Vec<i64>) -> ShearStep {
        ShearStep { axis: Axis::Vertical, shifts }
    }

    /// The step with every shift negated; composing the two is the identity.
    pub fn inverse(&self) -> ShearStep {
        ShearStep {
            axis: self.axis,
            shifts: self.shifts.iter().map(|&s| -s).collect(),
        }
    }
}

/// An ordered shear-step sequence on a fixed grid side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowProgram {
    side: usize,
    steps: Vec<ShearStep>,
}

impl FlowProgram {
    pub fn new(side: usize, steps: Vec<ShearStep>) -> Result<FlowProgram, TorusError> {
        for step in &steps {
            if step.shifts.len() != side {
                return Err(TorusError::DimensionMismatch {
                    got: step.shifts.len(),
                    expected: side,
                });
            }
        }
        Ok(FlowProgram { side, steps })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn steps(&self) -> &[ShearStep] {
        &self.steps
    }

    pub fn push(&mut self, step: ShearStep) -> Result<(), TorusError> {
        if step.shifts.len() != self.side {
            return Err(TorusError::DimensionMismatch { got: step.shifts.len(), expected: self.side });
        }
        self.steps.push(step);
        Ok(())
    }
}

/// The bottom half band: rows `0..M/2` fully set, mass `M^2/2`.
pub fn make_band_set(side: usize) -> Result<GridMask, TorusError> {
    if side == 0 {
        return Err(TorusError::EmptyMask);
    }
    if !side.is_multiple_of(2) {
        return Err(TorusError::OddSide(side));
    }
    let cells = (0..side * side).map(|index| index / side < side / 2).collect();
    GridMask::new(side, cells)
}

/// Translate every line of the mask cyclically by its shift.
pub fn apply_step(mask: &GridMask, step: &ShearStep) -> Result<GridMask, TorusError> {
    let side = mask.side();
    if step.shifts.len() != side {
        return Err(TorusError::DimensionMismatch { got: step.shifts.len(), expected: side });
    }
    let mut out = vec![false; side * side];
    match step.axis {
        Axis::Horizontal => {
            for row in 0..side {
                let shift = step.shifts[row].rem_euclid(side as i64) as usize;
                for col in 0..side {
                    out[row * side + (col + shift) % side] = mask.get(row, col);
                }
            }
        }
        Axis::Vertical => {
            for col in 0..side {
                let shift = step.shifts[col].rem_euclid(side as i64) as usize;
                for row in 0..side {
                    out[((row + shift) % side) * side + col] = mask.get(row, col);
                }
            }
        }
    }
    GridMask::new(side, out)
}

/// Left-to-right composition of the program's steps.
pub fn run_program(mask: &GridMask, program: &FlowProgram) -> Result<GridMask, TorusError> {
    if program.side() != mask.side() {
        return Err(TorusError::DimensionMismatch { got: program.side(), expected: mask.side() });
    }
    let mut current = mask.clone();
    for step in program.steps() {
        current = apply_step(&current, step)?;
    }
    Ok(current)
}

/// Smallest listed radius `r` such that every cyclic `(2r+1) x (2r+1)`
/// square window holds a set fraction inside `[kappa, 1 - kappa]`, or `None`
/// when no listed radius passes. Fractions are compared exactly:
/// `p * area <= q * count <= (q - p) * area` for `kappa = p/q`.
pub fn mixing_scale(
    mask: &GridMask,
    kappa: &Rational,
    radii: &[usize],
) -> Result<Option<usize>, TorusError> {
    if *kappa <= Rational::zero() || *kappa >= Rational::new(BigInt::one(), BigInt::from(2)) {
        return Err(TorusError::KappaOutOfRange(kappa.clone()));
    }
    let side = mask.side();
    for &radius in radii {
        if radius < 1 || 2 * radius >= side {
            return Err(TorusError::RadiusOutOfRange { radius, half: side / 2, side });
        }
    }
    let p = kappa.numer().to_u128().expect("kappa numerator fits in u128");
    let q = kappa.denom().to_u128().expect("kappa denominator fits in u128");

    // Prefix sums: sums[r][c] counts set cells in rows < r, cols < c.
    let mut sums = vec![vec![0u32; side + 1]; side + 1];
    for row in 0..side {
        for col in 0..side {
            sums[row + 1][col + 1] = sums[row][col + 1] + sums[row + 1][col]
                - sums[row][col]
                + mask.get(row, col) as u32;
        }
    }
    let rect = |r0: usize, r1: usize, c0: usize, c1: usize| -> u32 {
        sums[r1][c1] + sums[r0][c0] - sums[r0][c1] - sums[r1][c0]
    };
    // A cyclic index range [start, start+len) splits into at most two plain
    // ranges; a cyclic rectangle into at most four.
    let spans = |start: usize, len: usize| -> [(usize, usize); 2] {
        if start + len <= side {
            [(start, start + len), (0, 0)]
        } else {
            [(start, side), (0, start + len - side)]
        }
    };

    let mut sorted: Vec<usize> = radii.to_vec();
    sorted.sort_unstable();
    sorted.dedup();

    'radii: for &radius in &sorted {
        let window = 2 * radius + 1;
        let area = (window * window) as u128;
        for row in 0..side {
            let row_spans = spans((row + side - radius) % side, window);
            for col in 0..side {
                let col_spans = spans((col + side - radius) % side, window);
                let mut count = 0u32;
                for &(r0, r1) in &row_spans {
                    for &(c0, c1) in &col_spans {
                        count += rect(r0, r1, c0, c1);
                    }
                }
                let count = count as u128;
                if p * area > q * count || q * count > (q - p) * area {
                    continue 'radii;
                }
            }
        }
        return Ok(Some(radius));
    }
    Ok(None)
}

/// Total variation of the displacement profile, in length units: the sum of
/// cyclic shift differences divided by the grid side. Adding a constant to
/// all shifts leaves the cost unchanged.
pub fn step_cost(step: &ShearStep) -> Rational {
    let lines = step.shifts.len();
    if lines == 0 {
        return Rational::zero();
    }
    let mut total: i128 = 0;
    for j in 0..lines {
        let next = step.shifts[(j + 1) % lines] as i128;
        let here = step.shifts[j] as i128;
        total += (next - here).abs();
    }
    Rational::new(BigInt::from(total), BigInt::from(lines))
}

/// Sum of step costs; each step occupies unit time.
pub fn program_cost(program: &FlowProgram) -> Rational {
    program.steps().iter().map(step_cost).sum()
}

/// Image of every grid cell under the step, as a table indexed by
/// `row * M + col`. Per-line cyclic translations are always bijections;
/// the table form exists so corrupted or deserialized data can be checked.
pub fn step_cell_map(step: &ShearStep) -> Vec<usize> {
    let side = step.shifts.len();
    let mut map = vec![0usize; side * side];
    for row in 0..side {
        for col in 0..side {
            let image = match step.axis {
                Axis::Horizontal => {
                    let shift = step.shifts[row].rem_euclid(side as i64) as usize;
                    row * side + (col + shift) % side
                }
                Axis::Vertical => {
                    let shift = step.shifts[col].rem_euclid(side as i64) as usize;
                    ((row + shift) % side) * side + col
                }
            };
            map[row * side + col] = image;
        }
    }
    map
}

/// Is the table a permutation: every cell index hit exactly once?
pub fn is_cell_permutation(map: &[usize]) -> bool {
    let mut hits = vec![0usize; map.len()];
    for &image in map {
        if image >= map.len() {
            return false;
        }
        hits[image] += 1;
    }
    hits.iter().all(|&h| h == 1)
}

/// Re-verify that every step of the program is a bijection of grid cells,
/// certifying exact measure preservation.
pub fn verify_measure_preserving(program: &FlowProgram) -> bool {
    program.steps().iter().all(|step| {
        step.shifts.len() == program.side() && is_cell_permutation(&step_cell_map(step))
    })
}

/// Hyperbolic shear composition used to probe mixing: each stage is a
/// vertical shear with shifts `2i mod M` followed by a horizontal shear with
/// shifts `2j mod M`. The program cost is exactly `2k(4M-8)/M`.
pub fn cat_program(stages: usize, side: usize) -> Result<FlowProgram, TorusError> {
    if stages < 1 {
        return Err(TorusError::ZeroStages);
    }
    if side < 4 {
        return Err(TorusError::SideTooSmall { got: side, min: 4 });
    }
    let linear: Vec<i64> = (0..side).map(|i| (2 * i % side) as i64).collect();
    let mut steps = Vec::with_capacity(2 * stages);
    for _ in 0..stages {
        steps.push(ShearStep::vertical(linear.clone()));
        steps.push(ShearStep::horizontal(linear.clone()));
    }
    FlowProgram::new(side, steps)
}
