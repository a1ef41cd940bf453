//! Two-color cell configurations on the unit interval.
//!
//! A configuration is a row of `N` equal cells, each white (`0`) or black
//! (`1`); cell `i` covers `[i/N, (i+1)/N)`. The module owns sortedness, the
//! window-balance ("well stirred") predicate, and instance generators. All
//! window inequalities are decided in exact integer arithmetic.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("empty configuration")]
    Empty,
    #[error("illegal character `{ch}` at position {position}")]
    IllegalCharacter { position: usize, ch: char },
    #[error("kappa must lie strictly between 0 and 1, got {0}")]
    KappaOutOfRange(Rational),
    #[error("window must span at least one cell")]
    ZeroWindow,
    #[error("window of {window} cells exceeds the {cells}-cell configuration")]
    WindowTooLarge { window: usize, cells: usize },
    #[error("period {period} must be even, positive, and divide {cells}")]
    InvalidPeriod { period: usize, cells: usize },
    #[error("no well-stirred configuration found in {tries} tries; parameters are too tight")]
    TriesExhausted { tries: u64 },
}

/// Cell color. White sorts before black: a sorted configuration is all
/// whites followed by all blacks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub fn from_char(ch: char) -> Option<Color> {
        match ch {
            '0' => Some(Color::White),
            '1' => Some(Color::Black),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Color::White => '0',
            Color::Black => '1',
        }
    }

    pub fn other(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }
}

/// Parameters of the window-balance predicate: every `window`-cell segment
/// must hold strictly more than `kappa * window` and at most
/// `(1 - kappa) * window` black cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirringParams {
    kappa: Rational,
    window: usize,
}

impl StirringParams {
    pub fn new(kappa: Rational, window: usize) -> Result<StirringParams, ConfigError> {
        if kappa <= Rational::from_integer(0.into()) || kappa >= Rational::from_integer(1.into()) {
            return Err(ConfigError::KappaOutOfRange(kappa));
        }
        if window == 0 {
            return Err(ConfigError::ZeroWindow);
        }
        Ok(StirringParams { kappa, window })
    }

    pub fn kappa(&self) -> &Rational {
        &self.kappa
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// The window length as a fraction of an `cells`-cell configuration.
    pub fn eps(&self, cells: usize) -> Rational {
        Rational::new(BigInt::from(self.window), BigInt::from(cells))
    }
}

/// A binary configuration: `N` cells, each white or black.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    cells: Vec<Color>,
}

impl Configuration {
    /// Wrap a nonempty cell row.
    pub fn new(cells: Vec<Color>) -> Result<Configuration, ConfigError> {
        if cells.is_empty() {
            return Err(ConfigError::Empty);
        }
        Ok(Configuration { cells })
    }

    /// Number of cells `N`; each cell has length `1/N`.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    /// Always false: the empty configuration is unrepresentable.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cells(&self) -> &[Color] {
        &self.cells
    }

    /// Number of black cells.
    pub fn black_cells(&self) -> usize {
        self.cells.iter().filter(|&&c| c == Color::Black).count()
    }

    /// Total black mass: (black cells) / N, exact.
    pub fn xi(&self) -> Rational {
        Rational::new(BigInt::from(self.black_cells()), BigInt::from(self.len()))
    }

    /// True iff no black cell precedes a white cell.
    pub fn is_sorted(&self) -> bool {
        self.cells.windows(2).all(|pair| pair[0] <= pair[1])
    }

    /// The sorted configuration with the same length and black mass:
    /// whites on the left, blacks on the right.
    pub fn sorted_target(&self) -> Configuration {
        let blacks = self.black_cells();
        let mut cells = vec![Color::White; self.len() - blacks];
        cells.extend(std::iter::repeat_n(Color::Black, blacks));
        Configuration { cells }
    }

    /// Length in cells of the longest maximal run of `color` (0 if absent).
    pub fn longest_run(&self, color: Color) -> usize {
        let mut best = 0;
        let mut current = 0;
        for &cell in &self.cells {
            if cell == color {
                current += 1;
                best = best.max(current);
            } else {
                current = 0;
            }
        }
        best
    }

    /// Maximal constant runs as (color, length) pairs. Colors alternate and
    /// the lengths sum to `N`.
    pub fn blocks(&self) -> Vec<(Color, usize)> {
        let mut blocks: Vec<(Color, usize)> = Vec::new();
        for &cell in &self.cells {
            match blocks.last_mut() {
                Some((color, len)) if *color == cell => *len += 1,
                _ => blocks.push((cell, 1)),
            }
        }
        blocks
    }

    /// Decide the window-balance predicate over every cell-aligned offset.
    ///
    /// With the window an exact multiple of the cell length, the windowed
    /// black mass is piecewise linear in the offset with breakpoints at cell
    /// boundaries, so checking aligned offsets decides all real offsets.
    /// The black count `m` of each window must satisfy the integer
    /// inequalities `p*w < q*m` and `q*m <= (q-p)*w` for `kappa = p/q`.
    pub fn is_well_stirred(&self, params: &StirringParams) -> Result<bool, ConfigError> {
        let w = params.window();
        let n = self.len();
        if w > n {
            return Err(ConfigError::WindowTooLarge { window: w, cells: n });
        }
        let p = params.kappa().numer();
        let q = params.kappa().denom();
        // Allowed integer counts: m > p*w/q and m <= (q-p)*w/q. With p, q > 0
        // the BigInt quotient is already the floor.
        let m_min = (p * BigInt::from(w) / q + BigInt::from(1u8))
            .to_usize()
            .expect("window count fits in usize");
        let m_max = ((q - p) * BigInt::from(w) / q)
            .to_usize()
            .expect("window count fits in usize");

        let mut count = self.cells[..w].iter().filter(|&&c| c == Color::Black).count();
        if count < m_min || count > m_max {
            return Ok(false);
        }
        for k in 0..n - w {
            if self.cells[k] == Color::Black {
                count -= 1;
            }
            if self.cells[k + w] == Color::Black {
                count += 1;
            }
            if count < m_min || count > m_max {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The canonical well-stirred family: `period/2` black cells followed by
    /// `period/2` white cells, repeated. Requires an even period dividing `N`.
    pub fn alternating(cells: usize, period: usize) -> Result<Configuration, ConfigError> {
        if cells == 0 {
            return Err(ConfigError::Empty);
        }
        if period == 0 || !period.is_multiple_of(2) || !cells.is_multiple_of(period) {
            return Err(ConfigError::InvalidPeriod { period, cells });
        }
        let half = period / 2;
        let row: Vec<Color> = (0..cells)
            .map(|i| if i % period < half { Color::Black } else { Color::White })
            .collect();
        Ok(Configuration { cells: row })
    }

    /// Rejection-sample a uniformly random configuration until it is well
    /// stirred. Deterministic per seed.
    pub fn random_stirred(
        cells: usize,
        params: &StirringParams,
        seed: u64,
        max_tries: u64,
    ) -> Result<Configuration, ConfigError> {
        if cells == 0 {
            return Err(ConfigError::Empty);
        }
        if params.window() > cells {
            return Err(ConfigError::WindowTooLarge { window: params.window(), cells });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut word = 0u64;
        let mut bits_left = 0u32;
        let mut next_cell = || {
            if bits_left == 0 {
                word = rng.next_u64();
                bits_left = 64;
            }
            let bit = word & 1;
            word >>= 1;
            bits_left -= 1;
            if bit == 1 {
                Color::Black
            } else {
                Color::White
            }
        };
        for _ in 0..max_tries {
            let candidate = Configuration {
                cells: (0..cells).map(|_| next_cell()).collect(),
            };
            if candidate.is_well_stirred(params)? {
                return Ok(candidate);
            }
        }
        Err(ConfigError::TriesExhausted { tries: max_tries })
    }
}

impl FromStr for Configuration {
    type Err = ConfigError;

    /// Parse a line of `0`/`1` characters; one trailing newline is allowed.
    fn from_str(text: &str) -> Result<Configuration, ConfigError> {
        let body = text.strip_suffix('\n').unwrap_or(text);
        let body = body.strip_suffix('\r').unwrap_or(body);
        if body.is_empty() {
            return Err(ConfigError::Empty);
        }
        let mut cells = Vec::with_capacity(body.len());
        for (position, ch) in body.chars().enumerate() {
            match Color::from_char(ch) {
                Some(color) => cells.push(color),
                None => return Err(ConfigError::IllegalCharacter { position, ch }),
            }
        }
        Ok(Configuration { cells })
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &cell in &self.cells {
            write!(f, "{}", cell.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Configuration({})", self)
    }
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Configuration, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(de::Error::custom)
    }
}
