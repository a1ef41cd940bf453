//! Minimum-cost sorting of two-color cell configurations under block
//! transpositions, with exact rational lower-bound certificates and a
//! discrete shear-flow mixing explorer on the torus.
//!
//! A configuration is a row of `N` cells, each white or black; swapping an
//! adjacent black block of `a` cells with a white block of `b` cells costs
//! `a + b`. The crate answers three kinds of questions about such rows:
//!
//! * [`solvers`] finds exact minimum sorting and run-creation costs by
//!   least-cost-first search over the implicit state graph, checked against
//!   an independent value-iteration oracle, plus divide-and-conquer and
//!   greedy upper-bound constructions.
//! * [`bounds`] certifies, in exact rational arithmetic, a lower bound on
//!   the sorting cost of any configuration whose every length-`eps` window
//!   is balanced ([`config::StirringParams`]), and checks the tabulated
//!   run-cost inequalities that drive the bound.
//! * [`torus`] composes measure-preserving shear steps on an `M x M` torus
//!   grid, measures the mixing scale of the transported set, and prices
//!   programs by the total variation of their displacement profiles.

pub mod bounds;
pub mod config;
pub mod moves;
pub mod rational;
pub mod solvers;
pub mod torus;

pub use bounds::{BoundCertificate, VReport, VTable};
pub use config::{Color, Configuration, StirringParams};
pub use moves::{Rearrangement, Transposition, ValidationReport};
pub use rational::Rational;
pub use solvers::{SearchLimits, SolveResult, Target};
pub use torus::{Axis, FlowProgram, GridMask, ShearStep};
