//! Information-theoretic measures of emergence, self-organization,
//! complexity, homeostasis and autopoiesis, together with the simulation
//! testbeds they are usually demonstrated on: random Boolean networks,
//! elementary cellular automata and a cellular-automaton traffic grid, plus
//! an ecological time-series pipeline.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod discretize;
pub mod dyngraph;
pub mod eca;
pub mod ecology;
pub mod error;
pub mod homeostat;
pub mod measures;
pub mod rbn;
pub mod rng;
pub mod traffic;

pub use discretize::{normalize_to_classes, regroup_bits, StateMatrix, SymbolSeries};
pub use error::{Error, Result};
pub use measures::{
    autopoiesis, classify, complexity, emergence, homeostasis, self_organization, Category, Color,
    MeanMeasures, MeasureSet, ProbDist, Ratio,
};
