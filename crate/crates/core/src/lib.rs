//! Exact enumeration of symmetric plane partitions.
//!
//! Counts are computed three independent ways: product formulas, Kasteleyn
//! determinants and Pfaffians of (quotient) matching graphs of the
//! triangulated hexagon, and brute-force enumeration.

pub mod cli;
pub mod count;
pub mod error;
pub mod exactalg;
pub mod exec;
pub mod formulas;
pub mod graph;
pub mod hexgrid;
pub mod kasteleyn;
pub mod oracle;
pub mod sweep;
pub mod symmetry;

pub use error::{Error, Result};
