//! Exact computation of minimum k-covers of planar rational grids by lines
//! that avoid the origin.
//!
//! The library enumerates the admissible line family of a grid, solves the
//! fractional covering program and its dual exactly, finds integral optima
//! by branch-and-bound, builds explicit covers and checks dual weightings
//! that certify lower bounds.

pub mod certificates;
pub mod constructions;
pub mod cover;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod harness;
pub mod lp;
pub mod rational;

pub use certificates::*;
pub use constructions::*;
pub use cover::*;
pub use error::{Error, Result};
pub use geometry::*;
pub use grid::*;
pub use harness::*;
pub use lp::*;
pub use rational::*;
