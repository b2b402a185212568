//! Perfect truncated-metric codes.
//!
//! The truncated distance between two points of `Z^n` is their Hamming distance
//! when every coordinate offset is at most 1 in absolute value, and `n + 1`
//! otherwise. This crate builds and checks codes whose truncated spheres tile
//! a torus (the exact finite stand-in for a periodic code in `Z^n`), and does the
//! same on the ternary square compound, a graph glued from copies of `K3 □ K3`.
//!
//! Modules:
//! - [`metric`]: points, windows, tori, truncated distance and balls.
//! - [`lattice`]: components, translation classes, the code verifiers.
//! - [`constructions`]: explicit box codes and template-driven searches.
//! - [`cover`]: exact cover and efficient domination search.
//! - [`gamma2`]: the ternary square compound and its codes.
//! - [`io`]: JSON documents for code sets and templates.

pub mod constructions;
pub mod cover;
pub mod gamma2;
pub mod graph;
pub mod io;
pub mod lattice;
pub mod metric;
pub mod report;

pub use graph::Graph;
pub use metric::{Ambient, Point, VertexSet};
pub use report::{FailureKind, Verdict, VerifyReport};
