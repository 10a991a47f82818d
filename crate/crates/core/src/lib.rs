//! Strictly f-degenerate transversals of graph covers.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`], [`iso`], [`planar`]: simple graphs, isomorphism, planarity.
//! - [`cover`]: valued covers `(H, f)`, kernels, restriction and the
//!   strict f-degeneracy test on transversals.
//! - [`solver`]: SFDT search with an exhaustive oracle.
//! - [`constructible`]: building covers, gluing and recognition.
//! - [`detect`]: forbidden configurations and cap subgraphs.
//! - [`embedding`], [`discharge`]: rotation systems, faces and
//!   exact-rational charge ledgers.
//! - [`harness`]: exhaustive and seeded verification sweeps.
//! - [`io`]: text formats.

pub mod constructible;
pub mod cover;
pub mod detect;
pub mod discharge;
pub mod embedding;
pub mod graph;
pub mod harness;
pub mod io;
pub mod iso;
pub mod planar;
pub mod solver;

pub use cover::{Cover, Transversal};
pub use graph::Graph;
