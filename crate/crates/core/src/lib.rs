//! Rigidity of bar-joint frameworks whose last `k` coordinates are constrained
//! only up to per-coordinate dilation.
//!
//! A framework is a finite simple graph together with a rational realization in
//! d-space. Beyond the usual bar (squared-length) constraints, each of the last
//! `k` coordinates is pinned only up to a global nonzero scale factor. The
//! crate decides infinitesimal rigidity of such frameworks exactly, decides the
//! matching combinatorial characterisations, computes dilation stress spaces,
//! certifies global rigidity through maximal-rank stress matrices, and grows
//! certified families by vertex extensions.
//!
//! All linear algebra is exact over arbitrary-precision rationals; random
//! sampling (generic realizations, randomized rank) is deterministic for a
//! fixed seed.

pub mod rational;

pub mod graph;

pub mod exactla;

pub mod framework;

pub mod verdict;

pub mod matrices;

pub mod combinat;

pub mod stress;

pub mod construct;

pub mod enumerate;

pub mod probe;

pub mod cli;

pub use framework::{DilationProblem, Framework};
pub use graph::{EdgeSubset, Graph};
pub use rational::Rational;
