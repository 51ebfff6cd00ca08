//! Numerical hole analysis of closed planar sets.
//!
//! The library rasterizes scene descriptions of closed subsets of the plane,
//! labels the connected components of their complements, classifies sets as
//! Arakelian (hole-free, with bounded hole unions under compact enlargement)
//! or not, constructs continuous logarithm branches of non-vanishing analytic
//! functions on such sets, and — when a set fails the classification — builds
//! an explicit witness function whose logarithm cannot exist, certified by a
//! winding-number obstruction on a curve near a hole boundary.
//!
//! All verdicts are window-relative: the plane is truncated to a rectangular
//! grid and "bounded" means "not touching the window border". Reports carry
//! that caveat explicitly.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod report;
pub mod scenes;
pub mod svg;
pub mod tolerances;
pub mod topology;
pub mod witness;

pub use error::Error;
pub use tolerances::Tolerances;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
