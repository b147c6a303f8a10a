//! Tropical, Hermitian and multiplicative Horn problems.
//!
//! Planar networks over arbitrary semirings, hives and Knutson-Tao cone
//! membership, Gelfand-Zeitlin maps for Hermitian and upper-triangular
//! matrices, the tropical Gelfand-Zeitlin map and its inverse on a linear
//! chamber, and Monte Carlo comparison of the induced measures.

pub mod cli;
pub mod error;
pub mod hive;
pub mod linalg;
pub mod lp;
pub mod matrix;
pub mod measure;
pub mod network;
pub mod polytope;
pub mod rational;
pub mod semiring;
pub mod tableau;
pub mod tropical_horn;

pub use error::{HornError, Result};
pub use rational::Rational;
pub use semiring::{Semiring, Tropical};
pub use tableau::{Role, Tableau};
