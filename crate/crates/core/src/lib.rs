//! Local symmetric-square factors for `GL(2)` over `Q_p` (`p` odd) and the
//! arithmetic they rest on: truncated p-adic numbers, Hilbert symbols, the
//! Kubota cocycle, Tate factors and metaplectic Bessel sums.

pub mod error;
pub mod padic;
pub mod local_symbols;
pub mod metaplectic;
pub mod lfactor;
pub mod tate;
pub mod symsq;
pub mod bessel;

pub use error::{Error, Result};
pub use padic::{legendre, FieldParams, PadicNumber, SquareClass};

/// Comparison tolerances shared by every engine.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Absolute tolerance for complex comparisons.
    pub complex: f64,
    /// Relative tolerance for identifying inverse roots.
    pub cluster: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { complex: 1e-9, cluster: 1e-6 }
    }
}
