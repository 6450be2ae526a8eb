//! Root finding, optimization, cubic solving and series extraction.
//!
//! These are the oracles every closed form in [`crate::engine`] and
//! [`crate::fridge`] is checked against, so none of them use derivatives
//! of the objectives they are handed.

mod cubic;
mod optimize;
mod root;
mod series;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cubic::{solve_cubic_trig, CubicRoots};
pub use optimize::{is_unimodal, maximize_1d, maximize_2d, maximize_2d_within};
pub use root::{find_root, find_root_with};
pub use series::{fit_leading_series, SeriesFit};

/// Closed interval `[lo, hi]` with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    lo: f64,
    hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::domain("lo < hi", format!("[{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Location and value of a maximum found by [`maximize_1d`] or [`maximize_2d`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimumResult {
    pub arg: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Final uncertainty in `arg` achieved by the method.
    pub tolerance_met: f64,
}

impl OptimumResult {
    pub fn x(&self) -> f64 {
        self.arg[0]
    }
}
