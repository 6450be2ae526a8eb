//! Harmonic quantum Otto cycle as a heat engine and a refrigerator.
//!
//! * [`cycle`]: mean energies, heats, work and operation mode of one cycle.
//! * [`protocol`]: adiabaticity parameter λ of a finite-time frequency ramp.
//! * [`engine`], [`fridge`]: closed-form trade-off optima and bounds.
//! * [`numerics`]: root finding, optimization, cubic and series tools used
//!   as independent oracles for the closed forms.
//! * [`sampler`]: seeded Monte Carlo check of the sudden-switch bounds.

// reference values in tests carry every digit they were computed with
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod cycle;
pub mod engine;
pub mod error;
pub mod exec;
pub mod format;
pub mod fridge;
pub mod numerics;
pub mod protocol;
pub mod sampler;

pub use cycle::{
    Adiabaticity, CycleEnergetics, Drive, DriveKind, Frequencies, MeanEnergies, OperationMode,
    Reservoirs, TempRegime,
};
pub use error::{Error, Result};
pub use exec::Execution;
