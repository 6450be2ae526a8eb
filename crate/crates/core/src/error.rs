use thiserror::Error;

use crate::cycle::OperationMode;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {precondition} violated ({detail})")]
    Domain {
        precondition: &'static str,
        detail: String,
    },

    #[error("cycle operates as {found:?}, but {expected:?} was required")]
    OperationMode {
        expected: OperationMode,
        found: OperationMode,
    },

    /// Low-temperature expressions require `beta * omega >= LOW_T_MIN_PRODUCT`.
    #[error("low-temperature validity violated: {which} = {product} < {min}")]
    ValidityRegion {
        which: &'static str,
        product: f64,
        min: f64,
    },

    #[error(
        "outside the sudden-switch cooling window: z = {z}, tau = {tau} (need z^2 < 2 tau - 1)"
    )]
    CoolingWindow { z: f64, tau: f64 },

    #[error("tau = {tau} <= 1/2: sudden-switch refrigerator cannot extract heat")]
    TauTooSmall { tau: f64 },

    #[error("closed form left a complex residue: |Im| = {imag} > {limit}")]
    ComplexResidue { imag: f64, limit: f64 },

    #[error("no cubic root inside the cooling window for tau = {tau}")]
    NoRootInWindow { tau: f64 },

    #[error("root of {equation} is not bracketed on [{lo}, {hi}]")]
    RootNotBracketed {
        equation: &'static str,
        lo: f64,
        hi: f64,
    },

    #[error("integration failed at t = {t} after {steps} steps: {reason}")]
    IntegrationFailure {
        t: f64,
        steps: usize,
        reason: &'static str,
    },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("no convergence after {iterations} iterations")]
    MaxIterations { iterations: usize },

    #[error("optimizer left its valid region at ({}, {})", at[0], at[1])]
    Divergence { at: [f64; 2] },

    #[error("leading cubic coefficient is zero")]
    DegenerateLeadingCoefficient,

    #[error("series fit residual {residual:e} exceeds {tolerance:e}")]
    FitResidualTooLarge { residual: f64, tolerance: f64 },

    #[error(
        "sample {index} (omega_c = {omega_c}, omega_h = {omega_h}) gives {value} above the bound {bound}"
    )]
    BoundViolation {
        index: u64,
        omega_c: f64,
        omega_h: f64,
        value: f64,
        bound: f64,
    },
}

impl Error {
    /// Stable machine-readable name of the violated precondition.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "DomainError",
            Error::OperationMode { .. } => "OperationMode",
            Error::ValidityRegion { .. } => "ValidityRegion",
            Error::CoolingWindow { .. } => "CoolingWindow",
            Error::TauTooSmall { .. } => "TauTooSmall",
            Error::ComplexResidue { .. } => "ComplexResidue",
            Error::NoRootInWindow { .. } => "NoRootInWindow",
            Error::RootNotBracketed { .. } => "RootNotBracketed",
            Error::IntegrationFailure { .. } => "IntegrationFailure",
            Error::NoSignChange { .. } => "NoSignChange",
            Error::MaxIterations { .. } => "MaxIterations",
            Error::Divergence { .. } => "Divergence",
            Error::DegenerateLeadingCoefficient => "DegenerateLeadingCoefficient",
            Error::FitResidualTooLarge { .. } => "FitResidualTooLarge",
            Error::BoundViolation { .. } => "BoundViolation",
        }
    }

    /// The precondition that failed, in words.
    pub fn precondition(&self) -> String {
        match self {
            Error::Domain { precondition, .. } => (*precondition).to_string(),
            Error::OperationMode { expected, .. } => format!("cycle operates as {expected:?}"),
            Error::ValidityRegion { which, min, .. } => format!("{which} >= {min}"),
            Error::CoolingWindow { .. } => "z^2 < 2 tau - 1".into(),
            Error::TauTooSmall { .. } => "tau > 1/2".into(),
            Error::ComplexResidue { limit, .. } => format!("|Im| <= {limit}"),
            Error::NoRootInWindow { .. } => "cubic root inside the cooling window".into(),
            Error::RootNotBracketed { equation, .. } => format!("sign change of {equation}"),
            Error::IntegrationFailure { .. } => "integration within the step cap".into(),
            Error::NoSignChange { .. } => "f(lo) f(hi) < 0".into(),
            Error::MaxIterations { .. } => "convergence within the iteration cap".into(),
            Error::Divergence { .. } => "iterates stay in the valid region".into(),
            Error::DegenerateLeadingCoefficient => "a != 0".into(),
            Error::FitResidualTooLarge { .. } => "fit residual below tolerance".into(),
            Error::BoundViolation { .. } => "sampled value <= bound".into(),
        }
    }

    pub(crate) fn domain(precondition: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            precondition,
            detail: detail.into(),
        }
    }
}
