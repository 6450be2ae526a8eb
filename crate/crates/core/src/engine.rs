//! Engine branch: efficient-work optima, sudden-switch bounds and losses.
//!
//! High-temperature sudden-switch quantities are in units of `1/beta_h`
//! and depend on the baths only through `tau = beta_h / beta_c`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cycle::{
    self, check_low_t_validity, Drive, Frequencies, OperationMode, Reservoirs, TempRegime,
};
use crate::error::{Error, Result};
use crate::exec::{map_slice, Execution};
use crate::numerics::{find_root, Bracket};

/// Largest tolerated `|Im|` when a closed form is evaluated through complex
/// intermediates.
pub const COMPLEX_RESIDUE_LIMIT: f64 = 1e-9;

/// Relative lower end of root brackets for the transcendental optima.
pub(crate) const BRACKET_EPSILON: f64 = 1e-9;

/// Relative slack on closed domain boundaries, absorbing rounding in
/// derived arguments such as `sqrt(tau)^2`.
pub(crate) const BOUNDARY_SLACK: f64 = 1e-12;

pub(crate) fn check_open_unit(name: &'static str, x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(name, format!("{x}")));
    }
    Ok(())
}

/// `W_η = η W_ext` for the high-temperature adiabatic engine at compression
/// ratio `z ∈ [tau, 1]`.
pub fn efficient_work_ht(z: f64, r: &Reservoirs) -> Result<f64> {
    let tau = r.tau();
    if !(z >= tau * (1.0 - BOUNDARY_SLACK) && z <= 1.0) {
        return Err(Error::domain(
            "tau <= z <= 1 (positive work)",
            format!("z = {z}, tau = {tau}"),
        ));
    }
    Ok((1.0 - z) * ((1.0 - z) / r.beta_h() + (z - 1.0) / (r.beta_c() * z)))
}

/// Efficiency at maximum efficient work, high temperature, adiabatic drive.
pub fn eta_mew_ht(eta_c: f64) -> Result<f64> {
    check_open_unit("0 < eta_C < 1", eta_c)?;
    let tau = 1.0 - eta_c;
    // rationalized form of 1 - (tau/4)(1 + sqrt(1 + 8/tau)); no cancellation at small eta_C
    Ok(4.0 * eta_c / (4.0 - tau + (tau * tau + 8.0 * tau).sqrt()))
}

/// Efficiency at maximum work, adiabatic drive: `1 - sqrt(1 - eta_C)`.
pub fn eta_w_ht(eta_c: f64) -> Result<f64> {
    check_open_unit("0 < eta_C < 1", eta_c)?;
    Ok(eta_c / (1.0 + (1.0 - eta_c).sqrt()))
}

/// Low-temperature efficient work. Requires `beta_i omega_i >= 5`.
pub fn efficient_work_lt(f: &Frequencies, r: &Reservoirs) -> Result<f64> {
    check_low_t_validity(r, f)?;
    Ok(efficient_work_lt_unchecked(f.omega_c(), f.omega_h(), r))
}

/// The low-temperature efficient-work formula without the validity guard.
/// The expression is scale-free in `beta omega`, so optimizers use it as is.
pub fn efficient_work_lt_unchecked(omega_c: f64, omega_h: f64, r: &Reservoirs) -> f64 {
    let d = omega_h - omega_c;
    d * d / omega_h * ((-r.beta_h() * omega_h).exp() - (-r.beta_c() * omega_c).exp())
}

/// Stationarity residuals of the low-temperature efficient work:
/// `[∂/∂ω_h condition, ∂/∂ω_c condition]`, both as
/// `e^{β_h ω_h − β_c ω_c} − rhs`.
pub fn efficient_work_lt_stationarity(omega_c: f64, omega_h: f64, r: &Reservoirs) -> [f64; 2] {
    let (bc, bh) = (r.beta_c(), r.beta_h());
    let d = omega_h - omega_c;
    let lhs = (bh * omega_h - bc * omega_c).exp();
    [
        lhs - (1.0 - bh * d * omega_h / (omega_h + omega_c)),
        lhs - 2.0 / (2.0 + bc * d),
    ]
}

/// Residual whose root in `(0, eta_C)` is the low-temperature efficiency at
/// maximum efficient work. Negative near 0, positive at `eta_C`.
pub fn eta_mew_lt_residual(eta: f64, eta_c: f64) -> f64 {
    (2.0 * eta_c - eta) * (eta - eta_c) / (eta * (1.0 - eta_c))
        - ((-eta_c).ln_1p() - (-0.5 * eta).ln_1p())
}

/// Efficiency at maximum efficient work, low temperature, adiabatic drive.
pub fn eta_mew_lt(eta_c: f64) -> Result<f64> {
    check_open_unit("0 < eta_C < 1", eta_c)?;
    let (lo, hi) = (BRACKET_EPSILON * eta_c, eta_c);
    let br = Bracket::new(lo, hi)?;
    find_root(|eta| eta_mew_lt_residual(eta, eta_c), br, 1e-16 * eta_c).map_err(|e| match e {
        Error::NoSignChange { .. } => Error::RootNotBracketed {
            equation: "efficient-work low-temperature condition",
            lo,
            hi,
        },
        other => other,
    })
}

/// Efficiency at maximum work, low temperature, adiabatic drive.
pub fn eta_w_lt(eta_c: f64) -> Result<f64> {
    check_open_unit("0 < eta_C < 1", eta_c)?;
    Ok(eta_c * eta_c / (eta_c - (1.0 - eta_c) * (-eta_c).ln_1p()))
}

/// High-temperature sudden-switch heat and work, units of `1/beta_h`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuddenSwitchEngine {
    pub q_h: f64,
    pub w_ext: f64,
}

fn check_ss_engine(z: f64, tau: f64) -> Result<()> {
    check_open_unit("0 < tau < 1", tau)?;
    if !(z * z >= tau * (1.0 - BOUNDARY_SLACK) && z <= 1.0) {
        return Err(Error::domain(
            "tau <= z^2 <= 1 (positive work)",
            format!("z = {z}, tau = {tau}"),
        ));
    }
    Ok(())
}

pub fn ss_energetics(z: f64, tau: f64) -> Result<SuddenSwitchEngine> {
    check_ss_engine(z, tau)?;
    let z2 = z * z;
    Ok(SuddenSwitchEngine {
        q_h: 1.0 - tau * (z2 + 1.0) / (2.0 * z2),
        w_ext: (1.0 - z2) * (z2 - tau) / (2.0 * z2),
    })
}

/// Sudden-switch efficiency at high temperature.
pub fn eta_ss(z: f64, tau: f64) -> Result<f64> {
    check_ss_engine(z, tau)?;
    let z2 = z * z;
    Ok((1.0 - z2) * (z2 - tau) / ((2.0 - tau) * z2 - tau))
}

/// Sudden-switch efficient work `eta_ss * w_ext`, units of `1/beta_h`.
pub fn efficient_work_ss(z: f64, tau: f64) -> Result<f64> {
    check_ss_engine(z, tau)?;
    let z2 = z * z;
    let num = (1.0 - z2) * (z2 - tau);
    Ok(num * num / (2.0 * z2 * ((2.0 - tau) * z2 - tau)))
}

/// Largest sudden-switch efficiency over `z` at high temperature.
pub fn eta_ss_max(eta_c: f64) -> Result<f64> {
    check_open_unit("0 < eta_C < 1", eta_c)?;
    let s = (2.0 * (1.0 - eta_c)).sqrt();
    Ok((3.0 - eta_c - 2.0 * s) * eta_c / ((1.0 + eta_c) * (1.0 + eta_c)))
}

/// Principal cube root `A` entering the sudden-switch efficient-work optimum.
/// The inner square root has a negative argument on all of `(0, 1)`, so `A`
/// is genuinely complex.
pub fn cube_root_a(tau: f64) -> Result<Complex64> {
    check_open_unit("0 < tau < 1", tau)?;
    let inner = Complex64::new((13.0 - 8.0 * tau) * tau - 16.0, 0.0).sqrt();
    let radicand = inner * ((1.0 - tau) * (2.0 - tau) * tau.powf(1.5))
        + Complex64::new(tau.powi(4) - 2.0 * tau * tau, 0.0);
    Ok(radicand.cbrt())
}

fn real_part(value: Complex64) -> Result<f64> {
    if value.im.abs() > COMPLEX_RESIDUE_LIMIT || !value.re.is_finite() {
        return Err(Error::ComplexResidue {
            imag: value.im.abs(),
            limit: COMPLEX_RESIDUE_LIMIT,
        });
    }
    Ok(value.re)
}

/// `z*²` maximizing the sudden-switch efficient work.
pub fn optimal_z2_ss(tau: f64) -> Result<f64> {
    let a = cube_root_a(tau)?;
    let num =
        Complex64::new(5.0 * tau * tau - 2.0 * tau.powi(3) - 4.0 * tau, 0.0) - a * tau - a * a;
    real_part(num / (a * (2.0 * (tau - 2.0))))
}

/// Compression ratio maximizing the sudden-switch efficient work.
pub fn optimal_z_ss(tau: f64) -> Result<f64> {
    Ok(optimal_z2_ss(tau)?.sqrt())
}

/// Sudden-switch efficiency at maximum efficient work, closed form.
pub fn eta_mew_ss(tau: f64) -> Result<f64> {
    let a = cube_root_a(tau)?;
    let b = tau * (2.0 * tau - 5.0) + 4.0;
    let a2 = a * a;
    let num =
        -(a2 + a * (tau * (2.0 * tau - 3.0)) + b * tau) * (a2 + a * (3.0 * tau - 4.0) + b * tau);
    let den = a * (2.0 * (tau - 2.0) * (tau - 2.0)) * (a2 - a * tau + b * tau);
    real_part(num / den)
}

/// Sudden-switch efficiency at maximum work.
pub fn eta_w_ss(eta_c: f64) -> Result<f64> {
    check_open_unit("0 < eta_C < 1", eta_c)?;
    let s = (1.0 - eta_c).sqrt();
    Ok((1.0 - s) / (2.0 + s))
}

/// Fraction of extracted work lost relative to a reversible engine.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossReport {
    pub r: f64,
    pub eta: f64,
    pub eta_c: f64,
}

pub fn loss_report(eta: f64, eta_c: f64) -> Result<LossReport> {
    check_open_unit("0 < eta_C < 1", eta_c)?;
    if !(eta > 0.0 && eta <= eta_c) {
        return Err(Error::domain(
            "0 < eta <= eta_C",
            format!("eta = {eta}, eta_C = {eta_c}"),
        ));
    }
    Ok(LossReport {
        r: eta_c / eta - 1.0,
        eta,
        eta_c,
    })
}

/// Loss at maximum efficient work, adiabatic drive, high temperature.
pub fn loss_ew_ad(eta_c: f64) -> Result<f64> {
    check_open_unit("0 < eta_C < 1", eta_c)?;
    let tau = 1.0 - eta_c;
    Ok(0.25 * ((tau * (9.0 - eta_c)).sqrt() - tau))
}

/// Loss at maximum work, adiabatic drive, high temperature.
pub fn loss_w_ad(eta_c: f64) -> Result<f64> {
    check_open_unit("0 < eta_C < 1", eta_c)?;
    Ok((1.0 - eta_c).sqrt())
}

/// Work extracted at the efficient-work optimum as a fraction of the
/// maximum extractable work, high temperature.
pub fn work_ratio(drive: Drive, tau: f64) -> Result<f64> {
    check_open_unit("0 < tau < 1", tau)?;
    let s = tau.sqrt();
    let w_max = (1.0 - s) * (1.0 - s);
    let w_opt = match drive {
        Drive::Adiabatic => {
            let eta = eta_mew_ht(1.0 - tau)?;
            let z = 1.0 - eta;
            // (1 - z)(1 - tau/z) with z - tau = eta_C - eta
            eta * ((1.0 - tau) - eta) / z
        }
        Drive::SuddenSwitch => {
            let y = optimal_z2_ss(tau)?;
            (1.0 - y) * (y - tau) / y
        }
    };
    Ok(w_opt / w_max)
}

/// [`work_ratio`] over a grid of `tau`, in grid order.
pub fn work_ratio_curves(drive: Drive, tau_grid: &[f64], exec: Execution) -> Result<Vec<f64>> {
    map_slice(exec, tau_grid, |&tau| work_ratio(drive, tau))
        .into_iter()
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveKind {
    Work,
    EfficientWork,
}

/// Engine objective evaluated from the full cycle energetics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EngineObjective {
    pub kind: ObjectiveKind,
    pub drive: Drive,
    pub regime: TempRegime,
}

impl EngineObjective {
    /// Work or efficient work. Fails outside engine operation.
    pub fn evaluate(&self, r: &Reservoirs, f: &Frequencies) -> Result<f64> {
        let lam = self.drive.adiabaticity(f);
        let e = cycle::heats_and_work(r, f, &lam, self.regime);
        let eta = cycle::efficiency(&e)?;
        Ok(match self.kind {
            ObjectiveKind::Work => e.w_ext,
            ObjectiveKind::EfficientWork => eta * e.w_ext,
        })
    }

    /// As [`Self::evaluate`] but 0 outside the engine region, giving a
    /// continuous function for optimizers.
    pub fn evaluate_or_zero(&self, r: &Reservoirs, f: &Frequencies) -> f64 {
        match self.evaluate(r, f) {
            Ok(v) => v,
            Err(Error::OperationMode {
                found:
                    OperationMode::Accelerator | OperationMode::Heater | OperationMode::Refrigerator,
                ..
            }) => 0.0,
            Err(_) => f64::NAN,
        }
    }
}
