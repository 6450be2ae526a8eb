//! Refrigerator branch: χ = ζ Q_c optima, the sudden-switch cooling window
//! and its COP bound.
//!
//! Sudden-switch quantities are high-temperature values in units of
//! `1/beta_h`, functions of `tau` only.

use serde::{Deserialize, Serialize};

use crate::cycle::{self, check_low_t_validity, Drive, Frequencies, Reservoirs, TempRegime};
use crate::engine::{BOUNDARY_SLACK, BRACKET_EPSILON};
use crate::error::{Error, Result};
use crate::numerics::{find_root, solve_cubic_trig, Bracket, CubicRoots};

fn check_zeta_c(zeta_c: f64) -> Result<()> {
    if !(zeta_c > 0.0 && zeta_c.is_finite()) {
        return Err(Error::domain("zeta_C > 0", format!("zeta_C = {zeta_c}")));
    }
    Ok(())
}

/// `tau` with Carnot COP `zeta_C`.
pub fn tau_from_zeta_c(zeta_c: f64) -> f64 {
    zeta_c / (1.0 + zeta_c)
}

/// `zeta_C` at temperature ratio `tau`.
pub fn zeta_c_from_tau(tau: f64) -> f64 {
    tau / (1.0 - tau)
}

/// Open interval of compression ratios `z` for which the cycle cools.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoolingWindow {
    pub z_min: f64,
    pub z_max: f64,
}

impl CoolingWindow {
    pub fn new(drive: Drive, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::domain("0 < tau < 1", format!("tau = {tau}")));
        }
        match drive {
            Drive::Adiabatic => Ok(Self {
                z_min: 0.0,
                z_max: tau,
            }),
            Drive::SuddenSwitch => {
                if tau <= 0.5 {
                    return Err(Error::TauTooSmall { tau });
                }
                Ok(Self {
                    z_min: 0.0,
                    z_max: (2.0 * tau - 1.0).sqrt(),
                })
            }
        }
    }

    pub fn contains(&self, z: f64) -> bool {
        z > self.z_min && z < self.z_max
    }
}

/// High-temperature adiabatic χ at compression ratio `z ∈ (0, tau]`.
pub fn chi_ht(z: f64, r: &Reservoirs) -> Result<f64> {
    let tau = r.tau();
    if !(z > 0.0 && z <= tau * (1.0 + BOUNDARY_SLACK)) {
        return Err(Error::domain(
            "0 < z <= tau (cooling)",
            format!("z = {z}, tau = {tau}"),
        ));
    }
    Ok(z / (1.0 - z) * (1.0 / r.beta_c() - z / r.beta_h()))
}

/// COP at maximum χ, high temperature, adiabatic drive.
pub fn zeta_chi_ht(zeta_c: f64) -> Result<f64> {
    check_zeta_c(zeta_c)?;
    Ok((1.0 + zeta_c).sqrt() - 1.0)
}

/// Low-temperature adiabatic χ. Requires `beta_i omega_i >= 5`.
pub fn chi_lt(f: &Frequencies, r: &Reservoirs) -> Result<f64> {
    check_low_t_validity(r, f)?;
    if f.omega_c() == f.omega_h() {
        return Err(Error::domain(
            "omega_h > omega_c",
            format!("omega_c = omega_h = {}", f.omega_c()),
        ));
    }
    Ok(chi_lt_unchecked(f.omega_c(), f.omega_h(), r))
}

/// The low-temperature χ formula without the validity guard.
pub fn chi_lt_unchecked(omega_c: f64, omega_h: f64, r: &Reservoirs) -> f64 {
    omega_c * omega_c / (omega_h - omega_c)
        * ((-r.beta_c() * omega_c).exp() - (-r.beta_h() * omega_h).exp())
}

/// Stationarity residuals of low-temperature χ, each written as
/// `e^{β_h ω_h − β_c ω_c} − rhs`: first the `ω_h` condition, then `ω_c`.
pub fn chi_lt_stationarity(omega_c: f64, omega_h: f64, r: &Reservoirs) -> [f64; 2] {
    let zeta = omega_c / (omega_h - omega_c);
    let zeta_c = r.zeta_carnot();
    let x = r.beta_c() * omega_c;
    let lhs = (r.beta_h() * omega_h - x).exp();
    [
        lhs - (1.0 + x * zeta_c / (zeta * (1.0 + zeta_c))),
        lhs - (1.0 + x / (2.0 + zeta - x)),
    ]
}

/// Residual whose root in `(0, zeta_C)` is the low-temperature COP at
/// maximum χ. Positive near 0, negative at `zeta_C`.
pub fn zeta_chi_lt_residual(zeta: f64, zeta_c: f64) -> f64 {
    (2.0 * zeta_c - zeta) * (zeta_c - zeta) / (zeta * zeta_c * (1.0 + zeta_c))
        - ((2.0 + zeta) * zeta_c / (zeta * (1.0 + zeta_c))).ln()
}

/// COP at maximum χ, low temperature, adiabatic drive.
pub fn zeta_chi_lt(zeta_c: f64) -> Result<f64> {
    check_zeta_c(zeta_c)?;
    let (lo, hi) = (BRACKET_EPSILON * zeta_c, zeta_c);
    let br = Bracket::new(lo, hi)?;
    find_root(|z| zeta_chi_lt_residual(z, zeta_c), br, 1e-16 * zeta_c).map_err(|e| match e {
        Error::NoSignChange { .. } => Error::RootNotBracketed {
            equation: "low-temperature chi condition",
            lo,
            hi,
        },
        other => other,
    })
}

/// High-temperature sudden-switch cooling load and input work, units of
/// `1/beta_h`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuddenSwitchFridge {
    pub q_c: f64,
    pub w_in: f64,
}

fn check_ss_window(z: f64, tau: f64) -> Result<()> {
    if tau.is_nan() || tau >= 1.0 {
        return Err(Error::domain("tau < 1", format!("tau = {tau}")));
    }
    if tau <= 0.5 {
        return Err(Error::TauTooSmall { tau });
    }
    if !(z > 0.0 && z * z <= (2.0 * tau - 1.0) * (1.0 + BOUNDARY_SLACK)) {
        return Err(Error::CoolingWindow { z, tau });
    }
    Ok(())
}

pub fn ss_cooling(z: f64, tau: f64) -> Result<SuddenSwitchFridge> {
    check_ss_window(z, tau)?;
    let z2 = z * z;
    Ok(SuddenSwitchFridge {
        q_c: tau - 0.5 * (z2 + 1.0),
        w_in: (z2 - 1.0) * (z2 - tau) / (2.0 * z2),
    })
}

/// Sudden-switch COP at high temperature.
pub fn zeta_ss(z: f64, tau: f64) -> Result<f64> {
    check_ss_window(z, tau)?;
    let z2 = z * z;
    Ok(z2 * (2.0 * tau - z2 - 1.0) / ((z2 - 1.0) * (z2 - tau)))
}

/// Sudden-switch χ = ζ Q_c, units of `1/beta_h`.
pub fn chi_ss(z: f64, tau: f64) -> Result<f64> {
    let q = ss_cooling(z, tau)?;
    Ok(zeta_ss(z, tau)? * q.q_c)
}

/// Largest sudden-switch COP over the cooling window. The window closes at
/// `zeta_C = 1`, where the bound is 0.
pub fn zeta_max_ss(zeta_c: f64) -> Result<f64> {
    check_zeta_c(zeta_c)?;
    if zeta_c < 1.0 {
        return Err(Error::TauTooSmall {
            tau: tau_from_zeta_c(zeta_c),
        });
    }
    Ok(1.0 + 3.0 * zeta_c - 2.0 * (2.0 * zeta_c * (1.0 + zeta_c)).sqrt())
}

/// The cubic in `y = z²` whose window root maximizes sudden-switch χ.
pub fn chi_ss_cubic(tau: f64) -> Result<CubicRoots> {
    solve_cubic_trig(1.0, -3.0, 3.0 * tau, tau * (1.0 - 2.0 * tau))
}

/// Compression ratio maximizing sudden-switch χ: the square root of the
/// unique cubic root inside the cooling window `0 < z² < 2 tau − 1`.
pub fn chi_ss_optimum_z(tau: f64) -> Result<f64> {
    CoolingWindow::new(Drive::SuddenSwitch, tau)?;
    let cubic = chi_ss_cubic(tau)?;
    let y_max = 2.0 * tau - 1.0;
    let inside: Vec<f64> = cubic
        .roots
        .iter()
        .copied()
        .filter(|&y| y > 0.0 && y < y_max)
        .collect();
    match inside.as_slice() {
        [y] => Ok(y.sqrt()),
        _ => Err(Error::NoRootInWindow { tau }),
    }
}

fn zeta_chi_ss_f(zeta: f64, tau: f64) -> f64 {
    let s = (zeta + 2.0) * tau + zeta - 1.0;
    (s * s - 4.0 * zeta * (zeta + 1.0) * tau).max(0.0).sqrt()
}

/// Residual whose root in `(0, zeta_max)` is the sudden-switch COP at
/// maximum χ. Positive near 0, negative near `zeta_max`.
pub fn zeta_chi_ss_residual(zeta: f64, tau: f64) -> f64 {
    let f = zeta_chi_ss_f(zeta, tau);
    let t1 = tau - 1.0;
    zeta * (zeta + 1.0) * t1 * (3.0 * f + zeta * t1 + 2.0 * tau + 1.0)
        + f * (f + 3.0 * zeta * t1 + 2.0 * tau - 1.0)
}

/// COP at maximum χ, sudden switch, high temperature. Returns 0 at the
/// window closure `tau = 1/2`.
pub fn zeta_chi_ss(tau: f64) -> Result<f64> {
    if tau == 0.5 {
        return Ok(0.0);
    }
    CoolingWindow::new(Drive::SuddenSwitch, tau)?;
    let zeta_max = zeta_max_ss(zeta_c_from_tau(tau))?;
    let (lo, hi) = (
        BRACKET_EPSILON * zeta_max,
        zeta_max * (1.0 - BRACKET_EPSILON),
    );
    let br = Bracket::new(lo, hi)?;
    find_root(|z| zeta_chi_ss_residual(z, tau), br, 1e-16 * zeta_max).map_err(|e| match e {
        Error::NoSignChange { .. } => Error::RootNotBracketed {
            equation: "sudden-switch chi condition",
            lo,
            hi,
        },
        other => other,
    })
}

/// The smaller `z²` at which the sudden-switch COP equals `zeta`.
pub fn z_squared_for_cop(zeta: f64, tau: f64) -> Result<f64> {
    CoolingWindow::new(Drive::SuddenSwitch, tau)?;
    let zeta_max = zeta_max_ss(zeta_c_from_tau(tau))?;
    if !(zeta >= 0.0 && zeta <= zeta_max * (1.0 + BOUNDARY_SLACK)) {
        return Err(Error::domain(
            "0 <= zeta <= zeta_max",
            format!("zeta = {zeta}, zeta_max = {zeta_max}"),
        ));
    }
    let f = zeta_chi_ss_f(zeta, tau);
    Ok((zeta * tau - f + zeta + 2.0 * tau - 1.0) / (2.0 * (zeta + 1.0)))
}

/// Refrigerator objective χ evaluated from the full cycle energetics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChiObjective {
    pub drive: Drive,
    pub regime: TempRegime,
}

impl ChiObjective {
    /// `ζ Q_c`. Fails outside refrigerator operation.
    pub fn evaluate(&self, r: &Reservoirs, f: &Frequencies) -> Result<f64> {
        let lam = self.drive.adiabaticity(f);
        let e = cycle::heats_and_work(r, f, &lam, self.regime);
        Ok(cycle::cop(&e)? * e.q_c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::Adiabaticity;
    use crate::numerics::{maximize_1d, maximize_2d};
    use proptest::prelude::*;

    fn grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn zeta_chi_ht_values_and_oracle() {
        assert_eq!(zeta_chi_ht(3.0).unwrap(), 1.0);
        assert!((zeta_chi_ht(1.0).unwrap() - (2f64.sqrt() - 1.0)).abs() < 1e-16);
        for zeta_c in grid(50, 0.05, 9.05) {
            let r = Reservoirs::from_tau(1.0, tau_from_zeta_c(zeta_c)).unwrap();
            let br = Bracket::new(1e-12, r.tau()).unwrap();
            let opt = maximize_1d(|z| chi_ht(z, &r).unwrap(), br, 1e-12).unwrap();
            let zeta = opt.x() / (1.0 - opt.x());
            assert!(
                (zeta - zeta_chi_ht(zeta_c).unwrap()).abs() < 1e-8,
                "zeta_C {zeta_c}"
            );
        }
    }

    #[test]
    fn chi_objective_matches_closed_form() {
        let r = Reservoirs::new(2.0, 0.5).unwrap();
        let obj = ChiObjective {
            drive: Drive::Adiabatic,
            regime: TempRegime::HighT,
        };
        let f = Frequencies::new(0.1, 1.0).unwrap();
        assert!((obj.evaluate(&r, &f).unwrap() - chi_ht(0.1, &r).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn chi_lt_reference_and_guard() {
        let r = Reservoirs::new(1.0, 0.5).unwrap();
        let v = chi_lt(&Frequencies::new(6.0, 14.0).unwrap(), &r).unwrap();
        assert!((v - 0.0070509159500032899677).abs() < 1e-17);
        assert!(matches!(
            chi_lt(&Frequencies::new(1.5, 14.0).unwrap(), &r),
            Err(Error::ValidityRegion { .. })
        ));
        assert_eq!(chi_lt_unchecked(5.0, 10.0, &r), 0.0);
        assert!(chi_lt_unchecked(1e-12, 10.0, &r).abs() < 1e-20);
    }

    #[test]
    fn zeta_chi_lt_roots() {
        for (zeta_c, want) in [
            (0.01, 0.0052295),
            (0.1, 0.0511219),
            (0.5, 0.2344842),
            (1.0, 0.430624903821161),
            (3.0, 1.0311942),
            (10.0, 2.3652453),
            (50.0, 6.2072072),
            (100.0, 9.1204569),
        ] {
            let got = zeta_chi_lt(zeta_c).unwrap();
            assert!((got - want).abs() < 5e-7 * want.max(1.0), "{zeta_c}: {got}");
        }
        let five = zeta_chi_lt(5.0).unwrap();
        assert!(five < 5.0);
    }

    #[test]
    fn zeta_chi_lt_two_dimensional_oracle() {
        let r = Reservoirs::new(1.0, 0.5).unwrap();
        let opt =
            maximize_2d(|p| chi_lt_unchecked(p[0], p[1], &r), [1.0, 4.0], 0.5, 1e-10).unwrap();
        let (wc, wh) = (opt.arg[0], opt.arg[1]);
        assert!(
            (wc - 1.56937510).abs() < 1e-6 && (wh - 5.21378833).abs() < 1e-6,
            "{wc} {wh}"
        );
        let res = chi_lt_stationarity(wc, wh, &r);
        assert!(res[0].abs() < 1e-6 && res[1].abs() < 1e-6, "{res:?}");
        let zeta = wc / (wh - wc);
        assert!((zeta - zeta_chi_lt(1.0).unwrap()).abs() < 1e-6);
        // the optimum sits at beta_c omega_c = 2 - zeta / zeta_C
        assert!((wc - (2.0 - zeta)).abs() < 1e-6);
    }

    #[test]
    fn ss_cooling_references() {
        let c = ss_cooling(0.3, 0.6).unwrap();
        assert!((c.q_c - 0.055).abs() < 1e-15);
        assert!((c.w_in - 2.5783333333333333333).abs() < 1e-15);
        assert!((zeta_ss(0.5, 0.75).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        let edge = (2.0f64 * 0.75 - 1.0).sqrt();
        assert!(ss_cooling(edge, 0.75).unwrap().q_c.abs() < 1e-15);
        assert!(zeta_ss(edge, 0.75).unwrap().abs() < 1e-15);
        assert!(matches!(
            ss_cooling(0.3, 0.4),
            Err(Error::TauTooSmall { .. })
        ));
        assert!(matches!(
            ss_cooling(0.9, 0.6),
            Err(Error::CoolingWindow { .. })
        ));
    }

    #[test]
    fn ss_cooling_matches_cycle() {
        let tau = 0.8;
        let r = Reservoirs::from_tau(1.5, tau).unwrap();
        for z in [0.2, 0.5, 0.7] {
            let f = Frequencies::new(z * 2.0, 2.0).unwrap();
            let e =
                cycle::heats_and_work(&r, &f, &Adiabaticity::sudden_switch(&f), TempRegime::HighT);
            let c = ss_cooling(z, tau).unwrap();
            assert!((e.q_c * r.beta_h() - c.q_c).abs() < 1e-13);
            assert!((e.w_in() * r.beta_h() - c.w_in).abs() < 1e-13);
            assert!((c.q_c / c.w_in - zeta_ss(z, tau).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn zeta_max_ss_values_and_oracle() {
        assert_eq!(zeta_max_ss(1.0).unwrap(), 0.0);
        assert!((zeta_max_ss(3.0).unwrap() - (10.0 - 4.0 * 6f64.sqrt())).abs() < 1e-14);
        assert!(matches!(zeta_max_ss(0.5), Err(Error::TauTooSmall { .. })));
        for zeta_c in grid(40, 1.05, 20.0) {
            let tau = tau_from_zeta_c(zeta_c);
            let window = CoolingWindow::new(Drive::SuddenSwitch, tau).unwrap();
            let br = Bracket::new(1e-9, window.z_max).unwrap();
            let opt = maximize_1d(|z| zeta_ss(z, tau).unwrap(), br, 1e-12).unwrap();
            let closed = zeta_max_ss(zeta_c).unwrap();
            assert!((opt.value - closed).abs() < 1e-8, "{zeta_c}");
            assert!(closed < zeta_c);
        }
    }

    #[test]
    fn cubic_window_root() {
        let r = chi_ss_cubic(0.75).unwrap();
        assert!((r.discriminant - 1.265625).abs() < 1e-12);
        let z = chi_ss_optimum_z(0.75).unwrap();
        assert!((z * z - 0.2339555568810220).abs() < 1e-14);
        for tau in grid(49, 0.51, 0.99) {
            let z = chi_ss_optimum_z(tau).unwrap();
            let window = CoolingWindow::new(Drive::SuddenSwitch, tau).unwrap();
            let br = Bracket::new(1e-9, window.z_max).unwrap();
            let opt = maximize_1d(|z| chi_ss(z, tau).unwrap(), br, 1e-12).unwrap();
            assert!((z - opt.x()).abs() < 1e-8, "tau {tau}: {z} vs {}", opt.x());
        }
        assert!(chi_ss_optimum_z(0.5 + 1e-6).unwrap() < 1e-2);
        assert!(matches!(
            chi_ss_optimum_z(0.4),
            Err(Error::TauTooSmall { .. })
        ));
    }

    #[test]
    fn zeta_chi_ss_two_paths() {
        assert!((zeta_chi_ss(0.75).unwrap() - 0.157451384853202).abs() < 1e-13);
        assert_eq!(zeta_chi_ss(0.5).unwrap(), 0.0);
        for tau in grid(49, 0.51, 0.99) {
            let z = chi_ss_optimum_z(tau).unwrap();
            let a = zeta_chi_ss(tau).unwrap();
            let b = zeta_ss(z, tau).unwrap();
            assert!((a - b).abs() < 1e-8, "tau {tau}: {a} vs {b}");
            let y = z_squared_for_cop(a, tau).unwrap();
            assert!((y - z * z).abs() < 1e-7, "tau {tau}");
        }
        let zeta_c = zeta_c_from_tau(0.9);
        assert!(zeta_chi_ss(0.9).unwrap() < zeta_chi_ht(zeta_c).unwrap());
    }

    #[test]
    fn cop_ordering() {
        for zeta_c in grid(161, 1.05, 9.05) {
            let lt = zeta_chi_lt(zeta_c).unwrap();
            let ht = zeta_chi_ht(zeta_c).unwrap();
            let ss = zeta_chi_ss(tau_from_zeta_c(zeta_c)).unwrap();
            assert!(lt >= ht && ht >= ss && lt <= zeta_c, "zeta_C {zeta_c}");
        }
    }

    proptest! {
        #[test]
        fn zeta_ss_below_bound(tau in 0.5001f64..0.9999, s in 1e-6f64..1.0) {
            let z = (s * (2.0 * tau - 1.0)).sqrt();
            let zeta = zeta_ss(z, tau).unwrap();
            prop_assert!(zeta <= zeta_max_ss(zeta_c_from_tau(tau)).unwrap() + 1e-12);
        }

        #[test]
        fn discriminant_positive(tau in 1e-6f64..(1.0 - 1e-6)) {
            let d = chi_ss_cubic(tau).unwrap().discriminant;
            let closed = 108.0 * (1.0 - tau).powi(3) * tau;
            prop_assert!(d > 0.0);
            // absolute slack: rounding of 3 tau and tau (1 - 2 tau) perturbs D by ~1e-14
            prop_assert!((d - closed).abs() <= 1e-12 * closed + 1e-13);
        }
    }
}
