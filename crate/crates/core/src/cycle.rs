//! Energetics of the four-stroke harmonic Otto cycle.
//!
//! Units: `k_B = ħ = 1`. Energies are in units of frequency, temperatures
//! enter only through inverse temperatures `beta`. Heat and work fluxes
//! entering the oscillator are positive.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this argument the exact `coth(x/2)` switches to its Laurent series.
const COTH_SERIES_BELOW: f64 = 1e-6;

/// Cold and hot bath inverse temperatures, `beta_c > beta_h > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reservoirs {
    beta_c: f64,
    beta_h: f64,
}

impl Reservoirs {
    pub fn new(beta_c: f64, beta_h: f64) -> Result<Self> {
        if !(beta_h.is_finite() && beta_c.is_finite() && beta_h > 0.0) {
            return Err(Error::domain(
                "beta_h > 0",
                format!("beta_c = {beta_c}, beta_h = {beta_h}"),
            ));
        }
        if beta_c <= beta_h {
            return Err(Error::domain(
                "beta_c > beta_h",
                format!("beta_c = {beta_c}, beta_h = {beta_h}"),
            ));
        }
        Ok(Self { beta_c, beta_h })
    }

    /// Reservoirs with the hot bath at `beta_h` and temperature ratio `tau`.
    pub fn from_tau(beta_h: f64, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::domain("0 < tau < 1", format!("tau = {tau}")));
        }
        Self::new(beta_h / tau, beta_h)
    }

    pub fn beta_c(&self) -> f64 {
        self.beta_c
    }

    pub fn beta_h(&self) -> f64 {
        self.beta_h
    }

    /// `tau = beta_h / beta_c`, in (0, 1).
    pub fn tau(&self) -> f64 {
        self.beta_h / self.beta_c
    }

    /// Carnot efficiency `1 - tau`.
    pub fn eta_carnot(&self) -> f64 {
        1.0 - self.tau()
    }

    /// Carnot coefficient of performance `beta_h / (beta_c - beta_h)`.
    pub fn zeta_carnot(&self) -> f64 {
        self.beta_h / (self.beta_c - self.beta_h)
    }
}

/// Oscillator frequencies on the cold and hot isochores.
///
/// `omega_c == omega_h` is accepted as the degenerate no-compression cycle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frequencies {
    omega_c: f64,
    omega_h: f64,
}

impl Frequencies {
    pub fn new(omega_c: f64, omega_h: f64) -> Result<Self> {
        if !(omega_c.is_finite() && omega_h.is_finite() && omega_c > 0.0) {
            return Err(Error::domain(
                "omega_c > 0",
                format!("omega_c = {omega_c}, omega_h = {omega_h}"),
            ));
        }
        if omega_c > omega_h {
            return Err(Error::domain(
                "omega_h >= omega_c",
                format!("omega_c = {omega_c}, omega_h = {omega_h}"),
            ));
        }
        Ok(Self { omega_c, omega_h })
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn omega_h(&self) -> f64 {
        self.omega_h
    }

    /// Compression ratio `z = omega_c / omega_h`.
    pub fn z(&self) -> f64 {
        self.omega_c / self.omega_h
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DriveKind {
    Adiabatic,
    SuddenSwitch,
    Custom,
}

/// The two limiting drives for which closed forms exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Drive {
    Adiabatic,
    SuddenSwitch,
}

impl Drive {
    pub fn adiabaticity(self, f: &Frequencies) -> Adiabaticity {
        match self {
            Drive::Adiabatic => Adiabaticity::adiabatic(),
            Drive::SuddenSwitch => Adiabaticity::sudden_switch(f),
        }
    }
}

/// Smallest `beta * omega` at which low-temperature expressions are trusted.
pub const LOW_T_MIN_PRODUCT: f64 = 5.0;

/// Fails with [`Error::ValidityRegion`] unless both `beta_c omega_c` and
/// `beta_h omega_h` reach [`LOW_T_MIN_PRODUCT`].
pub fn check_low_t_validity(r: &Reservoirs, f: &Frequencies) -> Result<()> {
    for (which, product) in [
        ("beta_c*omega_c", r.beta_c * f.omega_c),
        ("beta_h*omega_h", r.beta_h * f.omega_h),
    ] {
        if product < LOW_T_MIN_PRODUCT {
            return Err(Error::ValidityRegion {
                which,
                product,
                min: LOW_T_MIN_PRODUCT,
            });
        }
    }
    Ok(())
}

/// Adiabaticity parameter `lambda >= 1` of the two unitary strokes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Adiabaticity {
    lambda: f64,
    source: DriveKind,
}

impl Adiabaticity {
    /// Slack below 1 tolerated for numerically computed values.
    pub const TOLERANCE: f64 = 1e-9;

    pub fn adiabatic() -> Self {
        Self {
            lambda: 1.0,
            source: DriveKind::Adiabatic,
        }
    }

    /// Instantaneous quench, `lambda = (z^2 + 1) / (2z)`.
    pub fn sudden_switch(f: &Frequencies) -> Self {
        let (wc, wh) = (f.omega_c, f.omega_h);
        Self {
            lambda: (wc * wc + wh * wh) / (2.0 * wc * wh),
            source: DriveKind::SuddenSwitch,
        }
    }

    /// Externally computed `lambda`. Values within [`Self::TOLERANCE`] of 1
    /// are treated as adiabatic.
    pub fn custom(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 1.0 - Self::TOLERANCE {
            return Err(Error::domain("lambda >= 1", format!("lambda = {lambda}")));
        }
        if lambda <= 1.0 + Self::TOLERANCE {
            return Ok(Self::adiabatic());
        }
        Ok(Self {
            lambda,
            source: DriveKind::Custom,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn source(&self) -> DriveKind {
        self.source
    }
}

/// Thermal occupation model for `coth(beta * omega / 2)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TempRegime {
    #[default]
    Exact,
    /// `coth(x/2) ≈ 2/x`
    HighT,
    /// `coth(x/2) ≈ 1 + 2 e^{-x}`
    LowT,
}

impl TempRegime {
    /// `coth(x / 2)` for `x = beta * omega > 0`, approximated per regime.
    pub fn coth_half(self, x: f64) -> f64 {
        let (a, b) = self.coth_half_split(x);
        a + b
    }

    /// `coth(x / 2)` as `(a, b)` with `a` either 0 or 1 and `b` carrying all
    /// of the temperature dependence. Heat differences then cancel the unit
    /// parts exactly, which matters once `e^{-x}` falls below an ulp of 1.
    fn coth_half_split(self, x: f64) -> (f64, f64) {
        match self {
            TempRegime::Exact if x < COTH_SERIES_BELOW => (0.0, 2.0 / x + x / 6.0),
            TempRegime::Exact => (1.0, 2.0 / x.exp_m1()),
            TempRegime::HighT => (0.0, 2.0 / x),
            TempRegime::LowT => (1.0, 2.0 * (-x).exp()),
        }
    }
}

/// `coth(x/2) = 1 + 2/(e^x - 1)`, with the Laurent series near zero.
pub fn coth_half(x: f64) -> f64 {
    TempRegime::Exact.coth_half(x)
}

/// Mean oscillator energies at the four corners of the cycle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanEnergies {
    pub h_a: f64,
    pub h_b: f64,
    pub h_c: f64,
    pub h_d: f64,
}

/// Mean energies, heats and work of one cycle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleEnergetics {
    pub energies: MeanEnergies,
    pub q_h: f64,
    pub q_c: f64,
    /// Extracted work `q_h + q_c`.
    pub w_ext: f64,
}

impl CycleEnergetics {
    /// Work invested, `-w_ext`.
    pub fn w_in(&self) -> f64 {
        -self.w_ext
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperationMode {
    Engine,
    Refrigerator,
    Accelerator,
    Heater,
}

pub fn mean_energies(
    r: &Reservoirs,
    f: &Frequencies,
    lam: &Adiabaticity,
    regime: TempRegime,
) -> MeanEnergies {
    let (wc, wh, lambda) = (f.omega_c, f.omega_h, lam.lambda);
    let n_c = regime.coth_half(r.beta_c * wc);
    let n_h = regime.coth_half(r.beta_h * wh);
    MeanEnergies {
        h_a: 0.5 * wc * n_c,
        h_b: 0.5 * wh * lambda * n_c,
        h_c: 0.5 * wh * n_h,
        h_d: 0.5 * wc * lambda * n_h,
    }
}

pub fn heats_and_work(
    r: &Reservoirs,
    f: &Frequencies,
    lam: &Adiabaticity,
    regime: TempRegime,
) -> CycleEnergetics {
    let energies = mean_energies(r, f, lam, regime);
    let (wc, wh, lambda) = (f.omega_c, f.omega_h, lam.lambda);
    let (a_c, b_c) = regime.coth_half_split(r.beta_c * wc);
    let (a_h, b_h) = regime.coth_half_split(r.beta_h * wh);
    // h_C - h_B and h_A - h_D, grouped so equal unit parts cancel exactly
    let q_h = 0.5 * wh * ((a_h - lambda * a_c) + (b_h - lambda * b_c));
    let q_c = 0.5 * wc * ((a_c - lambda * a_h) + (b_c - lambda * b_h));
    CycleEnergetics {
        energies,
        q_h,
        q_c,
        w_ext: q_h + q_c,
    }
}

/// Classifies the cycle by the signs of its fluxes.
pub fn operation_mode(e: &CycleEnergetics) -> OperationMode {
    if e.w_ext > 0.0 && e.q_h > 0.0 {
        OperationMode::Engine
    } else if e.q_c > 0.0 && e.q_h < 0.0 && e.w_ext < 0.0 {
        OperationMode::Refrigerator
    } else if e.q_h > 0.0 {
        OperationMode::Accelerator
    } else {
        OperationMode::Heater
    }
}

/// Engine efficiency `w_ext / q_h`.
pub fn efficiency(e: &CycleEnergetics) -> Result<f64> {
    match operation_mode(e) {
        OperationMode::Engine => Ok(e.w_ext / e.q_h),
        found => Err(Error::OperationMode {
            expected: OperationMode::Engine,
            found,
        }),
    }
}

/// Refrigerator coefficient of performance `q_c / w_in`.
pub fn cop(e: &CycleEnergetics) -> Result<f64> {
    match operation_mode(e) {
        OperationMode::Refrigerator => Ok(e.q_c / e.w_in()),
        found => Err(Error::OperationMode {
            expected: OperationMode::Refrigerator,
            found,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ss(r: &Reservoirs, f: &Frequencies, regime: TempRegime) -> CycleEnergetics {
        heats_and_work(r, f, &Adiabaticity::sudden_switch(f), regime)
    }

    #[test]
    fn reservoir_validation() {
        assert!(Reservoirs::new(1.0, 1.0).is_err());
        assert!(Reservoirs::new(0.5, 1.0).is_err());
        assert!(Reservoirs::new(1.0, 0.0).is_err());
        let r = Reservoirs::new(4.0, 1.0).unwrap();
        assert_eq!(r.tau(), 0.25);
        assert_eq!(r.eta_carnot(), 0.75);
        assert_relative_eq!(r.zeta_carnot(), 1.0 / 3.0);
    }

    #[test]
    fn frequency_validation() {
        assert!(Frequencies::new(2.0, 1.0).is_err());
        assert!(Frequencies::new(0.0, 1.0).is_err());
        assert!(Frequencies::new(f64::NAN, 1.0).is_err());
        assert_eq!(Frequencies::new(1.0, 4.0).unwrap().z(), 0.25);
    }

    #[test]
    fn custom_lambda() {
        assert!(Adiabaticity::custom(0.9).is_err());
        assert_eq!(
            Adiabaticity::custom(1.0 + 1e-12).unwrap().source(),
            DriveKind::Adiabatic
        );
        assert_eq!(Adiabaticity::custom(1.3).unwrap().lambda(), 1.3);
    }

    #[test]
    fn coth_matches_tanh() {
        for x in [1e-8, 1e-5, 0.1, 1.0, 7.0, 40.0] {
            assert_relative_eq!(coth_half(x), 1.0 / (x / 2.0).tanh(), max_relative = 1e-14);
        }
    }

    #[test]
    fn deep_low_temperature_heats_keep_precision() {
        // e^{-beta omega} is far below an ulp of 1 at both baths
        let r = Reservoirs::new(11.554409661647213, 1.5145554317606353).unwrap();
        let f = Frequencies::new(5.537687030109151, 24.545063850517607).unwrap();
        let e = heats_and_work(&r, &f, &Adiabaticity::adiabatic(), TempRegime::Exact);
        let n = |x: f64| 1.0 / x.exp_m1();
        let q_h = f.omega_h * (n(r.beta_h * f.omega_h) - n(r.beta_c * f.omega_c));
        assert_relative_eq!(e.q_h, q_h, max_relative = 1e-14);
        assert_relative_eq!(efficiency(&e).unwrap(), 1.0 - f.z(), max_relative = 1e-12);
    }

    #[test]
    fn energies_equal_frequencies() {
        let r = Reservoirs::new(2.0, 1.0).unwrap();
        let f = Frequencies::new(1.0, 1.0).unwrap();
        let e = mean_energies(&r, &f, &Adiabaticity::adiabatic(), TempRegime::Exact);
        assert_relative_eq!(e.h_a, 0.5 / 1f64.tanh(), max_relative = 1e-15);
        assert_relative_eq!(e.h_c, 0.5 / 0.5f64.tanh(), max_relative = 1e-15);
    }

    #[test]
    fn adiabatic_compression_scales_energy() {
        let r = Reservoirs::new(1.3, 0.2).unwrap();
        let f = Frequencies::new(0.7, 3.1).unwrap();
        let e = mean_energies(&r, &f, &Adiabaticity::adiabatic(), TempRegime::Exact);
        assert_relative_eq!(e.h_b / e.h_a, 3.1 / 0.7, max_relative = 1e-15);
    }

    #[test]
    fn energies_against_reference() {
        // 40-digit reference evaluation
        let r = Reservoirs::new(1.0, 0.2).unwrap();
        let f = Frequencies::new(1.0, 2.0).unwrap();
        let e = mean_energies(
            &r,
            &f,
            &Adiabaticity::custom(1.25).unwrap(),
            TempRegime::Exact,
        );
        assert_relative_eq!(e.h_a, 1.0819767068693264244, max_relative = 1e-14);
        assert_relative_eq!(e.h_b, 2.704941767173316061, max_relative = 1e-14);
        assert_relative_eq!(e.h_c, 5.0664895634394727136, max_relative = 1e-14);
        assert_relative_eq!(e.h_d, 3.166555977149670446, max_relative = 1e-14);
    }

    #[test]
    fn sudden_switch_heats_against_reference() {
        let r = Reservoirs::new(1.0, 1.0 / 12.0).unwrap();
        let f = Frequencies::new(3.0, 9.0).unwrap();
        let lam = Adiabaticity::sudden_switch(&f);
        assert_relative_eq!(lam.lambda(), 5.0 / 3.0, max_relative = 1e-15);
        let e = heats_and_work(&r, &f, &lam, TempRegime::Exact);
        assert_relative_eq!(e.q_h, 4.27136076225225236, max_relative = 1e-13);
        assert_relative_eq!(e.q_c, -5.3190885825379497217, max_relative = 1e-13);
        assert_relative_eq!(e.w_ext, -1.0477278202856973616, max_relative = 1e-13);
        assert_eq!(operation_mode(&e), OperationMode::Accelerator);
    }

    #[test]
    fn no_compression_no_work() {
        let r = Reservoirs::new(3.0, 0.5).unwrap();
        let f = Frequencies::new(1.7, 1.7).unwrap();
        let e = heats_and_work(&r, &f, &Adiabaticity::adiabatic(), TempRegime::Exact);
        assert_relative_eq!(e.q_h, -e.q_c, max_relative = 1e-15);
        assert!(e.w_ext.abs() < 1e-15);
    }

    #[test]
    fn high_t_work_peaks_at_sqrt_tau() {
        let r = Reservoirs::new(2.0, 0.5).unwrap();
        let tau: f64 = r.tau();
        let w = |z: f64| {
            let f = Frequencies::new(z, 1.0).unwrap();
            heats_and_work(&r, &f, &Adiabaticity::adiabatic(), TempRegime::HighT).w_ext
        };
        let peak = w(tau.sqrt());
        // grid maximization of (1 - z)/beta_h + (z - 1)/(beta_c z)
        let grid_max = (1..10_000)
            .map(|i| i as f64 / 10_000.0)
            .map(|z| (1.0 - z) / 0.5 + (z - 1.0) / (2.0 * z))
            .fold(f64::MIN, f64::max);
        assert_relative_eq!(peak, grid_max, max_relative = 1e-7);
        assert!(peak >= grid_max);
    }

    #[test]
    fn adiabatic_efficiency_and_cop() {
        let r = Reservoirs::new(1.0, 0.1).unwrap();
        let f = Frequencies::new(2.0, 5.0).unwrap();
        let e = heats_and_work(&r, &f, &Adiabaticity::adiabatic(), TempRegime::Exact);
        assert_relative_eq!(efficiency(&e).unwrap(), 0.6, max_relative = 1e-14);
        assert!(cop(&e).is_err());

        let r = Reservoirs::new(2.0, 1.0).unwrap();
        let f = Frequencies::new(1.0, 4.0).unwrap();
        let e = heats_and_work(&r, &f, &Adiabaticity::adiabatic(), TempRegime::Exact);
        assert_eq!(operation_mode(&e), OperationMode::Refrigerator);
        assert_relative_eq!(cop(&e).unwrap(), 1.0 / 3.0, max_relative = 1e-14);
        assert!(matches!(
            efficiency(&e),
            Err(Error::OperationMode {
                found: OperationMode::Refrigerator,
                ..
            })
        ));
    }

    #[test]
    fn adiabatic_cop_half() {
        let r = Reservoirs::new(1.0, 0.9).unwrap();
        let f = Frequencies::new(1.0, 2.0).unwrap();
        let e = heats_and_work(&r, &f, &Adiabaticity::adiabatic(), TempRegime::HighT);
        assert_relative_eq!(cop(&e).unwrap(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn sudden_switch_boundaries_high_t() {
        let r = Reservoirs::new(1.0, 0.25).unwrap();
        // z^2 = tau: zero work, zero efficiency
        let f = Frequencies::new(0.5, 1.0).unwrap();
        let e = ss(&r, &f, TempRegime::HighT);
        assert!(e.w_ext.abs() < 1e-15);
        assert_ne!(operation_mode(&e), OperationMode::Engine);
        let f = Frequencies::new(0.5 + 1e-6, 1.0).unwrap();
        assert!(efficiency(&ss(&r, &f, TempRegime::HighT)).unwrap() < 1e-5);

        // z^2 = 2 tau - 1: cooling switches off
        let r = Reservoirs::new(1.0, 0.625).unwrap();
        let f = Frequencies::new(0.5, 1.0).unwrap();
        let e = ss(&r, &f, TempRegime::HighT);
        assert!(e.q_c.abs() < 1e-15);
        let f = Frequencies::new(0.5 - 1e-6, 1.0).unwrap();
        let z = cop(&ss(&r, &f, TempRegime::HighT)).unwrap();
        assert!(z > 0.0 && z < 1e-5);
    }

    #[test]
    fn mode_examples() {
        let r = Reservoirs::new(1.0, 0.3).unwrap();
        let ad = Adiabaticity::adiabatic();
        let e = heats_and_work(
            &r,
            &Frequencies::new(0.6, 1.0).unwrap(),
            &ad,
            TempRegime::HighT,
        );
        assert_eq!(operation_mode(&e), OperationMode::Engine);
        let e = heats_and_work(
            &r,
            &Frequencies::new(0.3, 1.0).unwrap(),
            &ad,
            TempRegime::HighT,
        );
        assert_ne!(operation_mode(&e), OperationMode::Engine);
        let r = Reservoirs::new(1.0, 0.8).unwrap();
        let e = ss(&r, &Frequencies::new(0.5, 1.0).unwrap(), TempRegime::HighT);
        assert_eq!(operation_mode(&e), OperationMode::Refrigerator);
    }

    #[test]
    fn regime_limits() {
        let ad = Adiabaticity::custom(1.4).unwrap();
        // beta * omega = 1e-3 on both baths
        let r = Reservoirs::new(1e-3, 5e-4).unwrap();
        let f = Frequencies::new(1.0, 2.0).unwrap();
        let exact = mean_energies(&r, &f, &ad, TempRegime::Exact);
        let high = mean_energies(&r, &f, &ad, TempRegime::HighT);
        for (a, b) in [
            (exact.h_a, high.h_a),
            (exact.h_b, high.h_b),
            (exact.h_c, high.h_c),
            (exact.h_d, high.h_d),
        ] {
            assert!(((a - b) / a).abs() < 1e-3);
        }
        // beta * omega = 30
        let r = Reservoirs::new(30.0, 15.0).unwrap();
        let exact = heats_and_work(&r, &f, &ad, TempRegime::Exact);
        let low = heats_and_work(&r, &f, &ad, TempRegime::LowT);
        assert!((exact.q_h - low.q_h).abs() < 1e-8);
        assert!((exact.q_c - low.q_c).abs() < 1e-8);
        assert!((exact.w_ext - low.w_ext).abs() < 1e-8);
    }

    fn reservoirs() -> impl Strategy<Value = Reservoirs> {
        (0.01f64..20.0, 0.01f64..0.99).prop_map(|(bc, tau)| Reservoirs::new(bc, bc * tau).unwrap())
    }

    fn frequencies() -> impl Strategy<Value = Frequencies> {
        (0.01f64..30.0, 0.01f64..0.99).prop_map(|(wh, z)| Frequencies::new(wh * z, wh).unwrap())
    }

    proptest! {
        #[test]
        fn first_law(r in reservoirs(), f in frequencies(), lam in 1.0f64..5.0) {
            let lam = Adiabaticity::custom(lam).unwrap();
            for regime in [TempRegime::Exact, TempRegime::HighT, TempRegime::LowT] {
                let e = heats_and_work(&r, &f, &lam, regime);
                let scale = e.q_h.abs().max(e.q_c.abs());
                prop_assert!((e.q_h + e.q_c - e.w_ext).abs() <= 1e-12 * scale);
            }
        }

        #[test]
        fn adiabatic_efficiency_is_temperature_independent(r in reservoirs()) {
            let f = Frequencies::new(0.35, 1.0).unwrap();
            let e = heats_and_work(&r, &f, &Adiabaticity::adiabatic(), TempRegime::Exact);
            if operation_mode(&e) == OperationMode::Engine {
                prop_assert!((efficiency(&e).unwrap() - 0.65).abs() < 1e-12);
            } else {
                prop_assert!(r.tau() >= 0.35 - 1e-12);
            }
        }

        #[test]
        fn friction_only_costs_work(r in reservoirs(), f in frequencies(),
                                    l1 in 1.0f64..4.0, dl in 1e-3f64..2.0) {
            for regime in [TempRegime::Exact, TempRegime::HighT, TempRegime::LowT] {
                let w1 = heats_and_work(&r, &f, &Adiabaticity::custom(l1).unwrap(), regime).w_ext;
                let w2 = heats_and_work(&r, &f, &Adiabaticity::custom(l1 + dl).unwrap(), regime).w_ext;
                prop_assert!(w2 < w1);
            }
        }

        #[test]
        fn carnot_bounds_adiabatic(r in reservoirs(), f in frequencies()) {
            let e = heats_and_work(&r, &f, &Adiabaticity::adiabatic(), TempRegime::Exact);
            match operation_mode(&e) {
                OperationMode::Engine => prop_assert!(efficiency(&e).unwrap() <= r.eta_carnot() + 1e-12),
                OperationMode::Refrigerator => prop_assert!(cop(&e).unwrap() <= r.zeta_carnot() * (1.0 + 1e-12)),
                _ => {}
            }
        }
    }
}
