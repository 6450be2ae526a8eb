//! Adiabaticity parameter of a finite-time frequency ramp.
//!
//! The oscillator's Heisenberg evolution during a stroke is fixed by two
//! classical solutions of `x'' + ω²(t) x = 0`: `X` with `X(0) = 0, X'(0) = 1`
//! and `Y` with `Y(0) = 1, Y'(0) = 0`. λ is a quadratic form in their values
//! at the end of the stroke.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cycle::Frequencies;
use crate::error::{Error, Result};

pub const DEFAULT_RTOL: f64 = 1e-10;
pub const DEFAULT_ATOL: f64 = 1e-10;
/// Integration gives up after this many accepted plus rejected steps.
pub const MAX_STEPS: usize = 20_000_000;

/// How `ω²(t)` moves between its end values over `s = t/T ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RampShape {
    /// Requires equal end frequencies.
    Constant,
    /// `ω² = ω₀² + (ω₁² − ω₀²) s`
    Linear,
    /// `ω² = ω₀² + (ω₁² − ω₀²) s²`
    Quadratic,
    /// `ω² = ω₀² (ω₁²/ω₀²)^s`
    Exponential,
}

impl RampShape {
    pub const LIBRARY: [RampShape; 3] = [
        RampShape::Linear,
        RampShape::Quadratic,
        RampShape::Exponential,
    ];
}

type OmegaFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Profile {
    Shape(RampShape),
    Custom(OmegaFn),
}

/// A frequency protocol `ω(t)` on `[0, T]`.
#[derive(Clone)]
pub struct FrequencyRamp {
    omega_start: f64,
    omega_end: f64,
    duration: f64,
    profile: Profile,
}

impl fmt::Debug for FrequencyRamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let profile = match &self.profile {
            Profile::Shape(s) => format!("{s:?}"),
            Profile::Custom(_) => "Custom".to_string(),
        };
        f.debug_struct("FrequencyRamp")
            .field("omega_start", &self.omega_start)
            .field("omega_end", &self.omega_end)
            .field("duration", &self.duration)
            .field("profile", &profile)
            .finish()
    }
}

fn check_duration(duration: f64) -> Result<()> {
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::domain("T > 0", format!("T = {duration}")));
    }
    Ok(())
}

impl FrequencyRamp {
    pub fn new(shape: RampShape, omega_start: f64, omega_end: f64, duration: f64) -> Result<Self> {
        check_duration(duration)?;
        for w in [omega_start, omega_end] {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::domain("omega(t) > 0", format!("end frequency {w}")));
            }
        }
        if shape == RampShape::Constant && omega_start != omega_end {
            return Err(Error::domain(
                "constant ramp has equal end frequencies",
                format!("{omega_start} != {omega_end}"),
            ));
        }
        Ok(Self {
            omega_start,
            omega_end,
            duration,
            profile: Profile::Shape(shape),
        })
    }

    /// Stroke A→B: `ω_c` up to `ω_h`.
    pub fn compression(shape: RampShape, f: &Frequencies, duration: f64) -> Result<Self> {
        Self::new(shape, f.omega_c(), f.omega_h(), duration)
    }

    /// Stroke C→D: `ω_h` down to `ω_c`.
    pub fn expansion(shape: RampShape, f: &Frequencies, duration: f64) -> Result<Self> {
        Self::new(shape, f.omega_h(), f.omega_c(), duration)
    }

    /// Arbitrary `ω(t)`. Positivity is checked on 1025 equally spaced times.
    pub fn custom<F>(omega: F, duration: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        check_duration(duration)?;
        for i in 0..=1024 {
            let t = duration * i as f64 / 1024.0;
            let w = omega(t);
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::domain("omega(t) > 0", format!("omega({t}) = {w}")));
            }
        }
        Ok(Self {
            omega_start: omega(0.0),
            omega_end: omega(duration),
            duration,
            profile: Profile::Custom(Arc::new(omega)),
        })
    }

    pub fn omega_start(&self) -> f64 {
        self.omega_start
    }

    pub fn omega_end(&self) -> f64 {
        self.omega_end
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn with_duration(&self, duration: f64) -> Result<Self> {
        check_duration(duration)?;
        Ok(Self {
            duration,
            ..self.clone()
        })
    }

    pub fn omega_sq(&self, t: f64) -> f64 {
        let s = (t / self.duration).clamp(0.0, 1.0);
        let (a, b) = (
            self.omega_start * self.omega_start,
            self.omega_end * self.omega_end,
        );
        match &self.profile {
            Profile::Shape(RampShape::Constant) => a,
            Profile::Shape(RampShape::Linear) => a + (b - a) * s,
            Profile::Shape(RampShape::Quadratic) => a + (b - a) * s * s,
            Profile::Shape(RampShape::Exponential) => a * (b / a).powf(s),
            Profile::Custom(w) => {
                let w = w(t);
                w * w
            }
        }
    }

    pub fn omega(&self, t: f64) -> f64 {
        self.omega_sq(t).sqrt()
    }
}

/// `X, X', Y, Y'` at `t = T`, plus integration diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuxiliarySolution {
    pub x: f64,
    pub x_dot: f64,
    pub y: f64,
    pub y_dot: f64,
    pub steps: usize,
    pub rejected_steps: usize,
    /// Largest `|X Y' − X' Y + 1|` seen along the trajectory.
    pub wronskian_drift: f64,
    /// Sum over accepted steps of the embedded local error (max norm).
    pub accumulated_local_error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaResult {
    /// Reported value, clamped to at least 1.
    pub lambda: f64,
    pub raw: f64,
    pub integrator_steps: usize,
    pub estimated_error: f64,
    pub wronskian_drift: f64,
}

type State = [f64; 4];

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn check_tolerance(name: &'static str, tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(Error::domain(name, format!("{tol} not in (0, 1e-3]")));
    }
    Ok(())
}

/// Integrates both fundamental solutions over the ramp with adaptive
/// Dormand-Prince steps.
///
/// Tolerances are per unit of the ramp: a step of length `h` may commit a
/// local error of at most `(atol + rtol |y|) h / T`, so the accumulated
/// error stays near the requested tolerance even for ramps spanning many
/// oscillation periods.
pub fn solve_auxiliary(ramp: &FrequencyRamp, rtol: f64, atol: f64) -> Result<AuxiliarySolution> {
    solve_auxiliary_capped(ramp, rtol, atol, MAX_STEPS)
}

pub fn solve_auxiliary_capped(
    ramp: &FrequencyRamp,
    rtol: f64,
    atol: f64,
    max_steps: usize,
) -> Result<AuxiliarySolution> {
    check_tolerance("0 < rtol <= 1e-3", rtol)?;
    check_tolerance("0 < atol <= 1e-3", atol)?;

    let rhs = |t: f64, s: &State| -> State {
        let w2 = ramp.omega_sq(t);
        [s[1], -w2 * s[0], s[3], -w2 * s[2]]
    };
    let wronskian = |s: &State| s[0] * s[3] - s[1] * s[2];

    let t_end = ramp.duration();
    let mut t = 0.0;
    let mut state: State = [0.0, 1.0, 1.0, 0.0];
    let w_max = ramp.omega_start().max(ramp.omega_end());
    let mut h = (0.01 / w_max).min(t_end);
    let mut k1 = rhs(t, &state);
    let (mut steps, mut rejected) = (0, 0);
    let mut drift: f64 = 0.0;
    let mut local_sum = 0.0;

    while t < t_end {
        if steps + rejected >= max_steps {
            return Err(Error::IntegrationFailure {
                t,
                steps: steps + rejected,
                reason: "step cap reached",
            });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        let mut k = [[0.0; 4]; 7];
        k[0] = k1;
        for i in 1..7 {
            let mut stage = state;
            for (j, kj) in k.iter().enumerate().take(i) {
                for (sv, kv) in stage.iter_mut().zip(kj) {
                    *sv += h * A[i][j] * kv;
                }
            }
            k[i] = rhs(t + C[i] * h, &stage);
        }
        let mut next = state;
        let mut err_norm: f64 = 0.0;
        let mut err_max: f64 = 0.0;
        for c in 0..4 {
            let mut d5 = 0.0;
            let mut d4 = 0.0;
            for i in 0..7 {
                d5 += B5[i] * k[i][c];
                d4 += B4[i] * k[i][c];
            }
            next[c] = state[c] + h * d5;
            let e = h * (d5 - d4);
            let scale = (atol + rtol * state[c].abs().max(next[c].abs())) * (h / t_end);
            err_norm = err_norm.max(e.abs() / scale);
            err_max = err_max.max(e.abs());
        }
        if !err_norm.is_finite() {
            return Err(Error::IntegrationFailure {
                t,
                steps,
                reason: "non-finite error estimate",
            });
        }
        if err_norm <= 1.0 {
            t = if last { t_end } else { t + h };
            state = next;
            k1 = k[6];
            steps += 1;
            local_sum += err_max;
            drift = drift.max((wronskian(&state) + 1.0).abs());
        } else {
            rejected += 1;
        }
        let factor = if err_norm == 0.0 {
            5.0
        } else {
            (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= if err_norm <= 1.0 {
            factor
        } else {
            factor.min(1.0)
        };
        if h <= 1e-14 * t_end.max(1.0) && t < t_end {
            return Err(Error::IntegrationFailure {
                t,
                steps,
                reason: "step size underflow",
            });
        }
    }

    Ok(AuxiliarySolution {
        x: state[0],
        x_dot: state[1],
        y: state[2],
        y_dot: state[3],
        steps,
        rejected_steps: rejected,
        wronskian_drift: drift,
        accumulated_local_error: local_sum,
    })
}

/// λ from end-of-stroke values of the auxiliary solutions.
pub fn lambda_from_solution(omega_start: f64, omega_end: f64, s: &AuxiliarySolution) -> f64 {
    let (wi2, wf2) = (omega_start * omega_start, omega_end * omega_end);
    (wi2 * (wf2 * s.x * s.x + s.x_dot * s.x_dot) + (wf2 * s.y * s.y + s.y_dot * s.y_dot))
        / (2.0 * omega_start * omega_end)
}

pub fn lambda_of_ramp(ramp: &FrequencyRamp, rtol: f64, atol: f64) -> Result<LambdaResult> {
    let sol = solve_auxiliary(ramp, rtol, atol)?;
    let (wi, wf) = (ramp.omega_start(), ramp.omega_end());
    let raw = lambda_from_solution(wi, wf, &sol);
    // first-order sensitivity of λ to the state, times the accumulated local error
    let grad = (wi * wi * wf * wf * 2.0 * sol.x.abs()
        + wi * wi * 2.0 * sol.x_dot.abs()
        + wf * wf * 2.0 * sol.y.abs()
        + 2.0 * sol.y_dot.abs())
        / (2.0 * wi * wf);
    let lambda = raw.max(1.0);
    Ok(LambdaResult {
        lambda,
        raw,
        integrator_steps: sol.steps,
        estimated_error: grad * sol.accumulated_local_error + (lambda - raw),
        wronskian_drift: sol.wronskian_drift,
    })
}

pub fn lambda_default(ramp: &FrequencyRamp) -> Result<LambdaResult> {
    lambda_of_ramp(ramp, DEFAULT_RTOL, DEFAULT_ATOL)
}
