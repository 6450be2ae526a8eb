use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const X_MIN: f64 = 1e-4;
const X_MAX: f64 = 1e-2;
const GRID_POINTS: usize = 41;
const EXTRA_TERMS: usize = 4;
const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Leading Taylor coefficients `c_1 .. c_order` of a function with `f(0) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesFit {
    pub coefficients: Vec<f64>,
    /// RMS misfit of the least-squares polynomial, relative to `max |f(x)/x|`.
    pub residual: f64,
}

/// Extracts `f(x) = c_1 x + c_2 x^2 + ...` numerically.
///
/// `f(x)/x` is sampled on a geometric grid in `[1e-4, 1e-2]` and fitted by
/// least squares with a polynomial a few degrees higher than requested, so
/// the truncated tail does not bias the leading terms.
pub fn fit_leading_series<F>(f: F, order: usize) -> Result<SeriesFit>
where
    F: Fn(f64) -> f64,
{
    if order == 0 {
        return Err(Error::domain("order >= 1", "order = 0".to_string()));
    }
    let degree = order - 1 + EXTRA_TERMS;
    let ratio = (X_MAX / X_MIN).powf(1.0 / (GRID_POINTS - 1) as f64);
    let xs: Vec<f64> = (0..GRID_POINTS)
        .map(|i| X_MIN * ratio.powi(i as i32))
        .collect();
    let gs: Vec<f64> = xs.iter().map(|&x| f(x) / x).collect();
    if let Some(i) = gs.iter().position(|g| !g.is_finite()) {
        return Err(Error::domain(
            "finite f near 0",
            format!("f({}) / x = {}", xs[i], gs[i]),
        ));
    }

    let a = DMatrix::from_fn(GRID_POINTS, degree + 1, |i, k| {
        (xs[i] / X_MAX).powi(k as i32)
    });
    let g = DVector::from_vec(gs.clone());
    let svd = a.clone().svd(true, true);
    let coeffs_t = svd
        .solve(&g, 1e-15)
        .map_err(|e| Error::domain("well-posed least squares", e.to_string()))?;

    let misfit = &a * &coeffs_t - &g;
    let g_scale = gs
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let residual = (misfit.norm_squared() / GRID_POINTS as f64).sqrt() / g_scale;
    if residual > RESIDUAL_TOLERANCE {
        return Err(Error::FitResidualTooLarge {
            residual,
            tolerance: RESIDUAL_TOLERANCE,
        });
    }

    let coefficients = (0..order)
        .map(|k| coeffs_t[k] / X_MAX.powi(k as i32))
        .collect();
    Ok(SeriesFit {
        coefficients,
        residual,
    })
}
