use super::{find_root, Bracket, OptimumResult};
use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const GOLDEN_MAX_ITERATIONS: usize = 400;
const UNIMODAL_SCAN_POINTS: usize = 1024;

/// Maximum of a unimodal `f` on `br`.
///
/// Golden-section search shrinks the bracket to width `tol`. Because `f` is
/// flat at its maximum, comparisons of `f` alone cannot place the argmax
/// closer than about `sqrt(eps)` relative to the peak width; the result is
/// therefore polished by locating the sign change of a central-difference
/// slope inside a neighbourhood of the golden-section estimate.
pub fn maximize_1d<F>(f: F, br: Bracket, tol: f64) -> Result<OptimumResult>
where
    F: Fn(f64) -> f64,
{
    if cfg!(debug_assertions) {
        debug_assert!(
            is_unimodal(&f, br, UNIMODAL_SCAN_POINTS),
            "objective is not unimodal on [{}, {}]",
            br.lo(),
            br.hi()
        );
    }
    let width0 = br.width();
    let (mut a, mut b) = (br.lo(), br.hi());
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut iterations = 0;
    while b - a > tol {
        if iterations == GOLDEN_MAX_ITERATIONS {
            return Err(Error::MaxIterations { iterations });
        }
        iterations += 1;
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }
    let golden = 0.5 * (a + b);
    let golden_half_width = 0.5 * (b - a);

    let (arg, tolerance_met) = match polish(&f, br, golden, width0) {
        Some((x, err)) if f(x) >= f(golden) - 1e-14 * f(golden).abs() => {
            (x, err.max(f64::EPSILON * x.abs()))
        }
        _ => (golden, golden_half_width),
    };
    Ok(OptimumResult {
        arg: vec![arg],
        value: f(arg),
        iterations,
        converged: tolerance_met <= tol,
        tolerance_met,
    })
}

/// Refines an approximate interior maximum by root-finding the slope
/// `(f(x + h) - f(x - h)) / 2h`. Returns `None` when no sign change of the
/// slope is found near `x0` (e.g. a maximum on the boundary).
fn polish<F>(f: &F, br: Bracket, x0: f64, width: f64) -> Option<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let h = 1e-5 * width;
    let slope = |x: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    let lo_limit = br.lo() + h;
    let hi_limit = br.hi() - h;
    if !(lo_limit < x0 && x0 < hi_limit) {
        return None;
    }
    let mut d = 1e-4 * width;
    for _ in 0..12 {
        let lo = (x0 - d).max(lo_limit);
        let hi = (x0 + d).min(hi_limit);
        let (s_lo, s_hi) = (slope(lo), slope(hi));
        if s_lo > 0.0 && s_hi < 0.0 {
            let tol = 1e-13 * width;
            let x = find_root(slope, Bracket::new(lo, hi).ok()?, tol).ok()?;
            return Some((x, tol));
        }
        d *= 4.0;
    }
    None
}

/// Coarse scan: values rise (weakly) to a single peak, then fall (weakly).
pub fn is_unimodal<F>(f: &F, br: Bracket, points: usize) -> bool
where
    F: Fn(f64) -> f64,
{
    let points = points.max(3);
    let values: Vec<f64> = (0..points)
        .map(|i| br.lo() + br.width() * i as f64 / (points - 1) as f64)
        .map(f)
        .collect();
    if values.iter().any(|v| v.is_nan()) {
        return false;
    }
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let slack = 1e-12 * scale + f64::MIN_POSITIVE;
    let peak = values
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if *v > values[best] { i } else { best });
    let rising = values[..=peak].windows(2).all(|w| w[1] >= w[0] - slack);
    let falling = values[peak..].windows(2).all(|w| w[1] <= w[0] + slack);
    rising && falling
}

const NM_MAX_ITERATIONS: usize = 20_000;
const NM_RESTARTS: usize = 3;

/// Derivative-free maximization of `f` over the plane (Nelder-Mead on `-f`).
///
/// `scale` sets the initial simplex edge. After the first descent converges
/// the search restarts from three perturbed simplices around the incumbent
/// and the best point found is returned.
pub fn maximize_2d<F>(f: F, start: [f64; 2], scale: f64, tol: f64) -> Result<OptimumResult>
where
    F: Fn([f64; 2]) -> f64,
{
    maximize_2d_within(
        f,
        |p| p[0].is_finite() && p[1].is_finite(),
        start,
        scale,
        tol,
    )
}

/// As [`maximize_2d`], but fails with [`Error::Divergence`] as soon as a
/// trial point leaves the region described by `valid`.
pub fn maximize_2d_within<F, V>(
    f: F,
    valid: V,
    start: [f64; 2],
    scale: f64,
    tol: f64,
) -> Result<OptimumResult>
where
    F: Fn([f64; 2]) -> f64,
    V: Fn([f64; 2]) -> bool,
{
    let cost = |p: [f64; 2]| -> Result<f64> {
        if !valid(p) {
            return Err(Error::Divergence { at: p });
        }
        let v = f(p);
        if v.is_nan() {
            return Err(Error::Divergence { at: p });
        }
        Ok(-v)
    };

    let mut total_iterations = 0;
    let (mut best, mut best_cost, mut size, mut converged) = nelder_mead(
        &cost,
        initial_simplex(start, [scale, 0.0], [0.0, scale]),
        tol,
        &mut total_iterations,
    )?;

    // Restarts: rotated and rescaled simplices around the incumbent.
    let restarts: [([f64; 2], [f64; 2]); NM_RESTARTS] = [
        ([0.5, 0.5], [-0.5, 0.5]),
        ([-0.3, 0.0], [0.0, -0.3]),
        ([0.1, -0.2], [0.2, 0.1]),
    ];
    for (u, v) in restarts {
        let s = scale.max(1e3 * tol);
        let simplex = initial_simplex(best, [u[0] * s, u[1] * s], [v[0] * s, v[1] * s]);
        let (p, c, sz, conv) = nelder_mead(&cost, simplex, tol, &mut total_iterations)?;
        if c <= best_cost {
            best = p;
            best_cost = c;
            size = sz;
            converged = conv;
        }
    }
    Ok(OptimumResult {
        arg: best.to_vec(),
        value: -best_cost,
        iterations: total_iterations,
        converged,
        tolerance_met: size,
    })
}

fn initial_simplex(p: [f64; 2], u: [f64; 2], v: [f64; 2]) -> [[f64; 2]; 3] {
    [p, [p[0] + u[0], p[1] + u[1]], [p[0] + v[0], p[1] + v[1]]]
}

type NmOutcome = ([f64; 2], f64, f64, bool);

fn nelder_mead<C>(
    cost: &C,
    mut pts: [[f64; 2]; 3],
    tol: f64,
    iterations: &mut usize,
) -> Result<NmOutcome>
where
    C: Fn([f64; 2]) -> Result<f64>,
{
    let lerp =
        |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    let mut vals = [cost(pts[0])?, cost(pts[1])?, cost(pts[2])?];
    for _ in 0..NM_MAX_ITERATIONS {
        *iterations += 1;
        let mut order = [0, 1, 2];
        order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        pts = [pts[order[0]], pts[order[1]], pts[order[2]]];
        vals = [vals[order[0]], vals[order[1]], vals[order[2]]];

        let size = pts[1..]
            .iter()
            .map(|p| (p[0] - pts[0][0]).hypot(p[1] - pts[0][1]))
            .fold(0.0, f64::max);
        let spread = vals[2] - vals[0];
        if size <= tol && spread <= 1e-15 * vals[0].abs().max(1e-300) + 1e-300 {
            return Ok((pts[0], vals[0], size, true));
        }
        if size <= 1e-3 * tol {
            return Ok((pts[0], vals[0], size, size <= tol));
        }

        let centroid = lerp(pts[0], pts[1], 0.5);
        let reflected = lerp(centroid, pts[2], -1.0);
        let f_r = cost(reflected)?;
        if f_r < vals[0] {
            let expanded = lerp(centroid, pts[2], -2.0);
            let f_e = cost(expanded)?;
            if f_e < f_r {
                pts[2] = expanded;
                vals[2] = f_e;
            } else {
                pts[2] = reflected;
                vals[2] = f_r;
            }
        } else if f_r < vals[1] {
            pts[2] = reflected;
            vals[2] = f_r;
        } else {
            let (contracted, f_c) = if f_r < vals[2] {
                let p = lerp(centroid, reflected, 0.5);
                (p, cost(p)?)
            } else {
                let p = lerp(centroid, pts[2], 0.5);
                (p, cost(p)?)
            };
            if f_c < vals[2].min(f_r) {
                pts[2] = contracted;
                vals[2] = f_c;
            } else {
                for k in 1..3 {
                    pts[k] = lerp(pts[0], pts[k], 0.5);
                    vals[k] = cost(pts[k])?;
                }
            }
        }
    }
    Err(Error::MaxIterations {
        iterations: *iterations,
    })
}
