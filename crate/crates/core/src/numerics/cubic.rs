use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real roots of `a y^3 + b y^2 + c y + d`, ascending and without repeats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicRoots {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub discriminant: f64,
    pub roots: Vec<f64>,
}

impl CubicRoots {
    pub fn eval(&self, y: f64) -> f64 {
        ((self.a * y + self.b) * y + self.c) * y + self.d
    }
}

/// Solves a real cubic by the trigonometric method when it has three real
/// roots, and by Cardano's formula otherwise. Each root gets a few Newton
/// steps on the original polynomial.
pub fn solve_cubic_trig(a: f64, b: f64, c: f64, d: f64) -> Result<CubicRoots> {
    if ![a, b, c, d].iter().all(|v| v.is_finite()) {
        return Err(Error::domain(
            "finite coefficients",
            format!("({a}, {b}, {c}, {d})"),
        ));
    }
    let scale = [a, b, c, d].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if a.abs() <= 1e-14 * scale || a == 0.0 {
        return Err(Error::DegenerateLeadingCoefficient);
    }

    let terms = [
        Dd::product(&[18.0, a, b, c, d]),
        Dd::product(&[-4.0, b, b, b, d]),
        Dd::product(&[b, b, c, c]),
        Dd::product(&[-4.0, a, c, c, c]),
        Dd::product(&[-27.0, a, a, d, d]),
    ];
    let discriminant = terms.iter().fold(Dd::ZERO, |acc, t| acc.add(*t)).value();
    let disc_scale = terms.iter().fold(0.0f64, |m, t| m.max(t.value().abs()));

    // depressed cubic t^3 + p t + q with y = t - b/(3a)
    let shift = -b / (3.0 * a);
    let p = (3.0 * a * c - b * b) / (3.0 * a * a);
    let q = (2.0 * b.powi(3) - 9.0 * a * b * c + 27.0 * a * a * d) / (27.0 * a.powi(3));

    let mut ts = Vec::with_capacity(3);
    if discriminant.abs() <= 1e-12 * disc_scale {
        let p_scale = (b * b / (a * a)).max((c / a).abs());
        if p.abs() <= 1e-12 * p_scale.max(f64::MIN_POSITIVE) {
            ts.push(0.0);
        } else {
            ts.push(3.0 * q / p);
            ts.push(-1.5 * q / p);
        }
    } else if discriminant > 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        for k in 0..3 {
            ts.push(m * (theta - 2.0 * PI * k as f64 / 3.0).cos());
        }
    } else {
        let s = (q * q / 4.0 + p.powi(3) / 27.0).sqrt();
        ts.push((-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt());
    }

    let poly = |y: f64| ((a * y + b) * y + c) * y + d;
    let dpoly = |y: f64| (3.0 * a * y + 2.0 * b) * y + c;
    let mut roots: Vec<f64> = ts
        .into_iter()
        .map(|t| {
            let mut y = t + shift;
            for _ in 0..4 {
                let dy = dpoly(y);
                if dy == 0.0 {
                    break;
                }
                let next = y - poly(y) / dy;
                if !next.is_finite() || poly(next).abs() >= poly(y).abs() {
                    break;
                }
                y = next;
            }
            y
        })
        .collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * (1.0 + y.abs()));

    Ok(CubicRoots {
        a,
        b,
        c,
        d,
        discriminant,
        roots,
    })
}

/// Double-double accumulator. The discriminant is a difference of terms
/// that nearly cancel when roots approach each other, so it is summed in
/// extended precision and rounded once.
#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    fn renormalize(hi: f64, lo: f64) -> Dd {
        let s = hi + lo;
        Dd {
            hi: s,
            lo: lo - (s - hi),
        }
    }

    fn mul_f64(self, x: f64) -> Dd {
        let p = self.hi * x;
        let e = self.hi.mul_add(x, -p);
        Dd::renormalize(p, e + self.lo * x)
    }

    fn add(self, other: Dd) -> Dd {
        let (s, e) = Dd::two_sum(self.hi, other.hi);
        Dd::renormalize(s, e + self.lo + other.lo)
    }

    fn product(factors: &[f64]) -> Dd {
        factors[1..].iter().fold(
            Dd {
                hi: factors[0],
                lo: 0.0,
            },
            |acc, &x| acc.mul_f64(x),
        )
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}
