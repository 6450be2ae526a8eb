//! Seeded Monte Carlo check of the sudden-switch efficiency and COP bounds.
//!
//! Samples are split into fixed chunks of [`CHUNK_SIZE`]; chunk `k` draws
//! from ChaCha8 keyed by the seed on stream `k`. Chunk results are merged in
//! chunk order, so a histogram depends only on the `SampleSpec`, never on the
//! thread count.

use std::io::{self, Write};

use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cycle::{self, Adiabaticity, Frequencies, Reservoirs, TempRegime};
use crate::engine::eta_ss_max;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::format::sig;
use crate::fridge::zeta_max_ss;

pub const CHUNK_SIZE: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Machine {
    Engine,
    Fridge,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub beta_c: f64,
    pub beta_h: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub bin_width: f64,
}

impl SampleSpec {
    pub fn validate(&self) -> Result<Reservoirs> {
        let r = Reservoirs::new(self.beta_c, self.beta_h)?;
        if !(self.omega_min >= 0.0 && self.omega_min < self.omega_max && self.omega_max.is_finite())
        {
            return Err(Error::domain(
                "0 <= omega_min < omega_max",
                format!("[{}, {}]", self.omega_min, self.omega_max),
            ));
        }
        if !(self.bin_width > 0.0 && self.bin_width.is_finite()) {
            return Err(Error::domain(
                "bin_width > 0",
                format!("{}", self.bin_width),
            ));
        }
        Ok(r)
    }
}

/// One draw of the sampler.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: u64,
    pub omega_c: f64,
    pub omega_h: f64,
    /// Efficiency or COP; `None` when the draw does not operate as `machine`.
    pub value: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub machine: Machine,
    pub bin_width: f64,
    pub origin: f64,
    pub counts: Vec<u64>,
    pub n_accepted: u64,
    pub n_rejected: u64,
    pub max_observed: Option<f64>,
    /// Earliest sample attaining `max_observed`.
    pub argmax: Option<SampleRecord>,
    pub bound: f64,
}

impl Histogram {
    fn empty(machine: Machine, bin_width: f64, bound: f64) -> Self {
        // bins cover [0, bound + bin_width]; the last one may be partial
        let n_bins = ((bound + bin_width) / bin_width).ceil().max(1.0) as usize;
        Self {
            machine,
            bin_width,
            origin: 0.0,
            counts: vec![0; n_bins],
            n_accepted: 0,
            n_rejected: 0,
            max_observed: None,
            argmax: None,
            bound,
        }
    }

    fn record(&mut self, s: SampleRecord) {
        let Some(v) = s.value else {
            self.n_rejected += 1;
            return;
        };
        self.n_accepted += 1;
        let bin = ((v - self.origin) / self.bin_width).floor().max(0.0) as usize;
        let last = self.counts.len() - 1;
        self.counts[bin.min(last)] += 1;
        if self.max_observed.is_none_or(|m| v > m) {
            self.max_observed = Some(v);
            self.argmax = Some(s);
        }
    }

    /// Appends a histogram of later samples.
    fn merge(&mut self, other: Histogram) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.n_accepted += other.n_accepted;
        self.n_rejected += other.n_rejected;
        if let Some(m) = other.max_observed {
            if self.max_observed.is_none_or(|cur| m > cur) {
                self.max_observed = other.max_observed;
                self.argmax = other.argmax;
            }
        }
    }

    /// Fails with the offending sample if any value exceeds the bound.
    pub fn check_bound(&self) -> Result<()> {
        match (self.max_observed, self.argmax) {
            (Some(m), Some(s)) if m > self.bound => Err(Error::BoundViolation {
                index: s.index,
                omega_c: s.omega_c,
                omega_h: s.omega_h,
                value: m,
                bound: self.bound,
            }),
            _ => Ok(()),
        }
    }

    /// `bin_lo,bin_hi,count` rows with floats at `digits` significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W, digits: usize) -> io::Result<()> {
        writeln!(w, "bin_lo,bin_hi,count")?;
        for (i, c) in self.counts.iter().enumerate() {
            let lo = self.origin + i as f64 * self.bin_width;
            let hi = self.origin + (i + 1) as f64 * self.bin_width;
            writeln!(w, "{},{},{}", sig(lo, digits), sig(hi, digits), c)?;
        }
        Ok(())
    }
}

/// JSON companion of the histogram CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub machine: Machine,
    pub spec: SampleSpec,
    pub bound: f64,
    pub max_observed: Option<f64>,
    pub argmax: Option<SampleRecord>,
    pub n_accepted: u64,
    pub n_rejected: u64,
    pub n_bins: usize,
    pub bound_holds: bool,
}

impl Sidecar {
    pub fn new(spec: &SampleSpec, h: &Histogram) -> Self {
        Self {
            machine: h.machine,
            spec: *spec,
            bound: h.bound,
            max_observed: h.max_observed,
            argmax: h.argmax,
            n_accepted: h.n_accepted,
            n_rejected: h.n_rejected,
            n_bins: h.counts.len(),
            bound_holds: h.check_bound().is_ok(),
        }
    }
}

fn bound_for(machine: Machine, r: &Reservoirs) -> Result<f64> {
    match machine {
        Machine::Engine => eta_ss_max(r.eta_carnot()),
        Machine::Fridge => {
            if r.tau() <= 0.5 {
                return Err(Error::TauTooSmall { tau: r.tau() });
            }
            zeta_max_ss(r.zeta_carnot())
        }
    }
}

/// Exact-regime sudden-switch efficiency or COP at one frequency pair.
fn evaluate(machine: Machine, r: &Reservoirs, omega_c: f64, omega_h: f64) -> Option<f64> {
    if !(omega_c > 0.0 && omega_c < omega_h) {
        return None;
    }
    let f = Frequencies::new(omega_c, omega_h).ok()?;
    let e = cycle::heats_and_work(r, &f, &Adiabaticity::sudden_switch(&f), TempRegime::Exact);
    match machine {
        Machine::Engine => cycle::efficiency(&e).ok(),
        Machine::Fridge => cycle::cop(&e).ok(),
    }
}

fn for_each_in_chunk<F>(machine: Machine, spec: &SampleSpec, r: &Reservoirs, chunk: u64, mut f: F)
where
    F: FnMut(SampleRecord),
{
    let start = chunk * CHUNK_SIZE;
    let end = (start + CHUNK_SIZE).min(spec.n_samples);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(chunk);
    let dist =
        Uniform::new_inclusive(spec.omega_min, spec.omega_max).expect("validated frequency range");
    for index in start..end {
        let (a, b) = (dist.sample(&mut rng), dist.sample(&mut rng));
        let (omega_c, omega_h) = if a <= b { (a, b) } else { (b, a) };
        f(SampleRecord {
            index,
            omega_c,
            omega_h,
            value: evaluate(machine, r, omega_c, omega_h),
        });
    }
}

fn n_chunks(spec: &SampleSpec) -> u64 {
    spec.n_samples.div_ceil(CHUNK_SIZE)
}

/// Every sample in index order, rejected draws included.
pub fn samples(machine: Machine, spec: &SampleSpec) -> Result<Vec<SampleRecord>> {
    let r = spec.validate()?;
    bound_for(machine, &r)?;
    let mut out = Vec::with_capacity(spec.n_samples as usize);
    for chunk in 0..n_chunks(spec) {
        for_each_in_chunk(machine, spec, &r, chunk, |s| out.push(s));
    }
    Ok(out)
}

pub fn sample_histogram(machine: Machine, spec: &SampleSpec, exec: Execution) -> Result<Histogram> {
    let r = spec.validate()?;
    let bound = bound_for(machine, &r)?;
    let partials = map_indexed(exec, n_chunks(spec) as usize, |k| {
        let mut h = Histogram::empty(machine, spec.bin_width, bound);
        for_each_in_chunk(machine, spec, &r, k as u64, |s| h.record(s));
        h
    });
    let mut total = Histogram::empty(machine, spec.bin_width, bound);
    for h in partials {
        total.merge(h);
    }
    Ok(total)
}

/// Histogram of sudden-switch engine efficiencies with bound `eta_ss_max`.
pub fn sample_engine_efficiencies(spec: &SampleSpec, exec: Execution) -> Result<Histogram> {
    sample_histogram(Machine::Engine, spec, exec)
}

/// Histogram of sudden-switch refrigerator COPs with bound `zeta_max_ss`.
pub fn sample_fridge_cops(spec: &SampleSpec, exec: Execution) -> Result<Histogram> {
    sample_histogram(Machine::Fridge, spec, exec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(beta_h: f64, n: u64, seed: u64) -> SampleSpec {
        SampleSpec {
            beta_c: 1.0,
            beta_h,
            omega_min: 0.0,
            omega_max: 30.0,
            n_samples: n,
            seed,
            bin_width: 0.01,
        }
    }

    #[test]
    fn empty_run() {
        let h = sample_engine_efficiencies(&spec(0.5, 0, 1), Execution::Sequential).unwrap();
        assert_eq!(h.n_accepted, 0);
        assert_eq!(h.n_rejected, 0);
        assert!(h.max_observed.is_none());
        assert!(h.check_bound().is_ok());
    }

    #[test]
    fn accounting_and_bins() {
        let s = spec(0.5, 200_000, 3);
        let h = sample_engine_efficiencies(&s, Execution::Parallel).unwrap();
        assert_eq!(h.n_accepted + h.n_rejected, s.n_samples);
        assert_eq!(h.counts.iter().sum::<u64>(), h.n_accepted);
        assert!((h.counts.len() as f64 - 1.0) * h.bin_width <= h.bound + h.bin_width);
        assert!(h.counts.len() as f64 * h.bin_width >= h.bound + h.bin_width);
        h.check_bound().unwrap();
        assert!(h.max_observed.unwrap() <= 1.0 / 9.0);
    }

    #[test]
    fn sequential_equals_parallel() {
        let s = spec(1.0 / 12.0, 300_000, 11);
        let a = sample_engine_efficiencies(&s, Execution::Sequential).unwrap();
        let b = sample_engine_efficiencies(&s, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn thread_count_independent() {
        let s = spec(0.6, 200_000, 5);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| sample_fridge_cops(&s, Execution::Parallel).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn single_sample_reproducible() {
        let s = spec(1.0 / 12.0, 1, 42);
        let a = samples(Machine::Engine, &s).unwrap();
        let b = samples(Machine::Engine, &s).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a, b);
    }

    /// Independent path: energies written out directly with `tanh`.
    fn direct_efficiency(beta_c: f64, beta_h: f64, wc: f64, wh: f64) -> f64 {
        let lambda = (wc * wc + wh * wh) / (2.0 * wc * wh);
        let coth = |x: f64| 1.0 / (0.5 * x).tanh();
        let (nc, nh) = (coth(beta_c * wc), coth(beta_h * wh));
        let q_h = 0.5 * wh * nh - 0.5 * wh * lambda * nc;
        let q_c = 0.5 * wc * nc - 0.5 * wc * lambda * nh;
        (q_h + q_c) / q_h
    }

    #[test]
    fn recomputed_values_match() {
        let s = spec(1.0 / 12.0, 20_000, 9);
        let accepted: Vec<_> = samples(Machine::Engine, &s)
            .unwrap()
            .into_iter()
            .filter_map(|r| r.value.map(|v| (r, v)))
            .take(1000)
            .collect();
        assert_eq!(accepted.len(), 1000);
        for (r, v) in accepted {
            let d = direct_efficiency(s.beta_c, s.beta_h, r.omega_c, r.omega_h);
            assert!((v - d).abs() < 1e-12, "{r:?}: {d}");
        }
    }

    #[test]
    fn fridge_requires_tau_above_half() {
        let err = sample_fridge_cops(&spec(0.4, 10, 1), Execution::Sequential);
        assert!(matches!(err, Err(Error::TauTooSmall { .. })));
    }

    #[test]
    fn fridge_bound_holds() {
        let s = spec(0.6, 300_000, 21);
        let h = sample_fridge_cops(&s, Execution::Parallel).unwrap();
        h.check_bound().unwrap();
        assert!(h.n_accepted > 0);
        assert!((h.bound - zeta_max_ss(1.5).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn violation_reports_sample() {
        let s = spec(0.5, 100_000, 1);
        let mut h = sample_engine_efficiencies(&s, Execution::Sequential).unwrap();
        h.bound = 0.01;
        match h.check_bound() {
            Err(Error::BoundViolation { index, value, .. }) => {
                assert_eq!(Some(value), h.max_observed);
                assert_eq!(Some(index), h.argmax.map(|a| a.index));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csv_layout() {
        let s = spec(0.5, 1000, 2);
        let h = sample_engine_efficiencies(&s, Execution::Sequential).unwrap();
        let mut buf = Vec::new();
        h.write_csv(&mut buf, 12).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("bin_lo,bin_hi,count"));
        assert_eq!(
            lines.next(),
            Some(format!("0.0,0.01,{}", h.counts[0]).as_str())
        );
        assert_eq!(text.lines().count(), h.counts.len() + 1);
        let json = serde_json::to_string(&Sidecar::new(&s, &h)).unwrap();
        assert!(json.contains("\"bound_holds\":true"));
    }
}
