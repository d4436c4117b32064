//! Parameter sweep of vertex A over a grid with B(−100, 0) and C(100, 0)
//! fixed, the conjecture check ε ≥ ε₀ over the resulting field, and its CSV
//! persistence.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::area::{epsilon_pixel, epsilon_scanline, EpsilonMethod, PixelGridSpec};
use crate::error::{Error, Result};
use crate::geometry::{Point, Triangle};
use crate::tracing::{is_closed_default, Domain};

/// Environment variable consulted for the worker count when none is given.
pub const THREADS_ENV: &str = "EMCURVE_THREADS";

/// Inclusive arithmetic progression `start, start + step, …, stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridAxis {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite() && start.is_finite() && stop.is_finite()) {
            return Err(Error::InvalidParameter(format!("axis step {step} must be positive")));
        }
        if stop < start {
            return Err(Error::InvalidParameter(format!("axis {start}:{stop} is empty")));
        }
        Ok(GridAxis { start, stop, step })
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Values are `start + k·step`; the last one may fall short of `stop`
    /// when the span is not a multiple of the step.
    pub fn value(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|k| self.value(k))
    }
}

impl fmt::Display for GridAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

impl FromStr for GridAxis {
    type Err = Error;

    /// `start:stop:step`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts[..] else {
            return Err(Error::InvalidParameter(format!("{s:?}: expected start:stop:step")));
        };
        let p = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidParameter(format!("{s:?}: {e}")))
        };
        GridAxis::new(p(a)?, p(b)?, p(c)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepMethod {
    /// Pixel counting at the given pitch.
    Pixel { step: f64 },
    /// Scanline integration at the given relative tolerance.
    Scanline { tol: f64 },
}

impl SweepMethod {
    pub fn kind(&self) -> EpsilonMethod {
        match self {
            SweepMethod::Pixel { .. } => EpsilonMethod::Pixel,
            SweepMethod::Scanline { .. } => EpsilonMethod::Scanline,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub u: GridAxis,
    pub v: GridAxis,
    pub b: Point,
    pub c: Point,
    pub domain: Domain,
    pub method: SweepMethod,
    /// Worker threads; `None` falls back to [`THREADS_ENV`], then to rayon's
    /// default.
    pub threads: Option<usize>,
}

impl SweepConfig {
    /// Desk-scale grid: u, v ∈ −600..600 step 50, pixel pitch 2 on ±1000.
    pub fn desk() -> Self {
        SweepConfig {
            u: GridAxis { start: -600.0, stop: 600.0, step: 50.0 },
            v: GridAxis { start: -600.0, stop: 600.0, step: 50.0 },
            b: Point::new(-100.0, 0.0),
            c: Point::new(100.0, 0.0),
            domain: Domain { x_min: -1000.0, x_max: 1000.0, y_min: -1000.0, y_max: 1000.0 },
            method: SweepMethod::Pixel { step: 2.0 },
            threads: None,
        }
    }

    /// The full-resolution grid: every integer vertex position and unit
    /// pixels. Very long running.
    pub fn full() -> Self {
        SweepConfig {
            u: GridAxis { start: -600.0, stop: 599.0, step: 1.0 },
            v: GridAxis { start: -600.0, stop: 599.0, step: 1.0 },
            method: SweepMethod::Pixel { step: 1.0 },
            ..SweepConfig::desk()
        }
    }

    pub fn triangle_at(&self, u: f64, v: f64) -> Result<Triangle> {
        Triangle::new(Point::new(u, v), self.b, self.c)
    }

    fn worker_count(&self) -> Option<usize> {
        self.threads.or_else(|| std::env::var(THREADS_ENV).ok()?.trim().parse().ok()).filter(|&n| n > 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub u: f64,
    pub v: f64,
    pub closed: bool,
    /// Present iff `closed`.
    pub epsilon: Option<f64>,
}

/// Sweep output: one record per non-degenerate grid cell, ordered by v then u.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EpsilonField {
    pub records: Vec<SweepRecord>,
}

impl EpsilonField {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Sorted distinct u values.
    pub fn u_values(&self) -> Vec<f64> {
        distinct(self.records.iter().map(|r| r.u))
    }

    pub fn v_values(&self) -> Vec<f64> {
        distinct(self.records.iter().map(|r| r.v))
    }

    pub fn get(&self, u: f64, v: f64) -> Option<&SweepRecord> {
        self.records.iter().find(|r| r.u == u && r.v == v)
    }

    /// Cells whose mirror image (−u, v) is missing or differs.
    pub fn mirror_mismatches(&self) -> Vec<SweepRecord> {
        self.records
            .iter()
            .filter(|r| {
                self.get(-r.u, r.v)
                    .is_none_or(|m| m.closed != r.closed || m.epsilon.map(f64::to_bits) != r.epsilon.map(f64::to_bits))
            })
            .copied()
            .collect()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["u", "v", "closed", "epsilon"]).map_err(csv_err)?;
        for r in &self.records {
            let eps = r.epsilon.map(fmt_17).unwrap_or_default();
            out.write_record([fmt_17(r.u), fmt_17(r.v), r.closed.to_string(), eps]).map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
        let header = rdr.headers().map_err(csv_err)?.clone();
        if header.iter().collect::<Vec<_>>() != ["u", "v", "closed", "epsilon"] {
            return Err(Error::Parse { line: 1, msg: format!("unexpected header {header:?}") });
        }
        let mut records = Vec::new();
        for row in rdr.records() {
            let row = row.map_err(csv_err)?;
            let line = row.position().map_or(0, |p| p.line());
            let bad = |msg: String| Error::Parse { line, msg };
            let num = |k: usize, name: &str| -> Result<f64> {
                let s = row.get(k).unwrap_or("");
                s.trim().parse::<f64>().map_err(|e| bad(format!("{name} {s:?}: {e}")))
            };
            let u = num(0, "u")?;
            let v = num(1, "v")?;
            let closed = match row.get(2).map(str::trim) {
                Some("true") => true,
                Some("false") => false,
                other => return Err(bad(format!("closed flag {other:?}"))),
            };
            let epsilon = match row.get(3).map(str::trim) {
                None | Some("") => None,
                Some(_) => Some(num(3, "epsilon")?),
            };
            if closed != epsilon.is_some() {
                return Err(bad(format!("closed={closed} but epsilon is {epsilon:?}")));
            }
            records.push(SweepRecord { u, v, closed, epsilon });
        }
        Ok(EpsilonField { records })
    }
}

pub fn save_field(field: &EpsilonField, path: impl AsRef<Path>) -> Result<()> {
    let f = std::fs::File::create(path)?;
    field.write_csv(std::io::BufWriter::new(f))
}

pub fn load_field(path: impl AsRef<Path>) -> Result<EpsilonField> {
    let f = std::fs::File::open(path)?;
    EpsilonField::read_csv(std::io::BufReader::new(f))
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_17(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::Parse { line, msg: e.to_string() }
}

fn distinct(it: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = it.collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn sweep_cell(config: &SweepConfig, t: &Triangle, u: f64, v: f64) -> SweepRecord {
    let open = SweepRecord { u, v, closed: false, epsilon: None };
    let dom = config.domain;
    if !is_closed_default(t, &dom).unwrap_or(false) {
        return open;
    }
    let result = match config.method {
        SweepMethod::Pixel { step } => {
            PixelGridSpec::new(dom, step).and_then(|grid| epsilon_pixel(t, &grid))
        }
        SweepMethod::Scanline { tol } => epsilon_scanline(t, &dom, tol),
    };
    match result {
        Ok(r) => SweepRecord { u, v, closed: r.closed, epsilon: r.epsilon },
        Err(_) => open,
    }
}

/// Computes ε for every non-degenerate cell of the grid.
///
/// Cells are independent; results are assembled in (v, u) order so the field
/// is identical for any worker count.
pub fn sweep(config: &SweepConfig) -> Result<EpsilonField> {
    let run = || -> EpsilonField {
        let cells: Vec<(f64, f64)> =
            config.v.values().flat_map(|v| config.u.values().map(move |u| (u, v))).collect();
        let records = cells
            .par_iter()
            .filter_map(|&(u, v)| {
                let t = config.triangle_at(u, v).ok()?;
                Some(sweep_cell(config, &t, u, v))
            })
            .collect();
        EpsilonField { records }
    };
    match config.worker_count() {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(run))
        }
        None => Ok(run()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureReport {
    pub cells_tested: usize,
    pub cells_closed: usize,
    /// Smallest ε with its (u, v).
    pub min_epsilon: Option<(f64, f64, f64)>,
    /// Closed cells with ε < ε₀ − slack.
    pub violations: Vec<SweepRecord>,
}

impl ConjectureReport {
    pub fn verified(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_conjecture(field: &EpsilonField, epsilon0: f64, slack: f64) -> Result<ConjectureReport> {
    if !(slack >= 0.0) {
        return Err(Error::InvalidParameter(format!("slack {slack} must be non-negative")));
    }
    let closed: Vec<&SweepRecord> = field.records.iter().filter(|r| r.closed).collect();
    let min_epsilon = closed
        .iter()
        .filter_map(|r| r.epsilon.map(|e| (e, r.u, r.v)))
        .min_by(|a, b| a.0.total_cmp(&b.0));
    let violations = closed
        .iter()
        .filter(|r| r.epsilon.is_some_and(|e| e < epsilon0 - slack))
        .map(|r| **r)
        .collect();
    Ok(ConjectureReport {
        cells_tested: field.len(),
        cells_closed: closed.len(),
        min_epsilon,
        violations,
    })
}
