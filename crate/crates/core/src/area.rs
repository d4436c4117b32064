//! Area excess ε = (|E′| − |△|) / |△| of the curve's interior over the
//! triangle, by pixel counting and by adaptive scanline integration.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{PlaneField, Triangle};
use crate::poly::Neumaier;
use crate::roots::{bisect, inside};
use crate::tracing::{is_closed_default, Domain};

/// The equilateral-triangle value of ε, to the ten digits usually quoted.
pub const EPSILON_0: f64 = 0.814_042_077_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpsilonMethod {
    Pixel,
    Scanline,
}

impl fmt::Display for EpsilonMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EpsilonMethod::Pixel => "pixel",
            EpsilonMethod::Scanline => "scanline",
        })
    }
}

impl FromStr for EpsilonMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pixel" => Ok(EpsilonMethod::Pixel),
            "scanline" => Ok(EpsilonMethod::Scanline),
            other => Err(Error::InvalidParameter(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonResult {
    /// Absent when the curve is not closed in the domain.
    pub epsilon: Option<f64>,
    pub closed: bool,
    pub area_curve: f64,
    pub area_triangle: f64,
    pub method: EpsilonMethod,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PixelGridSpec {
    pub domain: Domain,
    /// Pixel pitch in length units.
    pub step: f64,
}

impl PixelGridSpec {
    pub fn new(domain: Domain, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidParameter(format!("pixel step {step} must be positive")));
        }
        Ok(PixelGridSpec { domain, step })
    }

    /// Pixel columns and rows; the domain is rounded to whole pixels.
    pub fn dims(&self) -> (usize, usize) {
        let nx = (self.domain.width() / self.step).round().max(1.0) as usize;
        let ny = (self.domain.height() / self.step).round().max(1.0) as usize;
        (nx, ny)
    }

    /// Centre of pixel `i` along x.
    #[inline]
    pub fn x_at(&self, i: usize) -> f64 {
        self.domain.x_min + (i as f64 + 0.5) * self.step
    }

    #[inline]
    pub fn y_at(&self, j: usize) -> f64 {
        self.domain.y_min + (j as f64 + 0.5) * self.step
    }
}

/// Number of pixel centres with `f ≥ 0`. Rows are counted independently and
/// summed as integers, so the result does not depend on scheduling.
pub fn count_pixels(f: &impl PlaneField, grid: &PixelGridSpec) -> u64 {
    let (nx, ny) = grid.dims();
    (0..ny)
        .into_par_iter()
        .map(|j| {
            let y = grid.y_at(j);
            (0..nx).filter(|&i| inside(f.value(grid.x_at(i), y))).count() as u64
        })
        .sum()
}

pub fn epsilon_pixel(t: &Triangle, grid: &PixelGridSpec) -> Result<EpsilonResult> {
    let closed = is_closed_default(t, &grid.domain)?;
    let count = count_pixels(t, grid);
    let area_curve = count as f64 * grid.step * grid.step;
    let area_triangle = t.area();
    Ok(EpsilonResult {
        epsilon: closed.then(|| (area_curve - area_triangle) / area_triangle),
        closed,
        area_curve,
        area_triangle,
        method: EpsilonMethod::Pixel,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanlineOptions {
    /// Target error relative to the area.
    pub tol: f64,
    /// Samples per column used to bracket roots.
    pub column_samples: usize,
    /// Maximum curve crossings per column.
    pub max_roots: usize,
    pub initial_panels: usize,
}

impl ScanlineOptions {
    pub fn with_tol(tol: f64) -> Self {
        ScanlineOptions { tol, ..Default::default() }
    }
}

impl Default for ScanlineOptions {
    fn default() -> Self {
        ScanlineOptions {
            tol: 1e-6,
            column_samples: 4096,
            max_roots: 16,
            initial_panels: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaEstimate {
    pub area: f64,
    /// Accumulated Richardson error estimate.
    pub error: f64,
    /// x-extent of the region.
    pub x_range: (f64, f64),
}

/// Total length of `{y ∈ [y0, y1] : f(x, y) ≥ 0}`.
///
/// The column is sampled at `samples + 1` equally spaced ordinates plus the
/// field's ridge ordinates; every inside/outside transition is bisected.
pub fn column_measure(
    f: &impl PlaneField,
    x: f64,
    (y0, y1): (f64, f64),
    samples: usize,
    max_roots: usize,
) -> Result<f64> {
    let n = samples.max(1);
    let mut ys: Vec<f64> = (0..=n)
        .map(|k| if k == n { y1 } else { y0 + (y1 - y0) * (k as f64 / n as f64) })
        .collect();
    let ridges: Vec<f64> = f.column_ridges(x).into_iter().filter(|y| *y > y0 && *y < y1).collect();
    if !ridges.is_empty() {
        ys.extend(ridges);
        ys.sort_by(f64::total_cmp);
        ys.dedup();
    }
    let mut measure = Neumaier::default();
    let mut roots = 0usize;
    let mut prev_y = y0;
    let mut prev_in = inside(f.value(x, y0));
    let mut run_start = if prev_in { Some(y0) } else { None };
    for &y in &ys[1..] {
        let now_in = inside(f.value(x, y));
        if now_in != prev_in {
            roots += 1;
            if roots > max_roots {
                return Err(Error::TooManyRoots { x, max: max_roots });
            }
            let r = bisect(|s| f.value(x, s), prev_y, y)?;
            match run_start.take() {
                Some(s) => measure.add(r - s),
                None => run_start = Some(r),
            }
        }
        prev_y = y;
        prev_in = now_in;
    }
    if let Some(s) = run_start {
        measure.add(y1 - s);
    }
    Ok(measure.sum())
}

struct Integrator<'a, F> {
    f: &'a F,
    dom: Domain,
    opts: ScanlineOptions,
}

impl<F: PlaneField> Integrator<'_, F> {
    fn h(&self, x: f64) -> Result<f64> {
        column_measure(
            self.f,
            x,
            (self.dom.y_min, self.dom.y_max),
            self.opts.column_samples,
            self.opts.max_roots,
        )
    }

    /// Leftmost (or rightmost) x with a non-empty column, located by a coarse
    /// column scan followed by bisection on emptiness.
    fn extent(&self, from: f64) -> Result<(f64, f64)> {
        let coarse = 1024usize;
        let (x0, x1) = (from, self.dom.x_max);
        let xs: Vec<f64> = (0..=coarse).map(|k| x0 + (x1 - x0) * k as f64 / coarse as f64).collect();
        let filled: Vec<bool> = xs
            .par_iter()
            .map(|&x| self.h(x).map(|m| m > 0.0))
            .collect::<Result<_>>()?;
        let first = filled.iter().position(|&b| b);
        let last = filled.iter().rposition(|&b| b);
        let (Some(first), Some(last)) = (first, last) else {
            return Ok((from, from));
        };
        let refine = |mut empty: f64, mut full: f64| -> Result<f64> {
            for _ in 0..100 {
                let mid = 0.5 * (empty + full);
                if mid == empty || mid == full {
                    break;
                }
                if self.h(mid)? > 0.0 {
                    full = mid;
                } else {
                    empty = mid;
                }
            }
            Ok(empty)
        };
        let lo = if first == 0 { xs[0] } else { refine(xs[first - 1], xs[first])? };
        let hi = if last == coarse { xs[coarse] } else { refine(xs[last + 1], xs[last])? };
        Ok((lo, hi))
    }

    /// ∫ h over [lo, hi] with x = lo + W(1 − cos θ)/2, which removes the
    /// square-root behaviour of h where a column is tangent to the curve at
    /// the ends of the range.
    fn integrate(&self, lo: f64, hi: f64, abs_tol: f64) -> Result<(f64, f64)> {
        let w = hi - lo;
        if w <= 0.0 {
            return Ok((0.0, 0.0));
        }
        let integrand = |th: f64| -> Result<f64> {
            let x = lo + 0.5 * w * (1.0 - th.cos());
            Ok(self.h(x)? * 0.5 * w * th.sin())
        };
        global_adaptive_simpson(&integrand, 0.0, std::f64::consts::PI, abs_tol, self.opts.initial_panels)
    }
}

/// Simpson panel on [a, b] with samples at the ends, quarters and midpoint.
#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    f: [f64; 5],
    value: f64,
    error: f64,
}

impl Panel {
    fn new(a: f64, b: f64, f: [f64; 5]) -> Self {
        let whole = (b - a) / 6.0 * (f[0] + 4.0 * f[2] + f[4]);
        let halves = (b - a) / 12.0 * (f[0] + 4.0 * f[1] + 2.0 * f[2] + 4.0 * f[3] + f[4]);
        let delta = halves - whole;
        // Richardson-extrapolated value, with the unscaled difference as error.
        Panel { a, b, f, value: halves + delta / 15.0, error: delta.abs() }
    }

    fn nodes(a: f64, b: f64) -> [f64; 5] {
        let m = 0.5 * (a + b);
        [a, 0.5 * (a + m), m, 0.5 * (m + b), b]
    }

    /// False once the child nodes would no longer be distinct floats.
    fn splittable(&self) -> bool {
        let m = 0.5 * (self.a + self.b);
        [Panel::nodes(self.a, m), Panel::nodes(m, self.b)]
            .iter()
            .all(|n| n.windows(2).all(|w| w[0] < w[1]))
    }
}

/// Panels refined per round; fixed so the result is independent of the
/// number of worker threads.
const REFINE_BATCH: usize = 16;
const MAX_PANELS: usize = 200_000;

/// Globally adaptive Simpson integration: the panels with the largest
/// Richardson error estimates are split until the summed estimate drops
/// below `abs_tol`.
fn global_adaptive_simpson(
    f: &(impl Fn(f64) -> Result<f64> + Sync),
    a: f64,
    b: f64,
    abs_tol: f64,
    initial_panels: usize,
) -> Result<(f64, f64)> {
    let n0 = initial_panels.max(1);
    let edge = |k: usize| a + (b - a) * k as f64 / n0 as f64;
    let mut panels: Vec<Panel> = (0..n0)
        .into_par_iter()
        .map(|k| {
            let xs = Panel::nodes(edge(k), edge(k + 1));
            let mut fs = [0.0; 5];
            for (v, x) in fs.iter_mut().zip(xs) {
                *v = f(x)?;
            }
            Ok(Panel::new(xs[0], xs[4], fs))
        })
        .collect::<Result<_>>()?;
    // Panels that cannot be split further still count towards the totals.
    let mut frozen: Vec<Panel> = Vec::new();

    loop {
        let mut all: Vec<&Panel> = panels.iter().chain(frozen.iter()).collect();
        all.sort_by(|p, q| p.a.total_cmp(&q.a));
        let value = all.iter().map(|p| p.value).collect::<Neumaier>().sum();
        let error = all.iter().map(|p| p.error).collect::<Neumaier>().sum();
        if error <= abs_tol {
            return Ok((value, error));
        }
        if panels.is_empty() || panels.len() + frozen.len() > MAX_PANELS {
            return Err(Error::NotConverged { estimate: value, error });
        }
        panels.sort_by(|p, q| q.error.total_cmp(&p.error).then(p.a.total_cmp(&q.a)));
        let worst: Vec<Panel> = panels.drain(..REFINE_BATCH.min(panels.len())).collect();
        let (split, stuck): (Vec<Panel>, Vec<Panel>) = worst.into_iter().partition(Panel::splittable);
        frozen.extend(stuck);
        let children: Vec<[Panel; 2]> = split
            .par_iter()
            .map(|p| -> Result<[Panel; 2]> {
                let m = 0.5 * (p.a + p.b);
                let l = Panel::nodes(p.a, m);
                let r = Panel::nodes(m, p.b);
                let left = [p.f[0], f(l[1])?, p.f[1], f(l[3])?, p.f[2]];
                let right = [p.f[2], f(r[1])?, p.f[3], f(r[3])?, p.f[4]];
                Ok([Panel::new(p.a, m, left), Panel::new(m, p.b, right)])
            })
            .collect::<Result<_>>()?;
        panels.extend(children.into_iter().flatten());
    }
}

/// Area of `{f ≥ 0}` inside `dom` by integrating column measures over x.
///
/// With `mirror_axis = Some(c)` the field is assumed symmetric under
/// x ↦ 2c − x: only the right half is integrated and doubled.
pub fn scanline_area(
    f: &impl PlaneField,
    dom: &Domain,
    opts: &ScanlineOptions,
    mirror_axis: Option<f64>,
) -> Result<AreaEstimate> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {} must be positive", opts.tol)));
    }
    let it = Integrator { f, dom: *dom, opts: *opts };
    let from = mirror_axis.unwrap_or(dom.x_min);
    let (lo, hi) = it.extent(from)?;
    let lo = if mirror_axis.is_some() { from } else { lo };
    let factor = if mirror_axis.is_some() { 2.0 } else { 1.0 };

    // A pass over the initial panels sets the scale of the absolute tolerance.
    let (rough, _) = it.integrate(lo, hi, f64::INFINITY)?;
    let abs_tol = opts.tol * rough.abs().max(f64::MIN_POSITIVE);
    let (area, error) = it.integrate(lo, hi, abs_tol)?;
    let x_range = if let Some(c) = mirror_axis { (2.0 * c - hi, hi) } else { (lo, hi) };
    Ok(AreaEstimate { area: factor * area, error: factor * error, x_range })
}

/// ε by scanline integration, with `tol` bounding the error in ε.
pub fn epsilon_scanline(t: &Triangle, dom: &Domain, tol: f64) -> Result<EpsilonResult> {
    epsilon_scanline_with(t, dom, &ScanlineOptions::with_tol(tol / 10.0))
}

pub fn epsilon_scanline_with(t: &Triangle, dom: &Domain, opts: &ScanlineOptions) -> Result<EpsilonResult> {
    if !is_closed_default(t, dom)? {
        return Err(Error::OpenCurve);
    }
    let est = scanline_area(t, dom, opts, None)?;
    let area_triangle = t.area();
    Ok(EpsilonResult {
        epsilon: Some((est.area - area_triangle) / area_triangle),
        closed: true,
        area_curve: est.area,
        area_triangle,
        method: EpsilonMethod::Scanline,
    })
}

/// ε for the equilateral triangle A(0,√3), B(−1,0), C(1,0), accurate to `tol`.
pub fn epsilon0_equilateral(tol: f64) -> Result<f64> {
    if !(tol >= 1e-9) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} below 1e-9")));
    }
    let t = Triangle::unit_equilateral();
    let dom = Domain::square(3.0)?;
    // ε error = relative area error × (1 + ε).
    let opts = ScanlineOptions::with_tol(tol / 10.0);
    let est = scanline_area(&t, &dom, &opts, Some(0.0))?;
    let area_triangle = t.area();
    Ok((est.area - area_triangle) / area_triangle)
}
