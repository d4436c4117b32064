//! Raster output: ε heatmaps of a sweep field and curve plots for a single
//! triangle, written as binary PPM.

use std::io::{Read, Write};
use std::path::Path;

use crate::area::EPSILON_0;
use crate::error::{Error, Result};
use crate::geometry::{Point, Triangle};
use crate::sweep::{EpsilonField, SweepRecord};
use crate::tracing::{trace, Domain};

pub type Rgb = [u8; 3];

pub const WHITE: Rgb = [255, 255, 255];
pub const BLACK: Rgb = [0, 0, 0];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, fill: Rgb) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter(format!("image size {width}x{height} is empty")));
        }
        Ok(RasterImage { width, height, data: fill.repeat(width * height) })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Row-major RGB bytes, top row first.
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> Rgb {
        let k = 3 * (y * self.width + x);
        [self.data[k], self.data[k + 1], self.data[k + 2]]
    }

    pub fn set(&mut self, x: usize, y: usize, c: Rgb) {
        if x < self.width && y < self.height {
            let k = 3 * (y * self.width + x);
            self.data[k..k + 3].copy_from_slice(&c);
        }
    }

    pub fn fill_rect(&mut self, x0: usize, y0: usize, w: usize, h: usize, c: Rgb) {
        for y in y0..(y0 + h).min(self.height) {
            for x in x0..(x0 + w).min(self.width) {
                self.set(x, y, c);
            }
        }
    }

    /// Every pixel has the colour `c`.
    pub fn is_uniform(&self, c: Rgb) -> bool {
        self.data.chunks_exact(3).all(|p| p == c)
    }

    pub fn write_ppm<W: Write>(&self, mut w: W) -> Result<()> {
        write!(w, "P6\n{} {}\n255\n", self.width, self.height)?;
        w.write_all(&self.data)?;
        w.flush()?;
        Ok(())
    }

    pub fn to_ppm_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::with_capacity(self.data.len() + 32);
        self.write_ppm(&mut buf).expect("writing to a Vec cannot fail");
        buf
    }

    pub fn save_ppm(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_ppm(std::io::BufWriter::new(f))
    }

    /// Reads the exact layout produced by [`RasterImage::write_ppm`].
    pub fn read_ppm<R: Read>(mut r: R) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        let bad = |msg: &str| Error::Parse { line: 1, msg: msg.to_string() };
        let mut fields = Vec::new();
        let mut pos = 0;
        while fields.len() < 4 {
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos >= bytes.len() {
                return Err(bad("truncated PPM header"));
            }
            fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad("non-ASCII header"))?);
            pos += 1;
        }
        if fields[0] != "P6" || fields[3] != "255" {
            return Err(bad("expected P6 with maxval 255"));
        }
        let width: usize = fields[1].parse().map_err(|_| bad("bad width"))?;
        let height: usize = fields[2].parse().map_err(|_| bad("bad height"))?;
        let data = bytes[pos..].to_vec();
        if data.len() != 3 * width * height {
            return Err(bad("pixel data length does not match header"));
        }
        Ok(RasterImage { width, height, data })
    }
}

/// HSV to RGB with hue in degrees and unit saturation/value.
fn hue_to_rgb(hue: f64) -> Rgb {
    let h = hue.rem_euclid(360.0) / 60.0;
    let x = 1.0 - (h % 2.0 - 1.0).abs();
    let (r, g, b) = match h as u32 {
        0 => (1.0, x, 0.0),
        1 => (x, 1.0, 0.0),
        2 => (0.0, 1.0, x),
        3 => (0.0, x, 1.0),
        4 => (x, 0.0, 1.0),
        _ => (1.0, 0.0, x),
    };
    let q = |c: f64| (c * 255.0).round() as u8;
    [q(r), q(g), q(b)]
}

/// Equidistant ε bands coloured from blue (band 0) to red (top band).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColorMapSpec {
    pub eps_min: f64,
    pub eps_max: f64,
    pub bands: usize,
    pub background: Rgb,
    pub open: Rgb,
    pub degenerate: Rgb,
}

/// How a single field cell is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellClass {
    Band(usize),
    Background,
    Open,
    Degenerate,
}

impl ColorMapSpec {
    pub fn new(eps_max: f64, bands: usize) -> Result<Self> {
        Self::with_range(EPSILON_0, eps_max, bands)
    }

    pub fn with_range(eps_min: f64, eps_max: f64, bands: usize) -> Result<Self> {
        if !(eps_min.is_finite() && eps_max.is_finite() && eps_max > eps_min) {
            return Err(Error::InvalidParameter(format!("colour range [{eps_min}, {eps_max}] is empty")));
        }
        if bands < 2 {
            return Err(Error::InvalidParameter(format!("band count {bands} must be at least 2")));
        }
        Ok(ColorMapSpec {
            eps_min,
            eps_max,
            bands,
            background: WHITE,
            open: [64, 64, 64],
            degenerate: BLACK,
        })
    }

    /// `None` below `eps_min`; values above `eps_max` land in the top band.
    pub fn band_index(&self, eps: f64) -> Option<usize> {
        if !(eps >= self.eps_min) {
            return None;
        }
        let k = ((eps - self.eps_min) / (self.eps_max - self.eps_min) * self.bands as f64).floor();
        Some((k as usize).min(self.bands - 1))
    }

    pub fn band_color(&self, band: usize) -> Rgb {
        let frac = band.min(self.bands - 1) as f64 / (self.bands - 1) as f64;
        hue_to_rgb(240.0 * (1.0 - frac))
    }

    pub fn classify(&self, record: Option<&SweepRecord>) -> CellClass {
        match record {
            None => CellClass::Degenerate,
            Some(SweepRecord { closed: false, .. }) | Some(SweepRecord { epsilon: None, .. }) => CellClass::Open,
            Some(SweepRecord { epsilon: Some(e), .. }) => {
                self.band_index(*e).map_or(CellClass::Background, CellClass::Band)
            }
        }
    }

    pub fn color(&self, class: CellClass) -> Rgb {
        match class {
            CellClass::Band(k) => self.band_color(k),
            CellClass::Background => self.background,
            CellClass::Open => self.open,
            CellClass::Degenerate => self.degenerate,
        }
    }
}

/// Grid cells of `field` in `band`, as (u, v).
pub fn cells_in_band(field: &EpsilonField, spec: &ColorMapSpec, band: usize) -> Vec<(f64, f64)> {
    field
        .records
        .iter()
        .filter(|r| spec.classify(Some(r)) == CellClass::Band(band))
        .map(|r| (r.u, r.v))
        .collect()
}

/// Heatmap with one `cell_px`-square block per (u, v) grid cell, u to the
/// right and v upward. Grid positions absent from the field are drawn in
/// the degenerate colour.
pub fn render_field(field: &EpsilonField, spec: &ColorMapSpec, cell_px: usize) -> Result<RasterImage> {
    if field.is_empty() {
        return Err(Error::InvalidParameter("field has no cells".into()));
    }
    let cell_px = cell_px.max(1);
    let us = field.u_values();
    let mut vs = field.v_values();
    let step_v = min_gap(&vs);
    let step_u = min_gap(&us);
    // Fill holes in v (the v = 0 row is never in a field).
    if let Some(step) = step_v {
        let (lo, hi) = (vs[0], vs[vs.len() - 1]);
        let n = ((hi - lo) / step).round() as usize;
        vs = (0..=n).map(|k| lo + k as f64 * step).collect();
    }
    let us = match step_u {
        Some(step) => {
            let (lo, hi) = (us[0], us[us.len() - 1]);
            let n = ((hi - lo) / step).round() as usize;
            (0..=n).map(|k| lo + k as f64 * step).collect()
        }
        None => us,
    };
    let mut img = RasterImage::new(us.len() * cell_px, vs.len() * cell_px, spec.background)?;
    let tol = step_u.unwrap_or(1.0).min(step_v.unwrap_or(1.0)) * 1e-6;
    let lookup = |u: f64, v: f64| {
        field.records.iter().find(|r| (r.u - u).abs() <= tol && (r.v - v).abs() <= tol)
    };
    for (j, &v) in vs.iter().enumerate() {
        let row = vs.len() - 1 - j;
        for (i, &u) in us.iter().enumerate() {
            let c = spec.color(spec.classify(lookup(u, v)));
            img.fill_rect(i * cell_px, row * cell_px, cell_px, cell_px, c);
        }
    }
    Ok(img)
}

fn min_gap(sorted: &[f64]) -> Option<f64> {
    sorted.windows(2).map(|w| w[1] - w[0]).filter(|d| *d > 0.0).min_by(f64::total_cmp)
}

pub const INSIDE_SHADE: Rgb = [220, 228, 245];
pub const CURVE_COLOR: Rgb = [200, 20, 20];

/// Plot of `dom` at `size` pixels wide: the region g ≥ 0 shaded, the traced
/// curve in red, the triangle edges in black.
pub fn render_curve(t: &Triangle, dom: &Domain, size: usize) -> Result<RasterImage> {
    if size < 2 {
        return Err(Error::InvalidParameter(format!("image size {size} is too small")));
    }
    let width = size;
    let height = ((size as f64 * dom.height() / dom.width()).round() as usize).max(2);
    let px = dom.width() / width as f64;
    let py = dom.height() / height as f64;
    let mut img = RasterImage::new(width, height, WHITE)?;
    for j in 0..height {
        let y = dom.y_max - (j as f64 + 0.5) * py;
        for i in 0..width {
            let x = dom.x_min + (i as f64 + 0.5) * px;
            if t.gap_xy(x, y) >= 0.0 {
                img.set(i, j, INSIDE_SHADE);
            }
        }
    }
    let to_px = |p: Point| ((p.x - dom.x_min) / px, (dom.y_max - p.y) / py);
    let draw = |p: Point, q: Point, c: Rgb, img: &mut RasterImage| {
        let (x0, y0) = to_px(p);
        let (x1, y1) = to_px(q);
        let n = ((x1 - x0).abs().max((y1 - y0).abs()).ceil() as usize).clamp(1, 1 << 20);
        for k in 0..=n {
            let s = k as f64 / n as f64;
            let (x, y) = (x0 + s * (x1 - x0), y0 + s * (y1 - y0));
            if x >= 0.0 && y >= 0.0 {
                img.set(x as usize, y as usize, c);
            }
        }
    };
    let cell = 1.5 * px.max(py);
    for branch in trace(t, dom, cell)? {
        for (p, q) in branch.segments() {
            draw(p, q, CURVE_COLOR, &mut img);
        }
    }
    let [a, b, c] = t.vertices();
    for (p, q) in [(a, b), (b, c), (c, a)] {
        draw(p, q, BLACK, &mut img);
    }
    Ok(img)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(u: f64, v: f64, eps: Option<f64>) -> SweepRecord {
        SweepRecord { u, v, closed: eps.is_some(), epsilon: eps }
    }

    #[test]
    fn band_boundaries() {
        let s = ColorMapSpec::with_range(1.0, 2.0, 4).unwrap();
        assert_eq!(s.band_index(0.999), None);
        assert_eq!(s.band_index(1.0), Some(0));
        assert_eq!(s.band_index(1.25), Some(1));
        assert_eq!(s.band_index(1.999), Some(3));
        assert_eq!(s.band_index(2.0), Some(3));
        assert_eq!(s.band_index(50.0), Some(3));
        assert_eq!(s.band_index(f64::NAN), None);
        assert!(ColorMapSpec::new(2.0, 1).is_err());
        assert!(ColorMapSpec::new(0.5, 8).is_err());
    }

    #[test]
    fn ramp_runs_blue_to_red() {
        let s = ColorMapSpec::new(2.0, 64).unwrap();
        assert_eq!(s.band_color(0), [0, 0, 255]);
        assert_eq!(s.band_color(63), [255, 0, 0]);
        assert_eq!(hue_to_rgb(120.0), [0, 255, 0]);
    }

    #[test]
    fn single_cell_at_eps_min_is_blue() {
        let s = ColorMapSpec::new(2.0, 64).unwrap();
        let field = EpsilonField { records: vec![rec(0.0, 150.0, Some(EPSILON_0))] };
        let img = render_field(&field, &s, 3).unwrap();
        assert_eq!((img.width(), img.height()), (3, 3));
        assert!(img.is_uniform([0, 0, 255]));
    }

    #[test]
    fn field_layout_has_v_upward() {
        let s = ColorMapSpec::new(2.0, 2).unwrap();
        let field = EpsilonField {
            records: vec![rec(0.0, -100.0, Some(0.5)), rec(0.0, -50.0, None), rec(0.0, 50.0, Some(1.9))],
        };
        let img = render_field(&field, &s, 1).unwrap();
        // v = −100, −50, 0 (missing), 50 from bottom to top.
        assert_eq!(img.height(), 4);
        assert_eq!(img.get(0, 0), [255, 0, 0]);
        assert_eq!(img.get(0, 1), s.degenerate);
        assert_eq!(img.get(0, 2), s.open);
        assert_eq!(img.get(0, 3), s.background);
    }

    #[test]
    fn ppm_roundtrip_and_header() {
        let mut img = RasterImage::new(2, 1, WHITE).unwrap();
        img.set(1, 0, [1, 2, 3]);
        let bytes = img.to_ppm_bytes();
        assert_eq!(&bytes[..11], b"P6\n2 1\n255\n");
        assert_eq!(&bytes[11..], &[255, 255, 255, 1, 2, 3]);
        assert_eq!(RasterImage::read_ppm(&bytes[..]).unwrap(), img);
        assert!(RasterImage::read_ppm(&bytes[..15]).is_err());
    }

    #[test]
    fn curve_plot_dimensions() {
        let t = Triangle::unit_equilateral();
        let dom = Domain::new(-3.0, 3.0, -2.0, 4.0).unwrap();
        let img = render_curve(&t, &dom, 60).unwrap();
        assert_eq!((img.width(), img.height()), (60, 60));
        assert!(img.data().chunks_exact(3).any(|p| p == CURVE_COLOR));
        assert!(img.data().chunks_exact(3).any(|p| p == BLACK));
    }
}
