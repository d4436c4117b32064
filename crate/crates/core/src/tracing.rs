//! Numerical location of the curve g = 0: roots along segments, the six
//! side-line intersections, closedness, marching-squares contours and the
//! lower/upper branch functions y = f(x).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Point, Triangle};
use crate::roots::{bisect, inside, scan_roots};

/// Samples used to bracket roots along a segment when no step is given.
pub const DEFAULT_SCAN_SAMPLES: usize = 4096;

/// Boundary samples per domain width used by [`is_closed_default`].
pub const DEFAULT_BOUNDARY_SAMPLES: f64 = 4000.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSegment {
    pub start: Point,
    pub end: Point,
}

impl LineSegment {
    pub fn new(start: Point, end: Point) -> Result<Self> {
        if !(start.is_finite() && end.is_finite()) {
            return Err(Error::NonFinite("segment endpoint"));
        }
        if start == end {
            return Err(Error::InvalidParameter("segment endpoints coincide".into()));
        }
        Ok(LineSegment { start, end })
    }

    pub fn length(&self) -> f64 {
        self.start.dist(self.end)
    }

    pub fn at(&self, t: f64) -> Point {
        self.start.lerp(self.end, t)
    }
}

/// Axis-aligned rectangle `[x_min, x_max] × [y_min, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Domain {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        if ![x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("domain bound"));
        }
        if !(x_max > x_min && y_max > y_min) {
            return Err(Error::InvalidDomain(format!(
                "[{x_min}, {x_max}] x [{y_min}, {y_max}] has no area"
            )));
        }
        Ok(Domain { x_min, x_max, y_min, y_max })
    }

    /// `[−h, h]²`.
    pub fn square(half: f64) -> Result<Self> {
        Domain::new(-half, half, -half, half)
    }

    /// The box around `t`'s centroid reaching `factor` times its longest side
    /// in every direction.
    pub fn around(t: &Triangle, factor: f64) -> Self {
        let c = t.centroid();
        let h = factor * t.side_lengths().longest();
        Domain { x_min: c.x - h, x_max: c.x + h, y_min: c.y - h, y_max: c.y + h }
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn contains(&self, p: Point) -> bool {
        (self.x_min..=self.x_max).contains(&p.x) && (self.y_min..=self.y_max).contains(&p.y)
    }

    pub fn contains_triangle(&self, t: &Triangle) -> bool {
        t.vertices().iter().all(|&v| self.contains(v))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Domain {
            x_min: self.x_min * s,
            x_max: self.x_max * s,
            y_min: self.y_min * s,
            y_max: self.y_max * s,
        }
    }

    /// The four corners, counter-clockwise from (x_min, y_min).
    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.x_min, self.y_min),
            Point::new(self.x_max, self.y_min),
            Point::new(self.x_max, self.y_max),
            Point::new(self.x_min, self.y_max),
        ]
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.x_min, self.x_max, self.y_min, self.y_max)
    }
}

impl FromStr for Domain {
    type Err = Error;

    /// `x0,x1,y0,y1`.
    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidDomain(format!("{s:?}: {e}")))?;
        match v[..] {
            [x0, x1, y0, y1] => Domain::new(x0, x1, y0, y1),
            _ => Err(Error::InvalidDomain(format!("{s:?}: expected x0,x1,y0,y1"))),
        }
    }
}

/// All roots of g along `seg`, bracketed at resolution `scan_step` and
/// bisected to full precision, in order from `seg.start`.
pub fn line_roots(t: &Triangle, seg: &LineSegment, scan_step: f64) -> Result<Vec<Point>> {
    if !(scan_step > 0.0) {
        return Err(Error::InvalidParameter(format!("scan step {scan_step} must be positive")));
    }
    let n = (seg.length() / scan_step).ceil().max(1.0) as usize;
    Ok(scan_roots(|s| t.gap(seg.at(s)), 0.0, 1.0, n).into_iter().map(|s| seg.at(s)).collect())
}

/// Labels of the six side-line intersections.
///
/// Each side line meets the curve once beyond each of its endpoints. P1 and
/// P2 lie beyond B (on lines BC and AB), P3 and P4 beyond C (on CA and BC),
/// P5 and P6 beyond A (on AB and CA); for the triangle A(0,√3), B(−1,0),
/// C(1,0) this reproduces the usual left-to-right labelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Bc,
    Ca,
    Ab,
}

const LABELS: [(Side, Vertex); 6] = [
    (Side::Bc, Vertex::B),
    (Side::Ab, Vertex::B),
    (Side::Ca, Vertex::C),
    (Side::Bc, Vertex::C),
    (Side::Ab, Vertex::A),
    (Side::Ca, Vertex::A),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vertex {
    A,
    B,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IntersectionSet {
    /// P1…P6; `None` where no crossing was found in the search window.
    pub points: [Option<Point>; 6],
}

impl IntersectionSet {
    pub fn is_complete(&self) -> bool {
        self.points.iter().all(Option::is_some)
    }

    /// `P_k`, 1-based.
    pub fn get(&self, k: usize) -> Option<Point> {
        self.points.get(k.checked_sub(1)?).copied().flatten()
    }

    /// Side line and vertex beyond which `P_k` lies.
    pub fn placement_of(k: usize) -> (Side, Vertex) {
        LABELS[k - 1]
    }

    pub fn labelled(&self) -> impl Iterator<Item = (String, Point)> + '_ {
        self.points
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (format!("P{}", i + 1), p)))
    }
}

/// Intersections of the curve with the three side lines.
///
/// Each ray starting at a vertex and running away from the other end of the
/// side is scanned for the first crossing within ten longest-side lengths.
pub fn side_line_intersections(t: &Triangle) -> IntersectionSet {
    let reach = 10.0 * t.side_lengths().longest();
    let vertex = |v: Vertex| match v {
        Vertex::A => t.a(),
        Vertex::B => t.b(),
        Vertex::C => t.c(),
    };
    let other_end = |s: Side, v: Vertex| match (s, v) {
        (Side::Bc, Vertex::B) => t.c(),
        (Side::Bc, _) => t.b(),
        (Side::Ca, Vertex::C) => t.a(),
        (Side::Ca, _) => t.c(),
        (Side::Ab, Vertex::A) => t.b(),
        (Side::Ab, _) => t.a(),
    };
    let mut set = IntersectionSet::default();
    for (slot, &(side, v)) in set.points.iter_mut().zip(LABELS.iter()) {
        let start = vertex(v);
        let dir = start.sub(other_end(side, v));
        let end = start.add(dir.scale(reach / dir.norm()));
        let f = |s: f64| t.gap(start.lerp(end, s));
        // The ray starts inside the triangle's closure, where g ≥ 0.
        *slot = scan_roots(f, 0.0, 1.0, DEFAULT_SCAN_SAMPLES)
            .first()
            .map(|&s| start.lerp(end, s));
    }
    set
}

fn boundary_all_negative(f: impl Fn(Point) -> f64 + Sync, dom: &Domain, step: f64) -> bool {
    let corners = dom.corners();
    (0..4).all(|k| {
        let (p0, p1) = (corners[k], corners[(k + 1) % 4]);
        let n = (p0.dist(p1) / step).ceil().max(1.0) as usize;
        (0..n).into_par_iter().all(|i| f(p0.lerp(p1, i as f64 / n as f64)) < 0.0)
    })
}

/// True iff g < 0 at every sampled point of the domain boundary.
///
/// A domain that cuts through the triangle is never closed: its boundary
/// then passes through the triangle, where g ≥ 0.
pub fn is_closed(t: &Triangle, dom: &Domain, boundary_step: f64) -> Result<bool> {
    if !(boundary_step > 0.0) {
        return Err(Error::InvalidParameter(format!("boundary step {boundary_step} must be positive")));
    }
    if !dom.contains_triangle(t) {
        return Ok(false);
    }
    Ok(boundary_all_negative(|p| t.gap(p), dom, boundary_step))
}

pub fn is_closed_default(t: &Triangle, dom: &Domain) -> Result<bool> {
    is_closed(t, dom, dom.width() / DEFAULT_BOUNDARY_SAMPLES)
}

/// One traced polyline of the zero set.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub label: String,
    pub points: Vec<Point>,
    /// Closed loops do not repeat their first point.
    pub closed: bool,
}

impl Branch {
    /// Shoelace area; positive when the loop winds counter-clockwise.
    pub fn signed_area(&self) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|i| self.points[i].cross(self.points[(i + 1) % n]))
            .sum::<f64>()
            * 0.5
    }

    /// Consecutive vertex pairs, including the closing edge for loops.
    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.points.len();
        let count = if self.closed { n } else { n.saturating_sub(1) };
        (0..count).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }
}

/// Marching-squares extraction of the zero set of g on `dom` with square-ish
/// cells of size `cell`. Loops wind with {g ≥ 0} on their left.
pub fn trace(t: &Triangle, dom: &Domain, cell: f64) -> Result<Vec<Branch>> {
    trace_zero_set(|x, y| t.gap_xy(x, y), dom, cell)
}

/// [`trace`] for an arbitrary field.
pub fn trace_zero_set(
    f: impl Fn(f64, f64) -> f64 + Sync,
    dom: &Domain,
    cell: f64,
) -> Result<Vec<Branch>> {
    if !(cell > 0.0) {
        return Err(Error::InvalidParameter(format!("cell size {cell} must be positive")));
    }
    let nx = (dom.width() / cell).ceil().max(1.0) as usize;
    let ny = (dom.height() / cell).ceil().max(1.0) as usize;
    let hx = dom.width() / nx as f64;
    let hy = dom.height() / ny as f64;
    let stride = nx + 1;
    let gx = |i: usize| dom.x_min + i as f64 * hx;
    let gy = |j: usize| dom.y_min + j as f64 * hy;

    let mut values = vec![0.0; stride * (ny + 1)];
    values.par_chunks_mut(stride).enumerate().for_each(|(j, row)| {
        let y = gy(j);
        for (i, v) in row.iter_mut().enumerate() {
            *v = f(gx(i), y);
        }
    });
    let val = |i: usize, j: usize| values[j * stride + i];

    // Edge ids: 2·node for the horizontal edge to the right of a node,
    // 2·node + 1 for the vertical edge above it.
    let h_edge = |i: usize, j: usize| 2 * (j * stride + i);
    let v_edge = |i: usize, j: usize| 2 * (j * stride + i) + 1;

    let mut next: BTreeMap<usize, usize> = BTreeMap::new();
    for j in 0..ny {
        for i in 0..nx {
            let corners = [val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)];
            let ins = corners.map(inside);
            if ins.iter().all(|&b| b) || ins.iter().all(|&b| !b) {
                continue;
            }
            // Counter-clockwise edges: bottom, right, top, left.
            let edges = [h_edge(i, j), v_edge(i + 1, j), h_edge(i, j + 1), v_edge(i, j)];
            let leaving: Vec<usize> = (0..4).filter(|&k| ins[k] && !ins[(k + 1) % 4]).collect();
            let entering: Vec<usize> = (0..4).filter(|&k| !ins[k] && ins[(k + 1) % 4]).collect();
            if leaving.len() == 1 {
                next.insert(edges[leaving[0]], edges[entering[0]]);
            } else {
                let centre = f(gx(i) + 0.5 * hx, gy(j) + 0.5 * hy);
                for &k in &leaving {
                    let target = if inside(centre) { (k + 1) % 4 } else { (k + 3) % 4 };
                    next.insert(edges[k], edges[target]);
                }
            }
        }
    }

    let mut cache: HashMap<usize, Point> = HashMap::new();
    let mut edge_point = |e: usize| -> Point {
        *cache.entry(e).or_insert_with(|| {
            let node = e / 2;
            let (i, j) = (node % stride, node / stride);
            let p0 = Point::new(gx(i), gy(j));
            let p1 = if e.is_multiple_of(2) { Point::new(gx(i + 1), p0.y) } else { Point::new(p0.x, gy(j + 1)) };
            let s = bisect(|s| {
                let p = p0.lerp(p1, s);
                f(p.x, p.y)
            }, 0.0, 1.0)
            .unwrap_or(0.5);
            p0.lerp(p1, s)
        })
    };

    let targets: std::collections::HashSet<usize> = next.values().copied().collect();
    let mut visited: std::collections::HashSet<usize> = std::collections::HashSet::new();
    let mut branches = Vec::new();
    let starts: Vec<usize> = next
        .keys()
        .copied()
        .filter(|e| !targets.contains(e))
        .chain(next.keys().copied())
        .collect();
    for start in starts {
        if visited.contains(&start) {
            continue;
        }
        let mut pts = Vec::new();
        let mut e = start;
        let mut closed = false;
        loop {
            visited.insert(e);
            pts.push(edge_point(e));
            match next.get(&e) {
                Some(&n) if n == start => {
                    closed = true;
                    break;
                }
                Some(&n) if !visited.contains(&n) => e = n,
                Some(&n) => {
                    pts.push(edge_point(n));
                    break;
                }
                None => break,
            }
        }
        branches.push(Branch { label: format!("branch-{}", branches.len()), points: pts, closed });
    }
    Ok(branches)
}

/// The root y of g(x, ·) inside `bracket`, i.e. one branch y = f(x) of the
/// curve. An endpoint already on the curve (|g| ≤ 1e−12 × perimeter) is
/// returned as is.
pub fn branch_function(t: &Triangle, bracket: (f64, f64), x: f64) -> Result<f64> {
    let (lo, hi) = bracket;
    let tol = 1e-12 * t.perimeter();
    let g = |y: f64| t.gap_xy(x, y);
    for y in [lo, hi] {
        if g(y).abs() <= tol {
            return Ok(y);
        }
    }
    bisect(g, lo, hi)
}
