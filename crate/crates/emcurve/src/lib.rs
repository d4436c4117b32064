//! The `emcurve` command-line tool and its HTTP service.

pub mod cli;
pub mod json;
pub mod service;

use emcurve_core::{Domain, Error, Point, Result, Triangle};

/// Parses exactly `N` comma-separated reals.
pub fn parse_reals<const N: usize>(s: &str, what: &str) -> Result<[f64; N]> {
    let vals: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidParameter(format!("{what} {s:?}: {e}")))?;
    let n = vals.len();
    let arr: [f64; N] = vals
        .try_into()
        .map_err(|_| Error::InvalidParameter(format!("{what} {s:?}: expected {N} values, got {n}")))?;
    if arr.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("coordinate"));
    }
    Ok(arr)
}

/// `ax,ay,bx,by,cx,cy`.
pub fn parse_triangle(s: &str) -> Result<Triangle> {
    Triangle::from_coords(parse_reals::<6>(s, "triangle")?)
}

/// `x,y`.
pub fn parse_point(s: &str) -> Result<Point> {
    let [x, y] = parse_reals::<2>(s, "point")?;
    Ok(Point::new(x, y))
}

/// Square around the triangle large enough for its curve in all but very
/// obtuse shapes.
pub fn default_domain(t: &Triangle) -> Domain {
    Domain::around(t, 8.0)
}

/// The fixed frame used by sweeps and the service: [−1000, 1000]².
pub fn frame_domain() -> Domain {
    Domain::new(-1000.0, 1000.0, -1000.0, 1000.0).expect("static domain")
}
