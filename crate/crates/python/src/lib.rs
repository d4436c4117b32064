//! Python module `emcurve`: triangles, the gap function, curve tracing,
//! octic polynomials, ε computations and sweep fields.

use std::collections::BTreeMap;

use emcurve_core::algebraic::{build_octic, octic_scale, SignCase};
use emcurve_core::area::{epsilon0_equilateral, epsilon_pixel, epsilon_scanline, PixelGridSpec, EPSILON_0};
use emcurve_core::sweep::{GridAxis, SweepConfig, SweepMethod};
use emcurve_core::tracing::{is_closed_default, side_line_intersections, trace, Domain};
use emcurve_core::{load_field, save_field, sweep, verify_conjecture, EpsilonField, Point, SweepRecord};
use pyo3::create_exception;
use pyo3::exceptions::{PyValueError, PyOSError};
use pyo3::prelude::*;

create_exception!(emcurve, OpenCurveError, PyValueError, "The curve is not closed inside the domain.");

fn to_py(e: emcurve_core::Error) -> PyErr {
    use emcurve_core::Error as E;
    match e {
        E::OpenCurve => OpenCurveError::new_err(e.to_string()),
        E::Io(_) => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

type DomainTuple = (f64, f64, f64, f64);

fn domain_of(t: &emcurve_core::Triangle, d: Option<DomainTuple>) -> PyResult<Domain> {
    match d {
        Some((x0, x1, y0, y1)) => Domain::new(x0, x1, y0, y1).map_err(to_py),
        None => Ok(Domain::around(t, 8.0)),
    }
}

/// A non-degenerate triangle ABC.
#[pyclass(frozen, module = "emcurve")]
pub struct Triangle {
    inner: emcurve_core::Triangle,
}

#[pymethods]
impl Triangle {
    #[new]
    fn new(ax: f64, ay: f64, bx: f64, by: f64, cx: f64, cy: f64) -> PyResult<Self> {
        let inner = emcurve_core::Triangle::from_coords([ax, ay, bx, by, cx, cy]).map_err(to_py)?;
        Ok(Triangle { inner })
    }

    /// The triangle A(0, √3), B(−1, 0), C(1, 0).
    #[staticmethod]
    fn equilateral() -> Self {
        Triangle { inner: emcurve_core::Triangle::unit_equilateral() }
    }

    fn vertices(&self) -> [(f64, f64); 3] {
        self.inner.vertices().map(|p| (p.x, p.y))
    }

    fn area(&self) -> f64 {
        self.inner.area()
    }

    fn perimeter(&self) -> f64 {
        self.inner.perimeter()
    }

    /// g(x, y) = R_A + R_B + R_C − 2(r_a + r_b + r_c).
    fn gap(&self, x: f64, y: f64) -> f64 {
        self.inner.gap_xy(x, y)
    }

    fn distances(&self, x: f64, y: f64) -> BTreeMap<&'static str, f64> {
        let d = self.inner.distances(Point::new(x, y));
        BTreeMap::from([
            ("R_A", d.to_a),
            ("R_B", d.to_b),
            ("R_C", d.to_c),
            ("r_a", d.to_bc),
            ("r_b", d.to_ca),
            ("r_c", d.to_ab),
        ])
    }

    fn corner_membership(&self, x: f64, y: f64) -> BTreeMap<&'static str, bool> {
        let m = self.inner.corner_membership(Point::new(x, y));
        BTreeMap::from([("E_A", m.in_ea), ("E_B", m.in_eb), ("E_C", m.in_ec), ("E", m.in_e)])
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        self.inner.contains(Point::new(x, y))
    }

    /// (p, q, r) of the congruent placement A(0, r), B(p, 0), C(q, 0).
    fn canonical(&self) -> (f64, f64, f64) {
        let pl = self.inner.canonicalize();
        (pl.p, pl.q, pl.r)
    }

    /// Curve crossings with the side lines as (label, x, y).
    fn intersections(&self) -> Vec<(String, f64, f64)> {
        side_line_intersections(&self.inner).labelled().map(|(l, p)| (l, p.x, p.y)).collect()
    }

    #[pyo3(signature = (domain=None))]
    fn is_closed(&self, domain: Option<DomainTuple>) -> PyResult<bool> {
        let dom = domain_of(&self.inner, domain)?;
        is_closed_default(&self.inner, &dom).map_err(to_py)
    }

    /// Traced branches, each with `label`, `closed` and `points`.
    #[pyo3(signature = (cell, domain=None))]
    fn trace(&self, py: Python<'_>, cell: f64, domain: Option<DomainTuple>) -> PyResult<Vec<Branch>> {
        let dom = domain_of(&self.inner, domain)?;
        let t = self.inner;
        let branches = py.detach(move || trace(&t, &dom, cell)).map_err(to_py)?;
        Ok(branches
            .into_iter()
            .map(|b| Branch { label: b.label, closed: b.closed, points: b.points.iter().map(|p| (p.x, p.y)).collect() })
            .collect())
    }

    /// ε by scanline integration; raises `OpenCurveError` for open curves.
    #[pyo3(signature = (tol=1e-6, domain=None))]
    fn epsilon(&self, py: Python<'_>, tol: f64, domain: Option<DomainTuple>) -> PyResult<f64> {
        let dom = domain_of(&self.inner, domain)?;
        let t = self.inner;
        let r = py.detach(move || epsilon_scanline(&t, &dom, tol)).map_err(to_py)?;
        r.epsilon.ok_or_else(|| OpenCurveError::new_err("curve is open"))
    }

    /// ε by pixel counting; `None` when the curve is open.
    #[pyo3(signature = (step, domain=None))]
    fn epsilon_pixel(&self, py: Python<'_>, step: f64, domain: Option<DomainTuple>) -> PyResult<Option<f64>> {
        let dom = domain_of(&self.inner, domain)?;
        let grid = PixelGridSpec::new(dom, step).map_err(to_py)?;
        let t = self.inner;
        Ok(py.detach(move || epsilon_pixel(&t, &grid)).map_err(to_py)?.epsilon)
    }

    /// Coefficients {(i, j): c} of x^i y^j for a sign case like "+,-,+",
    /// in the canonical frame.
    #[pyo3(signature = (case="+,+,+"))]
    fn octic(&self, case: &str) -> PyResult<BTreeMap<(usize, usize), f64>> {
        let case: SignCase = case.parse().map_err(to_py)?;
        let p = build_octic(&self.inner.canonicalize(), case);
        Ok(p.coefficients().filter(|(_, c)| *c != 0.0).collect())
    }

    /// (value, relative) of the octic at (x, y) given in original coordinates.
    #[pyo3(signature = (x, y, case="+,+,+"))]
    fn octic_eval(&self, x: f64, y: f64, case: &str) -> PyResult<(f64, f64)> {
        let case: SignCase = case.parse().map_err(to_py)?;
        let pl = self.inner.canonicalize();
        let p = build_octic(&pl, case);
        let m = pl.to_canonical(Point::new(x, y));
        let v = p.eval(m);
        Ok((v, v.abs() / octic_scale(&p, m)))
    }

    fn __repr__(&self) -> String {
        let [a, b, c] = self.inner.vertices();
        format!("Triangle(({}, {}), ({}, {}), ({}, {}))", a.x, a.y, b.x, b.y, c.x, c.y)
    }
}

#[pyclass(frozen, get_all, module = "emcurve")]
pub struct Branch {
    label: String,
    closed: bool,
    points: Vec<(f64, f64)>,
}

#[pymethods]
impl Branch {
    fn __len__(&self) -> usize {
        self.points.len()
    }
}

/// ε of the equilateral triangle to within `tol`.
#[pyfunction]
#[pyo3(signature = (tol=1e-6))]
fn epsilon0(py: Python<'_>, tol: f64) -> PyResult<f64> {
    py.detach(move || epsilon0_equilateral(tol)).map_err(to_py)
}

type Row = (f64, f64, bool, Option<f64>);

fn rows(f: &EpsilonField) -> Vec<Row> {
    f.records.iter().map(|r| (r.u, r.v, r.closed, r.epsilon)).collect()
}

/// Sweeps A over the u, v grids ("start:stop:step") with B(−100, 0), C(100, 0).
/// Returns rows (u, v, closed, epsilon) and optionally writes them as CSV.
#[pyfunction]
#[pyo3(signature = (u="-600:600:50", v="-600:600:50", pixel_step=2.0, threads=None, out=None))]
fn sweep_field(
    py: Python<'_>,
    u: &str,
    v: &str,
    pixel_step: f64,
    threads: Option<usize>,
    out: Option<std::path::PathBuf>,
) -> PyResult<Vec<Row>> {
    let cfg = SweepConfig {
        u: u.parse::<GridAxis>().map_err(to_py)?,
        v: v.parse::<GridAxis>().map_err(to_py)?,
        method: SweepMethod::Pixel { step: pixel_step },
        threads,
        ..SweepConfig::desk()
    };
    let field = py.detach(move || sweep(&cfg)).map_err(to_py)?;
    if let Some(path) = out {
        save_field(&field, path).map_err(to_py)?;
    }
    Ok(rows(&field))
}

#[pyfunction]
fn read_field(path: std::path::PathBuf) -> PyResult<Vec<Row>> {
    load_field(path).map(|f| rows(&f)).map_err(to_py)
}

/// Closed rows with ε < epsilon0 − slack.
#[pyfunction]
#[pyo3(signature = (rows, epsilon0=EPSILON_0, slack=0.01))]
fn violations(rows: Vec<Row>, epsilon0: f64, slack: f64) -> PyResult<Vec<Row>> {
    let field = EpsilonField {
        records: rows.into_iter().map(|(u, v, closed, epsilon)| SweepRecord { u, v, closed, epsilon }).collect(),
    };
    let rep = verify_conjecture(&field, epsilon0, slack).map_err(to_py)?;
    Ok(rep.violations.iter().map(|r| (r.u, r.v, r.closed, r.epsilon)).collect())
}

#[pymodule]
fn emcurve(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("EPSILON_0", EPSILON_0)?;
    m.add("OpenCurveError", m.py().get_type::<OpenCurveError>())?;
    m.add_class::<Triangle>()?;
    m.add_class::<Branch>()?;
    m.add_function(wrap_pyfunction!(epsilon0, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_field, m)?)?;
    m.add_function(wrap_pyfunction!(read_field, m)?)?;
    m.add_function(wrap_pyfunction!(violations, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_methods_without_the_interpreter() {
        let t = Triangle::equilateral();
        assert!(t.gap(0.0, 3f64.sqrt() / 3.0).abs() < 1e-12);
        assert_eq!(t.intersections().len(), 6);
        assert_eq!(t.octic("+,+,+").unwrap().keys().map(|(i, j)| i + j).max(), Some(8));
        assert!(Triangle::new(0.0, 3.0, 0.0, 0.0, 0.0, 5.0).is_err());
        assert!(domain_of(&t.inner, Some((1.0, 0.0, 0.0, 1.0))).is_err());
    }
}
