//! Stateless HTTP API: `GET /api/curve` traces one triangle's curve and
//! `GET /api/field` serves a precomputed sweep field.
//!
//! Every response body is JSON. Computations run on the blocking pool under
//! a deadline; a request that misses it gets 503 with a `Retry-After` hint.

use std::collections::HashMap;
use std::path::{Component, Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use axum::extract::{Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use emcurve_core::area::{epsilon_scanline, EPSILON_0};
use emcurve_core::tracing::{is_closed_default, side_line_intersections, trace};
use emcurve_core::{load_field, Domain, Error, Point, Triangle};
use serde_json::{json, Value};
use tower_http::cors::CorsLayer;

use crate::json;

/// ε tolerance used by `/api/curve`.
pub const CURVE_EPSILON_TOL: f64 = 1e-4;
/// Cell count along the domain width when `cell` is not given.
pub const DEFAULT_CELLS_ACROSS: f64 = 1000.0;
/// Upper bound on marching-squares cells per request.
pub const MAX_CELLS: f64 = 16.0e6;
/// Colour presets offered to heatmap clients.
pub const EPS_MAX_PRESETS: [f64; 4] = [0.825, 1.0, 2.0, 18.0];

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// Served when `/api/field` has no `path` parameter.
    pub default_field: Option<PathBuf>,
    /// Relative `path` parameters resolve against this directory.
    pub data_dir: PathBuf,
    pub timeout: Duration,
    pub retry_after: Duration,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            default_field: None,
            data_dir: PathBuf::from("."),
            timeout: Duration::from_secs(30),
            retry_after: Duration::from_secs(5),
        }
    }
}

impl ServiceConfig {
    pub fn with_field(field: impl Into<PathBuf>) -> Self {
        let field = field.into();
        let data_dir = field.parent().filter(|p| !p.as_os_str().is_empty()).map_or(".".into(), Path::to_path_buf);
        ServiceConfig { default_field: Some(field), data_dir, ..ServiceConfig::default() }
    }
}

pub fn router(config: ServiceConfig) -> Router {
    Router::new()
        .route("/api/curve", get(curve))
        .route("/api/field", get(field))
        .route("/api/health", get(|| async { json_response(StatusCode::OK, json!({ "status": "ok" })) }))
        .layer(CorsLayer::permissive())
        .with_state(Arc::new(config))
}

pub async fn serve(addr: std::net::SocketAddr, config: ServiceConfig) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(config))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

fn json_response(status: StatusCode, body: Value) -> Response {
    let mut resp = (status, body.to_string()).into_response();
    resp.headers_mut().insert(header::CONTENT_TYPE, HeaderValue::from_static("application/json"));
    resp
}

fn error(status: StatusCode, msg: impl Into<String>) -> Response {
    json_response(status, json!({ "error": msg.into() }))
}

fn timed_out(config: &ServiceConfig) -> Response {
    let secs = config.retry_after.as_secs().max(1);
    let mut resp = json_response(
        StatusCode::SERVICE_UNAVAILABLE,
        json!({ "error": "computation exceeded the time limit", "retry_after_seconds": secs }),
    );
    resp.headers_mut().insert(header::RETRY_AFTER, HeaderValue::from(secs));
    resp
}

/// Runs `f` on the blocking pool, answering 503 if it misses the deadline.
async fn run_limited(config: &ServiceConfig, f: impl FnOnce() -> Response + Send + 'static) -> Response {
    match tokio::time::timeout(config.timeout, tokio::task::spawn_blocking(f)).await {
        Ok(Ok(resp)) => resp,
        Ok(Err(e)) => error(StatusCode::INTERNAL_SERVER_ERROR, format!("worker failed: {e}")),
        Err(_) => timed_out(config),
    }
}

#[derive(Debug)]
struct CurveRequest {
    triangle: Triangle,
    domain: Domain,
    cell: f64,
}

fn parse_curve_request(q: &HashMap<String, String>) -> Result<CurveRequest, String> {
    let coord = |k: &str| -> Result<f64, String> {
        let s = q.get(k).ok_or_else(|| format!("missing parameter {k}"))?;
        let v: f64 = s.trim().parse().map_err(|_| format!("parameter {k}={s:?} is not a number"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("parameter {k} must be finite"))
        }
    };
    let a = Point::new(coord("ax")?, coord("ay")?);
    let b = Point::new(coord("bx")?, coord("by")?);
    let c = Point::new(coord("cx")?, coord("cy")?);
    let triangle = Triangle::new(a, b, c).map_err(|e| e.to_string())?;
    let domain = match q.get("domain") {
        Some(s) => s.parse::<Domain>().map_err(|e| e.to_string())?,
        None => crate::frame_domain(),
    };
    let cell = match q.get("cell") {
        Some(s) => s.trim().parse::<f64>().map_err(|_| format!("parameter cell={s:?} is not a number"))?,
        None => domain.width() / DEFAULT_CELLS_ACROSS,
    };
    if !(cell > 0.0 && cell.is_finite()) {
        return Err(format!("cell {cell} must be positive"));
    }
    if (domain.width() / cell) * (domain.height() / cell) > MAX_CELLS {
        return Err(format!("cell {cell} is too small for the domain (more than {MAX_CELLS} cells)"));
    }
    Ok(CurveRequest { triangle, domain, cell })
}

fn curve_response(req: CurveRequest) -> Response {
    let CurveRequest { triangle: t, domain, cell } = req;
    let branches = match trace(&t, &domain, cell) {
        Ok(b) => b,
        Err(e) => return error(StatusCode::BAD_REQUEST, e.to_string()),
    };
    let closed = is_closed_default(&t, &domain).unwrap_or(false);
    let mut body = json!({
        "triangle": t.vertices().iter().map(|&p| json::point(p)).collect::<Vec<_>>(),
        "domain": [json::num(domain.x_min), json::num(domain.x_max), json::num(domain.y_min), json::num(domain.y_max)],
        "cell": json::num(cell),
        "closed": closed,
        "branches": json::branches(&branches),
        "intersections": json::intersections(&side_line_intersections(&t)),
    });
    if !closed {
        return json_response(StatusCode::UNPROCESSABLE_ENTITY, body);
    }
    match epsilon_scanline(&t, &domain, CURVE_EPSILON_TOL) {
        Ok(r) => {
            body["epsilon"] = r.epsilon.map_or(Value::Null, json::num);
            body["epsilon_method"] = json!("scanline");
            body["epsilon_tol"] = json::num(CURVE_EPSILON_TOL);
            json_response(StatusCode::OK, body)
        }
        Err(Error::OpenCurve) => json_response(StatusCode::UNPROCESSABLE_ENTITY, body),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    }
}

async fn curve(State(config): State<Arc<ServiceConfig>>, Query(q): Query<HashMap<String, String>>) -> Response {
    let req = match parse_curve_request(&q) {
        Ok(r) => r,
        Err(msg) => return error(StatusCode::BAD_REQUEST, msg),
    };
    run_limited(&config, move || curve_response(req)).await
}

/// Relative paths without `..` only, resolved under `data_dir`.
fn resolve_field_path(config: &ServiceConfig, requested: &str) -> Result<PathBuf, String> {
    let p = Path::new(requested);
    let safe = p.components().all(|c| matches!(c, Component::Normal(_) | Component::CurDir));
    if !safe || requested.is_empty() {
        return Err(format!("path {requested:?} must be relative and stay inside the data directory"));
    }
    Ok(config.data_dir.join(p))
}

async fn field(State(config): State<Arc<ServiceConfig>>, Query(q): Query<HashMap<String, String>>) -> Response {
    let path = match q.get("path") {
        Some(p) => match resolve_field_path(&config, p) {
            Ok(path) => path,
            Err(msg) => return error(StatusCode::BAD_REQUEST, msg),
        },
        None => match &config.default_field {
            Some(p) => p.clone(),
            None => return error(StatusCode::NOT_FOUND, "no default field configured"),
        },
    };
    if !path.is_file() {
        return error(StatusCode::NOT_FOUND, format!("field {} not found", path.display()));
    }
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    run_limited(&config.clone(), move || match load_field(&path) {
        Ok(f) => {
            let mut body = json::field(&f);
            body["name"] = json!(name);
            body["color_map"] = json!({
                "eps_min": json::num(EPSILON_0),
                "hue_start_degrees": 240,
                "hue_end_degrees": 0,
                "band_rule": "floor((epsilon - eps_min) / (eps_max - eps_min) * bands), clamped to bands - 1; below eps_min is background",
                "eps_max_presets": EPS_MAX_PRESETS.iter().map(|&v| json::num(v)).collect::<Vec<_>>(),
            });
            json_response(StatusCode::OK, body)
        }
        Err(e @ Error::Parse { .. }) => error(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    })
    .await
}
