use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use emcurve_core::algebraic::{build_octic, octic_scale, sign_case_at, SignCase};
use emcurve_core::area::{epsilon0_equilateral, epsilon_pixel, epsilon_scanline, PixelGridSpec, EPSILON_0};
use emcurve_core::render::{render_curve, render_field, ColorMapSpec};
use emcurve_core::sweep::{fmt_17, GridAxis, SweepConfig, SweepMethod};
use emcurve_core::tracing::trace;
use emcurve_core::{load_field, save_field, sweep, verify_conjecture, Domain, Triangle};

use crate::service::{serve, ServiceConfig};
use crate::{default_domain, parse_point, parse_triangle};

#[derive(Debug, Parser)]
#[command(name = "emcurve", version, about = "Erdős–Mordell curves: tracing, area excess ε and parameter sweeps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Method {
    Pixel,
    Scanline,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the octic polynomial of one sign case, in the canonical frame.
    Octic {
        /// ax,ay,bx,by,cx,cy
        #[arg(long, allow_hyphen_values = true)]
        triangle: String,
        /// Signs for the three side distances, e.g. +,-,+
        #[arg(long, default_value = "+,+,+", allow_hyphen_values = true)]
        case: String,
        /// Evaluate at this point (original coordinates): x,y
        #[arg(long, allow_hyphen_values = true)]
        eval: Option<String>,
    },
    /// Trace the curve and write its branches as CSV rows branch_id,x,y.
    Trace {
        #[arg(long, allow_hyphen_values = true)]
        triangle: String,
        /// x0,x1,y0,y1
        #[arg(long, allow_hyphen_values = true)]
        domain: Option<String>,
        /// Marching-squares cell size (default: domain width / 800)
        #[arg(long)]
        cell: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Area excess ε of the curve over the triangle.
    Epsilon {
        #[arg(long, allow_hyphen_values = true)]
        triangle: String,
        #[arg(long, value_enum, default_value_t = Method::Scanline)]
        method: Method,
        #[arg(long, allow_hyphen_values = true)]
        domain: Option<String>,
        /// Pixel pitch (pixel method; default: domain width / 2000)
        #[arg(long, conflicts_with = "tol")]
        step: Option<f64>,
        /// Error bound on ε (scanline method)
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// ε of the equilateral triangle.
    Epsilon0 {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Sweep vertex A over a grid with B(−100,0), C(100,0) and write the ε field.
    Sweep {
        /// start:stop:step
        #[arg(long, default_value = "-600:600:50", allow_hyphen_values = true)]
        u: String,
        #[arg(long, default_value = "-600:600:50", allow_hyphen_values = true)]
        v: String,
        #[arg(long, default_value_t = 2.0)]
        pixel_step: f64,
        #[arg(long, value_enum, default_value_t = Method::Pixel)]
        method: Method,
        /// Error bound on ε for the scanline method
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        /// Worker threads (default: $EMCURVE_THREADS, then all cores)
        #[arg(long)]
        threads: Option<usize>,
        /// Every integer vertex position with unit pixels; overrides --u, --v and --pixel-step
        #[arg(long)]
        full: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check ε ≥ ε₀ − slack over a field; exit status 0 iff there are no violations.
    Verify {
        #[arg(long)]
        field: PathBuf,
        #[arg(long, default_value_t = EPSILON_0)]
        epsilon0: f64,
        #[arg(long, default_value_t = 0.01)]
        slack: f64,
    },
    /// Render a field as a PPM heatmap.
    RenderField {
        #[arg(long)]
        field: PathBuf,
        #[arg(long, default_value_t = EPSILON_0)]
        eps_min: f64,
        #[arg(long)]
        eps_max: f64,
        #[arg(long, default_value_t = 64)]
        bands: usize,
        /// Pixels per grid cell
        #[arg(long, default_value_t = 8)]
        cell_px: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a triangle's curve as a PPM image.
    RenderCurve {
        #[arg(long, allow_hyphen_values = true)]
        triangle: String,
        #[arg(long, allow_hyphen_values = true)]
        domain: Option<String>,
        #[arg(long, default_value_t = 800)]
        size: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Default field for /api/field
        #[arg(long)]
        field: Option<PathBuf>,
        /// Per-request computation limit in seconds
        #[arg(long, default_value_t = 30)]
        timeout_secs: u64,
    },
}

fn domain_for(t: &Triangle, arg: &Option<String>) -> Result<Domain> {
    Ok(match arg {
        Some(s) => s.parse()?,
        None => default_domain(t),
    })
}

pub fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

pub fn run(cli: Cli) -> Result<ExitCode> {
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Octic { triangle, case, eval } => {
            let t = parse_triangle(&triangle)?;
            let case: SignCase = case.parse()?;
            let pl = t.canonicalize();
            let p = build_octic(&pl, case);
            writeln!(out, "placement p={} q={} r={}", fmt_17(pl.p), fmt_17(pl.q), fmt_17(pl.r))?;
            writeln!(out, "case {case}")?;
            writeln!(out, "degree {}", p.total_degree().map_or("-".into(), |d| d.to_string()))?;
            writeln!(out, "max_abs_coeff {}", fmt_17(p.max_abs_coeff()))?;
            writeln!(out, "i,j,coefficient")?;
            for ((i, j), c) in p.coefficients() {
                writeln!(out, "{i},{j},{}", fmt_17(c))?;
            }
            if let Some(e) = eval {
                let m = pl.to_canonical(parse_point(&e)?);
                let v = p.eval(m);
                let scale = octic_scale(&p, m);
                writeln!(out, "canonical_point {},{}", fmt_17(m.x), fmt_17(m.y))?;
                writeln!(out, "value {}", fmt_17(v))?;
                writeln!(out, "relative {}", fmt_17(v.abs() / scale))?;
                writeln!(out, "sign_case_at_point {}", sign_case_at(&pl, m).case)?;
            }
        }
        Command::Trace { triangle, domain, cell, out: path } => {
            let t = parse_triangle(&triangle)?;
            let dom = domain_for(&t, &domain)?;
            let cell = cell.unwrap_or(dom.width() / 800.0);
            let branches = trace(&t, &dom, cell)?;
            let mut w = csv_writer(&path)?;
            writeln!(w, "branch_id,x,y")?;
            for (k, b) in branches.iter().enumerate() {
                for p in &b.points {
                    writeln!(w, "{k},{},{}", fmt_17(p.x), fmt_17(p.y))?;
                }
            }
            w.flush()?;
            for (k, b) in branches.iter().enumerate() {
                let kind = if b.closed { "closed" } else { "open" };
                writeln!(out, "branch {k}: {} points, {kind}", b.points.len())?;
            }
        }
        Command::Epsilon { triangle, method, domain, step, tol } => {
            let t = parse_triangle(&triangle)?;
            let dom = domain_for(&t, &domain)?;
            let result = match method {
                Method::Pixel => {
                    let step = step.unwrap_or(dom.width() / 2000.0);
                    epsilon_pixel(&t, &PixelGridSpec::new(dom, step)?)?
                }
                Method::Scanline => match epsilon_scanline(&t, &dom, tol) {
                    Err(emcurve_core::Error::OpenCurve) => {
                        writeln!(out, "closed false")?;
                        return Ok(ExitCode::from(1));
                    }
                    r => r?,
                },
            };
            writeln!(out, "method {}", result.method)?;
            writeln!(out, "closed {}", result.closed)?;
            writeln!(out, "area_triangle {}", fmt_17(result.area_triangle))?;
            match result.epsilon {
                Some(e) => {
                    writeln!(out, "area_curve {}", fmt_17(result.area_curve))?;
                    writeln!(out, "epsilon {e:.10}")?;
                }
                None => return Ok(ExitCode::from(1)),
            }
        }
        Command::Epsilon0 { tol } => {
            writeln!(out, "{:.10}", epsilon0_equilateral(tol)?)?;
        }
        Command::Sweep { u, v, pixel_step, method, tol, threads, full, out: path } => {
            let mut cfg = if full {
                SweepConfig::full()
            } else {
                SweepConfig {
                    u: u.parse::<GridAxis>()?,
                    v: v.parse::<GridAxis>()?,
                    method: SweepMethod::Pixel { step: pixel_step },
                    ..SweepConfig::desk()
                }
            };
            if let Method::Scanline = method {
                cfg.method = SweepMethod::Scanline { tol };
            }
            cfg.threads = threads;
            let start = Instant::now();
            let field = sweep(&cfg)?;
            let elapsed = start.elapsed();
            save_field(&field, &path).with_context(|| format!("writing {}", path.display()))?;
            let closed = field.records.iter().filter(|r| r.closed).count();
            writeln!(out, "cells {} closed {closed} seconds {:.3}", field.len(), elapsed.as_secs_f64())?;
        }
        Command::Verify { field, epsilon0, slack } => {
            let f = load_field(&field).with_context(|| format!("reading {}", field.display()))?;
            let rep = verify_conjecture(&f, epsilon0, slack)?;
            writeln!(out, "cells {} closed {}", rep.cells_tested, rep.cells_closed)?;
            if let Some((e, u, v)) = rep.min_epsilon {
                writeln!(out, "min_epsilon {e:.10} at u={u} v={v}")?;
            }
            writeln!(out, "threshold {:.10}", epsilon0 - slack)?;
            for r in &rep.violations {
                writeln!(out, "violation u={} v={} epsilon={:.10}", r.u, r.v, r.epsilon.unwrap_or(f64::NAN))?;
            }
            writeln!(out, "violations {}", rep.violations.len())?;
            if !rep.verified() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::RenderField { field, eps_min, eps_max, bands, cell_px, out: path } => {
            let f = load_field(&field).with_context(|| format!("reading {}", field.display()))?;
            let spec = ColorMapSpec::with_range(eps_min, eps_max, bands)?;
            let img = render_field(&f, &spec, cell_px)?;
            img.save_ppm(&path)?;
            writeln!(out, "wrote {}x{} {}", img.width(), img.height(), path.display())?;
        }
        Command::RenderCurve { triangle, domain, size, out: path } => {
            let t = parse_triangle(&triangle)?;
            let dom = domain_for(&t, &domain)?;
            let img = render_curve(&t, &dom, size)?;
            img.save_ppm(&path)?;
            writeln!(out, "wrote {}x{} {}", img.width(), img.height(), path.display())?;
        }
        Command::Serve { port, host, field, timeout_secs } => {
            if timeout_secs == 0 {
                bail!("--timeout-secs must be positive");
            }
            let mut config = match field {
                Some(f) => ServiceConfig::with_field(f),
                None => ServiceConfig::default(),
            };
            config.timeout = Duration::from_secs(timeout_secs);
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(serve((host, port).into(), config))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn csv_writer(path: &PathBuf) -> Result<std::io::BufWriter<std::fs::File>> {
    let f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(std::io::BufWriter::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn negative_coordinates_parse() {
        let cli = Cli::try_parse_from([
            "emcurve", "octic", "--triangle", "0,1.7,-1,0,1,0", "--case", "-,+,+", "--eval", "-2,-1",
        ])
        .unwrap();
        assert!(matches!(cli.command, Command::Octic { .. }));
        let cli = Cli::try_parse_from(["emcurve", "sweep", "--u", "-600:600:50", "--out", "f.csv"]).unwrap();
        assert!(matches!(cli.command, Command::Sweep { .. }));
    }

    #[test]
    fn step_and_tol_conflict() {
        let r = Cli::try_parse_from([
            "emcurve", "epsilon", "--triangle", "0,1,-1,0,1,0", "--step", "0.1", "--tol", "1e-3",
        ]);
        assert!(r.is_err());
    }
}
