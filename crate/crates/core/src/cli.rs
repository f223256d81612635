//! The `minktrig` command line.

use std::f64::consts::{PI, TAU};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::birkhoff::birkhoff_b;
use crate::calculus::{calculus_rows, rho_with, ArcKind, ArcParam};
use crate::context::{build_context, table_size_from_env, PlaneContext};
use crate::distortion::{
    gamma_from_point, gamma_pair, mixed_configuration, mixed_gamma_closed_form, parallel_chords, tangent_points,
    EXTERIOR_TOL,
};
use crate::error::{Error, Result};
use crate::norm::NormSpec;
use crate::output::{csv, json_num, json_vec, num, round_json, Svg};
use crate::trig::{ca, cm, cn, gateaux, sn};
use crate::vec2::Vec2;
use crate::verify::{check_rng, random_exterior, run_suite, Suite, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => EXIT_CONFIG,
        Error::Domain(_) | Error::Numerical(_) | Error::Unsupported(_) => EXIT_DOMAIN,
        Error::Io(_) => EXIT_IO,
    }
}

#[derive(Parser, Debug)]
#[command(name = "minktrig", version, about = "Trigonometry of smooth Minkowski planes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one function at the given arguments.
    Eval {
        #[arg(long)]
        norm: String,
        /// cm, sn, cn, ca, gamma, b, antinorm, norm or gateaux
        #[arg(long = "fn")]
        function: String,
        /// Comma separated coordinates: x1,x2[,y1,y2]
        #[arg(long, allow_hyphen_values = true)]
        args: String,
    },
    /// Run a verification suite and print the reports as JSON.
    Verify {
        #[arg(long)]
        norm: String,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Draw a figure as SVG, with a sidecar CSV of its coordinates.
    Plot {
        #[arg(long)]
        norm: String,
        /// circle, cm-construction, gamma-construction or parallel-chords
        #[arg(long)]
        figure: String,
        #[arg(long)]
        out: PathBuf,
        /// First direction (cm-construction, parallel-chords)
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        /// Second direction (cm-construction, parallel-chords)
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        /// Exterior point (gamma-construction)
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Write a table as CSV.
    Table {
        #[arg(long, default_value = "builtin:euclidean")]
        norm: String,
        /// rho, cm-row, gamma-sweep or arc-params
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "4,8,16,32,64")]
        p_list: String,
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
    /// Tangent lengths and distortion at exterior points, as CSV.
    Gamma {
        #[arg(long)]
        norm: String,
        /// Semicolon separated points "x,y;x,y"; random points when absent
        #[arg(long, allow_hyphen_values = true)]
        points: Option<String>,
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Arc-length calculus along the unit circle, as CSV.
    Calculus {
        #[arg(long)]
        norm: String,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `--norm`: a `builtin:` shorthand or a path to a JSON spec.
pub fn load_spec(arg: &str) -> Result<NormSpec> {
    if arg.starts_with("builtin:") {
        return NormSpec::parse_builtin(arg);
    }
    let text = std::fs::read_to_string(arg)?;
    let spec = NormSpec::from_json(&text)?;
    spec.validate()?;
    Ok(spec)
}

/// Builds the context for a spec. Every kind except plain `lp` gets the
/// Radon normalization.
pub fn load_context(arg: &str) -> Result<PlaneContext> {
    let spec = load_spec(arg)?;
    let normalize = spec.normalized_by_default();
    build_context(spec, table_size_from_env()?, normalize)
}

fn parse_numbers(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("'{t}' is not a number")))
        })
        .collect()
}

fn parse_vec(s: &str) -> Result<Vec2> {
    match parse_numbers(s)?[..] {
        [x, y] => Ok(Vec2::new(x, y)),
        _ => Err(Error::Config(format!("expected two coordinates, got '{s}'"))),
    }
}

/// Writes to stdout; a closed pipe is not an error worth reporting.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(Error::from),
        None => {
            emit(text);
            Ok(())
        }
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("minktrig: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Eval { norm, function, args } => {
            let ctx = load_context(&norm)?;
            let v = eval(&ctx, &function, &parse_numbers(&args)?)?;
            emit(&format!("{}\n", json!({"fn": function, "value": v})));
            Ok(EXIT_OK)
        }
        Command::Verify { norm, suite, samples, seed } => {
            let suite: Suite = suite.parse()?;
            let ctx = load_context(&norm)?;
            let reports = run_suite(&ctx, suite, VerifyOptions { samples, seed });
            let value = serde_json::to_value(&reports).map_err(|e| Error::Numerical(e.to_string()))?;
            emit(&format!("{}\n", serde_json::to_string_pretty(&round_json(value)).expect("json")));
            Ok(if reports.iter().all(|r| r.pass) { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Plot { norm, figure, out, x, y, point } => {
            let ctx = load_context(&norm)?;
            let x = x.as_deref().map(parse_vec).transpose()?;
            let y = y.as_deref().map(parse_vec).transpose()?;
            let point = point.as_deref().map(parse_vec).transpose()?;
            let (svg, sidecar) = plot(&ctx, &figure, x, y, point)?;
            std::fs::write(&out, svg)?;
            std::fs::write(out.with_extension("csv"), sidecar)?;
            Ok(EXIT_OK)
        }
        Command::Table { norm, function, out, p_list, grid } => {
            let text = if function == "gamma-sweep" {
                gamma_sweep(&parse_numbers(&p_list)?)?
            } else {
                table(&load_context(&norm)?, &function, grid)?
            };
            write_out(out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Gamma { norm, points, samples, seed } => {
            let ctx = load_context(&norm)?;
            let pts = match points {
                Some(s) => s.split(';').map(parse_vec).collect::<Result<Vec<_>>>()?,
                None => {
                    let mut rng = check_rng(seed, "gamma");
                    (0..samples).map(|_| random_exterior(&ctx, &mut rng)).collect()
                }
            };
            let mut rows = Vec::new();
            for p in pts {
                let t = tangent_points(&ctx, p, EXTERIOR_TOL)?;
                rows.push(vec![p.x, p.y, t.len1, t.len2, t.len1 / t.len2]);
            }
            emit(&csv(&["p_x", "p_y", "len1", "len2", "gamma"], &rows));
            Ok(EXIT_OK)
        }
        Command::Calculus { norm, grid, out } => {
            let ctx = load_context(&norm)?;
            let rows: Vec<Vec<f64>> = calculus_rows(&ctx, grid)?
                .iter()
                .map(|r| vec![r.s, r.theta, r.rho, r.sn, r.cm, r.sn_residual.max(r.cm_residual)])
                .collect();
            write_out(out.as_deref(), &csv(&["s", "theta", "rho", "sn", "cm", "residual"], &rows))?;
            Ok(EXIT_OK)
        }
    }
}

/// Evaluates `function` on flat coordinates.
pub fn eval(ctx: &PlaneContext, function: &str, a: &[f64]) -> Result<serde_json::Value> {
    let one = || match a {
        [x1, x2] => Ok(Vec2::try_new(*x1, *x2)?),
        _ => Err(Error::Config(format!("{function} takes 2 coordinates"))),
    };
    let two = || match a {
        [x1, x2, y1, y2] => Ok((Vec2::try_new(*x1, *x2)?, Vec2::try_new(*y1, *y2)?)),
        _ => Err(Error::Config(format!("{function} takes 4 coordinates"))),
    };
    Ok(match function {
        "cm" => two().and_then(|(x, y)| cm(ctx, x, y)).map(json_num)?,
        "sn" => two().and_then(|(x, y)| sn(ctx, x, y)).map(json_num)?,
        "cn" => two().and_then(|(x, y)| cn(ctx, x, y)).map(json_num)?,
        "ca" => two().and_then(|(x, y)| ca(ctx, x, y)).map(json_num)?,
        "gateaux" => two().and_then(|(x, y)| gateaux(ctx, x, y)).map(json_num)?,
        "gamma" if a.len() == 4 => two().and_then(|(x, y)| gamma_pair(ctx, x, y)).map(json_num)?,
        "gamma" => one().and_then(|p| gamma_from_point(ctx, p)).map(json_num)?,
        "b" => one().and_then(|x| birkhoff_b(ctx, x)).map(json_vec)?,
        "antinorm" => one().and_then(|x| ctx.antinorm(x)).map(json_num)?,
        "norm" => one().and_then(|x| ctx.norm(x)).map(json_num)?,
        _ => return Err(Error::Config(format!("unknown function '{function}'"))),
    })
}

fn sidecar(rows: &[(&str, Vec2)]) -> String {
    let mut s = String::from("label,x,y\n");
    for (l, p) in rows {
        let _ = writeln!(s, "{l},{},{}", num(p.x), num(p.y));
    }
    s
}

fn circle_points(ctx: &PlaneContext) -> Vec<Vec2> {
    ctx.circle_table().iter().map(|c| c.point).collect()
}

/// Renders a figure; returns the SVG and its coordinate sidecar.
pub fn plot(
    ctx: &PlaneContext,
    figure: &str,
    x: Option<Vec2>,
    y: Option<Vec2>,
    point: Option<Vec2>,
) -> Result<(String, String)> {
    let circle = circle_points(ctx);
    let reach = circle.iter().map(|p| p.x.abs().max(p.y.abs())).fold(0.0, f64::max);
    match figure {
        "circle" => {
            let anti = circle
                .iter()
                .map(|&p| Ok(p / ctx.antinorm(p)?))
                .collect::<Result<Vec<_>>>()?;
            let half = 1.2 * anti.iter().map(|p| p.x.abs().max(p.y.abs())).fold(reach, f64::max);
            let mut svg = Svg::new(half);
            svg.polyline(&circle, true, "black", false);
            svg.polyline(&anti, true, "steelblue", true);
            svg.point(Vec2::ZERO, "o");
            let mut rows: Vec<(&str, Vec2)> = circle.iter().map(|&p| ("circle", p)).collect();
            rows.extend(anti.iter().map(|&p| ("anticircle", p)));
            Ok((svg.finish(), sidecar(&rows)))
        }
        "cm-construction" => {
            let x = ctx.unit(x.unwrap_or(Vec2::new(1.0, 0.0)))?;
            let y = ctx.unit(y.unwrap_or(Vec2::from_angle(PI / 3.0)))?;
            let b = birkhoff_b(ctx, x)?;
            let q = x * cm(ctx, x, y)?;
            let mut svg = Svg::new(1.4 * reach);
            svg.polyline(&circle, true, "black", false);
            svg.full_line(Vec2::ZERO, x, "gray");
            svg.full_line(x, x + b, "gray");
            svg.full_line(y, y + b, "firebrick");
            svg.line(Vec2::ZERO, q, "firebrick");
            for (p, l) in [(Vec2::ZERO, "o"), (x, "x"), (y, "y"), (q, "q")] {
                svg.point(p, l);
            }
            Ok((svg.finish(), sidecar(&[("o", Vec2::ZERO), ("x", x), ("y", y), ("b", b), ("q", q)])))
        }
        "gamma-construction" => {
            let p = match (point, ctx.spec()) {
                (Some(p), _) => p,
                (None, NormSpec::MixedLpLq { p }) => mixed_configuration(*p).apex,
                (None, _) => Vec2::new(1.5, 1.0),
            };
            let t = tangent_points(ctx, p, EXTERIOR_TOL)?;
            let half = 1.2 * reach.max(p.x.abs()).max(p.y.abs());
            let mut svg = Svg::new(half);
            svg.polyline(&circle, true, "black", false);
            svg.line(p, t.q1, "firebrick");
            svg.line(p, t.q2, "steelblue");
            for (v, l) in [(Vec2::ZERO, "o"), (p, "p"), (t.q1, "q1"), (t.q2, "q2")] {
                svg.point(v, l);
            }
            let g = Vec2::new(t.len1 / t.len2, 0.0);
            let rows = [
                ("p", p),
                ("q1", t.q1),
                ("q2", t.q2),
                ("lengths", Vec2::new(t.len1, t.len2)),
                ("gamma", g),
            ];
            Ok((svg.finish(), sidecar(&rows)))
        }
        "parallel-chords" => {
            let t1 = x.unwrap_or(Vec2::from_angle(0.3));
            let t2 = y.unwrap_or(Vec2::from_angle(1.9));
            let c = parallel_chords(ctx, t1, t2)?;
            let half = 1.3 * [c.p, c.c1, c.c2].iter().map(|v| v.x.abs().max(v.y.abs())).fold(reach, f64::max);
            let mut svg = Svg::new(half);
            svg.polyline(&circle, true, "black", false);
            svg.line(c.p, c.q1, "gray");
            svg.line(c.p, c.q2, "gray");
            svg.full_line(Vec2::ZERO, c.p, "gray");
            svg.line(c.q1, c.q2, "firebrick");
            svg.line(c.c1, c.c2, "firebrick");
            for (v, l) in [(Vec2::ZERO, "o"), (c.p, "p"), (c.q1, "q1"), (c.q2, "q2"), (c.c1, "c1"), (c.c2, "c2")] {
                svg.point(v, l);
            }
            let rows = [
                ("p", c.p),
                ("q1", c.q1),
                ("q2", c.q2),
                ("b", c.b),
                ("c1", c.c1),
                ("c2", c.c2),
                ("defect", Vec2::new(c.defect, c.collinearity)),
            ];
            Ok((svg.finish(), sidecar(&rows)))
        }
        _ => Err(Error::Config(format!("unknown figure '{figure}'"))),
    }
}

/// CSV tables over one plane.
pub fn table(ctx: &PlaneContext, function: &str, grid: usize) -> Result<String> {
    if grid == 0 {
        return Err(Error::Config("grid must be positive".into()));
    }
    match function {
        "rho" => {
            let arc = ArcParam::new(ctx, ArcKind::NormLength)?;
            let mut rows = Vec::with_capacity(grid);
            for k in 0..grid {
                let s = arc.total * k as f64 / grid as f64;
                rows.push(vec![s, rho_with(ctx, &arc, s)?]);
            }
            Ok(csv(&["s", "rho"], &rows))
        }
        "cm-row" => {
            let x0 = ctx.circle_point(0.0);
            let mut rows = Vec::with_capacity(grid);
            for k in 0..grid {
                let theta = TAU * k as f64 / grid as f64;
                let y = ctx.circle_point(theta);
                rows.push(vec![theta, cm(ctx, x0, y)?, cm(ctx, y, x0)?, sn(ctx, x0, y)?]);
            }
            Ok(csv(&["theta", "cm_x0_y", "cm_y_x0", "sn_x0_y"], &rows))
        }
        "arc-params" => {
            let t = ctx.circle_table();
            let step = (t.len() / grid).max(1);
            let rows: Vec<Vec<f64>> = t
                .iter()
                .step_by(step)
                .map(|c| vec![c.theta, c.s_norm, c.s_anti, c.sector_area2])
                .collect();
            Ok(csv(&["theta", "s_norm", "s_anti", "sector_area2"], &rows))
        }
        _ => Err(Error::Config(format!("unknown table '{function}'"))),
    }
}

/// Tangent-length ratio at the mixed-norm apex configuration for each `p`.
pub fn gamma_sweep(ps: &[f64]) -> Result<String> {
    let mut rows = Vec::new();
    for &p in ps {
        let spec = NormSpec::MixedLpLq { p };
        spec.validate()?;
        let ctx = build_context(spec, table_size_from_env()?, true)?;
        let c = mixed_configuration(p);
        let t = tangent_points(&ctx, c.apex, EXTERIOR_TOL)?;
        rows.push(vec![p, t.len1 / t.len2, mixed_gamma_closed_form(p).abs()]);
    }
    Ok(csv(&["p", "gamma", "closed_form_magnitude"], &rows))
}
