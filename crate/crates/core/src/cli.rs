//! Command-line front end.
//!
//! Exit codes: 0 success or check passed, 1 check failed (or I/O failure),
//! 2 usage error, 3 the inputs do not satisfy the hypotheses of the check.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::OrbitSpec;
use crate::asymptotic::{
    discrepancy_estimate, gauss17_check, h_image_heuristic, lambda_set, minkowski_decomposition_check,
    sample_torus, verify_containment, verify_hypocycloid, weyl_sum, LaurentMap,
};
use crate::cyclotomic::cyclotomic_poly;
use crate::render::{rasterize, scatter_torus, write_image, RenderConfig};
use crate::supercharacter::{image, verify_multiplicativity, verify_symmetry};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;

pub const THREADS_ENV: &str = "PERIODVIZ_THREADS";

/// Pointwise identities.
pub const POINTWISE_TOLERANCE: f64 = 1e-9;
/// Set comparisons (grid-rounded values).
pub const SET_TOLERANCE: f64 = 1e-6;

const REPORT_HELP: &str = "\
JSON output (--format json) is a single object.
verify reports: {check, params, pass, max_defect, tolerance, elapsed_s, details}
periods: {modulus, omega, order, layer_mod, points: [{y, layer, re, im}], distinct: [[re, im]]}
cyclotomic: {d, degree, coefficients}
weyl: {q, d, root, v, computed: [re, im], predicted: [re, im], defect}
discrepancy: {d, grid, rows: [{q, root, points, estimate}], strictly_decreasing}

Integers accept '_' as a digit separator (e.g. 357_193).
Exit codes: 0 ok/pass, 1 check failed, 2 usage error, 3 hypothesis not met.";

#[derive(Parser, Debug)]
#[command(name = "periodviz", version, about = "Gaussian periods: images, rendering and structural checks", after_help = REPORT_HELP)]
struct Cli {
    /// Worker threads (falls back to PERIODVIZ_THREADS, then all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Period values sigma(y), one row per superclass representative
    Periods(PeriodsArgs),
    /// Coefficients of Phi_d, lowest degree first
    Cyclotomic {
        #[arg(long, value_parser = parse_u64)]
        d: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Rasterize a period image to PNG or PPM
    Render(RenderArgs),
    /// Scatter plot of Lambda_q on the unit square
    RenderTorus {
        #[arg(long, value_parser = parse_u64)]
        q: u64,
        #[arg(long, value_parser = parse_u64)]
        d: u64,
        #[arg(long, default_value_t = 512)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        point_radius: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample g_d at seeded random torus points (CSV re,im)
    Gd {
        #[arg(long, value_parser = parse_u64)]
        d: u64,
        #[arg(long, value_parser = parse_usize)]
        samples: usize,
        #[arg(long, value_parser = parse_u64)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exponential sum over Lambda_q against its 0-or-q prediction
    Weyl {
        #[arg(long, value_parser = parse_u64)]
        q: u64,
        #[arg(long, value_parser = parse_u64)]
        d: u64,
        /// comma-separated frequency vector
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Grid discrepancy estimates of Lambda_q for several q
    Discrepancy {
        #[arg(long, value_parser = parse_u64)]
        d: u64,
        #[arg(long)]
        q_list: String,
        #[arg(long, default_value_t = 20)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Structural checks
    Verify {
        #[command(subcommand)]
        check: Check,
    },
}

#[derive(Args, Debug)]
struct PeriodsArgs {
    #[arg(long, value_parser = parse_u64)]
    modulus: u64,
    #[arg(long, value_parser = parse_i64, allow_hyphen_values = true)]
    omega: i64,
    #[arg(long, value_parser = parse_u64, default_value_t = 1)]
    layer_mod: u64,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
    /// one row per residue instead of per superclass
    #[arg(long)]
    all_residues: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[arg(long, value_parser = parse_u64)]
    modulus: u64,
    #[arg(long, value_parser = parse_i64, allow_hyphen_values = true)]
    omega: i64,
    #[arg(long, value_parser = parse_u64, default_value_t = 1)]
    layer_mod: u64,
    #[arg(long, default_value_t = 512)]
    size: usize,
    #[arg(long)]
    viewport: Option<f64>,
    #[arg(long, default_value_t = 1)]
    point_radius: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Check {
    /// 16 cos(2 pi/17) against its radical expression
    Gauss17 {
        #[command(flatten)]
        common: Common,
    },
    /// k-fold dihedral symmetry with k = gcd(n, omega - 1)
    Symmetry {
        #[arg(long, value_parser = parse_u64)]
        modulus: u64,
        #[arg(long, value_parser = parse_i64, allow_hyphen_values = true)]
        omega: i64,
        #[command(flatten)]
        common: Common,
    },
    /// sigma(y) = g_d(torus point) for every superclass (q an odd prime power)
    Containment {
        #[arg(long, value_parser = parse_u64)]
        modulus: u64,
        #[arg(long, value_parser = parse_i64, allow_hyphen_values = true)]
        omega: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Period values inside the hypocycloid H_d (d prime)
    Hypocycloid {
        #[arg(long, value_parser = parse_u64)]
        modulus: u64,
        #[arg(long, value_parser = parse_i64, allow_hyphen_values = true)]
        omega: i64,
        #[arg(long, value_parser = parse_usize, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, value_parser = parse_u64, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// g_{r^b} as a sum of r^{b-1} copies of g_r
    Minkowski {
        #[arg(long, value_parser = parse_u64)]
        r: u64,
        #[arg(long, value_parser = parse_u32)]
        b: u32,
        #[arg(long, value_parser = parse_usize)]
        samples: usize,
        #[arg(long, value_parser = parse_u64)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Image mod mn equals the product of the images mod m and mod n
    Multiplicativity {
        #[arg(long, value_parser = parse_u64)]
        m: u64,
        #[arg(long, value_parser = parse_u64)]
        n: u64,
        #[arg(long, value_parser = parse_i64, allow_hyphen_values = true)]
        omega: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Sampled near-containment between the images of h_rs and g_rs (heuristic)
    HImage {
        #[arg(long, value_parser = parse_u64)]
        r: u64,
        #[arg(long, value_parser = parse_u64)]
        s: u64,
        #[arg(long, value_parser = parse_usize, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, value_parser = parse_u64, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

fn digits(s: &str) -> String {
    s.chars().filter(|&c| c != '_').collect()
}

fn parse_u64(s: &str) -> std::result::Result<u64, String> {
    digits(s).parse().map_err(|e| format!("{s:?}: {e}"))
}

fn parse_u32(s: &str) -> std::result::Result<u32, String> {
    digits(s).parse().map_err(|e| format!("{s:?}: {e}"))
}

fn parse_usize(s: &str) -> std::result::Result<usize, String> {
    digits(s).parse().map_err(|e| format!("{s:?}: {e}"))
}

fn parse_i64(s: &str) -> std::result::Result<i64, String> {
    digits(s).parse().map_err(|e| format!("{s:?}: {e}"))
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|x| {
            digits(x.trim())
                .parse()
                .map_err(|e| Error::InvalidArgument(format!("{x:?}: {e}")))
        })
        .collect()
}

/// Outcome of a `verify` subcommand.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub check: String,
    pub params: Value,
    pub pass: bool,
    pub max_defect: f64,
    pub tolerance: f64,
    pub elapsed_s: f64,
    pub details: Value,
}

impl VerifyReport {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string(self).expect("report serializes") + "\n",
            Format::Text => {
                let mut s = String::new();
                let _ = writeln!(s, "check: {}", self.check);
                let _ = writeln!(s, "params: {}", self.params);
                let _ = writeln!(s, "result: {}", if self.pass { "PASS" } else { "FAIL" });
                let _ = writeln!(s, "max_defect: {:e}", self.max_defect);
                let _ = writeln!(s, "tolerance: {:e}", self.tolerance);
                if let Value::Object(map) = &self.details {
                    for (k, v) in map {
                        let _ = writeln!(s, "{k}: {v}");
                    }
                }
                let _ = writeln!(s, "elapsed_s: {:.3}", self.elapsed_s);
                s
            }
        }
    }
}

/// Plain 17-significant-digit float formatting; `-0` prints as `0`.
fn sci(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

struct Output {
    stdout: Vec<u8>,
    code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self {
            stdout: stdout.into_bytes(),
            code: EXIT_OK,
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::HypothesisViolated(_) | Error::OrdersNotCoprime { .. } | Error::NoSuchRoot { .. } => EXIT_HYPOTHESIS,
        Error::Io(_) | Error::Png(_) => EXIT_FAILED,
        _ => EXIT_USAGE,
    }
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>> {
    if let Some(k) = flag {
        return Ok(Some(k));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidArgument(format!("{THREADS_ENV}={v:?} is not a thread count"))),
        _ => Ok(None),
    }
}

/// Runs the CLI against process stdout/stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            } else {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            };
        }
    };

    let result = thread_count(cli.threads).and_then(|threads| match threads {
        Some(0) => Err(Error::InvalidArgument("thread count must be positive".into())),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(|| dispatch(cli.command)),
        None => dispatch(cli.command),
    });

    match result {
        Ok(o) => {
            let _ = out.write_all(&o.stdout);
            let _ = out.flush();
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command) -> Result<Output> {
    match cmd {
        Command::Periods(a) => periods(a),
        Command::Cyclotomic { d, format } => {
            let p = cyclotomic_poly(d)?;
            let s = match format {
                Format::Text => {
                    let parts: Vec<String> = p.coeffs().iter().map(i64::to_string).collect();
                    parts.join(",") + "\n"
                }
                Format::Json => {
                    json!({"d": d, "degree": p.degree(), "coefficients": p.coeffs()}).to_string() + "\n"
                }
            };
            Ok(Output::ok(s))
        }
        Command::Render(a) => {
            let spec = OrbitSpec::new(a.modulus, a.omega)?;
            let img = image(&spec, a.layer_mod)?;
            let cfg = RenderConfig {
                size_px: a.size,
                viewport_radius: a.viewport,
                point_radius_px: a.point_radius,
                ..Default::default()
            };
            let raster = rasterize(&img, &cfg)?;
            write_image(&raster, &a.out)?;
            Ok(Output::ok(format!(
                "wrote {} ({}x{}, {} superclasses, {} distinct values)\n",
                a.out.display(),
                raster.width(),
                raster.height(),
                img.points.len(),
                img.distinct.len()
            )))
        }
        Command::RenderTorus {
            q,
            d,
            size,
            point_radius,
            out,
        } => {
            let set = lambda_set(q, d)?;
            let cfg = RenderConfig {
                size_px: size,
                point_radius_px: point_radius,
                ..Default::default()
            };
            let raster = scatter_torus(&set, &cfg)?;
            write_image(&raster, &out)?;
            Ok(Output::ok(format!(
                "wrote {} ({}x{}, {} points, root {})\n",
                out.display(),
                raster.width(),
                raster.height(),
                set.points.len(),
                set.root
            )))
        }
        Command::Gd { d, samples, seed, out } => {
            let g = LaurentMap::new(d)?;
            let mut csv = String::from("re,im\n");
            for z in sample_torus(g.dim(), samples, seed) {
                let v = g.eval_raw(z.coords());
                let _ = writeln!(csv, "{},{}", sci(v.re), sci(v.im));
            }
            match out {
                Some(path) => {
                    std::fs::write(&path, csv)?;
                    Ok(Output::ok(format!(
                        "wrote {} ({samples} samples of g_{d}, seed {seed})\n",
                        path.display()
                    )))
                }
                None => Ok(Output::ok(csv)),
            }
        }
        Command::Weyl { q, d, v, format } => {
            let v: Vec<i64> = parse_list(&v)?;
            let set = lambda_set(q, d)?;
            let w = weyl_sum(&set, &v)?;
            let defect = (w.computed - w.predicted).norm();
            let s = match format {
                Format::Json => json!({
                    "q": q, "d": d, "root": set.root, "v": v,
                    "computed": [w.computed.re, w.computed.im],
                    "predicted": [w.predicted.re, w.predicted.im],
                    "defect": defect,
                })
                .to_string()
                    + "\n",
                Format::Text => format!(
                    "q: {q}\nd: {d}\nroot: {}\nv: {v:?}\ncomputed: {} {:+}i\npredicted: {}\ndefect: {defect:e}\n",
                    set.root, w.computed.re, w.computed.im, w.predicted.re
                ),
            };
            Ok(Output::ok(s))
        }
        Command::Discrepancy { d, q_list, grid, format } => {
            let qs: Vec<u64> = parse_list(&q_list)?;
            let mut rows = Vec::new();
            for &q in &qs {
                let set = lambda_set(q, d)?;
                let est = discrepancy_estimate(&set.points, grid)?;
                rows.push(json!({"q": q, "root": set.root, "points": set.points.len(), "estimate": est}));
            }
            let ests: Vec<f64> = rows.iter().map(|r| r["estimate"].as_f64().unwrap()).collect();
            let decreasing = ests.windows(2).all(|w| w[1] < w[0]);
            let s = match format {
                Format::Json => {
                    json!({"d": d, "grid": grid, "rows": rows, "strictly_decreasing": decreasing}).to_string() + "\n"
                }
                Format::Text => {
                    let mut s = String::from("q,root,points,estimate\n");
                    for r in &rows {
                        let _ = writeln!(s, "{},{},{},{}", r["q"], r["root"], r["points"], r["estimate"]);
                    }
                    let _ = writeln!(s, "strictly_decreasing: {decreasing}");
                    s
                }
            };
            Ok(Output::ok(s))
        }
        Command::Verify { check } => verify(check),
    }
}

fn periods(a: PeriodsArgs) -> Result<Output> {
    let spec = OrbitSpec::new(a.modulus, a.omega)?;
    let img = image(&spec, a.layer_mod)?;
    let rows: Vec<(u64, u64, num_complex::Complex64)> = if a.all_residues {
        img.residues()
    } else {
        img.points.iter().map(|p| (p.y, p.layer, p.value)).collect()
    };
    let body = match a.format {
        TableFormat::Csv => {
            let mut s = String::from("y,layer,re,im\n");
            for (y, layer, v) in &rows {
                let _ = writeln!(s, "{y},{layer},{},{}", sci(v.re), sci(v.im));
            }
            s
        }
        TableFormat::Json => {
            let points: Vec<Value> = rows
                .iter()
                .map(|(y, layer, v)| json!({"y": y, "layer": layer, "re": v.re, "im": v.im}))
                .collect();
            let distinct: Vec<[f64; 2]> = img.distinct.iter().map(|z| [z.re, z.im]).collect();
            json!({
                "modulus": spec.modulus(),
                "omega": spec.omega(),
                "order": spec.order(),
                "layer_mod": img.layer_mod,
                "points": points,
                "distinct": distinct,
            })
            .to_string()
                + "\n"
        }
    };
    match a.out {
        Some(path) => {
            std::fs::write(&path, body)?;
            Ok(Output::ok(format!("wrote {} ({} rows)\n", path.display(), rows.len())))
        }
        None => Ok(Output::ok(body)),
    }
}

fn finish(report: VerifyReport, format: Format) -> Output {
    Output {
        code: if report.pass { EXIT_OK } else { EXIT_FAILED },
        stdout: report.render(format).into_bytes(),
    }
}

fn verify(check: Check) -> Result<Output> {
    let start = Instant::now();
    let (report, format) = match check {
        Check::Gauss17 { common } => {
            let tol = common.tolerance.unwrap_or(1e-12);
            let g = gauss17_check();
            let r = VerifyReport {
                check: "gauss17".into(),
                params: json!({}),
                pass: g.defect < tol,
                max_defect: g.defect,
                tolerance: tol,
                elapsed_s: 0.0,
                details: json!({"lhs": g.lhs, "rhs": g.rhs}),
            };
            (r, common.format)
        }
        Check::Symmetry { modulus, omega, common } => {
            let tol = common.tolerance.unwrap_or(SET_TOLERANCE);
            let spec = OrbitSpec::new(modulus, omega)?;
            let img = image(&spec, 1)?;
            let s = verify_symmetry(&img, tol);
            let r = VerifyReport {
                check: "symmetry".into(),
                params: json!({"modulus": modulus, "omega": spec.omega()}),
                pass: s.passed,
                max_defect: s.max_conjugation_defect.max(s.max_rotation_defect),
                tolerance: tol,
                elapsed_s: 0.0,
                details: json!({
                    "k": s.k,
                    "order": spec.order(),
                    "distinct": img.distinct.len(),
                    "max_conjugation_defect": s.max_conjugation_defect,
                    "max_rotation_defect": s.max_rotation_defect,
                }),
            };
            (r, common.format)
        }
        Check::Containment { modulus, omega, common } => {
            let tol = common.tolerance.unwrap_or(POINTWISE_TOLERANCE);
            let c = verify_containment(modulus, omega, tol)?;
            let r = VerifyReport {
                check: "containment".into(),
                params: json!({"modulus": modulus, "omega": c.orbit.omega}),
                pass: c.passed,
                max_defect: c.max_defect,
                tolerance: tol,
                elapsed_s: 0.0,
                details: json!({"p": c.orbit.p, "a": c.orbit.a, "d": c.orbit.d, "superclasses": c.superclasses}),
            };
            (r, common.format)
        }
        Check::Hypocycloid {
            modulus,
            omega,
            samples,
            seed,
            common,
        } => {
            let tol = common.tolerance.unwrap_or(SET_TOLERANCE);
            let h = verify_hypocycloid(modulus, omega, tol, samples, seed)?;
            let r = VerifyReport {
                check: "hypocycloid".into(),
                params: json!({"modulus": modulus, "omega": h.orbit.omega, "samples": samples, "seed": seed}),
                pass: h.passed,
                max_defect: h.max_defect.max(h.diagonal_defect),
                tolerance: tol,
                elapsed_s: 0.0,
                details: json!({
                    "d": h.orbit.d,
                    "boundary_samples": h.boundary_samples,
                    "superclasses": h.superclasses,
                    "outside": h.outside,
                    "diagonal_defect": h.diagonal_defect,
                }),
            };
            (r, common.format)
        }
        Check::Minkowski {
            r,
            b,
            samples,
            seed,
            common,
        } => {
            let tol = common.tolerance.unwrap_or(POINTWISE_TOLERANCE);
            let m = minkowski_decomposition_check(b, r, samples, seed, tol)?;
            let rep = VerifyReport {
                check: "minkowski".into(),
                params: json!({"r": r, "b": b, "samples": samples, "seed": seed}),
                pass: m.passed,
                max_defect: m.max_defect,
                tolerance: tol,
                elapsed_s: 0.0,
                details: json!({"sfs_radius": m.sfs_radius}),
            };
            (rep, common.format)
        }
        Check::Multiplicativity { m, n, omega, common } => {
            let tol = common.tolerance.unwrap_or(SET_TOLERANCE);
            let x = verify_multiplicativity(m, n, omega, tol)?;
            let r = VerifyReport {
                check: "multiplicativity".into(),
                params: json!({"m": m, "n": n, "omega": x.omega}),
                pass: x.passed,
                max_defect: x.max_defect,
                tolerance: tol,
                elapsed_s: 0.0,
                details: json!({
                    "omega_m": x.omega_m,
                    "omega_n": x.omega_n,
                    "order_m": x.order_m,
                    "order_n": x.order_n,
                    "full_count": x.full_count,
                    "product_count": x.product_count,
                }),
            };
            (r, common.format)
        }
        Check::HImage {
            r,
            s,
            samples,
            seed,
            format,
        } => {
            let h = h_image_heuristic(r, s, samples, seed)?;
            let rep = VerifyReport {
                check: "h-image".into(),
                params: json!({"r": r, "s": s, "samples": samples, "seed": seed}),
                pass: h.passed,
                max_defect: h.h_to_g.max(h.g_to_h),
                tolerance: h.tolerance,
                elapsed_s: 0.0,
                details: json!({
                    "heuristic": true,
                    "h_to_g": h.h_to_g,
                    "g_to_h": h.g_to_h,
                    "h_at_ones": h.h_at_ones,
                    "h_printed_at_ones": h.h_printed_at_ones,
                }),
            };
            (rep, format)
        }
    };
    let report = VerifyReport {
        elapsed_s: start.elapsed().as_secs_f64(),
        ..report
    };
    Ok(finish(report, format))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("periodviz").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn underscores_in_numbers() {
        assert_eq!(parse_u64("357_193"), Ok(357193));
        assert_eq!(parse_i64("-1_000"), Ok(-1000));
        assert!(parse_u64("12a").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(call(&["periods", "--modulus", "5"]).0, EXIT_USAGE);
        // not a unit
        assert_eq!(call(&["periods", "--modulus", "10", "--omega", "5"]).0, EXIT_USAGE);
        assert_eq!(call(&["periods", "--modulus", "15", "--omega", "2", "--layer-mod", "4"]).0, EXIT_USAGE);
        assert_eq!(call(&["--threads", "0", "verify", "gauss17"]).0, EXIT_USAGE);
    }

    #[test]
    fn cyclotomic_output() {
        let (code, out, _) = call(&["cyclotomic", "--d", "6"]);
        assert_eq!(code, 0);
        assert_eq!(out, "1,-1,1\n");
        let (_, out, _) = call(&["cyclotomic", "--d", "4", "--format", "json"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["coefficients"], json!([1, 0, 1]));
    }

    #[test]
    fn periods_csv_layout() {
        let (code, out, _) = call(&["periods", "--modulus", "5", "--omega", "4"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "y,layer,re,im");
        assert_eq!(lines[1], "0,0,2.0000000000000000e0,0.0000000000000000e0");
        assert_eq!(lines.len(), 4);
        let (_, out, _) = call(&["periods", "--modulus", "5", "--omega", "4", "--all-residues"]);
        assert_eq!(out.lines().count(), 6);
    }

    #[test]
    fn weyl_negative_frequencies() {
        let (code, out, _) = call(&["weyl", "--q", "7", "--d", "3", "--v", "-2,1", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["predicted"][0], json!(7.0));
        assert!(v["defect"].as_f64().unwrap() < 1e-9);
    }

    #[test]
    fn hypothesis_exit_code() {
        assert_eq!(call(&["verify", "containment", "--modulus", "35", "--omega", "9"]).0, EXIT_HYPOTHESIS);
        assert_eq!(
            call(&["verify", "multiplicativity", "--m", "7", "--n", "9", "--omega", "2"]).0,
            EXIT_HYPOTHESIS
        );
        assert_eq!(call(&["weyl", "--q", "7", "--d", "4", "--v", "1,1"]).0, EXIT_HYPOTHESIS);
    }

    #[test]
    fn failing_check_exits_1() {
        let (code, out, _) = call(&["verify", "gauss17", "--tolerance", "0", "--format", "json"]);
        assert_eq!(code, EXIT_FAILED);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["pass"], json!(false));
    }

    #[test]
    fn json_reports_carry_seed() {
        let (code, out, _) = call(&[
            "verify", "minkowski", "--r", "3", "--b", "2", "--samples", "50", "--seed", "9", "--format", "json",
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["params"]["seed"], json!(9));
        for key in ["check", "params", "pass", "max_defect", "tolerance", "elapsed_s", "details"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
