//! Command-line front end: evaluate metrics, approximate distances, run
//! verification suites, reformat reports.
//!
//! Exit codes: 0 success / all checks passed, 1 verification failure,
//! 2 usage or input error.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use finsler_core::geometry::{point, Domain, Point};
use finsler_core::intrinsic::{GraphConfig, QuadratureRule, QuadratureSpec};
use finsler_core::metrics::MetricEvaluator;
use finsler_core::quasidist::{d_c, QuasiDistanceParams};

use crate::config::ExperimentConfig;
use crate::report::VerificationReport;
use crate::suites;

#[derive(Parser)]
#[command(
    name = "finsler",
    about = "Finsler metrics on convex domains: evaluation, intrinsic distances, verification suites",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a metric F(x, v) at a point and vector
    Eval {
        /// JSON domain descriptor file
        #[arg(long)]
        domain: PathBuf,
        /// Metric selection: bk | funk | kh | qk:<k> | hs-min |
        /// tmpl:<lower|upper>:<omega0>:<alpha>:<c1>:<C1>
        #[arg(long)]
        metric: String,
        /// Base point, comma-separated coordinates
        #[arg(long)]
        point: String,
        /// Tangent vector, comma-separated coordinates
        #[arg(long)]
        vector: String,
    },
    /// Approximate the intrinsic distance between two points
    Distance {
        #[arg(long)]
        domain: PathBuf,
        /// Metric selection as in `eval`, plus dc:<c> for the boundary
        /// quasi-distance (computed from frames, no graph)
        #[arg(long)]
        metric: String,
        /// Start point, comma-separated
        #[arg(long)]
        from: String,
        /// End point, comma-separated
        #[arg(long)]
        to: String,
        /// Sampled graph nodes
        #[arg(long, default_value_t = 4000)]
        nodes: usize,
        /// Neighbors per inserted node
        #[arg(long, default_value_t = 16)]
        degree: usize,
        /// Quadrature: gauss5[:subdivisions] or midpoint[:subdivisions]
        #[arg(long, default_value = "gauss5:32")]
        quad: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a verification suite (or `all`) and optionally write the report
    Verify {
        /// Suite name or `all`
        suite: String,
        #[arg(long)]
        domain: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Base sample count override
        #[arg(long)]
        samples: Option<usize>,
        /// Boundary collar depth override
        #[arg(long)]
        collar: Option<f64>,
        /// Write the JSON report here (single object, or array for `all`)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reformat a report file
    Report {
        /// Report JSON produced by `verify` (object or array)
        #[arg(long, name = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Csv,
    Json,
}

/// Run the CLI against explicit arguments; returns the process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message (including --help/--version)
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Eval {
            domain,
            metric,
            point: base,
            vector,
        } => {
            let domain = load_domain(&domain)?;
            let x = parse_point(&base)?;
            let v = parse_point(&vector)?;
            let evaluator =
                MetricEvaluator::parse(&metric, domain).map_err(|e| e.to_string())?;
            let value = evaluator.evaluate(&x, &v).map_err(|e| e.to_string())?;
            println!("{}", format_value(value));
            Ok(0)
        }
        Command::Distance {
            domain,
            metric,
            from,
            to,
            nodes,
            degree,
            quad,
            seed,
        } => {
            let domain = load_domain(&domain)?;
            let x = parse_point(&from)?;
            let y = parse_point(&to)?;
            if let Some(c) = metric.strip_prefix("dc:") {
                let c: f64 = c.parse().map_err(|_| format!("bad dc parameter {c:?}"))?;
                let params = QuasiDistanceParams::new(c).map_err(|e| e.to_string())?;
                let fx = domain.boundary_frame(&x).map_err(|e| e.to_string())?;
                let fy = domain.boundary_frame(&y).map_err(|e| e.to_string())?;
                println!("{}", format_value(d_c(params, &fx, &fy)));
                return Ok(0);
            }
            let evaluator =
                MetricEvaluator::parse(&metric, domain).map_err(|e| e.to_string())?;
            let cfg = GraphConfig {
                node_count: nodes,
                degree,
                quadrature: parse_quadrature(&quad)?,
                seed,
                ..GraphConfig::default()
            };
            let out = finsler_core::intrinsic::graph_distance(&evaluator, &x, &y, &cfg)
                .map_err(|e| e.to_string())?;
            println!("{}", format_value(out.value));
            Ok(0)
        }
        Command::Verify {
            suite,
            domain,
            seed,
            samples,
            collar,
            out,
        } => {
            let mut cfg = ExperimentConfig::seeded(seed);
            if let Some(path) = domain {
                cfg = cfg.with_domain(load_domain(&path)?);
            }
            if let Some(n) = samples {
                cfg = cfg.with_samples(n);
            }
            if let Some(c) = collar {
                cfg = cfg.with_collar(c);
            }
            let reports: Vec<VerificationReport> = if suite == "all" {
                suites::run_all(&cfg).map_err(|e| e.to_string())?
            } else {
                vec![suites::run_suite(&suite, &cfg).map_err(|e| e.to_string())?]
            };
            for r in &reports {
                for c in &r.checks {
                    println!(
                        "[{}] {}::{} maxViolation={:.3e}",
                        if c.passed() { "PASS" } else { "FAIL" },
                        r.suite,
                        c.name,
                        c.max_violation
                    );
                }
            }
            let all_pass = reports.iter().all(|r| r.pass);
            if let Some(path) = out {
                let text = if reports.len() == 1 {
                    reports[0].to_json()
                } else {
                    let mut s =
                        serde_json::to_string_pretty(&reports).map_err(|e| e.to_string())?;
                    s.push('\n');
                    s
                };
                fs::write(&path, text).map_err(|e| format!("writing {path:?}: {e}"))?;
            }
            Ok(if all_pass { 0 } else { 1 })
        }
        Command::Report { input, format } => {
            let text =
                fs::read_to_string(&input).map_err(|e| format!("reading {input:?}: {e}"))?;
            let reports: Vec<VerificationReport> = if text.trim_start().starts_with('[') {
                serde_json::from_str(&text).map_err(|e| e.to_string())?
            } else {
                vec![serde_json::from_str(&text).map_err(|e| e.to_string())?]
            };
            match format {
                ReportFormat::Json => {
                    let rendered = if reports.len() == 1 {
                        reports[0].to_json()
                    } else {
                        serde_json::to_string_pretty(&reports).map_err(|e| e.to_string())? + "\n"
                    };
                    print!("{rendered}");
                }
                ReportFormat::Csv => {
                    let stdout = std::io::stdout();
                    for r in &reports {
                        r.to_csv(stdout.lock()).map_err(|e| e.to_string())?;
                    }
                }
            }
            Ok(0)
        }
    }
}

fn load_domain(path: &PathBuf) -> Result<Domain, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("reading {path:?}: {e}"))?;
    serde_json::from_str(&text).map_err(|e| format!("parsing {path:?}: {e}"))
}

fn parse_point(text: &str) -> Result<Point, String> {
    let coords: Vec<f64> = text
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("bad coordinate list {text:?}"))?;
    if coords.is_empty() {
        return Err("empty coordinate list".into());
    }
    Ok(point(&coords))
}

fn parse_quadrature(text: &str) -> Result<QuadratureSpec, String> {
    let (rule, subdivisions) = match text.split_once(':') {
        Some((r, n)) => (
            r,
            n.parse::<usize>()
                .map_err(|_| format!("bad subdivision count in {text:?}"))?,
        ),
        None => (text, 32),
    };
    let rule = match rule {
        "gauss5" => QuadratureRule::Gauss5,
        "midpoint" => QuadratureRule::Midpoint,
        other => return Err(format!("unknown quadrature rule {other:?}")),
    };
    QuadratureSpec::new(rule, subdivisions).map_err(|e| e.to_string())
}

fn format_value(v: f64) -> String {
    if v.is_infinite() {
        "unbounded".to_string()
    } else {
        format!("{v:.6}")
    }
}
