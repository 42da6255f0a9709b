//! Command line for the spherical drum sum rules: density files in,
//! sum-rule reports and sweep tables out.
//!
//! Exit codes: 0 success, 2 invalid configuration or domain error,
//! 3 density validation failure, 4 non-convergence (or failed verification),
//! 5 overlap matrix not positive definite.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use drumsum::error::{DensityError, RitzError, SpectralError};
use drumsum::greens::{green_closed, GeodesicCosine, GreenOrder};
use drumsum::harmonics::{gaunt, Density, DensitySpec};
use drumsum::oracle::{oracle_i1, oracle_j1};
use drumsum::quad::SphereGrid;
use drumsum::ritz::{numeric_sum_rule, solve_spectrum, SolveOptions, SpectrumApprox};
use drumsum::spectral::{Engine, EngineConfig};
use drumsum::sumrules::{exact_sum_rule, SumRuleReport};

#[derive(Parser)]
#[command(
    name = "drumsum",
    about = "Spectral sum rules for a drum on the unit sphere with variable density",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct EngineArgs {
    /// Convergence tolerance for the trace evaluations
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Starting cutoff of the doubling ladder (default max(64, 8·band))
    #[arg(long)]
    initial_cutoff: Option<u32>,
    /// Hard cap of the doubling ladder
    #[arg(long, default_value_t = 512)]
    max_cutoff: u32,
}

impl EngineArgs {
    fn engine(&self) -> Engine<f64> {
        Engine::new(EngineConfig {
            tolerance: self.tol,
            initial_cutoff: self.initial_cutoff,
            max_cutoff: self.max_cutoff,
            ..EngineConfig::default()
        })
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact sum rules for a density file
    Exact {
        /// Density coefficient file (JSON)
        #[arg(long)]
        density: PathBuf,
        /// Orders, comma separated (2 and 3 are supported)
        #[arg(long, default_value = "2,3", value_delimiter = ',')]
        order: Vec<u32>,
        #[command(flatten)]
        engine: EngineArgs,
        /// Output format (exact reports are JSON)
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Rayleigh-Ritz + Weyl-tail numerical sum rules
    Numeric {
        #[arg(long)]
        density: PathBuf,
        #[arg(long, default_value = "2,3", value_delimiter = ',')]
        order: Vec<u32>,
        /// Basis cutoffs, comma separated
        #[arg(long, default_value = "30", value_delimiter = ',')]
        lmax: Vec<u32>,
        /// Retained eigenvalue count (default dim/3)
        #[arg(long)]
        retained: Option<usize>,
        /// Allow basis cutoffs above the dense-solve guard (96)
        #[arg(long)]
        allow_large_lmax: bool,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact-vs-numeric table over a kappa range (CSV)
    Sweep {
        /// Range start:end:step, e.g. 0.5:2.0:0.5
        #[arg(long, value_parser = parse_range)]
        kappa_range: KappaRange,
        /// Coefficient template scaled by kappa (default: unit Y10)
        #[arg(long)]
        density: Option<PathBuf>,
        #[arg(long, default_value = "2,3", value_delimiter = ',')]
        order: Vec<u32>,
        #[arg(long, default_value = "30", value_delimiter = ',')]
        lmax: Vec<u32>,
        #[arg(long)]
        retained: Option<usize>,
        #[arg(long)]
        allow_large_lmax: bool,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Pointwise closed-form Green's function G^(q)(x)
    Greens {
        #[arg(long)]
        q: u32,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
    /// Gaunt coefficient W(l1 m1, l2 m2, l3 m3)
    Gaunt {
        #[arg(allow_hyphen_values = true, num_args = 6)]
        indices: Vec<i64>,
    },
    /// Cross-check the engine against the quadrature oracles
    Verify {
        #[arg(long)]
        density: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
    },
}

#[derive(Clone, Copy, Debug)]
struct KappaRange {
    start: f64,
    end: f64,
    step: f64,
}

impl KappaRange {
    fn values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = 0usize;
        loop {
            let v = self.start + self.step * k as f64;
            if v > self.end + 1e-12 {
                break;
            }
            out.push(v);
            k += 1;
        }
        out
    }
}

fn parse_range(s: &str) -> Result<KappaRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err("expected start:end:step".into());
    }
    let parse = |p: &str| p.parse::<f64>().map_err(|e| e.to_string());
    let (start, end, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
    if step <= 0.0 || end < start {
        return Err("need step > 0 and end >= start".into());
    }
    Ok(KappaRange { start, end, step })
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<DensityError> for Failure {
    fn from(e: DensityError) -> Self {
        let code = match &e {
            DensityError::Parse(_) => 2,
            _ => 3,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        let code = match &e {
            SpectralError::NonConverged { .. } => 4,
            _ => 2,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<RitzError> for Failure {
    fn from(e: RitzError) -> Self {
        let code = match &e {
            RitzError::NotPositiveDefinite { .. } => 5,
            RitzError::Spectral(SpectralError::NonConverged { .. }) => 4,
            _ => 2,
        };
        Failure::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Exact {
            density,
            order,
            engine,
            format,
            output,
        } => {
            if format == Format::Csv {
                return Err(Failure::new(2, "exact reports are JSON; use --format json"));
            }
            let d = load_density(&density)?;
            let engine = engine.engine();
            let reports: Vec<SumRuleReport<f64>> = order
                .iter()
                .map(|&p| exact_sum_rule(&engine, &d, p))
                .collect::<Result<_, _>>()?;
            emit(&output, &render_json_reports(&reports))
        }
        Command::Numeric {
            density,
            order,
            lmax,
            retained,
            allow_large_lmax,
            engine,
            format,
            output,
        } => {
            if format == Format::Csv {
                return Err(Failure::new(2, "numeric reports are JSON; use --format json"));
            }
            let d = load_density(&density)?;
            let engine = engine.engine();
            let mut rows = Vec::new();
            for &l_max in &lmax {
                let spectrum = solve(&d, l_max, &engine, allow_large_lmax)?;
                for &p in &order {
                    rows.push(numeric_row(&engine, &d, &spectrum, p, retained, None)?);
                }
            }
            emit(&output, &render_json_rows(&rows))
        }
        Command::Sweep {
            kappa_range,
            density,
            order,
            lmax,
            retained,
            allow_large_lmax,
            engine,
            format,
            output,
        } => {
            let template = match &density {
                Some(path) => load_spec(path)?,
                None => DensitySpec::kappa_y10(1.0),
            };
            let kappas = kappa_range.values();
            let engine = engine.engine();
            let results: Result<Vec<Vec<Row>>, Failure> = kappas
                .par_iter()
                .map(|&kappa| {
                    let d = template
                        .scaled(kappa)
                        .validated()
                        .map_err(Failure::from)?;
                    let mut rows = Vec::new();
                    for &l_max in &lmax {
                        let spectrum = solve(&d, l_max, &engine, allow_large_lmax)?;
                        for &p in &order {
                            rows.push(numeric_row(
                                &engine,
                                &d,
                                &spectrum,
                                p,
                                retained,
                                Some(kappa),
                            )?);
                        }
                    }
                    Ok(rows)
                })
                .collect();
            let rows: Vec<Row> = results?.into_iter().flatten().collect();
            let text = match format {
                Format::Csv => render_csv(&rows),
                Format::Json => render_json_rows(&rows),
            };
            emit(&output, &text)
        }
        Command::Greens { q, x } => {
            let order = GreenOrder::from_q(q).map_err(|e| Failure::new(2, e.to_string()))?;
            let x = GeodesicCosine::new(x).map_err(|e| Failure::new(2, e.to_string()))?;
            let v = green_closed(order, x).map_err(|e| Failure::new(2, e.to_string()))?;
            println!("{v:.14e}");
            Ok(())
        }
        Command::Gaunt { indices } => {
            if indices.len() != 6 {
                return Err(Failure::new(2, "expected six integers: l1 m1 l2 m2 l3 m3"));
            }
            let to_l = |v: i64| -> Result<u32, Failure> {
                u32::try_from(v).map_err(|_| Failure::new(2, format!("negative degree {v}")))
            };
            let to_m = |v: i64| -> Result<i32, Failure> {
                i32::try_from(v).map_err(|_| Failure::new(2, format!("order {v} out of range")))
            };
            let v = gaunt(
                to_l(indices[0])?,
                to_m(indices[1])?,
                to_l(indices[2])?,
                to_m(indices[3])?,
                to_l(indices[4])?,
                to_m(indices[5])?,
            )
            .map_err(|e| Failure::new(2, e.to_string()))?;
            println!("{v:.14e}");
            Ok(())
        }
        Command::Verify { density, engine } => verify(&density, &engine.engine()),
    }
}

fn load_spec(path: &PathBuf) -> Result<DensitySpec<f64>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    Ok(DensitySpec::from_json_str(&text)?)
}

fn load_density(path: &PathBuf) -> Result<Density<f64>, Failure> {
    Ok(load_spec(path)?.validated()?)
}

fn solve(
    d: &Density<f64>,
    l_max: u32,
    engine: &Engine<f64>,
    allow_large: bool,
) -> Result<SpectrumApprox<f64>, Failure> {
    let options = SolveOptions {
        allow_large,
        ..SolveOptions::default()
    };
    Ok(solve_spectrum(d, l_max, engine.gaunt(), &options)?)
}

struct Row {
    kappa: Option<f64>,
    order: u32,
    l_max: u32,
    exact: f64,
    numeric: f64,
    abs_err: f64,
    n_retained: usize,
    weyl_tail: f64,
}

fn numeric_row(
    engine: &Engine<f64>,
    d: &Density<f64>,
    spectrum: &SpectrumApprox<f64>,
    order: u32,
    retained: Option<usize>,
    kappa: Option<f64>,
) -> Result<Row, Failure> {
    let n = retained.unwrap_or_else(|| spectrum.n_retained());
    let (numeric, tail) = numeric_sum_rule(spectrum, order, n)?;
    let exact = exact_sum_rule(engine, d, order)?.value;
    Ok(Row {
        kappa,
        order,
        l_max: spectrum.l_max(),
        exact,
        numeric,
        abs_err: (numeric - exact).abs(),
        n_retained: n,
        weyl_tail: tail.value,
    })
}

fn render_json_reports(reports: &[SumRuleReport<f64>]) -> String {
    let text = if reports.len() == 1 {
        serde_json::to_string_pretty(&reports[0])
    } else {
        serde_json::to_string_pretty(reports)
    };
    text.expect("report serialization is infallible")
}

fn render_json_rows(rows: &[Row]) -> String {
    let values: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            let mut obj = serde_json::Map::new();
            if let Some(k) = r.kappa {
                obj.insert("kappa".into(), k.into());
            }
            obj.insert("order".into(), r.order.into());
            obj.insert("l_max".into(), r.l_max.into());
            obj.insert("exact".into(), r.exact.into());
            obj.insert("numeric".into(), r.numeric.into());
            obj.insert("abs_err".into(), r.abs_err.into());
            obj.insert("n_retained".into(), r.n_retained.into());
            obj.insert("weyl_tail".into(), r.weyl_tail.into());
            serde_json::Value::Object(obj)
        })
        .collect();
    serde_json::to_string_pretty(&values).expect("row serialization is infallible")
}

fn render_csv(rows: &[Row]) -> String {
    let mut out = String::from("kappa,order,l_max,exact,numeric,abs_err,n_retained,weyl_tail\n");
    for r in rows {
        let kappa = r.kappa.unwrap_or(f64::NAN);
        writeln!(
            out,
            "{kappa:.6},{},{},{:.12e},{:.12e},{:.12e},{},{:.12e}",
            r.order, r.l_max, r.exact, r.numeric, r.abs_err, r.n_retained, r.weyl_tail
        )
        .expect("string write");
    }
    out
}

fn emit(output: &OutputArgs, text: &str) -> Result<(), Failure> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::new(2, format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verify(path: &PathBuf, engine: &Engine<f64>) -> Result<(), Failure> {
    let d = load_density(path)?;
    let grid = SphereGrid::new(24, 24);
    let refined = SphereGrid::new(32, 32);
    let mut all_ok = true;
    let mut check = |name: &str,
                     engine_value: f64,
                     oracle: Result<drumsum::oracle::OracleValue<f64>, drumsum::oracle::OracleError>| {
        let (ok, line) = match oracle {
            Ok(drumsum::oracle::OracleValue { value, estimate }) => {
                let tol = (1e-4 * value.abs()).max(estimate * 10.0).max(1e-8);
                let ok = (value - engine_value).abs() <= tol;
                (
                    ok,
                    format!(
                        "{name}: engine={engine_value:.10e} oracle={value:.10e} |diff|={:.2e} {}",
                        (value - engine_value).abs(),
                        if ok { "ok" } else { "MISMATCH" }
                    ),
                )
            }
            Err(e) => (false, format!("{name}: oracle failed: {e}")),
        };
        println!("{line}");
        all_ok &= ok;
    };
    for q in 0..=2u32 {
        let engine_value = engine.integral_i1(&d, q);
        check(
            &format!("I1({q})"),
            engine_value,
            oracle_i1(&d, q, &grid, &refined),
        );
    }
    for (q, p) in [(0u32, 0u32), (0, 1), (1, 1)] {
        let engine_value = engine.integral_j1(&d, q, p)?.value;
        check(
            &format!("J1({q},{p})"),
            engine_value,
            oracle_j1(&d, q, p, &grid, &refined),
        );
    }
    if all_ok {
        println!("verify: all checks passed");
        Ok(())
    } else {
        Err(Failure::new(4, "verification mismatches (see above)"))
    }
}
