//! Command-line front end.
//!
//! Every fitting command writes into `--out-dir`:
//!
//! * `curve.csv`: the resulting spline(s) sampled at `--curve-points` evenly
//!   spaced abscissae over the grid, one column per method;
//! * `report.json`: objectives, convergence, sweeps, wall times and an echo of
//!   the full configuration;
//! * `data.csv` when the input is a dataset, and `plot.svg` with `--svg`.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use l1spline_core::{DataSet, FitConfig, InterpConfig, KnotGrid, TieBreak};
use serde::Serialize;

use crate::bench::{run_bench, BenchConfig};
use crate::csv_io::{read_csv, write_columns, write_csv};
use crate::datasets::{generate, GeneratorSpec, Noise, Shape};
use crate::methods::{run_method, Method, Source};
use crate::report::{sample_curve, source_range, MethodReport, Report};
use crate::svg::{render, Series};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "l1spline", version, about = "Shape-preserving L1 spline interpolation and fitting")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Interpolate knot values: data points (knots = abscissae) or a target sampled on a grid.
    Interp {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Norm::L1)]
        method: Norm,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Global L1 or L2 spline fit.
    Fit {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Norm::L1)]
        method: Norm,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sliding-window L1 spline fit.
    Window {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Window size: 3, 5 or 7 knots.
        #[arg(short, long, default_value_t = 7)]
        m: usize,
        /// Central knots kept per window: 1 or 3.
        #[arg(long, default_value_t = 1)]
        keep: usize,
        /// Worker thread cap; all available cores when absent
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run several methods on the same input and report them side by side.
    Compare {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Comma-separated: l1, l2, l1-interp, l2-interp, window<m>, window<m>-3.
        #[arg(long, value_delimiter = ',', default_value = "l1,l2")]
        methods: Vec<String>,
        /// Worker thread cap; all available cores when absent
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Time methods over growing grids (median of repetitions, log-log slope).
    Bench {
        /// Comma-separated method names, as for `compare`.
        #[arg(long, value_delimiter = ',', default_value = "window7-3")]
        method: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "50,100,200,400")]
        knots: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        /// Data points per knot interval.
        #[arg(long, default_value_t = 3)]
        points_per_interval: usize,
        #[arg(long, default_value_t = 0.03)]
        sigma: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Worker thread cap; all available cores when absent
        #[arg(long)]
        threads: Option<usize>,
        /// Directory for report.json and timings.csv.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Write a generated dataset to CSV.
    Generate {
        #[command(flatten)]
        generator: GeneratorArgs,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Norm {
    L1,
    L2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeName {
    Heaviside,
    MultiscaleSteps,
    Sine,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GeneratorArgs {
    /// Base function of the dataset or target.
    #[arg(long = "shape", value_enum, default_value_t = ShapeName::Heaviside)]
    pub shape: ShapeName,
    /// Domain `a,b`; defaults to [0,1] ([0,2π] for sine).
    #[arg(long, value_name = "A,B", value_delimiter = ',', allow_hyphen_values = true)]
    pub domain: Option<Vec<f64>>,
    /// Heaviside jump; defaults to the domain midpoint.
    #[arg(long, allow_negative_numbers = true)]
    pub jump: Option<f64>,
    /// Multiscale plateau levels, equally wide.
    #[arg(long, value_delimiter = ',', default_value = "0,100,0", allow_negative_numbers = true)]
    pub levels: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Gaussian noise standard deviation.
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mean: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl GeneratorArgs {
    pub fn spec(&self) -> Result<GeneratorSpec> {
        let domain = match self.domain.as_deref() {
            Some(&[a, b]) => (a, b),
            Some(_) => return Err(Error::usage("--domain takes two numbers a,b")),
            None if self.shape == ShapeName::Sine => (0.0, std::f64::consts::TAU),
            None => (0.0, 1.0),
        };
        let noise = Noise {
            mean: self.mean,
            std_dev: self.sigma,
        };
        let mut spec = match self.shape {
            ShapeName::Heaviside => GeneratorSpec {
                shape: Shape::Heaviside {
                    jump: self.jump.unwrap_or(0.5 * (domain.0 + domain.1)),
                },
                domain,
                samples: self.samples,
                noise,
                seed: self.seed,
            },
            ShapeName::Sine => GeneratorSpec::sine(self.samples, self.sigma, self.seed),
            ShapeName::MultiscaleSteps => {
                GeneratorSpec::multiscale(domain, self.levels.clone(), self.samples, noise, self.seed)
            }
        };
        spec.domain = domain;
        spec.noise = noise;
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SourceArgs {
    /// Two-column CSV dataset.
    #[arg(long, group = "source")]
    pub input: Option<PathBuf>,
    /// Fit a generated dataset (see the generator flags).
    #[arg(long, group = "source")]
    pub generated: bool,
    /// Fit the generator's noise-free function itself (continuous problem).
    #[arg(long, group = "source", value_enum)]
    pub target: Option<ShapeName>,
    #[command(flatten)]
    pub generator: GeneratorArgs,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SourceEcho {
    Csv { path: PathBuf },
    Generated { spec: GeneratorSpec },
    Function { spec: GeneratorSpec },
}

impl SourceArgs {
    fn load(&self) -> Result<(Source, SourceEcho)> {
        if let Some(path) = &self.input {
            return Ok((Source::Data(read_csv(path)?), SourceEcho::Csv { path: path.clone() }));
        }
        let mut generator = self.generator.clone();
        if let Some(shape) = self.target {
            generator.shape = shape;
            let spec = generator.spec()?;
            return Ok((Source::Function(spec.target()?), SourceEcho::Function { spec }));
        }
        if self.generated {
            let spec = generator.spec()?;
            return Ok((Source::Data(generate(&spec)?), SourceEcho::Generated { spec }));
        }
        Err(Error::usage("give one of --input, --generated or --target"))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    /// Number of equally spaced knots over the domain.
    #[arg(long, group = "grid")]
    pub knots: Option<usize>,
    /// Explicit comma-separated knot abscissae.
    #[arg(long, group = "grid", value_delimiter = ',', allow_hyphen_values = true)]
    pub knot_list: Option<Vec<f64>>,
}

impl GridArgs {
    /// The explicit list, else `--knots` (default 10) equally spaced knots on
    /// `domain`, else `fallback` when given and `--knots` is absent.
    fn grid(&self, domain: (f64, f64), fallback: Option<&[f64]>) -> Result<KnotGrid> {
        if let Some(list) = &self.knot_list {
            return Ok(KnotGrid::new(list.clone())?);
        }
        match (self.knots, fallback) {
            (None, Some(x)) => Ok(KnotGrid::new(x.to_vec())?),
            (n, _) => Ok(KnotGrid::uniform(domain.0, domain.1, n.unwrap_or(10))?),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolverArgs {
    /// Outer (knot value) tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub outer_tol: f64,
    #[arg(long, default_value_t = 200)]
    pub max_sweeps: usize,
    /// Quadrature panels per smooth piece of a knot interval.
    #[arg(long, default_value_t = 64)]
    pub quadrature: usize,
    /// Inner (derivative) tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub inner_tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub inner_max_iter: usize,
    /// Prefer minimum-norm derivatives among equal-objective ones.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub min_norm: bool,
}

impl SolverArgs {
    pub fn config(&self) -> Result<FitConfig> {
        let cfg = FitConfig {
            inner: InterpConfig {
                tol: self.inner_tol,
                max_iter: self.inner_max_iter,
                tie_break: if self.min_norm { TieBreak::MinNorm } else { TieBreak::FirstFound },
            },
            outer_tol: self.outer_tol,
            outer_max_sweeps: self.max_sweeps,
            quadrature_resolution: self.quadrature,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Sample count of curve.csv.
    #[arg(long, default_value_t = 1000)]
    pub curve_points: usize,
    /// Also write plot.svg.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Serialize)]
struct RunConfig<'a> {
    source: SourceEcho,
    knots: Vec<f64>,
    methods: Vec<String>,
    threads: Option<usize>,
    solver: &'a SolverArgs,
    curve_points: usize,
}

/// What a fitting command produced.
pub struct RunOutput {
    pub report_path: PathBuf,
    pub results: Vec<MethodReport>,
}

/// Runs a parsed command.
pub fn run(cli: Cli) -> Result<Option<RunOutput>> {
    match cli.command {
        Command::Interp { source, grid, method, solver, output } => {
            let m = match method {
                Norm::L1 => Method::L1Interp,
                Norm::L2 => Method::L2Interp,
            };
            fit_command("interp", &source, &grid, &[m], None, &solver, &output, true).map(Some)
        }
        Command::Fit { source, grid, method, solver, output } => {
            let m = match method {
                Norm::L1 => Method::L1,
                Norm::L2 => Method::L2,
            };
            fit_command("fit", &source, &grid, &[m], None, &solver, &output, false).map(Some)
        }
        Command::Window { source, grid, m, keep, threads, solver, output } => {
            let method: Method = format!("window{m}-{keep}").parse()?;
            fit_command("window", &source, &grid, &[method], threads, &solver, &output, false).map(Some)
        }
        Command::Compare { source, grid, methods, threads, solver, output } => {
            let methods = methods.iter().map(|s| s.parse()).collect::<Result<Vec<Method>>>()?;
            if methods.is_empty() {
                return Err(Error::usage("--methods is empty"));
            }
            fit_command("compare", &source, &grid, &methods, threads, &solver, &output, false).map(Some)
        }
        Command::Bench { method, knots, reps, points_per_interval, sigma, seed, threads, out_dir } => {
            let cfg = BenchConfig {
                methods: method.iter().map(|s| s.parse()).collect::<Result<_>>()?,
                knots,
                reps,
                points_per_interval,
                std_dev: sigma,
                seed,
                threads,
            };
            if cfg.knots.iter().any(|&n| n < 2) {
                return Err(Error::usage("bench sizes need at least 2 knots"));
            }
            let report = run_bench(&cfg)?;
            create_dir(&out_dir)?;
            let path = out_dir.join("report.json");
            write_json(&path, &report)?;
            let mut cols: [Vec<f64>; 4] = Default::default();
            for (k, r) in report.results.iter().enumerate() {
                for row in &r.rows {
                    for &t in &row.timings_s {
                        cols[0].push(k as f64);
                        cols[1].push(row.n as f64);
                        cols[2].push(t);
                        cols[3].push(row.median_s);
                    }
                }
                println!("{}: log-log slope {:.3}, last ratio {:.3}", r.method, r.loglog_slope, r.last_ratio);
                for row in &r.rows {
                    println!("  n={:<5} median {:.4}s", row.n, row.median_s);
                }
            }
            write_columns(&out_dir.join("timings.csv"), &["method_index", "n", "time_s", "median_s"], &cols)?;
            Ok(None)
        }
        Command::Generate { generator, output } => {
            let d = generate(&generator.spec()?)?;
            write_csv(&d, &output)?;
            Ok(None)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn fit_command(
    name: &str,
    source_args: &SourceArgs,
    grid_args: &GridArgs,
    methods: &[Method],
    threads: Option<usize>,
    solver: &SolverArgs,
    output: &OutputArgs,
    interp: bool,
) -> Result<RunOutput> {
    let cfg = solver.config()?;
    if output.curve_points < 2 {
        return Err(Error::usage("--curve-points must be at least 2"));
    }
    let (source, echo) = source_args.load()?;
    let all_interp = interp || methods.iter().all(|m| matches!(m, Method::L1Interp | Method::L2Interp));
    let grid = match (&source, &echo) {
        (Source::Data(d), _) if d.is_empty() => return Err(Error::usage("the dataset is empty")),
        (Source::Data(d), _) => grid_args.grid((d.x()[0], d.x()[d.len() - 1]), all_interp.then_some(d.x()))?,
        (Source::Function(_), SourceEcho::Function { spec }) => grid_args.grid(spec.domain, None)?,
        _ => unreachable!("function sources are echoed as functions"),
    };

    let outcomes = methods
        .iter()
        .map(|&m| run_method(m, &source, &grid, &cfg, threads))
        .collect::<Result<Vec<_>>>()?;
    let mut xs = Vec::new();
    let mut columns = Vec::new();
    for out in &outcomes {
        let (x, y) = sample_curve(&out.spline, output.curve_points);
        xs = x;
        columns.push(y);
    }
    let range = source_range(&source, &xs);
    let results: Vec<MethodReport> = outcomes.iter().zip(&columns).map(|(o, ys)| MethodReport::new(o, ys, range)).collect();

    create_dir(&output.out_dir)?;
    let names: Vec<String> = methods.iter().map(ToString::to_string).collect();
    let mut header = vec!["x"];
    header.extend(names.iter().map(String::as_str));
    let mut all = vec![xs.clone()];
    all.extend(columns.iter().cloned());
    write_columns(&output.out_dir.join("curve.csv"), &header, &all)?;
    let data = match &source {
        Source::Data(d) => {
            write_csv(d, &output.out_dir.join("data.csv"))?;
            Some(d.clone())
        }
        Source::Function(_) => None,
    };
    if output.svg {
        let target_y: Vec<f64>;
        let mut curves: Vec<Series<'_>> =
            names.iter().zip(&columns).map(|(n, y)| Series { name: n, x: &xs, y }).collect();
        if let Source::Function(f) = &source {
            use l1spline_core::TargetFunction;
            target_y = xs.iter().map(|&x| f.eval(x)).collect();
            curves.insert(0, Series { name: "target", x: &xs, y: &target_y });
        }
        let points = data.as_ref().map(|d: &DataSet| Series { name: "data", x: d.x(), y: d.y() });
        let svg = render(name, &curves, points);
        let path = output.out_dir.join("plot.svg");
        fs::write(&path, svg).map_err(|e| Error::io(&path, e))?;
    }

    let report = Report {
        command: name.to_string(),
        config: RunConfig {
            source: echo,
            knots: grid.nodes().to_vec(),
            methods: names,
            threads,
            solver,
            curve_points: output.curve_points,
        },
        results: results.clone(),
    };
    let report_path = output.out_dir.join("report.json");
    write_json(&report_path, &report)?;
    for r in &results {
        println!(
            "{}: objective {:.6e}, converged {}, sweeps {}, {:.3}s",
            r.method, r.objective, r.converged, r.sweeps, r.wall_time_s
        );
    }
    Ok(RunOutput { report_path, results })
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}
