//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when `validate` finds the mean PSVG is not
//! strictly decreasing in H, 2 on configuration or input errors.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::report::{self, OutputFormat};
use crate::scaling::{analyze_series, AnalysisConfig, FitRange, WindowReport};
use crate::series_io::{self, Column, CsvConfig, TimeSeries, WindowSpec};
use crate::synth::{self, FbmConfig};
use crate::visibility::Constructor;

#[derive(Debug, Parser)]
#[command(
    name = "psvg",
    version,
    about = "Visibility-graph scale-freeness (PSVG) of time series"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate PSVG per window of a CSV series.
    Analyze(AnalyzeArgs),
    /// Write a synthetic series as CSV.
    Synth(SynthArgs),
    /// Check PSVG against fractional Brownian motion of known H.
    Validate(ValidateArgs),
    /// Time the naive and fast graph constructors.
    Bench(BenchArgs),
    /// Write the visibility graph of a CSV series as an edge list.
    DumpGraph(DumpGraphArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// CSV file holding the series.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = ",")]
    pub delimiter: char,
    /// First row is a header.
    #[arg(long)]
    pub header: bool,
    /// Label column, by index or header name.
    #[arg(long, default_value = "0")]
    pub label_col: Column,
    /// Label rows by position instead of reading a label column.
    #[arg(long, conflicts_with = "label_col")]
    pub no_labels: bool,
    /// Value column, by index or header name.
    #[arg(long, default_value = "1")]
    pub value_col: Column,
}

impl InputArgs {
    fn csv_config(&self) -> Result<CsvConfig> {
        ensure!(
            self.delimiter.is_ascii(),
            "delimiter must be a single ASCII character"
        );
        Ok(CsvConfig {
            delimiter: self.delimiter as u8,
            has_header: self.header,
            label_column: (!self.no_labels).then(|| self.label_col.clone()),
            value_column: self.value_col.clone(),
        })
    }

    pub fn load(&self) -> Result<TimeSeries> {
        let file = File::open(&self.input)
            .with_context(|| format!("cannot open input {}", self.input.display()))?;
        series_io::load_csv(BufReader::new(file), &self.csv_config()?)
            .with_context(|| format!("cannot load {}", self.input.display()))
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Window file with one `start,end,name` per line.
    #[arg(long)]
    pub windows: Option<PathBuf>,
    /// Inline window `start,end,name`; repeatable.
    #[arg(long = "window", value_name = "START,END,NAME")]
    pub window: Vec<String>,
    #[arg(long)]
    pub kmin: Option<usize>,
    #[arg(long)]
    pub kmax: Option<usize>,
    #[arg(long, default_value = "fast")]
    pub constructor: Constructor,
    /// Directory for report files; nothing is written without it.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Comma-separated output formats.
    #[arg(long, value_delimiter = ',', default_value = "json,csv")]
    pub format: Vec<OutputFormat>,
    #[arg(long, default_value_t = 16)]
    pub min_length: usize,
    /// Offset added when shifting the series to positive values.
    #[arg(long, default_value_t = series_io::DEFAULT_SHIFT_EPSILON)]
    pub epsilon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SynthKind {
    Fbm,
    Fgn,
    Uniform,
    Monotone,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum, default_value = "fbm")]
    pub kind: SynthKind,
    #[arg(long, default_value_t = 0.5)]
    pub hurst: f64,
    #[arg(long)]
    pub length: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Comma-separated Hurst exponents.
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,0.7")]
    pub hurst: Vec<f64>,
    #[arg(long, default_value_t = 4096)]
    pub length: usize,
    /// Number of seeds per H.
    #[arg(long, default_value_t = 10)]
    pub seeds: usize,
    /// First seed; seeds run consecutively from here.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Degree 1 only occurs at the two endpoints, so it is excluded by default.
    #[arg(long, default_value_t = 2)]
    pub kmin: usize,
    #[arg(long)]
    pub kmax: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesClass {
    Random,
    Monotone,
    Constant,
    Fbm,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "1000,4000")]
    pub lengths: Vec<usize>,
    #[arg(long, value_enum, default_value = "random")]
    pub class: SeriesClass,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Constructors to time.
    #[arg(long, value_delimiter = ',', default_value = "naive,fast")]
    pub constructor: Vec<Constructor>,
    /// CSV output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DumpGraphArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "fast")]
    pub constructor: Constructor,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn write_to(path: Option<&Path>, body: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, body).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(body.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

pub fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze(a) => cmd_analyze(&a).map(|_| ExitCode::SUCCESS),
        Command::Synth(a) => cmd_synth(&a).map(|_| ExitCode::SUCCESS),
        Command::Validate(a) => {
            let summary = cmd_validate(&a)?;
            print!("{}", summary.table());
            Ok(if summary.monotone() {
                ExitCode::SUCCESS
            } else {
                eprintln!("mean lambda_p is not strictly decreasing in H");
                ExitCode::from(1)
            })
        }
        Command::Bench(a) => {
            let rows = cmd_bench(&a)?;
            write_to(a.output.as_deref(), &bench_csv(&rows))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::DumpGraph(a) => {
            let series = a.input.load()?;
            let graph = a.constructor.build(&series)?;
            write_to(a.output.as_deref(), &graph.to_edge_list())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn window_spec(args: &AnalyzeArgs, series: &TimeSeries) -> Result<WindowSpec> {
    let mut spec = match &args.windows {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read window file {}", path.display()))?;
            WindowSpec::parse(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => WindowSpec::default(),
    };
    for w in &args.window {
        spec.windows
            .push(WindowSpec::parse_entry(w).map_err(anyhow::Error::msg)?);
    }
    if spec.windows.is_empty() {
        spec = WindowSpec::whole(series, "all");
    }
    Ok(spec)
}

/// Runs the analysis, prints the summary table and writes report files.
pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<Vec<WindowReport>> {
    let series = args.input.load()?;
    let spec = window_spec(args, &series)?;
    let windows = series_io::partition_windows(&series, &spec)?;
    ensure!(args.epsilon > 0.0, "--epsilon must be positive");
    let config = AnalysisConfig {
        range: FitRange {
            k_min: args.kmin,
            k_max: args.kmax,
        },
        constructor: args.constructor,
        min_length: args.min_length,
        shift_epsilon: args.epsilon,
    };
    let reports = windows
        .par_iter()
        .map(|(name, s)| {
            analyze_series(name, s, &config).with_context(|| format!("window {name:?}"))
        })
        .collect::<Result<Vec<_>>>()?;

    print!("{}", report::summary_table(&reports));
    if let Some(dir) = &args.out_dir {
        report::write_outputs(dir, &reports, &args.format)
            .with_context(|| format!("cannot write reports to {}", dir.display()))?;
    }
    Ok(reports)
}

pub fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let series = match args.kind {
        SynthKind::Fbm => synth::gen_fbm(&FbmConfig::new(args.hurst, args.length, args.seed)?)?,
        SynthKind::Fgn => synth::gen_fgn(&FbmConfig::new(args.hurst, args.length, args.seed)?)?,
        SynthKind::Uniform => synth::gen_uniform_random(args.length, args.seed)?,
        SynthKind::Monotone => synth::gen_monotone(args.length)?,
    };
    let mut buf = Vec::new();
    series_io::save_csv(&series, &mut buf)?;
    write_to(args.output.as_deref(), std::str::from_utf8(&buf)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HurstResult {
    pub hurst: f64,
    pub lambdas: Vec<f64>,
    pub mean: f64,
    pub std_dev: f64,
}

impl HurstResult {
    pub fn reference(&self) -> f64 {
        3.0 - 2.0 * self.hurst
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationSummary {
    pub rows: Vec<HurstResult>,
}

impl ValidationSummary {
    /// Mean PSVG strictly decreasing along the H grid sorted ascending.
    pub fn monotone(&self) -> bool {
        let mut rows: Vec<&HurstResult> = self.rows.iter().collect();
        rows.sort_by(|a, b| a.hurst.total_cmp(&b.hurst));
        rows.windows(2).all(|w| w[0].mean > w[1].mean)
    }

    pub fn table(&self) -> String {
        let mut s = format!(
            "{:>5}  {:>8}  {:>8}  {:>8}  {:>7}\n",
            "H", "mean", "sd", "3-2H", "diff"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>5.2}  {:>8.4}  {:>8.4}  {:>8.4}  {:>+7.4}",
                r.hurst,
                r.mean,
                r.std_dev,
                r.reference(),
                r.mean - r.reference()
            );
        }
        s
    }
}

pub fn cmd_validate(args: &ValidateArgs) -> Result<ValidationSummary> {
    ensure!(!args.hurst.is_empty(), "empty Hurst grid");
    for &h in &args.hurst {
        ensure!(h > 0.0 && h < 1.0, "Hurst exponent {h} outside (0, 1)");
    }
    ensure!(args.length >= 1024, "--length must be at least 1024");
    ensure!(args.seeds >= 3, "--seeds must be at least 3");

    let config = AnalysisConfig {
        range: FitRange {
            k_min: Some(args.kmin),
            k_max: args.kmax,
        },
        ..AnalysisConfig::default()
    };
    let jobs: Vec<(f64, u64)> = args
        .hurst
        .iter()
        .flat_map(|&h| (0..args.seeds as u64).map(move |s| (h, args.seed + s)))
        .collect();
    let lambdas = jobs
        .par_iter()
        .map(|&(h, seed)| -> Result<f64> {
            let series = synth::gen_fbm(&FbmConfig::new(h, args.length, seed)?)?;
            let report = analyze_series("fbm", &series, &config)?;
            match report.fit.lambda_p() {
                Some(l) => Ok(l),
                None => bail!("no fit for H={h} seed={seed}: {:?}", report.fit),
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let rows = args
        .hurst
        .iter()
        .zip(lambdas.chunks(args.seeds))
        .map(|(&hurst, ls)| {
            let n = ls.len() as f64;
            let mean = ls.iter().sum::<f64>() / n;
            let var = ls.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (n - 1.0);
            HurstResult {
                hurst,
                lambdas: ls.to_vec(),
                mean,
                std_dev: var.sqrt(),
            }
        })
        .collect();
    Ok(ValidationSummary { rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub length: usize,
    pub class: SeriesClass,
    pub constructor: Constructor,
    pub seconds: f64,
    pub edge_count: usize,
}

pub fn bench_series(class: SeriesClass, length: usize, seed: u64) -> Result<TimeSeries> {
    Ok(match class {
        SeriesClass::Random => synth::gen_uniform_random(length, seed)?,
        SeriesClass::Monotone => synth::gen_monotone(length)?,
        SeriesClass::Constant => TimeSeries::from_values(vec![1.0; length])?,
        SeriesClass::Fbm => synth::gen_fbm(&FbmConfig::new(0.5, length, seed)?)?,
    })
}

/// Times each constructor per length; fails if their edge sets differ.
pub fn cmd_bench(args: &BenchArgs) -> Result<Vec<BenchRow>> {
    ensure!(!args.constructor.is_empty(), "no constructor selected");
    let mut rows = Vec::new();
    for &length in &args.lengths {
        ensure!(length >= 2, "bench length {length} below 2");
        let series = bench_series(args.class, length, args.seed)?;
        let mut reference = None;
        for &constructor in &args.constructor {
            let start = Instant::now();
            let graph = constructor.build(&series)?;
            let seconds = start.elapsed().as_secs_f64();
            match &reference {
                None => reference = Some(graph.clone()),
                Some(r) => ensure!(
                    *r == graph,
                    "constructors disagree at length {length} ({} vs {} edges)",
                    r.edge_count(),
                    graph.edge_count()
                ),
            }
            rows.push(BenchRow {
                length,
                class: args.class,
                constructor,
                seconds,
                edge_count: graph.edge_count(),
            });
        }
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from("length,class,constructor,seconds,edge_count\n");
    for r in rows {
        let class = r
            .class
            .to_possible_value()
            .map(|v| v.get_name().to_string());
        let constructor = match r.constructor {
            Constructor::Naive => "naive",
            Constructor::Fast => "fast",
        };
        let _ = writeln!(
            s,
            "{},{},{},{:.6},{}",
            r.length,
            class.unwrap_or_default(),
            constructor,
            r.seconds,
            r.edge_count
        );
    }
    s
}
