use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use titeica_core::centroaffine::CentroAffineMap;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Catalog,
    Invariants,
    Classify,
    TransformCheck,
    MetricCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Catalog => "catalog",
            Command::Invariants => "invariants",
            Command::Classify => "classify",
            Command::TransformCheck => "transform-check",
            Command::MetricCheck => "metric-check",
        }
    }

    fn default_grid(self) -> (usize, usize) {
        match self {
            // 50 sample points per pair
            Command::MetricCheck => (10, 5),
            _ => (20, 20),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "titeica",
    version,
    about = "Centro-affine K/d^4 invariant of surfaces: reports, classification, scaling and metric checks"
)]
pub struct Cli {
    /// JSON config file; flags given on the command line override its values
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Subcmd>,
}

#[derive(Debug, Subcommand)]
pub enum Subcmd {
    /// List catalog surfaces, metrics, coordinate changes and metric pairs
    Catalog(Flags),
    /// Per-point curvature, distance, volumes and K/d^4
    Invariants(Flags),
    /// Decide whether K/d^4 is constant over a grid
    Classify(Flags),
    /// Check the 1/det(A)^2 scaling of K/d^4 under a centro-affine map
    TransformCheck(Flags),
    /// Check pullback equivalences between metric models
    MetricCheck(Flags),
}

impl Subcmd {
    fn split(self) -> (Command, Flags) {
        match self {
            Subcmd::Catalog(f) => (Command::Catalog, f),
            Subcmd::Invariants(f) => (Command::Invariants, f),
            Subcmd::Classify(f) => (Command::Classify, f),
            Subcmd::TransformCheck(f) => (Command::TransformCheck, f),
            Subcmd::MetricCheck(f) => (Command::MetricCheck, f),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Catalog surface name
    #[arg(long)]
    pub surface: Option<String>,
    /// Surface parameter, repeatable
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
    /// Grid size, e.g. 20x20
    #[arg(long, value_name = "NXxNY", value_parser = parse_grid)]
    pub grid: Option<(usize, usize)>,
    /// Single parameter point for `invariants`
    #[arg(long, value_name = "X,Y", allow_hyphen_values = true, value_parser = parse_point)]
    pub point: Option<(f64, f64)>,
    /// 3x3 matrix, 9 entries row-major, separated by commas or spaces
    #[arg(long, value_name = "A11,...,A33", allow_hyphen_values = true, value_parser = parse_matrix)]
    pub matrix: Option<Matrix>,
    /// Tolerance (default 1e-8)
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Metric pair name, or `all`
    #[arg(long)]
    pub pair: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix(pub Vec<f64>);

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_string(), v))
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X', ',']).ok_or_else(|| format!("expected NXxNY, got `{s}`"))?;
    let n = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("`{t}` is not a count"));
    Ok((n(a)?, n(b)?))
}

fn numbers(s: &str) -> Result<Vec<f64>, String> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect()
}

fn parse_point(s: &str) -> Result<(f64, f64), String> {
    match numbers(s)?[..] {
        [x, y] => Ok((x, y)),
        _ => Err(format!("expected X,Y, got `{s}`")),
    }
}

fn parse_matrix(s: &str) -> Result<Matrix, String> {
    numbers(s).map(Matrix)
}

/// Config file contents; every field optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    command: Option<Command>,
    surface: Option<String>,
    params: Option<BTreeMap<String, f64>>,
    grid: Option<[usize; 2]>,
    point: Option<[f64; 2]>,
    matrix: Option<Vec<f64>>,
    tol: Option<f64>,
    format: Option<Format>,
    output: Option<PathBuf>,
    pair: Option<String>,
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::ConfigRead { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::ConfigParse { path: path.to_path_buf(), source })
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub surface: Option<String>,
    pub params: BTreeMap<String, f64>,
    pub grid: (usize, usize),
    pub point: Option<(f64, f64)>,
    pub matrix: Option<Vec<f64>>,
    pub tol: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub pair: Option<String>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            surface: None,
            params: BTreeMap::new(),
            grid: command.default_grid(),
            point: None,
            matrix: None,
            tol: 1e-8,
            format: Format::Text,
            output: None,
            pair: None,
        }
    }

    pub fn surface(mut self, name: &str) -> Self {
        self.surface = Some(name.to_string());
        self
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let (nx, ny) = self.grid;
        if nx < 2 || ny < 2 {
            return Err(CliError::config("grid", format!("both sizes must be >= 2, got {nx}x{ny}")));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::config("tol", format!("must be a positive number, got {}", self.tol)));
        }
        if let Some(m) = &self.matrix {
            if m.len() != 9 {
                return Err(CliError::config("matrix", format!("needs 9 entries, got {}", m.len())));
            }
            CentroAffineMap::from_row_major(m).map_err(|e| CliError::config("matrix", e.to_string()))?;
        }
        if let Some((x, y)) = self.point {
            if !(x.is_finite() && y.is_finite()) {
                return Err(CliError::config("point", "coordinates must be finite"));
            }
        }
        let needs_surface = matches!(self.command, Command::Invariants | Command::Classify | Command::TransformCheck);
        if needs_surface && self.surface.is_none() {
            return Err(CliError::config("surface", format!("`{}` needs a surface", self.command.name())));
        }
        if self.command == Command::TransformCheck && self.matrix.is_none() {
            return Err(CliError::config("matrix", "`transform-check` needs a matrix"));
        }
        Ok(())
    }
}

/// Merge the optional config file with command-line flags and validate.
pub fn resolve(cli: Cli) -> Result<RunConfig, CliError> {
    let file = match &cli.config {
        Some(path) => read_file(path)?,
        None => FileConfig::default(),
    };
    let (command, flags) = match cli.command {
        Some(sub) => sub.split(),
        None => (
            file.command
                .ok_or_else(|| CliError::config("command", "no subcommand given and none in the config file"))?,
            Flags::default(),
        ),
    };
    let mut cfg = RunConfig::new(command);
    cfg.surface = flags.surface.or(file.surface);
    cfg.params = file.params.unwrap_or_default();
    cfg.params.extend(flags.params);
    if let Some(g) = flags.grid.or(file.grid.map(|[a, b]| (a, b))) {
        cfg.grid = g;
    }
    cfg.point = flags.point.or(file.point.map(|[x, y]| (x, y)));
    cfg.matrix = flags.matrix.map(|m| m.0).or(file.matrix);
    if let Some(t) = flags.tol.or(file.tol) {
        cfg.tol = t;
    }
    cfg.format = flags.format.or(file.format).unwrap_or_default();
    cfg.output = flags.output.or(file.output);
    cfg.pair = flags.pair.or(file.pair);
    cfg.validate()?;
    Ok(cfg)
}
