//! Command-line front end: batch divergence evaluation, axiom suites over
//! the built-in measures, and reconstruction reports.
//!
//! Reports are a pure function of (flags, input file, seed): trials use
//! derived per-trial seeds and rows are emitted in a canonical order
//! (measure, axiom, alpha), so identical invocations produce byte-identical
//! output regardless of thread count.
//!
//! Exit codes: 0 all pass, 1 at least one axiom verdict failed, 2 bad
//! input or configuration.

use std::fmt;
use std::fs;
use std::path::Path;

use clap::{Parser, ValueEnum};

use crate::axioms::{run_axiom_suite, Axiom, SuiteConfig, Tolerance, Verdict};
use crate::builtin::{negative_controls, standard_measures, BuiltinMeasure};
use crate::divergence::{relative_entropy, relative_entropy_closed};
use crate::qlog::Alpha;
use crate::reconstruction::{reconstruct, unfold_recursion, InitialElement};
use crate::report::{
    axioms_csv, axioms_json, divergence_csv, divergence_json, reconstruction_csv,
    reconstruction_json, AxiomRow, ConfigEcho, DivergenceRow, ReconstructionRow,
};
use crate::simplex::{DistPair, Distribution, DomainKind, SamplerConfig, SimplexSampler};
use crate::{axioms, Error};

/// Component floor used when the reconstruction command samples pairs. The
/// reconstruction gaps are compared at 1e-10 absolute, which needs the
/// power terms bounded; 1e-2 keeps them below ~1e4 for the default grid
/// while still covering essentially the whole simplex.
const RECONSTRUCT_MIN_COMPONENT: f64 = 1e-2;

/// Ratio reporting threshold: gamma ratios are only formed on pairs where
/// the divergence is clearly nonzero.
const RATIO_FLOOR: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "divax",
    about = "Relative entropy family evaluation and axiom verification"
)]
pub struct Args {
    /// What to run.
    #[arg(long, value_enum)]
    pub command: CommandKind,

    /// Alpha grid; repeatable or comma-separated.
    #[arg(
        long = "alpha",
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_values_t = [-1.0, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0]
    )]
    pub alpha: Vec<f64>,

    /// Input file of distribution pairs (CSV or JSON); divergence only.
    #[arg(long)]
    pub input: Option<String>,

    /// Master seed; DIVAX_SEED is the fallback when the flag is absent.
    #[arg(long, env = "DIVAX_SEED", default_value_t = 42)]
    pub seed: u64,

    /// Sampled trials per axiom and size.
    #[arg(long, default_value_t = 200)]
    pub trials: u32,

    /// Largest pair length exercised by recursivity/expansibility and the
    /// reconstruction sweep.
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,

    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    #[arg(long, default_value_t = 1e-9)]
    pub rel_tol: f64,

    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,

    /// Domain routing for input records: auto infers closed from zeros.
    #[arg(long, value_enum, default_value_t = DomainMode::Auto)]
    pub domain: DomainMode,

    #[arg(long, default_value_t = 1)]
    pub threads: usize,

    /// Which built-in measures the axiom suite runs.
    #[arg(long, value_enum, default_value_t = MeasureSet::Standard)]
    pub measures: MeasureSet,

    /// Initial element for the reconstruction command.
    #[arg(long, value_enum, default_value_t = InitialElementKind::Divergence)]
    pub initial_element: InitialElementKind,

    /// Scale factor for the scaled initial element.
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandKind {
    Divergence,
    Axioms,
    Reconstruct,
}

impl CommandKind {
    fn label(self) -> &'static str {
        match self {
            CommandKind::Divergence => "divergence",
            CommandKind::Axioms => "axioms",
            CommandKind::Reconstruct => "reconstruct",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    fn label(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainMode {
    Auto,
    Open,
    Closed,
}

impl DomainMode {
    fn label(self) -> &'static str {
        match self {
            DomainMode::Auto => "auto",
            DomainMode::Open => "open",
            DomainMode::Closed => "closed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureSet {
    Standard,
    Broken,
    All,
}

impl MeasureSet {
    fn label(self) -> &'static str {
        match self {
            MeasureSet::Standard => "standard",
            MeasureSet::Broken => "broken",
            MeasureSet::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitialElementKind {
    Divergence,
    Zero,
    Scaled,
}

impl InitialElementKind {
    fn label(self) -> &'static str {
        match self {
            InitialElementKind::Divergence => "divergence",
            InitialElementKind::Zero => "zero",
            InitialElementKind::Scaled => "scaled",
        }
    }
}

/// Errors that terminate a run with exit code 2.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Parse { location: String, message: String },
    Validation { location: String, message: String },
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Io(msg) => write!(f, "io error: {msg}"),
            CliError::Parse { location, message } => {
                write!(f, "parse error at {location}: {message}")
            }
            CliError::Validation { location, message } => {
                write!(f, "validation error at {location}: {message}")
            }
        }
    }
}

impl std::error::Error for CliError {}

/// A finished run: the report text and the process exit code.
pub struct CliOutput {
    pub report: String,
    pub exit_code: i32,
}

pub fn execute(args: &Args) -> Result<CliOutput, CliError> {
    validate_config(args)?;
    match args.command {
        CommandKind::Divergence => cmd_divergence(args),
        CommandKind::Axioms => cmd_axioms(args),
        CommandKind::Reconstruct => cmd_reconstruct(args),
    }
}

fn validate_config(args: &Args) -> Result<(), CliError> {
    if args.trials < 1 {
        return Err(CliError::Config("trials must be >= 1".into()));
    }
    if args.n_max < 3 {
        return Err(CliError::Config(format!(
            "n-max must be >= 3, got {}",
            args.n_max
        )));
    }
    if args.alpha.is_empty() {
        return Err(CliError::Config("alpha grid must be nonempty".into()));
    }
    for &a in &args.alpha {
        if !a.is_finite() {
            return Err(CliError::Config(format!("alpha {a} is not finite")));
        }
    }
    if args.rel_tol.is_nan() || args.abs_tol.is_nan() || args.rel_tol <= 0.0 || args.abs_tol <= 0.0
    {
        return Err(CliError::Config(
            "rel-tol and abs-tol must be positive".into(),
        ));
    }
    if args.threads < 1 {
        return Err(CliError::Config("threads must be >= 1".into()));
    }
    Ok(())
}

fn config_echo(args: &Args) -> ConfigEcho {
    ConfigEcho {
        command: args.command.label().to_string(),
        alpha_grid: args.alpha.clone(),
        input: args.input.clone(),
        seed: args.seed,
        trials: args.trials,
        n_max: args.n_max,
        format: args.format.label().to_string(),
        rel_tol: args.rel_tol,
        abs_tol: args.abs_tol,
        domain: args.domain.label().to_string(),
        threads: args.threads,
        measures: args.measures.label().to_string(),
        initial_element: args.initial_element.label().to_string(),
        gamma: args.gamma,
    }
}

fn alphas(args: &Args) -> Result<Vec<Alpha>, CliError> {
    args.alpha
        .iter()
        .map(|&a| Alpha::new(a).map_err(|e| CliError::Config(e.to_string())))
        .collect()
}

// ---------------------------------------------------------------------------
// Input records
// ---------------------------------------------------------------------------

/// One (p, q) record from an input file, tagged with where it came from.
struct InputRecord {
    id: String,
    p: Vec<f64>,
    q: Vec<f64>,
    location: String,
}

fn read_input(path: &str) -> Result<Vec<InputRecord>, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {path}: {e}")))?;
    let looks_json = Path::new(path)
        .extension()
        .map(|e| e.eq_ignore_ascii_case("json"))
        .unwrap_or_else(|| text.trim_start().starts_with(['[', '{']));
    if looks_json {
        parse_json_records(&text)
    } else {
        parse_csv_records(&text)
    }
}

fn parse_json_records(text: &str) -> Result<Vec<InputRecord>, CliError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::Parse {
        location: "json input".into(),
        message: e.to_string(),
    })?;
    let items = value.as_array().ok_or_else(|| CliError::Parse {
        location: "json input".into(),
        message: "expected a top-level array of {id, p, q} records".into(),
    })?;
    let mut records = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let location = format!("record {}", i + 1);
        let obj = item.as_object().ok_or_else(|| CliError::Parse {
            location: location.clone(),
            message: "expected an object".into(),
        })?;
        let id = obj
            .get("id")
            .and_then(|v| {
                v.as_str()
                    .map(str::to_string)
                    .or_else(|| Some(v.to_string()))
            })
            .ok_or_else(|| CliError::Parse {
                location: location.clone(),
                message: "missing id".into(),
            })?;
        let side = |key: &str| -> Result<Vec<f64>, CliError> {
            obj.get(key)
                .and_then(|v| v.as_array())
                .ok_or_else(|| CliError::Parse {
                    location: location.clone(),
                    message: format!("missing array field '{key}'"),
                })?
                .iter()
                .map(|v| {
                    v.as_f64().ok_or_else(|| CliError::Parse {
                        location: location.clone(),
                        message: format!("non-numeric entry in '{key}'"),
                    })
                })
                .collect()
        };
        records.push(InputRecord {
            id,
            p: side("p")?,
            q: side("q")?,
            location,
        });
    }
    Ok(records)
}

/// CSV layout: header `id,side,v1,v2,...`, then rows `id,p,...` immediately
/// followed by `id,q,...` with the same id. Row length may vary per record.
fn parse_csv_records(text: &str) -> Result<Vec<InputRecord>, CliError> {
    struct Row {
        id: String,
        side: char,
        values: Vec<f64>,
        line: usize,
    }
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if idx == 0 {
            if !trimmed.starts_with("id,side") {
                return Err(CliError::Parse {
                    location: "line 1".into(),
                    message: "expected header starting with 'id,side'".into(),
                });
            }
            continue;
        }
        let mut fields = trimmed.split(',');
        let id = fields.next().unwrap_or("").trim().to_string();
        let side_raw = fields.next().unwrap_or("").trim();
        let side = match side_raw {
            "p" => 'p',
            "q" => 'q',
            other => {
                return Err(CliError::Parse {
                    location: format!("line {line_no}"),
                    message: format!("side must be 'p' or 'q', got '{other}'"),
                })
            }
        };
        let mut values = Vec::new();
        for field in fields {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            values.push(field.parse::<f64>().map_err(|_| CliError::Parse {
                location: format!("line {line_no}"),
                message: format!("'{field}' is not a number"),
            })?);
        }
        rows.push(Row {
            id,
            side,
            values,
            line: line_no,
        });
    }
    let mut records = Vec::new();
    let mut iter = rows.into_iter();
    while let Some(first) = iter.next() {
        if first.side != 'p' {
            return Err(CliError::Parse {
                location: format!("line {}", first.line),
                message: format!("expected a 'p' row to open record '{}'", first.id),
            });
        }
        let second = iter.next().ok_or_else(|| CliError::Parse {
            location: format!("line {}", first.line),
            message: format!("record '{}' has no matching 'q' row", first.id),
        })?;
        if second.side != 'q' || second.id != first.id {
            return Err(CliError::Parse {
                location: format!("line {}", second.line),
                message: format!(
                    "expected the 'q' row of record '{}', got side '{}' id '{}'",
                    first.id, second.side, second.id
                ),
            });
        }
        records.push(InputRecord {
            location: format!("line {}", first.line),
            id: first.id,
            p: first.values,
            q: second.values,
        });
    }
    Ok(records)
}

fn route_domain(record: &InputRecord, mode: DomainMode) -> DomainKind {
    match mode {
        DomainMode::Open => DomainKind::Open,
        DomainMode::Closed => DomainKind::Closed,
        DomainMode::Auto => {
            let has_zero = record.p.iter().chain(&record.q).any(|&x| x == 0.0);
            if has_zero {
                DomainKind::Closed
            } else {
                DomainKind::Open
            }
        }
    }
}

fn build_pair(record: &InputRecord, kind: DomainKind) -> Result<DistPair, CliError> {
    let validated = |entries: &[f64], side: &str| {
        Distribution::validate(entries.to_vec(), kind).map_err(|e| CliError::Validation {
            location: format!("{} (id '{}', side {side})", record.location, record.id),
            message: e.to_string(),
        })
    };
    let p = validated(&record.p, "p")?;
    let q = validated(&record.q, "q")?;
    DistPair::new(p, q).map_err(|e| CliError::Validation {
        location: format!("{} (id '{}')", record.location, record.id),
        message: e.to_string(),
    })
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_divergence(args: &Args) -> Result<CliOutput, CliError> {
    let grid = alphas(args)?;
    let path = args
        .input
        .as_deref()
        .ok_or_else(|| CliError::Config("divergence needs --input".into()))?;
    let records = read_input(path)?;
    let mut rows = Vec::new();
    for record in &records {
        let kind = route_domain(record, args.domain);
        let pair = build_pair(record, kind)?;
        for &alpha in &grid {
            let value = match kind {
                DomainKind::Open => relative_entropy(&pair, alpha),
                DomainKind::Closed => relative_entropy_closed(&pair, alpha),
            }
            .map_err(|e: Error| CliError::Validation {
                location: record.location.clone(),
                message: e.to_string(),
            })?;
            rows.push(DivergenceRow {
                record_id: record.id.clone(),
                alpha: alpha.value(),
                value,
            });
        }
    }
    let echo = config_echo(args);
    let report = match args.format {
        OutputFormat::Json => divergence_json(&echo, &rows),
        OutputFormat::Csv => divergence_csv(&echo, &rows),
    };
    Ok(CliOutput {
        report,
        exit_code: 0,
    })
}

fn measure_set(args: &Args, alpha: Alpha) -> Result<Vec<BuiltinMeasure>, CliError> {
    let to_cli = |e: Error| CliError::Config(e.to_string());
    let mut set = Vec::new();
    if matches!(args.measures, MeasureSet::Standard | MeasureSet::All) {
        set.extend(standard_measures(alpha).map_err(to_cli)?);
    }
    if matches!(args.measures, MeasureSet::Broken | MeasureSet::All) {
        set.extend(negative_controls(alpha).map_err(to_cli)?);
    }
    Ok(set)
}

fn cmd_axioms(args: &Args) -> Result<CliOutput, CliError> {
    let grid = alphas(args)?;
    let tolerance =
        Tolerance::new(args.rel_tol, args.abs_tol).map_err(|e| CliError::Config(e.to_string()))?;

    // results[measure_index][alpha_index]
    let mut names: Vec<String> = Vec::new();
    let mut expected: Vec<Vec<Option<Axiom>>> = Vec::new();
    let mut results: Vec<Vec<Vec<axioms::AxiomReport>>> = Vec::new();
    for (ai, &alpha) in grid.iter().enumerate() {
        let set = measure_set(args, alpha)?;
        for (mi, built) in set.into_iter().enumerate() {
            if ai == 0 {
                names.push(built.measure.name().to_string());
                expected.push(Vec::new());
                results.push(Vec::new());
            }
            let mut config = SuiteConfig::new(axioms::suite_seed(args.seed, mi as u64));
            config.trials = args.trials;
            config.n_max = args.n_max;
            config.tolerance = tolerance;
            config.threads = args.threads;
            let reports = run_axiom_suite(built.measure.as_ref(), alpha, &config)
                .map_err(|e| CliError::Config(e.to_string()))?;
            expected[mi].push(built.expected_failure);
            results[mi].push(reports);
        }
    }

    // Canonical row order: measure, axiom, alpha.
    let mut rows = Vec::new();
    for (mi, name) in names.iter().enumerate() {
        for axiom in Axiom::ALL {
            for (ai, &alpha) in grid.iter().enumerate() {
                if let Some(report) = results[mi][ai].iter().find(|r| r.axiom == axiom) {
                    let expect = if expected[mi][ai] == Some(axiom) {
                        Verdict::Fail
                    } else {
                        Verdict::Pass
                    };
                    rows.push(AxiomRow {
                        measure: name.clone(),
                        alpha: alpha.value(),
                        expected: expect,
                        report: report.clone(),
                    });
                }
            }
        }
    }

    let any_fail = rows.iter().any(|r| r.report.verdict == Verdict::Fail);
    let echo = config_echo(args);
    let report = match args.format {
        OutputFormat::Json => axioms_json(&echo, &rows),
        OutputFormat::Csv => axioms_csv(&echo, &rows),
    };
    Ok(CliOutput {
        report,
        exit_code: if any_fail { 1 } else { 0 },
    })
}

fn cmd_reconstruct(args: &Args) -> Result<CliOutput, CliError> {
    let grid = alphas(args)?;
    let mut rows = Vec::new();
    for &alpha in &grid {
        let f = match args.initial_element {
            InitialElementKind::Divergence => InitialElement::from_divergence(alpha),
            InitialElementKind::Zero => InitialElement::zero(),
            InitialElementKind::Scaled => InitialElement::scaled_divergence(args.gamma, alpha),
        };
        let mut max_vs_div = 0.0f64;
        let mut max_vs_rec = 0.0f64;
        let mut max_abs = 0.0f64;
        let mut ratio_min: Option<f64> = None;
        let mut ratio_max: Option<f64> = None;
        for t in 0..args.trials {
            let n = 2 + (t as usize % (args.n_max - 1));
            let seed = axioms::trial_seed(args.seed, alpha, n as u64, t);
            let mut sampler = SimplexSampler::new(
                SamplerConfig::new(seed, n).with_min_component(RECONSTRUCT_MIN_COMPONENT),
            )
            .map_err(|e| CliError::Config(e.to_string()))?;
            let pair = sampler
                .sample_pair(DomainKind::Open)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let recon =
                reconstruct(&f, alpha, &pair).map_err(|e| CliError::Config(e.to_string()))?;
            let unfolded =
                unfold_recursion(&f, alpha, &pair).map_err(|e| CliError::Config(e.to_string()))?;
            let direct = relative_entropy(&pair, alpha)
                .map_err(|e| CliError::Config(e.to_string()))?
                .value();
            max_vs_div = max_vs_div.max((recon - direct).abs());
            max_vs_rec = max_vs_rec.max((recon - unfolded).abs());
            max_abs = max_abs.max(recon.abs());
            if direct.abs() > RATIO_FLOOR {
                let ratio = recon / direct;
                ratio_min = Some(ratio_min.map_or(ratio, |r| r.min(ratio)));
                ratio_max = Some(ratio_max.map_or(ratio, |r| r.max(ratio)));
            }
        }
        rows.push(ReconstructionRow {
            alpha: alpha.value(),
            pairs: args.trials,
            max_abs_vs_divergence: max_vs_div,
            max_abs_vs_recursion: max_vs_rec,
            max_abs_value: max_abs,
            gamma_ratio_min: ratio_min,
            gamma_ratio_max: ratio_max,
        });
    }
    let echo = config_echo(args);
    let report = match args.format {
        OutputFormat::Json => reconstruction_json(&echo, &rows),
        OutputFormat::Csv => reconstruction_csv(&echo, &rows),
    };
    Ok(CliOutput {
        report,
        exit_code: 0,
    })
}
