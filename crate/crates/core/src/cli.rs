//! The `paramat` command line.
//!
//! Exit codes: 0 success (or entailment holds), 1 entailment fails or an
//! audit finds unexpected discrepancies, 2 usage errors, 3 formula parse
//! errors and invalid matrix files.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::audit::{
    check_logic_pair, reference_value, run_table, verify_witness_suite, AuditReport, Budget,
    Outcome,
};
use crate::formula::{parse, parse_set, BinOp, ParseError};
use crate::matrix::{
    builtin, goedel, load_matrix_file, lukasiewicz, Matrix, MatrixDocument, MatrixError,
};
use crate::para::{self, LogicSpec, ParaError, ParaTheory, DEFAULT_MAX_PREMISES, MAX_PARA_DEPTH};
use crate::semantics::{self, classify};

/// Search directory for `file:` selectors with relative paths.
pub const MATRIX_PATH_VAR: &str = "PARAMAT_MATRIX_PATH";

#[derive(Debug, Parser)]
#[command(
    name = "paramat",
    version,
    about = "Many-valued matrix logics and their paraconsistent transforms"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct LogicArgs {
    /// l3, g3, k3, cl2, ln:<n>, gn:<n> or file:<path>
    #[arg(long, default_value = "l3")]
    logic: String,
    /// How many times the paraconsistent transform is applied
    #[arg(long, default_value_t = 0)]
    para: usize,
}

#[derive(Debug, Args)]
struct MatrixArg {
    /// l3, g3, k3, cl2, ln:<n>, gn:<n> or file:<path>
    #[arg(long, default_value = "l3")]
    logic: String,
}

#[derive(Debug, Args)]
struct FormatArg {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct BudgetArgs {
    /// Random instances per universal claim
    #[arg(long, default_value_t = 500)]
    samples: usize,
    /// Maximum depth of sampled formulas
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Letters available to sampled formulas
    #[arg(long, default_value_t = 3)]
    letters: usize,
    /// Maximum size of sampled premise sets
    #[arg(long, default_value_t = 5)]
    gamma_size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl BudgetArgs {
    fn budget(&self) -> Result<Budget, CliError> {
        let b = Budget {
            samples: self.samples,
            depth: self.depth,
            letters: self.letters,
            gamma_size: self.gamma_size,
            seed: self.seed,
        };
        b.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(b)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether premises entail a conclusion
    Entails {
        #[command(flatten)]
        logic: LogicArgs,
        #[command(flatten)]
        format: FormatArg,
        /// Comma-separated premises; empty for none
        premises: String,
        conclusion: String,
    },
    /// Tautology, contradiction, unsatisfiable or contingent
    Classify {
        #[command(flatten)]
        logic: MatrixArg,
        #[command(flatten)]
        format: FormatArg,
        formula: String,
    },
    /// Whether a premise set is consistent
    Consistent {
        #[command(flatten)]
        logic: LogicArgs,
        #[command(flatten)]
        format: FormatArg,
        premises: String,
    },
    /// Maximal consistent subsets of a premise set
    Mss {
        #[command(flatten)]
        logic: MatrixArg,
        #[command(flatten)]
        format: FormatArg,
        premises: String,
    },
    /// The 16-property table for L3, G3, K3 and their transforms
    Table {
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        format: FormatArg,
    },
    /// The property table with every verdict's method and evidence
    Audit {
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        format: FormatArg,
        /// Audit this matrix and its transform instead of the reference logics
        #[arg(long)]
        logic: Option<String>,
    },
    /// Replay the stored counterexamples for L3, G3 or K3
    Witnesses {
        #[command(flatten)]
        logic: MatrixArg,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Inspect matrices
    Matrix {
        #[command(subcommand)]
        command: MatrixCommand,
    },
}

#[derive(Debug, Subcommand)]
enum MatrixCommand {
    /// Print the truth tables of a matrix
    Show {
        selector: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Built-in matrices and parametric families
    List,
    /// Check a matrix file
    Validate { path: PathBuf },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<ParaError> for CliError {
    fn from(e: ParaError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse(_) | CliError::Matrix(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

fn find_matrix_file(path: &str) -> PathBuf {
    let direct = PathBuf::from(path);
    if direct.exists() || direct.is_absolute() {
        return direct;
    }
    if let Some(dir) = std::env::var_os(MATRIX_PATH_VAR) {
        let dir = Path::new(&dir);
        for candidate in [dir.join(path), dir.join(format!("{path}.matrix"))] {
            if candidate.exists() {
                return candidate;
            }
        }
    }
    direct
}

/// Resolves a logic selector to its matrix.
pub fn resolve_matrix(selector: &str) -> Result<Matrix, CliError> {
    let family = |text: &str, build: fn(usize) -> Result<Matrix, MatrixError>| {
        let n: usize = text
            .parse()
            .map_err(|_| CliError::Usage(format!("`{selector}`: expected a number of values")))?;
        build(n).map_err(|e| CliError::Usage(e.to_string()))
    };
    if let Some(path) = selector.strip_prefix("file:") {
        return Ok(load_matrix_file(find_matrix_file(path))?);
    }
    if let Some(n) = selector.strip_prefix("ln:") {
        return family(n, lukasiewicz);
    }
    if let Some(n) = selector.strip_prefix("gn:") {
        return family(n, goedel);
    }
    builtin(selector).map_err(|_| {
        CliError::Usage(format!(
            "unknown logic `{selector}` (expected l3, g3, k3, cl2, ln:<n>, gn:<n> or file:<path>)"
        ))
    })
}

fn resolve_logic(args: &LogicArgs) -> Result<LogicSpec, CliError> {
    if args.para > MAX_PARA_DEPTH {
        return Err(ParaError::DepthTooLarge(args.para).into());
    }
    Ok(LogicSpec::new(resolve_matrix(&args.logic)?, args.para))
}

fn print_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<(), CliError> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    )?;
    Ok(())
}

/// Runs the command line and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return e.exit_code();
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Entails {
            logic,
            format,
            premises,
            conclusion,
        } => cmd_entails(
            &resolve_logic(&logic)?,
            format.format,
            &premises,
            &conclusion,
            out,
        ),
        Command::Classify {
            logic,
            format,
            formula,
        } => cmd_classify(&resolve_matrix(&logic.logic)?, format.format, &formula, out),
        Command::Consistent {
            logic,
            format,
            premises,
        } => cmd_consistent(&resolve_logic(&logic)?, format.format, &premises, out),
        Command::Mss {
            logic,
            format,
            premises,
        } => cmd_mss(
            &resolve_matrix(&logic.logic)?,
            format.format,
            &premises,
            out,
        ),
        Command::Table { budget, format } => {
            let report = run_table(&budget.budget()?);
            cmd_report(&report, format.format, false, out)
        }
        Command::Audit {
            budget,
            format,
            logic,
        } => {
            let budget = budget.budget()?;
            let report = match logic {
                None => run_table(&budget),
                Some(selector) => check_logic_pair(&resolve_matrix(&selector)?, &budget),
            };
            cmd_report(&report, format.format, true, out)
        }
        Command::Witnesses { logic, format } => cmd_witnesses(
            &LogicSpec::base(resolve_matrix(&logic.logic)?),
            format.format,
            out,
        ),
        Command::Matrix { command } => cmd_matrix(command, out),
    }
}

pub fn cmd_entails(
    spec: &LogicSpec,
    format: Format,
    premises: &str,
    conclusion: &str,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let gamma = parse_set(premises)?;
    let alpha = parse(conclusion)?;
    let (holds, countermodel, witness) = match spec.para_depth {
        0 => {
            let r = semantics::entails(&spec.matrix, &gamma, &alpha);
            (r.holds, r.countermodel, None)
        }
        1 => {
            let r = ParaTheory::with_bound(
                &spec.matrix,
                &gamma,
                alpha.letters(),
                DEFAULT_MAX_PREMISES,
            )?
            .entails_with_witness(&alpha);
            (r.holds, None, r.witness_subset)
        }
        _ => (para::logic_entails(spec, &gamma, &alpha)?, None, None),
    };
    match format {
        Format::Json => print_json(
            out,
            &json!({
                "logic": spec.label(),
                "premises": gamma,
                "conclusion": alpha,
                "holds": holds,
                "countermodel": countermodel,
                "witness_subset": witness,
            }),
        )?,
        Format::Text => {
            writeln!(out, "{}", if holds { "holds" } else { "fails" })?;
            if let Some(v) = countermodel {
                writeln!(out, "countermodel: {v}")?;
            }
            if let Some(w) = witness {
                writeln!(out, "witness subset: {w}")?;
            }
        }
    }
    Ok(if holds { 0 } else { 1 })
}

pub fn cmd_classify(
    m: &Matrix,
    format: Format,
    formula: &str,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let alpha = parse(formula)?;
    let class = classify(m, &alpha);
    match format {
        Format::Json => print_json(
            out,
            &json!({ "logic": m.name(), "formula": alpha, "classification": class }),
        )?,
        Format::Text => writeln!(out, "{class}")?,
    }
    Ok(0)
}

pub fn cmd_consistent(
    spec: &LogicSpec,
    format: Format,
    premises: &str,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let gamma = parse_set(premises)?;
    let consistent = para::logic_consistent(spec, &gamma)?;
    let model = if spec.para_depth == 0 {
        semantics::models(&spec.matrix, &gamma, gamma.letters())
            .expect("letters covered")
            .into_iter()
            .next()
    } else {
        None
    };
    match format {
        Format::Json => print_json(
            out,
            &json!({ "logic": spec.label(), "premises": gamma, "consistent": consistent, "model": model }),
        )?,
        Format::Text => {
            writeln!(
                out,
                "{}",
                if consistent {
                    "consistent"
                } else {
                    "inconsistent"
                }
            )?;
            if let Some(v) = model.filter(|v| v.iter().next().is_some()) {
                writeln!(out, "model: {v}")?;
            }
        }
    }
    Ok(0)
}

pub fn cmd_mss(
    m: &Matrix,
    format: Format,
    premises: &str,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let gamma = parse_set(premises)?;
    let subsets = para::maximal_consistent_subsets(m, &gamma)?;
    match format {
        Format::Json => print_json(
            out,
            &json!({ "logic": m.name(), "premises": gamma, "mss": subsets }),
        )?,
        Format::Text => {
            let shown: Vec<String> = subsets.iter().map(ToString::to_string).collect();
            writeln!(out, "{}", shown.join("; "))?;
        }
    }
    Ok(0)
}

/// Prints a report; exit status 1 when a reference audit has discrepancies
/// beyond the known list.
pub fn cmd_report(
    report: &AuditReport,
    format: Format,
    detailed: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    match format {
        Format::Json => writeln!(out, "{}", report.to_json())?,
        Format::Text => {
            write!(out, "{}", report.render_text())?;
            if detailed {
                writeln!(out)?;
                for &p in &report.properties {
                    for l in &report.logics {
                        let Some(v) = report.verdict(p, l) else {
                            continue;
                        };
                        write!(
                            out,
                            "{}/{l}: {} ({}, {} instances)",
                            p.key(),
                            v.outcome,
                            v.method,
                            v.samples_run
                        )?;
                        if report.reference {
                            if let Some(expected) = reference_value(p, l) {
                                write!(out, " table {}", Outcome::from_bool(expected).symbol())?;
                            }
                        }
                        writeln!(out)?;
                        if let Some(w) = &v.witness {
                            writeln!(out, "    {w}")?;
                        }
                        if let Some(n) = &v.note {
                            writeln!(out, "    note: {n}")?;
                        }
                    }
                }
            }
        }
    }
    Ok(if report.is_clean() { 0 } else { 1 })
}

pub fn cmd_witnesses(
    spec: &LogicSpec,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let report = verify_witness_suite(spec);
    match format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        )?,
        Format::Text => {
            if report.suite.is_none() {
                writeln!(out, "no stored witnesses for {}", spec.matrix.name())?;
            }
            for e in &report.entries {
                writeln!(
                    out,
                    "{} {}: {}",
                    if e.passed { "PASS" } else { "FAIL" },
                    e.name,
                    e.claim
                )?;
            }
            if !report.entries.is_empty() {
                writeln!(out, "{}/{} passed", report.passed(), report.entries.len())?;
            }
        }
    }
    Ok(if report.all_passed() { 0 } else { 1 })
}

const FAMILIES: [(&str, &str); 7] = [
    ("l3", "Lukasiewicz, three values"),
    ("g3", "Goedel, three values"),
    ("k3", "strong Kleene, three values"),
    ("cl2", "classical, two values"),
    ("ln:<n>", "Lukasiewicz, n evenly spaced values (n >= 2)"),
    ("gn:<n>", "Goedel, n evenly spaced values (n >= 2)"),
    ("file:<path>", "JSON matrix document"),
];

/// Truth tables with `x` and `y` descending. The negation column gives
/// `~y` and is filled on the first block of rows only.
pub fn render_truth_table(m: &Matrix) -> String {
    let header = ["x", "y", "~y", "x | y", "x & y", "x -> y"];
    let mut rows: Vec<[String; 6]> = Vec::new();
    for (k, &x) in m.values().iter().rev().enumerate() {
        for &y in m.values().iter().rev() {
            let cell = |op| m.binary(op, x, y).expect("total").to_string();
            rows.push([
                x.to_string(),
                y.to_string(),
                if k == 0 {
                    m.neg(y).expect("total").to_string()
                } else {
                    String::new()
                },
                cell(BinOp::Or),
                cell(BinOp::And),
                cell(BinOp::Imp),
            ]);
        }
    }
    let widths: Vec<usize> = (0..6)
        .map(|c| {
            rows.iter()
                .map(|r| r[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: &[&str]| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        parts.join("  ").trim_end().to_string()
    };
    let designated: Vec<String> = m
        .designated_values()
        .iter()
        .map(ToString::to_string)
        .collect();
    let mut text = format!(
        "{}  values {}  designated {{{}}}\n",
        m.name(),
        m.size(),
        designated.join(", ")
    );
    text.push_str(&line(&header));
    text.push('\n');
    for r in &rows {
        let cells: Vec<&str> = r.iter().map(String::as_str).collect();
        text.push_str(&line(&cells));
        text.push('\n');
    }
    text
}

fn cmd_matrix(command: MatrixCommand, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        MatrixCommand::List => {
            for (name, description) in FAMILIES {
                writeln!(out, "{name:<12} {description}")?;
            }
        }
        MatrixCommand::Show { selector, format } => {
            let m = resolve_matrix(&selector)?;
            match format.format {
                Format::Json => writeln!(out, "{}", MatrixDocument::from_matrix(&m).to_json())?,
                Format::Text => write!(out, "{}", render_truth_table(&m))?,
            }
        }
        MatrixCommand::Validate { path } => {
            let m = load_matrix_file(&path)?;
            writeln!(
                out,
                "valid: {} ({} values, designated {})",
                m.name(),
                m.size(),
                m.designated_values().len()
            )?;
        }
    }
    Ok(0)
}
