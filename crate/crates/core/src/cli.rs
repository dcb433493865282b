//! The `ca analyze` command.
//!
//! Exit codes: 0 success, 1 input or validation error (also output write
//! failures), 2 numeric failure, 64 bad flags.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::association::{extract, flag_positive_only};
use crate::ca::{fit, FitError, Normalization};
use crate::chi::{residuals, ChiError};
use crate::render::{
    biplot, coordinates_csv, emit_report, emit_svg, residuals_csv, summary_csv, RenderError,
};
use crate::table::{parse_long_csv, parse_matrix_csv, ContingencyTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Layout {
    Long,
    Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Artifact {
    Report,
    Svg,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "ca",
    version,
    about = "Correspondence analysis of two-way contingency tables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a correspondence analysis and write report, biplot and tables.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, clap::Args)]
struct AnalyzeArgs {
    /// Input CSV file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "matrix")]
    layout: Layout,
    /// Row field name (long layout).
    #[arg(long)]
    row: Option<String>,
    /// Column field name (long layout).
    #[arg(long)]
    col: Option<String>,
    /// Value field name (long layout).
    #[arg(long)]
    value: Option<String>,
    /// principal, standard or symmetric.
    #[arg(long, default_value = "symmetric")]
    normalization: String,
    /// Biplot axes, 1-based.
    #[arg(long, num_args = 2, value_names = ["X", "Y"], default_values_t = [1usize, 2])]
    dims: Vec<usize>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Artifacts to write.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Artifact::Report, Artifact::Svg, Artifact::Csv])]
    emit: Vec<Artifact>,
    /// Rows shown in the report's dimension summary.
    #[arg(long)]
    display_dims: Option<usize>,
}

/// Fully resolved options for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub layout: Layout,
    /// `(row, col, value)` field names for the long layout.
    pub fields: Option<(String, String, String)>,
    pub normalization: Normalization,
    pub dims: (usize, usize),
    pub output_dir: PathBuf,
    pub emit_report: bool,
    pub emit_svg: bool,
    pub emit_csv: bool,
    pub display_dims: Option<usize>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<FitError> for CliError {
    fn from(e: FitError) -> Self {
        match e {
            FitError::Table(t) => CliError::Input(t.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<ChiError> for CliError {
    fn from(e: ChiError) -> Self {
        match e {
            ChiError::Table(t) => CliError::Input(t.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<RenderError> for CliError {
    fn from(e: RenderError) -> Self {
        match e {
            RenderError::BadDims(..) => CliError::Usage(e.to_string()),
            RenderError::InputMismatch(_) => CliError::Numeric(e.to_string()),
        }
    }
}

fn config_from_args(a: AnalyzeArgs) -> Result<RunConfig, CliError> {
    let normalization: Normalization = a
        .normalization
        .parse()
        .map_err(|e: crate::ca::UnknownNormalization| CliError::Usage(e.to_string()))?;
    let dims = (a.dims[0], a.dims[1]);
    if dims.0 == dims.1 || dims.0 == 0 || dims.1 == 0 {
        return Err(CliError::Usage(format!(
            "--dims must name two distinct axes >= 1, got {} {}",
            dims.0, dims.1
        )));
    }
    let fields = match a.layout {
        Layout::Long => match (a.row, a.col, a.value) {
            (Some(r), Some(c), Some(v)) => Some((r, c, v)),
            _ => {
                return Err(CliError::Usage(
                    "--layout long needs --row, --col and --value".into(),
                ))
            }
        },
        Layout::Matrix => None,
    };
    if a.input.as_os_str().is_empty() {
        return Err(CliError::Usage("--input must not be empty".into()));
    }
    Ok(RunConfig {
        input_path: a.input,
        layout: a.layout,
        fields,
        normalization,
        dims,
        output_dir: a.out,
        emit_report: a.emit.contains(&Artifact::Report),
        emit_svg: a.emit.contains(&Artifact::Svg),
        emit_csv: a.emit.contains(&Artifact::Csv),
        display_dims: a.display_dims,
    })
}

/// Loads and validates the input table named by `config`.
pub fn load_table(config: &RunConfig) -> Result<ContingencyTable, CliError> {
    let path = &config.input_path;
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let parsed = match (&config.layout, &config.fields) {
        (Layout::Long, Some((r, c, v))) => parse_long_csv(&text, r, c, v),
        (Layout::Long, None) => {
            return Err(CliError::Usage(
                "long layout needs row, column and value fields".into(),
            ))
        }
        (Layout::Matrix, _) => parse_matrix_csv(&text),
    };
    parsed
        .and_then(ContingencyTable::validate)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Runs the full pipeline and returns the files to write, in write order.
pub fn build_outputs(config: &RunConfig) -> Result<Vec<(&'static str, String)>, CliError> {
    let table = load_table(config)?;
    let model = fit(&table)?;
    let res = residuals(&table)?;
    let assoc = flag_positive_only(extract(&res));
    // Equal or zero dims were rejected with the flags; the range against K only
    // matters when a biplot is drawn, so a 2x2 table can still get a report.
    let doc = if config.emit_svg {
        Some(biplot(&model, config.normalization, config.dims)?)
    } else {
        None
    };

    let mut files = Vec::new();
    if config.emit_report {
        files.push((
            "report.md",
            emit_report(&model, &res, &assoc, config.display_dims)?,
        ));
    }
    if let Some(doc) = &doc {
        files.push(("biplot.svg", emit_svg(doc)));
    }
    if config.emit_csv {
        files.push((
            "coordinates.csv",
            coordinates_csv(&model, config.normalization),
        ));
        files.push(("residuals.csv", residuals_csv(&res)));
        files.push(("summary.csv", summary_csv(&model)));
        files.push(("associations.csv", assoc.to_csv()));
    }
    Ok(files)
}

/// Writes `files` into `out` via a sibling temporary directory, so a failed
/// run leaves nothing behind.
fn write_outputs(out: &Path, files: &[(&str, String)]) -> Result<(), CliError> {
    let io = |what: &str, p: &Path, e: std::io::Error| {
        CliError::Input(format!("{what} {}: {e}", p.display()))
    };
    let parent = match out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&parent).map_err(|e| io("cannot create", &parent, e))?;
    let tmp = tempfile::Builder::new()
        .prefix(".ca-out-")
        .tempdir_in(&parent)
        .map_err(|e| io("cannot create temporary directory in", &parent, e))?;
    for (name, content) in files {
        let p = tmp.path().join(name);
        fs::write(&p, content).map_err(|e| io("cannot write", &p, e))?;
    }
    if !out.exists() {
        let staged = tmp.keep();
        return fs::rename(&staged, out).map_err(|e| {
            let _ = fs::remove_dir_all(&staged);
            io("cannot create", out, e)
        });
    }
    if !out.is_dir() {
        return Err(CliError::Input(format!(
            "{} is not a directory",
            out.display()
        )));
    }
    for (name, _) in files {
        let dest = out.join(name);
        fs::rename(tmp.path().join(name), &dest).map_err(|e| io("cannot write", &dest, e))?;
    }
    Ok(())
}

/// Runs one analysis; returns the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    match build_outputs(config).and_then(|files| write_outputs(&config.output_dir, &files)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match cli.command {
        Command::Analyze(a) => match config_from_args(a) {
            Ok(cfg) => run(&cfg),
            Err(e) => {
                eprintln!("error: {}", e.message());
                e.exit_code()
            }
        },
    }
}
